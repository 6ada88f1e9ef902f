use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::DEFAULT_CAP;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "tsv" => Ok(Format::Tsv),
            _ => Err(Error::Usage(format!("unknown format {s:?}"))),
        }
    }
}

/// Parameters shared by every experiment.  Absent parameters fall back to
/// per-experiment defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub curve: Option<String>,
    pub d: Option<u32>,
    pub dmax: Option<u32>,
    pub m: Option<i64>,
    pub weights: Option<Vec<i64>>,
    pub tower: Option<u32>,
    pub m_max: Option<u32>,
    pub cap: u64,
    pub format: Format,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            curve: None,
            d: None,
            dmax: None,
            m: None,
            weights: None,
            tower: None,
            m_max: None,
            cap: DEFAULT_CAP as u64,
            format: Format::Json,
            out: None,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn with_curve(mut self, descriptor: &str) -> Self {
        self.curve = Some(descriptor.to_string());
        self
    }

    pub fn cap(&self) -> u128 {
        self.cap as u128
    }

    pub fn parse_curve(&self) -> Result<Curve> {
        let d = self.curve.as_deref().ok_or_else(|| Error::Usage("--curve is required".into()))?;
        Curve::parse(d, self.cap())
    }

    /// Fails fast when `size` exceeds the cap.
    pub fn require(&self, size: u128) -> Result<()> {
        crate::error::check_cap(size, self.cap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_and_unknown_keys() {
        let c = ExperimentConfig::from_json(r#"{"curve":"p1:q=3","d":2,"format":"tsv"}"#).unwrap();
        assert_eq!(c.d, Some(2));
        assert_eq!(c.format, Format::Tsv);
        assert_eq!(c.cap(), DEFAULT_CAP);
        let e = ExperimentConfig::from_json(r#"{"curve":"p1:q=3","depth":2}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let back = ExperimentConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn curve_is_required() {
        let e = ExperimentConfig::default().parse_curve().unwrap_err();
        assert!(matches!(e, Error::Usage(_)));
        let c = ExperimentConfig::default().with_curve("ell:q=3;a=1;b=0").parse_curve().unwrap();
        assert_eq!(c.genus(), 1);
    }
}
