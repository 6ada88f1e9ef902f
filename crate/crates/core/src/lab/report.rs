use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

use super::config::{ExperimentConfig, Format};
use crate::error::{Error, Result};

pub const SCHEMA: &str = "tracelab/1";

/// A table of result rows.  When `flag` is set, each row carries a boolean
/// in that column and the report passes only if all of them hold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
    pub rows: Vec<Map<String, Value>>,
}

impl Section {
    pub fn new(name: &str, columns: &[&str], flag: Option<&str>) -> Self {
        Section {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            flag: flag.map(String::from),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, values: Vec<Value>, ok: Option<bool>) {
        assert_eq!(values.len(), self.columns.len(), "row width in section {}", self.name);
        let mut row: Map<String, Value> = self.columns.iter().cloned().zip(values).collect();
        if let Some(f) = &self.flag {
            row.insert(f.clone(), Value::Bool(ok.expect("flagged section needs a flag")));
        }
        self.rows.push(row);
    }

    pub fn pass(&self) -> bool {
        match &self.flag {
            Some(f) => self.rows.iter().all(|r| r[f] == Value::Bool(true)),
            None => true,
        }
    }

    fn write_tsv(&self, out: &mut String) {
        let mut header = self.columns.clone();
        header.extend(self.flag.iter().cloned());
        writeln!(out, "# {}", self.name).unwrap();
        writeln!(out, "{}", header.join("\t")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = header.iter().map(|h| cell(&row[h])).collect();
            writeln!(out, "{}", cells.join("\t")).unwrap();
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub experiment: String,
    pub version: &'static str,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub summary: Map<String, Value>,
    pub sections: Vec<Section>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

impl Report {
    pub fn new(experiment: &str, config: &ExperimentConfig) -> Self {
        Report {
            schema: SCHEMA,
            experiment: experiment.into(),
            version: env!("CARGO_PKG_VERSION"),
            seed: config.seed,
            config: config.clone(),
            summary: Map::new(),
            sections: Vec::new(),
            pass: true,
            duration_ms: None,
        }
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.into(), value.into());
    }

    pub fn add(&mut self, section: Section) {
        self.sections.push(section);
        self.pass = self.sections.iter().all(Section::pass);
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# {} {} {}", self.schema, self.experiment, if self.pass { "pass" } else { "fail" }).unwrap();
        for (k, v) in &self.summary {
            writeln!(out, "# {k}={}", cell(v)).unwrap();
        }
        for s in &self.sections {
            out.push('\n');
            s.write_tsv(&mut out);
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Tsv => self.to_tsv(),
        }
    }

    /// Writes the rendering to `config.out`, or returns it when unset.
    pub fn emit(&self) -> Result<Option<String>> {
        let text = self.render(self.config.format);
        match &self.config.out {
            Some(path) => {
                std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                Ok(None)
            }
            None => Ok(Some(text)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pass_is_conjunction_of_flags() {
        let cfg = ExperimentConfig::default();
        let mut r = Report::new("demo", &cfg);
        let mut s = Section::new("rows", &["d", "lhs"], Some("equal"));
        s.push(vec![json!(0), json!("1")], Some(true));
        r.add(s.clone());
        assert!(r.pass);
        s.push(vec![json!(1), json!("0")], Some(false));
        r.add(s);
        assert!(!r.pass);
        let mut info = Section::new("info", &["x"], None);
        info.push(vec![Value::Null], None);
        assert!(info.pass());
    }

    #[test]
    fn renderings() {
        let cfg = ExperimentConfig::default();
        let mut r = Report::new("demo", &cfg);
        r.note("q", 3);
        let mut s = Section::new("rows", &["d", "lhs"], Some("equal"));
        s.push(vec![json!(2), json!("16")], Some(true));
        r.add(s);
        let tsv = r.to_tsv();
        assert!(tsv.starts_with("# tracelab/1 demo pass\n# q=3\n"));
        assert!(tsv.ends_with("# rows\nd\tlhs\tequal\n2\t16\ttrue\n"));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], "tracelab/1");
        assert_eq!(v["sections"][0]["rows"][0]["equal"], true);
        assert!(v.get("duration_ms").is_none());
        assert!(v["config"].get("out").is_none());
    }

    #[test]
    fn missing_directory_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg =
            ExperimentConfig { out: Some(dir.path().join("absent").join("r.json")), ..Default::default() };
        let e = Report::new("demo", &cfg).emit().unwrap_err();
        assert_eq!(e.exit_code(), 2);
        cfg.out = Some(dir.path().join("r.json"));
        assert_eq!(Report::new("demo", &cfg).emit().unwrap(), None);
        assert!(dir.path().join("r.json").exists());
    }
}
