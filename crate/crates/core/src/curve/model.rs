use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::Mutex;

use super::place::Place;
use crate::error::{Error, Result};
use crate::ff::{field_of_order, Extension, Fe, FiniteField, Poly};
use crate::DEFAULT_CAP;

/// Long Weierstrass coefficients `[a1, a2, a3, a4, a6]`:
/// `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weierstrass {
    pub a: [Fe; 5],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    ProjectiveLine,
    Elliptic(Weierstrass),
    /// `y^2 = f(x)` in odd characteristic with `f` squarefree.
    Hyperelliptic { f: Poly },
}

/// Smooth projective geometrically connected curve over a finite field.
#[derive(Clone)]
pub struct Curve(Arc<CurveData>);

struct CurveData {
    field: FiniteField,
    model: Model,
    genus: u32,
    descriptor: String,
    places: Mutex<HashMap<u32, Arc<Vec<Place>>>>,
}

impl Curve {
    pub fn new(field: FiniteField, model: Model) -> Result<Curve> {
        let genus = match &model {
            Model::ProjectiveLine => 0,
            Model::Elliptic(w) => {
                if weierstrass_discriminant(&field, w) == 0 {
                    return Err(Error::SingularCurve);
                }
                1
            }
            Model::Hyperelliptic { f } => {
                if !field.is_odd() {
                    return Err(Error::EvenCharacteristic);
                }
                let d = f.deg().unwrap_or(0);
                if d < 3 || !f.is_squarefree(&field) {
                    return Err(Error::SingularCurve);
                }
                ((d - 1) / 2) as u32
            }
        };
        let descriptor = describe(&field, &model);
        Ok(Curve(Arc::new(CurveData {
            field,
            model,
            genus,
            descriptor,
            places: Mutex::new(HashMap::new()),
        })))
    }

    pub fn projective_line(field: FiniteField) -> Curve {
        Curve::new(field, Model::ProjectiveLine).expect("P1 is smooth")
    }

    /// Short Weierstrass `y^2 = x^3 + a x + b`.
    pub fn short_weierstrass(field: FiniteField, a: Fe, b: Fe) -> Result<Curve> {
        Curve::new(field, Model::Elliptic(Weierstrass { a: [0, 0, 0, a, b] }))
    }

    pub fn hyperelliptic(field: FiniteField, f: Poly) -> Result<Curve> {
        Curve::new(field, Model::Hyperelliptic { f })
    }

    /// Parses `p1:q=<q>`, `ell:q=<q>;a=<int>;b=<int>`, `ell2:q=<2^k>;f=<poly>`
    /// or `hyp:q=<q>;f=<poly>`.
    pub fn parse(descriptor: &str, cap: u128) -> Result<Curve> {
        let (kind, rest) = descriptor
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing ':' in curve {descriptor:?}")))?;
        let mut kv = HashMap::new();
        for part in rest.split(';') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad key=value {part:?}")))?;
            if kv.insert(k.trim(), v.trim()).is_some() {
                return Err(Error::Parse(format!("duplicate key {k:?}")));
            }
        }
        let allowed: &[&str] = match kind {
            "p1" => &["q"],
            "ell" => &["q", "a", "b"],
            "ell2" | "hyp" => &["q", "f"],
            _ => return Err(Error::Parse(format!("unknown curve kind {kind:?}"))),
        };
        if let Some(k) = kv.keys().find(|k| !allowed.contains(k)) {
            return Err(Error::Parse(format!("unknown key {k:?} for {kind}")));
        }
        let get = |k: &str| {
            kv.get(k)
                .copied()
                .ok_or_else(|| Error::Parse(format!("missing key {k:?} for {kind}")))
        };
        let q: u64 = get("q")?
            .parse()
            .map_err(|_| Error::Parse(format!("bad field size in {descriptor:?}")))?;
        let field = field_of_order(q, cap)?;
        let int = |k: &str| -> Result<Fe> {
            let v: i64 = get(k)?
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer for {k}")))?;
            if v >= 0 && (v as u64) < q {
                Ok(v as Fe)
            } else {
                Ok(field.from_int(v))
            }
        };
        match kind {
            "p1" => Ok(Curve::projective_line(field)),
            "ell" => {
                let (a, b) = (int("a")?, int("b")?);
                if !field.is_odd() {
                    return Err(Error::EvenCharacteristic);
                }
                Curve::short_weierstrass(field, a, b)
            }
            "ell2" => {
                if field.is_odd() {
                    return Err(Error::Parse("ell2 requires characteristic 2".into()));
                }
                let f = Poly::parse(get("f")?, &field)?;
                if f.deg() != Some(3) || !f.is_monic() {
                    return Err(Error::Parse("ell2 needs a monic cubic f".into()));
                }
                let w = Weierstrass { a: [0, f.coeff(2), 1, f.coeff(1), f.coeff(0)] };
                Curve::new(field, Model::Elliptic(w))
            }
            _ => {
                let f = Poly::parse(get("f")?, &field)?;
                Curve::hyperelliptic(field, f)
            }
        }
    }

    pub fn parse_default(descriptor: &str) -> Result<Curve> {
        Curve::parse(descriptor, DEFAULT_CAP)
    }

    pub fn field(&self) -> &FiniteField {
        &self.0.field
    }

    pub fn q(&self) -> u32 {
        self.0.field.q()
    }

    pub fn model(&self) -> &Model {
        &self.0.model
    }

    pub fn genus(&self) -> u32 {
        self.0.genus
    }

    pub fn descriptor(&self) -> &str {
        &self.0.descriptor
    }

    /// The same equation over `F_{q^n}`.
    pub fn base_change(&self, n: u32) -> Result<Curve> {
        if n == 1 {
            return Ok(self.clone());
        }
        let ext = self.ext(n)?;
        let model = match &self.0.model {
            Model::ProjectiveLine => Model::ProjectiveLine,
            Model::Elliptic(w) => Model::Elliptic(Weierstrass { a: w.a.map(|c| ext.embed(c)) }),
            Model::Hyperelliptic { f } => Model::Hyperelliptic { f: f.map_coeffs(|c| ext.embed(c)) },
        };
        Curve::new(ext.big.clone(), model)
    }

    pub fn is_projective_line(&self) -> bool {
        matches!(self.0.model, Model::ProjectiveLine)
    }

    pub fn weierstrass(&self) -> Option<&Weierstrass> {
        match &self.0.model {
            Model::Elliptic(w) => Some(w),
            _ => None,
        }
    }

    pub fn ext(&self, n: u32) -> Result<Arc<Extension>> {
        self.0.field.extension(n)
    }

    pub(crate) fn place_cache(&self) -> &Mutex<HashMap<u32, Arc<Vec<Place>>>> {
        &self.0.places
    }
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.0.field == other.0.field && self.0.model == other.0.model
    }
}

impl Eq for Curve {}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.descriptor)
    }
}

fn describe(field: &FiniteField, model: &Model) -> String {
    let q = field.q();
    match model {
        Model::ProjectiveLine => format!("p1:q={q}"),
        Model::Elliptic(w) if w.a[0] == 0 && w.a[1] == 0 && w.a[2] == 0 => {
            format!("ell:q={q};a={};b={}", w.a[3], w.a[4])
        }
        Model::Elliptic(w) => {
            let f = Poly::new(vec![w.a[4], w.a[3], w.a[1], 1]);
            format!("ell2:q={q};f={}", f.to_text())
        }
        Model::Hyperelliptic { f } => format!("hyp:q={q};f={}", f.to_text()),
    }
}

pub(crate) fn weierstrass_discriminant(f: &FiniteField, w: &Weierstrass) -> Fe {
    let [a1, a2, a3, a4, a6] = w.a;
    let c = |v: i64| f.from_int(v);
    let m = |x, y| f.mul(x, y);
    let ad = |x, y| f.add(x, y);
    let b2 = ad(m(a1, a1), m(c(4), a2));
    let b4 = ad(m(c(2), a4), m(a1, a3));
    let b6 = ad(m(a3, a3), m(c(4), a6));
    let b8 = f.sub(
        ad(ad(m(m(a1, a1), a6), m(m(c(4), a2), a6)), f.sub(m(a2, m(a3, a3)), m(m(a1, a3), a4))),
        m(a4, a4),
    );
    // -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
    let t1 = f.neg(m(m(b2, b2), b8));
    let t2 = f.neg(m(c(8), m(b4, m(b4, b4))));
    let t3 = f.neg(m(c(27), m(b6, b6)));
    let t4 = m(c(9), m(b2, m(b4, b6)));
    ad(ad(t1, t2), ad(t3, t4))
}
