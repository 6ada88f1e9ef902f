use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::model::{Curve, Model};
use super::points::affine_points;
use crate::error::{check_cap, Result};
use crate::ff::{monic_irreducibles, Fe, Poly};

/// Representative data of a closed point.
///
/// Points of elliptic and hyperelliptic curves are stored as the smallest
/// element of their Frobenius orbit in `F_{q^n}`, so structural equality
/// is orbit equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceRep {
    Poly(Poly),
    Point { x: Fe, y: Fe },
    Infinity(u8),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    pub degree: u32,
    pub rep: PlaceRep,
}

impl Place {
    pub fn infinity(degree: u32) -> Place {
        Place { degree, rep: PlaceRep::Infinity(0) }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.rep, PlaceRep::Infinity(_))
    }

    /// The `n` conjugate points of an affine place over `F_{q^n}`.
    pub fn orbit(&self, curve: &Curve) -> Result<Vec<(Fe, Fe)>> {
        match self.rep {
            PlaceRep::Point { x, y } => {
                let ext = curve.ext(self.degree)?;
                let mut out = Vec::with_capacity(self.degree as usize);
                let (mut a, mut b) = (x, y);
                for _ in 0..self.degree {
                    out.push((a, b));
                    a = ext.frob(a);
                    b = ext.frob(b);
                }
                Ok(out)
            }
            _ => Ok(Vec::new()),
        }
    }

    pub fn name(&self) -> String {
        match &self.rep {
            PlaceRep::Poly(p) => compact_poly(p),
            PlaceRep::Point { x, y } if self.degree == 1 => format!("({x},{y})"),
            PlaceRep::Point { x, y } => format!("({x},{y})@{}", self.degree),
            PlaceRep::Infinity(0) => "inf".into(),
            PlaceRep::Infinity(i) => format!("inf{i}"),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.name())
    }
}

/// Polynomial text with unit coefficients elided, e.g. `x^2+x+1`.
pub fn compact_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (e, &c) in p.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('+');
        }
        let coef = if c == 1 && e > 0 { String::new() } else { c.to_string() };
        match e {
            0 => s.push_str(&coef),
            1 => s.push_str(&format!("{coef}x")),
            _ => s.push_str(&format!("{coef}x^{e}")),
        }
    }
    s
}

/// All places of exact degree `n`, in deterministic order.
pub fn places_of_degree(curve: &Curve, n: u32) -> Result<Arc<Vec<Place>>> {
    if let Some(p) = curve.place_cache().lock().get(&n) {
        return Ok(p.clone());
    }
    let size = (curve.q() as u128).checked_pow(n).unwrap_or(u128::MAX);
    check_cap(size, curve.field().cap())?;
    let mut places = Vec::new();
    match curve.model() {
        Model::ProjectiveLine => {
            places.extend(
                monic_irreducibles(curve.field(), n as usize)
                    .map(|p| Place { degree: n, rep: PlaceRep::Poly(p) }),
            );
        }
        _ => {
            let ext = curve.ext(n)?;
            let mut seen = BTreeSet::new();
            for (x, y) in affine_points(curve, n)? {
                let mut orbit = vec![(x, y)];
                let (mut a, mut b) = (ext.frob(x), ext.frob(y));
                while (a, b) != (x, y) {
                    orbit.push((a, b));
                    a = ext.frob(a);
                    b = ext.frob(b);
                }
                if orbit.len() as u32 == n {
                    let &(mx, my) = orbit.iter().min().unwrap();
                    seen.insert((mx, my));
                }
            }
            places.extend(seen.into_iter().map(|(x, y)| Place { degree: n, rep: PlaceRep::Point { x, y } }));
        }
    }
    places.extend(infinite_places(curve).into_iter().filter(|p| p.degree == n));
    let places = Arc::new(places);
    curve.place_cache().lock().insert(n, places.clone());
    Ok(places)
}

/// The place through the affine point `(x, y)` with coordinates in `F_{q^n}`.
pub fn place_of_point(curve: &Curve, n: u32, x: Fe, y: Fe) -> Result<Place> {
    let ext = curve.ext(n)?;
    let mut orbit = vec![(x, y)];
    let (mut a, mut b) = (ext.frob(x), ext.frob(y));
    while (a, b) != (x, y) {
        orbit.push((a, b));
        a = ext.frob(a);
        b = ext.frob(b);
    }
    let m = orbit.len() as u32;
    if m < n {
        let map = curve.field().subfield_map(m, n)?;
        for pt in orbit.iter_mut() {
            *pt = (map.down(pt.0).expect("orbit lies in subfield"), map.down(pt.1).expect("orbit lies in subfield"));
        }
    }
    let &(x, y) = orbit.iter().min().unwrap();
    Ok(Place { degree: m, rep: PlaceRep::Point { x, y } })
}

/// Places above infinity of the chosen model.
pub fn infinite_places(curve: &Curve) -> Vec<Place> {
    match curve.model() {
        Model::Hyperelliptic { f } if f.deg().unwrap_or(0) % 2 == 0 => {
            if curve.field().is_square(f.lc()) {
                vec![
                    Place { degree: 1, rep: PlaceRep::Infinity(0) },
                    Place { degree: 1, rep: PlaceRep::Infinity(1) },
                ]
            } else {
                vec![Place::infinity(2)]
            }
        }
        _ => vec![Place::infinity(1)],
    }
}

/// A rational place used to split degrees (the point at infinity when it
/// is rational, else the first degree-one place).
pub fn base_place(curve: &Curve) -> Result<Option<Place>> {
    let inf = infinite_places(curve);
    if let Some(p) = inf.iter().find(|p| p.degree == 1) {
        return Ok(Some(p.clone()));
    }
    Ok(places_of_degree(curve, 1)?.first().cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::points::point_count;

    #[test]
    fn projective_line_places() {
        let c = Curve::parse_default("p1:q=2").unwrap();
        let names: Vec<_> = places_of_degree(&c, 1).unwrap().iter().map(|p| p.name()).collect();
        assert_eq!(names, ["x", "x+1", "inf"]);
        let deg2 = places_of_degree(&c, 2).unwrap();
        assert_eq!(deg2.len(), 1);
        assert_eq!(deg2[0].name(), "x^2+x+1");
    }

    #[test]
    fn points_over_larger_fields_find_their_place() {
        let c = Curve::parse_default("ell2:q=4;f=x^3+x+1").unwrap();
        for deg in 1..=2u32 {
            let places = places_of_degree(&c, deg).unwrap();
            for (x, y) in affine_points(&c, 4).unwrap() {
                let p = place_of_point(&c, 4, x, y).unwrap();
                if p.degree == deg {
                    assert!(places.contains(&p));
                }
            }
        }
    }

    #[test]
    fn elliptic_degree_two_places() {
        let c = Curve::parse_default("ell:q=3;a=1;b=0").unwrap();
        assert_eq!(places_of_degree(&c, 2).unwrap().len(), 6);
    }

    #[test]
    fn places_sum_to_point_counts() {
        for d in ["p1:q=3", "ell:q=3;a=1;b=0", "ell2:q=2;f=x^3", "hyp:q=3;f=x^5+2x+1", "hyp:q=5;f=2x^6+x+1", "hyp:q=3;f=x^4+x+2"] {
            let c = Curve::parse_default(d).unwrap();
            for n in 1..=4u32 {
                let total: u64 = (1..=n)
                    .filter(|e| n % e == 0)
                    .map(|e| e as u64 * places_of_degree(&c, e).unwrap().len() as u64)
                    .sum();
                assert_eq!(total, point_count(&c, n).unwrap(), "{d} n={n}");
            }
        }
    }
}
