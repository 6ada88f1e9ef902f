use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::Mutex;

use super::mumford::{Cantor, Mumford};
use crate::curve::{
    base_place, effective_divisors, places_of_degree, Curve, Divisor, EPoint, EllipticOver, Model, Place, PlaceRep,
};
use crate::error::{check_cap, Error, Result};

/// A divisor class of degree zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Trivial,
    Point(EPoint),
    Mumford(Mumford),
}

impl Class {
    pub fn to_text(&self) -> String {
        match self {
            Class::Trivial => "0".into(),
            Class::Point(EPoint::Inf) => "O".into(),
            Class::Point(EPoint::Aff(x, y)) => format!("({x},{y})"),
            Class::Mumford(m) => m.to_text(),
        }
    }
}

#[derive(Clone)]
enum Law {
    Trivial,
    Elliptic(EllipticOver),
    Hyperelliptic(Cantor),
}

/// `Pic^0(X)(F_q)` with its elements indexed `0..order` (index 0 is the
/// identity), and the degree splitting `Pic = Pic^0 x Z` given by a rational
/// base place.
#[derive(Clone)]
pub struct PicardGroup {
    curve: Curve,
    law: Law,
    elements: Vec<Class>,
    index: HashMap<Class, usize>,
    structure: Vec<u64>,
    exponent: u64,
    base: Place,
    place_classes: Arc<Mutex<HashMap<u32, Arc<Vec<usize>>>>>,
    divisor_classes: Arc<Mutex<HashMap<u32, Arc<Vec<u64>>>>>,
}

impl PicardGroup {
    pub fn new(curve: &Curve) -> Result<PicardGroup> {
        let (law, mut elements) = match curve.model() {
            Model::ProjectiveLine => (Law::Trivial, vec![Class::Trivial]),
            Model::Elliptic(w) => {
                let e = EllipticOver::over_base(w.a, curve.field());
                let pts = e.points().into_iter().map(Class::Point).collect();
                (Law::Elliptic(e), pts)
            }
            Model::Hyperelliptic { .. } => {
                let cantor = Cantor::new(curve).ok_or_else(|| Error::UnsupportedCurve(curve.descriptor().into()))?;
                check_cap((curve.q() as u128).pow(2 * curve.genus()), curve.field().cap())?;
                let els = cantor.elements().into_iter().map(Class::Mumford).collect();
                (Law::Hyperelliptic(cantor), els)
            }
        };
        let identity = match &law {
            Law::Trivial => Class::Trivial,
            Law::Elliptic(_) => Class::Point(EPoint::Inf),
            Law::Hyperelliptic(_) => Class::Mumford(Mumford::zero()),
        };
        elements.sort();
        let pos = elements.iter().position(|c| *c == identity).expect("identity present");
        let id = elements.remove(pos);
        elements.insert(0, id);
        let index = elements.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let base = base_place(curve)?.ok_or_else(|| Error::UnsupportedCurve(curve.descriptor().into()))?;
        if base.degree != 1 {
            return Err(Error::UnsupportedCurve(curve.descriptor().into()));
        }
        let mut g = PicardGroup {
            curve: curve.clone(),
            law,
            elements,
            index,
            structure: Vec::new(),
            exponent: 1,
            base,
            place_classes: Default::default(),
            divisor_classes: Default::default(),
        };
        g.structure = g.compute_structure();
        g.exponent = g.structure.last().copied().unwrap_or(1);
        Ok(g)
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Class] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Class {
        &self.elements[i]
    }

    pub fn index_of(&self, c: &Class) -> usize {
        self.index[c]
    }

    /// Invariant factors `n_1 | n_2 | ... | n_r` (empty for the trivial group).
    pub fn structure(&self) -> &[u64] {
        &self.structure
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// The degree-one place used to split degrees.
    pub fn base_place(&self) -> &Place {
        &self.base
    }

    fn add_classes(&self, a: &Class, b: &Class) -> Class {
        match (&self.law, a, b) {
            (Law::Trivial, _, _) => Class::Trivial,
            (Law::Elliptic(e), Class::Point(p), Class::Point(r)) => Class::Point(e.add(*p, *r)),
            (Law::Hyperelliptic(c), Class::Mumford(x), Class::Mumford(y)) => Class::Mumford(c.add(x, y)),
            _ => unreachable!("classes of a different curve"),
        }
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        self.index[&self.add_classes(&self.elements[i], &self.elements[j])]
    }

    pub fn neg(&self, i: usize) -> usize {
        let c = match (&self.law, &self.elements[i]) {
            (Law::Elliptic(e), Class::Point(p)) => Class::Point(e.neg(*p)),
            (Law::Hyperelliptic(c), Class::Mumford(m)) => Class::Mumford(c.neg(m)),
            (_, c) => c.clone(),
        };
        self.index[&c]
    }

    pub fn mul(&self, i: usize, n: i64) -> usize {
        let mut base = if n < 0 { self.neg(i) } else { i };
        let mut k = n.unsigned_abs();
        let mut acc = 0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut n = 1;
        let mut cur = i;
        while cur != 0 {
            cur = self.add(cur, i);
            n += 1;
        }
        n
    }

    /// Class of `x - deg(x) * base`.
    pub fn class_of_place(&self, place: &Place) -> Result<usize> {
        let c = match (&self.law, &place.rep) {
            (Law::Trivial, _) | (_, PlaceRep::Infinity(_)) => return Ok(0),
            (Law::Elliptic(_), PlaceRep::Point { .. }) => {
                let w = self.curve.weierstrass().unwrap();
                let ext = self.curve.ext(place.degree)?;
                let e = EllipticOver::new(w.a, &ext);
                let mut sum = EPoint::Inf;
                for (x, y) in place.orbit(&self.curve)? {
                    sum = e.add(sum, EPoint::Aff(x, y));
                }
                match sum {
                    EPoint::Inf => Class::Point(EPoint::Inf),
                    EPoint::Aff(x, y) => Class::Point(EPoint::Aff(
                        ext.restrict(x).expect("trace is rational"),
                        ext.restrict(y).expect("trace is rational"),
                    )),
                }
            }
            (Law::Hyperelliptic(c), PlaceRep::Point { .. }) => Class::Mumford(c.class_of_place(&self.curve, place)?),
            _ => unreachable!("place of a different model"),
        };
        Ok(self.index[&c])
    }

    /// Degree-zero part and degree of a divisor: `D ~ class + deg * base`.
    pub fn class_of_divisor(&self, d: &Divisor) -> Result<(usize, i64)> {
        let mut acc = 0;
        for (p, n) in d.terms() {
            acc = self.add(acc, self.mul(self.class_of_place(p)?, n));
        }
        Ok((acc, d.degree()))
    }

    /// Classes of the degree-`e` places, aligned with `places_of_degree`.
    pub fn place_classes(&self, e: u32) -> Result<Arc<Vec<usize>>> {
        if let Some(c) = self.place_classes.lock().get(&e) {
            return Ok(c.clone());
        }
        let places = places_of_degree(&self.curve, e)?;
        let classes = Arc::new(places.iter().map(|p| self.class_of_place(p)).collect::<Result<Vec<_>>>()?);
        self.place_classes.lock().insert(e, classes.clone());
        Ok(classes)
    }

    /// How many effective divisors of degree `d` lie in each class of
    /// `Pic^d = class + d * base`, by exhaustive enumeration.
    pub fn effective_class_counts(&self, d: u32) -> Result<Arc<Vec<u64>>> {
        if let Some(c) = self.divisor_classes.lock().get(&d) {
            return Ok(c.clone());
        }
        let mut lookup = HashMap::new();
        for e in 1..=d {
            let classes = self.place_classes(e)?;
            for (p, &c) in places_of_degree(&self.curve, e)?.iter().zip(classes.iter()) {
                lookup.insert(p.clone(), c);
            }
        }
        let mut counts = vec![0u64; self.order()];
        for div in effective_divisors(&self.curve, d)? {
            let mut acc = 0;
            for (p, n) in div.terms() {
                acc = self.add(acc, self.mul(lookup[p], n));
            }
            counts[acc] += 1;
        }
        let counts = Arc::new(counts);
        self.divisor_classes.lock().insert(d, counts.clone());
        Ok(counts)
    }

    fn compute_structure(&self) -> Vec<u64> {
        let n = self.order() as u64;
        let mut primes = Vec::new();
        let mut r = n;
        let mut p = 2;
        while r > 1 {
            if r.is_multiple_of(p) {
                primes.push(p);
                while r.is_multiple_of(p) {
                    r /= p;
                }
            }
            p += 1;
        }
        let orders: Vec<u64> = (0..self.order()).map(|i| self.element_order(i)).collect();
        // p-parts: number of cyclic factors with exponent >= k is log_p |G[p^k]| - log_p |G[p^{k-1}]|
        let mut factors: Vec<Vec<u64>> = Vec::new();
        for &p in &primes {
            let mut logs = vec![0u32];
            let mut pk = 1u64;
            loop {
                pk *= p;
                let killed = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count() as u64;
                let mut l = 0;
                let mut t = killed;
                while t > 1 {
                    t /= p;
                    l += 1;
                }
                if l == *logs.last().unwrap() {
                    break;
                }
                logs.push(l);
            }
            let mut exps = Vec::new();
            for k in 1..logs.len() {
                let ge_k = logs[k] - logs[k - 1];
                let ge_next = if k + 1 < logs.len() { logs[k + 1] - logs[k] } else { 0 };
                for _ in 0..(ge_k - ge_next) {
                    exps.push(p.pow(k as u32));
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            factors.push(exps);
        }
        let rank = factors.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut out: Vec<u64> = (0..rank)
            .map(|i| factors.iter().map(|f| f.get(i).copied().unwrap_or(1)).product())
            .collect();
        out.reverse();
        out
    }
}

impl std::fmt::Debug for PicardGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Pic0({:?}) = {:?}", self.curve, self.structure)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{effective_divisors, places_of_degree, riemann_roch};
    use crate::zeta::ZetaData;

    #[test]
    fn structures() {
        let cases = [
            ("p1:q=5", vec![]),
            ("ell:q=3;a=1;b=0", vec![4]),
            ("ell2:q=2;f=x^3", vec![3]),
            ("ell:q=5;a=-1;b=0", vec![2, 4]),
        ];
        for (d, s) in cases {
            let g = PicardGroup::new(&Curve::parse_default(d).unwrap()).unwrap();
            assert_eq!(g.structure(), s.as_slice(), "{d}");
        }
        let e = Curve::parse_default("ell:q=3;a=1;b=0").unwrap();
        let g = PicardGroup::new(&e).unwrap();
        assert_eq!(g.element_order(g.index_of(&Class::Point(EPoint::Aff(2, 1)))), 4);
    }

    #[test]
    fn order_matches_class_number() {
        for d in ["p1:q=3", "ell:q=7;a=1;b=3", "ell2:q=4;f=x^3+x+1", "hyp:q=3;f=x^5+2x+1", "hyp:q=5;f=x^5+x+1"] {
            let c = Curve::parse_default(d).unwrap();
            let g = PicardGroup::new(&c).unwrap();
            assert_eq!(g.order() as i128, ZetaData::of_curve(&c).unwrap().class_number(), "{d}");
            assert_eq!(g.structure().iter().product::<u64>(), g.order() as u64);
        }
    }

    #[test]
    fn classes_respect_linear_equivalence() {
        // principal divisors from Riemann-Roch land on the identity
        let c = Curve::parse_default("ell:q=5;a=1;b=1").unwrap();
        let g = PicardGroup::new(&c).unwrap();
        let p1 = places_of_degree(&c, 1).unwrap();
        let p2 = places_of_degree(&c, 2).unwrap();
        let d = Divisor::place(p1[0].clone(), 1).add(&Divisor::place(p2[1].clone(), 1));
        for f in riemann_roch(&c, &d).unwrap() {
            let div = crate::curve::divisor_of_function(&c, &f).unwrap();
            assert_eq!(g.class_of_divisor(&div).unwrap(), (0, 0));
        }
    }

    #[test]
    fn every_class_has_an_effective_representative() {
        // degree 2g-1 divisors hit every class the same number of times
        let c = Curve::parse_default("hyp:q=3;f=x^5+2x+1").unwrap();
        let g = PicardGroup::new(&c).unwrap();
        let mut hits = vec![0usize; g.order()];
        for d in effective_divisors(&c, 3).unwrap() {
            hits[g.class_of_divisor(&d).unwrap().0] += 1;
        }
        assert!(hits.iter().all(|&h| h == hits[0] && h > 0));
    }
}
