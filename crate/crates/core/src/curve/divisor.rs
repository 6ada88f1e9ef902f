use std::collections::BTreeMap;
use std::fmt;

use super::model::Curve;
use super::place::{places_of_degree, Place};
use crate::error::{check_cap, Result};

/// Finite formal sum of places; zero multiplicities are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn place(p: Place, n: i64) -> Self {
        let mut d = Self::zero();
        d.add_place(p, n);
        d
    }

    pub fn add_place(&mut self, p: Place, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, &n)| (p, n))
    }

    pub fn multiplicity(&self, p: &Place) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(p, &n)| n * p.degree as i64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&n| n > 0)
    }

    pub fn add(&self, o: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, n) in o.terms() {
            d.add_place(p.clone(), n);
        }
        d
    }

    pub fn scale(&self, k: i64) -> Divisor {
        if k == 0 {
            return Divisor::zero();
        }
        Divisor { terms: self.terms.iter().map(|(p, &n)| (p.clone(), n * k)).collect() }
    }

    pub fn sub(&self, o: &Divisor) -> Divisor {
        self.add(&o.scale(-1))
    }

    /// Positive part and negated negative part.
    pub fn split(&self) -> (Divisor, Divisor) {
        let mut pos = Divisor::zero();
        let mut neg = Divisor::zero();
        for (p, n) in self.terms() {
            if n > 0 {
                pos.add_place(p.clone(), n);
            } else {
                neg.add_place(p.clone(), -n);
            }
        }
        (pos, neg)
    }

    /// `sum floor(n_x / 2) deg x` over the support.
    pub fn half_floor_degree(&self) -> i64 {
        self.terms.iter().map(|(p, &n)| n.div_euclid(2) * p.degree as i64).sum()
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(p, n)| format!("{n}*{p}"))
            .collect::<Vec<_>>()
            .join("+")
            .replace("+-", "-")
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `#X_d` from the place counts: coefficient of `t^d` in
/// `prod_e (1 - t^e)^{-#places(e)}`.
pub fn effective_divisor_count(curve: &Curve, d: u32) -> Result<u128> {
    let mut series = vec![0u128; d as usize + 1];
    series[0] = 1;
    for e in 1..=d {
        let count = places_of_degree(curve, e)?.len();
        for _ in 0..count {
            // multiply by 1/(1 - t^e)
            for i in e as usize..=d as usize {
                series[i] += series[i - e as usize];
            }
        }
    }
    Ok(series[d as usize])
}

/// Every effective divisor of degree `d`, each exactly once, sorted.
pub fn effective_divisors(curve: &Curve, d: u32) -> Result<Vec<Divisor>> {
    check_cap(effective_divisor_count(curve, d)?, curve.field().cap())?;
    let mut places = Vec::new();
    for e in 1..=d {
        places.extend(places_of_degree(curve, e)?.iter().cloned());
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    rec(&places, 0, d, &mut cur, &mut out);
    out.sort();
    Ok(out)
}

fn rec(places: &[Place], start: usize, left: u32, cur: &mut Vec<(Place, i64)>, out: &mut Vec<Divisor>) {
    if left == 0 {
        let mut d = Divisor::zero();
        for (p, n) in cur.iter() {
            d.add_place(p.clone(), *n);
        }
        out.push(d);
        return;
    }
    for i in start..places.len() {
        let deg = places[i].degree;
        if deg > left {
            continue;
        }
        let mut m = 1;
        while m * deg <= left {
            cur.push((places[i].clone(), m as i64));
            rec(places, i + 1, left - m * deg, cur, out);
            cur.pop();
            m += 1;
        }
    }
}
