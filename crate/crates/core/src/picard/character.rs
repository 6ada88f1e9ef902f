use std::sync::Arc;

use super::group::PicardGroup;
use crate::curve::{Divisor, Place};
use crate::error::Result;
use crate::zeta::RingElem;

/// Character of `Pic(X) = Pic^0 x Z`, valued additively in `Z/N`:
/// `chi(D) = values[class(D)] + deg(D) * degree_value`.
#[derive(Clone)]
pub struct TorusCharacter {
    pub id: usize,
    pic: Arc<PicardGroup>,
    n: u32,
    values: Arc<Vec<u32>>,
    degree_value: u32,
}

impl TorusCharacter {
    pub fn new(pic: Arc<PicardGroup>, n: u32, values: Vec<u32>, degree_value: u32, id: usize) -> Self {
        assert_eq!(values.len(), pic.order());
        TorusCharacter { id, pic, n, values: Arc::new(values), degree_value: degree_value % n }
    }

    pub fn trivial(pic: Arc<PicardGroup>) -> Self {
        let n = pic.order();
        TorusCharacter::new(pic, 1, vec![0; n], 0, 0)
    }

    pub fn pic(&self) -> &Arc<PicardGroup> {
        &self.pic
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn degree_value(&self) -> u32 {
        self.degree_value
    }

    pub fn on_class(&self, i: usize) -> u32 {
        self.values[i]
    }

    pub fn on_place(&self, p: &Place) -> Result<u32> {
        let c = self.pic.class_of_place(p)?;
        Ok(((self.values[c] as u64 + p.degree as u64 * self.degree_value as u64) % self.n as u64) as u32)
    }

    pub fn on_divisor(&self, d: &Divisor) -> Result<u32> {
        let (c, deg) = self.pic.class_of_divisor(d)?;
        let n = self.n as i64;
        Ok((self.values[c] as i64 + deg.rem_euclid(n) * self.degree_value as i64).rem_euclid(n) as u32)
    }

    /// `zeta_N^k` as a ring element.
    pub fn root(&self, k: u32) -> RingElem {
        RingElem::root_of_unity(self.n, k as u64)
    }

    pub fn is_trivial(&self) -> bool {
        self.degree_value == 0 && self.is_geometrically_trivial()
    }

    /// Trivial on `Pic^0`, so only the degree direction can be nontrivial.
    pub fn is_geometrically_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn pow(&self, m: i64) -> TorusCharacter {
        let n = self.n as i64;
        let scale = |v: u32| ((v as i64 * m).rem_euclid(n)) as u32;
        TorusCharacter {
            id: self.id,
            pic: self.pic.clone(),
            n: self.n,
            values: Arc::new(self.values.iter().map(|&v| scale(v)).collect()),
            degree_value: scale(self.degree_value),
        }
    }

    pub fn mul(&self, o: &TorusCharacter) -> TorusCharacter {
        let n = lcm(self.n, o.n);
        let (a, b) = (n / self.n, n / o.n);
        TorusCharacter {
            id: self.id,
            pic: self.pic.clone(),
            n,
            values: Arc::new(self.values.iter().zip(o.values.iter()).map(|(&x, &y)| (x * a + y * b) % n).collect()),
            degree_value: (self.degree_value * a + o.degree_value * b) % n,
        }
    }

    /// Multiplicative order in the character group.
    pub fn order(&self) -> u32 {
        (1..=self.n).find(|&k| self.pow(k as i64).is_trivial()).unwrap()
    }

    pub fn label(&self) -> String {
        format!("chi{}", self.id)
    }
}

impl std::fmt::Debug for TorusCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}[N={}; deg={}; {:?}]", self.label(), self.n, self.degree_value, self.values)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// All characters of `Pic^0`, built by extending over one new element at a
/// time, crossed with the `degree_order` choices of value on the base place.
pub fn characters(pic: &Arc<PicardGroup>, degree_order: u32) -> Vec<TorusCharacter> {
    let n = lcm(pic.exponent() as u32, degree_order.max(1));
    let size = pic.order();
    let mut partial = vec![vec![None; size]];
    partial[0][0] = Some(0u32);
    for g in 0..size {
        let mut next = Vec::new();
        for chi in partial {
            if chi[g].is_some() {
                next.push(chi);
                continue;
            }
            // smallest m with m g in the current subgroup
            let mut m = 1u32;
            let mut cur = g;
            while chi[cur].is_none() {
                cur = pic.add(cur, g);
                m += 1;
            }
            let target = chi[cur].unwrap();
            let members: Vec<(usize, u32)> =
                chi.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v))).collect();
            for c in 0..n {
                if (c as u64 * m as u64) % n as u64 != target as u64 {
                    continue;
                }
                let mut ext = chi.clone();
                let mut shift = 0usize;
                let mut shift_val = 0u32;
                for _ in 1..m {
                    shift = pic.add(shift, g);
                    shift_val = (shift_val + c) % n;
                    for &(h, v) in &members {
                        ext[pic.add(h, shift)] = Some((v + shift_val) % n);
                    }
                }
                next.push(ext);
            }
        }
        partial = next;
    }
    let step = n / degree_order.max(1);
    let mut out = Vec::new();
    for chi in &partial {
        let values: Vec<u32> = chi.iter().map(|v| v.unwrap()).collect();
        for k in 0..degree_order.max(1) {
            let id = out.len();
            out.push(TorusCharacter::new(pic.clone(), n, values.clone(), k * step, id));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;

    fn pic(d: &str) -> Arc<PicardGroup> {
        Arc::new(PicardGroup::new(&Curve::parse_default(d).unwrap()).unwrap())
    }

    #[test]
    fn character_counts() {
        assert_eq!(characters(&pic("p1:q=3"), 1).len(), 1);
        assert!(characters(&pic("p1:q=3"), 1)[0].is_trivial());
        assert_eq!(characters(&pic("ell:q=3;a=1;b=0"), 1).len(), 4);
        assert_eq!(characters(&pic("ell:q=3;a=1;b=0"), 2).len(), 8);
        assert_eq!(characters(&pic("ell:q=5;a=-1;b=0"), 1).len(), 8);
    }

    #[test]
    fn characters_are_distinct_homomorphisms() {
        for d in ["ell:q=5;a=-1;b=0", "hyp:q=3;f=x^5+2x+1", "ell:q=7;a=1;b=3"] {
            let g = pic(d);
            let chars = characters(&g, 1);
            assert_eq!(chars.len(), g.order());
            let n = chars[0].modulus();
            for chi in &chars {
                for i in 0..g.order() {
                    for j in 0..g.order() {
                        assert_eq!(chi.on_class(g.add(i, j)), (chi.on_class(i) + chi.on_class(j)) % n);
                    }
                }
            }
            let mut tables: Vec<_> = chars.iter().map(|c| c.values.clone()).collect();
            tables.sort();
            tables.dedup();
            assert_eq!(tables.len(), chars.len());
        }
    }

    #[test]
    fn orthogonality() {
        let g = pic("ell:q=5;a=-1;b=0");
        for chi in characters(&g, 1) {
            let mut s = RingElem::zero();
            for i in 0..g.order() {
                s.add_assign(&chi.root(chi.on_class(i)));
            }
            if chi.is_trivial() {
                assert_eq!(s, RingElem::int(g.order() as i128));
            } else {
                assert!(s.is_zero());
            }
        }
    }
}
