use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;

use super::character::TorusCharacter;
use super::group::PicardGroup;
use crate::curve::effective_divisors;
use crate::error::Result;
use crate::zeta::{l_series_product, GradedLocalSystem, RingElem, ZetaData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvalueCheck {
    pub lhs: RingElem,
    pub rhs: RingElem,
    pub equal: bool,
}

/// `sum_{D in X_d} chi(mD)` by enumeration against the `t^d` coefficient of
/// the Euler product of `chi^m`.
pub fn eigenvalue_check(chi: &TorusCharacter, m: i64, d: u32) -> Result<EigenvalueCheck> {
    let lhs = divisor_sum(chi, m, d)?;
    let series = l_series_product(&GradedLocalSystem::single(chi.pow(m)), d as usize)?;
    let rhs = series[d as usize].clone();
    let equal = lhs == rhs;
    Ok(EigenvalueCheck { lhs, rhs, equal })
}

fn divisor_sum(chi: &TorusCharacter, m: i64, d: u32) -> Result<RingElem> {
    let n = chi.modulus() as i64;
    let mut counts = vec![0i128; n as usize];
    for div in effective_divisors(chi.pic().curve(), d)? {
        let k = (chi.on_divisor(&div)? as i64 * m).rem_euclid(n);
        counts[k as usize] += 1;
    }
    let mut s = RingElem::zero();
    for (k, c) in counts.into_iter().enumerate() {
        if c != 0 {
            s.add_assign(&chi.root(k as u32).scale(c));
        }
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingScan {
    pub nonzero: Vec<u32>,
    /// `2g - 2` when `chi^m` is nontrivial on `Pic^0`.
    pub bound: Option<u32>,
}

impl VanishingScan {
    pub fn holds(&self) -> bool {
        match self.bound {
            Some(b) => self.nonzero.iter().all(|&d| d <= b),
            None => true,
        }
    }
}

pub fn vanishing_scan(chi: &TorusCharacter, m: i64, ds: impl IntoIterator<Item = u32>) -> Result<VanishingScan> {
    let g = chi.pic().curve().genus();
    let bound = (!chi.pow(m).is_geometrically_trivial()).then(|| (2 * g).saturating_sub(2));
    let mut nonzero = Vec::new();
    for d in ds {
        if !divisor_sum(chi, m, d)?.is_zero() {
            nonzero.push(d);
        }
    }
    Ok(VanishingScan { nonzero, bound })
}

/// `q^{-(g-1)} zeta~(1)^{-1} #{sigma}` with `zeta~(1)^{-1} = q^{g-1}(q-1)/P(1)`
/// and `#{sigma} = |Pic^0|` by enumeration.
pub fn gl1_relative_trace(pic: &PicardGroup, zeta: &ZetaData) -> Ratio<i128> {
    let q = zeta.q() as i128;
    let g = zeta.genus();
    let qg = Ratio::from_integer(q.pow(g.saturating_sub(1)));
    let qg = if g == 0 { Ratio::new(1, q) } else { qg };
    let inv_zeta = qg * Ratio::from_integer(q - 1) / Ratio::from_integer(zeta.class_number());
    inv_zeta / qg * Ratio::from_integer(pic.order() as i128)
}

/// Hecke kernel of `Sym^d` of the torus representation with the given
/// weights: the multiset of translations `sum_j m_j D_j` over tuples of
/// effective divisors of total degree `d`, as `(Pic^0 class, degree)`.
#[derive(Clone, Debug)]
pub struct HeckeKernelTable {
    pic: Arc<PicardGroup>,
    d: u32,
    weights: Vec<i64>,
    translations: BTreeMap<(usize, i64), u64>,
}

pub fn build_kernel(pic: &Arc<PicardGroup>, d: u32, weights: &[i64]) -> Result<HeckeKernelTable> {
    assert!(!weights.is_empty());
    let curve = pic.curve();
    // translation multisets of a single weight, by degree
    let mut single: Vec<Vec<BTreeMap<(usize, i64), u64>>> = vec![Vec::new(); weights.len()];
    for e in 0..=d {
        let divs = effective_divisors(curve, e)?;
        let classes: Vec<(usize, i64)> = divs.iter().map(|dv| pic.class_of_divisor(dv)).collect::<Result<_>>()?;
        for (j, &m) in weights.iter().enumerate() {
            let mut t = BTreeMap::new();
            for &(c, deg) in &classes {
                *t.entry((pic.mul(c, m), deg * m)).or_insert(0) += 1;
            }
            single[j].push(t);
        }
    }
    // convolve over compositions of d
    let mut acc: Vec<BTreeMap<(usize, i64), u64>> = single[0].clone();
    for table in &single[1..] {
        let mut next = vec![BTreeMap::new(); d as usize + 1];
        for (e1, a) in acc.iter().enumerate() {
            for (e2, b) in table.iter().enumerate().take(d as usize + 1 - e1) {
                for (&(c1, k1), &n1) in a {
                    for (&(c2, k2), &n2) in b {
                        *next[e1 + e2].entry((pic.add(c1, c2), k1 + k2)).or_insert(0) += n1 * n2;
                    }
                }
            }
        }
        acc = next;
    }
    Ok(HeckeKernelTable {
        pic: pic.clone(),
        d,
        weights: weights.to_vec(),
        translations: acc.swap_remove(d as usize),
    })
}

impl HeckeKernelTable {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn translations(&self) -> &BTreeMap<(usize, i64), u64> {
        &self.translations
    }

    pub fn mass(&self) -> u64 {
        self.translations.values().sum()
    }

    /// `K(x, y)` for classes `x, y` of `Pic = Pic^0 x Z`.
    pub fn entry(&self, x: (usize, i64), y: (usize, i64)) -> u64 {
        let t = (self.pic.add(y.0, self.pic.neg(x.0)), y.1 - x.1);
        self.translations.get(&t).copied().unwrap_or(0)
    }

    /// `sum_y K(x, y)` over `y` of degree `deg x + shift`.
    pub fn row_sum(&self, x: (usize, i64), shift: i64) -> u64 {
        (0..self.pic.order()).map(|c| self.entry(x, (c, x.1 + shift))).sum()
    }

    /// Eigenvalue of the kernel on the function `chi`.
    pub fn action(&self, chi: &TorusCharacter) -> RingElem {
        let n = chi.modulus() as i64;
        let mut s = RingElem::zero();
        for (&(c, deg), &k) in &self.translations {
            let v = (chi.on_class(c) as i64 + deg.rem_euclid(n) * chi.degree_value() as i64).rem_euclid(n);
            s.add_assign(&chi.root(v as u32).scale(k as i128));
        }
        s
    }

    /// `sum_x K(x, x)` over `Pic^e` for one `e`; the same for every `e`.
    pub fn diagonal_trace(&self) -> u64 {
        self.pic.order() as u64 * self.translations.get(&(0, 0)).copied().unwrap_or(0)
    }
}
