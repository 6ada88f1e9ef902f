use std::collections::HashMap;

use rayon::prelude::*;

use super::base::{discriminant, hitchin_base_enumerate, require_odd};
use crate::curve::{effective_divisor_count, Curve};
use crate::error::{check_cap, Error, Result};
use crate::ff::{factor, Fe, FiniteField, Poly};
use crate::picard::PicardGroup;

/// Per-`delta` counts of the reduced locus over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataLevel {
    pub q: u64,
    pub counts: Vec<u128>,
    /// Points with `b = +-2`.
    pub non_reduced: u128,
}

impl StrataLevel {
    pub fn reduced(&self) -> u128 {
        self.counts.iter().sum()
    }

    pub fn total(&self) -> u128 {
        self.reduced() + self.non_reduced
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StratumFit {
    pub delta: usize,
    pub expected: i64,
    /// `log(c_n / c_{n-1}) / log(q_n / q_{n-1})` for consecutive levels.
    pub estimates: Vec<Option<f64>>,
    /// Only strata with `delta <= d - 2g + 1` are asserted.
    pub checked: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stratification {
    pub d: u32,
    pub genus: u32,
    pub levels: Vec<StrataLevel>,
    pub fits: Vec<StratumFit>,
}

pub const EXPONENT_TOLERANCE: f64 = 0.5;

pub fn growth_exponent(c0: u128, c1: u128, q0: u64, q1: u64) -> Option<f64> {
    (c0 > 0 && c1 > 0).then(|| (c1 as f64 / c0 as f64).ln() / (q1 as f64 / q0 as f64).ln())
}

impl Stratification {
    pub fn pass(&self) -> bool {
        self.fits.iter().all(|f| f.pass)
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("q\td\tdelta\tcount\test_dim\n");
        for (i, level) in self.levels.iter().enumerate() {
            for (delta, &c) in level.counts.iter().enumerate() {
                let est = match i {
                    0 => "-".to_string(),
                    _ => match growth_exponent(self.levels[i - 1].counts[delta], c, self.levels[i - 1].q, level.q) {
                        Some(e) => format!("{e:.3}"),
                        None => "-".to_string(),
                    },
                };
                s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", level.q, self.d, delta, c, est));
            }
        }
        s
    }
}

/// Histogram of `delta` over `A_d(F_q)`; uses the factorised form on the
/// projective line and the generic discriminant otherwise.
pub fn strata_histogram(curve: &Curve, d: u32) -> Result<StrataLevel> {
    require_odd(curve)?;
    if curve.is_projective_line() {
        projective_histogram(curve.field(), d)
    } else {
        generic_histogram(curve, d)
    }
}

pub fn generic_histogram(curve: &Curve, d: u32) -> Result<StrataLevel> {
    let mut counts = vec![0u128; d as usize + 1];
    let mut non_reduced = 0;
    for pt in hitchin_base_enumerate(curve, d)? {
        match discriminant(curve, &pt) {
            Ok(r) => counts[r.delta as usize] += 1,
            Err(Error::NonReducedSpectralCurve) => non_reduced += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(StrataLevel { q: curve.q() as u64, counts, non_reduced })
}

/// Divisor of a binary form of degree `d` as `(place id, degree, multiplicity)`,
/// with id 0 for infinity.
type FormDivisor = Vec<(u32, u32, u32)>;

fn form_divisors(f: &FiniteField, d: u32) -> Result<Vec<FormDivisor>> {
    let q = f.q() as usize;
    let size = q.pow(d + 1);
    let mut ids: HashMap<Poly, u32> = HashMap::new();
    let mut out = vec![Vec::new(); size];
    for (idx, slot) in out.iter_mut().enumerate().skip(1) {
        let p = Poly::new(digits(idx, q, d as usize + 1));
        let mut div = Vec::new();
        let inf = d as i64 - p.degree_i();
        if inf > 0 {
            div.push((0, 1, inf as u32));
        }
        for (r, m) in factor(&p, f)?.1 {
            let next = ids.len() as u32 + 1;
            let id = *ids.entry(r.clone()).or_insert(next);
            div.push((id, r.deg().unwrap() as u32, m));
        }
        div.sort_unstable();
        *slot = div;
    }
    Ok(out)
}

fn digits(mut idx: usize, q: usize, len: usize) -> Vec<Fe> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push((idx % q) as Fe);
        idx /= q;
    }
    v
}

fn index(v: &[Fe], q: usize) -> usize {
    v.iter().rev().fold(0, |acc, &c| acc * q + c as usize)
}

/// `sum_x floor((u_x + v_x) / 2) deg x`.
fn merged_delta(u: &FormDivisor, v: &FormDivisor) -> u32 {
    let (mut i, mut j, mut delta) = (0, 0, 0);
    while i < u.len() || j < v.len() {
        let take_u = j == v.len() || (i < u.len() && u[i].0 < v[j].0);
        let take_v = i == u.len() || (j < v.len() && v[j].0 < u[i].0);
        if take_u {
            delta += (u[i].2 / 2) * u[i].1;
            i += 1;
        } else if take_v {
            delta += (v[j].2 / 2) * v[j].1;
            j += 1;
        } else {
            delta += ((u[i].2 + v[j].2) / 2) * u[i].1;
            i += 1;
            j += 1;
        }
    }
    delta
}

/// On the projective line `D` is a binary form `H` of degree `d` up to
/// scalars and `b = A / H`; then `b^2 - 4 = (A - 2H)(A + 2H) / H^2` and
/// `discr(D, b)` is the divisor of the binary form `(A - 2H)(A + 2H)`.
fn projective_histogram(f: &FiniteField, d: u32) -> Result<StrataLevel> {
    let q = f.q() as usize;
    let len = d as usize + 1;
    check_cap((q as u128).pow(len as u32), f.cap())?;
    let table = form_divisors(f, d)?;
    let two = f.from_int(2);
    // forms whose highest nonzero coefficient is 1
    let forms: Vec<usize> = (1..q.pow(len as u32))
        .filter(|&i| {
            let v = digits(i, q, len);
            v.iter().rev().find(|&&c| c != 0) == Some(&1)
        })
        .collect();
    let (counts, non_reduced) = forms
        .par_iter()
        .map(|&h| {
            let hv = digits(h, q, len);
            let h2: Vec<Fe> = hv.iter().map(|&c| f.mul(two, c)).collect();
            let mut counts = vec![0u128; len];
            let mut non_reduced = 0u128;
            let mut a = vec![0 as Fe; len];
            let mut u = vec![0 as Fe; len];
            let mut v = vec![0 as Fe; len];
            for ai in 0..q.pow(len as u32) {
                let mut k = ai;
                for c in a.iter_mut() {
                    *c = (k % q) as Fe;
                    k /= q;
                }
                for i in 0..len {
                    u[i] = f.sub(a[i], h2[i]);
                    v[i] = f.add(a[i], h2[i]);
                }
                let (ui, vi) = (index(&u, q), index(&v, q));
                if ui == 0 || vi == 0 {
                    non_reduced += 1;
                } else {
                    counts[merged_delta(&table[ui], &table[vi]) as usize] += 1;
                }
            }
            (counts, non_reduced)
        })
        .reduce(
            || (vec![0u128; len], 0),
            |(mut a, n), (b, m)| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                (a, n + m)
            },
        );
    Ok(StrataLevel { q: q as u64, counts, non_reduced })
}

/// Histograms over `F_q, ..., F_{q^tower}` with growth-exponent fits
/// against `2d - g + 1 - delta`.
pub fn stratify(curve: &Curve, d: u32, tower: u32) -> Result<Stratification> {
    require_odd(curve)?;
    let g = curve.genus();
    let q = curve.q() as u128;
    let top = q.checked_pow(tower).unwrap_or(u128::MAX);
    check_cap(top, curve.field().cap())?;
    let mut levels = Vec::new();
    for n in 1..=tower {
        levels.push(strata_histogram(&curve.base_change(n)?, d)?);
    }
    let fits = (0..=d as usize)
        .map(|delta| {
            let expected = 2 * d as i64 - g as i64 + 1 - delta as i64;
            let estimates: Vec<Option<f64>> = levels
                .windows(2)
                .map(|w| growth_exponent(w[0].counts[delta], w[1].counts[delta], w[0].q, w[1].q))
                .collect();
            let checked = delta as i64 <= d as i64 - 2 * g as i64 + 1;
            let pass = !checked
                || estimates
                    .last()
                    .and_then(|e| *e)
                    .is_some_and(|e| (e - expected as f64).abs() <= EXPONENT_TOLERANCE);
            StratumFit { delta, expected, estimates, checked, pass }
        })
        .collect();
    Ok(Stratification { d, genus: g, levels, fits })
}

/// `#{(D, D') in X_d x X_d : D ~ D'}` over `F_{q^n}`.
pub fn martens_fiber_count(curve: &Curve, d: u32, n: u32) -> Result<u128> {
    let c = curve.base_change(n)?;
    if c.is_projective_line() {
        let x = effective_divisor_count(&c, d)?;
        return Ok(x * x);
    }
    check_cap(effective_divisor_count(&c, d)?, c.field().cap())?;
    let pic = PicardGroup::new(&c)?;
    Ok(pic.effective_class_counts(d)?.iter().map(|&k| (k as u128) * (k as u128)).sum())
}

/// Expected growth exponent of the Martens count: `d` below `g`, else `2d - g`.
pub fn martens_dimension(genus: u32, d: u32) -> i64 {
    if d >= genus {
        2 * d as i64 - genus as i64
    } else {
        d as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorCheck {
    /// `#A_d^x`, the base points with `b != 0`.
    pub units: u128,
    pub fiber_product: u128,
    pub q: u64,
    pub equal: bool,
}

/// `#A^x = (q - 1) #(X_d x_Pic X_d)`, both sides enumerated.
pub fn gm_torsor_check(curve: &Curve, d: u32) -> Result<TorsorCheck> {
    require_odd(curve)?;
    let units = hitchin_base_enumerate(curve, d)?.filter(|p| !p.b.is_zero()).count() as u128;
    let fiber_product = martens_fiber_count(curve, d, 1)?;
    let q = curve.q() as u64;
    Ok(TorsorCheck { units, fiber_product, q, equal: units == (q as u128 - 1) * fiber_product })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hitchin::hitchin_base_size;

    fn curve(d: &str) -> Curve {
        Curve::parse_default(d).unwrap()
    }

    #[test]
    fn fast_histogram_matches_generic() {
        for (q, d) in [(3, 1), (3, 2), (5, 2), (3, 3), (7, 1)] {
            let c = curve(&format!("p1:q={q}"));
            let fast = projective_histogram(c.field(), d).unwrap();
            assert_eq!(fast, generic_histogram(&c, d).unwrap(), "q={q} d={d}");
            assert_eq!(fast.total(), hitchin_base_size(&c, d).unwrap());
            assert_eq!(fast.non_reduced, 2 * effective_divisor_count(&c, d).unwrap());
        }
        let c = curve("p1:q=9");
        assert_eq!(projective_histogram(c.field(), 1).unwrap(), generic_histogram(&c, 1).unwrap());
    }

    #[test]
    fn small_tower_on_the_line() {
        let s = stratify(&curve("p1:q=3"), 1, 3).unwrap();
        assert!(s.pass(), "{s:?}");
        assert_eq!(s.levels.len(), 3);
        assert!(s.to_tsv().starts_with("q\td\tdelta\tcount\test_dim\n3\t1\t0\t"));
    }

    #[test]
    fn martens_counts() {
        let e = curve("ell:q=3;a=1;b=0");
        assert_eq!(martens_fiber_count(&e, 2, 1).unwrap(), 64);
        assert_eq!(martens_fiber_count(&e, 2, 2).unwrap(), 1600);
        let p = curve("p1:q=3");
        assert_eq!(martens_fiber_count(&p, 2, 1).unwrap(), 169);
        assert_eq!(martens_dimension(1, 2), 3);
        let est = growth_exponent(64, 1600, 3, 9).unwrap();
        assert!((est - 3.0).abs() < 0.5);
    }

    #[test]
    fn torsor_identity() {
        for c in ["p1:q=3", "ell:q=3;a=1;b=0", "p1:q=5"] {
            for d in 0..=2 {
                let r = gm_torsor_check(&curve(c), d).unwrap();
                assert!(r.equal, "{c} d={d}: {r:?}");
            }
        }
        let r = gm_torsor_check(&curve("p1:q=3"), 2).unwrap();
        assert_eq!((r.units, r.fiber_product), (338, 169));
        let r = gm_torsor_check(&curve("ell:q=3;a=1;b=0"), 2).unwrap();
        assert_eq!((r.units, r.fiber_product), (128, 64));
    }

    #[test]
    fn even_characteristic_rejected() {
        assert_eq!(stratify(&curve("p1:q=4"), 1, 2).unwrap_err(), Error::EvenCharacteristic);
    }
}
