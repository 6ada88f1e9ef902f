use super::data::ZetaData;
use super::ring::RingElem;
use super::series::{series_div, series_mul, Series};
use crate::curve::{places_of_degree, Curve};
use crate::error::Result;
use crate::picard::TorusCharacter;

/// Rank-one summand `chi (twist) [-shift]`; `twist` is the exponent of `v`
/// (twice the Tate twist).
#[derive(Clone, Debug)]
pub struct Summand {
    pub chi: TorusCharacter,
    pub twist: i32,
    pub shift: i32,
}

#[derive(Clone, Debug)]
pub struct GradedLocalSystem {
    pub summands: Vec<Summand>,
}

impl GradedLocalSystem {
    pub fn new(summands: Vec<Summand>) -> Self {
        assert!(!summands.is_empty());
        let pic = summands[0].chi.pic();
        assert!(summands.iter().all(|s| s.chi.pic().curve() == pic.curve()), "summands on one curve");
        GradedLocalSystem { summands }
    }

    pub fn single(chi: TorusCharacter) -> Self {
        Self::new(vec![Summand { chi, twist: 0, shift: 0 }])
    }

    pub fn curve(&self) -> &Curve {
        self.summands[0].chi.pic().curve()
    }
}

/// How `q` enters the `H^2` eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QRendering {
    /// `q` as an integer; required for comparison with point counts.
    Integer,
    /// `q` as `v^2`, for weight bookkeeping only.
    Weight,
}

/// `det(1 - t Fr | H^degree)` of one summand, placed in total degree
/// `degree + shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub degree: u32,
    pub shift: i32,
    pub poly: Vec<RingElem>,
}

impl Piece {
    pub fn is_odd(&self) -> bool {
        (self.degree as i32 + self.shift).rem_euclid(2) == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusDatum {
    pub pieces: Vec<Piece>,
}

impl FrobeniusDatum {
    pub fn piece(&self, summand: usize, degree: u32) -> &Piece {
        &self.pieces[3 * summand + degree as usize]
    }
}

/// `L(chi, t) = sum_d (sum_{D in X_d} chi(D)) t^d` for `chi` nontrivial on
/// `Pic^0`, by divisor sums; the terms beyond `2g - 2` are checked to vanish.
pub fn character_l_polynomial(chi: &TorusCharacter) -> Result<Vec<RingElem>> {
    let pic = chi.pic();
    let g = pic.curve().genus();
    let top = (2 * g).saturating_sub(2);
    let mut out = Vec::new();
    for d in 0..=2 * g {
        let counts = pic.effective_class_counts(d)?;
        let mut s = RingElem::zero();
        let shift = (d as u64 * chi.degree_value() as u64 % chi.modulus() as u64) as u32;
        for (c, &k) in counts.iter().enumerate() {
            if k > 0 {
                s.add_assign(&chi.root((chi.on_class(c) + shift) % chi.modulus()).scale(k as i128));
            }
        }
        if d > top {
            assert!(s.is_zero(), "L-polynomial of a nontrivial character has degree 2g-2");
        } else {
            out.push(s);
        }
    }
    Ok(out)
}

pub fn frobenius_datum(system: &GradedLocalSystem, zeta: &ZetaData, rendering: QRendering) -> Result<FrobeniusDatum> {
    let mut pieces = Vec::new();
    let q = zeta.q() as i128;
    for s in &system.summands {
        let chi = &s.chi;
        let twist = RingElem::v(s.twist);
        if chi.is_geometrically_trivial() {
            let a = chi.root(chi.degree_value()).mul(&twist);
            let qa = match rendering {
                QRendering::Integer => a.scale(q),
                QRendering::Weight => a.shift(2),
            };
            let h1: Vec<RingElem> = zeta
                .numerator()
                .iter()
                .enumerate()
                .map(|(k, &c)| a.pow(k as u32).scale(c))
                .collect();
            pieces.push(Piece { degree: 0, shift: s.shift, poly: vec![RingElem::one(), a.neg()] });
            pieces.push(Piece { degree: 1, shift: s.shift, poly: h1 });
            pieces.push(Piece { degree: 2, shift: s.shift, poly: vec![RingElem::one(), qa.neg()] });
        } else {
            let l = character_l_polynomial(chi)?;
            let h1 = l.iter().enumerate().map(|(k, c)| c.mul(&twist.pow(k as u32))).collect();
            pieces.push(Piece { degree: 0, shift: s.shift, poly: vec![RingElem::one()] });
            pieces.push(Piece { degree: 1, shift: s.shift, poly: h1 });
            pieces.push(Piece { degree: 2, shift: s.shift, poly: vec![RingElem::one()] });
        }
    }
    Ok(FrobeniusDatum { pieces })
}

fn binomial(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

/// Euler product `prod_x prod_s det(1 - t^{deg x} Fr_x)^{-(-1)^shift}`
/// through `t^dmax`.
pub fn l_series_product(system: &GradedLocalSystem, dmax: usize) -> Result<Series> {
    let pic = system.summands[0].chi.pic();
    let curve = pic.curve();
    let len = dmax + 1;
    let mut series = vec![RingElem::zero(); len];
    series[0] = RingElem::one();
    for e in 1..=dmax as u32 {
        let classes = pic.place_classes(e)?;
        debug_assert_eq!(classes.len(), places_of_degree(curve, e)?.len());
        let mut per_class = vec![0u64; pic.order()];
        for &c in classes.iter() {
            per_class[c] += 1;
        }
        for (c, &count) in per_class.iter().enumerate() {
            if count == 0 {
                continue;
            }
            for s in &system.summands {
                let chi = &s.chi;
                let k = (chi.on_class(c) as u64 + e as u64 * chi.degree_value() as u64) % chi.modulus() as u64;
                let a = chi.root(k as u32).mul(&RingElem::v(s.twist * e as i32));
                // (1 - a t^e)^{-count} or (1 - a t^e)^{count}
                let mut factor = vec![RingElem::zero(); len];
                let mut j = 0usize;
                while j * e as usize <= dmax {
                    let coeff = if s.shift.rem_euclid(2) == 0 {
                        binomial(count + j as u64 - 1, j as u64)
                    } else {
                        let b = binomial(count, j as u64);
                        if j % 2 == 1 {
                            -b
                        } else {
                            b
                        }
                    };
                    if coeff != 0 {
                        factor[j * e as usize] = a.pow(j as u32).scale(coeff);
                    }
                    j += 1;
                }
                series = series_mul(&series, &factor, len);
            }
        }
    }
    Ok(series)
}

/// Expansion of `prod_odd det(..) / prod_even det(..)` through `t^dmax`.
pub fn l_series_cohomological(datum: &FrobeniusDatum, dmax: usize) -> Series {
    let len = dmax + 1;
    let mut num = vec![RingElem::zero(); len];
    num[0] = RingElem::one();
    let mut den = num.clone();
    for p in &datum.pieces {
        if p.is_odd() {
            num = series_mul(&num, &p.poly, len);
        } else {
            den = series_mul(&den, &p.poly, len);
        }
    }
    series_div(&num, &den, len)
}

/// Power sums `p_1..p_d` of the eigenvalues from `det(1 - tF) = 1 + sum c_k t^k`.
fn power_sums(poly: &[RingElem], d: usize) -> Vec<RingElem> {
    let c = |k: usize| poly.get(k).cloned().unwrap_or_else(RingElem::zero);
    let mut p: Vec<RingElem> = Vec::with_capacity(d);
    for k in 1..=d {
        let mut acc = c(k).scale(-(k as i128));
        for i in 1..k {
            acc = acc.sub(&c(i).mul(&p[k - i - 1]));
        }
        p.push(acc);
    }
    p
}

/// Complete homogeneous `h_k` (symmetric) or elementary `e_k` (exterior)
/// functions via Newton's identities.
fn newton(p: &[RingElem], d: usize, exterior: bool) -> Vec<RingElem> {
    let mut out = vec![RingElem::one()];
    for k in 1..=d {
        let mut acc = RingElem::zero();
        for i in 1..=k {
            let term = out[k - i].mul(&p[i - 1]);
            if exterior && i % 2 == 0 {
                acc = acc.sub(&term);
            } else {
                acc = acc.add(&term);
            }
        }
        out.push(acc.div_int(k as i128));
    }
    out
}

/// Trace of Frobenius on the degree-`d` part of
/// `Sym(H^even) (x) Lambda(H^odd)`, with the sign `(-1)^k` on `Lambda^k`.
pub fn sym_power_trace(datum: &FrobeniusDatum, d: usize) -> RingElem {
    let mut acc = vec![RingElem::zero(); d + 1];
    acc[0] = RingElem::one();
    for piece in &datum.pieces {
        let odd = piece.is_odd();
        let p = power_sums(&piece.poly, d);
        let mut f = newton(&p, d, odd);
        if odd {
            for (k, x) in f.iter_mut().enumerate() {
                if k % 2 == 1 {
                    *x = x.neg();
                }
            }
        }
        acc = series_mul(&acc, &f, d + 1);
    }
    acc.pop().unwrap()
}

/// `t^d` coefficient of `prod_i Z(v^{w_i} t)^{dim_i}`; weights are
/// exponents of `v` (twice the grading).
pub fn constant_sheaf_eigenvalue(grading: &[(i32, u32)], zeta: &ZetaData, d: usize) -> RingElem {
    let z = zeta.zeta_coefficients(d);
    let mut acc = vec![RingElem::zero(); d + 1];
    acc[0] = RingElem::one();
    for &(w, dim) in grading {
        let s: Series = z.iter().enumerate().map(|(k, &c)| RingElem::monomial(c, w * k as i32)).collect();
        for _ in 0..dim {
            acc = series_mul(&acc, &s, d + 1);
        }
    }
    acc.pop().unwrap()
}

/// `dim Sym^d` of an `m`-dimensional space.
pub fn leading_term_dimension(m: u64, d: u64) -> u128 {
    binomial(d + m - 1, m - 1) as u128
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::picard::{characters, PicardGroup};

    fn setup(d: &str, degree_order: u32) -> (Arc<PicardGroup>, ZetaData, Vec<TorusCharacter>) {
        let c = Curve::parse_default(d).unwrap();
        let pic = Arc::new(PicardGroup::new(&c).unwrap());
        let z = ZetaData::of_curve(&c).unwrap();
        let ch = characters(&pic, degree_order);
        (pic, z, ch)
    }

    fn ints(s: &[RingElem]) -> Vec<i128> {
        s.iter().map(|c| c.as_int().unwrap()).collect()
    }

    #[test]
    fn euler_products_of_trivial_systems() {
        let (pic, _, _) = setup("p1:q=2", 1);
        let sys = GradedLocalSystem::single(TorusCharacter::trivial(pic));
        assert_eq!(ints(&l_series_product(&sys, 3).unwrap()), vec![1, 3, 7, 15]);
        let (pic, _, _) = setup("ell:q=3;a=1;b=0", 1);
        let sys = GradedLocalSystem::single(TorusCharacter::trivial(pic));
        assert_eq!(l_series_product(&sys, 2).unwrap()[2].as_int(), Some(16));
    }

    #[test]
    fn two_routes_agree_for_every_character() {
        for (d, deg) in [("ell:q=3;a=1;b=0", 2), ("ell:q=5;a=-1;b=0", 1), ("hyp:q=3;f=x^5+2x+1", 1), ("p1:q=3", 3)] {
            let (_, z, chars) = setup(d, deg);
            let dmax = 2 * z.genus() as usize + 4;
            for chi in chars {
                let sys = GradedLocalSystem::single(chi.clone());
                let datum = frobenius_datum(&sys, &z, QRendering::Integer).unwrap();
                let a = l_series_product(&sys, dmax).unwrap();
                let b = l_series_cohomological(&datum, dmax);
                assert_eq!(a, b, "{d} {chi:?}");
                for k in 0..=dmax {
                    assert_eq!(sym_power_trace(&datum, k), b[k], "{d} {chi:?} d={k}");
                }
            }
        }
    }

    #[test]
    fn nontrivial_elliptic_character_has_constant_l() {
        let (_, z, chars) = setup("ell:q=3;a=1;b=0", 1);
        let chi = chars.iter().find(|c| c.order() == 4).unwrap();
        let datum = frobenius_datum(&GradedLocalSystem::single(chi.clone()), &z, QRendering::Integer).unwrap();
        assert_eq!(datum.piece(0, 1).poly, vec![RingElem::one()]);
        assert_eq!(datum.piece(0, 0).poly, vec![RingElem::one()]);
        assert_eq!(ints(&l_series_cohomological(&datum, 4)), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn trivial_datum_on_elliptic_curve() {
        let (pic, z, _) = setup("ell:q=3;a=1;b=0", 1);
        let datum =
            frobenius_datum(&GradedLocalSystem::single(TorusCharacter::trivial(pic)), &z, QRendering::Integer).unwrap();
        assert_eq!(ints(&datum.piece(0, 1).poly), vec![1, 0, 3]);
        assert_eq!(sym_power_trace(&datum, 2).as_int(), Some(16));
        assert_eq!(sym_power_trace(&datum, 0).as_int(), Some(1));
    }

    #[test]
    fn constant_sheaf_examples() {
        let z = ZetaData::of_curve(&Curve::parse_default("p1:q=3").unwrap()).unwrap();
        let gl2 = constant_sheaf_eigenvalue(&[(-1, 1), (1, 1)], &z, 1);
        assert_eq!(gl2, RingElem::monomial(4, -1).add(&RingElem::monomial(4, 1)));
        for d in 0..5 {
            assert_eq!(constant_sheaf_eigenvalue(&[(0, 1)], &z, d).as_int(), Some(z.zeta_coefficients(d)[d]));
        }
    }

    #[test]
    fn adjoint_grading_matches_sym_power_trace() {
        let (pic, z, _) = setup("ell:q=3;a=1;b=0", 1);
        let triv = TorusCharacter::trivial(pic);
        let sys = GradedLocalSystem::new(
            [(-2, -2), (0, 0), (2, 2)]
                .iter()
                .map(|&(twist, shift)| Summand { chi: triv.clone(), twist, shift })
                .collect(),
        );
        let datum = frobenius_datum(&sys, &z, QRendering::Integer).unwrap();
        for d in 0..4 {
            assert_eq!(constant_sheaf_eigenvalue(&[(-2, 1), (0, 1), (2, 1)], &z, d), sym_power_trace(&datum, d));
        }
    }

    #[test]
    fn leading_terms() {
        assert_eq!(leading_term_dimension(1, 7), 1);
        assert_eq!(leading_term_dimension(2, 3), 4);
        assert_eq!(leading_term_dimension(3, 2), 6);
        let (pic, z, _) = setup("ell:q=3;a=1;b=0", 1);
        for m in 1..=3u64 {
            let sys = GradedLocalSystem::new(
                (0..m).map(|_| Summand { chi: TorusCharacter::trivial(pic.clone()), twist: 0, shift: 0 }).collect(),
            );
            let datum = frobenius_datum(&sys, &z, QRendering::Weight).unwrap();
            for d in 0..5u64 {
                let tr = sym_power_trace(&datum, d as usize);
                assert_eq!(tr.max_v_degree(), Some(2 * d as i32));
                assert_eq!(tr.v_part(2 * d as i32).as_int(), Some(leading_term_dimension(m, d) as i128));
            }
        }
    }
    #[test]
    fn random_systems_match_both_routes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let curves = [setup("ell:q=3;a=1;b=0", 2), setup("hyp:q=3;f=x^5+2x+1", 1), setup("p1:q=2", 2)];
        for _ in 0..50 {
            let (_, z, chars) = &curves[rng.gen_range(0..curves.len())];
            let k = rng.gen_range(1..=3);
            let sys = GradedLocalSystem::new(
                (0..k)
                    .map(|_| Summand {
                        chi: chars[rng.gen_range(0..chars.len())].clone(),
                        twist: rng.gen_range(-4..=4),
                        shift: rng.gen_range(-2..=2),
                    })
                    .collect(),
            );
            let datum = frobenius_datum(&sys, z, QRendering::Integer).unwrap();
            let dmax = 5;
            let coh = l_series_cohomological(&datum, dmax);
            assert_eq!(coh, l_series_product(&sys, dmax).unwrap());
            for d in 0..=dmax {
                assert_eq!(sym_power_trace(&datum, d), coh[d]);
            }
        }
    }

    #[test]
    fn exterior_truncation() {
        let (_, z, chars) = setup("hyp:q=3;f=x^5+2x+1", 1);
        for chi in chars.iter().filter(|c| !c.is_geometrically_trivial()) {
            let datum = frobenius_datum(&GradedLocalSystem::single(chi.clone()), &z, QRendering::Integer).unwrap();
            let deg = datum.piece(0, 1).poly.len() - 1;
            assert_eq!(deg, 2);
            for d in deg + 1..deg + 5 {
                assert!(sym_power_trace(&datum, d).is_zero());
            }
        }
    }

    #[test]
    fn arthur_trivial_parameter_vanishes() {
        let (_, z, chars) = setup("hyp:q=3;f=x^5+2x^2+1", 1);
        let g = z.genus() as usize;
        let chi = chars.iter().find(|c| c.order() == 2 && !c.is_geometrically_trivial()).unwrap();
        let sys = GradedLocalSystem::new(
            [(-2, -2), (0, 0), (2, 2)]
                .iter()
                .map(|&(twist, shift)| Summand { chi: chi.clone(), twist, shift })
                .collect(),
        );
        let datum = frobenius_datum(&sys, &z, QRendering::Integer).unwrap();
        let bound = 3 * (2 * g - 2);
        assert!(!sym_power_trace(&datum, bound).is_zero());
        for d in bound + 1..bound + 4 {
            assert!(sym_power_trace(&datum, d).is_zero());
        }
    }

    #[test]
    fn weight_rendering_on_projective_line() {
        let (pic, z, _) = setup("p1:q=2", 1);
        let datum =
            frobenius_datum(&GradedLocalSystem::single(TorusCharacter::trivial(pic)), &z, QRendering::Weight).unwrap();
        let s = l_series_cohomological(&datum, 2);
        assert_eq!(s[1], RingElem::one().add(&RingElem::v(2)));
        assert_eq!(s[2].substitute_v_power(1).v_part(4).as_int(), Some(1));
    }
}
