use std::collections::HashMap;
use std::sync::Arc;

use super::character::TorusCharacter;
use super::group::{Class, PicardGroup};
use crate::curve::{effective_divisors, place_of_point, places_of_degree, Divisor, EPoint, EtaleDoubleCover, Place};
use crate::error::{check_cap, Result};
use crate::zeta::{l_series_cohomological, l_series_product, series_mul, sym_power_point_count};
use crate::zeta::{frobenius_datum, GradedLocalSystem, QRendering, RingElem, Series, Summand, ZetaData};

/// `[P] - [O]` for the class of a rational point.
fn class_divisor(pic: &PicardGroup, c: usize) -> Result<Divisor> {
    let inf = Place::infinity(1);
    match pic.element(c) {
        Class::Point(EPoint::Aff(x, y)) => {
            let p = place_of_point(pic.curve(), 1, *x, *y)?;
            Ok(Divisor::place(p, 1).sub(&Divisor::place(inf, 1)))
        }
        _ => Ok(Divisor::zero()),
    }
}

/// The norm-one part of `Pic(X')` for an étale double cover, with its
/// connected components: `L = M - tau M` lies in component `deg M mod 2`.
#[derive(Clone)]
pub struct TwistedTorusBundleSet {
    cover: EtaleDoubleCover,
    base_pic: Arc<PicardGroup>,
    cover_pic: Arc<PicardGroup>,
    norm: Vec<usize>,
    elements: Vec<usize>,
    components: Vec<u8>,
}

pub fn twisted_torus_bundles(cover: &EtaleDoubleCover) -> Result<TwistedTorusBundleSet> {
    let base_pic = Arc::new(PicardGroup::new(cover.base())?);
    let cover_pic = Arc::new(PicardGroup::new(cover.cover())?);
    check_cap(cover_pic.order() as u128, cover.base().field().cap())?;
    let norm = (0..cover_pic.order())
        .map(|c| {
            let d = cover.pushforward(&class_divisor(&cover_pic, c)?)?;
            Ok(base_pic.class_of_divisor(&d)?.0)
        })
        .collect::<Result<Vec<_>>>()?;
    let elements: Vec<usize> = (0..cover_pic.order()).filter(|&c| norm[c] == 0).collect();

    let anti = |d: &Divisor| -> Result<usize> {
        let d = d.sub(&cover.involution(d)?);
        Ok(cover_pic.class_of_divisor(&d)?.0)
    };
    let mut parity = HashMap::new();
    for c in 0..cover_pic.order() {
        parity.entry(anti(&class_divisor(&cover_pic, c)?)?).or_insert(0u8);
    }
    for p in places_of_degree(cover.cover(), 1)?.iter() {
        parity.entry(anti(&Divisor::place(p.clone(), 1))?).or_insert(1u8);
    }
    let components = elements
        .iter()
        .map(|c| parity.get(c).copied().expect("norm-one class is anti-invariant"))
        .collect();
    Ok(TwistedTorusBundleSet { cover: cover.clone(), base_pic, cover_pic, norm, elements, components })
}

impl TwistedTorusBundleSet {
    pub fn cover(&self) -> &EtaleDoubleCover {
        &self.cover
    }

    pub fn base_pic(&self) -> &Arc<PicardGroup> {
        &self.base_pic
    }

    pub fn cover_pic(&self) -> &Arc<PicardGroup> {
        &self.cover_pic
    }

    /// Norm `Pic^0(X') -> Pic^0(X)` on class indices.
    pub fn norm(&self, c: usize) -> usize {
        self.norm[c]
    }

    /// Classes of `Pic^0(X')` with trivial norm.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn component(&self, c: usize) -> Option<u8> {
        self.elements.iter().position(|&e| e == c).map(|i| self.components[i])
    }

    pub fn neutral_component(&self) -> Vec<usize> {
        self.elements.iter().zip(&self.components).filter(|(_, &k)| k == 0).map(|(&c, _)| c).collect()
    }

    pub fn component_count(&self) -> usize {
        let mut seen = [false; 2];
        for &k in &self.components {
            seen[k as usize] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }

    /// The order-two character of `Pic(X)` cutting out the cover: trivial
    /// exactly on norms, and on the split base place.
    pub fn cover_character(&self) -> TorusCharacter {
        let mut values = vec![1u32; self.base_pic.order()];
        for &c in &self.norm {
            values[c] = 0;
        }
        TorusCharacter::new(self.base_pic.clone(), 2, values, 0, usize::MAX)
    }

    /// Pullback `Pic(X) -> Pic(X')` of `class + k * base`.
    pub fn pullback_class(&self, c: usize, k: i64) -> Result<(usize, i64)> {
        let d = class_divisor(&self.base_pic, c)?.add(&Divisor::place(Place::infinity(1), k));
        self.cover_pic.class_of_divisor(&self.cover.pullback(&d)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeComponent {
    pub d0: u32,
    /// `(d_i, m_i)` with `0 < m_1 < ... < m_r`.
    pub parts: Vec<(u32, u32)>,
    /// Points per class of `Bun_H`.
    pub count: i128,
}

impl HeckeComponent {
    /// Descriptor with the `m_i` left symbolic.
    pub fn shape(&self) -> (u32, Vec<u32>) {
        (self.d0, self.parts.iter().map(|&(d, _)| d).collect())
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.parts.iter().map(|(d, m)| format!("({d},{m})")).collect();
        format!("({};{})", self.d0, parts.join(","))
    }
}

/// Components `((d_0, 0), (d_1, m_1), ..., (d_r, m_r))` of the degree-`d`
/// Hecke stack for `H`, with `m_i <= m_max`.
pub fn hecke_components_h(base: &ZetaData, cover: &ZetaData, d: u32, m_max: u32) -> Vec<HeckeComponent> {
    fn rec(rest: u32, next_m: u32, m_max: u32, parts: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
        if rest == 0 {
            out.push(parts.clone());
            return;
        }
        for m in next_m..=m_max {
            for di in 1..=rest {
                parts.push((di, m));
                rec(rest - di, m + 1, m_max, parts, out);
                parts.pop();
            }
        }
    }
    let mut out = Vec::new();
    for d0 in (0..=d).rev() {
        let mut tails = Vec::new();
        rec(d - d0, 1, m_max, &mut Vec::new(), &mut tails);
        for parts in tails {
            let mut count = sym_power_point_count(base, d0 as usize);
            for &(di, _) in &parts {
                count *= sym_power_point_count(cover, di as usize);
            }
            out.push(HeckeComponent { d0, parts, count });
        }
    }
    out
}

/// Components with the same shape have the same count.
pub fn m_independent(components: &[HeckeComponent]) -> bool {
    let mut seen: HashMap<(u32, Vec<u32>), i128> = HashMap::new();
    components.iter().all(|c| *seen.entry(c.shape()).or_insert(c.count) == c.count)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationCheck {
    pub lhs: Series,
    pub rhs: Series,
    pub equal: bool,
}

fn geometric(a: &RingElem, step: usize, len: usize) -> Series {
    let mut s = vec![RingElem::zero(); len];
    let mut j = 0;
    while j * step < len {
        s[j * step] = a.pow(j as u32);
        j += 1;
    }
    s
}

/// `L(rho o sigma) = L(E E_H) L(chi', X')` for `sigma = (E, chi')`, with the
/// left side an Euler product over `X` using the splitting of each place.
pub fn rho_h_factorization_check(
    bundles: &TwistedTorusBundleSet,
    e: &TorusCharacter,
    chi: &TorusCharacter,
    dmax: usize,
) -> Result<FactorizationCheck> {
    let cover = bundles.cover();
    let len = dmax + 1;
    let mut lhs = geometric(&RingElem::zero(), 1, len);
    for deg in 1..=dmax as u32 {
        for x in places_of_degree(cover.base(), deg)?.iter() {
            let fibre = cover.fibre(x)?;
            let mut a = e.root(e.on_place(x)?);
            if fibre.len() == 1 {
                a = a.neg();
            }
            lhs = series_mul(&lhs, &geometric(&a, deg as usize, len), len);
            for y in &fibre {
                let b = chi.root(chi.on_place(y)?);
                lhs = series_mul(&lhs, &geometric(&b, y.degree as usize, len), len);
            }
        }
    }
    let rho0 = l_series_product(&GradedLocalSystem::single(e.mul(&bundles.cover_character())), dmax)?;
    let rho1 = l_series_product(&GradedLocalSystem::single(chi.clone()), dmax)?;
    let rhs = series_mul(&rho0, &rho1, len);
    let equal = lhs == rhs;
    Ok(FactorizationCheck { lhs, rhs, equal })
}

/// `E_1 + E_1^{-1} + 1`: Euler product of the sum against the product of
/// the three cohomological series.
pub fn eisenstein_factorization_check(e1: &TorusCharacter, zeta: &ZetaData, dmax: usize) -> Result<FactorizationCheck> {
    let parts = [e1.clone(), e1.pow(-1), TorusCharacter::trivial(e1.pic().clone())];
    let sys =
        GradedLocalSystem::new(parts.iter().map(|c| Summand { chi: c.clone(), twist: 0, shift: 0 }).collect());
    let lhs = l_series_product(&sys, dmax)?;
    let mut rhs = geometric(&RingElem::zero(), 1, dmax + 1);
    for c in &parts {
        let datum = frobenius_datum(&GradedLocalSystem::single(c.clone()), zeta, QRendering::Integer)?;
        rhs = series_mul(&rhs, &l_series_cohomological(&datum, dmax), dmax + 1);
    }
    let equal = lhs == rhs;
    Ok(FactorizationCheck { lhs, rhs, equal })
}

/// `#X_{d0}(F_q)` times the number of pairs `(D_1, M)` with `D_1` effective
/// of degree `d1` on `X'` and `O(D_1) = pi^* M`.
pub fn twisted_hitchin_base_count(bundles: &TwistedTorusBundleSet, base: &ZetaData, d0: u32, d1: u32) -> Result<i128> {
    if d1 % 2 == 1 {
        return Ok(0);
    }
    let mut image: HashMap<(usize, i64), i128> = HashMap::new();
    for c in 0..bundles.base_pic().order() {
        *image.entry(bundles.pullback_class(c, (d1 / 2) as i64)?).or_insert(0) += 1;
    }
    let mut pairs = 0i128;
    for d in effective_divisors(bundles.cover().cover(), d1)? {
        pairs += image.get(&bundles.cover_pic().class_of_divisor(&d)?).copied().unwrap_or(0);
    }
    Ok(pairs * sym_power_point_count(base, d0 as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{riemann_roch, two_torsion_points, Curve};
    use crate::picard::characters;

    fn f5_cover() -> EtaleDoubleCover {
        let e = Curve::parse_default("ell:q=5;a=-1;b=0").unwrap();
        let t = two_torsion_points(&e)[1];
        EtaleDoubleCover::new(&e, t).unwrap()
    }

    #[test]
    fn norm_one_group_has_two_components() {
        for d in ["ell:q=5;a=-1;b=0", "ell:q=3;a=1;b=0", "ell:q=7;a=1;b=0"] {
            let e = Curve::parse_default(d).unwrap();
            for t in two_torsion_points(&e) {
                let b = twisted_torus_bundles(&EtaleDoubleCover::new(&e, t).unwrap()).unwrap();
                assert_eq!(b.component_count(), 2, "{d}");
                assert_eq!(b.order(), 2 * b.neutral_component().len());
                assert_eq!(b.neutral_component(), vec![0]);
            }
        }
    }

    #[test]
    fn norm_of_pullback_is_doubling() {
        let b = twisted_torus_bundles(&f5_cover()).unwrap();
        let pic = b.base_pic();
        for c in 0..pic.order() {
            let (up, deg) = b.pullback_class(c, 0).unwrap();
            assert_eq!(deg, 0);
            assert_eq!(b.norm(up), pic.mul(c, 2));
        }
    }

    #[test]
    fn cover_character_detects_splitting() {
        let b = twisted_torus_bundles(&f5_cover()).unwrap();
        let eh = b.cover_character();
        assert_eq!(eh.order(), 2);
        for deg in 1..=3 {
            for x in places_of_degree(b.cover().base(), deg).unwrap().iter() {
                assert_eq!(eh.on_place(x).unwrap() == 0, b.cover().splits(x).unwrap(), "{}", x.name());
            }
        }
    }

    #[test]
    fn components_of_the_hecke_stack() {
        let cover = f5_cover();
        let zx = ZetaData::of_curve(cover.base()).unwrap();
        let zc = ZetaData::of_curve(cover.cover()).unwrap();
        let c1 = hecke_components_h(&zx, &zc, 1, 3);
        assert_eq!(c1.len(), 4);
        assert!(m_independent(&c1));
        let c2 = hecke_components_h(&zx, &zc, 2, 2);
        let texts: Vec<String> = c2.iter().map(|c| c.to_text()).collect();
        assert_eq!(texts, ["(2;)", "(1;(1,1))", "(1;(1,2))", "(0;(1,1),(1,2))", "(0;(2,1))", "(0;(2,2))"]);
        assert!(m_independent(&c2));
        let x2 = c2.iter().find(|c| c.to_text() == "(0;(2,1))").unwrap();
        assert_eq!(x2.count, crate::curve::effective_divisor_count(cover.cover(), 2).unwrap() as i128);
    }

    #[test]
    fn factorization_through_the_cover() {
        let b = twisted_torus_bundles(&f5_cover()).unwrap();
        let eh = b.cover_character();
        let base_chars = characters(b.base_pic(), 1);
        let cover_chars = characters(b.cover_pic(), 2);
        let triv = TorusCharacter::trivial(b.cover_pic().clone());
        let r = rho_h_factorization_check(&b, &eh, &triv, 4).unwrap();
        assert!(r.equal);
        assert!(eh.mul(&eh).is_trivial());
        let zx = l_series_product(&GradedLocalSystem::single(TorusCharacter::trivial(b.base_pic().clone())), 4).unwrap();
        let zc = l_series_product(&GradedLocalSystem::single(triv.clone()), 4).unwrap();
        assert_eq!(r.rhs, series_mul(&zx, &zc, 5));
        for (i, e) in base_chars.iter().enumerate().step_by(3) {
            let chi = &cover_chars[(5 * i + 3) % cover_chars.len()];
            assert!(rho_h_factorization_check(&b, e, chi, 4).unwrap().equal);
        }
    }

    #[test]
    fn eisenstein_parameters() {
        let c = Curve::parse_default("ell:q=5;a=-1;b=0").unwrap();
        let pic = Arc::new(PicardGroup::new(&c).unwrap());
        let z = ZetaData::of_curve(&c).unwrap();
        let chars = characters(&pic, 2);
        let picks: Vec<_> = chars.iter().filter(|c| !c.is_trivial()).take(5).collect();
        assert_eq!(picks.len(), 5);
        for e1 in picks {
            assert!(eisenstein_factorization_check(e1, &z, 5).unwrap().equal);
        }
    }

    #[test]
    fn base_counts() {
        let b = twisted_torus_bundles(&f5_cover()).unwrap();
        let z = ZetaData::of_curve(b.cover().base()).unwrap();
        assert_eq!(twisted_hitchin_base_count(&b, &z, 2, 1).unwrap(), 0);
        // pullback kills the class of the cover
        let kernel = (0..b.base_pic().order()).filter(|&c| b.pullback_class(c, 0).unwrap() == (0, 0)).count();
        assert_eq!(kernel, 2);
        assert_eq!(twisted_hitchin_base_count(&b, &z, 2, 0).unwrap(), 2 * sym_power_point_count(&z, 2));
        // oracle: linear equivalence by Riemann-Roch on X'
        let cover = b.cover();
        let xc = cover.cover();
        let mut pulled = Vec::new();
        for c in 0..b.base_pic().order() {
            let d = class_divisor(b.base_pic(), c).unwrap().add(&Divisor::place(Place::infinity(1), 1));
            pulled.push(cover.pullback(&d).unwrap());
        }
        let mut pairs = 0;
        for d1 in effective_divisors(xc, 2).unwrap() {
            for m in &pulled {
                if !riemann_roch(xc, &d1.sub(m)).unwrap().is_empty() {
                    pairs += 1;
                }
            }
        }
        assert_eq!(twisted_hitchin_base_count(&b, &z, 0, 2).unwrap(), pairs);
        assert!(pairs > 0);
    }
}
