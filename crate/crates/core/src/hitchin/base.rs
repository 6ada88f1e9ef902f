use crate::curve::{
    divisor_of_function, effective_divisor_count, effective_divisors, riemann_roch, Curve, CurveFunction, Divisor,
    PlaneModel,
};
use crate::error::{check_cap, Error, Result};
use crate::ff::{Fe, Poly};

/// A pair `(D, b)` with `D` effective and `b in L(D)`; the spectral curve is
/// `t^2 - b t + 1 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitchinBasePoint {
    pub d: Divisor,
    pub b: CurveFunction,
}

pub(crate) fn require_odd(curve: &Curve) -> Result<()> {
    if curve.field().is_odd() {
        Ok(())
    } else {
        Err(Error::EvenCharacteristic)
    }
}

/// `#A_d = sum_{D in X_d} q^{dim L(D)}`.
pub fn hitchin_base_size(curve: &Curve, d: u32) -> Result<u128> {
    require_odd(curve)?;
    let q = curve.q() as u128;
    let estimate = effective_divisor_count(curve, d)?.saturating_mul(q.saturating_pow(d + 1));
    check_cap(estimate, curve.field().cap().saturating_mul(64))?;
    let mut total = 0u128;
    for div in effective_divisors(curve, d)? {
        total += q.pow(riemann_roch(curve, &div)?.len() as u32);
    }
    Ok(total)
}

/// Every base point, divisor by divisor, with `b` running over `L(D)` in the
/// order of base-`q` digit vectors on the Riemann-Roch basis.
pub fn hitchin_base_enumerate(curve: &Curve, d: u32) -> Result<BaseIter> {
    require_odd(curve)?;
    let q = curve.q() as u128;
    check_cap(effective_divisor_count(curve, d)?.saturating_mul(q.saturating_pow(d + 1)), curve.field().cap())?;
    let divisors = effective_divisors(curve, d)?;
    Ok(BaseIter { curve: curve.clone(), divisors, next_divisor: 0, basis: Vec::new(), current: None, counter: 0 })
}

pub struct BaseIter {
    curve: Curve,
    divisors: Vec<Divisor>,
    next_divisor: usize,
    basis: Vec<CurveFunction>,
    current: Option<Divisor>,
    counter: u64,
}

impl Iterator for BaseIter {
    type Item = HitchinBasePoint;

    fn next(&mut self) -> Option<HitchinBasePoint> {
        let q = self.curve.q() as u64;
        loop {
            if let Some(div) = &self.current {
                if self.counter < q.pow(self.basis.len() as u32) {
                    let f = self.curve.field();
                    let mut k = self.counter;
                    let mut b = CurveFunction::zero();
                    for g in &self.basis {
                        let c = (k % q) as Fe;
                        k /= q;
                        if c != 0 {
                            b = b.add(&g.scale(c, f), f);
                        }
                    }
                    self.counter += 1;
                    return Some(HitchinBasePoint { d: div.clone(), b });
                }
            }
            let div = self.divisors.get(self.next_divisor)?.clone();
            self.next_divisor += 1;
            self.basis = riemann_roch(&self.curve, &div).expect("supported divisor");
            self.current = Some(div);
            self.counter = 0;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pi0Class {
    Zero,
    TwoTorsion,
    FullZ,
}

impl Pi0Class {
    pub fn name(self) -> &'static str {
        match self {
            Pi0Class::Zero => "0",
            Pi0Class::TwoTorsion => "Z/2",
            Pi0Class::FullZ => "Z",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pi0 {
    pub class: Pi0Class,
    /// `b^2 - 4` is a square in `F_q(X)`, so the spectral curve splits over `F_q`.
    pub split: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantReport {
    pub discr: Divisor,
    /// Multiplicity-free part.
    pub d1: Divisor,
    pub d2: Divisor,
    pub delta: i64,
    pub pi0: Pi0,
}

fn model(curve: &Curve) -> Option<PlaneModel> {
    PlaneModel::of(curve)
}

/// `b^2 - 4`.
pub fn spectral_discriminant_function(curve: &Curve, b: &CurveFunction) -> CurveFunction {
    let f = curve.field();
    let m = model(curve);
    b.mul(b, m.as_ref(), f).sub(&CurveFunction::constant(f.from_int(4)), f)
}

/// `discr(D, b) = div(b^2 - 4) + 2D`, split as `D_1 + 2 D_2`.
pub fn discriminant(curve: &Curve, point: &HitchinBasePoint) -> Result<DiscriminantReport> {
    require_odd(curve)?;
    let f = spectral_discriminant_function(curve, &point.b);
    if f.is_zero() {
        return Err(Error::NonReducedSpectralCurve);
    }
    let discr = divisor_of_function(curve, &f)?.add(&point.d.scale(2));
    debug_assert!(discr.is_effective() || discr.is_zero());
    let (d1, d2) = parity_split(&discr);
    let delta = d2.degree();
    let pi0 = classify(curve, point, &f, &d1, &d2)?;
    Ok(DiscriminantReport { discr, d1, d2, delta, pi0 })
}

/// `E = D_1 + 2 D_2` with `D_1` multiplicity-free.
fn parity_split(e: &Divisor) -> (Divisor, Divisor) {
    let mut d1 = Divisor::zero();
    let mut d2 = Divisor::zero();
    for (p, n) in e.terms() {
        d1.add_place(p.clone(), n % 2);
        d2.add_place(p.clone(), n / 2);
    }
    (d1, d2)
}

/// `sum_x floor(n_x / 2) deg x`.
pub fn delta_invariant(curve: &Curve, point: &HitchinBasePoint) -> Result<i64> {
    Ok(discriminant(curve, point)?.discr.half_floor_degree())
}

/// `delta` on the projective line from the squarefree decomposition of the
/// numerator of `b^2 - 4` and the order at infinity.
pub fn delta_squarefree(curve: &Curve, point: &HitchinBasePoint) -> Result<i64> {
    assert!(curve.is_projective_line());
    let fq = curve.field();
    let f = spectral_discriminant_function(curve, &point.b);
    if f.is_zero() {
        return Err(Error::NonReducedSpectralCurve);
    }
    // on P^1, D = div_0(h) + n_inf [inf] with b = a / h
    let h = point.d.terms().filter(|(p, _)| !p.is_infinite()).fold(Poly::one(), |acc, (p, n)| {
        let crate::curve::PlaceRep::Poly(r) = &p.rep else { unreachable!() };
        acc.mul(&r.pow(n as u64, fq), fq)
    });
    // numerator of (b^2 - 4) h^2 as a polynomial
    let num = f.a.mul(&h.square(fq), fq).div_exact(&f.den, fq);
    let dec = num.squarefree_decompose(fq)?;
    let finite: i64 = dec.parts.iter().map(|(a, m)| (*m as i64 / 2) * a.degree_i()).sum();
    let at_inf = 2 * point.d.degree() - num.degree_i();
    Ok(finite + at_inf / 2)
}

fn classify(curve: &Curve, point: &HitchinBasePoint, f: &CurveFunction, d1: &Divisor, d2: &Divisor) -> Result<Pi0> {
    if !d1.is_zero() {
        return Ok(Pi0 { class: Pi0Class::Zero, split: false });
    }
    // b^2 - 4 = c g^2 with div g = D_2 - D exactly when D - D_2 is principal
    let space = riemann_roch(curve, &point.d.sub(d2))?;
    let Some(g) = space.first() else {
        assert!(!curve.is_projective_line(), "the projective line has no unramified double covers");
        return Ok(Pi0 { class: Pi0Class::TwoTorsion, split: false });
    };
    let fq = curve.field();
    let m = model(curve);
    let c = f.mul(&g.mul(g, m.as_ref(), fq).inv(m.as_ref(), fq)?, m.as_ref(), fq);
    assert!(c.b.is_zero() && c.a.is_constant() && c.den.is_one(), "quotient is constant");
    Ok(Pi0 { class: Pi0Class::FullZ, split: fq.is_square(c.a.coeff(0)) })
}

pub fn pi0_classify(curve: &Curve, point: &HitchinBasePoint) -> Result<Pi0> {
    Ok(discriminant(curve, point)?.pi0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{Place, PlaceRep};
    use crate::ff::Poly;

    fn p1(q: u32) -> Curve {
        Curve::parse_default(&format!("p1:q={q}")).unwrap()
    }

    fn rational(c: &Curve, num: &[i64], den: &[i64]) -> CurveFunction {
        let f = c.field();
        let p = |v: &[i64]| Poly::new(v.iter().map(|&x| f.from_int(x)).collect());
        CurveFunction::new(p(num), Poly::zero(), p(den), f).unwrap()
    }

    fn linear_place(c: &Curve, a: i64) -> Place {
        let f = c.field();
        let r = Poly::new(vec![f.from_int(-a), 1]);
        Place { degree: 1, rep: PlaceRep::Poly(r) }
    }

    fn inf2() -> Divisor {
        Divisor::place(Place::infinity(1), 2)
    }

    #[test]
    fn base_sizes() {
        assert_eq!(hitchin_base_size(&p1(3), 2).unwrap(), 351);
        assert_eq!(hitchin_base_size(&p1(7), 0).unwrap(), 7);
        let e = Curve::parse_default("ell:q=3;a=1;b=0").unwrap();
        assert_eq!(hitchin_base_size(&e, 2).unwrap(), 144);
        assert_eq!(hitchin_base_enumerate(&e, 2).unwrap().count(), 144);
        assert_eq!(hitchin_base_enumerate(&p1(3), 2).unwrap().count(), 351);
        let even = Curve::parse_default("p1:q=4").unwrap();
        assert_eq!(hitchin_base_size(&even, 1), Err(Error::EvenCharacteristic));
    }

    #[test]
    fn enumerated_sections_lie_in_the_space() {
        let e = Curve::parse_default("ell:q=3;a=1;b=0").unwrap();
        for pt in hitchin_base_enumerate(&e, 2).unwrap().step_by(7) {
            if pt.b.is_zero() {
                continue;
            }
            let s = divisor_of_function(&e, &pt.b).unwrap().add(&pt.d);
            assert!(s.is_zero() || s.is_effective());
        }
    }

    #[test]
    fn discriminant_examples() {
        let c = p1(5);
        let pt = HitchinBasePoint { d: inf2(), b: rational(&c, &[2, 0, 1], &[1]) };
        let r = discriminant(&c, &pt).unwrap();
        let expect = Divisor::place(linear_place(&c, 0), 2)
            .add(&Divisor::place(linear_place(&c, 1), 1))
            .add(&Divisor::place(linear_place(&c, 4), 1));
        assert_eq!(r.discr, expect);
        assert_eq!(r.delta, 1);
        assert_eq!(r.pi0.class, Pi0Class::Zero);
        let zero = HitchinBasePoint { d: inf2(), b: CurveFunction::zero() };
        let r = discriminant(&c, &zero).unwrap();
        assert_eq!(r.discr, Divisor::place(Place::infinity(1), 4));
        assert_eq!(r.delta, 2);
        let two = HitchinBasePoint { d: inf2(), b: CurveFunction::constant(2) };
        assert_eq!(discriminant(&c, &two), Err(Error::NonReducedSpectralCurve));
    }

    #[test]
    fn pi0_examples() {
        let c = p1(5);
        let d = Divisor::place(linear_place(&c, 0), 1).add(&Divisor::place(Place::infinity(1), 1));
        let pt = HitchinBasePoint { d, b: rational(&c, &[1, 0, 1], &[0, 1]) };
        assert_eq!(pi0_classify(&c, &pt).unwrap(), Pi0 { class: Pi0Class::FullZ, split: true });
        let one = HitchinBasePoint { d: inf2(), b: CurveFunction::constant(1) };
        assert_eq!(pi0_classify(&c, &one).unwrap(), Pi0 { class: Pi0Class::FullZ, split: false });
    }

    #[test]
    fn discriminant_invariants_on_the_line() {
        for (q, d) in [(3, 2), (5, 1), (3, 3)] {
            let c = p1(q);
            for pt in hitchin_base_enumerate(&c, d).unwrap() {
                match discriminant(&c, &pt) {
                    Err(Error::NonReducedSpectralCurve) => continue,
                    Err(e) => panic!("{e}"),
                    Ok(r) => {
                        assert_eq!(r.discr.degree(), 2 * d as i64);
                        assert_eq!(r.d2.degree(), r.delta);
                        assert!(r.d1.terms().all(|(_, n)| n == 1));
                        assert_eq!(delta_invariant(&c, &pt).unwrap(), r.delta);
                        assert_eq!(delta_squarefree(&c, &pt).unwrap(), r.delta);
                        assert!((0..=d as i64).contains(&r.delta));
                        assert_ne!(r.pi0.class, Pi0Class::TwoTorsion);
                    }
                }
            }
        }
    }

    /// Brute force: is `c (b^2 - 4)` a square of some `h in L(D)`?
    fn square_by_search(c: &Curve, pt: &HitchinBasePoint) -> (bool, bool) {
        let f = c.field();
        let m = PlaneModel::of(c);
        let target = spectral_discriminant_function(c, &pt.b);
        let basis = riemann_roch(c, &pt.d).unwrap();
        let q = c.q() as u64;
        let (mut geometric, mut rational) = (false, false);
        for k in 1..q.pow(basis.len() as u32) {
            let mut h = CurveFunction::zero();
            let mut r = k;
            for g in &basis {
                h = h.add(&g.scale((r % q) as Fe, f), f);
                r /= q;
            }
            let sq = h.mul(&h, m.as_ref(), f);
            for s in f.elements().skip(1) {
                if sq == target.scale(s, f) {
                    geometric = true;
                    rational |= s == 1;
                }
            }
        }
        (geometric, rational)
    }

    #[test]
    fn elliptic_classes_match_brute_force() {
        let e = Curve::parse_default("ell:q=3;a=1;b=0").unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for d in 1..=2 {
            for pt in hitchin_base_enumerate(&e, d).unwrap() {
                let Ok(r) = discriminant(&e, &pt) else { continue };
                seen.insert(r.pi0.class);
                let (geo, rat) = square_by_search(&e, &pt);
                assert_eq!(r.pi0.class == Pi0Class::FullZ, geo, "{:?}", pt);
                assert_eq!(r.pi0.split, rat);
                assert_eq!(r.discr.degree(), 2 * d as i64);
            }
        }
        assert!(seen.contains(&Pi0Class::Zero) && seen.contains(&Pi0Class::FullZ));
    }
}
