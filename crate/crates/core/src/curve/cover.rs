use std::collections::BTreeSet;

use super::divisor::Divisor;
use super::model::Curve;
use super::place::{place_of_point, Place, PlaceRep};
use super::points::{point_count, EPoint, EllipticOver};
use crate::error::{Error, Result};
use crate::ff::Fe;

/// Degree-2 isogeny `pi: E' -> E` with kernel `{O', T'}`, seen as an étale
/// double cover of `E` with deck involution `P' -> P' + T'`.
///
/// With `X = x - x_T`, the base is `y^2 = X^3 + A X^2 + B X`. The cover is
/// `Y^2 = X'^3 + a' X'^2 + b' X'` with `a' = -2A`, `b' = A^2 - 4B`, stored in
/// short form via `X' = x' - s`.
#[derive(Clone, Debug)]
pub struct EtaleDoubleCover {
    base: Curve,
    cover: Curve,
    t: (Fe, Fe),
    s: Fe,
    a1: Fe,
    b1: Fe,
}

/// Rational points of order two on a short Weierstrass curve.
pub fn two_torsion_points(curve: &Curve) -> Vec<(Fe, Fe)> {
    let Some(w) = curve.weierstrass() else { return Vec::new() };
    let f = curve.field();
    if !f.is_odd() {
        return Vec::new();
    }
    let e = EllipticOver::over_base(w.a, f);
    f.elements()
        .filter(|&x| e.is_on(EPoint::Aff(x, 0)))
        .map(|x| (x, 0))
        .collect()
}

impl EtaleDoubleCover {
    pub fn new(base: &Curve, t: (Fe, Fe)) -> Result<Self> {
        let f = base.field();
        if !f.is_odd() {
            return Err(Error::EvenCharacteristic);
        }
        let w = base.weierstrass().ok_or_else(|| Error::UnsupportedCurve(base.descriptor().into()))?;
        let [a1w, a2w, a3w, a, _] = w.a;
        if a1w != 0 || a2w != 0 || a3w != 0 {
            return Err(Error::UnsupportedCurve(base.descriptor().into()));
        }
        let e = EllipticOver::over_base(w.a, f);
        let tp = EPoint::Aff(t.0, t.1);
        if !e.is_on(tp) || t.1 != 0 {
            return Err(Error::NotTwoTorsion);
        }
        let c = |v| f.from_int(v);
        let xt = t.0;
        let big_a = f.mul(c(3), xt);
        let big_b = f.add(f.mul(c(3), f.mul(xt, xt)), a);
        let a1 = f.neg(f.mul(c(2), big_a));
        let b1 = f.sub(f.mul(big_a, big_a), f.mul(c(4), big_b));
        let s = if f.p() == 3 { 0 } else { f.div(a1, c(3)) };
        // X' = x' - s removes the quadratic term
        let lin = f.add(f.sub(f.mul(c(3), f.mul(s, s)), f.mul(c(2), f.mul(a1, s))), b1);
        let con = f.sub(f.add(f.neg(f.mul(s, f.mul(s, s))), f.mul(a1, f.mul(s, s))), f.mul(b1, s));
        let cover = Curve::short_weierstrass(f.clone(), lin, con)?;
        let out = EtaleDoubleCover { base: base.clone(), cover, t, s, a1, b1 };
        for n in 1..=2 {
            if point_count(&out.cover, n)? != point_count(base, n)? {
                return Err(Error::InconsistentCounts {
                    genus: 1,
                    reason: format!("isogenous point counts differ over degree {n}"),
                });
            }
        }
        Ok(out)
    }

    pub fn base(&self) -> &Curve {
        &self.base
    }

    pub fn cover(&self) -> &Curve {
        &self.cover
    }

    pub fn base_point(&self) -> (Fe, Fe) {
        self.t
    }

    /// The nontrivial kernel point `T'` of `pi`.
    pub fn kernel_point(&self) -> EPoint {
        EPoint::Aff(self.s, 0)
    }

    fn cover_group(&self, n: u32) -> Result<EllipticOver> {
        Ok(EllipticOver::new(self.cover.weierstrass().unwrap().a, &*self.cover.ext(n)?))
    }

    pub fn base_group(&self, n: u32) -> Result<EllipticOver> {
        Ok(EllipticOver::new(self.base.weierstrass().unwrap().a, &*self.base.ext(n)?))
    }

    /// `pi` on points with coordinates in `F_{q^n}`.
    pub fn pi(&self, n: u32, p: EPoint) -> Result<EPoint> {
        let EPoint::Aff(xc, y) = p else { return Ok(EPoint::Inf) };
        let ext = self.base.ext(n)?;
        let f = &ext.big;
        let x = f.sub(xc, ext.embed(self.s));
        if x == 0 {
            return Ok(EPoint::Inf);
        }
        let x2 = f.mul(x, x);
        let u = f.div(f.mul(y, y), x2);
        let v = f.div(f.mul(y, f.sub(ext.embed(self.b1), x2)), x2);
        let c = |k| f.from_int(k);
        Ok(EPoint::Aff(f.add(f.div(u, c(4)), ext.embed(self.t.0)), f.div(v, c(8))))
    }

    pub fn tau(&self, n: u32, p: EPoint) -> Result<EPoint> {
        let g = self.cover_group(n)?;
        let ext = self.cover.ext(n)?;
        let t = match self.kernel_point() {
            EPoint::Aff(x, y) => EPoint::Aff(ext.embed(x), ext.embed(y)),
            EPoint::Inf => EPoint::Inf,
        };
        Ok(g.add(p, t))
    }

    /// The two preimages of a point over `F_{q^n}`, with coordinates in
    /// `F_{q^{2n}}`.
    pub fn preimages(&self, n: u32, p: EPoint) -> Result<[EPoint; 2]> {
        let up = self.base.field().subfield_map(n, 2 * n)?;
        let target = match p {
            EPoint::Inf => EPoint::Inf,
            EPoint::Aff(x, y) => EPoint::Aff(up.up(x), up.up(y)),
        };
        let ext = self.cover.ext(2 * n)?;
        let f = &ext.big;
        let g = self.cover_group(2 * n)?;
        if target == EPoint::Inf {
            let EPoint::Aff(tx, _) = self.kernel_point() else { unreachable!() };
            return Ok([EPoint::Inf, EPoint::Aff(ext.embed(tx), 0)]);
        }
        let EPoint::Aff(xp, _) = target else { unreachable!() };
        // pi's x-coordinate is u/4 + x_T with u = X + a' + b'/X
        let u = f.mul(f.from_int(4), f.sub(xp, ext.embed(self.t.0)));
        let lin = f.sub(ext.embed(self.a1), u);
        let disc = f.sub(f.mul(lin, lin), f.mul(f.from_int(4), ext.embed(self.b1)));
        let r = f.sqrt(disc).expect("preimages exist over the quadratic extension");
        let half = f.inv(f.from_int(2));
        let mut out = Vec::new();
        for root in [f.mul(f.sub(r, lin), half), f.mul(f.sub(f.neg(r), lin), half)] {
            let xc = f.add(root, ext.embed(self.s));
            for y in g.ys(xc, None) {
                let cand = EPoint::Aff(xc, y);
                if self.pi(2 * n, cand)? == target && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
        assert_eq!(out.len(), 2, "pi is two-to-one");
        Ok([out[0], out[1]])
    }

    fn cover_place(&self, n: u32, p: EPoint) -> Result<Place> {
        match p {
            EPoint::Inf => Ok(Place::infinity(1)),
            EPoint::Aff(x, y) => place_of_point(&self.cover, n, x, y),
        }
    }

    fn base_place(&self, n: u32, p: EPoint) -> Result<Place> {
        match p {
            EPoint::Inf => Ok(Place::infinity(1)),
            EPoint::Aff(x, y) => place_of_point(&self.base, n, x, y),
        }
    }

    fn point_of(place: &Place) -> EPoint {
        match place.rep {
            PlaceRep::Point { x, y } => EPoint::Aff(x, y),
            _ => EPoint::Inf,
        }
    }

    /// Places of `E'` above a place of `E`.
    pub fn fibre(&self, place: &Place) -> Result<Vec<Place>> {
        let n = place.degree;
        let mut out = BTreeSet::new();
        for pre in self.preimages(n, Self::point_of(place))? {
            out.insert(self.cover_place(2 * n, pre)?);
        }
        Ok(out.into_iter().collect())
    }

    pub fn splits(&self, place: &Place) -> Result<bool> {
        Ok(self.fibre(place)?.len() == 2)
    }

    pub fn image(&self, place: &Place) -> Result<Place> {
        let n = place.degree;
        self.base_place(n, self.pi(n, Self::point_of(place))?)
    }

    pub fn pushforward(&self, d: &Divisor) -> Result<Divisor> {
        let mut out = Divisor::zero();
        for (p, m) in d.terms() {
            let img = self.image(p)?;
            let f = (p.degree / img.degree) as i64;
            out.add_place(img, m * f);
        }
        Ok(out)
    }

    pub fn pullback(&self, d: &Divisor) -> Result<Divisor> {
        let mut out = Divisor::zero();
        for (p, m) in d.terms() {
            for q in self.fibre(p)? {
                out.add_place(q, m);
            }
        }
        Ok(out)
    }

    pub fn involution(&self, d: &Divisor) -> Result<Divisor> {
        let mut out = Divisor::zero();
        for (p, m) in d.terms() {
            let n = p.degree;
            out.add_place(self.cover_place(n, self.tau(n, Self::point_of(p))?)?, m);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::places_of_degree;

    fn cover() -> EtaleDoubleCover {
        let e = Curve::parse_default("ell:q=5;a=-1;b=0").unwrap();
        EtaleDoubleCover::new(&e, (0, 0)).unwrap()
    }

    #[test]
    fn cover_has_same_count() {
        let c = cover();
        assert_eq!(point_count(c.cover(), 1).unwrap(), 8);
    }

    #[test]
    fn rejects_non_torsion() {
        let e = Curve::parse_default("ell:q=5;a=-1;b=0").unwrap();
        assert!(matches!(EtaleDoubleCover::new(&e, (2, 1)), Err(Error::NotTwoTorsion)));
        let e3 = Curve::parse_default("ell:q=3;a=2;b=1").unwrap();
        assert!(two_torsion_points(&e3).is_empty());
    }

    #[test]
    fn pi_is_an_unramified_homomorphism() {
        for (desc, t) in [("ell:q=5;a=-1;b=0", (0, 0)), ("ell:q=7;a=0;b=1", (6, 0)), ("ell:q=3;a=1;b=0", (0, 0))] {
            let e = Curve::parse_default(desc).unwrap();
            let c = EtaleDoubleCover::new(&e, t).unwrap();
            for n in 1..=2 {
                let g = c.cover_group(n).unwrap();
                let h = c.base_group(n).unwrap();
                let pts = g.points();
                for &p in &pts {
                    let img = c.pi(n, p).unwrap();
                    assert!(h.is_on(img));
                    assert_eq!(c.pi(n, c.tau(n, p).unwrap()).unwrap(), img);
                    assert_ne!(c.tau(n, p).unwrap(), p);
                    for &r in pts.iter().take(5) {
                        assert_eq!(c.pi(n, g.add(p, r)).unwrap(), h.add(img, c.pi(n, r).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn fibres_are_split_or_inert() {
        let c = cover();
        for n in 1..=3 {
            for place in places_of_degree(c.base(), n).unwrap().iter() {
                let fib = c.fibre(place).unwrap();
                let total: u32 = fib.iter().map(|p| p.degree).sum();
                assert_eq!(total, 2 * n);
                assert!(fib.len() == 2 && fib.iter().all(|p| p.degree == n) || fib.len() == 1);
                for q in &fib {
                    assert_eq!(&c.image(q).unwrap(), place);
                }
            }
        }
    }

    #[test]
    fn functorialities() {
        let c = cover();
        let pl = places_of_degree(c.base(), 1).unwrap();
        let pl2 = places_of_degree(c.base(), 2).unwrap();
        let d = Divisor::place(pl[1].clone(), 2).add(&Divisor::place(pl2[0].clone(), -1));
        let up = c.pullback(&d).unwrap();
        assert_eq!(up.degree(), 2 * d.degree());
        assert_eq!(c.pushforward(&up).unwrap(), d.scale(2));
        assert_eq!(c.involution(&up).unwrap(), up);
        let cp = places_of_degree(c.cover(), 1).unwrap();
        let dd = Divisor::place(cp[0].clone(), 1);
        let inv = c.involution(&dd).unwrap();
        assert_ne!(inv, dd);
        assert_eq!(c.involution(&inv).unwrap(), dd);
        assert_eq!(c.pushforward(&dd).unwrap().degree(), 1);
    }
}
