use std::collections::BTreeSet;

use super::divisor::Divisor;
use super::model::{Curve, Model};
use super::place::{infinite_places, place_of_point, Place, PlaceRep};
use super::points::{artin_schreier_table, EllipticOver};
use crate::error::{Error, Result};
use crate::ff::{factor, Fe, FiniteField, Poly};

/// Affine model `y^2 + h(x) y = c(x)` with one place at infinity, where `x`
/// and `y` have pole orders 2 and `y_pole`.
#[derive(Clone, Debug)]
pub struct PlaneModel {
    pub h: Poly,
    pub c: Poly,
    pub y_pole: i64,
}

impl PlaneModel {
    pub fn of(curve: &Curve) -> Option<PlaneModel> {
        match curve.model() {
            Model::ProjectiveLine => None,
            Model::Elliptic(w) => {
                let [a1, a2, a3, a4, a6] = w.a;
                Some(PlaneModel {
                    h: Poly::new(vec![a3, a1]),
                    c: Poly::new(vec![a6, a4, a2, 1]),
                    y_pole: 3,
                })
            }
            Model::Hyperelliptic { f } => {
                let d = f.deg().unwrap_or(0);
                (d % 2 == 1).then(|| PlaneModel { h: Poly::zero(), c: f.clone(), y_pole: d as i64 })
            }
        }
    }

    fn embedded(&self, m: impl Fn(Fe) -> Fe + Copy) -> PlaneModel {
        PlaneModel { h: self.h.map_coeffs(m), c: self.c.map_coeffs(m), y_pole: self.y_pole }
    }
}

/// Function `(a(x) + b(x) y) / den(x)` on a curve; on the projective line
/// `b` is always zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveFunction {
    pub a: Poly,
    pub b: Poly,
    pub den: Poly,
}

impl CurveFunction {
    pub fn new(a: Poly, b: Poly, den: Poly, f: &FiniteField) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(Self::normalized(a, b, den, f))
    }

    fn normalized(a: Poly, b: Poly, den: Poly, f: &FiniteField) -> Self {
        if a.is_zero() && b.is_zero() {
            return Self::zero();
        }
        let g = a.gcd(&b, f).gcd(&den, f);
        let s = f.inv(den.lc());
        let (a, b, den) = if g.is_one() {
            (a, b, den)
        } else {
            (a.div_exact(&g, f), b.div_exact(&g, f), den.div_exact(&g, f))
        };
        CurveFunction { a: a.scale(s, f), b: b.scale(s, f), den: den.scale(s, f) }
    }

    pub fn zero() -> Self {
        CurveFunction { a: Poly::zero(), b: Poly::zero(), den: Poly::one() }
    }

    pub fn constant(c: Fe) -> Self {
        CurveFunction { a: Poly::constant(c), b: Poly::zero(), den: Poly::one() }
    }

    pub fn from_poly(a: Poly) -> Self {
        CurveFunction { a, b: Poly::zero(), den: Poly::one() }
    }

    pub fn y() -> Self {
        CurveFunction { a: Poly::zero(), b: Poly::one(), den: Poly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self, f: &FiniteField) -> Self {
        let a = self.a.mul(&o.den, f).add(&o.a.mul(&self.den, f), f);
        let b = self.b.mul(&o.den, f).add(&o.b.mul(&self.den, f), f);
        Self::normalized(a, b, self.den.mul(&o.den, f), f)
    }

    pub fn neg(&self, f: &FiniteField) -> Self {
        CurveFunction { a: self.a.neg(f), b: self.b.neg(f), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self, f: &FiniteField) -> Self {
        self.add(&o.neg(f), f)
    }

    pub fn scale(&self, s: Fe, f: &FiniteField) -> Self {
        Self::normalized(self.a.scale(s, f), self.b.scale(s, f), self.den.clone(), f)
    }

    /// Product, reducing `y^2 = c - h y`.
    pub fn mul(&self, o: &Self, model: Option<&PlaneModel>, f: &FiniteField) -> Self {
        let bb = self.b.mul(&o.b, f);
        let mut a = self.a.mul(&o.a, f);
        let mut b = self.a.mul(&o.b, f).add(&o.a.mul(&self.b, f), f);
        if !bb.is_zero() {
            let m = model.expect("y only occurs on plane models");
            a = a.add(&bb.mul(&m.c, f), f);
            b = b.sub(&bb.mul(&m.h, f), f);
        }
        Self::normalized(a, b, self.den.mul(&o.den, f), f)
    }

    /// `N(a + b y) = a^2 - a b h - b^2 c`.
    pub fn numerator_norm(&self, model: Option<&PlaneModel>, f: &FiniteField) -> Poly {
        if self.b.is_zero() {
            return self.a.clone();
        }
        let m = model.expect("y only occurs on plane models");
        self.a
            .square(f)
            .sub(&self.a.mul(&self.b, f).mul(&m.h, f), f)
            .sub(&self.b.square(f).mul(&m.c, f), f)
    }

    pub fn inv(&self, model: Option<&PlaneModel>, f: &FiniteField) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let n = self.numerator_norm(model, f);
        if self.b.is_zero() {
            return Ok(Self::normalized(self.den.clone(), Poly::zero(), n, f));
        }
        let m = model.expect("y only occurs on plane models");
        let a = self.a.sub(&self.b.mul(&m.h, f), f).mul(&self.den, f);
        let b = self.b.neg(f).mul(&self.den, f);
        Ok(Self::normalized(a, b, n, f))
    }

    pub fn to_text(&self) -> String {
        let num = match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => self.a.to_text(),
            (true, false) => format!("({})*y", self.b.to_text()),
            (false, false) => format!("{}+({})*y", self.a.to_text(), self.b.to_text()),
        };
        if self.den.is_one() {
            num
        } else {
            format!("({num})/({})", self.den.to_text())
        }
    }
}

// Truncated power series over a field.
fn ser_mul(a: &[Fe], b: &[Fe], f: &FiniteField) -> Vec<Fe> {
    let n = a.len();
    let mut out = vec![0; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b[..n - i].iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn ser_eval(p: &Poly, s: &[Fe], f: &FiniteField) -> Vec<Fe> {
    let mut acc = vec![0; s.len()];
    for &c in p.coeffs().iter().rev() {
        acc = ser_mul(&acc, s, f);
        acc[0] = f.add(acc[0], c);
    }
    acc
}

/// Local expansions `(x(t), y(t))` at an affine point in a uniformizer `t`.
fn local_parametrization(m: &PlaneModel, f: &FiniteField, x0: Fe, y0: Fe, prec: usize) -> (Vec<Fe>, Vec<Fe>) {
    let mut x = vec![0; prec];
    let mut y = vec![0; prec];
    x[0] = x0;
    y[0] = y0;
    let gy = f.add(f.mul(f.from_int(2), y0), m.h.eval(x0, f));
    if gy != 0 {
        // t = x - x0, solve for y
        if prec > 1 {
            x[1] = 1;
        }
        let d = f.inv(gy);
        for _ in 0..prec {
            let hx = ser_eval(&m.h, &x, f);
            let cx = ser_eval(&m.c, &x, f);
            let yy = ser_mul(&y, &y, f);
            let hy = ser_mul(&hx, &y, f);
            for i in 0..prec {
                let g = f.sub(f.add(yy[i], hy[i]), cx[i]);
                y[i] = f.sub(y[i], f.mul(g, d));
            }
        }
    } else {
        // t = y - y0, solve for x
        if prec > 1 {
            y[1] = 1;
        }
        let kx = f.sub(f.mul(m.h.derivative(f).eval(x0, f), y0), m.c.derivative(f).eval(x0, f));
        let d = f.inv(kx);
        let yy = ser_mul(&y, &y, f);
        for _ in 0..prec {
            let hx = ser_eval(&m.h, &x, f);
            let cx = ser_eval(&m.c, &x, f);
            let hy = ser_mul(&hx, &y, f);
            for i in 0..prec {
                let k = f.sub(f.add(yy[i], hy[i]), cx[i]);
                x[i] = f.sub(x[i], f.mul(k, d));
            }
        }
    }
    (x, y)
}

/// Coefficients of `a(x(t)) + b(x(t)) y(t)` up to `prec`, at an affine point.
pub(crate) fn local_expansion(
    m: &PlaneModel,
    f: &FiniteField,
    (x0, y0): (Fe, Fe),
    a: &Poly,
    b: &Poly,
    prec: usize,
) -> Vec<Fe> {
    let (x, y) = local_parametrization(m, f, x0, y0, prec);
    let mut s = ser_eval(a, &x, f);
    let by = ser_mul(&ser_eval(b, &x, f), &y, f);
    for (u, v) in s.iter_mut().zip(by) {
        *u = f.add(*u, v);
    }
    s
}

/// Order of vanishing of `a(x) + b(x) y` at a finite place of a plane model.
pub(crate) fn finite_order(curve: &Curve, m: &PlaneModel, place: &Place, a: &Poly, b: &Poly) -> Result<i64> {
    let PlaceRep::Point { x, y } = place.rep else {
        unreachable!("finite plane places are points")
    };
    let fq = curve.field();
    let norm = CurveFunction { a: a.clone(), b: b.clone(), den: Poly::one() }.numerator_norm(Some(m), fq);
    if norm.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let prec = 2 * norm.deg().unwrap_or(0) + 2;
    let ext = curve.ext(place.degree)?;
    let e = |c| ext.embed(c);
    let s = local_expansion(&m.embedded(e), &ext.big, (x, y), &a.map_coeffs(e), &b.map_coeffs(e), prec);
    Ok(s.iter().position(|&c| c != 0).expect("precision bound covers the order") as i64)
}

pub(crate) fn infinite_order(m: &PlaneModel, a: &Poly, b: &Poly) -> i64 {
    let oa = a.deg().map(|d| -2 * d as i64);
    let ob = b.deg().map(|d| -2 * d as i64 - m.y_pole);
    match (oa, ob) {
        (Some(u), Some(v)) => u.min(v),
        (Some(u), None) => u,
        (None, Some(v)) => v,
        (None, None) => i64::MAX,
    }
}

/// `y` with `y^2 + h(x) y = c(x)` over `f`.
fn ys_over(curve: &Curve, m: &PlaneModel, f: &FiniteField, emb: impl Fn(Fe) -> Fe + Copy, x: Fe) -> Vec<Fe> {
    match curve.model() {
        Model::Elliptic(w) => {
            let e = EllipticOver { field: f.clone(), a: w.a.map(emb) };
            let table = artin_schreier_table(f);
            e.ys(x, table.as_deref())
        }
        _ => {
            let v = m.c.map_coeffs(emb).eval(x, f);
            match f.sqrt(v) {
                None => Vec::new(),
                Some(0) => vec![0],
                Some(s) => vec![s, f.neg(s)],
            }
        }
    }
}

/// Places of a plane model lying over the zeros of an irreducible `r(x)`.
pub fn places_over(curve: &Curve, r: &Poly) -> Result<Vec<Place>> {
    let m = PlaneModel::of(curve).ok_or_else(|| Error::UnsupportedCurve(curve.descriptor().into()))?;
    let n = r.deg().expect("nonzero") as u32;
    let ext = curve.ext(n)?;
    let re = r.map_coeffs(|c| ext.embed(c));
    let x0 = ext
        .big
        .elements()
        .find(|&x| re.eval(x, &ext.big) == 0)
        .expect("irreducible polynomial splits in its degree extension");
    let mut out = BTreeSet::new();
    let ys = ys_over(curve, &m, &ext.big, |c| ext.embed(c), x0);
    if ys.is_empty() {
        let ext2 = curve.ext(2 * n)?;
        let up = curve.field().subfield_map(n, 2 * n)?;
        let x1 = up.up(x0);
        for y in ys_over(curve, &m, &ext2.big, |c| ext2.embed(c), x1) {
            out.insert(place_of_point(curve, 2 * n, x1, y)?);
        }
    } else {
        for y in ys {
            out.insert(place_of_point(curve, n, x0, y)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// Principal divisor of a nonzero function.
pub fn divisor_of_function(curve: &Curve, g: &CurveFunction) -> Result<Divisor> {
    if g.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let fq = curve.field();
    let mut div = Divisor::zero();
    if curve.is_projective_line() {
        for (poly, sign) in [(&g.a, 1i64), (&g.den, -1)] {
            for (r, e) in factor(poly, fq)?.1 {
                let d = r.deg().unwrap() as u32;
                div.add_place(Place { degree: d, rep: PlaceRep::Poly(r) }, sign * e as i64);
            }
        }
        div.add_place(Place::infinity(1), g.den.degree_i() - g.a.degree_i());
        return Ok(div);
    }
    let m = PlaneModel::of(curve).ok_or_else(|| Error::UnsupportedCurve(curve.descriptor().into()))?;
    let norm = g.numerator_norm(Some(&m), fq);
    let mut roots = BTreeSet::new();
    for poly in [&norm, &g.den] {
        for (r, _) in factor(poly, fq)?.1 {
            roots.insert(r);
        }
    }
    for r in roots {
        for place in places_over(curve, &r)? {
            let ord = finite_order(curve, &m, &place, &g.a, &g.b)? - finite_order(curve, &m, &place, &g.den, &Poly::zero())?;
            div.add_place(place, ord);
        }
    }
    let inf = infinite_places(curve).remove(0);
    div.add_place(inf, infinite_order(&m, &g.a, &g.b) + 2 * g.den.degree_i());
    debug_assert_eq!(div.degree(), 0);
    Ok(div)
}
