use std::collections::BTreeMap;

use super::divisor::Divisor;
use super::function::{finite_order, local_expansion, places_over, CurveFunction, PlaneModel};
use super::model::{Curve, Model};
use super::place::{Place, PlaceRep};
use crate::error::{check_cap, Error, Result};
use crate::ff::{factor, nullspace, Fe, Poly};

/// A basis of `L(D) = {f : div(f) + D >= 0}`.
pub fn riemann_roch(curve: &Curve, d: &Divisor) -> Result<Vec<CurveFunction>> {
    match curve.model() {
        Model::ProjectiveLine => Ok(projective_line(curve, d)),
        Model::Hyperelliptic { f } => {
            if d.terms().any(|(p, _)| !p.is_infinite()) {
                return Err(Error::UnsupportedDivisor(d.to_text()));
            }
            let deg_f = f.deg().unwrap_or(0) as i64;
            let g = curve.genus() as i64;
            let inf: Vec<i64> = d.terms().map(|(_, n)| n).collect();
            let (x_pole, y_pole, bound) = if deg_f % 2 == 1 {
                (2, deg_f, inf.first().copied().unwrap_or(0))
            } else {
                // both places above infinity must carry the same weight
                let split = super::place::infinite_places(curve).len() == 2;
                let n = match (split, inf.as_slice()) {
                    (_, []) => 0,
                    (false, [n]) => *n,
                    (true, [a, b]) if a == b => *a,
                    _ => return Err(Error::UnsupportedDivisor(d.to_text())),
                };
                (1, g + 1, n)
            };
            Ok(monomials(x_pole, y_pole, bound)
                .into_iter()
                .map(|(i, j)| monomial_function(i, j))
                .collect())
        }
        Model::Elliptic(_) => plane(curve, d),
    }
}

fn projective_line(curve: &Curve, d: &Divisor) -> Vec<CurveFunction> {
    let f = curve.field();
    let mut h = Poly::one();
    let mut m = Poly::one();
    let mut n_inf = 0;
    for (p, n) in d.terms() {
        match &p.rep {
            PlaceRep::Poly(r) if n > 0 => h = h.mul(&r.pow(n as u64, f), f),
            PlaceRep::Poly(r) => m = m.mul(&r.pow((-n) as u64, f), f),
            _ => n_inf = n,
        }
    }
    let top = h.degree_i() + n_inf - m.degree_i();
    (0..=top)
        .map(|i| {
            CurveFunction::new(m.mul(&Poly::monomial(1, i as usize), f), Poly::zero(), h.clone(), f)
                .expect("nonzero denominator")
        })
        .collect()
}

/// Exponent pairs `(i, j)` of `x^i y^j` with pole order at most `bound`,
/// sorted by pole order.
fn monomials(x_pole: i64, y_pole: i64, bound: i64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..2 {
        let mut i = 0;
        while x_pole * i + y_pole * j <= bound {
            out.push((i as usize, j as usize, x_pole * i + y_pole * j));
            i += 1;
        }
    }
    out.sort_by_key(|&(i, j, o)| (o, j, i));
    out.into_iter().map(|(i, j, _)| (i, j)).collect()
}

fn monomial_function(i: usize, j: usize) -> CurveFunction {
    let m = Poly::monomial(1, i);
    if j == 0 {
        CurveFunction::from_poly(m)
    } else {
        CurveFunction { a: Poly::zero(), b: m, den: Poly::one() }
    }
}

/// Minimal polynomial over the base field of the `x`-coordinate of a place.
fn x_minpoly(curve: &Curve, place: &Place) -> Result<Poly> {
    let PlaceRep::Point { x, .. } = place.rep else { unreachable!("finite place") };
    let ext = curve.ext(place.degree)?;
    let big = &ext.big;
    let mut conj = vec![x];
    let mut c = ext.frob(x);
    while c != x {
        conj.push(c);
        c = ext.frob(c);
    }
    let mut prod = Poly::one();
    for c in conj {
        prod = prod.mul(&Poly::linear(big, c), big);
    }
    Ok(prod.map_coeffs(|c| ext.restrict(c).expect("minimal polynomial is rational")))
}

fn plane(curve: &Curve, d: &Divisor) -> Result<Vec<CurveFunction>> {
    let fq = curve.field();
    let model = PlaneModel::of(curve).expect("plane model");
    let mut h = Poly::one();
    let mut n_inf = 0;
    for (p, n) in d.terms() {
        if p.is_infinite() {
            n_inf = n;
        } else if n > 0 {
            h = h.mul(&x_minpoly(curve, p)?.pow(n as u64, fq), fq);
        }
    }
    let bound = n_inf + 2 * h.degree_i();
    if bound < 0 {
        return Ok(Vec::new());
    }

    // required vanishing order of the numerator at each finite place
    let mut required: BTreeMap<Place, i64> = BTreeMap::new();
    for (r, _) in factor(&h, fq)?.1 {
        for p in places_over(curve, &r)? {
            let oh = finite_order(curve, &model, &p, &h, &Poly::zero())?;
            required.insert(p, oh);
        }
    }
    for (p, n) in d.terms().filter(|(p, _)| !p.is_infinite()) {
        *required.entry(p.clone()).or_insert(0) -= n;
    }
    required.retain(|_, r| *r > 0);

    let monos = monomials(2, model.y_pole, bound);
    let big_deg = required.keys().fold(1u32, |acc, p| lcm(acc, p.degree));
    check_cap((fq.q() as u128).checked_pow(big_deg).unwrap_or(u128::MAX), fq.cap())?;
    let ext = curve.ext(big_deg)?;
    let big = &ext.big;
    let emb = |c| ext.embed(c);
    let model_big = PlaneModel { h: model.h.map_coeffs(emb), c: model.c.map_coeffs(emb), y_pole: model.y_pole };
    let mono_polys: Vec<(Poly, Poly)> = monos
        .iter()
        .map(|&(i, j)| {
            let m = Poly::monomial(1, i);
            if j == 0 {
                (m, Poly::zero())
            } else {
                (Poly::zero(), m)
            }
        })
        .collect();

    let mut rows: Vec<Vec<Fe>> = Vec::new();
    for (p, &r) in &required {
        let PlaceRep::Point { x, y } = p.rep else { unreachable!() };
        let up = fq.subfield_map(p.degree, big_deg)?;
        let (mut a, mut b) = (up.up(x), up.up(y));
        for _ in 0..p.degree {
            let exps: Vec<Vec<Fe>> = mono_polys
                .iter()
                .map(|(pa, pb)| local_expansion(&model_big, big, (a, b), pa, pb, r as usize))
                .collect();
            for i in 0..r as usize {
                rows.push(exps.iter().map(|e| e[i]).collect());
            }
            a = ext.frob(a);
            b = ext.frob(b);
        }
    }

    let mut out = Vec::new();
    for v in nullspace(&rows, monos.len(), big) {
        let mut num_a = Poly::zero();
        let mut num_b = Poly::zero();
        for (&(i, j), &c) in monos.iter().zip(&v) {
            let c = ext.restrict(c).expect("kernel basis is rational");
            if c == 0 {
                continue;
            }
            let term = Poly::monomial(c, i);
            if j == 0 {
                num_a = num_a.add(&term, fq);
            } else {
                num_b = num_b.add(&term, fq);
            }
        }
        out.push(CurveFunction::new(num_a, num_b, h.clone(), fq)?);
    }
    Ok(out)
}

fn lcm(a: u32, b: u32) -> u32 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{divisor_of_function, places_of_degree};

    fn in_space(curve: &Curve, d: &Divisor, g: &CurveFunction) -> bool {
        if g.is_zero() {
            return true;
        }
        let sum = divisor_of_function(curve, g).unwrap().add(d);
        sum.is_zero() || sum.is_effective()
    }

    #[test]
    fn elliptic_two_origin() {
        let c = Curve::parse_default("ell:q=3;a=1;b=0").unwrap();
        let basis = riemann_roch(&c, &Divisor::place(Place::infinity(1), 2)).unwrap();
        assert_eq!(basis, vec![CurveFunction::constant(1), CurveFunction::from_poly(Poly::x())]);
    }

    #[test]
    fn elliptic_dimensions_match_degree() {
        let c = Curve::parse_default("ell:q=5;a=1;b=1").unwrap();
        let p1 = places_of_degree(&c, 1).unwrap();
        let p2 = places_of_degree(&c, 2).unwrap();
        let a = p1[0].clone();
        let b = p1[1].clone();
        let q = p2[0].clone();
        let cases = vec![
            Divisor::place(a.clone(), 1),
            Divisor::place(a.clone(), 2).sub(&Divisor::place(b.clone(), 1)),
            Divisor::place(q.clone(), 1).add(&Divisor::place(Place::infinity(1), 1)),
            Divisor::place(q.clone(), 2).sub(&Divisor::place(a.clone(), 3)),
            Divisor::place(a.clone(), 1).sub(&Divisor::place(b.clone(), 1)),
            Divisor::place(Place::infinity(1), 4).sub(&Divisor::place(q.clone(), 1)),
        ];
        for d in cases {
            let basis = riemann_roch(&c, &d).unwrap();
            if d.degree() > 0 {
                assert_eq!(basis.len() as i64, d.degree(), "{d}");
            }
            for g in &basis {
                assert!(in_space(&c, &d, g), "{g:?} not in L({d})");
            }
        }
    }

    #[test]
    fn exhaustive_count_matches_dimension() {
        let c = Curve::parse_default("ell:q=3;a=1;b=0").unwrap();
        let f = c.field();
        let p1 = places_of_degree(&c, 1).unwrap();
        let (a, b) = (p1[0].clone(), p1[2].clone());
        let d = Divisor::place(a.clone(), 2).sub(&Divisor::place(b, 1)).add(&Divisor::place(Place::infinity(1), 1));
        let h = x_minpoly(&c, &a).unwrap().pow(2, f);
        let monos = monomials(2, 3, 1 + 2 * h.degree_i());
        let mut count = 0;
        for code in 0..3u32.pow(monos.len() as u32) {
            let mut g = CurveFunction::zero();
            let mut k = code;
            for &(i, j) in &monos {
                let m = monomial_function(i, j).scale(k % 3, f);
                g = g.add(&m, f);
                k /= 3;
            }
            let g = CurveFunction::new(g.a, g.b, h.clone(), f).unwrap();
            if in_space(&c, &d, &g) {
                count += 1;
            }
        }
        let dim = riemann_roch(&c, &d).unwrap().len() as u32;
        assert_eq!(dim, 2);
        assert_eq!(count, 3u32.pow(dim));
    }

    #[test]
    fn projective_line_dimension() {
        let c = Curve::parse_default("p1:q=3").unwrap();
        let pl = places_of_degree(&c, 2).unwrap();
        let d = Divisor::place(pl[0].clone(), 2).sub(&Divisor::place(Place::infinity(1), 1));
        let basis = riemann_roch(&c, &d).unwrap();
        assert_eq!(basis.len(), 4);
        for g in &basis {
            assert!(in_space(&c, &d, g));
        }
    }

    #[test]
    fn hyperelliptic_at_infinity() {
        let c = Curve::parse_default("hyp:q=3;f=x^5+2x+1").unwrap();
        for n in 0..8 {
            let d = Divisor::place(Place::infinity(1), n);
            let dim = riemann_roch(&c, &d).unwrap().len() as i64;
            if n > 2 {
                assert_eq!(dim, n - 1);
            }
        }
        let fin = places_of_degree(&c, 1).unwrap()[0].clone();
        assert!(matches!(riemann_roch(&c, &Divisor::place(fin, 1)), Err(Error::UnsupportedDivisor(_))));
    }
}
