use super::model::{Curve, Model};
use crate::error::Result;
use crate::ff::{Extension, Fe, FiniteField, Poly};

/// Point of an elliptic curve over some field of the tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EPoint {
    Inf,
    Aff(Fe, Fe),
}

/// Weierstrass group law over a given field (coefficients already embedded).
#[derive(Clone)]
pub struct EllipticOver {
    pub field: FiniteField,
    pub a: [Fe; 5],
}

impl EllipticOver {
    pub fn new(a: [Fe; 5], ext: &Extension) -> Self {
        EllipticOver { field: ext.big.clone(), a: a.map(|c| ext.embed(c)) }
    }

    pub fn over_base(a: [Fe; 5], field: &FiniteField) -> Self {
        EllipticOver { field: field.clone(), a }
    }

    pub fn is_on(&self, p: EPoint) -> bool {
        match p {
            EPoint::Inf => true,
            EPoint::Aff(x, y) => {
                let f = &self.field;
                let [a1, a2, a3, a4, a6] = self.a;
                let lhs = f.add(f.mul(y, y), f.add(f.mul(f.mul(a1, x), y), f.mul(a3, y)));
                lhs == rhs_cubic(f, [a2, a4, a6], x)
            }
        }
    }

    pub fn neg(&self, p: EPoint) -> EPoint {
        match p {
            EPoint::Inf => EPoint::Inf,
            EPoint::Aff(x, y) => {
                let f = &self.field;
                let t = f.add(f.mul(self.a[0], x), self.a[2]);
                EPoint::Aff(x, f.neg(f.add(y, t)))
            }
        }
    }

    pub fn add(&self, p: EPoint, r: EPoint) -> EPoint {
        let (x1, y1, x2, y2) = match (p, r) {
            (EPoint::Inf, _) => return r,
            (_, EPoint::Inf) => return p,
            (EPoint::Aff(x1, y1), EPoint::Aff(x2, y2)) => (x1, y1, x2, y2),
        };
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let (lambda, nu) = if x1 != x2 {
            let dx = f.sub(x2, x1);
            let l = f.div(f.sub(y2, y1), dx);
            let n = f.div(f.sub(f.mul(y1, x2), f.mul(y2, x1)), dx);
            (l, n)
        } else {
            let den = f.add(f.add(f.add(y1, y2), f.mul(a1, x2)), a3);
            if den == 0 {
                return EPoint::Inf;
            }
            // doubling
            let three = f.from_int(3);
            let two = f.from_int(2);
            let x1sq = f.mul(x1, x1);
            let num = f.sub(
                f.add(f.add(f.mul(three, x1sq), f.mul(f.mul(two, a2), x1)), a4),
                f.mul(a1, y1),
            );
            let l = f.div(num, den);
            let nnum = f.sub(
                f.add(f.add(f.neg(f.mul(x1sq, x1)), f.mul(a4, x1)), f.mul(two, a6)),
                f.mul(a3, y1),
            );
            (l, f.div(nnum, den))
        };
        let x3 = f.sub(f.sub(f.sub(f.add(f.mul(lambda, lambda), f.mul(a1, lambda)), a2), x1), x2);
        let y3 = f.sub(f.neg(f.mul(f.add(lambda, a1), x3)), f.add(nu, a3));
        EPoint::Aff(x3, y3)
    }

    pub fn sub(&self, p: EPoint, r: EPoint) -> EPoint {
        self.add(p, self.neg(r))
    }

    pub fn mul(&self, p: EPoint, n: i64) -> EPoint {
        let mut base = if n < 0 { self.neg(p) } else { p };
        let mut k = n.unsigned_abs();
        let mut acc = EPoint::Inf;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn order(&self, p: EPoint) -> u64 {
        let mut n = 1;
        let mut cur = p;
        while cur != EPoint::Inf {
            cur = self.add(cur, p);
            n += 1;
        }
        n
    }

    /// All `y` with `(x, y)` on the curve.
    pub fn ys(&self, x: Fe, as_table: Option<&[u32]>) -> Vec<Fe> {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let b = f.add(f.mul(a1, x), a3);
        let c = rhs_cubic(f, [a2, a4, a6], x);
        if f.is_odd() {
            // (2y + b)^2 = b^2 + 4c
            let disc = f.add(f.mul(b, b), f.mul(f.from_int(4), c));
            let Some(s) = f.sqrt(disc) else { return Vec::new() };
            let half = f.inv(f.from_int(2));
            let y1 = f.mul(f.sub(s, b), half);
            if s == 0 {
                return vec![y1];
            }
            let y2 = f.mul(f.sub(f.neg(s), b), half);
            let mut v = vec![y1, y2];
            v.sort();
            v
        } else if b == 0 {
            // y^2 = c has exactly one root in characteristic 2
            vec![f.sqrt(c).expect("squares are surjective")]
        } else {
            // y = b z, z^2 + z = c / b^2
            let table = as_table.expect("Artin-Schreier table required");
            let t = f.div(c, f.mul(b, b));
            match table[t as usize] {
                u32::MAX => Vec::new(),
                z => {
                    let mut v = vec![f.mul(b, z), f.mul(b, f.add(z, 1))];
                    v.sort();
                    v
                }
            }
        }
    }

    pub fn points(&self) -> Vec<EPoint> {
        let table = artin_schreier_table(&self.field);
        let mut out = vec![EPoint::Inf];
        for x in self.field.elements() {
            for y in self.ys(x, table.as_deref()) {
                out.push(EPoint::Aff(x, y));
            }
        }
        out
    }
}

fn rhs_cubic(f: &FiniteField, [a2, a4, a6]: [Fe; 3], x: Fe) -> Fe {
    let x2 = f.mul(x, x);
    f.add(f.add(f.mul(x2, x), f.mul(a2, x2)), f.add(f.mul(a4, x), a6))
}

/// For characteristic 2: `table[c]` is a root of `z^2 + z = c` or `u32::MAX`.
pub fn artin_schreier_table(f: &FiniteField) -> Option<Vec<u32>> {
    if f.is_odd() {
        return None;
    }
    let mut t = vec![u32::MAX; f.q() as usize];
    for z in f.elements() {
        let c = f.add(f.mul(z, z), z);
        if t[c as usize] == u32::MAX || z < t[c as usize] {
            t[c as usize] = z;
        }
    }
    Some(t)
}

/// Affine points `(x, y)` over the degree-`n` extension, sorted.
pub fn affine_points(curve: &Curve, n: u32) -> Result<Vec<(Fe, Fe)>> {
    let ext = curve.ext(n)?;
    let big = &ext.big;
    let mut out = Vec::new();
    match curve.model() {
        Model::ProjectiveLine => {
            for x in big.elements() {
                out.push((x, 0));
            }
        }
        Model::Elliptic(w) => {
            let e = EllipticOver::new(w.a, &ext);
            let table = artin_schreier_table(big);
            for x in big.elements() {
                for y in e.ys(x, table.as_deref()) {
                    out.push((x, y));
                }
            }
        }
        Model::Hyperelliptic { f } => {
            let fe = f.map_coeffs(|c| ext.embed(c));
            for x in big.elements() {
                let v = fe.eval(x, big);
                if let Some(s) = big.sqrt(v) {
                    out.push((x, s));
                    if s != 0 {
                        out.push((x, big.neg(s)));
                    }
                }
            }
            out.sort();
        }
    }
    Ok(out)
}

/// Number of points at infinity rational over the degree-`n` extension.
pub fn points_at_infinity(curve: &Curve, n: u32) -> Result<u64> {
    Ok(match curve.model() {
        Model::ProjectiveLine | Model::Elliptic(_) => 1,
        Model::Hyperelliptic { f } => {
            let d = f.deg().unwrap_or(0);
            if d % 2 == 1 {
                1
            } else {
                let ext = curve.ext(n)?;
                if ext.big.is_square(ext.embed(f.lc())) {
                    2
                } else {
                    0
                }
            }
        }
    })
}

/// `#X(F_{q^n})` by exhaustive enumeration.
pub fn point_count(curve: &Curve, n: u32) -> Result<u64> {
    if curve.is_projective_line() {
        let ext = curve.ext(n)?;
        return Ok(ext.big.q() as u64 + 1);
    }
    Ok(affine_points(curve, n)?.len() as u64 + points_at_infinity(curve, n)?)
}

/// Embeds a base-field polynomial into the extension.
pub fn embed_poly(p: &Poly, ext: &Extension) -> Poly {
    p.map_coeffs(|c| ext.embed(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_count_examples() {
        let p1 = Curve::parse_default("p1:q=3").unwrap();
        assert_eq!(point_count(&p1, 2).unwrap(), 10);
        let e2 = Curve::parse_default("ell2:q=2;f=x^3").unwrap();
        assert_eq!(point_count(&e2, 1).unwrap(), 3);
        assert_eq!(point_count(&e2, 2).unwrap(), 9);
        let e3 = Curve::parse_default("ell:q=3;a=1;b=0").unwrap();
        assert_eq!(point_count(&e3, 1).unwrap(), 4);
        assert_eq!(point_count(&e3, 2).unwrap(), 16);
        let e5 = Curve::parse_default("ell:q=5;a=-1;b=0").unwrap();
        assert_eq!(point_count(&e5, 1).unwrap(), 8);
    }

    #[test]
    fn group_law_is_abelian_on_small_curves() {
        for d in ["ell:q=3;a=1;b=0", "ell2:q=2;f=x^3", "ell:q=5;a=1;b=1", "ell2:q=4;f=x^3+x+1"] {
            let c = Curve::parse_default(d).unwrap();
            let w = c.weierstrass().unwrap();
            for n in 1..=2 {
                let ext = c.ext(n).unwrap();
                let e = EllipticOver::new(w.a, &ext);
                let pts = e.points();
                for &p in &pts {
                    assert!(e.is_on(p));
                    assert_eq!(e.add(p, e.neg(p)), EPoint::Inf);
                    assert_eq!(e.mul(p, pts.len() as i64), EPoint::Inf, "{d} n={n}");
                    for &r in pts.iter().take(6) {
                        let s = e.add(p, r);
                        assert!(e.is_on(s));
                        assert_eq!(s, e.add(r, p));
                        for &t in pts.iter().take(4) {
                            assert_eq!(e.add(s, t), e.add(p, e.add(r, t)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn order_four_point() {
        let c = Curve::parse_default("ell:q=3;a=1;b=0").unwrap();
        let e = EllipticOver::over_base(c.weierstrass().unwrap().a, c.field());
        assert_eq!(e.add(EPoint::Aff(2, 1), EPoint::Aff(2, 1)), EPoint::Aff(0, 0));
        assert_eq!(e.order(EPoint::Aff(2, 1)), 4);
    }
}
