use crate::curve::{Curve, Model, Place, PlaceRep};
use crate::error::Result;
use crate::ff::{FiniteField, Poly};

/// Reduced divisor class `(u, v)` on `y^2 = f(x)` with `deg f` odd:
/// `u` monic, `deg v < deg u <= g`, `u | f - v^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mumford {
    pub u: Poly,
    pub v: Poly,
}

impl Mumford {
    pub fn zero() -> Self {
        Mumford { u: Poly::one(), v: Poly::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_one()
    }

    pub fn to_text(&self) -> String {
        format!("({}, {})", self.u.to_text(), self.v.to_text())
    }
}

/// Cantor's algorithm on an imaginary hyperelliptic model.
#[derive(Clone, Debug)]
pub struct Cantor {
    field: FiniteField,
    f: Poly,
    genus: usize,
}

impl Cantor {
    pub fn new(curve: &Curve) -> Option<Cantor> {
        match curve.model() {
            Model::Hyperelliptic { f } if f.deg().unwrap_or(0) % 2 == 1 => Some(Cantor {
                field: curve.field().clone(),
                f: f.clone(),
                genus: curve.genus() as usize,
            }),
            _ => None,
        }
    }

    pub fn neg(&self, a: &Mumford) -> Mumford {
        Mumford { u: a.u.clone(), v: a.v.neg(&self.field).rem(&a.u, &self.field) }
    }

    pub fn add(&self, a: &Mumford, b: &Mumford) -> Mumford {
        let fld = &self.field;
        let (d0, e1, e2) = a.u.xgcd(&b.u, fld);
        let (d, c1, c2) = d0.xgcd(&a.v.add(&b.v, fld), fld);
        let s1 = c1.mul(&e1, fld);
        let s2 = c1.mul(&e2, fld);
        let s3 = c2;
        let u = a.u.mul(&b.u, fld).div_exact(&d.square(fld), fld);
        let num = s1
            .mul(&a.u, fld)
            .mul(&b.v, fld)
            .add(&s2.mul(&b.u, fld).mul(&a.v, fld), fld)
            .add(&s3.mul(&a.v.mul(&b.v, fld).add(&self.f, fld), fld), fld);
        let v = num.div_exact(&d, fld).rem(&u, fld);
        self.reduce(u, v)
    }

    pub fn reduce(&self, mut u: Poly, mut v: Poly) -> Mumford {
        let fld = &self.field;
        while u.deg().unwrap_or(0) > self.genus {
            let u2 = self.f.sub(&v.square(fld), fld).div_exact(&u, fld).make_monic(fld);
            v = v.neg(fld).rem(&u2, fld);
            u = u2;
        }
        let u = u.make_monic(fld);
        let v = v.rem(&u, fld);
        Mumford { u, v }
    }

    pub fn mul(&self, a: &Mumford, n: i64) -> Mumford {
        let mut base = if n < 0 { self.neg(a) } else { a.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Mumford::zero();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn is_valid(&self, a: &Mumford) -> bool {
        let fld = &self.field;
        a.u.is_monic()
            && a.u.deg().unwrap_or(0) <= self.genus
            && a.v.degree_i() < a.u.degree_i()
            && a.u.divides(&self.f.sub(&a.v.square(fld), fld), fld)
    }

    /// Every reduced class over the base field.
    pub fn elements(&self) -> Vec<Mumford> {
        let fld = &self.field;
        let q = fld.q() as usize;
        let mut out = Vec::new();
        for du in 0..=self.genus {
            for code in 0..q.pow(du as u32) {
                let mut coeffs = digits(code, q, du);
                coeffs.push(1);
                let u = Poly::new(coeffs);
                for vcode in 0..q.pow(du as u32) {
                    let v = Poly::new(digits(vcode, q, du));
                    let m = Mumford { u: u.clone(), v };
                    if self.is_valid(&m) {
                        out.push(m);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Class of `x - deg(x) inf` for a finite place.
    pub fn class_of_place(&self, curve: &Curve, place: &Place) -> Result<Mumford> {
        let PlaceRep::Point { .. } = place.rep else { return Ok(Mumford::zero()) };
        let ext = curve.ext(place.degree)?;
        let big = &ext.big;
        let orbit = place.orbit(curve)?;
        let mut xs: Vec<_> = orbit.iter().map(|p| p.0).collect();
        xs.sort();
        xs.dedup();
        if xs.len() < orbit.len() {
            // the orbit is stable under the hyperelliptic involution
            return Ok(Mumford::zero());
        }
        let mut u = Poly::one();
        for &(x, _) in &orbit {
            u = u.mul(&Poly::linear(big, x), big);
        }
        let mut v = Poly::zero();
        for (i, &(xi, yi)) in orbit.iter().enumerate() {
            let mut basis = Poly::constant(yi);
            for (j, &(xj, _)) in orbit.iter().enumerate() {
                if i != j {
                    let scale = big.inv(big.sub(xi, xj));
                    basis = basis.mul(&Poly::linear(big, xj), big).scale(scale, big);
                }
            }
            v = v.add(&basis, big);
        }
        let down = |p: &Poly| p.map_coeffs(|c| ext.restrict(c).expect("Galois-stable divisor"));
        Ok(self.reduce(down(&u), down(&v)))
    }
}

fn digits(mut code: usize, q: usize, len: usize) -> Vec<u32> {
    let mut d = Vec::with_capacity(len);
    for _ in 0..len {
        d.push((code % q) as u32);
        code /= q;
    }
    d
}
