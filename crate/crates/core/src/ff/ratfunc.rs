use super::field::{Fe, FiniteField};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Reduced fraction `num/den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly, f: &FiniteField) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::one() });
        }
        let g = num.gcd(&den, f);
        let num = num.div_exact(&g, f);
        let den = den.div_exact(&g, f);
        let inv = f.inv(den.lc());
        Ok(RationalFunction { num: num.scale(inv, f), den: den.scale(inv, f) })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn constant(a: Fe) -> Self {
        Self::from_poly(Poly::constant(a))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self, f: &FiniteField) -> Self {
        let num = self.num.mul(&o.den, f).add(&o.num.mul(&self.den, f), f);
        Self::new(num, self.den.mul(&o.den, f), f).expect("nonzero denominators")
    }

    pub fn sub(&self, o: &Self, f: &FiniteField) -> Self {
        self.add(&o.neg(f), f)
    }

    pub fn neg(&self, f: &FiniteField) -> Self {
        RationalFunction { num: self.num.neg(f), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self, f: &FiniteField) -> Self {
        Self::new(self.num.mul(&o.num, f), self.den.mul(&o.den, f), f).expect("nonzero denominators")
    }

    pub fn scale(&self, a: Fe, f: &FiniteField) -> Self {
        Self::new(self.num.scale(a, f), self.den.clone(), f).expect("nonzero denominator")
    }

    pub fn inv(&self, f: &FiniteField) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Self::new(self.den.clone(), self.num.clone(), f)
    }

    /// Valuation at infinity: `deg den - deg num`.
    pub fn ord_infinity(&self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(self.den.degree_i() - self.num.degree_i())
    }

    pub fn to_text(&self) -> String {
        if self.den.is_one() {
            self.num.to_text()
        } else {
            format!("({})/({})", self.num.to_text(), self.den.to_text())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    #[test]
    fn canonical_form() {
        let f = make_field(5, 1).unwrap();
        let x = Poly::x();
        let a = RationalFunction::new(x.mul(&x, &f).scale(2, &f), x.scale(3, &f), &f).unwrap();
        // 2x^2 / 3x = (2/3) x = 4x
        assert_eq!(a, RationalFunction::from_poly(Poly::new(vec![0, 4])));
        let b = RationalFunction::new(Poly::one(), x.clone(), &f).unwrap();
        let s = a.add(&b, &f).sub(&b, &f);
        assert_eq!(s, a);
        assert_eq!(b.ord_infinity().unwrap(), 1);
    }
}
