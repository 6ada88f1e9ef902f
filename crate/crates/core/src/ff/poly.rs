use std::cmp::Ordering;
use std::fmt::Write as _;

use super::field::{Fe, FiniteField};
use crate::error::{Error, Result};

/// Dense univariate polynomial, little-endian, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Fe>,
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

/// `f = lead * prod A_m^m` with `A_m` monic, squarefree and pairwise coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub lead: Fe,
    pub parts: Vec<(Poly, u32)>,
}

impl Poly {
    pub fn new(mut c: Vec<Fe>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { c: vec![1] }
    }

    pub fn constant(a: Fe) -> Self {
        Poly::new(vec![a])
    }

    pub fn x() -> Self {
        Poly { c: vec![0, 1] }
    }

    pub fn monomial(a: Fe, e: usize) -> Self {
        let mut c = vec![0; e + 1];
        c[e] = a;
        Poly::new(c)
    }

    /// `x - a`
    pub fn linear(f: &FiniteField, a: Fe) -> Self {
        Poly::new(vec![f.neg(a), 1])
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn degree_i(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> Fe {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == 1
    }

    pub fn add(&self, o: &Poly, f: &FiniteField) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Poly, f: &FiniteField) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self, f: &FiniteField) -> Poly {
        Poly { c: self.c.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn scale(&self, a: Fe, f: &FiniteField) -> Poly {
        Poly::new(self.c.iter().map(|&b| f.mul(a, b)).collect())
    }

    pub fn mul(&self, o: &Poly, f: &FiniteField) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn square(&self, f: &FiniteField) -> Poly {
        self.mul(self, f)
    }

    pub fn pow(&self, mut e: u64, f: &FiniteField) -> Poly {
        let mut acc = Poly::one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, f);
            }
            e >>= 1;
            if e > 0 {
                b = b.square(f);
            }
        }
        acc
    }

    /// Multiplies by `x^e`.
    pub fn shift(&self, e: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; e];
        c.extend_from_slice(&self.c);
        Poly { c }
    }

    pub fn divrem(&self, d: &Poly, f: &FiniteField) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let mut qv = vec![0; r.len() - dd];
        let inv = f.inv(d.lc());
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            let t = f.mul(c, inv);
            qv[i - dd] = t;
            for j in 0..=dd {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(t, d.c[j]));
            }
        }
        r.truncate(dd);
        (Poly::new(qv), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly, f: &FiniteField) -> Poly {
        self.divrem(d, f).1
    }

    /// Quotient, asserting the division is exact.
    pub fn div_exact(&self, d: &Poly, f: &FiniteField) -> Poly {
        let (q, r) = self.divrem(d, f);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, g: &Poly, f: &FiniteField) -> bool {
        g.rem(self, f).is_zero()
    }

    pub fn make_monic(&self, f: &FiniteField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f.inv(self.lc()), f)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Poly, f: &FiniteField) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.make_monic(f)
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &Poly, f: &FiniteField) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, f);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1, f), f);
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1, f), f);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lc());
        (r0.scale(inv, f), s0.scale(inv, f), t0.scale(inv, f))
    }

    pub fn derivative(&self, f: &FiniteField) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| f.mul(f.from_int((i % f.p() as usize) as i64), a))
                .collect(),
        )
    }

    pub fn eval(&self, x: Fe, f: &FiniteField) -> Fe {
        self.c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
    }

    /// `self(g)`
    pub fn compose(&self, g: &Poly, f: &FiniteField) -> Poly {
        self.c
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, &a| acc.mul(g, f).add(&Poly::constant(a), f))
    }

    /// Maps every coefficient through `m` (e.g. an embedding into an extension).
    pub fn map_coeffs(&self, m: impl Fn(Fe) -> Fe) -> Poly {
        Poly::new(self.c.iter().map(|&a| m(a)).collect())
    }

    /// `g` with `g(x)^p = self`, assuming only `p`-th powers of `x` occur.
    fn pth_root(&self, f: &FiniteField) -> Poly {
        let p = f.p() as usize;
        let root_exp = (f.q() / f.p()) as u64; // a^(q/p) is the inverse of Frobenius
        Poly::new(
            self.c
                .iter()
                .step_by(p)
                .map(|&a| f.pow(a, root_exp))
                .collect(),
        )
    }

    pub fn powmod(&self, mut e: u128, m: &Poly, f: &FiniteField) -> Poly {
        let mut acc = Poly::one().rem(m, f);
        let mut b = self.rem(m, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, f).rem(m, f);
            }
            e >>= 1;
            if e > 0 {
                b = b.square(f).rem(m, f);
            }
        }
        acc
    }

    pub fn squarefree_decompose(&self, f: &FiniteField) -> Result<SquarefreeDecomposition> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let lead = self.lc();
        let mut parts = Vec::new();
        squarefree_monic(&self.make_monic(f), f, 1, &mut parts);
        parts.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Ok(SquarefreeDecomposition { lead, parts })
    }

    pub fn is_squarefree(&self, f: &FiniteField) -> bool {
        !self.is_zero() && self.gcd(&self.derivative(f), f).is_one()
    }

    /// Square root with the sign fixed by the canonical root of the leading
    /// coefficient; `None` when no square root exists over this field.
    pub fn perfect_square_root(&self, f: &FiniteField) -> Result<Option<Poly>> {
        if !f.is_odd() {
            return Err(Error::EvenCharacteristic);
        }
        if self.is_zero() {
            return Ok(Some(Poly::zero()));
        }
        let Some(r) = f.sqrt(self.lc()) else {
            return Ok(None);
        };
        let dec = self.squarefree_decompose(f)?;
        let mut root = Poly::constant(r);
        for (a, m) in &dec.parts {
            if m % 2 == 1 {
                return Ok(None);
            }
            root = root.mul(&a.pow((m / 2) as u64, f), f);
        }
        Ok(Some(root))
    }

    /// Canonical text form `c_d*x^d+...+c_0` with coefficient codes.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (e, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('+');
            }
            match e {
                0 => write!(s, "{c}").unwrap(),
                1 => write!(s, "{c}*x").unwrap(),
                _ => write!(s, "{c}*x^{e}").unwrap(),
            }
        }
        s
    }

    /// Parses sums of terms `c`, `c*x^e`, `cx^e`, `x^e`, `-x`, ...
    /// Integer coefficients are read as element codes when nonnegative
    /// and below `q`, otherwise reduced modulo `p`.
    pub fn parse(text: &str, f: &FiniteField) -> Result<Poly> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if ch == '-' && i == 0 {
                neg = true;
            } else if ch == '+' && i == 0 {
            } else {
                cur.push(ch);
            }
        }
        terms.push((neg, cur));
        let mut out = Poly::zero();
        for (neg, t) in terms {
            if t.is_empty() {
                return Err(Error::Parse(format!("malformed polynomial {text:?}")));
            }
            let (coef, exp) = match t.find('x') {
                None => (t.as_str(), 0usize),
                Some(pos) => {
                    let c = t[..pos].trim_end_matches('*');
                    let rest = &t[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.trim_start_matches('^')
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))?
                    };
                    (c, e)
                }
            };
            let c: Fe = if coef.is_empty() {
                1
            } else {
                let v: i64 = coef
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient in {t:?}")))?;
                if v >= 0 && (v as u64) < f.q() as u64 {
                    v as Fe
                } else {
                    f.from_int(v)
                }
            };
            let c = if neg { f.neg(c) } else { c };
            out = out.add(&Poly::monomial(c, exp), f);
        }
        Ok(out)
    }
}

fn squarefree_monic(f: &Poly, fld: &FiniteField, mult: u32, out: &mut Vec<(Poly, u32)>) {
    if f.is_constant() {
        return;
    }
    let d = f.derivative(fld);
    let mut c = f.gcd(&d, fld);
    let mut w = f.div_exact(&c, fld);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c, fld);
        let fac = w.div_exact(&y, fld);
        if !fac.is_one() {
            out.push((fac, i * mult));
        }
        w = y;
        c = c.div_exact(&w, fld);
        i += 1;
    }
    if !c.is_one() {
        let root = c.pth_root(fld);
        squarefree_monic(&root, fld, mult * fld.p(), out);
    }
}

/// Irreducibility over `F_q` by the absence of factors of degree `<= n/2`.
pub fn is_irreducible(g: &Poly, f: &FiniteField) -> bool {
    let Some(n) = g.deg() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = Poly::x();
    let mut xq = x.clone();
    for _ in 0..n / 2 {
        xq = xq.powmod(f.q() as u128, g, f);
        if !g.gcd(&xq.sub(&x, f), f).is_one() {
            return false;
        }
    }
    true
}

/// Every monic irreducible polynomial of degree `n`, in lexicographic order.
pub fn monic_irreducibles(f: &FiniteField, n: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = f.q() as u128;
    let total = q.pow(n as u32);
    (0..total).filter_map(move |code| {
        let mut c = Vec::with_capacity(n + 1);
        let mut r = code;
        for _ in 0..n {
            c.push((r % q) as Fe);
            r /= q;
        }
        c.push(1);
        let g = Poly::new(c);
        is_irreducible(&g, f).then_some(g)
    })
}

/// Number of monic irreducibles of degree `n` over `F_q`.
pub fn necklace_count(q: u64, n: u32) -> u64 {
    let mut sum: i128 = 0;
    for e in 1..=n {
        if n.is_multiple_of(e) {
            sum += mobius(e) as i128 * (q as i128).pow(n / e);
        }
    }
    (sum / n as i128) as u64
}

pub fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by `(degree, poly)`.
pub fn factor(g: &Poly, f: &FiniteField) -> Result<(Fe, Vec<(Poly, u32)>)> {
    let dec = g.squarefree_decompose(f)?;
    let mut out = Vec::new();
    for (part, m) in dec.parts {
        for (dd, block) in distinct_degree(&part, f) {
            for irr in equal_degree(&block, dd, f) {
                out.push((irr, m));
            }
        }
    }
    out.sort();
    Ok((dec.lead, out))
}

fn distinct_degree(g: &Poly, f: &FiniteField) -> Vec<(usize, Poly)> {
    let mut out = Vec::new();
    let mut rest = g.clone();
    let x = Poly::x();
    let mut xq = x.clone();
    let mut d = 0;
    while rest.deg().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        xq = xq.powmod(f.q() as u128, &rest, f);
        let h = rest.gcd(&xq.sub(&x, f), f);
        if !h.is_one() {
            rest = rest.div_exact(&h, f);
            xq = xq.rem(&rest, f);
            out.push((d, h));
        }
    }
    if let Some(n) = rest.deg() {
        if n > 0 {
            out.push((n, rest));
        }
    }
    out
}

fn equal_degree(g: &Poly, d: usize, f: &FiniteField) -> Vec<Poly> {
    let n = g.deg().unwrap_or(0);
    if n == d {
        return vec![g.clone()];
    }
    // deterministic sequence of trial polynomials
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15 ^ (n as u64) << 8 ^ d as u64;
    loop {
        let mut coeffs = Vec::with_capacity(n);
        for _ in 0..n {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            coeffs.push(((state >> 33) % f.q() as u64) as Fe);
        }
        let a = Poly::new(coeffs);
        if a.is_constant() {
            continue;
        }
        let b = if f.is_odd() {
            let e = ((f.q() as u128).pow(d as u32) - 1) / 2;
            a.powmod(e, g, f).sub(&Poly::one(), f)
        } else {
            // absolute trace to F_2 of F_{q^d}
            let mut t = a.rem(g, f);
            let mut acc = t.clone();
            for _ in 1..(f.k() as usize * d) {
                t = t.square(f).rem(g, f);
                acc = acc.add(&t, f);
            }
            acc
        };
        let h = g.gcd(&b, f);
        if !h.is_one() && h.deg() != g.deg() {
            let mut out = equal_degree(&h, d, f);
            out.extend(equal_degree(&g.div_exact(&h, f), d, f));
            out.sort();
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::field::make_field;

    fn p(s: &str, f: &FiniteField) -> Poly {
        Poly::parse(s, f).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let f = make_field(7, 1).unwrap();
        let g = p("x^2+3x+1", &f);
        assert_eq!(g.to_text(), "1*x^2+3*x+1");
        assert_eq!(p(&g.to_text(), &f), g);
        assert_eq!(p("-x+1", &f), Poly::new(vec![1, 6]));
        assert_eq!(p("x^3-x", &f), Poly::new(vec![0, 6, 0, 1]));
    }

    #[test]
    fn squarefree_examples() {
        let f5 = make_field(5, 1).unwrap();
        let dec = p("x^4+4x^2", &f5).squarefree_decompose(&f5).unwrap();
        assert_eq!(dec.parts, vec![(p("x^2+4", &f5), 1), (p("x", &f5), 2)]);

        let f3 = make_field(3, 1).unwrap();
        let dec = p("x", &f3).squarefree_decompose(&f3).unwrap();
        assert_eq!(dec.parts, vec![(p("x", &f3), 1)]);

        let f2 = make_field(2, 1).unwrap();
        let cube = p("x+1", &f2).pow(3, &f2);
        let dec = cube.squarefree_decompose(&f2).unwrap();
        assert_eq!(dec.parts, vec![(p("x+1", &f2), 3)]);

        assert_eq!(Poly::zero().squarefree_decompose(&f2), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn square_root_examples() {
        let f7 = make_field(7, 1).unwrap();
        let g = p("x^2+3x+1", &f7);
        assert_eq!(g.square(&f7).perfect_square_root(&f7).unwrap(), Some(g));
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(p("x^2-1", &f5).perfect_square_root(&f5).unwrap(), None);
        assert_eq!(p("2x^2", &f5).perfect_square_root(&f5).unwrap(), None);
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(p("x", &f2).perfect_square_root(&f2), Err(Error::EvenCharacteristic));
    }

    #[test]
    fn irreducible_examples() {
        let f2 = make_field(2, 1).unwrap();
        let deg2: Vec<_> = monic_irreducibles(&f2, 2).collect();
        assert_eq!(deg2, vec![p("x^2+x+1", &f2)]);
        assert_eq!(monic_irreducibles(&f2, 3).count(), 2);
        let f3 = make_field(3, 1).unwrap();
        let deg1: Vec<_> = monic_irreducibles(&f3, 1).collect();
        assert_eq!(deg1, vec![p("x", &f3), p("x+1", &f3), p("x+2", &f3)]);
    }

    #[test]
    fn necklace_counts_match() {
        for (pp, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)] {
            let f = make_field(pp, k).unwrap();
            let max_n = match f.q() {
                2 | 3 => 6,
                4 | 5 => 4,
                _ => 3,
            };
            for n in 1..=max_n {
                assert_eq!(
                    monic_irreducibles(&f, n).count() as u64,
                    necklace_count(f.q() as u64, n as u32),
                    "q={} n={n}",
                    f.q()
                );
            }
        }
    }

    #[test]
    fn factor_reassembles() {
        let f5 = make_field(5, 1).unwrap();
        let g = p("x^2+1", &f5).mul(&p("x^3+x+1", &f5), &f5).mul(&p("x", &f5).pow(2, &f5), &f5);
        let (lead, facs) = factor(&g, &f5).unwrap();
        let mut prod = Poly::constant(lead);
        for (h, m) in &facs {
            assert!(is_irreducible(h, &f5));
            prod = prod.mul(&h.pow(*m as u64, &f5), &f5);
        }
        assert_eq!(prod, g);
        assert_eq!(facs[0], (p("x", &f5), 2));
        assert_eq!(facs[1], (p("x+2", &f5), 1));
        assert_eq!(facs[2], (p("x+3", &f5), 1));

        let f4 = make_field(2, 2).unwrap();
        let g = p("x^5+x+1", &f4);
        let (_, facs) = factor(&g, &f4).unwrap();
        let deg: usize = facs.iter().map(|(h, m)| h.deg().unwrap() * *m as usize).sum();
        assert_eq!(deg, 5);
    }
}
