use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::Mutex;

use crate::error::{check_cap, Error, Result};
use crate::DEFAULT_CAP;

/// Element of a [`FiniteField`], stored as its canonical integer code
/// `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` where `sum c_i x^i` is the reduced
/// representative modulo the defining polynomial.
pub type Fe = u32;

const NONE: u32 = u32::MAX;

/// A finite field `F_{p^k}` with log/antilog and Zech tables.
///
/// Cloning is cheap; all clones share the same tables.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

struct FieldData {
    p: u32,
    k: u32,
    q: u32,
    cap: u128,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zlog: Vec<u32>,
    extensions: Mutex<HashMap<u32, Arc<Extension>>>,
    subfields: Mutex<HashMap<(u32, u32), Arc<SubfieldMap>>>,
}

/// Embedding `F_{q^m} -> F_{q^n}` (`m | n`) compatible with the embeddings
/// of `F_q` into both, with its inverse on the image.
pub struct SubfieldMap {
    forward: Vec<Fe>,
    back: HashMap<Fe, Fe>,
}

impl SubfieldMap {
    #[inline]
    pub fn up(&self, a: Fe) -> Fe {
        self.forward[a as usize]
    }

    pub fn down(&self, a: Fe) -> Option<Fe> {
        self.back.get(&a).copied()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds `F_{p^k}` with the default cardinality cap.
pub fn make_field(p: u64, k: u32) -> Result<FiniteField> {
    make_field_capped(p, k, DEFAULT_CAP)
}

pub fn make_field_capped(p: u64, k: u32, cap: u128) -> Result<FiniteField> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Parse("extension degree must be positive".into()));
    }
    let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    check_cap(q, cap)?;
    if q > u32::MAX as u128 / 2 {
        return Err(Error::CapExceeded { size: q, cap: u32::MAX as u128 / 2 });
    }
    let p = p as u32;
    let q = q as u32;
    let modulus = least_irreducible(p, k);
    let arith = PrimePolyArith { p, modulus: &modulus };

    let factors = prime_factors(q as u64 - 1);
    let order = q - 1;
    let generator = (1..q)
        .find(|&g| {
            factors
                .iter()
                .all(|&r| arith.pow_code(g, (order as u64) / r) != 1)
        })
        .expect("multiplicative group is cyclic");

    let mut exp = Vec::with_capacity(order as usize);
    let mut log = vec![NONE; q as usize];
    let mut cur = 1u32;
    for i in 0..order {
        exp.push(cur);
        log[cur as usize] = i;
        cur = arith.mul_code(cur, generator);
    }
    let zlog = (0..order)
        .map(|d| {
            let s = add_digits(p, 1, exp[d as usize]);
            if s == 0 {
                NONE
            } else {
                log[s as usize]
            }
        })
        .collect();
    Ok(FiniteField(Arc::new(FieldData {
        p,
        k,
        q,
        cap,
        modulus,
        exp,
        log,
        zlog,
        extensions: Mutex::new(HashMap::new()),
        subfields: Mutex::new(HashMap::new()),
    })))
}

/// Builds the field of cardinality `q`, which must be a prime power.
pub fn field_of_order(q: u64, cap: u128) -> Result<FiniteField> {
    if q < 2 {
        return Err(Error::NotPrime(q));
    }
    let p = prime_factors(q)[0];
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    if r != 1 {
        return Err(Error::NotPrime(q));
    }
    make_field_capped(p, k, cap)
}

fn add_digits(p: u32, mut a: u32, mut b: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn code_to_digits(p: u32, mut c: u32, len: usize) -> Vec<u32> {
    let mut d = vec![0; len];
    for slot in d.iter_mut() {
        *slot = c % p;
        c /= p;
    }
    d
}

fn digits_to_code(p: u32, d: &[u32]) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Arithmetic on coefficient vectors over `F_p`, used only while building
/// the tables and the defining polynomial.
struct PrimePolyArith<'a> {
    p: u32,
    modulus: &'a [u32],
}

impl PrimePolyArith<'_> {
    fn k(&self) -> usize {
        self.modulus.len() - 1
    }

    fn mul_code(&self, a: u32, b: u32) -> u32 {
        let k = self.k();
        let p = self.p as u64;
        let da = code_to_digits(self.p, a, k);
        let db = code_to_digits(self.p, b, k);
        let mut prod = vec![0u64; 2 * k];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for i in (k..2 * k).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let m = self.modulus[j] as u64;
                prod[i - k + j] = (prod[i - k + j] + (p - c) * m) % p;
            }
        }
        let low: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        digits_to_code(self.p, &low)
    }

    fn pow_code(&self, base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_code(acc, b);
            }
            b = self.mul_code(b, b);
            e >>= 1;
        }
        acc
    }
}

// Small dense polynomial helpers over F_p (little-endian, trimmed).
fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = fp_trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for j in 0..=dm {
            let idx = dr - dm + j;
            r[idx] = (r[idx] + (p - c) * m[j] % p) % p;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(&prod, m, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = fp_trim(a.to_vec());
    let mut b = fp_trim(b.to_vec());
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin-style irreducibility test over `F_p` for a monic `f`.
pub(crate) fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 0..n / 2 {
        // xp <- xp^p mod f
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, f, p);
            }
            base = fp_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = fp_gcd(f, &fp_trim(diff), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically least monic irreducible of degree `k` over `F_p`
/// (the lower coefficients read as a base-`p` number with `c_{k-1}` most
/// significant).
fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut f: Vec<u64> = code_to_digits(p, code as u32, k as usize)
            .into_iter()
            .map(u64::from)
            .collect();
        f.push(1);
        if fp_is_irreducible(&f, p as u64) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn cap(&self) -> u128 {
        self.0.cap
    }

    /// Defining polynomial over `F_p`, little-endian and monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_odd(&self) -> bool {
        self.0.p != 2
    }

    pub fn elements(&self) -> std::ops::Range<Fe> {
        0..self.0.q
    }

    pub fn from_int(&self, v: i64) -> Fe {
        v.rem_euclid(self.0.p as i64) as Fe
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let d = &*self.0;
        let order = d.q - 1;
        let la = d.log[a as usize];
        let lb = d.log[b as usize];
        let diff = if lb >= la { lb - la } else { lb + order - la };
        let z = d.zlog[diff as usize];
        if z == NONE {
            return 0;
        }
        let mut e = la + z;
        if e >= order {
            e -= order;
        }
        d.exp[e as usize]
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a == 0 || self.0.p == 2 {
            return a;
        }
        let d = &*self.0;
        let order = d.q - 1;
        let mut e = d.log[a as usize] + order / 2;
        if e >= order {
            e -= order;
        }
        d.exp[e as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        let d = &*self.0;
        let order = d.q - 1;
        let mut e = d.log[a as usize] + d.log[b as usize];
        if e >= order {
            e -= order;
        }
        d.exp[e as usize]
    }

    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a != 0, "inverse of zero");
        let d = &*self.0;
        let order = d.q - 1;
        let l = d.log[a as usize];
        d.exp[((order - l) % order) as usize]
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let d = &*self.0;
        let order = (d.q - 1) as u64;
        let l = d.log[a as usize] as u64;
        d.exp[((l * (e % order)) % order) as usize]
    }

    /// Discrete logarithm with respect to the table generator.
    pub fn log(&self, a: Fe) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.0.log[a as usize])
        }
    }

    pub fn exp(&self, e: u64) -> Fe {
        let order = (self.0.q - 1) as u64;
        self.0.exp[(e % order) as usize]
    }

    /// Absolute Frobenius `x -> x^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.0.p as u64)
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a == 0 || self.0.p == 2 || self.0.log[a as usize].is_multiple_of(2)
    }

    /// Canonical square root: the root with the smaller code.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return Some(0);
        }
        let d = &*self.0;
        let order = d.q - 1;
        let l = d.log[a as usize];
        if d.p == 2 {
            // 2 is invertible modulo the odd group order
            let half = (l as u64 * (d.q as u64 / 2)) % order as u64;
            return Some(d.exp[half as usize]);
        }
        if l % 2 == 1 {
            return None;
        }
        let r = d.exp[(l / 2) as usize];
        Some(r.min(self.neg(r)))
    }

    /// Extension of degree `n` over this field together with the embedding.
    pub fn extension(&self, n: u32) -> Result<Arc<Extension>> {
        if let Some(e) = self.0.extensions.lock().get(&n) {
            return Ok(e.clone());
        }
        let ext = Arc::new(Extension::build(self, n)?);
        self.0.extensions.lock().insert(n, ext.clone());
        Ok(ext)
    }
}

impl FiniteField {
    /// Embedding of the degree-`m` extension into the degree-`n` one.
    pub fn subfield_map(&self, m: u32, n: u32) -> Result<Arc<SubfieldMap>> {
        assert!(m >= 1 && n.is_multiple_of(m), "degree {m} does not divide {n}");
        if let Some(s) = self.0.subfields.lock().get(&(m, n)) {
            return Ok(s.clone());
        }
        let small = self.extension(m)?;
        let large = self.extension(n)?;
        let (sf, lf) = (&small.big, &large.big);
        let eval_at = |code: Fe, r: Fe| -> Fe {
            let digits = code_to_digits(sf.p(), code, sf.k() as usize);
            digits.iter().rev().fold(0, |acc, &d| lf.add(lf.mul(acc, r), d))
        };
        let forward: Vec<Fe> = if sf.k() == 1 {
            sf.elements().collect()
        } else {
            let modulus = sf.modulus();
            // the generator of F_q, seen in both fields
            let gen = if self.k() > 1 { self.p() } else { 0 };
            let root = lf
                .elements()
                .find(|&r| {
                    let v = modulus.iter().rev().fold(0, |acc, &c| lf.add(lf.mul(acc, r), c));
                    v == 0 && (self.k() == 1 || eval_at(small.embed(gen), r) == large.embed(gen))
                })
                .expect("compatible root exists");
            sf.elements().map(|c| eval_at(c, root)).collect()
        };
        let back = forward.iter().enumerate().map(|(i, &b)| (b, i as Fe)).collect();
        let map = Arc::new(SubfieldMap { forward, back });
        self.0.subfields.lock().insert((m, n), map.clone());
        Ok(map)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

/// `F_{q^n}` over `F_q`, with a fixed embedding of `F_q`.
pub struct Extension {
    pub big: FiniteField,
    pub degree: u32,
    base_q: u32,
    embed: Vec<Fe>,
    restrict: Vec<u32>,
}

impl Extension {
    fn build(base: &FiniteField, n: u32) -> Result<Self> {
        let total = (base.q() as u128).checked_pow(n).unwrap_or(u128::MAX);
        check_cap(total, base.cap())?;
        let big = make_field_capped(base.p() as u64, base.k() * n, base.cap())?;
        let embed: Vec<Fe> = if base.k() == 1 || n == 1 {
            base.elements().collect()
        } else {
            // image of the generator x of F_q: least root of its modulus
            let m = base.modulus();
            let root = big
                .elements()
                .find(|&r| {
                    let mut acc = 0;
                    for &c in m.iter().rev() {
                        acc = big.add(big.mul(acc, r), c);
                    }
                    acc == 0
                })
                .expect("modulus splits in the extension");
            base.elements()
                .map(|c| {
                    let digits = code_to_digits(base.p(), c, base.k() as usize);
                    let mut acc = 0;
                    for &d in digits.iter().rev() {
                        acc = big.add(big.mul(acc, root), d);
                    }
                    acc
                })
                .collect()
        };
        let mut restrict = vec![NONE; big.q() as usize];
        for (small, &b) in embed.iter().enumerate() {
            restrict[b as usize] = small as u32;
        }
        Ok(Extension { big, degree: n, base_q: base.q(), embed, restrict })
    }

    #[inline]
    pub fn embed(&self, a: Fe) -> Fe {
        self.embed[a as usize]
    }

    /// Inverse of [`Extension::embed`]; `None` if `a` is not in the base.
    #[inline]
    pub fn restrict(&self, a: Fe) -> Option<Fe> {
        let r = self.restrict[a as usize];
        (r != NONE).then_some(r)
    }

    /// Relative Frobenius `x -> x^q`.
    #[inline]
    pub fn frob(&self, a: Fe) -> Fe {
        self.big.pow(a, self.base_q as u64)
    }

    pub fn base_q(&self) -> u32 {
        self.base_q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_modulus_is_x() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.q(), 3);
    }

    #[test]
    fn f9_modulus() {
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_non_primes_and_caps() {
        assert_eq!(make_field(4, 1).err(), Some(Error::NotPrime(4)));
        assert!(matches!(make_field_capped(2, 21, 1 << 20), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn field_axioms_small() {
        for (p, k) in [(2, 1), (2, 3), (3, 2), (5, 1), (7, 1), (2, 4)] {
            let f = make_field(p, k).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), add_digits(p as u32, a, b));
                    for c in [0, 1, f.q() - 1] {
                        let lhs = f.mul(a, f.add(b, c));
                        let rhs = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_has_order_k() {
        for (p, k) in [(2, 3), (3, 2), (3, 3), (5, 2), (2, 5)] {
            let f = make_field(p, k).unwrap();
            for a in f.elements() {
                let mut b = a;
                for _ in 0..k {
                    b = f.frobenius(b);
                }
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn extension_embedding_is_a_homomorphism() {
        let base = make_field(3, 2).unwrap();
        let ext = base.extension(2).unwrap();
        let big = &ext.big;
        for a in base.elements() {
            assert_eq!(ext.frob(ext.embed(a)), ext.embed(a));
            for b in base.elements() {
                assert_eq!(ext.embed(base.add(a, b)), big.add(ext.embed(a), ext.embed(b)));
                assert_eq!(ext.embed(base.mul(a, b)), big.mul(ext.embed(a), ext.embed(b)));
            }
        }
    }

    #[test]
    fn subfield_maps_commute_with_base_embeddings() {
        let base = make_field(2, 2).unwrap();
        let map = base.subfield_map(2, 4).unwrap();
        let e2 = base.extension(2).unwrap();
        let e4 = base.extension(4).unwrap();
        for a in base.elements() {
            assert_eq!(map.up(e2.embed(a)), e4.embed(a));
        }
        for a in e2.big.elements() {
            for b in e2.big.elements() {
                assert_eq!(map.up(e2.big.mul(a, b)), e4.big.mul(map.up(a), map.up(b)));
            }
            assert_eq!(map.down(map.up(a)), Some(a));
        }
    }

    #[test]
    fn square_roots() {
        let f = make_field(5, 1).unwrap();
        assert!(!f.is_square(2));
        assert_eq!(f.sqrt(4), Some(2));
        let f2 = make_field(2, 3).unwrap();
        for a in f2.elements() {
            let r = f2.sqrt(a).unwrap();
            assert_eq!(f2.mul(r, r), a);
        }
    }
}
