use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;
use serde::Serialize;
use serde_json::{json, Value};

/// `zeta^k` for `k < n` in the power basis `1, zeta, ..., zeta^{phi(n)-1}`.
struct CyclotomicTable {
    phi: u32,
    powers: Vec<Vec<i128>>,
}

fn cyclotomic_poly(n: u32) -> Vec<i128> {
    // x^n - 1 divided by every Phi_d with d | n, d < n
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let den = cyclotomic_poly(d);
        num = int_div_exact(&num, &den);
    }
    num
}

fn int_div_exact(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i128; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] / b[db];
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

fn table(n: u32) -> Arc<CyclotomicTable> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().get(&n) {
        return t.clone();
    }
    let phi_poly = cyclotomic_poly(n);
    let phi = (phi_poly.len() - 1) as u32;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i128; phi as usize];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by zeta and reduce with the monic Phi_n
        let top = cur[phi as usize - 1];
        let mut next = vec![0i128; phi as usize];
        next[1..].copy_from_slice(&cur[..phi as usize - 1]);
        for (j, slot) in next.iter_mut().enumerate() {
            *slot -= top * phi_poly[j];
        }
        cur = next;
    }
    let t = Arc::new(CyclotomicTable { phi, powers });
    cache.lock().insert(n, t.clone());
    t
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Element of `Z[zeta_N][v, v^-1]`, stored in the power basis of `zeta_N`.
///
/// Elements with `N = 1` are integral Laurent polynomials in `v` and combine
/// with any other `N`; otherwise operands are lifted to the lcm.
#[derive(Clone)]
pub struct RingElem {
    n: u32,
    terms: BTreeMap<(i32, u32), i128>,
}

impl RingElem {
    pub fn zero() -> Self {
        RingElem { n: 1, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(c: i128) -> Self {
        Self::monomial(c, 0)
    }

    /// `c v^w`.
    pub fn monomial(c: i128, w: i32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert((w, 0), c);
        }
        RingElem { n: 1, terms }
    }

    pub fn v(w: i32) -> Self {
        Self::monomial(1, w)
    }

    /// `zeta_n^k`.
    pub fn root_of_unity(n: u32, k: u64) -> Self {
        assert!(n >= 1);
        if n == 1 {
            return Self::one();
        }
        let t = table(n);
        let mut terms = BTreeMap::new();
        for (a, &c) in t.powers[(k % n as u64) as usize].iter().enumerate() {
            if c != 0 {
                terms.insert((0, a as u32), c);
            }
        }
        RingElem { n, terms }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, u32, i128)> + '_ {
        self.terms.iter().map(|(&(w, a), &c)| (w, a, c))
    }

    /// The integer value, if this is a constant integer.
    pub fn as_int(&self) -> Option<i128> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&(0, 0)).copied(),
            _ => None,
        }
    }

    fn lifted(&self, m: u32) -> RingElem {
        if self.n == m {
            return self.clone();
        }
        if self.n == 1 {
            return RingElem { n: m, terms: self.terms.clone() };
        }
        let step = (m / self.n) as u64;
        let mut out = RingElem { n: m, terms: BTreeMap::new() };
        for (&(w, a), &c) in &self.terms {
            out.add_assign(&RingElem::root_of_unity(m, a as u64 * step).shift(w).scale(c));
        }
        out
    }

    fn common(&self, o: &RingElem) -> u32 {
        self.n / gcd(self.n, o.n) * o.n
    }

    fn add_term(&mut self, w: i32, a: u32, c: i128) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry((w, a)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&(w, a));
        }
    }

    pub fn add_assign(&mut self, o: &RingElem) {
        let m = self.common(o);
        if m != self.n {
            *self = self.lifted(m);
        }
        let o = o.lifted(m);
        for (&(w, a), &c) in &o.terms {
            self.add_term(w, a, c);
        }
    }

    pub fn add(&self, o: &RingElem) -> RingElem {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn neg(&self) -> RingElem {
        self.scale(-1)
    }

    pub fn sub(&self, o: &RingElem) -> RingElem {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i128) -> RingElem {
        if k == 0 {
            return RingElem { n: self.n, terms: BTreeMap::new() };
        }
        RingElem { n: self.n, terms: self.terms.iter().map(|(&key, &c)| (key, c * k)).collect() }
    }

    /// Multiplication by `v^w`.
    pub fn shift(&self, w: i32) -> RingElem {
        RingElem { n: self.n, terms: self.terms.iter().map(|(&(x, a), &c)| ((x + w, a), c)).collect() }
    }

    pub fn mul(&self, o: &RingElem) -> RingElem {
        let m = self.common(o);
        let (x, y) = (self.lifted(m), o.lifted(m));
        let mut out = RingElem { n: m, terms: BTreeMap::new() };
        if m == 1 {
            for (&(w1, _), &c1) in &x.terms {
                for (&(w2, _), &c2) in &y.terms {
                    out.add_term(w1 + w2, 0, c1 * c2);
                }
            }
            return out;
        }
        let t = table(m);
        for (&(w1, a1), &c1) in &x.terms {
            for (&(w2, a2), &c2) in &y.terms {
                let k = ((a1 + a2) % m) as usize;
                for (a, &e) in t.powers[k].iter().enumerate() {
                    out.add_term(w1 + w2, a as u32, c1 * c2 * e);
                }
            }
        }
        debug_assert!(out.terms.keys().all(|&(_, a)| a < t.phi));
        out
    }

    pub fn pow(&self, mut e: u32) -> RingElem {
        let mut acc = RingElem::one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Exact division by a nonzero integer.
    pub fn div_int(&self, k: i128) -> RingElem {
        RingElem {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(&key, &c)| {
                    assert!(c % k == 0, "inexact division by {k}");
                    (key, c / k)
                })
                .collect(),
        }
    }

    /// Part of `v`-degree `w`, as an element of degree 0.
    pub fn v_part(&self, w: i32) -> RingElem {
        RingElem {
            n: self.n,
            terms: self.terms.iter().filter(|(&(x, _), _)| x == w).map(|(&(_, a), &c)| ((0, a), c)).collect(),
        }
    }

    pub fn max_v_degree(&self) -> Option<i32> {
        self.terms.keys().map(|&(w, _)| w).max()
    }

    /// Evaluation `v -> v^k`, e.g. `k = 2` turns `q`-bookkeeping into `v`.
    pub fn substitute_v_power(&self, k: i32) -> RingElem {
        RingElem { n: self.n, terms: self.terms.iter().map(|(&(w, a), &c)| ((w * k, a), c)).collect() }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<JsonTerm> = self.terms.iter().map(|(&(w, a), &c)| JsonTerm { a, w, c }).collect();
        json!({ "terms": terms })
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (&(w, a), &c) in &self.terms {
            if !s.is_empty() && c > 0 {
                s.push('+');
            }
            s.push_str(&c.to_string());
            if a > 0 {
                s.push_str(&format!("*z{}^{a}", self.n));
            }
            if w != 0 {
                s.push_str(&format!("*v^{w}"));
            }
        }
        s
    }
}

impl PartialEq for RingElem {
    fn eq(&self, o: &Self) -> bool {
        if self.n == o.n {
            return self.terms == o.terms;
        }
        let m = self.common(o);
        self.lifted(m).terms == o.lifted(m).terms
    }
}

impl Eq for RingElem {}

#[derive(Serialize)]
struct JsonTerm {
    a: u32,
    w: i32,
    c: i128,
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl From<i128> for RingElem {
    fn from(c: i128) -> Self {
        RingElem::int(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for n in 2..=12u32 {
            let mut s = RingElem::zero();
            for k in 0..n {
                s.add_assign(&RingElem::root_of_unity(n, k as u64));
            }
            assert!(s.is_zero(), "n={n}");
            let z = RingElem::root_of_unity(n, 1);
            assert_eq!(z.pow(n), RingElem::one());
        }
    }

    #[test]
    fn lifting_between_orders() {
        let i = RingElem::root_of_unity(4, 1);
        let z12 = RingElem::root_of_unity(12, 3);
        assert!(i.sub(&z12).is_zero());
        assert_eq!(i, z12);
        assert_eq!(RingElem::root_of_unity(2, 1), RingElem::int(-1));
        assert_eq!(i.mul(&i).as_int(), Some(-1));
    }

    #[test]
    fn json_form() {
        let x = RingElem::monomial(4, -1).add(&RingElem::monomial(4, 1));
        assert_eq!(
            x.to_json().to_string(),
            r#"{"terms":[{"a":0,"w":-1,"c":4},{"a":0,"w":1,"c":4}]}"#
        );
    }
}
