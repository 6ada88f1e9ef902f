use super::ring::RingElem;

/// Truncated power series `sum c_k t^k` with ring coefficients.
pub type Series = Vec<RingElem>;

pub fn series_from_ints(c: &[i128]) -> Series {
    c.iter().map(|&x| RingElem::int(x)).collect()
}

pub fn truncate(mut a: Series, len: usize) -> Series {
    a.resize(len, RingElem::zero());
    a
}

pub fn series_mul(a: &[RingElem], b: &[RingElem], len: usize) -> Series {
    let mut out = vec![RingElem::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j].add_assign(&x.mul(y));
            }
        }
    }
    out
}

/// Inverse of a series whose constant term is `1`.
pub fn series_inv(a: &[RingElem], len: usize) -> Series {
    assert_eq!(a.first().and_then(|c| c.as_int()), Some(1), "constant term must be 1");
    let mut out = vec![RingElem::zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = RingElem::one();
    for k in 1..len {
        let mut s = RingElem::zero();
        for i in 1..=k.min(a.len() - 1) {
            s.add_assign(&a[i].mul(&out[k - i]));
        }
        out[k] = s.neg();
    }
    out
}

pub fn series_div(a: &[RingElem], b: &[RingElem], len: usize) -> Series {
    series_mul(a, &series_inv(b, len), len)
}

/// `(1 - c t^e)` as a series.
pub fn binomial_factor(c: &RingElem, e: usize) -> Series {
    let mut s = vec![RingElem::zero(); e + 1];
    s[0] = RingElem::one();
    s[e] = s[e].sub(c);
    s
}

pub fn series_to_json(s: &[RingElem]) -> serde_json::Value {
    serde_json::Value::Array(s.iter().map(|c| c.to_json()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let one_minus_3t = binomial_factor(&RingElem::int(3), 1);
        let inv = series_inv(&one_minus_3t, 5);
        let ints: Vec<_> = inv.iter().map(|c| c.as_int().unwrap()).collect();
        assert_eq!(ints, vec![1, 3, 9, 27, 81]);
        let back = series_mul(&inv, &one_minus_3t, 5);
        assert_eq!(back, series_from_ints(&[1, 0, 0, 0, 0]));
    }
}
