use crate::curve::{point_count, Curve};
use crate::error::{Error, Result};

/// Zeta function `Z(t) = P(t) / ((1 - t)(1 - q t))` of a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaData {
    q: u64,
    genus: u32,
    counts: Vec<u64>,
    p: Vec<i128>,
}

impl ZetaData {
    /// Builds `P(t)` from `N_1, N_2, ...` via Newton's identities.
    pub fn from_counts(counts: &[u64], q: u64, genus: u32) -> Result<Self> {
        let g = genus as usize;
        let bad = |reason: String| Error::InconsistentCounts { genus, reason };
        if counts.len() < (2 * g).max(1) {
            return Err(bad(format!("need {} counts, got {}", (2 * g).max(1), counts.len())));
        }
        let qi = q as i128;
        let s: Vec<i128> = counts
            .iter()
            .enumerate()
            .map(|(i, &n)| qi.pow(i as u32 + 1) + 1 - n as i128)
            .collect();
        let mut p = vec![1i128];
        for k in 1..=2 * g {
            let acc: i128 = (1..=k).map(|i| s[i - 1] * p[k - i]).sum();
            if acc % k as i128 != 0 {
                return Err(bad(format!("non-integral coefficient at t^{k}")));
            }
            p.push(-acc / k as i128);
        }
        for k in 0..=g {
            if p[2 * g - k] != qi.pow((g - k) as u32) * p[k] {
                return Err(bad(format!("functional equation fails at t^{k}")));
            }
        }
        let z = ZetaData { q, genus, counts: counts.to_vec(), p };
        for (i, &n) in counts.iter().enumerate().skip(2 * g) {
            if z.predicted_count(i as u32 + 1) != n as i128 {
                return Err(bad(format!("count N_{} does not follow from P", i + 1)));
            }
        }
        if z.class_number() <= 0 {
            return Err(bad("P(1) is not positive".into()));
        }
        Ok(z)
    }

    /// Counts points over `F_{q^n}` for `n <= max(1, 2g)`.
    pub fn of_curve(curve: &Curve) -> Result<Self> {
        let g = curve.genus();
        let counts = (1..=(2 * g).max(1))
            .map(|n| point_count(curve, n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_counts(&counts, curve.q() as u64, g)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Coefficients of `P(t)`, constant term first.
    pub fn numerator(&self) -> &[i128] {
        &self.p
    }

    /// `P(1)`, the number of rational points of the Jacobian.
    pub fn class_number(&self) -> i128 {
        self.p.iter().sum()
    }

    /// `N_n = q^n + 1 - sum alpha_i^n`.
    pub fn predicted_count(&self, n: u32) -> i128 {
        // power sums of the inverse roots from log(P)
        let mut s: Vec<i128> = Vec::new();
        let c = |k: usize| self.p.get(k).copied().unwrap_or(0);
        for k in 1..=n as usize {
            let mut acc = -(k as i128) * c(k);
            for i in 1..k {
                acc -= c(i) * s[k - i - 1];
            }
            s.push(acc);
        }
        (self.q as i128).pow(n) + 1 - s[n as usize - 1]
    }

    /// Coefficients of `Z(t)` through `t^dmax`.
    pub fn zeta_coefficients(&self, dmax: usize) -> Vec<i128> {
        let q = self.q as i128;
        // 1/((1-t)(1-qt)) has coefficients (q^{k+1} - 1)/(q - 1)
        let base: Vec<i128> = (0..=dmax as u32).map(|k| (0..=k).map(|i| q.pow(i)).sum()).collect();
        (0..=dmax)
            .map(|d| (0..=d).map(|i| self.p.get(i).copied().unwrap_or(0) * base[d - i]).sum())
            .collect()
    }
}

/// `#X_d(F_q)`, the `t^d` coefficient of `Z(X, t)`.
pub fn sym_power_point_count(zeta: &ZetaData, d: usize) -> i128 {
    zeta.zeta_coefficients(d)[d]
}
