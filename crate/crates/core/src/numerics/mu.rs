use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::enumerate::{factorial, pow_u};
use crate::error::{Error, Result};

const STIRLING_FROM: u64 = 30;

/// `mu(k) = 2 k^(k-2) e^(-k) / k!`.
pub fn mu_pmf(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("mu is supported on k >= 1".into()));
    }
    Ok(ln_mu(k).exp())
}

/// `ln mu(k)`. Below 30 the ratio `k^(k-2)/k!` is formed exactly; above, the
/// Stirling series cancels the `k ln k` terms analytically.
pub fn ln_mu(k: u64) -> f64 {
    if k < STIRLING_FROM {
        let num: BigUint = if k >= 2 { pow_u(k, k - 2) } else { BigUint::from(1u32) };
        let ratio = num.to_f64().unwrap() / factorial(k).to_f64().unwrap();
        let ratio = if k == 1 { 1.0 } else { ratio };
        return 2f64.ln() + ratio.ln() - k as f64;
    }
    let kf = k as f64;
    let inv = 1.0 / kf;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    2f64.ln() - 2.5 * kf.ln() - 0.5 * (2.0 * PI).ln() - series
}

/// Upper estimate of `sum_{k > K} mu(k)` from the `sqrt(2/pi) k^(-5/2)` tail.
pub fn mu_tail_mass(big_k: u64) -> f64 {
    let c = (2.0 / PI).sqrt();
    c * (2.0 / 3.0) * (big_k as f64 + 0.5).powf(-1.5)
}

/// Estimate of `sum_{k > K} k mu(k)`.
pub fn mu_mean_tail(big_k: u64) -> f64 {
    let c = (2.0 / PI).sqrt();
    c * 2.0 * (big_k as f64 + 0.5).powf(-0.5)
}

/// Tabulated `mu(1..=K)` with cumulative sums.
#[derive(Clone, Debug)]
pub struct MuLaw {
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

impl MuLaw {
    pub fn new(big_k: usize) -> Self {
        let mut pmf = vec![0.0; big_k + 1];
        let mut cdf = vec![0.0; big_k + 1];
        // Neumaier-compensated running sum.
        let (mut acc, mut comp) = (0.0f64, 0.0f64);
        for k in 1..=big_k {
            pmf[k] = ln_mu(k as u64).exp();
            let t = acc + pmf[k];
            if acc.abs() >= pmf[k].abs() {
                comp += (acc - t) + pmf[k];
            } else {
                comp += (pmf[k] - t) + acc;
            }
            acc = t;
            cdf[k] = acc + comp;
        }
        Self { pmf, cdf }
    }

    pub fn support(&self) -> usize {
        self.pmf.len() - 1
    }

    /// `mu(k)` for `k <= K`, zero for `k = 0`.
    pub fn pmf(&self, k: usize) -> f64 {
        self.pmf[k]
    }

    pub fn pmf_slice(&self) -> &[f64] {
        &self.pmf
    }

    /// `sum_{j <= k} mu(j)`.
    pub fn cdf(&self, k: usize) -> f64 {
        self.cdf[k.min(self.support())]
    }

    /// Inverse-CDF draw from `u` in `[0,1)`; `None` if it lands beyond `K`.
    pub fn quantile(&self, u: f64) -> Option<usize> {
        if u >= self.cdf[self.support()] {
            return None;
        }
        let idx = self.cdf.partition_point(|&c| c <= u);
        Some(idx.max(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        assert!((mu_pmf(1).unwrap() - 2.0 / std::f64::consts::E).abs() < 1e-15);
        assert!((mu_pmf(2).unwrap() - (-2f64).exp()).abs() < 1e-16);
        assert!(mu_pmf(0).is_err());
    }

    #[test]
    fn stirling_switch_is_seamless() {
        for k in [30u64, 31, 45, 60] {
            let exact = {
                let num = pow_u(k, k - 2).to_f64().unwrap().ln();
                let den: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
                2f64.ln() + num - den - k as f64
            };
            assert!((ln_mu(k) - exact).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn mass_and_mean() {
        let big_k = 1_000_000usize;
        let law = MuLaw::new(big_k);
        let mass = law.cdf(big_k);
        let tail = mu_tail_mass(big_k as u64);
        assert!(mass <= 1.0 + 1e-12);
        assert!((mass + tail - 1.0).abs() < 1e-11, "mass {mass} tail {tail}");
        let mean: f64 = (1..=big_k).map(|k| k as f64 * law.pmf(k)).sum::<f64>() + mu_mean_tail(big_k as u64);
        assert!((mean - 2.0).abs() < 1e-8, "mean {mean}");
    }

    #[test]
    fn tail_shape() {
        let k = 10_000_000u64;
        let v = mu_pmf(k).unwrap();
        let asym = (2.0 / PI).sqrt() * (k as f64).powf(-2.5);
        assert!((v / asym - 1.0).abs() < 1e-7);
    }
}
