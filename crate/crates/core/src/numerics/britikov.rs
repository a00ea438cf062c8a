use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use super::airy::airy_p1;
use crate::error::{Error, Result};

/// Regime of the forest count asymptotics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

/// `|(2m - n) n^(1/3) / (n - m)|` up to this value is treated as critical. The
/// statistic is about `2 lambda` in the window, so this is `|lambda| <= 4`.
pub const CRITICAL_BAND: f64 = 8.0;

/// `lambda` with `m = n/2 + lambda n^(2/3) / 2`.
pub fn critical_lambda(n: u64, m: u64) -> f64 {
    (2.0 * m as f64 - n as f64) / (n as f64).powf(2.0 / 3.0)
}

/// Asymptotic `ln #F(n, m)` in the regime selected by `(2m-n) n^(1/3) / (n-m)`.
pub fn britikov_count(n: u64, m: u64) -> Result<(Regime, f64)> {
    if m == 0 || m >= n {
        return Err(Error::Domain(format!("need 1 <= m < n, got n = {n}, m = {m}")));
    }
    let (nf, mf) = (n as f64, m as f64);
    let stat = (2.0 * mf - nf) * nf.cbrt() / (nf - mf);
    let ln2 = 2f64.ln();
    if stat < -CRITICAL_BAND {
        let v = 2.0 * mf * nf.ln() - mf * ln2 - ln_gamma(mf + 1.0) + 0.5 * (1.0 - 2.0 * mf / nf).ln();
        Ok((Regime::Subcritical, v))
    } else if stat > CRITICAL_BAND {
        let v = (nf - 2.0) * nf.ln() - (nf - mf - 1.0) * ln2 - ln_gamma(nf - mf) - 2.5 * (2.0 * mf / nf - 1.0).ln();
        Ok((Regime::Supercritical, v))
    } else {
        let lambda = critical_lambda(n, m);
        let v = (nf - 1.0 / 6.0) * nf.ln() - (nf - mf) * ln2 - ln_gamma(nf - mf + 1.0)
            + airy_p1(lambda).ln()
            + 0.5 * (2.0 * PI).ln();
        Ok((Regime::Critical, v))
    }
}
