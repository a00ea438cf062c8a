//! Mean height and mean total flux of uniform nearly parked trees.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use statrs::function::gamma::{gamma, ln_gamma};

use super::{binomial, factorial, falling, half_pochhammer, pow_u, rat, rat_int};
use crate::error::{Error, Result};

/// `sum_{h=1}^{N-1} N(N-1)...(N-h) / N^(h+1) * (h+1)/h! * (1/2)_h`.
pub fn mean_height_exact(n: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Domain("N >= 1 required".into()));
    }
    let mut total = BigRational::zero();
    for h in 1..n {
        let term = rat(falling(n, h + 1) * (h + 1), pow_u(n, h + 1) * factorial(h)) * half_pochhammer(h);
        total += term;
    }
    Ok(total)
}

/// `1/2 sum_{h=1}^{N-2} C(N-1, h+1) (h+2) N^(-h) (1/2)_h`.
pub fn mean_total_distance_exact(n: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Domain("N >= 1 required".into()));
    }
    let mut total = BigRational::zero();
    for h in 1..n.saturating_sub(1) {
        total += rat(binomial(n - 1, h + 1) * (h + 2), pow_u(n, h)) * half_pochhammer(h);
    }
    Ok(total / rat_int(BigUint::from(2u32)))
}

/// Law of the distance between two distinct uniform vertices of a uniform Cayley tree.
pub fn branch_length_pmf(n: u64, h: u64) -> Result<BigRational> {
    if n < 2 || h == 0 || h >= n {
        return Err(Error::Domain(format!("need 1 <= h <= N-1, got N = {n}, h = {h}")));
    }
    Ok(rat(falling(n, h + 1) * (h + 1), pow_u(n, h + 1) * (n - 1)))
}

/// `E[(1/2)^(number of cycles)]` for a uniform permutation of `h` points.
pub fn cycle_weight(h: u64) -> Result<BigRational> {
    if h == 0 {
        return Err(Error::Domain("h >= 1 required".into()));
    }
    Ok(half_pochhammer(h) / rat_int(factorial(h)))
}

fn ln_half_poch_over_fact(h: f64) -> f64 {
    ln_gamma(h + 0.5) - ln_gamma(0.5) - ln_gamma(h + 1.0)
}

/// Double-precision evaluation of [`mean_height_exact`] for large `N`.
pub fn mean_height_f64(n: u64) -> f64 {
    let nf = n as f64;
    let lg_n1 = ln_gamma(nf + 1.0);
    let mut total = 0.0;
    for h in 1..n {
        let hf = h as f64;
        let ln_fall = lg_n1 - ln_gamma(nf - hf);
        let t = ln_fall - (hf + 1.0) * nf.ln() + (hf + 1.0).ln() + ln_half_poch_over_fact(hf);
        let v = t.exp();
        total += v;
        if v < total * 1e-18 && hf > nf.sqrt() {
            break;
        }
    }
    total
}

/// Double-precision evaluation of [`mean_total_distance_exact`] for large `N`.
pub fn mean_total_distance_f64(n: u64) -> f64 {
    let nf = n as f64;
    let lg = ln_gamma(nf);
    let mut total = 0.0;
    for h in 1..n.saturating_sub(1) {
        let hf = h as f64;
        let ln_binom = lg - ln_gamma(hf + 2.0) - ln_gamma(nf - hf - 1.0);
        let t = ln_binom + (hf + 2.0).ln() - hf * nf.ln() + ln_gamma(hf + 0.5) - ln_gamma(0.5);
        let v = t.exp();
        total += v;
        if v < total * 1e-18 && hf > nf.sqrt() {
            break;
        }
    }
    total / 2.0
}

/// `Gamma(3/4) / (2^(1/4) sqrt(pi))`.
pub fn height_constant() -> f64 {
    gamma(0.75) / (2f64.powf(0.25) * std::f64::consts::PI.sqrt())
}

/// `Gamma(1/4) / (2^(5/4) sqrt(pi))`.
pub fn distance_constant() -> f64 {
    gamma(0.25) / (2f64.powf(1.25) * std::f64::consts::PI.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{rat_small, rational_to_f64};

    #[test]
    fn small_values() {
        assert_eq!(mean_height_exact(1).unwrap(), BigRational::zero());
        assert_eq!(mean_height_exact(2).unwrap(), rat_small(1, 2));
        assert_eq!(mean_height_exact(3).unwrap(), rat_small(11, 12));
        assert_eq!(mean_total_distance_exact(3).unwrap(), rat_small(1, 4));
        assert_eq!(mean_total_distance_exact(2).unwrap(), BigRational::zero());
    }

    #[test]
    fn branch_pmf_normalized() {
        assert_eq!(branch_length_pmf(3, 1).unwrap(), rat_small(2, 3));
        assert_eq!(branch_length_pmf(3, 2).unwrap(), rat_small(1, 3));
        for n in 2..30u64 {
            let s = (1..n).fold(BigRational::zero(), |acc, h| acc + branch_length_pmf(n, h).unwrap());
            assert!(num_traits::One::is_one(&s), "N = {n}");
        }
        assert!(branch_length_pmf(3, 3).is_err());
    }

    #[test]
    fn cycle_weight_values() {
        assert_eq!(cycle_weight(1).unwrap(), rat_small(1, 2));
        assert_eq!(cycle_weight(2).unwrap(), rat_small(3, 8));
    }

    #[test]
    fn height_from_branch_law() {
        for n in 2..=50u64 {
            let s = (1..n)
                .fold(BigRational::zero(), |acc, h| acc + branch_length_pmf(n, h).unwrap() * cycle_weight(h).unwrap());
            assert_eq!(s * rat_small(n as i64 - 1, 1), mean_height_exact(n).unwrap(), "N = {n}");
        }
    }

    #[test]
    fn float_versions_agree() {
        for n in [5u64, 17, 60] {
            let e = rational_to_f64(&mean_height_exact(n).unwrap());
            assert!((mean_height_f64(n) - e).abs() < 1e-12 * e.max(1.0));
            let e = rational_to_f64(&mean_total_distance_exact(n).unwrap());
            assert!((mean_total_distance_f64(n) - e).abs() < 1e-12 * e.max(1.0));
        }
    }
}
