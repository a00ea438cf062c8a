//! Exact enumeration in arbitrary precision.

mod brute;
mod forests;
mod geometry;
mod lambert;
mod parking_counts;
mod series;

pub use brute::{brute_force_parking, parking_census, rooted_trees, ParkingCensus, ParkingFilter, DEFAULT_PARKING_CAP};
pub use forests::{brute_force_forests, count_forests, forest_count_or_zero, list_forests};
pub use geometry::{
    branch_length_pmf, cycle_weight, distance_constant, height_constant, mean_height_exact, mean_height_f64,
    mean_total_distance_exact, mean_total_distance_f64,
};
pub use lambert::{lambert_closed_form, lambert_w0, lambert_wm1, lambert_wm1_from_log, s_at_zero, s_branch_switch};
pub use parking_counts::{countfp_literal_mismatch, pf, pf_full, pf_root, sp, sp_flux};
pub use series::{last_car_check, series_identities, IdentityReport, Poly, SeriesTable};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type BigCount = BigUint;

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn pow_u(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i))
}

pub fn rat(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rat_small(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Pochhammer `(1/2)_h = (1/2)(3/2)...(h - 1/2)`.
pub fn half_pochhammer(h: u64) -> BigRational {
    let num = (0..h).fold(BigUint::one(), |acc, i| acc * (2 * i + 1));
    rat(num, pow_u(2, h))
}

/// Natural log of a positive big integer, accurate to about one ulp.
pub fn big_ln(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn rational_ln(x: &BigRational) -> f64 {
    let num = x.numer().to_biguint().expect("positive");
    let den = x.denom().to_biguint().expect("positive");
    big_ln(&num) - big_ln(&den)
}

/// Nearest double of a rational (to within one ulp), also when numerator and
/// denominator overflow.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.numer() < &BigInt::zero() { -1.0 } else { 1.0 };
    let num = x.numer().abs().to_biguint().expect("nonnegative");
    let den = x.denom().to_biguint().expect("positive");
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 { (num << shift as u64) / den } else { num / (den << (-shift) as u64) };
    sign * scale_pow2(q.to_f64().expect("64-bit quotient"), -shift)
}

fn scale_pow2(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}
