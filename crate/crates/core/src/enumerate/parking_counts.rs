use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::series::SeriesTable;
use super::{count_forests, factorial, pow_u};
use crate::error::{Error, Result};

/// Pairs (rooted tree, arrivals) where all `m` cars park and the root stays empty:
/// `n^(n-m-1) m! 2^m #F(n,m)`.
pub fn pf_root(n: u64, m: u64) -> Result<BigUint> {
    if n == 0 || m >= n {
        return Err(Error::Domain(format!("pf_root needs 0 <= m < n, got n = {n}, m = {m}")));
    }
    Ok(pow_u(n, n - m - 1) * factorial(m) * pow_u(2, m) * count_forests(n, m)?)
}

/// Pairs (rooted tree, arrivals) where all `m` cars park.
pub fn pf(n: u64, m: u64) -> Result<BigUint> {
    if n == 0 || m > n {
        return Err(Error::Domain(format!("pf needs 0 <= m <= n, got n = {n}, m = {m}")));
    }
    if m == n {
        return pf_full(n);
    }
    let r = pf_root(n, m)? * n;
    debug_assert!((&r % (n - m)).is_zero());
    Ok(r / (n - m))
}

/// Fully parked trees: `((n-1)!)^2 sum_j (n-j) (2n)^j / j!`.
pub fn pf_full(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("pf_full needs n >= 1".into()));
    }
    let f = factorial(n - 1);
    // (n-1)! (2n)^j / j! is an integer for j <= n-1.
    let mut sum = BigUint::zero();
    for j in 0..n {
        sum += (&f / factorial(j)) * pow_u(2 * n, j) * (n - j);
    }
    Ok(f * sum)
}

/// Strongly parked trees with `n` cars: `(2n-2)!`.
pub fn sp(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("sp needs n >= 1".into()));
    }
    Ok(factorial(2 * n - 2))
}

/// Strongly parked trees on `n` vertices with `n + p` cars, read off the Tutte table.
pub fn sp_flux(n: u64, p: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("sp_flux needs n >= 1".into()));
    }
    let table = SeriesTable::tutte((n + p) as usize);
    let a = table.get(n as usize, p as usize).clone();
    let scaled = a * num_rational::BigRational::from_integer((factorial(n) * factorial(n + p)).into());
    if !scaled.is_integer() {
        return Err(Error::Domain(format!("non-integral coefficient at n = {n}, p = {p}")));
    }
    Ok(scaled.to_integer().to_biguint().expect("non-negative"))
}

/// Ratio between the literal reading `n^(n-m) m! 2^m #F(n,m)` of the displayed
/// closed form and the count `pf_root(n, m)`; equals `n` whenever both are defined.
pub fn countfp_literal_mismatch(n: u64, m: u64) -> Result<u64> {
    let literal = pow_u(n, n - m) * factorial(m) * pow_u(2, m) * count_forests(n, m)?;
    let proof = pf_root(n, m)?;
    Ok((literal / proof).to_u64().unwrap_or(0))
}
