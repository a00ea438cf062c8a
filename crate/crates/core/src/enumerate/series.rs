//! Truncated power series over the rationals and the strongly-parked-tree table.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{binomial, factorial, pf_full, pf_root, pow_u, rat, rat_int};

/// Univariate series `sum c[k] x^k` truncated after `c.len()` terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn zero(len: usize) -> Self {
        Poly(vec![BigRational::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let len = self.len().min(other.len());
        let mut out = Poly::zero(len);
        for (i, a) in self.0.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate().take(len - i) {
                out.0[i + j] += a * b;
            }
        }
        out
    }

    pub fn add(&self, other: &Poly) -> Poly {
        Poly(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        Poly(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly(self.0.iter().map(|a| a * s).collect())
    }

    /// `x^k c[k] -> c[k] * k` (the operator `x d/dx`).
    pub fn theta(&self) -> Poly {
        Poly(self.0.iter().enumerate().map(|(k, a)| a * BigRational::from_integer(BigInt::from(k))).collect())
    }

    /// Multiplication by `x`, keeping the length.
    pub fn shift(&self) -> Poly {
        let mut v = vec![BigRational::zero()];
        v.extend(self.0.iter().take(self.len().saturating_sub(1)).cloned());
        Poly(v)
    }

    /// `exp` of a series with zero constant term, via `k e_k = sum_j j c_j e_{k-j}`.
    pub fn exp(&self) -> Poly {
        assert!(self.0.first().map_or(true, |c| c.is_zero()), "exp needs a zero constant term");
        let len = self.len();
        let mut e = Poly::zero(len);
        if len == 0 {
            return e;
        }
        e.0[0] = BigRational::one();
        for k in 1..len {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if self.0[j].is_zero() {
                    continue;
                }
                acc += &self.0[j] * &e.0[k - j] * BigRational::from_integer(BigInt::from(j));
            }
            e.0[k] = acc / BigRational::from_integer(BigInt::from(k));
        }
        e
    }

    /// `self(inner)` where `inner` has zero constant term.
    pub fn compose(&self, inner: &Poly) -> Poly {
        assert!(inner.0.first().map_or(true, |c| c.is_zero()));
        let len = self.len().min(inner.len());
        let mut out = Poly::zero(len);
        let mut power = Poly::zero(len);
        if len > 0 {
            power.0[0] = BigRational::one();
        }
        for k in 0..len {
            if !self.0[k].is_zero() {
                out = out.add(&power.scale(&self.0[k]));
            }
            power = power.mul(inner);
        }
        out
    }

    /// First index where the two series differ.
    pub fn first_difference(&self, other: &Poly) -> Option<usize> {
        (0..self.len().min(other.len())).find(|&k| self.0[k] != other.0[k])
    }
}

/// Coefficients `a[n][p] = SP(n, n+p) / (n! (n+p)!)` for `1 <= n`, `n + p <= degree`.
#[derive(Clone, Debug)]
pub struct SeriesTable {
    degree: usize,
    a: Vec<Vec<BigRational>>,
}

impl SeriesTable {
    /// Fills the table from `y S = x (e^y e^(S - S(x,0)) - 1)` row by row in `n`.
    /// Row `n` only needs `[x^(n-1)] e^(S - S(x,0))`, which involves rows `< n`.
    pub fn tutte(degree: usize) -> Self {
        let d = degree.max(1);
        let ylen = d + 2;
        let exp_y: Vec<BigRational> = (0..ylen).map(|j| rat(1u32.into(), factorial(j as u64))).collect();
        let mut a: Vec<Vec<BigRational>> = vec![Vec::new(); d + 1];
        // r[k](y): y-polynomial of the x^k part of S - S(x,0); e[k](y): same for the exponential.
        let mut r: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); ylen]];
        let mut e: Vec<Vec<BigRational>> = vec![{
            let mut v = vec![BigRational::zero(); ylen];
            v[0] = BigRational::one();
            v
        }];
        for n in 1..=d {
            let prev = &e[n - 1];
            let row: Vec<BigRational> = (0..=d - n)
                .map(|p| {
                    let mut acc = BigRational::zero();
                    for j in 0..=p + 1 {
                        acc += &exp_y[j] * &prev[p + 1 - j];
                    }
                    acc
                })
                .collect();
            let mut rn = vec![BigRational::zero(); ylen];
            for (p, c) in row.iter().enumerate().skip(1) {
                rn[p] = c.clone();
            }
            a[n] = row;
            r.push(rn);
            // n e_n = sum_{j=1}^n j r_j e_{n-j}
            let mut en = vec![BigRational::zero(); ylen];
            for j in 1..=n {
                let jr = BigRational::from_integer(BigInt::from(j));
                for (s, rc) in r[j].iter().enumerate() {
                    if rc.is_zero() {
                        continue;
                    }
                    let w = rc * &jr;
                    for (t, ec) in e[n - j].iter().enumerate().take(ylen - s) {
                        if !ec.is_zero() {
                            en[s + t] += &w * ec;
                        }
                    }
                }
            }
            let inv = BigRational::new(BigInt::one(), BigInt::from(n));
            for c in en.iter_mut() {
                *c = &*c * &inv;
            }
            e.push(en);
        }
        Self { degree: d, a }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `a[n][p]`, zero outside the filled triangle's index range for `n = 0`.
    pub fn get(&self, n: usize, p: usize) -> &BigRational {
        assert!(n >= 1 && n + p <= self.degree, "({n}, {p}) outside the table");
        &self.a[n][p]
    }

    /// `SP(n, n+p)` recovered from the table.
    pub fn count(&self, n: usize, p: usize) -> BigRational {
        self.get(n, p) * rat_int(factorial(n as u64) * factorial((n + p) as u64))
    }

    /// `S(x, 0)` as a series of length `degree + 1`.
    pub fn s_at_zero(&self) -> Poly {
        let mut c = vec![BigRational::zero(); self.degree + 1];
        for (n, slot) in c.iter_mut().enumerate().skip(1) {
            *slot = self.a[n][0].clone();
        }
        Poly(c)
    }

    fn coeff_or_zero(&self, n: usize, p: usize) -> BigRational {
        if n == 0 || n + p > self.degree {
            BigRational::zero()
        } else {
            self.a[n][p].clone()
        }
    }
}

/// Outcome of one coefficient-wise identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub name: &'static str,
    pub order: usize,
    /// First coefficient index (or `(n, p)` flattened as `n * 1000 + p`) where it fails.
    pub first_failure: Option<usize>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

fn series_n(order: usize) -> Poly {
    let mut c = vec![BigRational::zero(); order + 1];
    for (n, slot) in c.iter_mut().enumerate().skip(1) {
        let n = n as u64;
        *slot = rat(pf_root(n, n - 1).unwrap(), factorial(n) * factorial(n - 1));
    }
    Poly(c)
}

fn series_f(order: usize) -> Poly {
    let mut c = vec![BigRational::zero(); order + 1];
    for (n, slot) in c.iter_mut().enumerate().skip(1) {
        let n = n as u64;
        let f = factorial(n);
        *slot = rat(pf_full(n).unwrap(), &f * &f);
    }
    Poly(c)
}

fn series_t(order: usize) -> Poly {
    let mut c = vec![BigRational::zero(); order + 1];
    for (n, slot) in c.iter_mut().enumerate().skip(1) {
        let n = n as u64;
        let count = if n == 1 { 1u32.into() } else { pow_u(n, n - 2) };
        *slot = rat(count, factorial(n));
    }
    Poly(c)
}

/// Checks, up to `x^order`, the identities linking the series of nearly parked
/// trees `N`, fully parked trees `F`, strongly parked trees `S(x,0)` and Cayley trees `T`.
pub fn series_identities(order: usize) -> Vec<IdentityReport> {
    let nn = series_n(order);
    let ff = series_f(order);
    let tt = series_t(order);
    let table = SeriesTable::tutte(order);
    let s0 = table.s_at_zero();
    let mut out = Vec::new();

    let x_exp_f = ff.exp().shift();
    out.push(IdentityReport { name: "N = x exp(F)", order, first_failure: nn.first_difference(&x_exp_f) });

    let composed = s0.compose(&x_exp_f);
    out.push(IdentityReport { name: "F = S(x exp(F))", order, first_failure: ff.first_difference(&composed) });

    let xt = tt.theta();
    let half = BigRational::new(1.into(), 2.into());
    let rhs = xt.sub(&xt.mul(&xt).scale(&half));
    out.push(IdentityReport { name: "T = xT' - (xT')^2/2", order, first_failure: tt.first_difference(&rhs) });

    let t2 = Poly(tt.0.iter().enumerate().map(|(k, c)| c * rat_int(pow_u(2, k as u64)) * &half).collect());
    out.push(IdentityReport { name: "N(x) = T(2x)/2", order, first_failure: nn.first_difference(&t2) });

    // S'(x) = (1 - sqrt(1-4x)) / (2x) = sum_k Cat_k x^k, so [x^n] S(x,0) = Cat_{n-1} / n.
    let mut catalan = Poly::zero(order + 1);
    for n in 1..=order as u64 {
        let k = n - 1;
        catalan.0[n as usize] = rat(binomial(2 * k, k), (k + 1).into()) / BigRational::from_integer(BigInt::from(n));
    }
    out.push(IdentityReport {
        name: "S(x,0) = Catalan antiderivative",
        order,
        first_failure: s0.first_difference(&catalan),
    });
    out
}

/// Checks `(y S_y + x S_x - S.(x,0)) (1 - S.(x,0)) = x y S_x` on every `(n, p)` with
/// `n + p <= order`, together with the specialization `S.(x,0) (1 - S.(x,0)) = x`,
/// where `S.(x,y) = x S_x(x,y)`.
pub fn last_car_check(order: usize) -> Vec<IdentityReport> {
    let table = SeriesTable::tutte(order);
    let s_dot0 = table.s_at_zero().theta();
    let mut first = None;
    'outer: for n in 1..=order {
        for p in 0..=order - n {
            // [x^n y^p] of (y S_y + x S_x - S.(x,0)) (1 - S.(x,0))
            let lhs_coeff = |k: usize, q: usize| -> BigRational {
                let mut c = table.coeff_or_zero(k, q) * BigRational::from_integer(BigInt::from(k + q));
                if q == 0 {
                    c -= &s_dot0.0[k];
                }
                c
            };
            let mut lhs = lhs_coeff(n, p);
            for j in 1..n {
                lhs -= lhs_coeff(n - j, p) * &s_dot0.0[j];
            }
            let rhs = if p == 0 {
                BigRational::zero()
            } else {
                table.coeff_or_zero(n, p - 1) * BigRational::from_integer(BigInt::from(n))
            };
            if lhs != rhs {
                first = Some(n * 1000 + p);
                break 'outer;
            }
        }
    }
    let mut out = vec![IdentityReport { name: "last-car equation", order, first_failure: first }];
    let mut x = Poly::zero(order + 1);
    if order >= 1 {
        x.0[1] = BigRational::one();
    }
    let one_minus = Poly({
        let mut v: Vec<BigRational> = s_dot0.0.iter().map(|c| -c).collect();
        v[0] += BigRational::one();
        v
    });
    let prod = s_dot0.mul(&one_minus);
    out.push(IdentityReport { name: "S.(x,0) = x / (1 - S.(x,0))", order, first_failure: prod.first_difference(&x) });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::sp;

    #[test]
    fn single_vertex_row() {
        let t = SeriesTable::tutte(8);
        for p in 0..8 {
            assert_eq!(t.get(1, p), &rat(1u32.into(), factorial(p as u64 + 1)));
            assert_eq!(t.count(1, p), BigRational::one());
        }
    }

    #[test]
    fn diagonal_matches_king_yan() {
        let t = SeriesTable::tutte(20);
        for n in 1..=20usize {
            assert_eq!(t.count(n, 0), rat_int(sp(n as u64).unwrap()), "n = {n}");
        }
    }

    #[test]
    fn identities_order_one() {
        for r in series_identities(1) {
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn identities_order_twenty() {
        for r in series_identities(20) {
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn last_car_order_fifteen() {
        for r in last_car_check(15) {
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn poly_exp_log_roundtrip() {
        // exp(x) coefficients are 1/k!
        let mut x = Poly::zero(8);
        x.0[1] = BigRational::one();
        let e = x.exp();
        for k in 0..8 {
            assert_eq!(e.0[k], rat(1u32.into(), factorial(k as u64)));
        }
    }
}
