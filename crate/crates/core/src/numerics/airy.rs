//! Airy function on the non-negative axis and the map-Airy density
//! `p1(x) = -1/2 e^(x^3/12) (x Ai(x^2/4) + 2 Ai'(x^2/4))`.
//!
//! `Ai` on `[0, Z_ASYM]` comes from Taylor steps of `y'' = z y`. Anchors are
//! laid every `ANCHOR_STEP` by marching backwards from the asymptotic value at
//! `Z_ASYM`; backwards is the stable direction for the recessive solution.
//! Near the origin this is the Maclaurin series. Beyond `Z_ASYM` and for
//! `|x| > 2 sqrt(Z_ASYM)` the Poincare expansions are used, and in `p1` the
//! leading terms of `x Ai + 2 Ai'` cancel analytically so both tails are free
//! of cancellation.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// `Ai(0)`.
pub const AI0: f64 = 0.355_028_053_887_817_239_3;
/// `-Ai'(0)`, which is also `p1(0) = 3^(1/6) Gamma(2/3) / (2 pi)`.
pub const P1_AT_ZERO: f64 = 0.258_819_403_792_806_798_4;

const Z_ASYM: f64 = 12.0;
const ANCHOR_STEP: f64 = 0.25;

/// `u_k` of the Poincare expansion, `u_0 = 1`.
fn u_coeffs() -> &'static [f64] {
    static U: OnceLock<Vec<f64>> = OnceLock::new();
    U.get_or_init(|| {
        let mut u = vec![1.0];
        for k in 1..40 {
            let kf = k as f64;
            let prev = u[k - 1];
            u.push(prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / (216.0 * kf * (2.0 * kf - 1.0)));
        }
        u
    })
}

fn v_coeff(k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        let kf = k as f64;
        -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u_coeffs()[k]
    }
}

/// `sum_k (-1)^k c_k zeta^(-k)` over `k >= from`, stopped at the smallest term.
fn poincare_sum(zeta: f64, from: usize, coeff: impl Fn(usize) -> f64) -> f64 {
    let mut total = 0.0;
    let mut last = f64::INFINITY;
    let inv = 1.0 / zeta;
    let mut pow = inv.powi(from as i32);
    for k in from..u_coeffs().len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * coeff(k) * pow;
        if term.abs() > last {
            break;
        }
        total += term;
        if term.abs() < 1e-18 * total.abs() {
            break;
        }
        last = term.abs();
        pow *= inv;
    }
    total
}

/// `(e^zeta Ai(z), e^zeta Ai'(z))` from the Poincare expansions.
fn scaled_asymptotic(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let q = z.powf(0.25);
    let norm = 0.5 / PI.sqrt();
    let ai = norm / q * poincare_sum(zeta, 0, |k| u_coeffs()[k]);
    let aip = -norm * q * poincare_sum(zeta, 0, v_coeff);
    (ai, aip)
}

/// Taylor step of `y'' = z y` from `(z0, y, y')` by `h`, using
/// `(k+2)(k+1) c_{k+2} = z0 c_k + c_{k-1}`.
fn taylor_step(z0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    let (mut c_prev, mut c_k, mut c_next) = (0.0, y, yp);
    let (mut val, mut der) = (0.0, 0.0);
    let mut hk = 1.0;
    let mut quiet = 0;
    for k in 0..400usize {
        let tv = c_k * hk;
        let td = (k + 1) as f64 * c_next * hk;
        val += tv;
        der += td;
        let c_after = (z0 * c_k + c_prev) / ((k + 2) as f64 * (k + 1) as f64);
        c_prev = c_k;
        c_k = c_next;
        c_next = c_after;
        hk *= h;
        if tv.abs() <= 1e-20 * val.abs() && td.abs() <= 1e-20 * der.abs() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (val, der)
}

fn anchors() -> &'static [(f64, f64)] {
    static A: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    A.get_or_init(|| {
        let count = (Z_ASYM / ANCHOR_STEP).round() as usize;
        let mut out = vec![(0.0, 0.0); count + 1];
        let zeta = 2.0 / 3.0 * Z_ASYM.powf(1.5);
        let (sa, sap) = scaled_asymptotic(Z_ASYM);
        let scale = (-zeta).exp();
        let (mut y, mut yp) = (sa * scale, sap * scale);
        out[count] = (y, yp);
        // Sub-steps keep the series short.
        let sub = 4;
        let h = -ANCHOR_STEP / sub as f64;
        for i in (0..count).rev() {
            let mut z = (i + 1) as f64 * ANCHOR_STEP;
            for _ in 0..sub {
                let (ny, nyp) = taylor_step(z, y, yp, h);
                y = ny;
                yp = nyp;
                z += h;
            }
            out[i] = (y, yp);
        }
        out
    })
}

fn ai_pair(z: f64) -> (f64, f64) {
    if z >= Z_ASYM {
        let zeta = 2.0 / 3.0 * z.powf(1.5);
        let (a, ap) = scaled_asymptotic(z);
        let s = (-zeta).exp();
        return (a * s, ap * s);
    }
    let idx = (z / ANCHOR_STEP).round() as usize;
    let (y, yp) = anchors()[idx];
    let z0 = idx as f64 * ANCHOR_STEP;
    taylor_step(z0, y, yp, z - z0)
}

/// `Ai(z)` for `z >= 0`.
pub fn airy_ai(z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("Ai is implemented on z >= 0, got {z}")));
    }
    Ok(ai_pair(z).0)
}

/// `Ai'(z)` for `z >= 0`.
pub fn airy_ai_prime(z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("Ai' is implemented on z >= 0, got {z}")));
    }
    Ok(ai_pair(z).1)
}

/// The density `p1`.
pub fn airy_p1(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let z = 0.25 * x * x;
    if z < Z_ASYM {
        let (ai, aip) = ai_pair(z);
        return -0.5 * (x * x * x / 12.0).exp() * (x * ai + 2.0 * aip);
    }
    let zeta = x.abs().powi(3) / 12.0;
    let norm = z.powf(0.25) / PI.sqrt();
    if x > 0.0 {
        // x e^zeta Ai + 2 e^zeta Ai' = (z^(1/4)/sqrt(pi)) sum (-1)^k (u_k - v_k) zeta^-k; k = 0 cancels.
        -0.5 * norm * poincare_sum(zeta, 1, |k| u_coeffs()[k] - v_coeff(k))
    } else {
        0.5 * norm * (-2.0 * zeta).exp() * poincare_sum(zeta, 0, |k| u_coeffs()[k] + v_coeff(k))
    }
}

/// `p_t(x) = t^(-2/3) p1(x t^(-2/3))`.
pub fn airy_pt(t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("p_t needs t > 0, got {t}")));
    }
    let s = t.powf(-2.0 / 3.0);
    Ok(s * airy_p1(x * s))
}

/// `sqrt(|x|) exp(-|x|^3/6) / sqrt(2 pi)`.
pub fn p1_left_tail(x: f64) -> f64 {
    x.abs().sqrt() * (-x.abs().powi(3) / 6.0).exp() / (2.0 * PI).sqrt()
}

/// `|x|^(-5/2) / sqrt(2 pi)`.
pub fn p1_right_tail(x: f64) -> f64 {
    x.abs().powf(-2.5) / (2.0 * PI).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn origin_values() {
        assert!(rel(airy_ai(0.0).unwrap(), AI0) < 1e-14);
        assert!(rel(-airy_ai_prime(0.0).unwrap(), P1_AT_ZERO) < 1e-14);
        let closed = 3f64.powf(1.0 / 6.0) * gamma(2.0 / 3.0) / (2.0 * PI);
        assert!(rel(airy_p1(0.0), closed) < 1e-13);
    }

    #[test]
    fn maclaurin_overlap() {
        // Plain Maclaurin series at small z against the anchored evaluation.
        for &z in &[0.1, 0.5, 1.0, 1.5] {
            let (a, ap) = taylor_step(0.0, AI0, -P1_AT_ZERO, z);
            assert!(rel(airy_ai(z).unwrap(), a) < 1e-13, "z = {z}");
            assert!(rel(airy_ai_prime(z).unwrap(), ap) < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn asymptotic_overlap() {
        for &z in &[9.0, 10.0, 11.0, 11.9] {
            let zeta = 2.0 / 3.0 * f64::powf(z, 1.5);
            let (a, ap) = scaled_asymptotic(z);
            let s = (-zeta).exp();
            assert!(rel(airy_ai(z).unwrap(), a * s) < 1e-12, "z = {z}");
            assert!(rel(airy_ai_prime(z).unwrap(), ap * s) < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn reference_values() {
        // 40-digit evaluations of the defining formula.
        let table = [
            (-10.0, 5.2308056267753806184e-73),
            (-6.0, 2.2683755228584861107e-16),
            (-3.0, 0.0077194981070162295163),
            (-1.0, 0.36309009001577166895),
            (1.0, 0.11247297759240857595),
            (3.0, 0.021599619587913549359),
            (5.0, 0.0068313612909965303199),
            (6.9, 0.0031352810999686884142),
            (10.0, 0.0012542932838131891545),
            (20.0, 0.00022285314072735461955),
        ];
        for (x, v) in table {
            assert!(rel(airy_p1(x), v) < 1e-9, "p1({x}) = {} vs {v}", airy_p1(x));
        }
    }

    #[test]
    fn continuous_at_crossover() {
        let x = 2.0 * Z_ASYM.sqrt();
        for s in [-1.0, 1.0] {
            let a = airy_p1(s * x * (1.0 - 1e-12));
            let b = airy_p1(s * x * (1.0 + 1e-12));
            assert!(rel(a, b) < 1e-9);
        }
    }

    #[test]
    fn positive_and_scaled() {
        let mut x = -12.0;
        while x < 40.0 {
            assert!(airy_p1(x) > 0.0, "x = {x}");
            x += 0.37;
        }
        assert!(airy_pt(0.0, 1.0).is_err());
        assert!(rel(airy_pt(1.0, 0.7).unwrap(), airy_p1(0.7)) < 1e-15);
        assert!(rel(airy_pt(8.0, 2.0).unwrap(), 0.25 * airy_p1(0.5)) < 1e-15);
    }

    #[test]
    fn mode_near_reported_value() {
        let (mut best, mut arg) = (0.0, 0.0);
        let mut x = -1.5;
        while x < 0.0 {
            let v = airy_p1(x);
            if v > best {
                best = v;
                arg = x;
            }
            x += 1e-4;
        }
        assert!((arg + 0.886).abs() < 1e-3, "mode at {arg}");
    }
}
