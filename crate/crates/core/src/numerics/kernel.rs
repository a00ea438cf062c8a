use std::f64::consts::PI;

use super::airy::airy_p1;
use crate::error::{Error, Result};

/// `g_{x,lambda}(y) = (y + x) p1(lambda - x - y) / p1(lambda - x)`.
pub fn jump_kernel_g(x: f64, lambda: f64, y: f64) -> f64 {
    (y + x) * airy_p1(lambda - x - y) / airy_p1(lambda - x)
}

/// Density in `y` of the freezer jump measure with parameter `p`:
/// `1/2 (2 pi y^3)^(-1/2) (y + 2 p x) p1(lambda - x - y) / p1(lambda - x)`.
pub fn jump_density(x: f64, lambda: f64, y: f64, p: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("jump density needs y > 0, got {y}")));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("jump density needs x >= 0, got {x}")));
    }
    Ok(0.5 / (2.0 * PI * y * y * y).sqrt() * (y + 2.0 * p * x) * airy_p1(lambda - x - y) / airy_p1(lambda - x))
}

/// Expected number of jumps with `y` in `[lo, hi]` per unit of `lambda`, from
/// state `x` at time `lambda`: `int_lo^hi jump_density(x, lambda, y, p) dy`
/// by 16-point Gauss-Legendre on the variable `sqrt(y)`.
pub fn predicted_jump_rate(x: f64, lambda: f64, lo: f64, hi: f64, p: f64) -> f64 {
    const NODES: [f64; 8] = [
        0.095_012_509_837_637_44,
        0.281_603_550_779_258_9,
        0.458_016_777_657_227_4,
        0.617_876_244_402_643_7,
        0.755_404_408_355_003,
        0.865_631_202_387_831_7,
        0.944_575_023_073_232_6,
        0.989_400_934_991_649_9,
    ];
    const WEIGHTS: [f64; 8] = [
        0.189_450_610_455_068_5,
        0.182_603_415_044_923_6,
        0.169_156_519_395_002_5,
        0.149_595_988_816_576_7,
        0.124_628_971_255_533_9,
        0.095_158_511_682_492_8,
        0.062_253_523_938_647_9,
        0.027_152_459_411_754_1,
    ];
    let (a, b) = (lo.sqrt(), hi.sqrt());
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let denom = airy_p1(lambda - x);
    let f = |s: f64| {
        let y = s * s;
        // dy = 2 s ds
        0.5 / (2.0 * PI * y * y * y).sqrt() * (y + 2.0 * p * x) * airy_p1(lambda - x - y) / denom * 2.0 * s
    };
    let mut total = 0.0;
    for (t, w) in NODES.iter().zip(WEIGHTS.iter()) {
        total += w * (f(mid + half * t) + f(mid - half * t));
    }
    total * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::adaptive_simpson;

    #[test]
    fn small_y_limit() {
        for &(x, l) in &[(0.3, 0.0), (1.2, -0.5), (0.0, 1.0)] {
            assert!((jump_kernel_g(x, l, 1e-9) - x).abs() < 1e-8);
        }
    }

    #[test]
    fn zero_state() {
        let (l, y) = (0.4, 0.7);
        assert!((jump_kernel_g(0.0, l, y) - y * airy_p1(l - y) / airy_p1(l)).abs() < 1e-15);
    }

    #[test]
    fn two_forms_agree_at_half() {
        for &(x, l, y) in &[(0.2, 0.0, 0.3), (1.0, -1.0, 0.05), (0.5, 2.0, 1.5)] {
            let a = jump_density(x, l, y, 0.5).unwrap();
            let b = 0.5 / (2.0 * PI * y * y * y).sqrt() * jump_kernel_g(x, l, y);
            assert!(((a - b) / b).abs() < 1e-14);
        }
        assert!(jump_density(0.1, 0.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn gauss_rate_matches_simpson() {
        let (x, l) = (0.4, 0.2);
        let g = predicted_jump_rate(x, l, 0.1, 1.0, 0.5);
        let s = adaptive_simpson(&|y| jump_density(x, l, y, 0.5).unwrap(), 0.1, 1.0, 1e-12);
        assert!(((g - s) / s).abs() < 1e-9, "{g} vs {s}");
    }
}
