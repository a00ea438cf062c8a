use super::airy::airy_p1;

fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `int p1` over the real line: adaptive quadrature on `[-30, 60]` plus the
/// right tail on `[60, inf)` through `x = 60 / s^2`. The left tail beyond
/// `-30` is below `exp(-4500)`.
pub fn p1_normalization() -> f64 {
    let body = adaptive_simpson(&airy_p1, -30.0, 60.0, 1e-12);
    let tail = adaptive_simpson(
        &|s: f64| if s <= 0.0 { 0.0 } else { airy_p1(60.0 / (s * s)) * 120.0 / (s * s * s) },
        0.0,
        1.0,
        1e-13,
    );
    body + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = adaptive_simpson(&|x| x * x * x - x, 0.0, 2.0, 1e-12);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn p1_is_normalized() {
        assert!((p1_normalization() - 1.0).abs() < 1e-6);
    }
}
