//! Real branches of the Lambert function and the closed form of the
//! strongly-parked-tree series `S(x, y)`.

use std::f64::consts::{E, LN_2};

use crate::error::{Error, Result};

const BRANCH_POINT: f64 = -1.0 / E;
const MAX_ITER: usize = 200;

// Series around the branch point in p = sqrt(2 (e x + 1)); sign selects the branch.
fn near_branch_point(x: f64, sign: f64) -> f64 {
    let p = sign * (2.0 * (E * x + 1.0)).max(0.0).sqrt();
    -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
}

fn halley(x: f64, mut w: f64) -> f64 {
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        if (next - w).abs() <= 4.0 * f64::EPSILON * next.abs().max(1.0) {
            return next;
        }
        w = next;
    }
    w
}

/// Principal branch `W_0` on `[-1/e, inf)`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !(x >= BRANCH_POINT - 1e-15) {
        return Err(Error::Domain(format!("W0 undefined at {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let guess = if x < -0.25 {
        near_branch_point(x.max(BRANCH_POINT), 1.0)
    } else if x < 3.0 {
        x.ln_1p() * (1.0 - x.ln_1p() / (2.0 + x.ln_1p()))
    } else {
        let l = x.ln();
        l - l.ln()
    };
    Ok(halley(x.max(BRANCH_POINT), guess))
}

/// Lower branch `W_{-1}` on `[-1/e, 0)`.
pub fn lambert_wm1(x: f64) -> Result<f64> {
    if !(x >= BRANCH_POINT - 1e-15 && x < 0.0) {
        return Err(Error::Domain(format!("W-1 undefined at {x}")));
    }
    if x < -0.25 {
        return Ok(halley(x.max(BRANCH_POINT), near_branch_point(x.max(BRANCH_POINT), -1.0)));
    }
    lambert_wm1_from_log((-x).ln())
}

/// `W_{-1}(-exp(l))` for `l <= -1`, solving `w + ln(-w) = l` so that tiny
/// arguments (below the smallest double) stay representable.
pub fn lambert_wm1_from_log(l: f64) -> Result<f64> {
    if !(l <= -1.0 + 1e-12) {
        return Err(Error::Domain(format!("W-1 undefined at -exp({l})")));
    }
    if l > -1.5 {
        return Ok(halley(-(l.exp()).min(-BRANCH_POINT), near_branch_point(-(l.exp()), -1.0)));
    }
    let mut w = l - (-l).ln();
    for _ in 0..MAX_ITER {
        let f = w + (-w).ln() - l;
        let step = f / (1.0 + 1.0 / w);
        let next = w - step;
        if (next - w).abs() <= 4.0 * f64::EPSILON * next.abs() {
            return Ok(next);
        }
        w = next;
    }
    Ok(w)
}

/// `S(x, 0) = 1 - ln 2 - sqrt(1-4x) + ln(1 + sqrt(1-4x))`.
pub fn s_at_zero(x: f64) -> f64 {
    let r = (1.0 - 4.0 * x).sqrt();
    1.0 - LN_2 - r + (1.0 + r).ln()
}

/// `y = (1 - sqrt(1-4x)) / 2`, where the closed form changes Lambert branch.
pub fn s_branch_switch(x: f64) -> f64 {
    0.5 * (1.0 - (1.0 - 4.0 * x).sqrt())
}

/// `S(x, y) = -W(D) - x/y` with `D = -exp(y - S(x,0) - x/y) x/y`, using `W_{-1}`
/// up to the branch switch and `W_0` beyond it.
pub fn lambert_closed_form(x: f64, y: f64) -> Result<f64> {
    if !(0.0..0.25).contains(&x) || !(y > 0.0) {
        return Err(Error::Domain(format!("need 0 <= x < 1/4 and y > 0, got ({x}, {y})")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let t = x / y;
    let log_neg_delta = y - s_at_zero(x) - t + t.ln();
    if log_neg_delta > -1.0 + 1e-12 {
        return Err(Error::Domain(format!("Delta < -1/e at ({x}, {y}): beyond the radius in y")));
    }
    let w =
        if y <= s_branch_switch(x) { lambert_wm1_from_log(log_neg_delta)? } else { lambert_w0(-log_neg_delta.exp())? };
    Ok(-w - t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residuals_small() {
        for &x in &[-0.36, -0.3, -0.2, -0.1, -1e-3, -1e-10, 0.5, 1.0, 10.0, 1e5] {
            let w = lambert_w0(x).unwrap();
            assert!((w * w.exp() - x).abs() <= 1e-14 * x.abs().max(1e-3), "W0({x}) = {w}");
        }
        for &x in &[-0.36, -0.3, -0.2, -0.1, -1e-3, -1e-10, -1e-200] {
            let w = lambert_wm1(x).unwrap();
            assert!(w <= -1.0);
            let residual = w + (-w).ln() - (-x).ln();
            assert!(residual.abs() <= 1e-14 * (-x).ln().abs(), "W-1({x}) = {w}");
        }
    }

    #[test]
    fn branch_point() {
        assert!((lambert_w0(BRANCH_POINT).unwrap() + 1.0).abs() < 1e-7);
        assert!((lambert_wm1(BRANCH_POINT).unwrap() + 1.0).abs() < 1e-7);
        assert!(lambert_w0(-0.5).is_err());
    }

    #[test]
    fn log_form_extends_far() {
        let w = lambert_wm1_from_log(-2000.0).unwrap();
        assert!((w + (-w).ln() + 2000.0).abs() < 1e-12);
    }

    #[test]
    fn limit_at_small_y() {
        // S(x, y) = S(x, 0) + O(y): Richardson on two small y.
        let x = 0.2;
        let h = 1e-5;
        let a = lambert_closed_form(x, h).unwrap();
        let b = lambert_closed_form(x, 2.0 * h).unwrap();
        assert!((2.0 * a - b - s_at_zero(x)).abs() < 1e-8, "{} vs {}", 2.0 * a - b, s_at_zero(x));
    }

    #[test]
    fn continuous_across_branch_switch() {
        let x = 0.245;
        let ys = s_branch_switch(x);
        assert!((ys - 0.4293).abs() < 1e-3);
        let below = lambert_closed_form(x, ys - 1e-9).unwrap();
        let above = lambert_closed_form(x, ys + 1e-9).unwrap();
        assert!(below.is_finite() && above.is_finite());
        assert!((below - above).abs() < 1e-3);
        let mut prev = lambert_closed_form(x, 0.3).unwrap();
        let mut y = 0.3;
        while y < 0.48 {
            y += 0.001;
            let v = lambert_closed_form(x, y).unwrap();
            assert!(v > prev && v - prev < 0.01, "jump at y = {y}");
            prev = v;
        }
    }

    #[test]
    fn beyond_radius_rejected() {
        assert!(matches!(lambert_closed_form(0.1, 5.0), Err(Error::Domain(_))));
    }
}
