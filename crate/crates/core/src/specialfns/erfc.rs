//! Complementary error function and its scaled form `erfcx(x) = e^{x^2} erfc(x)`.
//!
//! Power series for `|x| < 1`, a continued fraction (modified Lentz) for
//! `x >= 1` and reflection for `x <= -1`.

use std::f64::consts::PI;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// `erf(x)` by its Maclaurin series; intended for `|x| < 1`.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= -x2 / n;
        let add = term / (2.0 * n + 1.0);
        sum += add;
        if add.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

/// `erfcx(x)` for `x >= 1` from
/// `sqrt(pi) erfcx(x) = 1 / (x + (1/2) / (x + 1 / (x + (3/2) / (x + ...))))`.
fn erfcx_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..5000 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.abs() < 1.0 {
        1.0 - erf_series(x)
    } else if x >= 1.0 {
        if x > 27.3 {
            0.0
        } else {
            erfcx_cf(x) * (-x * x).exp()
        }
    } else {
        2.0 - erfc(-x)
    }
}

/// Scaled complementary error function `e^{x^2} erfc(x)`. Finite for all
/// `x >= -26`; overflows to `+inf` below that, where the true value does.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 1.0 {
        if x > 1e8 {
            // asymptotic series, next term is O(x^-5)
            let r = 1.0 / x;
            return r / PI.sqrt() * (1.0 - 0.5 * r * r);
        }
        erfcx_cf(x)
    } else if x > -1.0 {
        (x * x).exp() * (1.0 - erf_series(x))
    } else {
        2.0 * (x * x).exp() - erfcx_cf(-x)
    }
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x.abs() < 1.0 {
        erf_series(x)
    } else {
        1.0 - erfc(x)
    }
}
