//! Globally adaptive Gauss-Kronrod (7/15) quadrature on finite and infinite
//! intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 4000,
        }
    }
}

impl QuadOptions {
    pub fn tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    let value = k * h;
    let err = ((k - g) * h).abs();
    // QUADPACK-style error scaling
    let err = if err > 0.0 {
        err * (200.0 * err / value.abs().max(f64::MIN_POSITIVE)).powf(1.5).min(1.0)
    } else {
        0.0
    };
    (value, err.max(f64::EPSILON * value.abs()))
}

fn adapt(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
        });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    let mut n = 1;
    loop {
        if !total.is_finite() {
            return Err(Error::QuadratureFailure { a, b, estimate: f64::NAN });
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok(QuadResult { value: total, error: err });
        }
        if n >= opts.max_intervals {
            return Err(Error::QuadratureFailure { a, b, estimate: err });
        }
        let seg = heap.pop().expect("non-empty heap");
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a || m >= seg.b {
            // interval exhausted at machine resolution; accept what we have
            heap.push(Segment { error: 0.0, ..seg });
            err = heap.iter().map(|s| s.error).sum();
            if err == 0.0 || heap.iter().all(|s| s.error == 0.0) {
                return Ok(QuadResult { value: total, error: err });
            }
            continue;
        }
        let (v1, e1) = gk15(&mut f, seg.a, m);
        let (v2, e2) = gk15(&mut f, m, seg.b);
        total += v1 + v2 - seg.value;
        err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: m, value: v1, error: e1 });
        heap.push(Segment { a: m, b: seg.b, value: v2, error: e2 });
        n += 1;
        if n % 64 == 0 {
            // resum to shed accumulated cancellation
            total = heap.iter().map(|s| s.value).sum();
            err = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// Integrates `f` over `[a, b]`; either limit may be infinite.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    integrate_dyn(&f, a, b, opts)
}

fn integrate_dyn(f: &dyn Fn(f64) -> f64, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::param("limits", "NaN integration limit"));
    }
    if a > b {
        let r = integrate_dyn(f, b, a, opts)?;
        return Ok(QuadResult { value: -r.value, error: r.error });
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adapt(f, a, b, opts),
        (true, false) => adapt(
            |s| {
                // x = a + s / (1 - s)
                let d = 1.0 - s;
                if d <= 0.0 {
                    return 0.0;
                }
                let v = f(a + s / d) / (d * d);
                if v.is_finite() { v } else { 0.0 }
            },
            0.0,
            1.0,
            opts,
        ),
        (false, true) => adapt(
            |s| {
                let d = 1.0 - s;
                if d <= 0.0 {
                    return 0.0;
                }
                let v = f(b - s / d) / (d * d);
                if v.is_finite() { v } else { 0.0 }
            },
            0.0,
            1.0,
            opts,
        ),
        (false, false) => {
            let l = integrate_dyn(f, f64::NEG_INFINITY, 0.0, opts)?;
            let r = integrate_dyn(f, 0.0, f64::INFINITY, opts)?;
            Ok(QuadResult { value: l.value + r.value, error: l.error + r.error })
        }
    }
}

/// Integrates over consecutive panels `[p_0, p_1], [p_1, p_2], ...`,
/// useful when `f` has kinks or jumps at known points.
pub fn integrate_breaks(f: impl Fn(f64) -> f64, points: &[f64], opts: QuadOptions) -> Result<QuadResult> {
    if points.len() < 2 {
        return Err(Error::Empty("integration breakpoints"));
    }
    let mut value = 0.0;
    let mut error = 0.0;
    for w in points.windows(2) {
        let r = integrate(&f, w[0], w[1], opts)?;
        value += r.value;
        error += r.error;
    }
    Ok(QuadResult { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, QuadOptions::default()).unwrap();
        assert!((r.value - 8.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_over_real_line() {
        let r = integrate(|x| (-x * x).exp(), f64::NEG_INFINITY, f64::INFINITY, QuadOptions::default())
            .unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn half_line_exponential() {
        let r = integrate(|x| (2.0 * x).exp(), f64::NEG_INFINITY, 0.0, QuadOptions::default()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, QuadOptions::tol(1e-10, 1e-10)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = integrate(|x| x.cos(), 1.0, 0.0, QuadOptions::default()).unwrap();
        assert!((r.value + 1f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn jump_handled_with_breakpoints() {
        let f = |x: f64| if x < 0.3 { 1.0 } else { 2.0 };
        let r = integrate_breaks(f, &[0.0, 0.3, 1.0], QuadOptions::default()).unwrap();
        assert!((r.value - 1.7).abs() < 1e-14);
    }
}
