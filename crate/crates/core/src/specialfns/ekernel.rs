//! The half-line smoothing kernel
//! `E(x, t; lambda, mu) = int_{-inf}^0 e^{2z} e^{-(x - z - lambda t)^2 / (mu t)} dz`
//! and a sampler for its pointwise bound.

use std::f64::consts::PI;

use super::erfc::{erfc, erfcx};
use super::quad::{integrate_breaks, QuadOptions};
use crate::error::{Error, Result};

/// Closed form of `E` through `erfc`, with the exponents combined before
/// exponentiation so large `t` does not overflow.
pub fn e_kernel(x: f64, t: f64, lambda: f64, mu: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    if !(mu > 0.0) {
        return Err(Error::param("mu", format!("must be positive, got {mu}")));
    }
    let mt = mu * t;
    let d = x - lambda * t;
    let w = (d + mt) / mt.sqrt();
    let pre = 0.5 * (PI * mt).sqrt();
    Ok(if w >= 0.0 {
        pre * erfcx(w) * (-d * d / mt).exp()
    } else {
        pre * (2.0 * d + mt).exp() * erfc(w)
    })
}

/// `E` by adaptive quadrature, with breakpoints around the integrand's
/// peak so narrow Gaussians on the half-line are not missed. Reference
/// for the closed form.
pub fn e_kernel_quadrature(x: f64, t: f64, lambda: f64, mu: f64) -> Result<f64> {
    if !(t > 0.0 && mu > 0.0) {
        return Err(Error::param("t, mu", "must be positive"));
    }
    let f = |z: f64| (2.0 * z - (x - z - lambda * t).powi(2) / (mu * t)).exp();
    let peak = (x - lambda * t + mu * t).min(0.0);
    let s = (mu * t).sqrt();
    let mut pts: Vec<f64> = [f64::NEG_INFINITY, peak - 10.0 * s - 10.0, peak - 2.0 * s, peak, peak + 2.0 * s, 0.0]
        .into_iter()
        .filter(|&z| z <= 0.0)
        .collect();
    pts.dedup();
    Ok(integrate_breaks(f, &pts, QuadOptions::tol(0.0, 1e-13))?.value)
}

/// Which term of the two-term envelope dominates at a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeBranch {
    /// `(t+1)^{-1/2} e^{-(x - lambda t)^2 / (C0 t)}`
    Gaussian,
    /// `e^{-(|x| + t) / C0}`
    Exponential,
}

fn envelope_terms(x: f64, t: f64, lambda: f64, c0: f64) -> (f64, f64) {
    let d = x - lambda * t;
    (
        (t + 1.0).powf(-0.5) * (-d * d / (c0 * t)).exp(),
        (-(x.abs() + t) / c0).exp(),
    )
}

pub fn envelope_branch(x: f64, t: f64, lambda: f64, c0: f64) -> EnvelopeBranch {
    let (g, e) = envelope_terms(x, t, lambda, c0);
    if g >= e {
        EnvelopeBranch::Gaussian
    } else {
        EnvelopeBranch::Exponential
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeFit {
    /// Supremum of `t^{-1/2} E / envelope` over the samples.
    pub constant: f64,
    pub at: (f64, f64),
    pub branch: EnvelopeBranch,
}

/// Supremum over `(x, t)` samples of `t^{-1/2} E(x,t) / [(t+1)^{-1/2}
/// e^{-(x - lambda t)^2/(C0 t)} + e^{-(|x| + t)/C0}]`.
pub fn check_lemma_a1(samples: &[(f64, f64)], lambda: f64, mu: f64, c0: f64) -> Result<EnvelopeFit> {
    if samples.is_empty() {
        return Err(Error::Empty("envelope samples"));
    }
    if !(c0 > 0.0) {
        return Err(Error::param("c0", format!("must be positive, got {c0}")));
    }
    let mut best = EnvelopeFit {
        constant: f64::NEG_INFINITY,
        at: (f64::NAN, f64::NAN),
        branch: EnvelopeBranch::Gaussian,
    };
    for &(x, t) in samples {
        let e = e_kernel(x, t, lambda, mu)?;
        let (g, ex) = envelope_terms(x, t, lambda, c0);
        let ratio = e / t.sqrt() / (g + ex);
        if !ratio.is_finite() {
            return Err(Error::NonFinite {
                location: format!("envelope ratio at (x, t) = ({x}, {t})"),
            });
        }
        if ratio > best.constant {
            best = EnvelopeFit {
                constant: ratio,
                at: (x, t),
                branch: envelope_branch(x, t, lambda, c0),
            };
        }
    }
    Ok(best)
}

/// Tensor grid with `nx` points in `x` (uniform) and `nt` in `t` (geometric).
pub fn sample_grid(x_range: (f64, f64), t_range: (f64, f64), nx: usize, nt: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(nx * nt);
    for j in 0..nt {
        let s = if nt > 1 { j as f64 / (nt - 1) as f64 } else { 0.0 };
        let t = t_range.0 * (t_range.1 / t_range.0).powf(s);
        for i in 0..nx {
            let r = if nx > 1 { i as f64 / (nx - 1) as f64 } else { 0.0 };
            out.push((x_range.0 + r * (x_range.1 - x_range.0), t));
        }
    }
    out
}
