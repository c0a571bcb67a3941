//! Fitted constants for the pointwise kernel envelopes: `G - G*` away from
//! the interface, and `d_x^k G_T`, `G_R` on both half-lines.

use rayon::prelude::*;

use super::{g_star, g_star_dx, GreenTable, TableOptions, Transmission};
use crate::error::{Error, Result};
use crate::model::CharSystem;

/// Samples with a smaller envelope sit below the table's absolute accuracy
/// and are skipped.
pub const ENVELOPE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `d_x^l (G - G*)` off `x = 0`, `l <= 1`.
    GMinusGstar { l: u32 },
    /// `d_x^k G_T`, `k <= 1`.
    Transmitted { k: u32 },
    /// `G_R` against the `k = 1` transmission envelope.
    Reflected,
}

/// Sup of `|K| / envelope` over a sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundFit {
    pub kind: BoundKind,
    /// The constant inside the exponentials, held fixed while fitting.
    pub c_exp: f64,
    pub constant: f64,
    pub argmax: (f64, f64),
    pub samples: usize,
}

fn gauss_pair(x: f64, t: f64, c: f64, c_exp: f64) -> f64 {
    (-(x - c * t).powi(2) / (c_exp * t)).exp() + (-(x + c * t).powi(2) / (c_exp * t)).exp()
}

/// Envelope value for `kind` at `(x, t)`.
pub fn envelope(kind: BoundKind, x: f64, t: f64, c: f64, c_exp: f64) -> f64 {
    let g = gauss_pair(x, t, c, c_exp);
    let tail = (-(x.abs() + t) / c_exp).exp();
    match kind {
        BoundKind::GMinusGstar { l } => (t + 1.0).powf(-0.5) * t.powf(-(l as f64 + 1.0) / 2.0) * g,
        BoundKind::Transmitted { k } => (t + 1.0).powf(-0.5) * t.powf(-(k as f64) / 2.0) * g + tail,
        BoundKind::Reflected => (t + 1.0).powf(-0.5) * t.powf(-0.5) * g + tail,
    }
}

fn kernel_size(kind: BoundKind, x: f64, tab: &GreenTable, cs: &CharSystem) -> Result<f64> {
    let m = match kind {
        BoundKind::GMinusGstar { l: 0 } => tab.g_smooth(x)? - g_star(x, tab.t, cs)?,
        BoundKind::GMinusGstar { l: 1 } => tab.g_smooth_dx(x)? - g_star_dx(x, tab.t, cs)?,
        BoundKind::Transmitted { k: 0 } => tab.g_transmitted(x)?,
        BoundKind::Transmitted { k: 1 } => tab.g_transmitted_dx(x)?,
        BoundKind::Reflected => tab.g_reflected(x)?,
        _ => return Err(Error::param("order", "only orders 0 and 1 are tabulated")),
    };
    Ok(m.abs().max())
}

/// Fits the envelope constant over the tensor grid `xs x ts`; `refine`
/// halves the table spacing that many times.
pub fn fit_bound(
    kind: BoundKind,
    cs: &CharSystem,
    tr: Transmission,
    xs: &[f64],
    ts: &[f64],
    c_exp: f64,
    refine: u32,
) -> Result<BoundFit> {
    if xs.is_empty() || ts.is_empty() {
        return Err(Error::Empty("bound sample grid"));
    }
    if !(c_exp > 0.0) {
        return Err(Error::param("c_exp", "must be positive"));
    }
    let per_t: Vec<Result<(f64, (f64, f64), usize)>> = ts
        .par_iter()
        .map(|&t| {
            let base = GreenTable::new(t, cs, tr)?;
            let tab = if refine == 0 {
                base
            } else {
                let opts = TableOptions {
                    dx_max: Some(base.dx() / f64::powi(2.0, refine as i32)),
                    ..TableOptions::default()
                };
                GreenTable::with_options(t, cs, tr, opts)?
            };
            let mut best = (0.0, (f64::NAN, t), 0);
            for &x in xs.iter().filter(|x| **x != 0.0) {
                let env = envelope(kind, x, t, cs.c, c_exp);
                if env < ENVELOPE_FLOOR {
                    continue;
                }
                let r = kernel_size(kind, x, &tab, cs)? / env;
                best.2 += 1;
                if r > best.0 {
                    best.0 = r;
                    best.1 = (x, t);
                }
            }
            Ok(best)
        })
        .collect();
    let mut fit = BoundFit {
        kind,
        c_exp,
        constant: 0.0,
        argmax: (f64::NAN, f64::NAN),
        samples: 0,
    };
    for r in per_t {
        let (v, at, n) = r?;
        fit.samples += n;
        if v > fit.constant {
            fit.constant = v;
            fit.argmax = at;
        }
    }
    Ok(fit)
}

/// Base fit and the fit with doubled sample density and a refined table.
pub fn bound_stability(
    kind: BoundKind,
    cs: &CharSystem,
    tr: Transmission,
    x_range: (f64, f64),
    t_range: (f64, f64),
    n: (usize, usize),
    c_exp: f64,
) -> Result<(BoundFit, BoundFit)> {
    let grid = |nx: usize, nt: usize| {
        let xs: Vec<f64> = (0..nx)
            .map(|k| x_range.0 + (x_range.1 - x_range.0) * (k as f64 + 0.5) / nx as f64)
            .collect();
        let ts: Vec<f64> = (0..nt)
            .map(|k| t_range.0 * (t_range.1 / t_range.0).powf(k as f64 / (nt.max(2) - 1) as f64))
            .collect();
        (xs, ts)
    };
    let (xs, ts) = grid(n.0, n.1);
    let base = fit_bound(kind, cs, tr, &xs, &ts, c_exp, 0)?;
    let (xs, ts) = grid(2 * n.0, 2 * n.1 - 1);
    let fine = fit_bound(kind, cs, tr, &xs, &ts, c_exp, 1)?;
    Ok((base, fine))
}
