//! Discrete surrogate of the data size `delta` and the ratio
//! `sup |u_i - theta_i| / (delta Psi_i)` over run snapshots.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{diagonal_components, masses, simpson, CharSystem, TwoSidedField};
use crate::selfsim::DiffusionWave;
use crate::solver::Snapshot;

use super::weights::big_psi;

/// Fourth-order first derivative on uniform samples, one-sided at both ends.
pub fn derivative4(f: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = f.len();
    if n < 5 {
        return Err(Error::GridMismatch(format!("{n} samples, need at least 5")));
    }
    let s = 1.0 / (12.0 * h);
    let mut d = vec![0.0; n];
    d[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for j in 2..n - 2 {
        d[j] = s * (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]);
    }
    let m = n - 1;
    d[m] = -s * (-25.0 * f[m] + 48.0 * f[m - 1] - 36.0 * f[m - 2] + 16.0 * f[m - 3] - 3.0 * f[m - 4]);
    d[m - 1] = -s * (-3.0 * f[m] - 10.0 * f[m - 1] + 18.0 * f[m - 2] - 6.0 * f[m - 3] + f[m - 4]);
    Ok(d)
}

/// `||f||_{H^4(R*)}` with derivatives taken separately on each half-line.
pub fn h4_norm(f: &TwoSidedField) -> Result<f64> {
    let h = f.h;
    let mut sq = 0.0;
    for half in [&f.left, &f.right] {
        let mut g = half.clone();
        for k in 0..=4 {
            if k > 0 {
                g = derivative4(&g, h)?;
            }
            let g2: Vec<f64> = g.iter().map(|v| v * v).collect();
            sq += simpson(&g2, h);
        }
    }
    Ok(sq.sqrt())
}

/// Pieces of `delta`, indexed by zero-based branch where applicable.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSurrogate {
    /// `||tau_0||_4 + ||u_0||_4`.
    pub epsilon: f64,
    /// `||u_0i^-||_{L^1(-inf, 0)}`.
    pub l1_minus: [f64; 2],
    /// `||u_0i^+||_{L^1(0, inf)}`.
    pub l1_plus: [f64; 2],
    /// `sup (|x| + 1)^{3/2} |u_0i|`.
    pub sup_weighted: [f64; 2],
    /// `sup_{x > 0} (x + 1)(|u_0i^-(-x)| + |u_0i^+(x)|)`.
    pub sup_tails: [f64; 2],
    pub delta: f64,
}

/// Cumulative trapezoid integral from the far end inward: `out[j] = int_{x_j}^{far} f`.
fn tail_integral(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    for j in (0..n - 1).rev() {
        out[j] = out[j + 1] + 0.5 * h * (f[j] + f[j + 1]);
    }
    out
}

/// Evaluates the data-size functional on node samples of the initial data.
pub fn delta_surrogate(tau0: &TwoSidedField, u0: &TwoSidedField, cs: &CharSystem) -> Result<DeltaSurrogate> {
    tau0.check_finite("tau0")?;
    u0.check_finite("u0")?;
    let epsilon = h4_norm(tau0)? + h4_norm(u0)?;
    let (u1, u2) = diagonal_components(tau0, u0, cs)?;
    let h = tau0.h;
    let mut out = DeltaSurrogate {
        epsilon,
        l1_minus: [0.0; 2],
        l1_plus: [0.0; 2],
        sup_weighted: [0.0; 2],
        sup_tails: [0.0; 2],
        delta: 0.0,
    };
    for (i, ui) in [u1, u2].iter().enumerate() {
        // u^-(-x_j) = int_{-inf}^{-x_j}, accumulated outward-in on the left half
        let minus = tail_integral(&ui.left, h);
        let plus = tail_integral(&ui.right, h);
        out.l1_minus[i] = simpson(&minus.iter().map(|v| v.abs()).collect::<Vec<_>>(), h);
        out.l1_plus[i] = simpson(&plus.iter().map(|v| v.abs()).collect::<Vec<_>>(), h);
        out.sup_weighted[i] = ui
            .iter()
            .map(|(_, x, v)| (x.abs() + 1.0).powf(1.5) * v.abs())
            .fold(0.0, f64::max);
        out.sup_tails[i] = (0..minus.len())
            .map(|j| (j as f64 * h + 1.0) * (minus[j].abs() + plus[j].abs()))
            .fold(0.0, f64::max);
    }
    out.delta = epsilon
        + (0..2)
            .map(|i| out.l1_minus[i] + out.l1_plus[i] + out.sup_weighted[i] + out.sup_tails[i])
            .sum::<f64>();
    Ok(out)
}

/// Supremum of `|u_i - theta_i| / (delta Psi_i)` over snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRatio {
    pub constant: f64,
    pub delta: f64,
    /// `(x, t, zero-based branch)` of the supremum.
    pub location: (f64, f64, usize),
    /// Per-snapshot supremum, `(t, ratio)`.
    pub per_snapshot: Vec<(f64, f64)>,
}

/// The diffusion waves of a run, built from the masses of its first snapshot.
pub fn waves_for(initial: &Snapshot, v0: f64, cs: &CharSystem) -> Result<[DiffusionWave; 2]> {
    let m = masses(&initial.tau, &initial.u, v0, cs)?;
    Ok([
        DiffusionWave::from_masses(cs, &m, 0)?,
        DiffusionWave::from_masses(cs, &m, 1)?,
    ])
}

/// Ratio of the remainder `v_i = u_i - theta_i` to `delta Psi_i` over all
/// snapshots with `t > 0`.
pub fn bound_ratio(snapshots: &[Snapshot], waves: &[DiffusionWave; 2], delta: f64, cs: &CharSystem) -> Result<BoundRatio> {
    let first = snapshots.first().ok_or(Error::Empty("snapshots"))?;
    for s in snapshots {
        s.tau.check_same_grid(&first.tau)?;
        s.u.check_same_grid(&first.tau)?;
    }
    let zero_data = snapshots.iter().all(|s| s.tau.sup_abs() == 0.0 && s.u.sup_abs() == 0.0);
    if delta == 0.0 {
        if zero_data && waves.iter().all(|w| w.mass == 0.0) {
            return Ok(BoundRatio {
                constant: 0.0,
                delta,
                location: (0.0, 0.0, 0),
                per_snapshot: snapshots.iter().filter(|s| s.t > 0.0).map(|s| (s.t, 0.0)).collect(),
            });
        }
        return Err(Error::param("delta", "zero with nonzero data"));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::param("delta", format!("must be positive, got {delta}")));
    }
    let per: Vec<(f64, f64, (f64, f64, usize))> = snapshots
        .par_iter()
        .filter(|s| s.t > 0.0)
        .map(|s| -> Result<(f64, f64, (f64, f64, usize))> {
            let (u1, u2) = diagonal_components(&s.tau, &s.u, cs)?;
            let mut best = (0.0, (0.0, s.t, 0));
            for (i, ui) in [u1, u2].iter().enumerate() {
                for (_, x, v) in ui.iter() {
                    let r = (v - waves[i].theta(x, s.t)?).abs() / (delta * big_psi(i, x, s.t, cs));
                    if r > best.0 {
                        best = (r, (x, s.t, i));
                    }
                }
            }
            Ok((s.t, best.0, best.1))
        })
        .collect::<Result<_>>()?;
    let (constant, location) = per
        .iter()
        .fold((0.0, (0.0, 0.0, 0)), |acc, p| if p.1 > acc.0 { (p.1, p.2) } else { acc });
    Ok(BoundRatio {
        constant,
        delta,
        location,
        per_snapshot: per.iter().map(|p| (p.0, p.1)).collect(),
    })
}
