//! Fixed-Talbot numerical Laplace inversion and the Laplace-domain kernels.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;

use super::{mirror, Transmission};
use crate::error::{Error, Result};
use crate::model::CharSystem;

/// Contour settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TalbotOptions {
    pub nodes: usize,
    /// Move the contour's real-axis crossing to just right of the rightmost
    /// singularity. Keeps relative accuracy for exponentially small values.
    pub shifted: bool,
}

impl Default for TalbotOptions {
    fn default() -> Self {
        Self {
            nodes: 48,
            shifted: false,
        }
    }
}

impl TalbotOptions {
    pub fn shifted(nodes: usize) -> Self {
        Self {
            nodes,
            shifted: true,
        }
    }
}

/// Inverts `K` transforms at once along
/// `s(theta) = sigma + r theta (cot theta + i)`, `r = 2N / (5t)`.
/// `rightmost` is the largest real part of any singularity of `f`.
pub fn talbot<const K: usize>(
    f: impl Fn(Complex64) -> [Complex64; K],
    t: f64,
    rightmost: f64,
    opts: TalbotOptions,
) -> Result<[f64; K]> {
    if !(t > 0.0) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    if opts.nodes < 2 {
        return Err(Error::param("nodes", "need at least 2 contour nodes"));
    }
    let n = opts.nodes;
    let r = 2.0 * n as f64 / (5.0 * t);
    let sigma = if opts.shifted {
        let crossing = r.min(rightmost + 12.0 / t);
        crossing - r
    } else {
        0.0
    };
    if sigma + r <= rightmost {
        return Err(Error::AccuracyUnreachable(format!(
            "contour crossing {} does not clear the singularity at {rightmost}",
            sigma + r
        )));
    }
    let mut acc = [0.0; K];
    let s0 = Complex64::new(sigma + r, 0.0);
    let f0 = f(s0);
    let w0 = 0.5 * ((sigma + r) * t).exp();
    for q in 0..K {
        acc[q] = w0 * f0[q].re;
    }
    for k in 1..n {
        let th = k as f64 * PI / n as f64;
        let cot = 1.0 / th.tan();
        let s = Complex64::new(sigma + r * th * cot, r * th);
        let sg = th + (th * cot - 1.0) * cot;
        let w = (s * t).exp() * Complex64::new(1.0, sg);
        let fv = f(s);
        for q in 0..K {
            acc[q] += (w * fv[q]).re;
        }
    }
    let scale = r / n as f64;
    for a in acc.iter_mut() {
        *a *= scale;
    }
    Ok(acc)
}

/// Laplace transform in `t` of the smooth part of `G(x, .)` at `x != 0`,
/// with `q = sqrt(nu s + c^2)`, `lambda = s/q`.
pub fn laplace_g_smooth(x: f64, s: Complex64, c: f64, nu: f64) -> ([Complex64; 4], Complex64) {
    let q = (s * nu + c * c).sqrt();
    let lam = s / q;
    let e = (-lam * x.abs()).exp();
    let q2 = q * q;
    let sg = x.signum();
    (
        [
            e * (c * c) / (q2 * q * 2.0),
            -e * (sg / 2.0) / q2,
            -e * (c * c * sg / 2.0) / q2,
            e / (q * 2.0),
        ],
        lam,
    )
}

fn branch_point(cs: &CharSystem) -> f64 {
    -cs.c * cs.c / cs.nu
}

/// Real pole of `kappa / (lambda(s) + kappa)`.
pub fn transmission_pole(cs: &CharSystem, tr: Transmission) -> f64 {
    let k = tr.kappa();
    let nu = cs.nu;
    0.5 * (k * k * nu - (k.powi(4) * nu * nu + 4.0 * k * k * cs.c * cs.c).sqrt())
}

fn to_mat(v: [f64; 4]) -> Matrix2<f64> {
    Matrix2::new(v[0], v[1], v[2], v[3])
}

fn check_x(x: f64) -> Result<()> {
    if x == 0.0 {
        return Err(Error::InterfaceEvaluation);
    }
    Ok(())
}

/// Smooth part of `G(x, t)` by Laplace inversion.
pub fn talbot_g_smooth(x: f64, t: f64, cs: &CharSystem, opts: TalbotOptions) -> Result<Matrix2<f64>> {
    check_x(x)?;
    let v = talbot(|s| laplace_g_smooth(x, s, cs.c, cs.nu).0, t, branch_point(cs), opts)?;
    Ok(to_mat(v))
}

/// Which transmission-family kernel to invert.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Factor {
    Transmitted,
    TransmittedDx,
    Reflected,
}

fn invert_family(
    x: f64,
    t: f64,
    cs: &CharSystem,
    tr: Transmission,
    opts: TalbotOptions,
    which: Factor,
) -> Result<Matrix2<f64>> {
    check_x(x)?;
    let k = tr.kappa();
    let xa = x.abs();
    let rightmost = transmission_pole(cs, tr).max(branch_point(cs));
    let v = talbot(
        |s| {
            let (g, lam) = laplace_g_smooth(xa, s, cs.c, cs.nu);
            let fac = match which {
                Factor::Transmitted => k / (lam + k),
                Factor::TransmittedDx => -lam * k / (lam + k),
                // (G - G_T) before the right factor S
                Factor::Reflected => lam / (lam + k),
            };
            g.map(|z| z * fac)
        },
        t,
        rightmost,
        opts,
    )?;
    let m = to_mat(v);
    Ok(match which {
        Factor::Transmitted => {
            if x > 0.0 {
                m
            } else {
                mirror(&m)
            }
        }
        Factor::TransmittedDx => {
            if x > 0.0 {
                m
            } else {
                -mirror(&m)
            }
        }
        Factor::Reflected => {
            let m = if x > 0.0 { m } else { mirror(&m) };
            m * super::s_matrix()
        }
    })
}

/// `G_T(x, t)` by Laplace inversion of `kappa / (lambda + kappa) G~`.
pub fn talbot_g_transmitted(
    x: f64,
    t: f64,
    cs: &CharSystem,
    tr: Transmission,
    opts: TalbotOptions,
) -> Result<Matrix2<f64>> {
    invert_family(x, t, cs, tr, opts, Factor::Transmitted)
}

/// `d_x G_T(x, t)` by Laplace inversion.
pub fn talbot_g_transmitted_dx(
    x: f64,
    t: f64,
    cs: &CharSystem,
    tr: Transmission,
    opts: TalbotOptions,
) -> Result<Matrix2<f64>> {
    invert_family(x, t, cs, tr, opts, Factor::TransmittedDx)
}

/// `G_R(x, t)` by inverting `lambda / (lambda + kappa) G~` directly, which
/// avoids the cancellation in `G - G_T`.
pub fn talbot_g_reflected(
    x: f64,
    t: f64,
    cs: &CharSystem,
    tr: Transmission,
    opts: TalbotOptions,
) -> Result<Matrix2<f64>> {
    invert_family(x, t, cs, tr, opts, Factor::Reflected)
}
