//! The modified fundamental solution with equal diffusion `nu/2` in both
//! components, in closed form.

use std::f64::consts::PI;

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::model::CharSystem;

/// Two travelling Gaussians with matrices `[[1, -1/c], [-c, 1]]` (speed `c`)
/// and `[[1, 1/c], [c, 1]]` (speed `-c`).
pub fn g_star(x: f64, t: f64, cs: &CharSystem) -> Result<Matrix2<f64>> {
    if !(t > 0.0) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    let c = cs.c;
    let pre = 1.0 / (2.0 * (2.0 * PI * cs.nu * t).sqrt());
    let gp = pre * (-(x - c * t).powi(2) / (2.0 * cs.nu * t)).exp();
    let gm = pre * (-(x + c * t).powi(2) / (2.0 * cs.nu * t)).exp();
    Ok(Matrix2::new(1.0, -1.0 / c, -c, 1.0) * gp + Matrix2::new(1.0, 1.0 / c, c, 1.0) * gm)
}

/// `x`-derivative of [`g_star`].
pub fn g_star_dx(x: f64, t: f64, cs: &CharSystem) -> Result<Matrix2<f64>> {
    if !(t > 0.0) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    let c = cs.c;
    let v = cs.nu * t;
    let pre = 1.0 / (2.0 * (2.0 * PI * v).sqrt());
    let gp = -pre * (x - c * t) / v * (-(x - c * t).powi(2) / (2.0 * v)).exp();
    let gm = -pre * (x + c * t) / v * (-(x + c * t).powi(2) / (2.0 * v)).exp();
    Ok(Matrix2::new(1.0, -1.0 / c, -c, 1.0) * gp + Matrix2::new(1.0, 1.0 / c, c, 1.0) * gm)
}
