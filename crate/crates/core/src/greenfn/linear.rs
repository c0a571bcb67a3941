//! Green's representation of the linearized interface problem: the
//! initial-data terms only (direct, reflected, transmitted, particle).

use rayon::prelude::*;

use super::{q0, GreenTable, Transmission, SMALL_T};
use crate::error::{Error, Result};
use crate::model::CharSystem;

/// Gauss-Legendre rule on `[0, 1]`.
const GL5: [(f64, f64); 5] = [
    (0.046_910_077_030_668_004, 0.118_463_442_528_094_54),
    (0.230_765_344_947_158_45, 0.239_314_335_249_683_23),
    (0.5, 0.284_444_444_444_444_44),
    (0.769_234_655_052_841_6, 0.239_314_335_249_683_23),
    (0.953_089_922_969_332, 0.118_463_442_528_094_54),
];

/// Initial data given as functions on `x != 0`, vanishing for `|x| > support`.
pub struct LinearInit<'a> {
    pub tau0: &'a (dyn Fn(f64) -> f64 + Sync),
    pub u0: &'a (dyn Fn(f64) -> f64 + Sync),
    pub v0: f64,
    pub support: f64,
}

/// Composite GL5 of `f` over `[a, b]` with panels no wider than `h`.
fn gl_panels(f: &dyn Fn(f64) -> Result<[f64; 2]>, a: f64, b: f64, h: f64) -> Result<[f64; 2]> {
    if b <= a {
        return Ok([0.0; 2]);
    }
    let n = ((b - a) / h).ceil().max(1.0) as usize;
    let w = (b - a) / n as f64;
    let mut s = [0.0; 2];
    for k in 0..n {
        let x0 = a + k as f64 * w;
        for &(u, wt) in &GL5 {
            let v = f(x0 + u * w)?;
            s[0] += wt * w * v[0];
            s[1] += wt * w * v[1];
        }
    }
    Ok(s)
}

/// Solution at `x > 0` for data `(tau0, u0, v0)`.
fn solve_right(
    tau0: &dyn Fn(f64) -> f64,
    u0: &dyn Fn(f64) -> f64,
    v0: f64,
    support: f64,
    x: f64,
    tab: &GreenTable,
) -> Result<[f64; 2]> {
    let h = tab.dx();
    let apply = |m: nalgebra::Matrix2<f64>, y: f64| {
        let (a, b) = (tau0(y), u0(y));
        [m[(0, 0)] * a + m[(0, 1)] * b, m[(1, 0)] * a + m[(1, 1)] * b]
    };
    let direct = |y: f64| -> Result<[f64; 2]> {
        if y == x {
            return Ok([0.0; 2]);
        }
        Ok(apply(tab.g_smooth(x - y)?, y))
    };
    let reflected = |y: f64| -> Result<[f64; 2]> { Ok(apply(tab.g_reflected(x + y)?, y)) };
    let transmitted = |y: f64| -> Result<[f64; 2]> { Ok(apply(tab.g_transmitted(x - y)?, y)) };

    let mut out = [0.0; 2];
    let mut add = |v: [f64; 2]| {
        out[0] += v[0];
        out[1] += v[1];
    };
    let xs = x.min(support);
    add(gl_panels(&direct, 0.0, xs, h)?);
    add(gl_panels(&direct, xs, support, h)?);
    let sing = tab.singular_weight() * q0();
    if x < support {
        add(apply(sing, x));
    }
    add(gl_panels(&reflected, 0.0, support, h)?);
    add(gl_panels(&transmitted, -support, 0.0, h)?);
    let gt = tab.g_transmitted(x)?;
    add([gt[(0, 1)] * v0, gt[(1, 1)] * v0]);
    Ok(out)
}

/// `(tau, u)(x, t)` of the linearized problem for a particle of mass
/// `tr.particle_mass()`, evaluated at each `x` in `xs` (all nonzero).
pub fn linear_green_solution_with(
    init: &LinearInit<'_>,
    xs: &[f64],
    tab: &GreenTable,
) -> Result<Vec<(f64, f64)>> {
    if tab.t < SMALL_T {
        return Err(Error::AccuracyUnreachable(format!(
            "linear representation needs t >= {SMALL_T}, got {}",
            tab.t
        )));
    }
    if !(init.support > 0.0 && init.support.is_finite()) {
        return Err(Error::param("support", "must be positive and finite"));
    }
    let (tau0, u0) = (init.tau0, init.u0);
    let tau_m = |y: f64| tau0(-y);
    let u_m = |y: f64| -u0(-y);
    xs.par_iter()
        .map(|&x| {
            if x == 0.0 {
                return Err(Error::InterfaceEvaluation);
            }
            if x > 0.0 {
                let r = solve_right(tau0, u0, init.v0, init.support, x, tab)?;
                Ok((r[0], r[1]))
            } else {
                let r = solve_right(&tau_m, &u_m, -init.v0, init.support, -x, tab)?;
                Ok((r[0], -r[1]))
            }
        })
        .collect()
}

/// Single-point form of [`linear_green_solution_with`] for a unit-mass particle.
pub fn linear_green_solution(init: &LinearInit<'_>, x: f64, t: f64, cs: &CharSystem) -> Result<(f64, f64)> {
    if x == 0.0 {
        return Err(Error::InterfaceEvaluation);
    }
    let tab = GreenTable::new(t, cs, Transmission::unit_mass())?;
    Ok(linear_green_solution_with(init, &[x], &tab)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{eigensystem, PressureLaw};

    fn cs() -> CharSystem {
        eigensystem(&PressureLaw::gamma(1.4).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn zero_data_gives_zero() {
        let z = |_: f64| 0.0;
        let init = LinearInit { tau0: &z, u0: &z, v0: 0.0, support: 5.0 };
        let (a, b) = linear_green_solution(&init, 1.0, 1.0, &cs()).unwrap();
        assert_eq!((a, b), (0.0, 0.0));
    }

    #[test]
    fn symmetric_data_keeps_interface_at_rest() {
        let cs = cs();
        let bump = |y: f64| 0.01 * (-(y.abs() - 3.0).powi(2)).exp();
        let odd = |y: f64| 0.004 * y.signum() * (-(y.abs() - 2.0).powi(2)).exp();
        let init = LinearInit { tau0: &bump, u0: &odd, v0: 0.0, support: 12.0 };
        let tab = GreenTable::new(2.0, &cs, Transmission::unit_mass()).unwrap();
        let eps = 0.02;
        let r = linear_green_solution_with(&init, &[eps, -eps, eps / 2.0], &tab).unwrap();
        assert!((r[0].1 + r[1].1).abs() < 1e-15);
        // u is odd in x, so u(+0) = V = 0 shows as linear vanishing at the probes
        let extrapolated = 2.0 * r[2].1 - r[0].1;
        assert!(extrapolated.abs() < 1e-8, "{extrapolated} from {:?}", r);
    }

    #[test]
    fn interface_velocity_is_continuous() {
        let cs = cs();
        let bump = |y: f64| if y > 0.0 { 0.01 * (-(y - 3.0).powi(2)).exp() } else { 0.0 };
        let z = |_: f64| 0.0;
        let init = LinearInit { tau0: &bump, u0: &z, v0: 0.0, support: 12.0 };
        let tab = GreenTable::new(3.0, &cs, Transmission::unit_mass()).unwrap();
        let eps = 1e-3;
        let r = linear_green_solution_with(&init, &[eps, -eps], &tab).unwrap();
        assert!((r[0].1 - r[1].1).abs() < 2e-5 * 0.01 * 10.0, "{:?}", r);
        assert!(r[0].1.abs() > 1e-5);
    }

    #[test]
    fn mass_of_tau_is_conserved() {
        // int tau dx stays constant; the far field is still negligible at t = 2
        let cs = cs();
        let bump = |y: f64| if y > 0.0 { 0.01 * (-(y - 3.0).powi(2)).exp() } else { 0.0 };
        let z = |_: f64| 0.0;
        let init = LinearInit { tau0: &bump, u0: &z, v0: 0.0, support: 10.0 };
        let tab = GreenTable::new(2.0, &cs, Transmission::unit_mass()).unwrap();
        let h = 0.05;
        let xs: Vec<f64> = (0..600).map(|k| -15.0 + h * (k as f64 + 0.5)).collect();
        let r = linear_green_solution_with(&init, &xs, &tab).unwrap();
        let mass: f64 = r.iter().map(|p| p.0 * h).sum();
        let m0 = 0.01 * std::f64::consts::PI.sqrt();
        assert!((mass - m0).abs() < 1e-3 * m0, "{mass} vs {m0}");
    }
}
