//! Map between the Lagrangian mass coordinate and Eulerian position.

use crate::error::{Error, Result};
use crate::model::Side;

use super::state::FluidState;

/// Samples on one side of the particle, ordered away from it; index 0 is
/// the one-sided limit at the particle.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerianHalf {
    /// Mass coordinate `|x|`.
    pub mass_coord: Vec<f64>,
    /// Eulerian position `X`.
    pub position: Vec<f64>,
    pub rho: Vec<f64>,
    pub velocity: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerianProfile {
    /// Particle position `h(t)`.
    pub particle: f64,
    pub left: EulerianHalf,
    pub right: EulerianHalf,
}

impl EulerianProfile {
    pub fn half(&self, side: Side) -> &EulerianHalf {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

/// `X(x) = h(t) ± int_0^{|x|} (1 + tau)`, exact for the cell-wise constant
/// specific volume; `rho = 1 / (1 + tau)` at the nodes.
pub fn lagrangian_to_eulerian(state: &FluidState) -> Result<EulerianProfile> {
    state.check_positive()?;
    let (tau_nodes, _) = state.node_fields();
    let h = state.h;
    let n = state.n();
    let half = |side: Side| -> Result<EulerianHalf> {
        let sg = side.sign();
        let cells = state.cells(side);
        let nodes = tau_nodes.half(side);
        let mut position = Vec::with_capacity(n + 1);
        let mut x = state.h_disp;
        position.push(x);
        for &t in cells {
            x += sg * h * (1.0 + t);
            position.push(x);
        }
        let mut rho = Vec::with_capacity(n + 1);
        for &t in nodes {
            if !(1.0 + t > 0.0) {
                return Err(Error::NonFinite {
                    location: "extrapolated node specific volume".into(),
                });
            }
            rho.push(1.0 / (1.0 + t));
        }
        Ok(EulerianHalf {
            mass_coord: (0..=n).map(|j| j as f64 * h).collect(),
            position,
            rho,
            velocity: (0..=n).map(|j| state.u_node(side, j)).collect(),
        })
    };
    Ok(EulerianProfile {
        particle: state.h_disp,
        left: half(Side::Left)?,
        right: half(Side::Right)?,
    })
}

/// Mass coordinate `|int_h^X rho|` at each sample by the trapezoid rule, and
/// `tau = 1 / rho - 1`.
pub fn eulerian_to_lagrangian(half: &EulerianHalf, particle: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if half.position.len() != half.rho.len() || half.position.is_empty() {
        return Err(Error::GridMismatch("position and density lengths differ".into()));
    }
    if half.rho.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::param("rho", "density must be positive"));
    }
    if (half.position[0] - particle).abs() > 1e-12 * (1.0 + particle.abs()) {
        return Err(Error::param("position", "first sample must sit at the particle"));
    }
    let mut x = Vec::with_capacity(half.rho.len());
    let mut acc = 0.0;
    x.push(0.0);
    for k in 1..half.rho.len() {
        let dx = (half.position[k] - half.position[k - 1]).abs();
        acc += 0.5 * dx * (half.rho[k] + half.rho[k - 1]);
        x.push(acc);
    }
    let tau = half.rho.iter().map(|r| 1.0 / r - 1.0).collect();
    Ok((x, tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{eigensystem, PressureLaw};
    use crate::solver::grid::GridSpec;

    fn state_with(tau: impl Fn(f64) -> f64, n: usize, l: f64, h0: f64) -> FluidState {
        let cs = eigensystem(&PressureLaw::gamma(1.4).unwrap(), 1.0).unwrap();
        let grid = GridSpec::new(l, n, 1.0, &cs);
        let mut s = FluidState::zero(&grid);
        let h = s.h;
        for (i, sg) in [(0, -1.0), (1, 1.0)] {
            for k in 0..n {
                s.tau[i][k] = tau(sg * (k as f64 + 0.5) * h);
            }
        }
        s.h_disp = h0;
        s
    }

    #[test]
    fn identity_for_zero_perturbation() {
        let s = state_with(|_| 0.0, 50, 5.0, 0.25);
        let e = lagrangian_to_eulerian(&s).unwrap();
        for (j, x) in e.right.position.iter().enumerate() {
            assert!((x - (0.25 + j as f64 * 0.1)).abs() < 1e-13);
        }
        assert!(e.left.rho.iter().all(|r| *r == 1.0));
        assert!((e.left.position[50] - (0.25 - 5.0)).abs() < 1e-12);
    }

    #[test]
    fn constant_perturbation_stretches_linearly() {
        let s = state_with(|_| 0.1, 40, 4.0, 0.0);
        let e = lagrangian_to_eulerian(&s).unwrap();
        for (j, x) in e.right.position.iter().enumerate() {
            assert!((x - 1.1 * j as f64 * 0.1).abs() < 1e-13);
        }
    }

    #[test]
    fn round_trip_converges_at_second_order() {
        let f = |x: f64| 0.05 * (-(x - 1.0).powi(2)).exp() + 0.02 * (0.7 * x).sin() * (-(x * x) / 8.0).exp();
        let err = |n: usize| {
            let s = state_with(f, n, 6.0, 0.3);
            let e = lagrangian_to_eulerian(&s).unwrap();
            let mut worst = 0.0_f64;
            for side in Side::BOTH {
                let half = e.half(side);
                let (x, _) = eulerian_to_lagrangian(half, e.particle).unwrap();
                for (a, b) in x.iter().zip(&half.mass_coord) {
                    worst = worst.max((a - b).abs());
                }
            }
            worst
        };
        let (e1, e2) = (err(60), err(120));
        let order = (e1 / e2).log2();
        assert!((1.7..=2.3).contains(&order), "order {order} ({e1}, {e2})");
    }
}
