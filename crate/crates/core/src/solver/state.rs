use crate::error::{Error, Result};
use crate::model::{Side, TwoSidedField};

use super::grid::GridSpec;
use super::initial::InitialData;

/// Discrete state on the staggered grid: `tau` at cell centres
/// `±(k + 1/2) h`, `u` at nodes `±j h` with the interface node shared by
/// both sides and equal to `V`.
///
/// Each half-line is stored in mirrored coordinates `ξ = |x|`, with the
/// left velocity sign-flipped, so one code path advances both sides and the
/// scheme is exactly mirror-symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct FluidState {
    pub t: f64,
    pub h: f64,
    /// `[left, right]` cell values, `N` each.
    pub(crate) tau: [Vec<f64>; 2],
    /// `[left, right]` mirrored node velocities, `N + 1` each; `w[s][N] = 0`.
    pub(crate) w: [Vec<f64>; 2],
    pub v: f64,
    /// Particle displacement `h(t)`.
    pub h_disp: f64,
}

pub(crate) fn idx(side: Side) -> usize {
    (side == Side::Right) as usize
}

impl FluidState {
    pub fn zero(grid: &GridSpec) -> Self {
        let n = grid.n;
        Self {
            t: 0.0,
            h: grid.h(),
            tau: [vec![0.0; n], vec![0.0; n]],
            w: [vec![0.0; n + 1], vec![0.0; n + 1]],
            v: 0.0,
            h_disp: 0.0,
        }
    }

    pub fn from_initial(data: &InitialData, grid: &GridSpec, h0: f64) -> Result<Self> {
        let mut s = Self::zero(grid);
        let h = s.h;
        let n = grid.n;
        for side in Side::BOTH {
            let sg = side.sign();
            let i = idx(side);
            for k in 0..n {
                s.tau[i][k] = data.tau0(side, sg * (k as f64 + 0.5) * h);
            }
            for j in 1..n {
                s.w[i][j] = sg * data.u0(side, sg * j as f64 * h);
            }
            s.w[i][0] = sg * data.v0;
            s.w[i][n] = 0.0;
        }
        s.v = data.v0;
        s.h_disp = h0;
        s.check_positive()?;
        for i in 0..2 {
            if s.tau[i].iter().chain(&s.w[i]).any(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    location: "initial data".into(),
                });
            }
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.tau[1].len()
    }

    /// `tau` in cell `k` (centre `±(k + 1/2) h`).
    pub fn tau_cell(&self, side: Side, k: usize) -> f64 {
        self.tau[idx(side)][k]
    }

    /// Physical velocity at node `±j h`; `j = 0` gives `V`.
    pub fn u_node(&self, side: Side, j: usize) -> f64 {
        side.sign() * self.w[idx(side)][j]
    }

    pub fn cells(&self, side: Side) -> &[f64] {
        &self.tau[idx(side)]
    }

    pub fn check_positive(&self) -> Result<()> {
        for side in Side::BOTH {
            for (k, &tau) in self.tau[idx(side)].iter().enumerate() {
                if !(1.0 + tau > 0.0) {
                    return Err(Error::PositivityLost {
                        side: if side == Side::Left { "left" } else { "right" },
                        cell: k,
                        t: self.t,
                        tau,
                    });
                }
            }
        }
        Ok(())
    }

    /// `max |u|` over all nodes.
    pub fn u_inf(&self) -> f64 {
        self.w[0].iter().chain(&self.w[1]).fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `tau` at the nodes: averages of neighbouring cells, linear
    /// extrapolation at the interface and the far boundary.
    fn tau_nodes(&self, side: Side) -> Vec<f64> {
        let c = &self.tau[idx(side)];
        let n = c.len();
        let mut out = Vec::with_capacity(n + 1);
        out.push(1.5 * c[0] - 0.5 * c[1]);
        for j in 1..n {
            out.push(0.5 * (c[j - 1] + c[j]));
        }
        out.push(1.5 * c[n - 1] - 0.5 * c[n - 2]);
        out
    }

    /// `(tau, u)` sampled at the nodes `±j h`.
    pub fn node_fields(&self) -> (TwoSidedField, TwoSidedField) {
        let tau = TwoSidedField {
            h: self.h,
            left: self.tau_nodes(Side::Left),
            right: self.tau_nodes(Side::Right),
        };
        let u = TwoSidedField {
            h: self.h,
            left: self.w[0].iter().map(|v| -v).collect(),
            right: self.w[1].clone(),
        };
        (tau, u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{eigensystem, PressureLaw};
    use crate::solver::initial::InitialFamily;

    #[test]
    fn sampling_places_values_on_the_staggered_grid() {
        let law = PressureLaw::gamma(1.4).unwrap();
        let cs = eigensystem(&law, 1.0).unwrap();
        let grid = GridSpec::new(20.0, 200, 1.0, &cs);
        let fam = InitialFamily::GaussianBump {
            amplitude: 0.01,
            center: 3.0,
            width: 1.0,
            velocity: 0.002,
        };
        let data = InitialData::new(fam, 0.0, 1.0, 1.0, &law, 1.0).unwrap();
        let s = FluidState::from_initial(&data, &grid, 0.0).unwrap();
        assert!((s.tau_cell(Side::Right, 29) - data.tau0(Side::Right, 2.95)).abs() < 1e-16);
        assert!((s.u_node(Side::Right, 30) - data.u0(Side::Right, 3.0)).abs() < 1e-16);
        assert_eq!(s.u_node(Side::Left, 0), 0.0);
        let (tau, u) = s.node_fields();
        assert_eq!(tau.n(), 200);
        assert!((u.right[30] - 0.002 / 0.01 * 0.01).abs() < 1e-12);
    }
}
