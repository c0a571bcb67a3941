//! One implicit-midpoint step with a discrete-gradient pressure.
//!
//! With `ū = (u^n + u^{n+1}) / 2` and `D = (ū_{k+1} - ū_k) / h` per cell:
//! `tau^{n+1} = tau^n + dt D`, `sigma = -p̂(tau^n, tau^{n+1}) + nu D / (1 + τ̄)`,
//! `h (u^{n+1}_j - u^n_j) = dt (sigma_j - sigma_{j-1})` at nodes and
//! `(m + h)(V^{n+1} - V^n) = dt (sigma^R_0 - sigma^L_0)` at the particle.
//! `p̂` is the segment mean of `p(1 + .)`, so the discrete energy drops by
//! exactly the accumulated dissipation up to the Newton tolerance.

use crate::error::{Error, Result};
use crate::model::PressureLaw;

use super::state::FluidState;
use super::Mode;

const MAX_NEWTON: usize = 30;

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub dissipation: f64,
    pub newton_iterations: usize,
}

/// Advances states; owns scratch buffers.
#[derive(Debug, Clone)]
pub struct Stepper {
    law: PressureLaw,
    nu: f64,
    c2: f64,
    p1: f64,
    particle_mass: f64,
    mode: Mode,
    ub: [Vec<f64>; 2],
    prev: Option<[Vec<f64>; 2]>,
    prev_v: f64,
    sigma: [Vec<f64>; 2],
    g: [Vec<f64>; 2],
    res: [Vec<f64>; 2],
    y: [Vec<f64>; 2],
    z: [Vec<f64>; 2],
    cp: Vec<f64>,
}

impl Stepper {
    pub fn new(law: &PressureLaw, nu: f64, particle_mass: f64, mode: Mode, n: usize) -> Self {
        let v = || [vec![0.0; n + 1], vec![0.0; n + 1]];
        Self {
            law: law.clone(),
            nu,
            c2: -law.d1(),
            p1: law.p(1.0),
            particle_mass,
            mode,
            ub: v(),
            prev: None,
            prev_v: 0.0,
            sigma: v(),
            g: v(),
            res: v(),
            y: v(),
            z: v(),
            cp: vec![0.0; n + 1],
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Stress and its derivative in `D` for one cell.
    #[inline]
    fn cell(&self, a: f64, d: f64, dt: f64) -> Result<(f64, f64)> {
        match self.mode {
            Mode::Linear => {
                let tbar = a + 0.5 * dt * d;
                Ok((-self.p1 + self.c2 * tbar + self.nu * d, 0.5 * self.c2 * dt + self.nu))
            }
            Mode::Nonlinear => {
                let b = a + dt * d;
                let vbar = 1.0 + a + 0.5 * dt * d;
                if !(vbar > 0.0 && 1.0 + b > 0.0) {
                    return Err(Error::PositivityLost {
                        side: "trial",
                        cell: 0,
                        t: f64::NAN,
                        tau: b,
                    });
                }
                let s = -self.law.segment_mean(a, b) + self.nu * d / vbar;
                // Jacobian with the segment-mean slope taken at the midpoint
                let dg = -0.5 * dt * self.law.dp(vbar) + self.nu / vbar - 0.5 * self.nu * d * dt / (vbar * vbar);
                Ok((s, dg))
            }
        }
    }

    /// Residuals and Jacobian data for one mirrored half-line.
    fn assemble(&mut self, i: usize, state: &FluidState, dt: f64) -> Result<()> {
        let h = state.h;
        let a = &state.tau[i];
        let n = a.len();
        for k in 0..n {
            let d = (self.ub[i][k + 1] - self.ub[i][k]) / h;
            let (s, g) = self.cell(a[k], d, dt)?;
            self.sigma[i][k] = s;
            self.g[i][k] = g;
        }
        let un = &state.w[i];
        for j in 1..n {
            self.res[i][j] = 2.0 * h * (self.ub[i][j] - un[j]) - dt * (self.sigma[i][j] - self.sigma[i][j - 1]);
        }
        Ok(())
    }

    /// Solves `J y = -res` and `J z = e_1 (-dt g_0 / h) sign` for one half.
    fn solve_half(&mut self, i: usize, n: usize, h: f64, dt: f64, sign: f64) -> Result<()> {
        let r = dt / h;
        let g = &self.g[i];
        let cp = &mut self.cp;
        let (y, z) = (&mut self.y[i], &mut self.z[i]);
        // Thomas algorithm on rows j = 1..n-1
        let mut prev_c = 0.0;
        let mut prev_y = 0.0;
        let mut prev_z = 0.0;
        for j in 1..n {
            let lower = if j > 1 { -r * g[j - 1] } else { 0.0 };
            let diag = 2.0 * h + r * (g[j] + g[j - 1]);
            let upper = if j + 1 < n { -r * g[j] } else { 0.0 };
            let denom = diag - lower * prev_c;
            if denom == 0.0 || !denom.is_finite() {
                return Err(Error::SingularSystem(j));
            }
            let rhs_y = -self.res[i][j];
            let rhs_z = if j == 1 { -r * g[0] * sign } else { 0.0 };
            cp[j] = upper / denom;
            y[j] = (rhs_y - lower * prev_y) / denom;
            z[j] = (rhs_z - lower * prev_z) / denom;
            prev_c = cp[j];
            prev_y = y[j];
            prev_z = z[j];
        }
        for j in (1..n.saturating_sub(1)).rev() {
            y[j] -= cp[j] * y[j + 1];
            z[j] -= cp[j] * z[j + 1];
        }
        Ok(())
    }

    /// Advances `state` by `dt`.
    pub fn step(&mut self, state: &mut FluidState, dt: f64) -> Result<StepInfo> {
        let h = state.h;
        let n = state.n();
        let mv = self.particle_mass + h;
        // initial guess: midpoint of a linear extrapolation
        let mut vb = state.v;
        for i in 0..2 {
            let (ub, un) = (&mut self.ub[i], &state.w[i]);
            match &self.prev {
                Some(p) => {
                    for j in 0..=n {
                        ub[j] = un[j] + 0.5 * (un[j] - p[i][j]);
                    }
                }
                None => ub.copy_from_slice(un),
            }
        }
        if self.prev.is_some() {
            vb += 0.5 * (state.v - self.prev_v);
        }
        let signs = [-1.0, 1.0];
        // round-off floor of an update: stress error eps p(1) spread over a cell
        let floor = 16.0 * f64::EPSILON * (self.p1.abs() + self.c2) * dt / h;
        let mut iterations = 0;
        let mut converged = false;
        let mut last = f64::INFINITY;
        while iterations < MAX_NEWTON {
            iterations += 1;
            for i in 0..2 {
                self.ub[i][0] = signs[i] * vb;
                self.ub[i][n] = 0.0;
                self.assemble(i, state, dt).map_err(|e| match e {
                    Error::PositivityLost { cell, tau, .. } => Error::PositivityLost {
                        side: if i == 0 { "left" } else { "right" },
                        cell,
                        t: state.t,
                        tau,
                    },
                    other => other,
                })?;
            }
            let rv = 2.0 * mv * (vb - state.v) - dt * (self.sigma[1][0] - self.sigma[0][0]);
            for i in 0..2 {
                self.solve_half(i, n, h, dt, signs[i])?;
            }
            let r = dt / h;
            // d R_V / d ū_1 on each side
            let dr = -r * self.g[1][0];
            let dl = r * self.g[0][0];
            let e = 2.0 * mv + r * (self.g[1][0] + self.g[0][0]);
            let num = rv + dr * self.y[1][1] + dl * self.y[0][1];
            let den = e - dr * self.z[1][1] - dl * self.z[0][1];
            if den == 0.0 || !den.is_finite() {
                return Err(Error::SingularSystem(0));
            }
            let dv = -num / den;
            let mut delta = dv.abs();
            let mut scale = vb.abs();
            for i in 0..2 {
                for j in 1..n {
                    let d = self.y[i][j] - self.z[i][j] * dv;
                    self.ub[i][j] += d;
                    delta = delta.max(d.abs());
                    scale = scale.max(self.ub[i][j].abs());
                }
            }
            vb += dv;
            last = delta;
            if !delta.is_finite() {
                break;
            }
            if delta <= 1e-14 * scale + floor {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NewtonFailure { t: state.t, residual: last });
        }
        // final stresses at the converged midpoint
        for i in 0..2 {
            self.ub[i][0] = signs[i] * vb;
            self.assemble(i, state, dt)?;
        }
        let mut dissipation = 0.0;
        let prev_w = [state.w[0].clone(), state.w[1].clone()];
        for i in 0..2 {
            for k in 0..n {
                let d = (self.ub[i][k + 1] - self.ub[i][k]) / h;
                let a = state.tau[i][k];
                let w = match self.mode {
                    Mode::Linear => 1.0,
                    Mode::Nonlinear => 1.0 / (1.0 + a + 0.5 * dt * d),
                };
                dissipation += 2.0 * self.nu * dt * h * d * d * w;
                state.tau[i][k] = a + dt * d;
            }
            for j in 0..n {
                state.w[i][j] = 2.0 * self.ub[i][j] - state.w[i][j];
            }
            state.w[i][n] = 0.0;
        }
        let v_new = 2.0 * vb - state.v;
        state.w[0][0] = -v_new;
        state.w[1][0] = v_new;
        self.prev_v = state.v;
        state.v = v_new;
        state.h_disp += dt * vb;
        state.t += dt;
        self.prev = Some(prev_w);
        state.check_positive()?;
        Ok(StepInfo {
            dissipation,
            newton_iterations: iterations,
        })
    }
}
