use crate::model::PressureLaw;

use super::state::FluidState;
use super::Mode;

/// Discrete mass, momentum and energy of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerValues {
    /// `h sum tau`.
    pub mass: f64,
    /// `h sum u` over non-interface nodes plus `(m + h) V`.
    pub momentum: f64,
    /// `2 h sum P(tau) + h sum u^2 + (m + h) V^2`.
    pub energy: f64,
}

/// Potential energy density `P(tau)` of the active mode.
pub fn potential(law: &PressureLaw, mode: Mode, tau: f64) -> f64 {
    match mode {
        Mode::Nonlinear => law.potential(tau),
        Mode::Linear => 0.5 * -law.d1() * tau * tau,
    }
}

pub fn measure(state: &FluidState, law: &PressureLaw, mode: Mode, particle_mass: f64) -> LedgerValues {
    let h = state.h;
    let mut mass = 0.0;
    let mut momentum = 0.0;
    let mut energy = 0.0;
    for (i, sg) in [(0usize, -1.0), (1, 1.0)] {
        let n = state.tau[i].len();
        for &tau in &state.tau[i] {
            mass += h * tau;
            energy += 2.0 * h * potential(law, mode, tau);
        }
        for &w in &state.w[i][1..n] {
            momentum += sg * h * w;
            energy += h * w * w;
        }
    }
    let mv = particle_mass + h;
    momentum += mv * state.v;
    energy += mv * state.v * state.v;
    LedgerValues { mass, momentum, energy }
}

/// Conservation bookkeeping for a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationLedger {
    pub initial: LedgerValues,
    pub current: LedgerValues,
    /// `2 nu int_0^t sum h D^2 / (1 + tau) ds`, accumulated per step.
    pub dissipation: f64,
    /// Normalisers for the relative drifts of mass and momentum.
    pub mass_scale: f64,
    pub momentum_scale: f64,
}

impl ConservationLedger {
    pub fn new(state: &FluidState, law: &PressureLaw, mode: Mode, particle_mass: f64) -> Self {
        let v = measure(state, law, mode, particle_mass);
        let h = state.h;
        let c = (-law.d1()).sqrt();
        let tau_l1: f64 = state.tau.iter().flatten().map(|t| h * t.abs()).sum();
        let u_l1: f64 = state.w.iter().flatten().map(|w| h * w.abs()).sum::<f64>()
            + (particle_mass + h) * state.v.abs();
        Self {
            initial: v,
            current: v,
            dissipation: 0.0,
            mass_scale: v.mass.abs().max(tau_l1).max(f64::MIN_POSITIVE),
            // a momentum-free start still carries momentum ~ c tau in each wave
            momentum_scale: v.momentum.abs().max(u_l1).max(c * tau_l1).max(f64::MIN_POSITIVE),
        }
    }

    pub fn update(&mut self, state: &FluidState, law: &PressureLaw, mode: Mode, particle_mass: f64, dissipated: f64) {
        self.current = measure(state, law, mode, particle_mass);
        self.dissipation += dissipated;
    }

    pub fn energy_plus_dissipation(&self) -> f64 {
        self.current.energy + self.dissipation
    }

    pub fn mass_drift(&self) -> f64 {
        (self.current.mass - self.initial.mass).abs() / self.mass_scale
    }

    pub fn momentum_drift(&self) -> f64 {
        (self.current.momentum - self.initial.momentum).abs() / self.momentum_scale
    }

    pub fn energy_drift(&self) -> f64 {
        let e0 = self.initial.energy;
        if e0 == 0.0 {
            return self.energy_plus_dissipation().abs();
        }
        (self.energy_plus_dissipation() - e0).abs() / e0
    }
}
