//! Finite-difference solver for the perturbation system with the point
//! mass at the origin of the Lagrangian mass coordinate.

pub mod eulerian;
pub mod grid;
pub mod initial;
pub mod io;
pub mod ledger;
pub mod run;
pub mod state;
pub mod step;

pub use eulerian::{eulerian_to_lagrangian, lagrangian_to_eulerian, EulerianHalf, EulerianProfile};
pub use grid::{GridSpec, CFL, DEFAULT_TRUNCATION_FACTOR};
pub use initial::{InitialData, InitialFamily, Jet};
pub use io::{read_series, read_snapshot, read_snapshots, SeriesRow, Snapshot};
pub use ledger::{ConservationLedger, LedgerValues};
pub use run::{geometric_schedule, run, RunOutput, RunSpec};
pub use state::FluidState;
pub use step::{StepInfo, Stepper};

/// `Linear` replaces `p(1 + tau)` by `p(1) - c^2 tau` and `u_x / (1 + tau)`
/// by `u_x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Nonlinear,
    Linear,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "nonlinear" => Some(Self::Nonlinear),
            "linear" => Some(Self::Linear),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Nonlinear => "nonlinear",
            Self::Linear => "linear",
        }
    }
}
