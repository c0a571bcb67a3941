//! Fundamental solution of the linearized system, its equal-diffusion
//! approximation, and the transmission/reflection kernels of the particle.
//!
//! The production route tabulates `G(., t)` by FFT (see [`table`]); a
//! fixed-Talbot Laplace inversion (see [`talbot`]) is kept as an independent
//! cross-check. Kernels are only evaluated off the interface `x = 0`.

pub mod bounds;
pub mod gstar;
pub mod linear;
pub mod symbol;
pub mod table;
pub mod talbot;

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::model::CharSystem;

pub use bounds::{bound_stability, envelope, fit_bound, BoundFit, BoundKind};
pub use gstar::{g_star, g_star_dx};
pub use linear::{linear_green_solution, linear_green_solution_with, LinearInit};
pub use symbol::{generator, generator_eigenvalues, symbol, SymbolEval};
pub use table::{GreenTable, TableOptions};
pub use talbot::{
    talbot_g_reflected, talbot_g_smooth, talbot_g_transmitted, talbot_g_transmitted_dx, TalbotOptions,
};

/// Below this time the FFT grid would have to resolve a collapsing
/// Gaussian; the smooth part of `G` is then replaced by `G*`.
pub const SMALL_T: f64 = 1e-3;

/// Transmission rate `kappa = 2 / m` of a particle of mass `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmission {
    particle_mass: f64,
}

impl Transmission {
    pub fn new(particle_mass: f64) -> Result<Self> {
        if !(particle_mass > 0.0 && particle_mass.is_finite()) {
            return Err(Error::param("m", format!("particle mass must be positive, got {particle_mass}")));
        }
        Ok(Self { particle_mass })
    }

    pub fn unit_mass() -> Self {
        Self { particle_mass: 1.0 }
    }

    pub fn particle_mass(&self) -> f64 {
        self.particle_mass
    }

    pub fn kappa(&self) -> f64 {
        2.0 / self.particle_mass
    }
}

/// `diag(1, -1)`.
pub fn s_matrix() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

/// `S M S`: the image of a kernel under `x -> -x`.
pub fn mirror(m: &Matrix2<f64>) -> Matrix2<f64> {
    Matrix2::new(m[(0, 0)], -m[(0, 1)], -m[(1, 0)], m[(1, 1)])
}

/// Coefficient of `delta(x)` in `G`, up to the factor `e^{-c^2 t/nu}`.
pub fn q0() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, 0.0)
}

/// Coefficient of `delta(x)` in `d_x G`, up to the factor `e^{-c^2 t/nu}`.
pub fn q1(cs: &CharSystem) -> Matrix2<f64> {
    Matrix2::new(0.0, -1.0 / cs.nu, -cs.c * cs.c / cs.nu, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    G,
    Gstar,
    GT,
    GR,
}

impl KernelKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g" => Some(Self::G),
            "gstar" | "g*" => Some(Self::Gstar),
            "gt" => Some(Self::GT),
            "gr" => Some(Self::GR),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::G => "G",
            Self::Gstar => "Gstar",
            Self::GT => "GT",
            Self::GR => "GR",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    ClosedForm,
    Fft,
    /// `t < SMALL_T`: smooth part of `G` replaced by `G*`.
    SmallTime,
    Talbot,
}

/// A kernel sample; `regular` is the smooth part and `singular_weight` the
/// coefficient of `delta(x) Q0` (nonzero only for `G`).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelEval {
    pub kind: KernelKind,
    pub x: f64,
    pub t: f64,
    pub regular: Matrix2<f64>,
    pub singular_weight: f64,
    pub method: EvalMethod,
}

fn check_args(x: f64, t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    if x == 0.0 {
        return Err(Error::InterfaceEvaluation);
    }
    if !x.is_finite() {
        return Err(Error::param("x", "must be finite"));
    }
    Ok(())
}

/// Evaluates one kernel at `(x, t)` using a table when `t >= SMALL_T`.
pub fn evaluate_kernel(
    kind: KernelKind,
    x: f64,
    t: f64,
    cs: &CharSystem,
    tr: Transmission,
    table: Option<&GreenTable>,
) -> Result<KernelEval> {
    check_args(x, t)?;
    let singular = (-cs.c * cs.c * t / cs.nu).exp();
    let mk = |regular, singular_weight, method| KernelEval {
        kind,
        x,
        t,
        regular,
        singular_weight,
        method,
    };
    if kind == KernelKind::Gstar {
        return Ok(mk(g_star(x, t, cs)?, 0.0, EvalMethod::ClosedForm));
    }
    if t < SMALL_T {
        return Ok(match kind {
            KernelKind::G => mk(g_star(x, t, cs)?, singular, EvalMethod::SmallTime),
            KernelKind::GT => mk(
                talbot_g_transmitted(x, t, cs, tr, TalbotOptions::default())?,
                0.0,
                EvalMethod::Talbot,
            ),
            _ => mk(
                talbot_g_reflected(x, t, cs, tr, TalbotOptions::default())?,
                0.0,
                EvalMethod::Talbot,
            ),
        });
    }
    let owned;
    let tab = match table {
        Some(tb) if tb.t == t && tb.transmission() == tr => tb,
        _ => {
            owned = GreenTable::new(t, cs, tr)?;
            &owned
        }
    };
    Ok(match kind {
        KernelKind::G => mk(tab.g_smooth(x)?, tab.singular_weight(), EvalMethod::Fft),
        KernelKind::GT => mk(tab.g_transmitted(x)?, 0.0, EvalMethod::Fft),
        _ => mk(tab.g_reflected(x)?, 0.0, EvalMethod::Fft),
    })
}

/// Fundamental solution at `(x, t)`, `x != 0`.
pub fn g_fundamental(x: f64, t: f64, cs: &CharSystem) -> Result<KernelEval> {
    evaluate_kernel(KernelKind::G, x, t, cs, Transmission::unit_mass(), None)
}

/// Transmission kernel for a unit-mass particle.
pub fn g_transmitted(x: f64, t: f64, cs: &CharSystem) -> Result<Matrix2<f64>> {
    Ok(evaluate_kernel(KernelKind::GT, x, t, cs, Transmission::unit_mass(), None)?.regular)
}

/// Both routes to the reflection kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectedEval {
    /// `(G - G_T) S`.
    pub definition: Matrix2<f64>,
    /// `-(1/kappa) d_x G_T S` (sign flipped for `x < 0`).
    pub via_derivative: Matrix2<f64>,
}

impl ReflectedEval {
    pub fn discrepancy(&self) -> f64 {
        (self.definition - self.via_derivative).abs().max()
    }
}

/// Reflection kernel for a unit-mass particle, computed both ways.
pub fn g_reflected(x: f64, t: f64, cs: &CharSystem) -> Result<ReflectedEval> {
    check_args(x, t)?;
    let tab = GreenTable::new(t.max(SMALL_T), cs, Transmission::unit_mass())?;
    if t < SMALL_T {
        return Err(Error::AccuracyUnreachable(format!(
            "reflection routes need t >= {SMALL_T}, got {t}"
        )));
    }
    Ok(ReflectedEval {
        definition: tab.g_reflected(x)?,
        via_derivative: tab.g_reflected_via_derivative(x)?,
    })
}
