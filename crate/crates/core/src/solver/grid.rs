use crate::error::{Error, Result};
use crate::model::CharSystem;

/// Largest allowed `dt c / h`.
pub const CFL: f64 = 0.4;

/// Default multiplier `K` in the truncation rule `L >= c t_final + K sqrt(nu t_final)`.
pub const DEFAULT_TRUNCATION_FACTOR: f64 = 4.0;

/// Truncated two-sided domain `[-L, L]` with `N` cells per half-line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub l: f64,
    pub n: usize,
    pub dt: f64,
    pub t_final: f64,
    pub truncation_factor: f64,
}

impl GridSpec {
    /// Grid with the CFL-limited default step.
    pub fn new(l: f64, n: usize, t_final: f64, cs: &CharSystem) -> Self {
        let h = l / n as f64;
        Self {
            l,
            n,
            dt: CFL * h / cs.c,
            t_final,
            truncation_factor: DEFAULT_TRUNCATION_FACTOR,
        }
    }

    pub fn h(&self) -> f64 {
        self.l / self.n as f64
    }

    /// Smallest `L` accepted for this `t_final`.
    pub fn required_length(&self, cs: &CharSystem) -> f64 {
        cs.c * self.t_final + self.truncation_factor * (cs.nu * self.t_final).sqrt()
    }

    pub fn validate(&self, cs: &CharSystem) -> Result<()> {
        let mut errs = Vec::new();
        if !(self.l > 0.0 && self.l.is_finite()) {
            errs.push(format!("L must be positive, got {}", self.l));
        }
        if self.n < 4 {
            errs.push(format!("N must be at least 4, got {}", self.n));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            errs.push(format!("t_final must be positive, got {}", self.t_final));
        }
        if !(self.truncation_factor >= 0.0) {
            errs.push("truncation_factor must be non-negative".into());
        }
        if !errs.is_empty() {
            return Err(Error::Config(errs));
        }
        let need = self.required_length(cs);
        if self.l < need {
            errs.push(format!(
                "truncation: L = {} < c t_final + {} sqrt(nu t_final) = {need:.4}",
                self.l, self.truncation_factor
            ));
        }
        let dt_max = CFL * self.h() / cs.c;
        if !(self.dt > 0.0) || self.dt > dt_max * (1.0 + 1e-12) {
            errs.push(format!(
                "dt = {} violates the CFL bound dt <= {CFL} h / c = {dt_max:.6e}",
                self.dt
            ));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }
}
