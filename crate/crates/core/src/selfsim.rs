//! Diffusion waves: the self-similar solutions of
//! `theta_t + lambda theta_x + (theta^2/2)_x = (nu/2) theta_xx`
//! carrying mass `M`, evaluated with the time shift `t -> t + 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{CharSystem, Masses};
use crate::specialfns::{erfc, integrate, QuadOptions};

/// One diffusion wave `theta_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionWave {
    /// Zero-based branch index (0 for `lambda = c`, 1 for `lambda = -c`).
    pub branch: usize,
    pub lambda: f64,
    pub nu: f64,
    pub mass: f64,
    /// `e^{M/nu} - 1`.
    k: f64,
}

/// Value and first two `x`-derivatives of a wave at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveJet {
    pub theta: f64,
    pub theta_x: f64,
    pub theta_xx: f64,
}

impl DiffusionWave {
    pub fn new(branch: usize, lambda: f64, nu: f64, mass: f64) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::param("nu", format!("must be positive, got {nu}")));
        }
        if !mass.is_finite() || !lambda.is_finite() {
            return Err(Error::param("mass", "wave mass and speed must be finite"));
        }
        let r = mass / nu;
        if r > 700.0 {
            return Err(Error::MassOverflow(r));
        }
        Ok(Self {
            branch,
            lambda,
            nu,
            mass,
            k: r.exp_m1(),
        })
    }

    /// Wave of branch `i` (zero-based) with mass `m_i + m_V`.
    pub fn from_masses(cs: &CharSystem, masses: &Masses, i: usize) -> Result<Self> {
        Self::new(i, cs.lambda[i], cs.nu, masses.total(i))
    }

    fn check_t(t: f64) -> Result<()> {
        if !(t >= 0.0) {
            return Err(Error::param("t", format!("must be nonnegative, got {t}")));
        }
        Ok(())
    }

    /// Denominator `sqrt(pi) + K int_w^inf e^{-y^2} dy`.
    fn denominator(&self, w: f64) -> f64 {
        let d = PI.sqrt() + self.k * 0.5 * PI.sqrt() * erfc(w);
        debug_assert!(d > 0.0);
        d
    }

    /// `theta` and its `x`-derivatives.
    pub fn jet(&self, x: f64, t: f64) -> Result<WaveJet> {
        Self::check_t(t)?;
        if self.k == 0.0 {
            return Ok(WaveJet { theta: 0.0, theta_x: 0.0, theta_xx: 0.0 });
        }
        let tt = t + 1.0;
        let s = (2.0 * self.nu * tt).sqrt();
        let w = (x - self.lambda * tt) / s;
        let a = (self.nu / (2.0 * tt)).sqrt() * self.k;
        let g = (-w * w).exp();
        let d = self.denominator(w);
        if d <= 0.0 {
            return Err(Error::NonFinite { location: format!("wave denominator at w = {w}") });
        }
        let q = g / d;
        let kq = self.k * q;
        let theta = a * q;
        let dw = a * q * (-2.0 * w + kq);
        let dww = a * q * (-2.0 + 4.0 * w * w - 6.0 * w * kq + 2.0 * kq * kq);
        Ok(WaveJet {
            theta,
            theta_x: dw / s,
            theta_xx: dww / (s * s),
        })
    }

    /// `theta_i(x, t)`.
    pub fn theta(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.jet(x, t)?.theta)
    }

    /// `d theta_i / dx` from the closed form.
    pub fn theta_x(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.jet(x, t)?.theta_x)
    }

    /// `d theta_i / dt` through the Burgers equation.
    pub fn theta_t(&self, x: f64, t: f64) -> Result<f64> {
        let j = self.jet(x, t)?;
        Ok(-self.lambda * j.theta_x - j.theta * j.theta_x + 0.5 * self.nu * j.theta_xx)
    }

    /// Centre `lambda (t + 1)` of the wave.
    pub fn centre(&self, t: f64) -> f64 {
        self.lambda * (t + 1.0)
    }

    /// Quadrature of `theta(., t)` over forty standard deviations around
    /// the centre.
    pub fn mass_integral(&self, t: f64) -> Result<f64> {
        Self::check_t(t)?;
        if self.k == 0.0 {
            return Ok(0.0);
        }
        let c = self.centre(t);
        let w = 40.0 * (self.nu * (t + 1.0)).sqrt();
        let f = |x: f64| self.jet(x, t).map(|j| j.theta).unwrap_or(f64::NAN);
        let opts = QuadOptions::tol(1e-13, 1e-12);
        let pts = [c - w, c - 3.0 * w / 40.0, c, c + 3.0 * w / 40.0, c + w];
        Ok(crate::specialfns::integrate_breaks(f, &pts, opts)?.value)
    }
}

/// Max central-difference residual of
/// `theta_t + lambda theta_x + theta theta_x - kappa theta_xx` over samples.
pub fn burgers_residual_with(
    wave: &DiffusionWave,
    samples: &[(f64, f64)],
    h: f64,
    kappa: f64,
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Empty("residual samples"));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::param("h", format!("must be positive, got {h}")));
    }
    let mut worst = 0.0_f64;
    for &(x, t) in samples {
        if t < h {
            return Err(Error::param("samples", format!("t = {t} below spacing h = {h}")));
        }
        let f = |x: f64, t: f64| wave.theta(x, t);
        let th = f(x, t)?;
        let tt = (f(x, t + h)? - f(x, t - h)?) / (2.0 * h);
        let (fp, fm) = (f(x + h, t)?, f(x - h, t)?);
        let tx = (fp - fm) / (2.0 * h);
        let txx = (fp - 2.0 * th + fm) / (h * h);
        let r = tt + wave.lambda * tx + th * tx - kappa * txx;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// [`burgers_residual_with`] using the wave's own diffusion `nu/2`.
pub fn burgers_residual(wave: &DiffusionWave, samples: &[(f64, f64)], h: f64) -> Result<f64> {
    burgers_residual_with(wave, samples, h, 0.5 * wave.nu)
}

/// Plain adaptive-quadrature helper reused by tests and the verify suites.
pub fn integrate_theta(wave: &DiffusionWave, t: f64, a: f64, b: f64) -> Result<f64> {
    Ok(integrate(|x| wave.theta(x, t).unwrap_or(f64::NAN), a, b, QuadOptions::default())?.value)
}
