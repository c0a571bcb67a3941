//! Initial-data families. Every profile is evaluated as a second-order jet
//! so that the interface compatibility conditions can be imposed and
//! checked exactly.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::model::{PressureLaw, Side};

/// Value with first and second derivative.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Self { v, d1: 0.0, d2: 0.0 }
    }

    pub fn var(x: f64) -> Self {
        Self { v: x, d1: 1.0, d2: 0.0 }
    }

    pub fn scale(self, a: f64) -> Self {
        Self {
            v: a * self.v,
            d1: a * self.d1,
            d2: a * self.d2,
        }
    }

    /// `f(self)` given `(f, f', f'')` at `self.v`.
    pub fn chain(self, f: (f64, f64, f64)) -> Self {
        Self {
            v: f.0,
            d1: f.1 * self.d1,
            d2: f.2 * self.d1 * self.d1 + f.1 * self.d2,
        }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain((e, e, e))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

/// `C^4` cutoff: 1 for `s <= 0`, 0 for `s >= 1`, with derivatives.
pub fn cutoff(s: f64) -> (f64, f64, f64) {
    if s <= 0.0 {
        return (1.0, 0.0, 0.0);
    }
    if s >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    // the step polynomial is odd about 1/2; evaluate on the near half for accuracy
    if s > 0.5 {
        let (v, d1, d2) = smooth_step(1.0 - s);
        return (v, -d1, d2);
    }
    let (v, d1, d2) = smooth_step(s);
    (1.0 - v, -d1, -d2)
}

fn smooth_step(s: f64) -> (f64, f64, f64) {
    let s4 = s.powi(4);
    let step = s4 * s * (126.0 + s * (-420.0 + s * (540.0 + s * (-315.0 + 70.0 * s))));
    let d1 = s4 * (630.0 + s * (-2520.0 + s * (3780.0 + s * (-2520.0 + 630.0 * s))));
    let d2 = s * s * s * (2520.0 + s * (-12600.0 + s * (22680.0 + s * (-17640.0 + 5040.0 * s))));
    (step, d1, d2)
}

fn cutoff_jet(s: Jet) -> Jet {
    s.chain(cutoff(s.v))
}

/// `A exp(-((x - c)/w)^2)` with a `C^4` window vanishing for `|x - c| >= 3w`.
fn windowed_gaussian(x: Jet, center: f64, width: f64) -> Jet {
    let s = (x - Jet::constant(center)).scale(1.0 / width);
    let g = (s * s).scale(-1.0).exp();
    let abs_s = if s.v < 0.0 { s.scale(-1.0) } else { s };
    g * cutoff_jet(abs_s - Jet::constant(2.0))
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialFamily {
    /// `tau0 = A G(x)`, `u0 = velocity G(x)` with `G` a windowed Gaussian.
    GaussianBump {
        amplitude: f64,
        center: f64,
        width: f64,
        velocity: f64,
    },
    /// Odd `tau0` with a jump at the interface, even `u0`.
    Dipole { amplitude: f64, width: f64 },
    /// Even `tau0`, odd `u0`, `V0 = 0`.
    SymmetricNull {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// Piecewise-linear samples `(x, tau, u)` sorted by `x`.
    CustomSamples { samples: Vec<(f64, f64, f64)> },
}

impl InitialFamily {
    pub fn name(&self) -> &'static str {
        match self {
            Self::GaussianBump { .. } => "gaussian_bump",
            Self::Dipole { .. } => "dipole",
            Self::SymmetricNull { .. } => "symmetric_null",
            Self::CustomSamples { .. } => "custom_samples",
        }
    }

    /// Raw `(tau, u)` before the interface blend and slope correction.
    fn raw(&self, side: Side, x: f64) -> (Jet, Jet) {
        let xj = Jet::var(x);
        match *self {
            Self::GaussianBump {
                amplitude,
                center,
                width,
                velocity,
            } => {
                let g = windowed_gaussian(xj, center, width);
                (g.scale(amplitude), g.scale(velocity))
            }
            Self::Dipole { amplitude, width } => {
                let sg = side.sign();
                let lobe = windowed_gaussian(xj.scale(sg), width, width);
                let tau = lobe.scale(sg * amplitude);
                let u = windowed_gaussian(xj, 0.0, 2.0 * width).scale(0.5 * amplitude);
                (tau, u)
            }
            Self::SymmetricNull {
                amplitude,
                center,
                width,
            } => {
                let sg = side.sign();
                let lobe = windowed_gaussian(xj.scale(sg), center, width);
                (lobe.scale(amplitude), lobe.scale(0.5 * sg * amplitude))
            }
            Self::CustomSamples { ref samples } => interp_samples(samples, side, x),
        }
    }
}

fn interp_samples(samples: &[(f64, f64, f64)], side: Side, x: f64) -> (Jet, Jet) {
    let n = samples.len();
    if n < 2 || x < samples[0].0 || x > samples[n - 1].0 {
        return (Jet::default(), Jet::default());
    }
    // a repeated abscissa encodes a jump; each side takes its own limit
    let (i0, i1) = match side {
        Side::Right => {
            let k = samples.partition_point(|s| s.0 <= x).clamp(1, n - 1);
            (k - 1, k)
        }
        Side::Left => {
            let k = samples.partition_point(|s| s.0 < x).clamp(1, n - 1);
            (k - 1, k)
        }
    };
    let (a, b) = (samples[i0], samples[i1]);
    if b.0 == a.0 {
        let v = if side == Side::Right { b } else { a };
        return (Jet::constant(v.1), Jet::constant(v.2));
    }
    let w = (x - a.0) / (b.0 - a.0);
    let st = (b.1 - a.1) / (b.0 - a.0);
    let su = (b.2 - a.2) / (b.0 - a.0);
    (
        Jet { v: a.1 + w * (b.1 - a.1), d1: st, d2: 0.0 },
        Jet { v: a.2 + w * (b.2 - a.2), d1: su, d2: 0.0 },
    )
}

/// Initial data `(tau0, u0, V0)` satisfying both interface compatibility
/// conditions: `u0` is blended to `V0` on `|x| < blend_radius` and `tau0`
/// receives a slope correction `k ψ(|x|)`, `ψ(ξ) = ξ χ(ξ / r)`, on each side.
#[derive(Debug, Clone)]
pub struct InitialData {
    pub family: InitialFamily,
    pub v0: f64,
    pub particle_mass: f64,
    pub blend_radius: f64,
    /// Slope corrections `[left, right]`.
    slope_fix: [f64; 2],
    law: PressureLaw,
    nu: f64,
}

impl InitialData {
    pub fn new(
        family: InitialFamily,
        v0: f64,
        particle_mass: f64,
        blend_radius: f64,
        law: &PressureLaw,
        nu: f64,
    ) -> Result<Self> {
        if !(blend_radius > 0.0 && blend_radius.is_finite()) {
            return Err(Error::param("blend_radius", "must be positive"));
        }
        if !(particle_mass > 0.0) {
            return Err(Error::param("m", "particle mass must be positive"));
        }
        if matches!(family, InitialFamily::SymmetricNull { .. }) && v0 != 0.0 {
            return Err(Error::param("V0", "symmetric_null requires V0 = 0"));
        }
        if let InitialFamily::CustomSamples { samples } = &family {
            if samples.len() < 2 {
                return Err(Error::Empty("custom initial samples"));
            }
            if samples.windows(2).any(|w| w[1].0 < w[0].0) {
                return Err(Error::param("samples", "x must be non-decreasing"));
            }
        }
        let mut data = Self {
            family,
            v0,
            particle_mass,
            blend_radius,
            slope_fix: [0.0; 2],
            law: law.clone(),
            nu,
        };
        let symmetric = matches!(data.family, InitialFamily::SymmetricNull { .. });
        if !symmetric {
            data.slope_fix = data.required_slope_fix();
        }
        Ok(data)
    }

    fn blended(&self, side: Side, x: f64) -> (Jet, Jet) {
        let (tau, u) = self.family.raw(side, x);
        let xi = Jet::var(x).scale(side.sign()).scale(1.0 / self.blend_radius);
        let chi = cutoff_jet(xi);
        let one = Jet::constant(1.0);
        let u = Jet::constant(self.v0) * chi + u * (one - chi);
        (tau, u)
    }

    /// `(tau0, u0)` jets at `x` on `side`; `x = 0` gives the one-sided limit.
    pub fn eval(&self, side: Side, x: f64) -> (Jet, Jet) {
        let (tau, u) = self.blended(side, x);
        let k = self.slope_fix[(side == Side::Right) as usize];
        if k == 0.0 {
            return (tau, u);
        }
        let xi = Jet::var(x).scale(side.sign());
        let psi = xi * cutoff_jet(xi.scale(1.0 / self.blend_radius));
        (tau + psi.scale(k), u)
    }

    pub fn tau0(&self, side: Side, x: f64) -> f64 {
        self.eval(side, x).0.v
    }

    pub fn u0(&self, side: Side, x: f64) -> f64 {
        self.eval(side, x).1.v
    }

    /// `sigma = -p(1 + tau) + nu u_x / (1 + tau)` and its `x`-derivative.
    fn stress(&self, tau: Jet, u: Jet) -> (f64, f64) {
        let v = 1.0 + tau.v;
        let s = -self.law.p(v) + self.nu * u.d1 / v;
        let ds = -self.law.dp(v) * tau.d1 + self.nu * (u.d2 / v - u.d1 * tau.d1 / (v * v));
        (s, ds)
    }

    fn required_slope_fix(&self) -> [f64; 2] {
        let (tl, ul) = self.blended(Side::Left, 0.0);
        let (tr, ur) = self.blended(Side::Right, 0.0);
        let jump = (self.stress(tr, ur).0 - self.stress(tl, ul).0) / self.particle_mass;
        let mut fix = [0.0; 2];
        for (i, (tau, u)) in [(tl, ul), (tr, ur)].into_iter().enumerate() {
            let v = 1.0 + tau.v;
            let coeff = -self.law.dp(v) - self.nu * u.d1 / (v * v);
            let target = (jump - self.nu * u.d2 / v) / coeff;
            let sign = if i == 0 { -1.0 } else { 1.0 };
            // d/dx [k ψ(±x)] at ±0 is ±k
            fix[i] = sign * (target - tau.d1);
        }
        fix
    }

    /// `[|u0(-0) - V0|, |u0(+0) - V0|, residual(-0), residual(+0)]` of the two
    /// compatibility conditions.
    pub fn compatibility_residuals(&self) -> [f64; 4] {
        let (tl, ul) = self.eval(Side::Left, 0.0);
        let (tr, ur) = self.eval(Side::Right, 0.0);
        let (sl, dsl) = self.stress(tl, ul);
        let (sr, dsr) = self.stress(tr, ur);
        let jump = (sr - sl) / self.particle_mass;
        [
            (ul.v - self.v0).abs(),
            (ur.v - self.v0).abs(),
            (dsl - jump).abs(),
            (dsr - jump).abs(),
        ]
    }

    /// Largest `|x|` where the data may be nonzero.
    pub fn support(&self) -> f64 {
        let r = self.blend_radius;
        match &self.family {
            InitialFamily::GaussianBump { center, width, .. } => (center.abs() + 3.0 * width).max(r),
            InitialFamily::Dipole { width, .. } => (6.0 * width).max(r),
            InitialFamily::SymmetricNull { center, width, .. } => (center.abs() + 3.0 * width).max(r),
            InitialFamily::CustomSamples { samples } => samples
                .iter()
                .map(|s| s.0.abs())
                .fold(r, f64::max),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law() -> PressureLaw {
        PressureLaw::gamma(1.4).unwrap()
    }

    #[test]
    fn cutoff_is_c4_at_the_ends() {
        let (v, d1, d2) = cutoff(1e-4);
        assert!((v - 1.0).abs() < 1e-15 && d1.abs() < 1e-10 && d2.abs() < 1e-6);
        let (v, d1, d2) = cutoff(1.0 - 1e-4);
        assert!(v.abs() < 1e-14 && d1.abs() < 1e-10 && d2.abs() < 1e-6);
        let h = 1e-6;
        let s = 0.37;
        let fd = (cutoff(s + h).0 - cutoff(s - h).0) / (2.0 * h);
        assert!((fd - cutoff(s).1).abs() < 1e-7);
        let fd2 = (cutoff(s + h).1 - cutoff(s - h).1) / (2.0 * h);
        assert!((fd2 - cutoff(s).2).abs() < 1e-6);
    }

    #[test]
    fn jets_match_finite_differences() {
        let d = InitialData::new(
            InitialFamily::Dipole { amplitude: 0.02, width: 1.0 },
            0.01,
            1.0,
            1.0,
            &law(),
            1.0,
        )
        .unwrap();
        let h = 1e-5;
        for &x in &[0.3, 0.9, 1.7, 4.0] {
            let (t, u) = d.eval(Side::Right, x);
            let fd = (d.tau0(Side::Right, x + h) - d.tau0(Side::Right, x - h)) / (2.0 * h);
            assert!((fd - t.d1).abs() < 1e-8, "x={x}");
            let fd = (d.u0(Side::Right, x + h) - d.u0(Side::Right, x - h)) / (2.0 * h);
            assert!((fd - u.d1).abs() < 1e-8);
        }
    }

    #[test]
    fn gaussian_bump_meets_velocity_condition_exactly() {
        let d = InitialData::new(
            InitialFamily::GaussianBump {
                amplitude: 0.01,
                center: 3.0,
                width: 1.0,
                velocity: 0.0,
            },
            0.0,
            1.0,
            1.0,
            &law(),
            1.0,
        )
        .unwrap();
        assert_eq!(d.u0(Side::Left, 0.0), 0.0);
        assert_eq!(d.u0(Side::Right, 0.0), 0.0);
        assert_eq!(d.tau0(Side::Right, 6.5), 0.0);
    }

    #[test]
    fn dipole_compatibility_after_correction() {
        let d = InitialData::new(
            InitialFamily::Dipole { amplitude: 0.02, width: 1.0 },
            0.01,
            1.0,
            1.0,
            &law(),
            1.0,
        )
        .unwrap();
        let r = d.compatibility_residuals();
        assert!(r.iter().all(|v| *v < 1e-12), "{r:?}");
        let raw = InitialData { slope_fix: [0.0; 2], ..d.clone() };
        assert!(raw.compatibility_residuals()[3] > 1e-4);
    }

    #[test]
    fn symmetric_null_is_mirror_symmetric() {
        let d = InitialData::new(
            InitialFamily::SymmetricNull {
                amplitude: 0.01,
                center: 3.0,
                width: 1.0,
            },
            0.0,
            1.0,
            1.0,
            &law(),
            1.0,
        )
        .unwrap();
        for &x in &[0.0, 0.5, 2.0, 3.3] {
            assert_eq!(d.tau0(Side::Left, -x), d.tau0(Side::Right, x));
            assert_eq!(d.u0(Side::Left, -x), -d.u0(Side::Right, x));
        }
        assert!(d.compatibility_residuals().iter().all(|v| *v == 0.0));
        assert!(InitialData::new(
            InitialFamily::SymmetricNull { amplitude: 0.01, center: 3.0, width: 1.0 },
            0.1,
            1.0,
            1.0,
            &law(),
            1.0
        )
        .is_err());
    }

    #[test]
    fn custom_samples_interpolate_linearly() {
        let s = vec![(-1.0, 0.0, 0.0), (0.0, 0.01, 0.0), (1.0, 0.0, 0.0)];
        let d = InitialData::new(InitialFamily::CustomSamples { samples: s }, 0.0, 1.0, 0.5, &law(), 1.0).unwrap();
        assert!((d.tau0(Side::Right, 0.75) - 0.0025).abs() < 1e-15);
        assert!((d.tau0(Side::Left, -0.75) - 0.0025).abs() < 1e-15);
    }
}
