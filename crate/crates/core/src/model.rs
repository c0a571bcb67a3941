//! Continuous model: barotropic pressure law, the characteristic
//! eigensystem of the linearized Lagrangian system, diagonal variables and
//! the initial-data masses carried by the asymptotic diffusion waves.
//!
//! The background state is `v = 1`, `u = 0`. With `tau = v - 1` the
//! linearization reads `U_t + A U_x = B U_xx` for `U = (tau, u)` where
//! `A = [[0, -1], [-c^2, 0]]`, `B = diag(0, nu)` and `c^2 = -p'(1)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix2, RowVector2, Vector2};

use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Barotropic pressure as a function of specific volume.
#[derive(Clone)]
pub enum PressureLaw {
    /// `p(v) = v^(-gamma)`, `gamma > 1`.
    Gamma { gamma: f64 },
    /// A smooth law given by `p`, `p'` and `p''`.
    Custom {
        name: String,
        p: ScalarFn,
        dp: ScalarFn,
        d2p: ScalarFn,
    },
}

impl fmt::Debug for PressureLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PressureLaw::Gamma { gamma } => write!(f, "PressureLaw::Gamma({gamma})"),
            PressureLaw::Custom { name, .. } => write!(f, "PressureLaw::Custom({name})"),
        }
    }
}

impl PressureLaw {
    pub fn gamma(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidPressureLaw(format!(
                "gamma-law requires gamma > 1, got {gamma}"
            )));
        }
        Ok(PressureLaw::Gamma { gamma })
    }

    /// Builds a law from user callables and checks `p'(1) < 0`, `p''(1) != 0`.
    pub fn custom<P, D, D2>(name: impl Into<String>, p: P, dp: D, d2p: D2) -> Result<Self>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let law = PressureLaw::Custom {
            name: name.into(),
            p: Arc::new(p),
            dp: Arc::new(dp),
            d2p: Arc::new(d2p),
        };
        let (d1, d2) = (law.d1(), law.d2());
        if !(d1.is_finite() && d1 < 0.0) {
            return Err(Error::InvalidPressureLaw(format!(
                "p'(1) must be negative, got {d1}"
            )));
        }
        if !(d2.is_finite() && d2 != 0.0) {
            return Err(Error::InvalidPressureLaw(format!(
                "p''(1) must be nonzero, got {d2}"
            )));
        }
        Ok(law)
    }

    pub fn p(&self, v: f64) -> f64 {
        match self {
            PressureLaw::Gamma { gamma } => v.powf(-gamma),
            PressureLaw::Custom { p, .. } => p(v),
        }
    }

    pub fn dp(&self, v: f64) -> f64 {
        match self {
            PressureLaw::Gamma { gamma } => -gamma * v.powf(-gamma - 1.0),
            PressureLaw::Custom { dp, .. } => dp(v),
        }
    }

    pub fn d2p(&self, v: f64) -> f64 {
        match self {
            PressureLaw::Gamma { gamma } => gamma * (gamma + 1.0) * v.powf(-gamma - 2.0),
            PressureLaw::Custom { d2p, .. } => d2p(v),
        }
    }

    /// `p'(1)`.
    pub fn d1(&self) -> f64 {
        match self {
            PressureLaw::Gamma { gamma } => -gamma,
            _ => self.dp(1.0),
        }
    }

    /// `p''(1)`.
    pub fn d2(&self) -> f64 {
        match self {
            PressureLaw::Gamma { gamma } => gamma * (gamma + 1.0),
            _ => self.d2p(1.0),
        }
    }

    /// Mean of `p(1 + tau)` over the segment `[a, b]` in `tau`, i.e. the
    /// discrete gradient of `int p(1 + s) ds`. Five-point Gauss-Legendre.
    pub fn segment_mean(&self, a: f64, b: f64) -> f64 {
        let d = b - a;
        GL5.iter()
            .map(|&(s, w)| w * self.p(1.0 + a + s * d))
            .sum()
    }

    /// Derivative of [`segment_mean`](Self::segment_mean) with respect to `b`.
    pub fn segment_mean_db(&self, a: f64, b: f64) -> f64 {
        let d = b - a;
        GL5.iter()
            .map(|&(s, w)| w * s * self.dp(1.0 + a + s * d))
            .sum()
    }

    /// Potential `P(tau) = -int_0^tau (p(1 + s) - p(1)) ds >= 0`.
    pub fn potential(&self, tau: f64) -> f64 {
        -tau * (self.segment_mean(0.0, tau) - self.p(1.0))
    }
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
const GL5: [(f64, f64); 5] = [
    (0.046_910_077_030_668_004, 0.118_463_442_528_094_54),
    (0.230_765_344_947_158_45, 0.239_314_335_249_683_23),
    (0.5, 0.284_444_444_444_444_44),
    (0.769_234_655_052_841_6, 0.239_314_335_249_683_23),
    (0.953_089_922_969_332, 0.118_463_442_528_094_54),
];

/// Sound speed `c = sqrt(-p'(1))`.
pub fn sound_speed(law: &PressureLaw) -> Result<f64> {
    let d1 = law.d1();
    if !(d1 < 0.0) {
        return Err(Error::InvalidPressureLaw(format!(
            "p'(1) must be negative, got {d1}"
        )));
    }
    Ok((-d1).sqrt())
}

/// Characteristic data of the linearized system.
#[derive(Debug, Clone, PartialEq)]
pub struct CharSystem {
    pub c: f64,
    pub nu: f64,
    /// `p''(1)`, the genuine-nonlinearity coefficient.
    pub d2: f64,
    pub lambda: [f64; 2],
    pub r: [Vector2<f64>; 2],
    pub l: [RowVector2<f64>; 2],
}

/// Builds the eigensystem `lambda = (c, -c)` with right eigenvectors
/// `r_i = (2c / p''(1)) (-+1, c)` and left eigenvectors
/// `l_i = (p''(1) / 4c) (-+1, 1/c)`.
pub fn eigensystem(law: &PressureLaw, nu: f64) -> Result<CharSystem> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::param("nu", format!("must be positive, got {nu}")));
    }
    let c = sound_speed(law)?;
    let d2 = law.d2();
    if !(d2.is_finite() && d2 != 0.0) {
        return Err(Error::InvalidPressureLaw(format!(
            "p''(1) must be nonzero, got {d2}"
        )));
    }
    let rs = 2.0 * c / d2;
    let ls = d2 / (4.0 * c);
    Ok(CharSystem {
        c,
        nu,
        d2,
        lambda: [c, -c],
        r: [Vector2::new(-rs, rs * c), Vector2::new(rs, rs * c)],
        l: [
            RowVector2::new(-ls, ls / c),
            RowVector2::new(ls, ls / c),
        ],
    })
}

impl CharSystem {
    pub fn a_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(0.0, -1.0, -self.c * self.c, 0.0)
    }

    pub fn b_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(0.0, 0.0, 0.0, self.nu)
    }

    /// `l_i . (tau, u)`.
    #[inline]
    pub fn project(&self, i: usize, tau: f64, u: f64) -> f64 {
        self.l[i][0] * tau + self.l[i][1] * u
    }

    /// `u_1 r_1 + u_2 r_2`.
    #[inline]
    pub fn reconstruct(&self, u1: f64, u2: f64) -> (f64, f64) {
        let v = self.r[0] * u1 + self.r[1] * u2;
        (v[0], v[1])
    }

    /// The opposite branch index `i' = 1 - i` (zero-based).
    #[inline]
    pub fn other(i: usize) -> usize {
        1 - i
    }
}

/// Which half-line a sample belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    /// `-1` for the left half-line, `+1` for the right.
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }
}

/// Samples of a function on `R \ {0}` on the uniform grid `x = +-j h`,
/// `j = 0..=n`. Index 0 holds the one-sided limits at `-0` and `+0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSidedField {
    pub h: f64,
    /// `left[j] = f(-j h)`.
    pub left: Vec<f64>,
    /// `right[j] = f(+j h)`.
    pub right: Vec<f64>,
}

impl TwoSidedField {
    pub fn new(h: f64, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::param("h", format!("must be positive, got {h}")));
        }
        if left.len() != right.len() || left.len() < 2 {
            return Err(Error::GridMismatch(format!(
                "half-line lengths {} and {} (need equal, >= 2)",
                left.len(),
                right.len()
            )));
        }
        Ok(Self { h, left, right })
    }

    /// Samples `f(side, x)` at `x = +-j h`, `j = 0..=n`.
    pub fn sample(h: f64, n: usize, f: impl Fn(Side, f64) -> f64) -> Self {
        let left = (0..=n).map(|j| f(Side::Left, -(j as f64) * h)).collect();
        let right = (0..=n).map(|j| f(Side::Right, j as f64 * h)).collect();
        Self { h, left, right }
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            h: self.h,
            left: vec![0.0; self.left.len()],
            right: vec![0.0; self.right.len()],
        }
    }

    /// Number of intervals per half-line.
    pub fn n(&self) -> usize {
        self.right.len() - 1
    }

    pub fn half(&self, side: Side) -> &[f64] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// `(side, x, value)` triples in increasing `x`, interface twice.
    pub fn iter(&self) -> impl Iterator<Item = (Side, f64, f64)> + '_ {
        let h = self.h;
        let left = self
            .left
            .iter()
            .enumerate()
            .rev()
            .map(move |(j, &v)| (Side::Left, -(j as f64) * h, v));
        let right = self
            .right
            .iter()
            .enumerate()
            .map(move |(j, &v)| (Side::Right, j as f64 * h, v));
        left.chain(right)
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.left.len() != other.left.len()
            || self.right.len() != other.right.len()
            || (self.h - other.h).abs() > 1e-14 * self.h
        {
            return Err(Error::GridMismatch(format!(
                "(h = {}, n = {}) vs (h = {}, n = {})",
                self.h,
                self.n(),
                other.h,
                other.n()
            )));
        }
        Ok(())
    }

    pub fn check_finite(&self, what: &str) -> Result<()> {
        for (side, x, v) in self.iter() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    location: format!("{what} at x = {x} ({side:?})"),
                });
            }
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            h: self.h,
            left: self.left.iter().map(|&v| f(v)).collect(),
            right: self.right.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            h: self.h,
            left: self.left.iter().zip(&other.left).map(|(&a, &b)| f(a, b)).collect(),
            right: self
                .right
                .iter()
                .zip(&other.right)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn sup_abs(&self) -> f64 {
        self.left
            .iter()
            .chain(&self.right)
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Integral over the whole line, Simpson on each half-line.
    pub fn integral(&self) -> f64 {
        simpson(&self.left, self.h) + simpson(&self.right, self.h)
    }
}

/// Composite Simpson on uniform samples `f[0..=n]`; a 3/8 panel absorbs an
/// odd interval count, trapezoid for `n == 1`.
pub fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len().saturating_sub(1);
    match n {
        0 => 0.0,
        1 => 0.5 * h * (f[0] + f[1]),
        2 => h / 3.0 * (f[0] + 4.0 * f[1] + f[2]),
        _ => {
            let (even_end, tail) = if n % 2 == 0 { (n, 0.0) } else { (n - 3, 0.0) };
            let mut s = tail;
            if even_end > 0 {
                let mut acc = f[0] + f[even_end];
                for (j, v) in f.iter().enumerate().take(even_end).skip(1) {
                    acc += if j % 2 == 1 { 4.0 * v } else { 2.0 * v };
                }
                s += h / 3.0 * acc;
            }
            if n % 2 == 1 {
                let k = n - 3;
                s += 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
            }
            s
        }
    }
}

/// Diagonal variables `u_i = l_i (tau, u)^T`.
pub fn diagonal_components(
    tau: &TwoSidedField,
    u: &TwoSidedField,
    cs: &CharSystem,
) -> Result<(TwoSidedField, TwoSidedField)> {
    let u1 = tau.zip_map(u, |t, v| cs.project(0, t, v))?;
    let u2 = tau.zip_map(u, |t, v| cs.project(1, t, v))?;
    Ok((u1, u2))
}

/// Inverse of [`diagonal_components`]: `(tau, u) = u_1 r_1 + u_2 r_2`.
pub fn reconstruct(
    u1: &TwoSidedField,
    u2: &TwoSidedField,
    cs: &CharSystem,
) -> Result<(TwoSidedField, TwoSidedField)> {
    let tau = u1.zip_map(u2, |a, b| cs.reconstruct(a, b).0)?;
    let u = u1.zip_map(u2, |a, b| cs.reconstruct(a, b).1)?;
    Ok((tau, u))
}

/// Masses of the two diffusion waves.
#[derive(Debug, Clone, PartialEq)]
pub struct Masses {
    /// `m_i = int l_i (tau_0, u_0)^T dx`.
    pub m: [f64; 2],
    /// `l_i (0, V_0)^T`, stored per branch.
    pub mv: [f64; 2],
    /// Largest endpoint magnitude of the data; above `1e-8` the truncated
    /// quadrature may miss mass.
    pub endpoint_magnitude: f64,
}

impl Masses {
    pub fn total(&self, i: usize) -> f64 {
        self.m[i] + self.mv[i]
    }

    pub fn tail_warning(&self) -> bool {
        self.endpoint_magnitude > 1e-8
    }
}

pub fn masses(
    tau0: &TwoSidedField,
    u0: &TwoSidedField,
    v0: f64,
    cs: &CharSystem,
) -> Result<Masses> {
    tau0.check_finite("tau0")?;
    u0.check_finite("u0")?;
    if !v0.is_finite() {
        return Err(Error::NonFinite {
            location: "V0".into(),
        });
    }
    let (u1, u2) = diagonal_components(tau0, u0, cs)?;
    let n = tau0.n();
    let endpoint_magnitude = [
        tau0.left[n],
        tau0.right[n],
        u0.left[n],
        u0.right[n],
    ]
    .iter()
    .fold(0.0_f64, |m, v| m.max(v.abs()));
    Ok(Masses {
        m: [u1.integral(), u2.integral()],
        mv: [cs.project(0, 0.0, v0), cs.project(1, 0.0, v0)],
        endpoint_magnitude,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_law_derivatives_are_exact() {
        let law = PressureLaw::gamma(1.4).unwrap();
        assert_eq!(law.d1(), -1.4);
        assert!((law.d2() - 1.4 * 2.4).abs() < 1e-15);
        assert!((law.dp(1.0) - law.d1()).abs() < 1e-15);
        assert!((law.d2p(1.0) - law.d2()).abs() < 1e-14);
    }

    #[test]
    fn sound_speed_examples() {
        let law = PressureLaw::gamma(1.4).unwrap();
        assert!((sound_speed(&law).unwrap() - 1.183_215_956_619_923_2).abs() < 1e-12);
        assert!(PressureLaw::gamma(1.0).is_err());
        let user = PressureLaw::custom("quad", |v| 5.0 - 4.0 * v + 0.5 * v * v, |v| -4.0 + v, |_| 1.0);
        // p'(1) = -3 here; build one with p'(1) = -4 explicitly
        assert!(user.is_ok());
        let user = PressureLaw::custom("lin", |v| 1.0 - 4.0 * (v - 1.0) + (v - 1.0).powi(2), |v| -4.0 + 2.0 * (v - 1.0), |_| 2.0).unwrap();
        assert_eq!(sound_speed(&user).unwrap(), 2.0);
    }

    #[test]
    fn custom_law_rejects_bad_signs() {
        assert!(PressureLaw::custom("rising", |v| v, |_| 1.0, |_| 1.0).is_err());
        assert!(PressureLaw::custom("linear", |v| 2.0 - v, |_| -1.0, |_| 0.0).is_err());
    }

    #[test]
    fn eigensystem_matches_closed_form() {
        let law = PressureLaw::gamma(1.4).unwrap();
        let cs = eigensystem(&law, 1.0).unwrap();
        let c = cs.c;
        let k = 2.0 * c / 3.36;
        assert!((cs.r[0] - Vector2::new(-k, k * c)).norm() < 1e-15);
        for i in 0..2 {
            for j in 0..2 {
                let d = (cs.l[i] * cs.r[j])[0];
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((d - expect).abs() < 1e-14);
            }
        }
        let a = cs.a_matrix();
        for i in 0..2 {
            assert!((a * cs.r[i] - cs.r[i] * cs.lambda[i]).norm() < 1e-14);
        }
        assert!(eigensystem(&law, 0.0).is_err());
    }

    #[test]
    fn particle_mass_for_unit_velocity() {
        let law = PressureLaw::gamma(1.4).unwrap();
        let cs = eigensystem(&law, 1.0).unwrap();
        let zero = TwoSidedField::sample(0.1, 100, |_, _| 0.0);
        let m = masses(&zero, &zero, 1.0, &cs).unwrap();
        assert!((m.mv[0] - 0.6).abs() < 1e-14);
        assert!((m.mv[1] - 0.6).abs() < 1e-14);
        assert_eq!(m.m, [0.0, 0.0]);
    }

    #[test]
    fn zero_data_has_zero_masses() {
        let law = PressureLaw::gamma(1.4).unwrap();
        let cs = eigensystem(&law, 1.0).unwrap();
        let zero = TwoSidedField::sample(0.1, 10, |_, _| 0.0);
        let m = masses(&zero, &zero, 0.0, &cs).unwrap();
        assert_eq!(m.total(0), 0.0);
        assert_eq!(m.total(1), 0.0);
    }

    #[test]
    fn simpson_handles_odd_counts() {
        // cubic integrated exactly by both Simpson and 3/8
        let h = 0.1;
        for n in 1..12 {
            let f: Vec<f64> = (0..=n).map(|j| (j as f64 * h).powi(3)).collect();
            let exact = (n as f64 * h).powi(4) / 4.0;
            let tol = if n == 1 { 1e-3 } else { 1e-13 };
            assert!((simpson(&f, h) - exact).abs() < tol, "n = {n}");
        }
    }

    #[test]
    fn non_finite_samples_are_rejected() {
        let law = PressureLaw::gamma(1.4).unwrap();
        let cs = eigensystem(&law, 1.0).unwrap();
        let mut bad = TwoSidedField::sample(0.1, 10, |_, _| 0.0);
        bad.right[3] = f64::NAN;
        let ok = bad.zeros_like();
        assert!(matches!(masses(&bad, &ok, 0.0, &cs), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let law = PressureLaw::gamma(1.4).unwrap();
        let cs = eigensystem(&law, 1.0).unwrap();
        let a = TwoSidedField::sample(0.1, 10, |_, _| 0.0);
        let b = TwoSidedField::sample(0.1, 12, |_, _| 0.0);
        assert!(matches!(diagonal_components(&a, &b, &cs), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn potential_is_nonnegative_and_quadratic() {
        let law = PressureLaw::gamma(1.4).unwrap();
        for &t in &[-0.05, -0.01, 0.0, 0.01, 0.05] {
            let p = law.potential(t);
            assert!(p >= 0.0);
            // P(tau) ~ c^2 tau^2 / 2
            if t != 0.0 {
                assert!((p / (0.7 * t * t) - 1.0).abs() < 0.2);
            }
        }
        // gamma-law closed form: P = -[((1+t)^(1-g) - 1)/(1-g) - t]
        let g: f64 = 1.4;
        let t: f64 = 0.1;
        let exact = -(((1.0 + t).powf(1.0 - g) - 1.0) / (1.0 - g) - t);
        assert!((law.potential(t) - exact).abs() < 1e-12);
    }
}
