//! Numerical sampling of the space-time convolution inequalities used to
//! close the pointwise estimates. Each left-hand side is evaluated by nested
//! adaptive quadrature and divided by the lemma's right-hand side; the
//! supremum over a sample grid is the fitted constant.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::selfsim::DiffusionWave;
use crate::specialfns::{integrate_breaks, QuadOptions};

use super::weights::{psi32, psi_alpha, theta_alpha};

/// Which inequality to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lemma {
    /// Same-speed Gaussian source, split at `s = t/2`.
    B2,
    /// Gaussian source on a different characteristic.
    B3,
    /// Derivative kernel against `h = theta_j^2`.
    B4,
    /// Same-speed `psi_{3/2}` source.
    B5,
    /// `psi_{3/2}` source on a different characteristic.
    B6,
    /// Exponentially damped time convolution of `psi_{3/2}`.
    B7,
}

impl Lemma {
    pub const ALL: [Lemma; 6] = [Lemma::B2, Lemma::B3, Lemma::B4, Lemma::B5, Lemma::B6, Lemma::B7];

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "B2" => Some(Self::B2),
            "B3" => Some(Self::B3),
            "B4" => Some(Self::B4),
            "B5" => Some(Self::B5),
            "B6" => Some(Self::B6),
            "B7" => Some(Self::B7),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::B2 => "B2",
            Self::B3 => "B3",
            Self::B4 => "B4",
            Self::B5 => "B5",
            Self::B6 => "B6",
            Self::B7 => "B7",
        }
    }
}

/// Time sub-range of the `s` integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimePart {
    /// `s in [0, t/2]`.
    Early,
    /// `s in [t/2, t]`.
    Late,
    Full,
}

/// Parameters shared by the lemmas; unused fields are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaParams {
    pub alpha: f64,
    pub beta: f64,
    /// Kernel speed.
    pub lambda: f64,
    /// Source speed for the two-speed lemmas.
    pub lambda_prime: f64,
    /// Kernel Gaussian parameter.
    pub mu: f64,
    /// Widening `epsilon` of the right-hand Gaussians.
    pub eps: f64,
    /// Cut-off `K` of the indicator `chi_K`.
    pub k_cut: f64,
    /// Gaussian parameter of the `Theta_{min(alpha, 2)}` term in B4 (`nu*`).
    pub nu_star: f64,
    /// Multiply by the `log` factor where the lemma has one.
    pub log_correction: bool,
    /// B2 only: which half of the time integral.
    pub part: TimePart,
    /// B4 only: the wave whose square is the source.
    pub wave: Option<DiffusionWave>,
}

impl LemmaParams {
    /// Defaults for speed `c` and viscosity `nu`: `lambda = c`, `lambda' = -c`,
    /// `mu = 2 nu`, `K = 4c`, `nu* = 8 nu`.
    pub fn defaults(c: f64, nu: f64) -> Self {
        Self {
            alpha: 0.0,
            beta: 2.0,
            lambda: c,
            lambda_prime: -c,
            mu: 2.0 * nu,
            eps: 0.25 * nu,
            k_cut: 4.0 * c,
            nu_star: 8.0 * nu,
            log_correction: true,
            part: TimePart::Early,
            wave: None,
        }
    }

    fn check(&self, lemma: Lemma) -> Result<()> {
        let bad = |name: &'static str, why: &str| Err(Error::param(name, why.to_string()));
        if !(self.mu > 0.0) {
            return bad("mu", "must be positive");
        }
        if !(self.alpha >= 0.0) {
            return bad("alpha", "must be nonnegative");
        }
        let dl = (self.lambda - self.lambda_prime).abs();
        match lemma {
            Lemma::B2 if !(self.beta > 0.0) => bad("beta", "B2 needs beta > 0"),
            Lemma::B3 if !(self.beta >= 1.0) => bad("beta", "B3 needs beta >= 1"),
            Lemma::B3 | Lemma::B4 if dl == 0.0 => bad("lambda_prime", "needs a second speed"),
            Lemma::B3 | Lemma::B4 if self.k_cut < dl => bad("k_cut", "needs K >= |lambda - lambda'|"),
            Lemma::B4 if self.wave.is_none() => bad("wave", "B4 needs the source wave"),
            Lemma::B4 if self.lambda == 0.0 || self.lambda_prime == 0.0 => bad("lambda", "B4 needs nonzero speeds"),
            Lemma::B5 | Lemma::B6 if !(self.beta >= 0.0) => bad("beta", "must be nonnegative"),
            Lemma::B6 if dl == 0.0 => bad("lambda_prime", "needs a second speed"),
            Lemma::B6 if !(self.k_cut > 2.0 * dl) => bad("k_cut", "B6 needs K > 2|lambda - lambda'|"),
            _ => Ok(()),
        }
    }
}

/// Sample points in the `(x, t)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleGrid {
    pub t_range: (f64, f64),
    pub nt: usize,
    /// `x = x_speed (t + 1) + xi sqrt(t + 1)` for `xi` in `xi_range` when
    /// `diffusive`, else `x = zeta (t + 1)` for `zeta` in `xi_range`.
    pub xi_range: (f64, f64),
    pub nx: usize,
    pub x_speed: f64,
    pub diffusive: bool,
}

impl SampleGrid {
    pub fn points(&self) -> Vec<(f64, f64)> {
        let (t0, t1) = self.t_range;
        let (a, b) = self.xi_range;
        let mut out = Vec::with_capacity(self.nx * self.nt);
        for j in 0..self.nt {
            let f = if self.nt == 1 { 0.0 } else { j as f64 / (self.nt - 1) as f64 };
            let t = (t0 + 1.0) * ((t1 + 1.0) / (t0 + 1.0)).powf(f) - 1.0;
            let tt = t + 1.0;
            for k in 0..self.nx {
                let g = if self.nx == 1 { 0.5 } else { k as f64 / (self.nx - 1) as f64 };
                let xi = a + (b - a) * g;
                let x = if self.diffusive {
                    self.x_speed * tt + xi * tt.sqrt()
                } else {
                    xi * tt
                };
                out.push((x, t));
            }
        }
        out
    }

    /// Same ranges with every spacing halved.
    pub fn doubled(&self) -> Self {
        Self {
            nt: 2 * self.nt - 1,
            nx: 2 * self.nx - 1,
            ..*self
        }
    }
}

/// `chi_K(x, t; lambda, lambda')`.
pub fn chi_k(x: f64, t: f64, lambda: f64, lambda_prime: f64, k: f64) -> bool {
    let tt = t + 1.0;
    let lo = lambda.min(lambda_prime) * tt + k * tt.sqrt();
    let hi = lambda.max(lambda_prime) * tt - k * tt.sqrt();
    lo <= x && x <= hi
}

fn is_one(a: f64) -> bool {
    (a - 1.0).abs() < 1e-12
}

/// Right-hand side of the chosen inequality without its constant.
pub fn rhs(lemma: Lemma, p: &LemmaParams, x: f64, t: f64) -> f64 {
    let tt = t + 1.0;
    let (a, b, l, lp) = (p.alpha, p.beta, p.lambda, p.lambda_prime);
    let me = p.mu + p.eps;
    let log2 = if p.log_correction { (t + 2.0).ln() } else { 1.0 };
    let log1 = (t + 1.0).ln();
    let cross = |pa: f64, pb: f64| {
        if chi_k(x, t, l, lp, p.k_cut) {
            (x - l * tt).abs().powf(-pa) * (x - lp * tt).abs().powf(-pb)
        } else {
            0.0
        }
    };
    match lemma {
        Lemma::B2 => match p.part {
            TimePart::Early | TimePart::Full => {
                let g = a + b.min(3.0) - 1.0;
                let lg = if (b - 3.0).abs() < 1e-12 { log2 } else { 1.0 };
                theta_alpha(x, t, g, l, p.mu) * lg
            }
            TimePart::Late => {
                let g = a.min(1.0) + b - 1.0;
                let lg = if is_one(a) { log2 } else { 1.0 };
                theta_alpha(x, t, g, l, p.mu) * lg
            }
        },
        Lemma::B3 => {
            let g = a.min(1.0) + b.min(3.0) - 1.0;
            let mut r = theta_alpha(x, t, g, l, me) + theta_alpha(x, t, g, lp, me) + cross((b - 1.0) / 2.0, (a + 1.0) / 2.0);
            if p.log_correction && (b - 3.0).abs() < 1e-12 {
                r += theta_alpha(x, t, g, l, me) * log1;
            }
            if p.log_correction && is_one(a) {
                r += theta_alpha(x, t, g, lp, me) * log1;
            }
            r
        }
        Lemma::B4 => {
            // h = theta_j^2 is bounded by Theta_2, so alpha = 2 here
            let al = 2.0;
            psi_alpha(x, t, l, (al + 1.0) / 2.0)
                + theta_alpha(x, t, al.min(2.0), lp, p.nu_star)
                + cross(al / 2.0, 0.5)
        }
        Lemma::B5 => {
            let g = a.min(1.0) + b.min(1.5) - 1.0;
            let lg = if is_one(a) || (b - 1.5).abs() < 1e-12 { log2 } else { 1.0 };
            tt.powf(-g / 2.0) * lg * psi32(x, t, l)
        }
        Lemma::B6 => {
            let g = a.min(1.0) + b.min(1.5) - 1.0;
            let s = tt.powf(-g / 2.0);
            let mut r = s * (psi32(x, t, l) + psi32(x, t, lp)) + cross(b.min(2.5) / 2.0 + 0.25, a.min(1.0) / 2.0 + 0.5);
            if p.log_correction {
                if is_one(a) {
                    r += s * log1 * (psi32(x, t, l) + psi32(x, t, lp));
                } else if (b - 1.5).abs() < 1e-12 {
                    r += s * log1 * psi32(x, t, l);
                }
            }
            r
        }
        Lemma::B7 => tt.powf(-0.25) * psi32(x, t, l),
    }
}

/// Source term of the double-integral lemmas at `(y, s)`.
fn source(lemma: Lemma, p: &LemmaParams, y: f64, s: f64) -> f64 {
    match lemma {
        Lemma::B2 => theta_alpha(y, s, p.beta, p.lambda, p.mu),
        Lemma::B3 => theta_alpha(y, s, p.beta, p.lambda_prime, p.mu),
        Lemma::B5 => (s + 1.0).powf(-p.beta / 2.0) * psi32(y, s, p.lambda),
        Lemma::B6 => (s + 1.0).powf(-p.beta / 2.0) * psi32(y, s, p.lambda_prime),
        Lemma::B4 => {
            let w = p.wave.as_ref().expect("checked");
            let th = w.theta(y, s).unwrap_or(f64::NAN);
            th * th
        }
        Lemma::B7 => unreachable!(),
    }
}

/// Left-hand side at one point.
pub fn lhs(lemma: Lemma, p: &LemmaParams, x: f64, t: f64, scale: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::param("t", "samples need t > 0"));
    }
    let outer = QuadOptions::tol(1e-9 * scale, 1e-7);
    let inner = QuadOptions::tol(1e-12 * scale, 1e-9);
    if lemma == Lemma::B7 {
        let f = |s: f64| (-(t - s) / p.mu).exp() * (s + 1.0).powf(-0.25) * psi32(x, s, p.lambda);
        let pts: Vec<f64> = (0..=16).map(|k| t * k as f64 / 16.0).collect();
        return Ok(integrate_breaks(f, &pts, outer)?.value);
    }
    let (s0, s1) = match (lemma, p.part) {
        (Lemma::B2, TimePart::Early) => (0.0, 0.5 * t),
        (Lemma::B2, TimePart::Late) => (0.5 * t, t),
        _ => (0.0, t),
    };
    let sq = p.mu.sqrt();
    let zc_speed = match lemma {
        Lemma::B3 | Lemma::B6 | Lemma::B4 => p.lambda_prime,
        _ => p.lambda,
    };
    // s = t - r^2 removes the (t - s)^{-1/2} endpoint singularity
    let g = |r: f64| -> f64 {
        let s = t - r * r;
        let w = sq * r;
        let y0 = x - p.lambda * r * r;
        let zc = (zc_speed * (s + 1.0) - y0) / w.max(f64::MIN_POSITIVE);
        let mut pts = vec![-10.0, 10.0];
        if zc.abs() < 10.0 {
            pts.insert(1, zc);
        }
        let val = if lemma == Lemma::B4 {
            // the x-derivative of the kernel and ds = 2r dr leave 2 * 2z e^{-z^2}
            let f = |z: f64| 2.0 * z * (-z * z).exp() * source(lemma, p, y0 + w * z, s);
            integrate_breaks(f, &pts, inner).map(|q| 2.0 * q.value)
        } else {
            let f = |z: f64| (-z * z).exp() * source(lemma, p, y0 + w * z, s);
            integrate_breaks(f, &pts, inner).map(|q| 2.0 * sq * (r * r + 1.0).powf(-p.alpha / 2.0) * q.value)
        };
        val.unwrap_or(f64::NAN)
    };
    let (r0, r1) = ((t - s1).sqrt(), (t - s0).sqrt());
    let mut pts: Vec<f64> = (0..=32).map(|k| r0 + (r1 - r0) * k as f64 / 32.0).collect();
    // the kernel meets a second-speed source near s*
    if matches!(lemma, Lemma::B3 | Lemma::B4 | Lemma::B6) {
        let s_star = (x - p.lambda * t - p.lambda_prime) / (p.lambda_prime - p.lambda);
        if s_star > s0 && s_star < s1 {
            pts.push((t - s_star).sqrt());
            pts.sort_by(f64::total_cmp);
        }
    }
    let v = integrate_breaks(g, &pts, outer)?.value;
    if !v.is_finite() {
        return Err(Error::QuadratureFailure { a: s0, b: s1, estimate: f64::NAN });
    }
    Ok(v.abs())
}

/// Result of one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaSample {
    pub lemma: Lemma,
    /// `sup LHS / RHS` on the base grid.
    pub constant: f64,
    /// Same on the doubled grid.
    pub constant_fine: f64,
    /// `(x, t)` of the fine-grid supremum.
    pub argmax: (f64, f64),
    /// Samples skipped because the right-hand side underflowed.
    pub skipped: usize,
    /// Samples whose quadrature failed, with the error text.
    pub failures: Vec<((f64, f64), String)>,
}

impl LemmaSample {
    /// Relative change of the constant under doubling.
    pub fn drift(&self) -> f64 {
        (self.constant_fine - self.constant).abs() / self.constant.max(f64::MIN_POSITIVE)
    }

    pub fn stable(&self, tol: f64) -> bool {
        self.failures.is_empty() && self.constant.is_finite() && self.constant > 0.0 && self.drift() <= tol
    }
}

const RHS_FLOOR: f64 = 1e-250;

fn sweep(lemma: Lemma, p: &LemmaParams, pts: &[(f64, f64)]) -> (f64, (f64, f64), usize, Vec<((f64, f64), String)>) {
    let parts: Vec<_> = pts
        .par_iter()
        .map(|&(x, t)| {
            let r = rhs(lemma, p, x, t);
            if !(r > RHS_FLOOR) {
                return (None, None);
            }
            match lhs(lemma, p, x, t, r) {
                Ok(l) => (Some((l / r, (x, t))), None),
                Err(e) => (None, Some(((x, t), e.to_string()))),
            }
        })
        .collect();
    let mut best = (0.0, (f64::NAN, f64::NAN));
    let mut skipped = 0;
    let mut failures = Vec::new();
    for (ok, err) in parts {
        match (ok, err) {
            (Some((v, at)), _) if v > best.0 => best = (v, at),
            (Some(_), _) => {}
            (None, Some(e)) => failures.push(e),
            (None, None) => skipped += 1,
        }
    }
    (best.0, best.1, skipped, failures)
}

/// Fitted constant on `grid` and on its doubling.
pub fn convolution_lemma_sample(lemma: Lemma, p: &LemmaParams, grid: &SampleGrid) -> Result<LemmaSample> {
    p.check(lemma)?;
    if grid.nx == 0 || grid.nt == 0 {
        return Err(Error::Empty("sample grid"));
    }
    if !(grid.t_range.0 > 0.0 && grid.t_range.1 >= grid.t_range.0) {
        return Err(Error::param("t_range", "need 0 < t_lo <= t_hi"));
    }
    let (c0, _, _, _) = sweep(lemma, p, &grid.points());
    let (c1, argmax, skipped, failures) = sweep(lemma, p, &grid.doubled().points());
    Ok(LemmaSample {
        lemma,
        constant: c0,
        constant_fine: c1,
        argmax,
        skipped,
        failures,
    })
}

/// Positive control for a logarithmic factor: the constant against the
/// uncorrected right-hand side should grow when the time window is
/// extended, the corrected one should not.
#[derive(Debug, Clone, PartialEq)]
pub struct LogControl {
    pub corrected: (f64, f64),
    pub uncorrected: (f64, f64),
}

impl LogControl {
    pub fn corrected_growth(&self) -> f64 {
        self.corrected.1 / self.corrected.0
    }

    pub fn uncorrected_growth(&self) -> f64 {
        self.uncorrected.1 / self.uncorrected.0
    }

    /// Uncorrected grows by at least `grow`, corrected moves by at most `tol`.
    pub fn passes(&self, grow: f64, tol: f64) -> bool {
        self.uncorrected_growth() >= grow && (self.corrected_growth() - 1.0).abs() <= tol
    }
}

/// Compares constants on `grid` and on `grid` with `t_hi` multiplied by `extend`.
pub fn log_factor_control(lemma: Lemma, p: &LemmaParams, grid: &SampleGrid, extend: f64) -> Result<LogControl> {
    let long = SampleGrid {
        t_range: (grid.t_range.0, grid.t_range.1 * extend),
        ..*grid
    };
    let run = |corr: bool| -> Result<(f64, f64)> {
        let q = LemmaParams { log_correction: corr, ..p.clone() };
        q.check(lemma)?;
        let a = sweep(lemma, &q, &grid.points());
        let b = sweep(lemma, &q, &long.points());
        if let Some((at, e)) = a.3.first().or(b.3.first()) {
            return Err(Error::param("quadrature", format!("at {at:?}: {e}")));
        }
        Ok((a.0, b.0))
    };
    Ok(LogControl {
        corrected: run(true)?,
        uncorrected: run(false)?,
    })
}

/// Hypotheses of B4 for `h = theta_j^2`: returns the fitted constants of
/// `|h| <= C Theta_2(lambda', nu)` and
/// `|L h - d_x F_3| <= C Theta_4(lambda', nu + eps)` with
/// `L = d_t + lambda' d_x - (mu/4) d_xx` and `F_3 = -(2/3) theta^3`.
pub fn b4_hypotheses(p: &LemmaParams, pts: &[(f64, f64)]) -> Result<(f64, f64)> {
    let w = p.wave.as_ref().ok_or_else(|| Error::param("wave", "B4 needs the source wave"))?;
    let nu = w.nu;
    let mut c_h = 0.0_f64;
    let mut c_l = 0.0_f64;
    for &(x, t) in pts {
        let j = w.jet(x, t)?;
        let th_t = w.theta_t(x, t)?;
        let h = j.theta * j.theta;
        let h_t = 2.0 * j.theta * th_t;
        let h_x = 2.0 * j.theta * j.theta_x;
        let h_xx = 2.0 * (j.theta_x * j.theta_x + j.theta * j.theta_xx);
        let lh = h_t + w.lambda * h_x - 0.25 * p.mu * h_xx;
        let dxf = -2.0 * j.theta * j.theta * j.theta_x;
        let e2 = theta_alpha(x, t, 2.0, w.lambda, nu);
        let e4 = theta_alpha(x, t, 4.0, w.lambda, nu + p.eps);
        if e2 > RHS_FLOOR {
            c_h = c_h.max(h.abs() / e2);
        }
        if e4 > RHS_FLOOR {
            c_l = c_l.max((lh - dxf).abs() / e4);
        }
    }
    Ok((c_h, c_l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfns::integrate;
    use std::f64::consts::PI;

    const C: f64 = 1.183_215_956_619_923_2;

    fn grid(nx: usize, nt: usize, t: (f64, f64)) -> SampleGrid {
        SampleGrid {
            t_range: t,
            nt,
            xi_range: (-4.0, 4.0),
            nx,
            x_speed: C,
            diffusive: true,
        }
    }

    /// Inner Gaussian product in closed form for the same-speed source.
    fn b2_closed(p: &LemmaParams, x: f64, t: f64) -> f64 {
        let (s0, s1) = match p.part {
            TimePart::Early => (0.0, 0.5 * t),
            TimePart::Late => (0.5 * t, t),
            TimePart::Full => (0.0, t),
        };
        let tt = t + 1.0;
        let d = x - p.lambda * tt;
        let gauss = (-d * d / (p.mu * tt)).exp();
        // s = t - r^2
        let f = |r: f64| {
            let s = t - r * r;
            2.0 * (tt - s).powf(-p.alpha / 2.0) * (s + 1.0).powf(-p.beta / 2.0) * (PI * p.mu * (s + 1.0) / tt).sqrt()
        };
        gauss * integrate(f, (t - s1).sqrt(), (t - s0).sqrt(), QuadOptions::tol(0.0, 1e-11)).unwrap().value
    }

    #[test]
    fn nested_quadrature_matches_the_gaussian_product() {
        let mut p = LemmaParams::defaults(C, 1.0);
        for part in [TimePart::Early, TimePart::Late] {
            p.part = part;
            for &(x, t) in &[(2.0, 1.0), (10.0, 7.0), (-3.0, 4.0), (60.0, 50.0)] {
                let a = lhs(Lemma::B2, &p, x, t, rhs(Lemma::B2, &p, x, t)).unwrap();
                let b = b2_closed(&p, x, t);
                assert!((a - b).abs() <= 1e-6 * b, "{x} {t} {a} {b}");
            }
        }
    }

    #[test]
    fn b2_constant_is_stable_under_doubling() {
        let p = LemmaParams::defaults(C, 1.0);
        let s = convolution_lemma_sample(Lemma::B2, &p, &grid(20, 20, (1.0, 100.0))).unwrap();
        assert!(s.stable(0.1), "{s:?}");
    }

    #[test]
    fn log_factor_positive_control() {
        let p = LemmaParams { beta: 3.0, ..LemmaParams::defaults(C, 1.0) };
        let c = log_factor_control(Lemma::B2, &p, &grid(5, 12, (1.0, 100.0)), 10.0).unwrap();
        assert!(c.passes(1.2, 0.1), "{c:?}");
    }

    #[test]
    fn b7_constant_is_finite_and_stable() {
        let p = LemmaParams { mu: 1.0, ..LemmaParams::defaults(C, 1.0) };
        let g = SampleGrid { xi_range: (-2.0, 2.0), diffusive: false, ..grid(9, 9, (1.0, 200.0)) };
        let s = convolution_lemma_sample(Lemma::B7, &p, &g).unwrap();
        assert!(s.stable(0.1), "{s:?}");
    }

    #[test]
    fn chi_k_is_empty_when_k_is_large() {
        assert!(!chi_k(0.0, 1.0, C, -C, 10.0));
        assert!(chi_k(0.0, 100.0, C, -C, 4.0 * C));
    }

    #[test]
    fn parameter_ranges_are_enforced() {
        let g = grid(3, 3, (1.0, 10.0));
        let p = LemmaParams { beta: 0.5, ..LemmaParams::defaults(C, 1.0) };
        assert!(convolution_lemma_sample(Lemma::B3, &p, &g).is_err());
        let p = LemmaParams::defaults(C, 1.0);
        assert!(convolution_lemma_sample(Lemma::B4, &p, &g).is_err());
        let p = LemmaParams { k_cut: 1.0, ..LemmaParams::defaults(C, 1.0) };
        assert!(convolution_lemma_sample(Lemma::B6, &p, &g).is_err());
    }

    #[test]
    fn b4_hypotheses_hold_for_a_squared_wave() {
        let w = DiffusionWave::new(1, -C, 1.0, 0.2).unwrap();
        let p = LemmaParams { wave: Some(w), ..LemmaParams::defaults(C, 1.0) };
        let g = SampleGrid { x_speed: -C, ..grid(21, 15, (0.5, 500.0)) };
        let (a, b) = b4_hypotheses(&p, &g.points()).unwrap();
        let (a2, b2) = b4_hypotheses(&p, &g.doubled().points()).unwrap();
        assert!(a.is_finite() && b.is_finite());
        assert!((a2 / a - 1.0).abs() < 0.1 && (b2 / b - 1.0).abs() < 0.1, "{a} {a2} {b} {b2}");
    }

    #[test]
    fn every_lemma_yields_a_finite_constant() {
        let w = DiffusionWave::new(1, -C, 1.0, 0.2).unwrap();
        let base = LemmaParams { wave: Some(w), beta: 2.0, alpha: 0.5, k_cut: 5.0 * C, ..LemmaParams::defaults(C, 1.0) };
        let g = SampleGrid { xi_range: (-2.0 * C, 2.0 * C), diffusive: false, ..grid(5, 4, (1.0, 50.0)) };
        for lemma in Lemma::ALL {
            let s = convolution_lemma_sample(lemma, &base, &g).unwrap();
            assert!(s.failures.is_empty(), "{lemma:?} {:?}", s.failures);
            assert!(s.constant.is_finite() && s.constant > 0.0, "{lemma:?} {s:?}");
        }
    }
}
