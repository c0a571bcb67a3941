//! FFT tabulation of the fundamental solution at a fixed time, with the
//! transmission kernel built from it by a backward recursion.
//!
//! The symbol tends to `e^{-c^2 t/nu} Q0` at high frequency; that constant is
//! the delta part and is removed before inversion. The next terms of the
//! expansion decay like `1/xi` (off-diagonal) and `1/xi^2` (diagonal); they
//! are matched by Lorentzians `1/(xi^2 + a^2)` and `i xi/(xi^2 + a^2)` whose
//! inverses are added back in closed form, so only a remainder decaying like
//! `1/xi^3` goes through the FFT.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::symbol::symbol_entries;
use super::{mirror, Transmission};
use crate::error::{Error, Result};
use crate::model::CharSystem;

/// Lorentzian width of the analytic high-frequency match.
const LORENTZ_A: f64 = 1.0;
/// Largest FFT size a table may request.
const MAX_POINTS: usize = 1 << 22;

/// Resolution overrides; `None` picks the automatic value.
#[derive(Debug, Clone, Copy, Default)]
pub struct TableOptions {
    pub xi_max: Option<f64>,
    pub dx_max: Option<f64>,
    pub half_width: Option<f64>,
}

/// Gauss-Legendre rule on `[0, 1]`.
const GL5: [(f64, f64); 5] = [
    (0.046_910_077_030_668_004, 0.118_463_442_528_094_54),
    (0.230_765_344_947_158_45, 0.239_314_335_249_683_23),
    (0.5, 0.284_444_444_444_444_44),
    (0.769_234_655_052_841_6, 0.239_314_335_249_683_23),
    (0.953_089_922_969_332, 0.118_463_442_528_094_54),
];

/// Tabulated smooth part of `G(., t)` and `d_x G(., t)` on a uniform grid,
/// plus the transmission kernel and its derivative on `x >= 0`.
#[derive(Debug, Clone)]
pub struct GreenTable {
    pub t: f64,
    c: f64,
    nu: f64,
    tr: Transmission,
    /// Weight of the `delta(x) Q0` part, `e^{-c^2 t / nu}`.
    singular: f64,
    /// Lorentzian amplitudes for the four entries.
    amp: [f64; 4],
    dx: f64,
    n: usize,
    mid: usize,
    xi_max: f64,
    rem: Arc<[Vec<f64>; 4]>,
    drem: Arc<[Vec<f64>; 4]>,
    /// Remainder part of the transmitted kernel at `x_k >= 0`, index `k - mid`.
    trem: Arc<[Vec<f64>; 4]>,
    dtrem: Arc<[Vec<f64>; 4]>,
}

fn mat(v: [f64; 4]) -> Matrix2<f64> {
    Matrix2::new(v[0], v[1], v[2], v[3])
}

/// Six-point Lagrange weights for offset `u` measured from the first node.
fn lagrange6(u: f64) -> [f64; 6] {
    let mut w = [0.0; 6];
    for (j, wj) in w.iter_mut().enumerate() {
        let mut p = 1.0;
        for k in 0..6 {
            if k != j {
                p *= (u - k as f64) / (j as f64 - k as f64);
            }
        }
        *wj = p;
    }
    w
}

impl GreenTable {
    pub fn new(t: f64, cs: &CharSystem, tr: Transmission) -> Result<Self> {
        Self::with_options(t, cs, tr, TableOptions::default())
    }

    pub fn with_options(t: f64, cs: &CharSystem, tr: Transmission, opts: TableOptions) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::param("t", format!("must be positive, got {t}")));
        }
        let (c, nu, a) = (cs.c, cs.nu, LORENTZ_A);
        let singular = (-c * c * t / nu).exp();
        let xi_gauss = (2.0 * 37.0 / (nu * t)).sqrt();
        let tail = singular * (1.0 + c.powi(4) * t / nu.powi(3));
        let xi_tail = (2000.0 * (tail / 0.5).cbrt()).min(4000.0);
        let xi_req = match opts.xi_max {
            Some(x) if x < xi_gauss => {
                return Err(Error::AccuracyUnreachable(format!(
                    "frequency cutoff {x} below the Gaussian cutoff {xi_gauss:.3} at t = {t}"
                )))
            }
            Some(x) => x,
            None => xi_gauss.max(xi_tail),
        };
        let mut dx = (PI / xi_req).min((2.0 * nu * t).sqrt() / 40.0);
        if let Some(d) = opts.dx_max {
            dx = dx.min(d);
        }
        let half_width = opts
            .half_width
            .unwrap_or(c * t + 12.0 * (2.0 * nu * t).sqrt() + 40.0 / a);
        let need = (2.0 * half_width / dx).ceil() as usize;
        let n = need.max(64).next_power_of_two();
        if n > MAX_POINTS {
            return Err(Error::AccuracyUnreachable(format!(
                "t = {t} needs {n} FFT points (limit {MAX_POINTS})"
            )));
        }
        let e = singular;
        let amp = [
            e * (c * c / (nu * nu) - c.powi(4) * t / nu.powi(3)),
            e / nu,
            e * c * c / nu,
            -e * c * c / (nu * nu),
        ];

        let span = n as f64 * dx;
        let mut spec: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]; 8];
        for k in 0..n {
            if k == n / 2 {
                continue;
            }
            let kk = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
            let xi = 2.0 * PI * kk / span;
            let g = symbol_entries(xi, t, c, nu);
            let l = 1.0 / (xi * xi + a * a);
            let r = [
                Complex64::new(e + amp[0] * l, 0.0),
                Complex64::new(0.0, amp[1] * xi * l),
                Complex64::new(0.0, amp[2] * xi * l),
                Complex64::new(amp[3] * l, 0.0),
            ];
            for q in 0..4 {
                let rem = g[q] - r[q];
                spec[q][k] = rem;
                spec[4 + q][k] = rem * Complex64::new(0.0, xi);
            }
        }
        let mut planner = FftPlanner::<f64>::new();
        let ifft = planner.plan_fft_inverse(n);
        let scale = 1.0 / span;
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(8);
        for buf in spec.iter_mut() {
            ifft.process(buf);
            let mut sorted = vec![0.0; n];
            for (j, s) in sorted.iter_mut().enumerate() {
                *s = buf[(j + n / 2) % n].re * scale;
            }
            out.push(sorted);
        }
        let drem: [Vec<f64>; 4] = [
            out[4].clone(),
            out[5].clone(),
            out[6].clone(),
            out[7].clone(),
        ];
        out.truncate(4);
        let rem: [Vec<f64>; 4] = [out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()];

        let mut table = GreenTable {
            t,
            c,
            nu,
            tr,
            singular,
            amp,
            dx,
            n,
            mid: n / 2,
            xi_max: PI / dx,
            rem: Arc::new(rem),
            drem: Arc::new(drem),
            trem: Arc::new(Default::default()),
            dtrem: Arc::new(Default::default()),
        };
        table.build_transmission();
        Ok(table)
    }

    /// Backward recursion
    /// `I(x_k) = kappa int_{x_k}^{x_{k+1}} e^{kappa (x_k - y)} R(y) dy + e^{-kappa dx} I(x_{k+1})`.
    fn build_transmission(&mut self) {
        let kappa = self.tr.kappa();
        let len = self.n - self.mid;
        let decay = (-kappa * self.dx).exp();
        let mut trem: [Vec<f64>; 4] = Default::default();
        let mut dtrem: [Vec<f64>; 4] = Default::default();
        for q in 0..4 {
            for (src, dst) in [(&self.rem[q], &mut trem[q]), (&self.drem[q], &mut dtrem[q])] {
                let mut acc = vec![0.0; len];
                for k in (0..len - 1).rev() {
                    let x0 = k as f64 * self.dx;
                    let panel = self.panel(src, x0, x0 + self.dx, kappa);
                    acc[k] = panel + decay * acc[k + 1];
                }
                *dst = acc;
            }
        }
        self.trem = Arc::new(trem);
        self.dtrem = Arc::new(dtrem);
    }

    /// `kappa int_{x0}^{x1} e^{kappa (x0 - y)} R(y) dy` with `0 <= x0 < x1`.
    fn panel(&self, arr: &[f64], x0: f64, x1: f64, kappa: f64) -> f64 {
        let h = x1 - x0;
        let mut s = 0.0;
        for &(u, w) in &GL5 {
            let y = x0 + u * h;
            s += w * (-kappa * u * h).exp() * self.interp(arr, y, true);
        }
        kappa * h * s
    }

    /// One-sided six-point interpolation of a tabulated remainder.
    fn interp(&self, arr: &[f64], x: f64, right: bool) -> f64 {
        let p = x / self.dx;
        let last = (self.n - self.mid - 1) as f64;
        if p.abs() > last - 3.0 {
            return 0.0;
        }
        let i = self.mid as isize + p.floor() as isize;
        let s = if right {
            (i - 2).clamp(self.mid as isize, self.n as isize - 6)
        } else {
            (i - 2).clamp(0, self.mid as isize - 5)
        } as usize;
        let u = p - (s as f64 - self.mid as f64);
        let w = lagrange6(u);
        (0..6).map(|j| w[j] * arr[s + j]).sum()
    }

    fn check_x(x: f64) -> Result<()> {
        if x == 0.0 {
            return Err(Error::InterfaceEvaluation);
        }
        if !x.is_finite() {
            return Err(Error::param("x", "must be finite"));
        }
        Ok(())
    }

    fn analytic(&self, x: f64) -> [f64; 4] {
        let a = LORENTZ_A;
        let e = (-a * x.abs()).exp();
        let sg = x.signum();
        [
            self.amp[0] * e / (2.0 * a),
            -self.amp[1] * sg * e / 2.0,
            -self.amp[2] * sg * e / 2.0,
            self.amp[3] * e / (2.0 * a),
        ]
    }

    fn analytic_dx(&self, x: f64) -> [f64; 4] {
        let a = LORENTZ_A;
        let e = (-a * x.abs()).exp();
        let sg = x.signum();
        [
            -self.amp[0] * sg * e / 2.0,
            self.amp[1] * a * e / 2.0,
            self.amp[2] * a * e / 2.0,
            -self.amp[3] * sg * e / 2.0,
        ]
    }

    fn remainder(&self, tab: &[Vec<f64>; 4], x: f64) -> [f64; 4] {
        let right = x > 0.0;
        [
            self.interp(&tab[0], x, right),
            self.interp(&tab[1], x, right),
            self.interp(&tab[2], x, right),
            self.interp(&tab[3], x, right),
        ]
    }

    /// Smooth part of `G(x, t)`, `x != 0`.
    pub fn g_smooth(&self, x: f64) -> Result<Matrix2<f64>> {
        Self::check_x(x)?;
        Ok(mat(self.analytic(x)) + mat(self.remainder(&self.rem, x)))
    }

    /// Smooth part of `d_x G(x, t)`, `x != 0`.
    pub fn g_smooth_dx(&self, x: f64) -> Result<Matrix2<f64>> {
        Self::check_x(x)?;
        Ok(mat(self.analytic_dx(x)) + mat(self.remainder(&self.drem, x)))
    }

    fn transmitted_right(&self, tab: &[Vec<f64>; 4], src: &[Vec<f64>; 4], x: f64, derivative: bool) -> Matrix2<f64> {
        let kappa = self.tr.kappa();
        let lor = kappa / (kappa + LORENTZ_A);
        let an = if derivative { self.analytic_dx(x) } else { self.analytic(x) };
        let p = x / self.dx;
        let len = self.n - self.mid;
        let k = p.floor() as usize;
        let mut out = [0.0; 4];
        if k + 1 < len {
            let x1 = (k + 1) as f64 * self.dx;
            let decay = (-kappa * (x1 - x)).exp();
            for q in 0..4 {
                out[q] = self.panel(&src[q], x, x1, kappa) + decay * tab[q][k + 1];
            }
        }
        for q in 0..4 {
            out[q] += lor * an[q];
        }
        mat(out)
    }

    /// Transmission kernel `G_T(x, t)`, `x != 0`.
    pub fn g_transmitted(&self, x: f64) -> Result<Matrix2<f64>> {
        Self::check_x(x)?;
        let v = self.transmitted_right(&self.trem, &self.rem, x.abs(), false);
        Ok(if x > 0.0 { v } else { mirror(&v) })
    }

    /// `d_x G_T(x, t)` by differentiating under the convolution.
    pub fn g_transmitted_dx(&self, x: f64) -> Result<Matrix2<f64>> {
        Self::check_x(x)?;
        let v = self.transmitted_right(&self.dtrem, &self.drem, x.abs(), true);
        // d/dx [S M(-x) S] = -S M'(-x) S
        Ok(if x > 0.0 { v } else { -mirror(&v) })
    }

    /// Reflection kernel from its definition `(G - G_T) S`.
    pub fn g_reflected(&self, x: f64) -> Result<Matrix2<f64>> {
        Ok((self.g_smooth(x)? - self.g_transmitted(x)?) * super::s_matrix())
    }

    /// Reflection kernel from the transmission derivative,
    /// `-(1/kappa) d_x G_T S` on `x > 0`, mirrored on `x < 0`.
    pub fn g_reflected_via_derivative(&self, x: f64) -> Result<Matrix2<f64>> {
        let k = self.tr.kappa();
        let d = self.g_transmitted_dx(x)?;
        let sgn = x.signum();
        Ok(d * super::s_matrix() * (-sgn / k))
    }

    /// `d_x G_R` on `x != 0`, from `G_R = (G - G_T) S`.
    pub fn g_reflected_dx(&self, x: f64) -> Result<Matrix2<f64>> {
        Ok((self.g_smooth_dx(x)? - self.g_transmitted_dx(x)?) * super::s_matrix())
    }

    /// Adaptive quadrature of `kappa int_{-inf}^0 e^{kappa z} G(x - z) dz`
    /// against the tabulated smooth part; an independent check of the
    /// recursion.
    pub fn g_transmitted_adaptive(&self, x: f64) -> Result<Matrix2<f64>> {
        Self::check_x(x)?;
        let kappa = self.tr.kappa();
        let xa = x.abs();
        let zmin = -(45.0 / kappa).min(self.half_width());
        let mut out = [0.0; 4];
        let opts = crate::specialfns::QuadOptions::tol(1e-13, 1e-11);
        for (q, o) in out.iter_mut().enumerate() {
            let f = |z: f64| {
                let y = xa - z;
                let g = self.g_smooth(y).map(|m| m[(q / 2, q % 2)]).unwrap_or(0.0);
                kappa * (kappa * z).exp() * g
            };
            let mut pts = vec![zmin, 0.0];
            let peak = xa - self.c * self.t;
            if peak > zmin && peak < 0.0 {
                pts.insert(1, peak);
            }
            *o = crate::specialfns::integrate_breaks(f, &pts, opts)?.value;
        }
        let v = mat(out);
        Ok(if x > 0.0 { v } else { mirror(&v) })
    }

    pub fn singular_weight(&self) -> f64 {
        self.singular
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn xi_max(&self) -> f64 {
        self.xi_max
    }

    pub fn points(&self) -> usize {
        self.n
    }

    /// Largest `|x|` with tabulated data.
    pub fn half_width(&self) -> f64 {
        (self.n - self.mid - 4) as f64 * self.dx
    }

    pub fn transmission(&self) -> Transmission {
        self.tr
    }

    /// Rough size of the high-frequency truncation error of the smooth part.
    pub fn tail_error_estimate(&self) -> f64 {
        let c4 = self.c.powi(4);
        self.singular * (1.0 + c4 * self.t / self.nu.powi(3)) / (self.xi_max * self.xi_max)
    }
}
