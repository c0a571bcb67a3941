//! Fourier symbol `exp(t M(xi))` with `M(xi) = -i xi A - xi^2 B`.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::CharSystem;

/// Real coefficients `(C, S)` of `exp(tM) = C I + S (M - m I)`, `m = tr M / 2`.
///
/// With `D^2 = m^2 - c^2 xi^2`, `C = e^{tm} cosh(tD)` and
/// `S = e^{tm} sinh(tD) / D`; the real-`D` branch is evaluated through the
/// two eigenvalues, the slow one in cancellation-free form.
pub(crate) fn cs_coefficients(xi: f64, t: f64, c: f64, nu: f64) -> (f64, f64) {
    let m = -0.5 * nu * xi * xi;
    let d2 = m * m - c * c * xi * xi;
    if d2 < 0.0 {
        let w = (-d2).sqrt();
        let em = (t * m).exp();
        let tw = t * w;
        let s = if tw < 1e-3 {
            t * (1.0 - tw * tw / 6.0)
        } else {
            (tw).sin() / w
        };
        (em * tw.cos(), em * s)
    } else {
        let d = d2.sqrt();
        let td = t * d;
        if td < 1e-3 {
            let em = (t * m).exp();
            (em * td.cosh(), em * t * (1.0 + td * td / 6.0))
        } else {
            // m - d < 0 is the fast eigenvalue; the slow one is c^2 xi^2 / (m - d)
            let mu_f = m - d;
            let mu_s = c * c * xi * xi / mu_f;
            let es = (t * mu_s).exp();
            let ef = (t * mu_f).exp();
            (0.5 * (es + ef), 0.5 * (es - ef) / d)
        }
    }
}

/// `exp(t M(xi))` entries `[g11, g12, g21, g22]`; `g11, g22` are real and
/// `g12, g21` purely imaginary.
pub(crate) fn symbol_entries(xi: f64, t: f64, c: f64, nu: f64) -> [Complex64; 4] {
    let (cc, s) = cs_coefficients(xi, t, c, nu);
    let half = 0.5 * nu * xi * xi;
    [
        Complex64::new(cc + s * half, 0.0),
        Complex64::new(0.0, s * xi),
        Complex64::new(0.0, s * c * c * xi),
        Complex64::new(cc - s * half, 0.0),
    ]
}

/// Symbol sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolEval {
    pub xi: f64,
    pub t: f64,
    pub matrix: Matrix2<Complex64>,
}

pub fn symbol(xi: f64, t: f64, cs: &CharSystem) -> Result<SymbolEval> {
    if !(t >= 0.0) || !xi.is_finite() {
        return Err(Error::param("t", format!("need t >= 0 and finite xi, got t = {t}, xi = {xi}")));
    }
    let g = symbol_entries(xi, t, cs.c, cs.nu);
    Ok(SymbolEval {
        xi,
        t,
        matrix: Matrix2::new(g[0], g[1], g[2], g[3]),
    })
}

/// The generator `M(xi)`.
pub fn generator(xi: f64, cs: &CharSystem) -> Matrix2<Complex64> {
    let i = Complex64::i();
    Matrix2::new(
        Complex64::new(0.0, 0.0),
        i * xi,
        i * (cs.c * cs.c * xi),
        Complex64::new(-cs.nu * xi * xi, 0.0),
    )
}

/// Eigenvalues of `M(xi)`, slow one first.
pub fn generator_eigenvalues(xi: f64, cs: &CharSystem) -> [Complex64; 2] {
    let m = -0.5 * cs.nu * xi * xi;
    let d2 = m * m - cs.c * cs.c * xi * xi;
    if d2 < 0.0 {
        let w = (-d2).sqrt();
        [Complex64::new(m, w), Complex64::new(m, -w)]
    } else {
        let d = d2.sqrt();
        let f = m - d;
        let s = if f == 0.0 { 0.0 } else { cs.c * cs.c * xi * xi / f };
        [Complex64::new(s, 0.0), Complex64::new(f, 0.0)]
    }
}
