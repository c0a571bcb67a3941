//! Weight functions of the pointwise estimates and the Gaussian envelopes
//! `Theta_alpha`, `psi_alpha` used by the convolution lemmas.

use crate::model::CharSystem;

/// `psi_alpha(x, t; lambda) = [(x - lambda (t + 1))^2 + (t + 1)]^{-alpha/2}`.
pub fn psi_alpha(x: f64, t: f64, lambda: f64, alpha: f64) -> f64 {
    let tt = t + 1.0;
    let d = x - lambda * tt;
    (d * d + tt).powf(-0.5 * alpha)
}

/// `psi_{3/2}`.
pub fn psi32(x: f64, t: f64, lambda: f64) -> f64 {
    psi_alpha(x, t, lambda, 1.5)
}

/// `psi~(x, t; lambda) = [|x - lambda (t + 1)|^3 + (t + 1)^2]^{-1/2}`.
pub fn psi_tilde(x: f64, t: f64, lambda: f64) -> f64 {
    let tt = t + 1.0;
    let d = (x - lambda * tt).abs();
    (d * d * d + tt * tt).powf(-0.5)
}

/// `Theta_alpha(x, t; lambda, mu) = (t + 1)^{-alpha/2} e^{-(x - lambda (t + 1))^2 / (mu (t + 1))}`.
pub fn theta_alpha(x: f64, t: f64, alpha: f64, lambda: f64, mu: f64) -> f64 {
    let tt = t + 1.0;
    let d = x - lambda * tt;
    tt.powf(-0.5 * alpha) * (-d * d / (mu * tt)).exp()
}

/// All weights at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightEval {
    /// `psi_{3/2}(x, t; lambda_i)`, `i = 1, 2`.
    pub psi32: [f64; 2],
    /// `psi~(x, t; lambda_i)`.
    pub psi_tilde: [f64; 2],
    /// `Psi_i = psi_{3/2}(.; lambda_i) + psi~(.; lambda_i')`.
    pub big_psi: [f64; 2],
}

pub fn weights(x: f64, t: f64, cs: &CharSystem) -> WeightEval {
    let psi32 = [psi32(x, t, cs.lambda[0]), psi32(x, t, cs.lambda[1])];
    let psi_tilde = [psi_tilde(x, t, cs.lambda[0]), psi_tilde(x, t, cs.lambda[1])];
    WeightEval {
        psi32,
        psi_tilde,
        big_psi: [psi32[0] + psi_tilde[1], psi32[1] + psi_tilde[0]],
    }
}

/// `Psi_i(x, t)` for zero-based branch `i`.
pub fn big_psi(i: usize, x: f64, t: f64, cs: &CharSystem) -> f64 {
    weights(x, t, cs).big_psi[i]
}
