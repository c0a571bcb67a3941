//! Post-processing: weights, decay fits, bound ratios and the convolution
//! inequality sampler.

pub mod bound;
pub mod fit;
pub mod interface;
pub mod lemmas;
pub mod weights;

pub use bound::{bound_ratio, delta_surrogate, derivative4, h4_norm, waves_for, BoundRatio, DeltaSurrogate};
pub use fit::{fit_decay, fit_decay_with, DecayFit, FitOptions, FitVerdict};
pub use interface::{decay_report, interface_decay_check, DecayReport, InterfaceCheck, Verdict};
pub use lemmas::{
    b4_hypotheses, chi_k, convolution_lemma_sample, log_factor_control, Lemma, LemmaParams, LemmaSample, LogControl,
    SampleGrid, TimePart,
};
pub use weights::{big_psi, psi32, psi_alpha, psi_tilde, theta_alpha, weights, WeightEval};
