//! Special functions and quadrature.

pub mod ekernel;
pub mod erfc;
pub mod quad;

pub use ekernel::{check_lemma_a1, e_kernel, e_kernel_quadrature, envelope_branch, sample_grid, EnvelopeBranch, EnvelopeFit};
pub use erfc::{erf, erfc, erfcx};
pub use quad::{integrate, integrate_breaks, QuadOptions, QuadResult};
