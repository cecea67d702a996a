//! Special functions behind the analytic reference densities.
//!
//! The Meijer G evaluator follows the standard inverse-Mellin convention
//! with four parameter groups: numerator factors `Γ(c_j + s)` and
//! `Γ(1 − a_j − s)`, denominator factors `Γ(b_j + s)` and `Γ(1 − d_j − s)`,
//! against `z^{-s}`. The hard-edge kernel and Fuss-Catalan parameter lists
//! are calibrated so that the M = 1 cases reduce exactly to the Bessel
//! kernel and the Marčenko–Pastur law.

mod airy;
mod bessel;
mod gamma;
mod meijer;

pub use airy::airy_ai;
pub use bessel::{bessel_j0, bessel_j1};
pub use gamma::{digamma, gamma_fn, ln_gamma_complex, ln_gamma_real, polygamma};
pub use meijer::{meijer_g, meijer_g_contour, HardEdgeKernel, MeijerGParams, ResidueSeries};
