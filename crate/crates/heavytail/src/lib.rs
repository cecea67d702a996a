//! Monte Carlo laboratory and analytic reference library for heavy-tailed
//! unitarily invariant random matrix ensembles.
//!
//! The crate samples sums, products and direct sums of inverse complex
//! Ginibre matrices along with variance-averaged stable GUEs, turns the draws
//! into spectral statistics (macroscopic histograms, soft-edge and tail
//! windows, level spacings, unfolded spectra), and provides the analytic
//! reference curves those statistics converge to: Marčenko–Pastur laws, the
//! Airy soft-edge density, Bessel and Meijer-G hard-edge kernels,
//! Fuss-Catalan densities, Poisson and Wigner spacing laws, and the averaged
//! semicircle of the stable GUE.
//!
//! The experiment pipeline in [`experiment`] is deterministic: trial `t` of
//! an experiment draws from a stream derived from `(master_seed, experiment,
//! t)`, so outputs are byte-identical for any worker count.

pub mod densities;
pub mod ensembles;
pub mod error;
pub mod experiment;
pub mod freeprob;
pub mod linalg;
pub mod quad;
pub mod rng;
pub mod special;
pub mod stable;
pub mod stats;

pub use error::Error;
pub use linalg::{ComplexMatrix, Dense, StructureTag, C64};
