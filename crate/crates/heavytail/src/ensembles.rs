//! Random matrix draws: Ginibre, inverse Ginibre, product chains, rescaled
//! sums, direct sums, the GUE and the variance-averaged stable GUE.
//!
//! Every sampler is a pure function of (parameters, stream); the experiment
//! layer derives one stream per trial, so draws are reproducible regardless
//! of scheduling.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::Error;
use crate::linalg::{ComplexMatrix, Dense, C64};
use crate::rng::TrialRng;
use crate::stable::{sample_one_sided_stable, StableSpec};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Which ensemble a run draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    InverseGinibreSum,
    InverseGinibreDirectSum,
    Gue,
    StableGue,
}

/// Full description of one ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    /// matrix dimension N
    pub n: usize,
    /// product length M (inverse-Ginibre ensembles)
    pub m: usize,
    /// number of summands L (inverse-Ginibre ensembles)
    pub l: usize,
    /// stability exponent (stable GUE only)
    pub alpha: f64,
    /// standard deviation (GUE only)
    pub sigma: f64,
}

impl EnsembleSpec {
    pub fn inverse_ginibre_sum(n: usize, m: usize, l: usize) -> Self {
        EnsembleSpec {
            kind: EnsembleKind::InverseGinibreSum,
            n,
            m,
            l,
            alpha: 0.0,
            sigma: 0.0,
        }
    }

    pub fn inverse_ginibre_direct_sum(n: usize, m: usize, l: usize) -> Self {
        EnsembleSpec {
            kind: EnsembleKind::InverseGinibreDirectSum,
            n,
            m,
            l,
            alpha: 0.0,
            sigma: 0.0,
        }
    }

    pub fn gue(n: usize, sigma: f64) -> Self {
        EnsembleSpec {
            kind: EnsembleKind::Gue,
            n,
            m: 0,
            l: 0,
            alpha: 0.0,
            sigma,
        }
    }

    pub fn stable_gue(n: usize, alpha: f64) -> Self {
        EnsembleSpec {
            kind: EnsembleKind::StableGue,
            n,
            m: 0,
            l: 0,
            alpha,
            sigma: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.n == 0 {
            return Err(Error::InvalidConfig {
                detail: "dimension must be at least 1".into(),
            });
        }
        match self.kind {
            EnsembleKind::InverseGinibreSum | EnsembleKind::InverseGinibreDirectSum => {
                if self.m == 0 || self.l == 0 {
                    return Err(Error::InvalidConfig {
                        detail: "product length M and summand count L must be at least 1".into(),
                    });
                }
            }
            EnsembleKind::Gue => {
                if !(self.sigma > 0.0) {
                    return Err(Error::InvalidConfig {
                        detail: "GUE standard deviation must be positive".into(),
                    });
                }
            }
            EnsembleKind::StableGue => {
                if !(self.alpha > 0.0 && self.alpha < 2.0) {
                    return Err(Error::InvalidConfig {
                        detail: format!("stable exponent must lie in (0,2), got {}", self.alpha),
                    });
                }
            }
        }
        Ok(())
    }

    /// Stability exponent of the macroscopic law: α = 1/(M+1) for the
    /// inverse-Ginibre ensembles, the configured α for the stable GUE.
    pub fn implied_alpha(&self) -> f64 {
        match self.kind {
            EnsembleKind::InverseGinibreSum | EnsembleKind::InverseGinibreDirectSum => {
                1.0 / (self.m as f64 + 1.0)
            }
            EnsembleKind::Gue => 2.0,
            EnsembleKind::StableGue => self.alpha,
        }
    }

    /// Total number of eigenvalues per draw.
    pub fn spectrum_len(&self) -> usize {
        match self.kind {
            EnsembleKind::InverseGinibreDirectSum => self.n * self.l,
            _ => self.n,
        }
    }

    /// Compact tag used for cache headers and stream salts.
    pub fn label(&self) -> String {
        match self.kind {
            EnsembleKind::InverseGinibreSum => {
                format!("invgin-sum:n={},m={},l={}", self.n, self.m, self.l)
            }
            EnsembleKind::InverseGinibreDirectSum => {
                format!("invgin-direct:n={},m={},l={}", self.n, self.m, self.l)
            }
            EnsembleKind::Gue => format!("gue:n={},sigma={}", self.n, self.sigma),
            EnsembleKind::StableGue => format!("stable-gue:n={},alpha={}", self.n, self.alpha),
        }
    }
}

#[inline]
fn complex_gaussian(rng: &mut TrialRng) -> C64 {
    // (g1 + i g2)/√2 so that E|x|^2 = 1, matching the exp(-|x|^2)/π weight
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Complex Ginibre matrix: i.i.d. entries with E|x|^2 = 1.
pub fn sample_ginibre(n: usize, rng: &mut TrialRng) -> ComplexMatrix {
    ComplexMatrix::general(sample_ginibre_dense(n, rng))
}

fn sample_ginibre_dense(n: usize, rng: &mut TrialRng) -> Dense {
    let mut m = Dense::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, complex_gaussian(rng));
        }
    }
    m
}

/// Inverse of a Ginibre draw, resampling the probability-zero near-singular
/// rejections; also reports how many draws were rejected.
pub fn sample_inverse_ginibre_counted(n: usize, rng: &mut TrialRng) -> (ComplexMatrix, u64) {
    let (m, rejects) = sample_inverse_ginibre_dense(n, rng);
    (ComplexMatrix::general(m), rejects)
}

pub fn sample_inverse_ginibre(n: usize, rng: &mut TrialRng) -> ComplexMatrix {
    sample_inverse_ginibre_counted(n, rng).0
}

fn sample_inverse_ginibre_dense(n: usize, rng: &mut TrialRng) -> (Dense, u64) {
    let mut rejects = 0u64;
    loop {
        let g = sample_ginibre_dense(n, rng);
        match g.lu_inverse() {
            Ok((inv, _)) => return (inv, rejects),
            Err(Error::NearSingular { .. }) => rejects += 1,
            Err(e) => unreachable!("lu_inverse on a random draw: {e}"),
        }
    }
}

/// X^(M) = X_M X_{M-1} ... X_1 with independent inverse Ginibre factors.
fn sample_product_chain(n: usize, m: usize, rng: &mut TrialRng) -> (Dense, u64) {
    let (mut acc, mut rejects) = sample_inverse_ginibre_dense(n, rng);
    for _ in 1..m {
        let (next, r) = sample_inverse_ginibre_dense(n, rng);
        rejects += r;
        acc = next.mul(&acc);
    }
    (acc, rejects)
}

/// One Gram block (X^(M))† X^(M).
fn sample_gram_block(n: usize, m: usize, rng: &mut TrialRng) -> (Dense, u64) {
    let (chain, rejects) = sample_product_chain(n, m, rng);
    (chain.gram(), rejects)
}

/// Y_L^(M) = L^{-(M+1)} Σ_l (X_l^(M))† X_l^(M), Hermitian positive definite.
pub fn sample_sum_y(spec: &EnsembleSpec, rng: &mut TrialRng) -> Result<ComplexMatrix, Error> {
    spec.validate()?;
    let mut acc = Dense::zeros(spec.n);
    for _ in 0..spec.l {
        let (block, _) = sample_gram_block(spec.n, spec.m, rng);
        acc.add_assign(&block);
    }
    acc.scale((spec.l as f64).powi(-(spec.m as i32 + 1)));
    acc.symmetrize();
    Ok(ComplexMatrix::hermitian_positive_definite(acc))
}

/// Direct sum ⊕_l (X_l^(M))† X_l^(M); blocks kept unscaled.
pub fn sample_direct_sum(spec: &EnsembleSpec, rng: &mut TrialRng) -> Result<ComplexMatrix, Error> {
    spec.validate()?;
    let mut blocks = Vec::with_capacity(spec.l);
    for _ in 0..spec.l {
        let (mut block, _) = sample_gram_block(spec.n, spec.m, rng);
        block.symmetrize();
        blocks.push(block);
    }
    Ok(ComplexMatrix::block_diagonal(blocks))
}

/// GUE draw under the exp[-tr H²/(2σ²)] weight: real N(0, σ²) diagonal,
/// complex off-diagonals with E|h|² = σ².
pub fn sample_gue(n: usize, sigma: f64, rng: &mut TrialRng) -> ComplexMatrix {
    ComplexMatrix::hermitian(sample_gue_dense(n, sigma, rng))
}

fn sample_gue_dense(n: usize, sigma: f64, rng: &mut TrialRng) -> Dense {
    let mut m = Dense::zeros(n);
    for i in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        m.set(i, i, C64::new(sigma * d, 0.0));
        for j in i + 1..n {
            let h = complex_gaussian(rng) * sigma;
            m.set(i, j, h);
            m.set(j, i, h.conj());
        }
    }
    m
}

/// Stable GUE draw: √x · H with x one-sided stable of exponent α/2 and H a
/// unit GUE; the resulting matrix law is strictly stable with exponent α.
pub fn sample_stable_gue(n: usize, alpha: f64, rng: &mut TrialRng) -> Result<ComplexMatrix, Error> {
    let spec = StableSpec::new(alpha / 2.0)?;
    let x = sample_one_sided_stable(spec, rng);
    let mut h = sample_gue_dense(n, 1.0, rng);
    h.scale(x.sqrt());
    Ok(ComplexMatrix::hermitian(h))
}

/// Dispatch on the ensemble kind.
pub fn sample_matrix(spec: &EnsembleSpec, rng: &mut TrialRng) -> Result<ComplexMatrix, Error> {
    spec.validate()?;
    match spec.kind {
        EnsembleKind::InverseGinibreSum => sample_sum_y(spec, rng),
        EnsembleKind::InverseGinibreDirectSum => sample_direct_sum(spec, rng),
        EnsembleKind::Gue => Ok(sample_gue(spec.n, spec.sigma, rng)),
        EnsembleKind::StableGue => sample_stable_gue(spec.n, spec.alpha, rng),
    }
}
