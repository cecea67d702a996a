//! From matrix draws to statistics: eigenvalues, spectral-window transforms,
//! histograms, spacing series, cluster grouping, extreme positions and
//! Kolmogorov-Smirnov distances.

use serde::Serialize;

use crate::densities::UnfoldingMap;
use crate::ensembles::{EnsembleKind, EnsembleSpec};
use crate::error::Error;
use crate::linalg::ComplexMatrix;
use crate::rng::TrialRng;
use rand_distr::StandardNormal;

/// Sorted eigenvalues of one draw plus the ensemble that produced it.
#[derive(Clone, Debug)]
pub struct SpectrumSample {
    pub eigenvalues: Vec<f64>,
    pub ensemble: EnsembleSpec,
    pub seed: u64,
}

impl SpectrumSample {
    pub fn new(eigenvalues: Vec<f64>, ensemble: EnsembleSpec, seed: u64) -> Self {
        debug_assert!(eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        SpectrumSample {
            eigenvalues,
            ensemble,
            seed,
        }
    }

    pub fn n_eigenvalues(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Ascending eigenvalues of a Hermitian (or block-diagonal) matrix.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>, Error> {
    m.eigenvalues()
}

/// Macroscopic variable: N^M λ for the inverse-Ginibre ensembles,
/// λ/√N for the GUE family.
pub fn macroscopic_transform(s: &SpectrumSample) -> Vec<f64> {
    let n = s.ensemble.n as f64;
    match s.ensemble.kind {
        EnsembleKind::InverseGinibreSum | EnsembleKind::InverseGinibreDirectSum => {
            let scale = n.powi(s.ensemble.m as i32);
            s.eigenvalues.iter().map(|&l| scale * l).collect()
        }
        EnsembleKind::Gue | EnsembleKind::StableGue => {
            let scale = 1.0 / n.sqrt();
            s.eigenvalues.iter().map(|&l| scale * l).collect()
        }
    }
}

/// Soft-edge variable s = 2^{2/3} N^{2/3} (1 - 4N λ); ascending in s.
///
/// The prefactor is pinned by the square complex Wishart soft edge
/// x_max = 4N + 2^{4/3} N^{1/3} ξ with ξ the Airy point process, so the
/// transformed smallest eigenvalues follow the Airy density with the
/// Tracy-Widom law for the extreme one.
pub fn soft_edge_transform(s: &SpectrumSample) -> Vec<f64> {
    let n = s.ensemble.n as f64;
    let pre = 2.0f64.powf(2.0 / 3.0) * n.powf(2.0 / 3.0);
    let mut out: Vec<f64> = s
        .eigenvalues
        .iter()
        .map(|&l| pre * (1.0 - 4.0 * n * l))
        .collect();
    out.reverse(); // the map is order-reversing in λ
    out
}

/// Hard-edge tail variable z = (N^{1/(M+1)}/c_M) λ^{-1/(M+1)}; ascending,
/// so the first entries correspond to the largest eigenvalues.
pub fn tail_transform(s: &SpectrumSample, c_m: f64) -> Vec<f64> {
    let n = s.ensemble.n as f64;
    let m = s.ensemble.m as f64;
    let p = 1.0 / (m + 1.0);
    let pre = n.powf(p) / c_m;
    let mut out: Vec<f64> = s
        .eigenvalues
        .iter()
        .map(|&l| pre * l.powf(-p))
        .collect();
    out.reverse();
    out
}

/// Inverted tail variable w = 1/z = (c_M/N^{1/(M+1)}) λ^{1/(M+1)};
/// descending, so the first entries again track the largest eigenvalues.
pub fn inverted_tail_transform(s: &SpectrumSample, c_m: f64) -> Vec<f64> {
    tail_transform(s, c_m).into_iter().map(|z| 1.0 / z).collect()
}

/// Unfolded variables μ(λ/√N) ∈ (-1/2, 1/2), ascending.
pub fn unfold(s: &SpectrumSample, map: &UnfoldingMap) -> Vec<f64> {
    let scale = 1.0 / (s.ensemble.n as f64).sqrt();
    s.eigenvalues.iter().map(|&l| map.eval(scale * l)).collect()
}

// ---------------------------------------------------------------------------
// histograms
// ---------------------------------------------------------------------------

/// Which spectral variable a histogram lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableTag {
    Macroscopic,
    SoftEdge,
    InvertedTail,
    Unfolded,
    Spacing,
}

impl VariableTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            VariableTag::Macroscopic => "macroscopic",
            VariableTag::SoftEdge => "soft_edge",
            VariableTag::InvertedTail => "inverted_tail",
            VariableTag::Unfolded => "unfolded",
            VariableTag::Spacing => "spacing",
        }
    }
}

/// Divisor convention for normalized heights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HistNormalization {
    /// count / (samples · bin width): integrates to at most one
    Probability,
    /// count / (trials · bin width): mean point-process density per draw
    PerTrial,
}

/// Uniform-bin histogram with merge support.
#[derive(Clone, Debug)]
pub struct DensityEstimate {
    pub tag: VariableTag,
    pub normalization: HistNormalization,
    pub min: f64,
    pub bin_width: f64,
    pub counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
    pub samples: u64,
    pub trials: u64,
}

impl DensityEstimate {
    pub fn new(
        tag: VariableTag,
        normalization: HistNormalization,
        min: f64,
        max: f64,
        bin_width: f64,
    ) -> Self {
        assert!(bin_width > 0.0 && max > min);
        let bins = ((max - min) / bin_width).ceil() as usize;
        DensityEstimate {
            tag,
            normalization,
            min,
            bin_width,
            counts: vec![0; bins],
            below: 0,
            above: 0,
            samples: 0,
            trials: 0,
        }
    }

    pub fn add(&mut self, value: f64) {
        self.samples += 1;
        if value < self.min {
            self.below += 1;
            return;
        }
        let idx = ((value - self.min) / self.bin_width) as usize;
        if let Some(slot) = self.counts.get_mut(idx) {
            *slot += 1;
        } else {
            self.above += 1;
        }
    }

    pub fn add_all(&mut self, values: &[f64]) {
        for &v in values {
            self.add(v);
        }
    }

    pub fn finish_trial(&mut self) {
        self.trials += 1;
    }

    /// Bin-by-bin merge; panics on mismatched binning. Associative and
    /// commutative, so worker partials can be folded in any order.
    pub fn merge(&mut self, other: &DensityEstimate) {
        assert_eq!(self.tag, other.tag);
        assert_eq!(self.normalization, other.normalization);
        assert_eq!(self.counts.len(), other.counts.len());
        assert!(self.min == other.min && self.bin_width == other.bin_width);
        for (a, b) in self.counts.iter_mut().zip(other.counts.iter()) {
            *a += b;
        }
        self.below += other.below;
        self.above += other.above;
        self.samples += other.samples;
        self.trials += other.trials;
    }

    pub fn total_weight(&self) -> f64 {
        match self.normalization {
            HistNormalization::Probability => self.samples as f64,
            HistNormalization::PerTrial => self.trials as f64,
        }
    }

    pub fn bin_left(&self, i: usize) -> f64 {
        self.min + i as f64 * self.bin_width
    }

    pub fn heights(&self) -> Vec<f64> {
        let w = self.total_weight() * self.bin_width;
        self.counts
            .iter()
            .map(|&c| if w > 0.0 { c as f64 / w } else { 0.0 })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// spacings and clusters
// ---------------------------------------------------------------------------

/// Which end of the ordered spectrum the spacing index counts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpacingEnd {
    Smallest,
    Largest,
}

/// Normalized spacings between the kth and (k+1)st eigenvalue (1-based)
/// counted from the chosen end, divided by their empirical mean.
#[derive(Clone, Debug)]
pub struct SpacingSeries {
    pub k: usize,
    pub values: Vec<f64>,
}

impl SpacingSeries {
    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            return f64::NAN;
        }
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }
}

/// Builds one spacing series from many draws of ascending values.
pub fn spacing_distribution(draws: &[Vec<f64>], k: usize, end: SpacingEnd) -> SpacingSeries {
    assert!(k >= 1);
    let mut raw = Vec::with_capacity(draws.len());
    for values in draws {
        let n = values.len();
        if n < k + 1 {
            continue;
        }
        let gap = match end {
            SpacingEnd::Smallest => values[k] - values[k - 1],
            SpacingEnd::Largest => values[n - k] - values[n - k - 1],
        };
        raw.push(gap);
    }
    normalize_spacings(k, raw)
}

fn normalize_spacings(k: usize, mut raw: Vec<f64>) -> SpacingSeries {
    let mean = raw.iter().sum::<f64>() / raw.len().max(1) as f64;
    if mean > 0.0 {
        for v in &mut raw {
            *v /= mean;
        }
    }
    SpacingSeries { k, values: raw }
}

/// Groups values ordered from the tail end into consecutive runs of length
/// `l`; incomplete trailing runs are dropped.
pub fn cluster_group(values_from_tail: &[f64], l: usize) -> Vec<Vec<f64>> {
    assert!(l >= 1);
    values_from_tail
        .chunks_exact(l)
        .map(|c| c.to_vec())
        .collect()
}

/// Mean unfolded positions (largest, smallest) over draws of unfolded
/// ascending spectra.
pub fn mean_extreme_position(unfolded_draws: &[Vec<f64>]) -> (f64, f64) {
    let mut hi = 0.0f64;
    let mut lo = 0.0f64;
    let mut count = 0usize;
    for d in unfolded_draws {
        if let (Some(&first), Some(&last)) = (d.first(), d.last()) {
            lo += first;
            hi += last;
            count += 1;
        }
    }
    if count == 0 {
        (f64::NAN, f64::NAN)
    } else {
        (hi / count as f64, lo / count as f64)
    }
}

/// Draw from the Wigner surmise (32/π²) s² exp(-4s²/π): a scaled χ₃ with
/// unit mean.
pub fn sample_wigner_surmise(rng: &mut TrialRng) -> f64 {
    use rand::Rng;
    let scale = (std::f64::consts::PI / 8.0).sqrt();
    let (a, b, c): (f64, f64, f64) = (
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    );
    scale * (a * a + b * b + c * c).sqrt()
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov distances
// ---------------------------------------------------------------------------

/// Two-sample KS distance; both inputs must be sorted ascending.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    debug_assert!(a.windows(2).all(|w| w[0] <= w[1]));
    debug_assert!(b.windows(2).all(|w| w[0] <= w[1]));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            i += 1;
        } else if b[j] < a[i] {
            j += 1;
        } else {
            // advance both past the tied value before comparing the CDFs
            let tie = a[i];
            while i < a.len() && a[i] == tie {
                i += 1;
            }
            while j < b.len() && b[j] == tie {
                j += 1;
            }
        }
        let diff = (i as f64 / na - j as f64 / nb).abs();
        if diff > d {
            d = diff;
        }
    }
    d
}

/// KS distance of a sorted sample against a CDF.
pub fn ks_against_cdf<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    assert!(!sorted.is_empty());
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// KS distance of a sorted sample against a density, with the CDF obtained
/// by quadrature over [support.0, x], restricted and renormalized to the
/// window [lo, hi].
pub fn ks_against_density(
    sorted: &[f64],
    density: &crate::densities::AnalyticDensity,
    lo: f64,
    hi: f64,
) -> f64 {
    let window: Vec<f64> = sorted
        .iter()
        .copied()
        .filter(|&x| x >= lo && x <= hi)
        .collect();
    assert!(!window.is_empty(), "no samples inside the comparison window");
    let total = density.integral(lo, hi);
    // piecewise cumulative on a grid, interpolated at the sample points
    let grid_n = 2048usize;
    let step = (hi - lo) / grid_n as f64;
    let mut cum = Vec::with_capacity(grid_n + 1);
    cum.push(0.0);
    let mut acc = 0.0;
    for i in 0..grid_n {
        let a = lo + step * i as f64;
        acc += density.integral(a, a + step);
        cum.push(acc);
    }
    let cdf = |x: f64| -> f64 {
        let pos = ((x - lo) / step).clamp(0.0, grid_n as f64);
        let i = (pos.floor() as usize).min(grid_n - 1);
        let t = pos - i as f64;
        ((1.0 - t) * cum[i] + t * cum[i + 1]) / total
    };
    ks_against_cdf(&window, cdf)
}
