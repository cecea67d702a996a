//! Config-driven reproduction of the figure-level experiments and the
//! conjecture probes, with deterministic seeding, optional parallel
//! execution, persistent eigenvalue caches and CSV/JSON outputs.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::densities::{
    self, inv_mp_density, poisson_spacing, product_sum_macro_density, tail_density_l,
    unfolding_constant, wigner_surmise, AveragedSemicircle, UnfoldingMap,
};
use crate::ensembles::{sample_matrix, EnsembleKind, EnsembleSpec};
use crate::error::Error;
use crate::freeprob::{r_stable_theory, EmpiricalGreen, C64};
use crate::quad;
use crate::rng::{derive_stream, hash_label};
use crate::stats::{
    cluster_group, inverted_tail_transform, ks_against_cdf, ks_against_density, ks_two_sample,
    macroscopic_transform, mean_extreme_position, sample_wigner_surmise, soft_edge_transform,
    spacing_distribution, tail_transform, unfold, DensityEstimate, HistNormalization,
    SpacingEnd, SpacingSeries, SpectrumSample, VariableTag,
};

/// Bin widths per spectral variable; the defaults follow the figures
/// (0.1 macroscopic and spacings, 0.2 microscopic).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BinSpec {
    pub macroscopic: f64,
    pub microscopic: f64,
    pub spacing: f64,
}

impl Default for BinSpec {
    fn default() -> Self {
        BinSpec {
            macroscopic: 0.1,
            microscopic: 0.2,
            spacing: 0.1,
        }
    }
}

/// Full experiment description.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub experiment: String,
    pub n: usize,
    pub m: usize,
    pub l_grid: Vec<usize>,
    pub n_grid: Vec<usize>,
    pub alpha_grid: Vec<f64>,
    pub gamma_grid: Vec<f64>,
    pub sigma: f64,
    pub trials: u64,
    pub master_seed: u64,
    pub workers: Option<usize>,
    pub out_dir: PathBuf,
    pub cache: bool,
    pub bins: BinSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            experiment: String::new(),
            n: 100,
            m: 1,
            l_grid: vec![1, 2, 3, 4],
            n_grid: vec![50, 100, 200, 500],
            alpha_grid: vec![0.5, 1.0, 1.5, 1.8],
            gamma_grid: Vec::new(),
            sigma: 1.0,
            trials: 10_000,
            master_seed: 7_040_100,
            workers: None,
            out_dir: PathBuf::from("runs"),
            cache: true,
            bins: BinSpec::default(),
        }
    }
}

pub const EXPERIMENTS: &[&str] = &[
    "macro",
    "softedge",
    "tail",
    "tail-individual",
    "spacing-sum-vs-direct",
    "cauchy-compare",
    "stable-density",
    "stable-spacing",
];

impl RunConfig {
    /// Parses a flat key=value file (# starts a comment).
    pub fn from_file(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|e| Error::InvalidConfig {
            detail: format!("cannot read {}: {e}", path.display()),
        })?;
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::InvalidConfig {
                detail: format!("{}:{}: expected key=value", path.display(), lineno + 1),
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    /// Sets one option by its config/flag name; flags reuse these keys.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), Error> {
        let bad = |what: &str| Error::InvalidConfig {
            detail: format!("invalid value '{value}' for {what}"),
        };
        match key {
            "experiment" => self.experiment = value.to_string(),
            "n" => self.n = value.parse().map_err(|_| bad("n"))?,
            "m" => self.m = value.parse().map_err(|_| bad("m"))?,
            "l" => self.l_grid = vec![value.parse().map_err(|_| bad("l"))?],
            "l-grid" => {
                self.l_grid = parse_list(value).ok_or_else(|| bad("l-grid"))?;
            }
            "n-grid" => {
                self.n_grid = parse_list(value).ok_or_else(|| bad("n-grid"))?;
            }
            "alpha" => self.alpha_grid = vec![value.parse().map_err(|_| bad("alpha"))?],
            "alpha-grid" => {
                self.alpha_grid = parse_list(value).ok_or_else(|| bad("alpha-grid"))?;
            }
            "gamma-grid" => {
                self.gamma_grid = parse_list(value).ok_or_else(|| bad("gamma-grid"))?;
            }
            "sigma" => self.sigma = value.parse().map_err(|_| bad("sigma"))?,
            "trials" => self.trials = value.parse().map_err(|_| bad("trials"))?,
            "seed" => self.master_seed = value.parse().map_err(|_| bad("seed"))?,
            "workers" => {
                self.workers = if value == "auto" {
                    None
                } else {
                    Some(value.parse().map_err(|_| bad("workers"))?)
                }
            }
            "out" => self.out_dir = PathBuf::from(value),
            "cache" => {
                self.cache = match value {
                    "on" | "true" | "1" => true,
                    "off" | "false" | "0" => false,
                    _ => return Err(bad("cache")),
                }
            }
            "bin-macro" => self.bins.macroscopic = value.parse().map_err(|_| bad("bin-macro"))?,
            "bin-micro" => self.bins.microscopic = value.parse().map_err(|_| bad("bin-micro"))?,
            "bin-spacing" => self.bins.spacing = value.parse().map_err(|_| bad("bin-spacing"))?,
            other => {
                return Err(Error::InvalidConfig {
                    detail: format!("unknown option '{other}'"),
                })
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig {
                detail: "trials must be at least 1".into(),
            });
        }
        if self.bins.macroscopic <= 0.0 || self.bins.microscopic <= 0.0 || self.bins.spacing <= 0.0
        {
            return Err(Error::InvalidConfig {
                detail: "bin widths must be positive".into(),
            });
        }
        if self.l_grid.is_empty() || self.l_grid.iter().any(|&l| l == 0) {
            return Err(Error::InvalidConfig {
                detail: "l-grid must hold positive summand counts".into(),
            });
        }
        Ok(())
    }

    fn cache_dir(&self) -> Option<PathBuf> {
        if self.cache {
            Some(self.out_dir.join("cache"))
        } else {
            None
        }
    }
}

fn parse_list<T: std::str::FromStr>(value: &str) -> Option<Vec<T>> {
    let items: Result<Vec<T>, _> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect();
    items.ok().filter(|v: &Vec<T>| !v.is_empty())
}

// ---------------------------------------------------------------------------
// executors
// ---------------------------------------------------------------------------

/// Trial executor: data-parallel via rayon by default, with a sequential
/// path that is always available (and is the only path without the
/// `parallel` feature).
#[derive(Clone, Copy, Debug)]
pub enum Executor {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel { workers: Option<usize> },
}

impl Executor {
    /// The default executor for a worker-count request.
    #[cfg(feature = "parallel")]
    pub fn auto(workers: Option<usize>) -> Self {
        Executor::Parallel { workers }
    }

    #[cfg(not(feature = "parallel"))]
    pub fn auto(_workers: Option<usize>) -> Self {
        Executor::Sequential
    }

    /// Runs `f` for every trial index and returns the results in trial
    /// order, so downstream folds are independent of scheduling.
    pub fn run<T: Send, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            Executor::Sequential => (0..trials).map(f).collect(),
            #[cfg(feature = "parallel")]
            Executor::Parallel { workers } => {
                use rayon::prelude::*;
                let mut builder = rayon::ThreadPoolBuilder::new();
                if let Some(w) = workers {
                    builder = builder.num_threads(*w);
                }
                let pool = builder.build().expect("rayon pool");
                pool.install(|| (0..trials).into_par_iter().map(f).collect())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// eigenvalue cache
// ---------------------------------------------------------------------------

const EIG_MAGIC: &[u8] = b"HTEIGCA1";
const EIG_VERSION: u64 = 1;

fn kind_code(kind: EnsembleKind) -> u64 {
    match kind {
        EnsembleKind::InverseGinibreSum => 1,
        EnsembleKind::InverseGinibreDirectSum => 2,
        EnsembleKind::Gue => 3,
        EnsembleKind::StableGue => 4,
    }
}

fn cache_file(dir: &Path, spec: &EnsembleSpec, master_seed: u64, trials: u64) -> PathBuf {
    let key = hash_label(&format!("{}|{}|{}", spec.label(), master_seed, trials));
    dir.join(format!("eig-{key:016x}.bin"))
}

fn cache_header(spec: &EnsembleSpec, master_seed: u64, trials: u64) -> Vec<u8> {
    let mut h = Vec::with_capacity(96);
    h.extend_from_slice(EIG_MAGIC);
    for v in [
        EIG_VERSION,
        kind_code(spec.kind),
        spec.n as u64,
        spec.m as u64,
        spec.l as u64,
        spec.alpha.to_bits(),
        spec.sigma.to_bits(),
        master_seed,
        trials,
        spec.spectrum_len() as u64,
    ] {
        h.extend_from_slice(&v.to_le_bytes());
    }
    h
}

fn save_spectra(
    path: &Path,
    spec: &EnsembleSpec,
    master_seed: u64,
    trials: u64,
    spectra: &[Vec<f64>],
) -> std::io::Result<()> {
    let mut buf = cache_header(spec, master_seed, trials);
    for s in spectra {
        for v in s {
            buf.extend_from_slice(&v.to_bits().to_le_bytes());
        }
    }
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, buf)
}

fn load_spectra(
    path: &Path,
    spec: &EnsembleSpec,
    master_seed: u64,
    trials: u64,
) -> Result<Option<Vec<Vec<f64>>>, Error> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(_) => return Ok(None),
    };
    let header = cache_header(spec, master_seed, trials);
    if bytes.len() < header.len() || bytes[..header.len()] != header[..] {
        return Err(Error::CacheMismatch {
            detail: format!("{} does not match the requesting config", path.display()),
        });
    }
    let per = spec.spectrum_len();
    let body = &bytes[header.len()..];
    if body.len() != trials as usize * per * 8 {
        return Err(Error::CacheMismatch {
            detail: format!("{} has a truncated body", path.display()),
        });
    }
    let mut spectra = Vec::with_capacity(trials as usize);
    let mut off = 0usize;
    for _ in 0..trials {
        let mut s = Vec::with_capacity(per);
        for _ in 0..per {
            let bits = u64::from_le_bytes(body[off..off + 8].try_into().unwrap());
            s.push(f64::from_bits(bits));
            off += 8;
        }
        spectra.push(s);
    }
    Ok(Some(spectra))
}

/// Draws (or loads) `trials` sorted spectra of the ensemble. Stream of trial
/// t derives from (master_seed, hash(ensemble label), t); identical requests
/// are served bit-identically from the cache.
pub fn collect_spectra(
    spec: &EnsembleSpec,
    trials: u64,
    master_seed: u64,
    executor: Executor,
    cache_dir: Option<&Path>,
) -> Result<Vec<Vec<f64>>, Error> {
    spec.validate()?;
    let path = cache_dir.map(|d| cache_file(d, spec, master_seed, trials));
    if let Some(p) = &path {
        match load_spectra(p, spec, master_seed, trials) {
            Ok(Some(s)) => return Ok(s),
            Ok(None) => {}
            Err(e) => eprintln!("warning: {e}; regenerating"),
        }
    }
    let salt = hash_label(&spec.label());
    let spec_copy = *spec;
    let results: Vec<Result<Vec<f64>, Error>> = executor.run(trials, move |t| {
        let mut rng = derive_stream(master_seed, salt, t);
        let m = sample_matrix(&spec_copy, &mut rng)?;
        m.eigenvalues()
    });
    let mut spectra = Vec::with_capacity(results.len());
    for r in results {
        spectra.push(r?);
    }
    if let Some(p) = &path {
        save_spectra(p, spec, master_seed, trials, &spectra)?;
    }
    Ok(spectra)
}

fn samples_from(spec: &EnsembleSpec, spectra: Vec<Vec<f64>>) -> Vec<SpectrumSample> {
    spectra
        .into_iter()
        .enumerate()
        .map(|(t, eig)| SpectrumSample::new(eig, *spec, t as u64))
        .collect()
}

// ---------------------------------------------------------------------------
// output files
// ---------------------------------------------------------------------------

/// One empirical-vs-analytic comparison in the JSON summary.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub name: String,
    pub ks: f64,
    pub max_bin_dev: f64,
    pub n_eff: u64,
}

/// JSON summary of one experiment run.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub config: RunConfig,
    pub comparisons: Vec<Comparison>,
    pub notes: Vec<String>,
}

impl Summary {
    fn new(config: &RunConfig) -> Self {
        Summary {
            experiment: config.experiment.clone(),
            config: config.clone(),
            comparisons: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn write(&self, name: &str) -> Result<(), Error> {
        fs::create_dir_all(&self.config.out_dir)?;
        let path = self.config.out_dir.join(format!("{name}-summary.json"));
        let text = serde_json::to_string_pretty(self).expect("summary serializes");
        fs::write(path, text)?;
        Ok(())
    }
}

/// Bin-averaged analytic value: ∫_bin ρ / width by 3-point Simpson.
fn bin_average<F: Fn(f64) -> f64>(f: &F, left: f64, width: f64) -> f64 {
    let (a, m, b) = (f(left), f(left + 0.5 * width), f(left + width));
    (a + 4.0 * m + b) / 6.0
}

fn write_density_csv<F: Fn(f64) -> f64>(
    dir: &Path,
    name: &str,
    hist: &DensityEstimate,
    analytic: F,
) -> Result<(), Error> {
    fs::create_dir_all(dir)?;
    let mut out = String::from("variable_tag,bin_left,bin_width,count,normalized_height,analytic_value\n");
    let heights = hist.heights();
    for (i, (&count, height)) in hist.counts.iter().zip(heights.iter()).enumerate() {
        let left = hist.bin_left(i);
        let reference = bin_average(&analytic, left, hist.bin_width);
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            hist.tag.as_str(),
            left,
            hist.bin_width,
            count,
            height,
            reference
        ));
    }
    let mut f = fs::File::create(dir.join(name))?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

fn write_spacing_csv(dir: &Path, name: &str, k: usize, hist: &DensityEstimate) -> Result<(), Error> {
    fs::create_dir_all(dir)?;
    let mut out = String::from("k,s_bin_left,bin_width,normalized_height,poisson_ref,wigner_ref\n");
    let heights = hist.heights();
    for (i, height) in heights.iter().enumerate() {
        let left = hist.bin_left(i);
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            k,
            left,
            hist.bin_width,
            height,
            bin_average(&poisson_spacing, left, hist.bin_width),
            bin_average(&wigner_surmise, left, hist.bin_width),
        ));
    }
    let mut f = fs::File::create(dir.join(name))?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

fn spacing_histogram(series: &SpacingSeries, bin: f64) -> DensityEstimate {
    let mut h = DensityEstimate::new(
        VariableTag::Spacing,
        HistNormalization::Probability,
        0.0,
        5.0,
        bin,
    );
    h.add_all(&series.values);
    h.finish_trial();
    h
}

/// Per-bin relative deviation from the analytic curve on bins whose
/// expected count clears `min_expected`; returns (max deviation, bins used).
fn max_bin_deviation<F: Fn(f64) -> f64>(
    hist: &DensityEstimate,
    analytic: &F,
    min_expected: f64,
    extra_filter: impl Fn(f64) -> bool,
) -> (f64, u64) {
    let heights = hist.heights();
    let weight = hist.total_weight() * hist.bin_width;
    let mut worst = 0.0f64;
    let mut used = 0u64;
    for (i, height) in heights.iter().enumerate() {
        let left = hist.bin_left(i);
        let reference = bin_average(analytic, left, hist.bin_width);
        let expected = reference * weight;
        if expected < min_expected || !extra_filter(left) {
            continue;
        }
        used += 1;
        worst = worst.max((height - reference).abs() / reference);
    }
    (worst, used)
}

// ---------------------------------------------------------------------------
// figure experiments
// ---------------------------------------------------------------------------

/// Runs a figure-level experiment by name and emits its CSVs plus a JSON
/// summary.
pub fn run_figure(config: &RunConfig) -> Result<Summary, Error> {
    config.validate()?;
    match config.experiment.as_str() {
        "macro" => fig_macro(config),
        "softedge" => fig_softedge(config),
        "tail" => fig_tail(config),
        "tail-individual" => fig_tail_individual(config),
        "spacing-sum-vs-direct" => fig_spacing_compare(config),
        "cauchy-compare" => fig_cauchy_compare(config),
        "stable-density" => fig_stable_density(config),
        "stable-spacing" => fig_stable_spacing(config),
        other => Err(Error::InvalidConfig {
            detail: format!(
                "unknown experiment '{other}' (expected one of {})",
                EXPERIMENTS.join(", ")
            ),
        }),
    }
}

fn macro_reference(m: usize) -> impl Fn(f64) -> f64 {
    move |x: f64| {
        if m == 1 {
            inv_mp_density(x)
        } else {
            product_sum_macro_density(x, m).unwrap_or(0.0)
        }
    }
}

fn fig_macro(config: &RunConfig) -> Result<Summary, Error> {
    let mut summary = Summary::new(config);
    let executor = Executor::auto(config.workers);
    let reference = macro_reference(config.m);
    let support_lo = 1.0 / densities::fuss_catalan_edge(config.m);
    for &l in &config.l_grid {
        let spec = EnsembleSpec::inverse_ginibre_sum(config.n, config.m, l);
        let spectra = collect_spectra(
            &spec,
            config.trials,
            config.master_seed,
            executor,
            config.cache_dir().as_deref(),
        )?;
        let samples = samples_from(&spec, spectra);
        let mut hist = DensityEstimate::new(
            VariableTag::Macroscopic,
            HistNormalization::Probability,
            support_lo,
            6.0,
            config.bins.macroscopic,
        );
        let mut pooled = Vec::new();
        for s in &samples {
            let values = macroscopic_transform(s);
            hist.add_all(&values);
            pooled.extend(values.into_iter().filter(|&v| v <= 6.0));
            hist.finish_trial();
        }
        pooled.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let window = densities::AnalyticDensity::new(
            (support_lo, f64::INFINITY),
            densities::Normalization::Probability,
            macro_reference(config.m),
        );
        let ks = ks_against_density(&pooled, &window, support_lo, 6.0);
        let (max_dev, n_eff) = max_bin_deviation(&hist, &reference, 500.0, |_| true);
        write_density_csv(
            &config.out_dir,
            &format!("macro-l{l}.csv"),
            &hist,
            &reference,
        )?;
        summary.comparisons.push(Comparison {
            name: format!("macro-l{l}"),
            ks,
            max_bin_dev: max_dev,
            n_eff,
        });
    }
    summary.write("macro")?;
    Ok(summary)
}

/// Window on the soft-edge variable where the 5 smallest eigenvalues cover
/// the Airy process with negligible truncation.
pub const SOFT_EDGE_WINDOW: (f64, f64) = (-5.0, 3.5);

fn fig_softedge(config: &RunConfig) -> Result<Summary, Error> {
    let mut summary = Summary::new(config);
    let executor = Executor::auto(config.workers);
    let airy = densities::AnalyticDensity::new(
        (f64::NEG_INFINITY, f64::INFINITY),
        densities::Normalization::PerEigenvalue,
        densities::airy_edge_density,
    );
    for &l in &config.l_grid {
        let spec = EnsembleSpec::inverse_ginibre_sum(config.n, config.m, l);
        let spectra = collect_spectra(
            &spec,
            config.trials,
            config.master_seed,
            executor,
            config.cache_dir().as_deref(),
        )?;
        let samples = samples_from(&spec, spectra);
        let mut hist = DensityEstimate::new(
            VariableTag::SoftEdge,
            HistNormalization::PerTrial,
            -8.0,
            4.0,
            config.bins.microscopic,
        );
        let mut pooled = Vec::new();
        for s in &samples {
            let t = soft_edge_transform(s);
            // the 5 smallest eigenvalues are the 5 largest soft-edge values
            let five = &t[t.len().saturating_sub(5)..];
            hist.add_all(five);
            pooled.extend_from_slice(five);
            hist.finish_trial();
        }
        pooled.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let ks = ks_against_density(&pooled, &airy, SOFT_EDGE_WINDOW.0, SOFT_EDGE_WINDOW.1);
        let (max_dev, n_eff) = max_bin_deviation(
            &hist,
            &densities::airy_edge_density,
            300.0,
            |left| left >= SOFT_EDGE_WINDOW.0,
        );
        write_density_csv(
            &config.out_dir,
            &format!("softedge-l{l}.csv"),
            &hist,
            densities::airy_edge_density,
        )?;
        summary.comparisons.push(Comparison {
            name: format!("softedge-l{l}"),
            ks,
            max_bin_dev: max_dev,
            n_eff,
        });
    }
    summary.write("softedge")?;
    Ok(summary)
}

/// Takes the `count` largest eigenvalues in the inverted tail variable,
/// ascending.
fn tail_points(sample: &SpectrumSample, c_m: f64, count: usize) -> Vec<f64> {
    let w = inverted_tail_transform(sample, c_m);
    // w is descending (largest eigenvalue first)
    let mut head: Vec<f64> = w.into_iter().take(count).collect();
    head.reverse();
    head
}

/// Number of tail-law points expected above `w` for the L-fold sum.
fn tail_count_above(w: f64, l: usize) -> f64 {
    if w <= 0.0 {
        return f64::INFINITY;
    }
    quad::adaptive(
        &mut |u: f64| densities::bessel_hard_edge_density(u),
        0.0,
        1.0 / (l as f64 * w),
        1e-8,
        1e-10,
    ) * l as f64
}

fn fig_tail(config: &RunConfig) -> Result<Summary, Error> {
    let mut summary = Summary::new(config);
    let executor = Executor::auto(config.workers);
    let c_m = unfolding_constant(config.m);
    for &l in &config.l_grid {
        let spec = EnsembleSpec::inverse_ginibre_sum(config.n, config.m, l);
        let spectra = collect_spectra(
            &spec,
            config.trials,
            config.master_seed,
            executor,
            config.cache_dir().as_deref(),
        )?;
        let samples = samples_from(&spec, spectra);
        let mut hist = DensityEstimate::new(
            VariableTag::InvertedTail,
            HistNormalization::PerTrial,
            0.0,
            3.0,
            config.bins.microscopic,
        );
        for s in &samples {
            hist.add_all(&tail_points(s, c_m, 8));
            hist.finish_trial();
        }
        let reference = move |w: f64| tail_density_l(w, l);
        // compare only bins fully covered by the 8 retained eigenvalues
        let coverage = move |left: f64| tail_count_above(left, l) <= 7.0;
        let (max_dev, n_eff) = max_bin_deviation(&hist, &reference, 300.0, coverage);
        write_density_csv(&config.out_dir, &format!("tail-l{l}.csv"), &hist, reference)?;
        summary.comparisons.push(Comparison {
            name: format!("tail-l{l}"),
            ks: f64::NAN,
            max_bin_dev: max_dev,
            n_eff,
        });
    }
    summary.write("tail")?;
    Ok(summary)
}

fn fig_tail_individual(config: &RunConfig) -> Result<Summary, Error> {
    let mut summary = Summary::new(config);
    let executor = Executor::auto(config.workers);
    let c_m = unfolding_constant(config.m);
    for &l in &config.l_grid {
        let spec = EnsembleSpec::inverse_ginibre_sum(config.n, config.m, l);
        let spectra = collect_spectra(
            &spec,
            config.trials,
            config.master_seed,
            executor,
            config.cache_dir().as_deref(),
        )?;
        let samples = samples_from(&spec, spectra);
        let reference = move |w: f64| tail_density_l(w, l);
        // individual distributions of the four largest eigenvalues
        for k in 1..=4usize {
            let mut hist = DensityEstimate::new(
                VariableTag::InvertedTail,
                HistNormalization::Probability,
                0.0,
                3.0,
                0.5 * config.bins.microscopic,
            );
            for s in &samples {
                let w = inverted_tail_transform(s, c_m);
                if w.len() >= k {
                    hist.add(w[k - 1]);
                }
                hist.finish_trial();
            }
            write_density_csv(
                &config.out_dir,
                &format!("tail-individual-l{l}-k{k}.csv"),
                &hist,
                reference,
            )?;
        }
        // pooled first cluster (the L eigenvalues of the outermost peak)
        let mut cluster_hist = DensityEstimate::new(
            VariableTag::InvertedTail,
            HistNormalization::PerTrial,
            0.0,
            3.0,
            config.bins.microscopic,
        );
        for s in &samples {
            let w = inverted_tail_transform(s, c_m);
            let clusters = cluster_group(&w, l);
            if let Some(first) = clusters.first() {
                cluster_hist.add_all(first);
            }
            cluster_hist.finish_trial();
        }
        write_density_csv(
            &config.out_dir,
            &format!("tail-individual-l{l}-cluster1.csv"),
            &cluster_hist,
            reference,
        )?;
        let (max_dev, n_eff) = max_bin_deviation(&cluster_hist, &reference, 200.0, |left|

            tail_count_above(left, l) <= l as f64 - 0.25);
        summary.comparisons.push(Comparison {
            name: format!("tail-individual-l{l}-cluster1"),
            ks: f64::NAN,
            max_bin_dev: max_dev,
            n_eff,
        });
    }
    summary.write("tail-individual")?;
    Ok(summary)
}

/// Spacing series of the tail variable between the kth and (k+1)st largest
/// eigenvalue (computed at the small end of the z variable).
fn tail_spacing_series(samples: &[SpectrumSample], c_m: f64, k: usize) -> SpacingSeries {
    let draws: Vec<Vec<f64>> = samples.iter().map(|s| tail_transform(s, c_m)).collect();
    spacing_distribution(&draws, k, SpacingEnd::Smallest)
}

/// Pooled within-cluster spacings of the first cluster, unfolded by the
/// ensemble CDF of the cluster positions. Independent cluster members map
/// to i.i.d. uniforms under their own mixture CDF, so the unfolded gaps
/// tend to e^{-s} exactly when the members decorrelate.
fn within_cluster_pool(samples: &[SpectrumSample], c_m: f64, l: usize) -> Vec<f64> {
    assert!(l >= 2);
    let clusters: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| {
            let z = tail_transform(s, c_m);
            z[..l.min(z.len())].to_vec()
        })
        .collect();
    let mut pooled: Vec<f64> = clusters.iter().flatten().copied().collect();
    pooled.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let rank_of = |v: f64| -> f64 {
        match pooled.binary_search_by(|p| p.partial_cmp(&v).unwrap()) {
            Ok(i) | Err(i) => i as f64,
        }
    };
    let mut pool = Vec::new();
    for cluster in &clusters {
        for pair in cluster.windows(2) {
            pool.push(rank_of(pair[1]) - rank_of(pair[0]));
        }
    }
    let mean = pool.iter().sum::<f64>() / pool.len().max(1) as f64;
    for v in &mut pool {
        *v /= mean;
    }
    pool.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    pool
}

fn fig_spacing_compare(config: &RunConfig) -> Result<Summary, Error> {
    let mut summary = Summary::new(config);
    let executor = Executor::auto(config.workers);
    let c_m = unfolding_constant(config.m);
    // reference sample from the Wigner surmise, same size as a spacing pool
    let mut wig_rng = derive_stream(config.master_seed, hash_label("wigner-reference"), 0);
    let mut wigner: Vec<f64> = (0..100_000).map(|_| sample_wigner_surmise(&mut wig_rng)).collect();
    wigner.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());

    for &l in &config.l_grid {
        let sum_spec = EnsembleSpec::inverse_ginibre_sum(config.n, config.m, l);
        let dir_spec = EnsembleSpec::inverse_ginibre_direct_sum(config.n, config.m, l);
        let sum_samples = samples_from(
            &sum_spec,
            collect_spectra(
                &sum_spec,
                config.trials,
                config.master_seed,
                executor,
                config.cache_dir().as_deref(),
            )?,
        );
        let dir_samples = samples_from(
            &dir_spec,
            collect_spectra(
                &dir_spec,
                config.trials,
                config.master_seed,
                executor,
                config.cache_dir().as_deref(),
            )?,
        );
        for k in 1..=3usize {
            let s_sum = tail_spacing_series(&sum_samples, c_m, k);
            let s_dir = tail_spacing_series(&dir_samples, c_m, k);
            write_spacing_csv(
                &config.out_dir,
                &format!("spacing-sum-l{l}-k{k}.csv"),
                k,
                &spacing_histogram(&s_sum, config.bins.spacing),
            )?;
            write_spacing_csv(
                &config.out_dir,
                &format!("spacing-direct-l{l}-k{k}.csv"),
                k,
                &spacing_histogram(&s_dir, config.bins.spacing),
            )?;
            let ks = ks_two_sample(&s_sum.sorted(), &s_dir.sorted());
            summary.comparisons.push(Comparison {
                name: format!("spacing-sum-vs-direct-l{l}-k{k}"),
                ks,
                max_bin_dev: f64::NAN,
                n_eff: s_sum.values.len() as u64,
            });
        }
        // singleton clusters at L = 1 have no within-cluster spacings
        if l >= 2 {
            let sum_pool = within_cluster_pool(&sum_samples, c_m, l);
            let dir_pool = within_cluster_pool(&dir_samples, c_m, l);
            let ks_direct = ks_two_sample(&sum_pool, &dir_pool);
            let ks_wigner = ks_two_sample(&sum_pool, &wigner);
            summary.comparisons.push(Comparison {
                name: format!("within-cluster-sum-vs-direct-l{l}"),
                ks: ks_direct,
                max_bin_dev: f64::NAN,
                n_eff: sum_pool.len() as u64,
            });
            summary.comparisons.push(Comparison {
                name: format!("within-cluster-sum-vs-wigner-l{l}"),
                ks: ks_wigner,
                max_bin_dev: f64::NAN,
                n_eff: sum_pool.len() as u64,
            });
        }
    }
    summary.write("spacing-sum-vs-direct")?;
    Ok(summary)
}

fn fig_cauchy_compare(config: &RunConfig) -> Result<Summary, Error> {
    let mut summary = Summary::new(config);
    let rho = AveragedSemicircle::new(1.0)?;
    let c = std::f64::consts::PI * rho.density(0.0);
    fs::create_dir_all(&config.out_dir)?;
    let mut out = String::from("lambda,averaged_semicircle,cauchy\n");
    let mut max_rel = 0.0f64;
    let mut i = 0;
    loop {
        let lambda = -8.0 + 0.05 * i as f64;
        if lambda > 8.0 {
            break;
        }
        let a = rho.density(lambda);
        let b = densities::cauchy_density(lambda, c);
        if lambda.abs() > 0.5 {
            max_rel = max_rel.max((a - b).abs() / b);
        }
        out.push_str(&format!("{lambda},{a},{b}\n"));
        i += 1;
    }
    fs::write(config.out_dir.join("cauchy-compare.csv"), out)?;
    summary.notes.push(format!(
        "lorentz scale c = {c}; the curves agree at 0 by construction and separate elsewhere"
    ));
    summary.comparisons.push(Comparison {
        name: "cauchy-vs-averaged-semicircle".into(),
        ks: f64::NAN,
        max_bin_dev: max_rel,
        n_eff: i,
    });
    summary.write("cauchy-compare")?;
    Ok(summary)
}

fn alpha_tag(alpha: f64) -> String {
    format!("{alpha}").replace('.', "p")
}

fn fig_stable_density(config: &RunConfig) -> Result<Summary, Error> {
    let mut summary = Summary::new(config);
    let executor = Executor::auto(config.workers);
    for &alpha in &config.alpha_grid {
        let spec = EnsembleSpec::stable_gue(config.n, alpha);
        let spectra = collect_spectra(
            &spec,
            config.trials,
            config.master_seed,
            executor,
            config.cache_dir().as_deref(),
        )?;
        let samples = samples_from(&spec, spectra);
        let rho = AveragedSemicircle::new(alpha)?;
        let map = UnfoldingMap::for_alpha(alpha)?;

        let mut macro_hist = DensityEstimate::new(
            VariableTag::Macroscopic,
            HistNormalization::Probability,
            -6.0,
            6.0,
            config.bins.macroscopic,
        );
        let mut unfolded_hist = DensityEstimate::new(
            VariableTag::Unfolded,
            HistNormalization::Probability,
            -0.5,
            0.5,
            0.02,
        );
        let mut unfolded_draws = Vec::with_capacity(samples.len());
        let mut pooled_unfolded = Vec::new();
        for s in &samples {
            macro_hist.add_all(&macroscopic_transform(s));
            macro_hist.finish_trial();
            let u = unfold(s, &map);
            unfolded_hist.add_all(&u);
            unfolded_hist.finish_trial();
            pooled_unfolded.extend_from_slice(&u);
            unfolded_draws.push(u);
        }
        pooled_unfolded.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let ks_uniform = ks_against_cdf(&pooled_unfolded, |x| x.clamp(-0.5, 0.5) + 0.5);
        let (hi, lo) = mean_extreme_position(&unfolded_draws);
        let tag = alpha_tag(alpha);
        let rho_for_csv = rho.clone();
        write_density_csv(
            &config.out_dir,
            &format!("stable-density-alpha{tag}.csv"),
            &macro_hist,
            move |x| rho_for_csv.density(x),
        )?;
        write_density_csv(
            &config.out_dir,
            &format!("stable-unfolded-alpha{tag}.csv"),
            &unfolded_hist,
            |_| 1.0,
        )?;
        let rho_ref = rho.clone();
        let (max_dev, n_eff) =
            max_bin_deviation(&macro_hist, &move |x| rho_ref.density(x), 500.0, |_| true);
        summary.comparisons.push(Comparison {
            name: format!("stable-density-alpha{tag}"),
            ks: f64::NAN,
            max_bin_dev: max_dev,
            n_eff,
        });
        summary.comparisons.push(Comparison {
            name: format!("stable-unfolded-alpha{tag}"),
            ks: ks_uniform,
            max_bin_dev: f64::NAN,
            n_eff: pooled_unfolded.len() as u64,
        });
        summary.notes.push(format!(
            "alpha = {alpha}: mean unfolded extremes = ({hi:.5}, {lo:.5})"
        ));
    }
    summary.write("stable-density")?;
    Ok(summary)
}

fn fig_stable_spacing(config: &RunConfig) -> Result<Summary, Error> {
    let mut summary = Summary::new(config);
    let executor = Executor::auto(config.workers);
    for &alpha in &config.alpha_grid {
        let spec = EnsembleSpec::stable_gue(config.n, alpha);
        let spectra = collect_spectra(
            &spec,
            config.trials,
            config.master_seed,
            executor,
            config.cache_dir().as_deref(),
        )?;
        let samples = samples_from(&spec, spectra);
        let map = UnfoldingMap::for_alpha(alpha)?;
        let unfolded: Vec<Vec<f64>> = samples.iter().map(|s| unfold(s, &map)).collect();
        let tag = alpha_tag(alpha);
        for k in 1..=4usize {
            let from_smallest = spacing_distribution(&unfolded, k, SpacingEnd::Smallest);
            let from_largest = spacing_distribution(&unfolded, k, SpacingEnd::Largest);
            write_spacing_csv(
                &config.out_dir,
                &format!("stable-spacing-alpha{tag}-k{k}.csv"),
                k,
                &spacing_histogram(&from_smallest, config.bins.spacing),
            )?;
            write_spacing_csv(
                &config.out_dir,
                &format!("stable-spacing-alpha{tag}-mirror-k{k}.csv"),
                k,
                &spacing_histogram(&from_largest, config.bins.spacing),
            )?;
            let sorted = from_smallest.sorted();
            let ks_poisson = ks_against_cdf(&sorted, |s| 1.0 - (-s.max(0.0)).exp());
            let symmetry = ks_two_sample(&sorted, &from_largest.sorted());
            summary.comparisons.push(Comparison {
                name: format!("stable-spacing-alpha{tag}-k{k}-vs-poisson"),
                ks: ks_poisson,
                max_bin_dev: f64::NAN,
                n_eff: sorted.len() as u64,
            });
            summary.comparisons.push(Comparison {
                name: format!("stable-spacing-alpha{tag}-k{k}-symmetry"),
                ks: symmetry,
                max_bin_dev: f64::NAN,
                n_eff: sorted.len() as u64,
            });
        }
    }
    summary.write("stable-spacing")?;
    Ok(summary)
}

// ---------------------------------------------------------------------------
// probes
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct TransitionPoint {
    pub gamma: f64,
    pub lambda0: f64,
    pub ks_poisson: f64,
    pub ks_wigner: f64,
    pub gaps_used: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionReport {
    pub config: RunConfig,
    pub points: Vec<TransitionPoint>,
    pub ks_poisson_monotone_decreasing_in_gamma: bool,
}

/// Spacing statistics near base points λ ∝ N^γ for γ spanning the
/// predicted crossover; reports KS distances to Poisson and Wigner.
pub fn transition_scan(config: &RunConfig) -> Result<TransitionReport, Error> {
    config.validate()?;
    if config.m < 2 {
        return Err(Error::InvalidConfig {
            detail: "transition-scan needs a product length M >= 2".into(),
        });
    }
    let executor = Executor::auto(config.workers);
    let l = config.l_grid[0].max(2);
    let spec = EnsembleSpec::inverse_ginibre_sum(config.n, config.m, l);
    let spectra = collect_spectra(
        &spec,
        config.trials,
        config.master_seed,
        executor,
        config.cache_dir().as_deref(),
    )?;
    let gammas: Vec<f64> = if config.gamma_grid.is_empty() {
        let lo = 1.0 - config.m as f64 - 0.5;
        let steps = ((1.0 - lo) / 0.5).round() as usize;
        (0..=steps).map(|i| lo + 0.5 * i as f64).collect()
    } else {
        config.gamma_grid.clone()
    };
    let mut points = Vec::new();
    for &gamma in &gammas {
        let lambda0 = (config.n as f64).powf(gamma);
        let mut gaps = Vec::new();
        for eig in &spectra {
            let mut best = (f64::INFINITY, 0usize);
            for (i, &l) in eig.iter().enumerate() {
                let d = (l.ln() - lambda0.ln()).abs();
                if d < best.0 {
                    best = (d, i);
                }
            }
            let i = best.1;
            if i + 1 < eig.len() {
                gaps.push(eig[i + 1] - eig[i]);
            }
        }
        let mean = gaps.iter().sum::<f64>() / gaps.len().max(1) as f64;
        let mut norm: Vec<f64> = gaps.iter().map(|g| g / mean).collect();
        norm.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let ks_poisson = ks_against_cdf(&norm, |s| 1.0 - (-s.max(0.0)).exp());
        let wigner_cdf = |s: f64| {
            quad::adaptive(&mut wigner_surmise, 0.0, s.max(0.0), 1e-9, 1e-12)
        };
        let ks_wigner = ks_against_cdf(&norm, wigner_cdf);
        points.push(TransitionPoint {
            gamma,
            lambda0,
            ks_poisson,
            ks_wigner,
            gaps_used: norm.len() as u64,
        });
    }
    let monotone = points.windows(2).all(|w| w[1].ks_poisson <= w[0].ks_poisson + 0.02);
    let report = TransitionReport {
        config: config.clone(),
        points,
        ks_poisson_monotone_decreasing_in_gamma: monotone,
    };
    fs::create_dir_all(&config.out_dir)?;
    fs::write(
        config.out_dir.join("transition-scan.json"),
        serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct PoissonProbePoint {
    pub l: usize,
    pub ks_within_poisson: Option<f64>,
    pub ks_between_poisson: f64,
    pub within_samples: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoissonProbeReport {
    pub config: RunConfig,
    pub points: Vec<PoissonProbePoint>,
    pub ks_within_strictly_decreasing: bool,
}

/// Within-cluster spacings against e^{-s} as L grows at M = 1.
pub fn poisson_limit_probe(config: &RunConfig) -> Result<PoissonProbeReport, Error> {
    config.validate()?;
    let executor = Executor::auto(config.workers);
    let c_m = unfolding_constant(config.m);
    let mut points = Vec::new();
    for &l in &config.l_grid {
        let spec = EnsembleSpec::inverse_ginibre_sum(config.n, config.m, l);
        let spectra = collect_spectra(
            &spec,
            config.trials,
            config.master_seed,
            executor,
            config.cache_dir().as_deref(),
        )?;
        let samples = samples_from(&spec, spectra);
        let within = if l >= 2 {
            let pool = within_cluster_pool(&samples, c_m, l);
            let ks = ks_against_cdf(&pool, |s| 1.0 - (-s.max(0.0)).exp());
            points.push(PoissonProbePoint {
                l,
                ks_within_poisson: Some(ks),
                ks_between_poisson: 0.0,
                within_samples: pool.len() as u64,
            });
            true
        } else {
            points.push(PoissonProbePoint {
                l,
                ks_within_poisson: None,
                ks_between_poisson: 0.0,
                within_samples: 0,
            });
            false
        };
        // between-cluster gap: from the last member of cluster 1 to the
        // first member of cluster 2
        let draws: Vec<Vec<f64>> = samples.iter().map(|s| tail_transform(s, c_m)).collect();
        let series = spacing_distribution(&draws, l.max(1), SpacingEnd::Smallest);
        let ks_between = ks_against_cdf(&series.sorted(), |s| 1.0 - (-s.max(0.0)).exp());
        if let Some(last) = points.last_mut() {
            last.ks_between_poisson = ks_between;
        }
        let _ = within;
    }
    let within: Vec<f64> = points.iter().filter_map(|p| p.ks_within_poisson).collect();
    let decreasing = within.windows(2).all(|w| w[1] < w[0]);
    let report = PoissonProbeReport {
        config: config.clone(),
        points,
        ks_within_strictly_decreasing: decreasing,
    };
    fs::create_dir_all(&config.out_dir)?;
    fs::write(
        config.out_dir.join("poisson-probe.json"),
        serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturationPoint {
    pub alpha: f64,
    pub n: usize,
    pub mean_largest_mu: f64,
    pub mean_smallest_mu: f64,
    pub stderr: f64,
    pub increment_from_previous_n: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturationReport {
    pub config: RunConfig,
    pub points: Vec<SaturationPoint>,
}

/// Mean unfolded positions of the extreme eigenvalues across an N grid; the
/// increments are measured, saturation is not asserted.
pub fn saturation_probe(config: &RunConfig) -> Result<SaturationReport, Error> {
    config.validate()?;
    let executor = Executor::auto(config.workers);
    let mut points = Vec::new();
    for &alpha in &config.alpha_grid {
        let map = UnfoldingMap::for_alpha(alpha)?;
        let mut prev: Option<f64> = None;
        for &n in &config.n_grid {
            let spec = EnsembleSpec::stable_gue(n, alpha);
            let spectra = collect_spectra(
                &spec,
                config.trials,
                config.master_seed,
                executor,
                config.cache_dir().as_deref(),
            )?;
            let samples = samples_from(&spec, spectra);
            let unfolded: Vec<Vec<f64>> = samples.iter().map(|s| unfold(s, &map)).collect();
            let (hi, lo) = mean_extreme_position(&unfolded);
            let var = unfolded
                .iter()
                .map(|d| (d.last().unwrap() - hi).powi(2))
                .sum::<f64>()
                / (unfolded.len().saturating_sub(1)).max(1) as f64;
            let stderr = (var / unfolded.len() as f64).sqrt();
            points.push(SaturationPoint {
                alpha,
                n,
                mean_largest_mu: hi,
                mean_smallest_mu: lo,
                stderr,
                increment_from_previous_n: prev.map(|p| hi - p),
            });
            prev = Some(hi);
        }
    }
    let report = SaturationReport {
        config: config.clone(),
        points,
    };
    fs::create_dir_all(&config.out_dir)?;
    fs::write(
        config.out_dir.join("saturation-probe.json"),
        serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeProbPoint {
    pub m: usize,
    pub l: usize,
    pub max_r_deviation: f64,
    pub points_evaluated: usize,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SCheck {
    pub m: usize,
    pub chi: f64,
    pub value: f64,
    pub theory: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeProbReport {
    pub config: RunConfig,
    pub r_checks: Vec<FreeProbPoint>,
    pub s_checks: Vec<SCheck>,
}

/// Analytic Green function of the heavy-tailed macroscopic law by
/// quadrature (used to pin the y grid).
pub fn analytic_green(z: C64, m: usize) -> C64 {
    let cut = 1e8f64;
    quad::adaptive_complex(
        &mut |l: f64| {
            let rho = product_sum_macro_density(l, m).unwrap_or(0.0);
            (z - l).finv() * rho
        },
        1.0 / densities::fuss_catalan_edge(m),
        cut,
        1e-9,
        1e-12,
    )
}

/// y grid in the lower half plane, pinned by the analytic Green function on
/// a fixed line of z points.
pub fn theory_y_grid(m: usize) -> Vec<C64> {
    (0..10)
        .map(|j| analytic_green(C64::new(-1.4 + 0.13 * j as f64, 0.35), m))
        .collect()
}

/// Empirical R-transform deviations from the stable-law prediction plus
/// S-transform spot checks; emits freeprob-check.json.
pub fn freeprob_check(config: &RunConfig) -> Result<FreeProbReport, Error> {
    config.validate()?;
    let executor = Executor::auto(config.workers);
    let m_grid: Vec<usize> = if config.m == 1 { vec![1, 2] } else { vec![config.m] };
    let mut r_checks = Vec::new();
    let mut s_checks = Vec::new();
    for &m in &m_grid {
        let grid = theory_y_grid(m);
        for &l in &config.l_grid {
            let spec = EnsembleSpec::inverse_ginibre_sum(config.n, m, l);
            let spectra = collect_spectra(
                &spec,
                config.trials,
                config.master_seed,
                executor,
                config.cache_dir().as_deref(),
            )?;
            let samples = samples_from(&spec, spectra);
            let macro_draws: Vec<Vec<f64>> =
                samples.iter().map(macroscopic_transform).collect();
            let est = EmpiricalGreen::from_draws(&macro_draws);
            let mut worst = 0.0f64;
            let mut evaluated = 0usize;
            let mut warnings = Vec::new();
            for &y in &grid {
                match est.r_transform(y) {
                    Ok(r) => {
                        let theory = r_stable_theory(y, m);
                        evaluated += 1;
                        worst = worst.max((r - theory).norm() / theory.norm());
                    }
                    Err(e) => warnings.push(format!("m={m} l={l} y={y}: {e}")),
                }
            }
            r_checks.push(FreeProbPoint {
                m,
                l,
                max_r_deviation: worst,
                points_evaluated: evaluated,
                warnings,
            });
            if l == 1 {
                for &chi in &[-0.2, -0.35, -0.5] {
                    if let Ok(s) = est.s_transform(chi) {
                        s_checks.push(SCheck {
                            m,
                            chi,
                            value: s,
                            theory: (-chi).powi(m as i32),
                        });
                    }
                }
            }
        }
    }
    let report = FreeProbReport {
        config: config.clone(),
        r_checks,
        s_checks,
    };
    fs::create_dir_all(&config.out_dir)?;
    fs::write(
        config.out_dir.join("freeprob-check.json"),
        serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    Ok(report)
}

/// Emits a reference curve as CSV (lambda, rho) on a uniform grid.
pub fn write_reference_csv(
    config: &RunConfig,
    name: &str,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<PathBuf, Error> {
    let alpha = config.alpha_grid.first().copied().unwrap_or(1.0);
    let l = config.l_grid.first().copied().unwrap_or(1);
    let curve = densities::reference_curve(name, config.m, l, alpha, config.sigma)?;
    if points < 2 || !(hi > lo) {
        return Err(Error::InvalidConfig {
            detail: "reference grid needs at least two points and hi > lo".into(),
        });
    }
    fs::create_dir_all(&config.out_dir)?;
    let mut out = String::from("lambda,rho\n");
    let step = (hi - lo) / (points - 1) as f64;
    for i in 0..points {
        let x = lo + step * i as f64;
        let v = curve.eval(x);
        if v.is_nan() {
            return Err(Error::NonConvergence {
                what: format!("curve '{name}' is not evaluable at lambda = {x}"),
            });
        }
        out.push_str(&format!("{x},{v}\n"));
    }
    let path = config.out_dir.join(format!("reference-{name}.csv"));
    fs::write(&path, &out)?;
    Ok(path)
}

/// Convenience map of comparisons by name.
pub fn comparison_map(summary: &Summary) -> BTreeMap<String, Comparison> {
    summary
        .comparisons
        .iter()
        .map(|c| (c.name.clone(), c.clone()))
        .collect()
}
