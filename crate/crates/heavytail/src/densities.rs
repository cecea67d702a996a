//! Analytic reference curves: macroscopic laws, edge kernels, spacing laws,
//! moments, scaling constants and the spectral unfolding map.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Error;
use crate::quad;
use crate::special::{airy_ai, bessel_j0, bessel_j1, gamma_fn, meijer_g, HardEdgeKernel, MeijerGParams};
use crate::stable::{StableDensity, StableSpec};

/// How a reference curve is normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// integrates to one over the support
    Probability,
    /// mean level spacing tends to one (micro-scale point process density)
    MeanSpacingOne,
    /// density of a point process per draw (integrates to the mean count)
    PerEigenvalue,
}

/// Evaluable reference curve with declared support and normalization.
#[derive(Clone)]
pub struct AnalyticDensity {
    pub support: (f64, f64),
    pub normalization: Normalization,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl AnalyticDensity {
    pub fn new(
        support: (f64, f64),
        normalization: Normalization,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        AnalyticDensity {
            support,
            normalization,
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < self.support.0 || x > self.support.1 {
            0.0
        } else {
            (self.eval)(x)
        }
    }

    /// ∫_a^b of the curve, clipped to the support.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let lo = a.max(self.support.0);
        let hi = b.min(self.support.1.min(1e12));
        if hi <= lo {
            return 0.0;
        }
        quad::adaptive(&mut |x| self.eval(x), lo, hi, 1e-9, 1e-12)
    }
}

// ---------------------------------------------------------------------------
// closed forms
// ---------------------------------------------------------------------------

/// Marčenko–Pastur law on [0, 4]: √(4-λ) / (2π√λ).
pub fn mp_density(lambda: f64) -> f64 {
    if lambda <= 0.0 || lambda >= 4.0 {
        0.0
    } else {
        (4.0 - lambda).sqrt() / (2.0 * PI * lambda.sqrt())
    }
}

/// Macroscopic law of N·X†X on [1/4, ∞): √(4 - 1/λ) / (2π λ^{3/2}).
pub fn inv_mp_density(lambda: f64) -> f64 {
    if lambda <= 0.25 {
        0.0
    } else {
        (4.0 - 1.0 / lambda).sqrt() / (2.0 * PI * lambda.powf(1.5))
    }
}

/// Airy soft-edge density [Ai'(s)]² - s [Ai(s)]².
pub fn airy_edge_density(s: f64) -> f64 {
    let (ai, aip) = airy_ai(s);
    aip * aip - s * ai * ai
}

/// Bessel hard-edge density (π²/2) λ [J0²(πλ) + J1²(πλ)].
pub fn bessel_hard_edge_density(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    let x = PI * lambda;
    0.5 * PI * PI * lambda * (bessel_j0(x).powi(2) + bessel_j1(x).powi(2))
}

/// Inverse Bessel tail density λ^{-2} ρ_Bessel(1/λ).
pub fn inverse_bessel_density(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    bessel_hard_edge_density(1.0 / lambda) / (lambda * lambda)
}

/// Tail law of the L-fold sum: L² ρ_invB(Lλ).
pub fn tail_density_l(lambda: f64, l: usize) -> f64 {
    let lf = l as f64;
    lf * lf * inverse_bessel_density(lf * lambda)
}

/// Poisson spacing law e^{-s}.
pub fn poisson_spacing(s: f64) -> f64 {
    if s < 0.0 {
        0.0
    } else {
        (-s).exp()
    }
}

/// Wigner surmise (32/π²) s² exp(-4s²/π).
pub fn wigner_surmise(s: f64) -> f64 {
    if s < 0.0 {
        0.0
    } else {
        32.0 / (PI * PI) * s * s * (-4.0 * s * s / PI).exp()
    }
}

/// Lorentz (Cauchy) comparison curve c / (π (1 + c²λ²)).
pub fn cauchy_density(lambda: f64, c: f64) -> f64 {
    c / (PI * (1.0 + c * c * lambda * lambda))
}

/// Paper-normalized Fuss-Catalan numbers Γ[(M+1)n - M] / (Γ[Mn - M + 2] Γ[n]);
/// the value at n is the (n-1)st moment of the Fuss-Catalan density.
pub fn fuss_catalan_moment(n: usize, m: usize) -> f64 {
    assert!(n >= 1, "moment index starts at 1");
    let (nf, mf) = (n as f64, m as f64);
    gamma_fn((mf + 1.0) * nf - mf) / (gamma_fn(mf * nf - mf + 2.0) * gamma_fn(nf))
}

/// Unfolding constant c_M = Γ[(M+2)/(M+1)] Γ[M/(M+1)].
pub fn unfolding_constant(m: usize) -> f64 {
    let mf = m as f64;
    gamma_fn((mf + 2.0) / (mf + 1.0)) * gamma_fn(mf / (mf + 1.0))
}

/// Upper support edge (M+1)^{M+1} / M^M of the Fuss-Catalan density.
pub fn fuss_catalan_edge(m: usize) -> f64 {
    let mf = m as f64;
    (mf + 1.0).powi(m as i32 + 1) / mf.powi(m as i32)
}

/// Fuss-Catalan density of squared singular values of M-fold products.
pub fn fuss_catalan_density(lambda: f64, m: usize) -> Result<f64, Error> {
    assert!(m >= 1);
    let edge = fuss_catalan_edge(m);
    // the density vanishes like sqrt(edge - λ); the clamped sliver holds
    // under 1e-5 of the mass and keeps the residue series finite
    if lambda <= 0.0 || lambda >= edge * (1.0 - 2.5e-4) {
        return Ok(0.0);
    }
    let mf = m as f64;
    let pref = mf.powf(mf - 1.5) / ((2.0 * PI).sqrt() * (mf + 1.0).powf(mf + 0.5));
    let g = meijer_g(&MeijerGParams::fuss_catalan(m, lambda / edge))?;
    Ok((pref * g).max(0.0))
}

/// Macroscopic heavy-tailed law of N^M Y via the λ → 1/λ Jacobian identity.
pub fn product_sum_macro_density(lambda: f64, m: usize) -> Result<f64, Error> {
    if lambda <= 0.0 {
        return Ok(0.0);
    }
    Ok(fuss_catalan_density(1.0 / lambda, m)? / (lambda * lambda))
}

fn hard_edge_kernel(m: usize) -> Result<&'static HardEdgeKernel, Error> {
    static KERNELS: OnceLock<Mutex<HashMap<usize, &'static HardEdgeKernel>>> = OnceLock::new();
    let map = KERNELS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().expect("kernel cache poisoned");
    if let Some(k) = guard.get(&m) {
        return Ok(k);
    }
    let built: &'static HardEdgeKernel = Box::leak(Box::new(HardEdgeKernel::new(m)?));
    guard.insert(m, built);
    Ok(built)
}

/// Meijer-G hard-edge kernel density
/// (M+1) c_M^{M+1} λ^M ∫_0^1 p(t w) q(t w) dt with w = (c_M λ)^{M+1}.
pub fn meijer_kernel_density(lambda: f64, m: usize) -> Result<f64, Error> {
    assert!((1..=4).contains(&m));
    if lambda <= 0.0 {
        return Ok(0.0);
    }
    let c = unfolding_constant(m);
    let w = (c * lambda).powi(m as i32 + 1);
    let k = hard_edge_kernel(m)?;
    let diag = k.kernel_diagonal(w)?;
    Ok(((m as f64 + 1.0) * c.powi(m as i32 + 1) * lambda.powi(m as i32) * diag).max(0.0))
}

/// Microscopic tail law λ^{-2} ρ_MeijerG(1/λ).
pub fn inverse_meijer_density(lambda: f64, m: usize) -> Result<f64, Error> {
    if lambda <= 0.0 {
        return Ok(0.0);
    }
    Ok(meijer_kernel_density(1.0 / lambda, m)? / (lambda * lambda))
}

// ---------------------------------------------------------------------------
// stable GUE macroscopic law and unfolding
// ---------------------------------------------------------------------------

fn stable_density_for(alpha_tilde: f64) -> Result<Arc<StableDensity>, Error> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<StableDensity>>>> = OnceLock::new();
    let spec = StableSpec::new(alpha_tilde)?;
    let map = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().expect("stable cache poisoned");
    Ok(guard
        .entry(alpha_tilde.to_bits())
        .or_insert_with(|| Arc::new(StableDensity::build(spec)))
        .clone())
}

/// Variance-averaged Wigner semicircle: the macroscopic law of the stable
/// GUE in the λ/√N variable.
#[derive(Clone)]
pub struct AveragedSemicircle {
    alpha: f64,
    stable: Arc<StableDensity>,
}

impl AveragedSemicircle {
    pub fn new(alpha: f64) -> Result<Self, Error> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::InvalidConfig {
                detail: format!("stable GUE exponent must lie in (0,2), got {alpha}"),
            });
        }
        Ok(AveragedSemicircle {
            alpha,
            stable: stable_density_for(alpha / 2.0)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// ρ_α(λ) = ∫_{λ²/4}^∞ √(4x - λ²)/(2πx) p(x) dx.
    pub fn density(&self, lambda: f64) -> f64 {
        let l2 = lambda * lambda;
        let lo = l2 / 4.0;
        let hi = (1e12f64).max(1e6 * lo);
        let st = &self.stable;
        integrate_log(
            &mut |x: f64| {
                let arg = 4.0 * x - l2;
                if arg <= 0.0 {
                    0.0
                } else {
                    arg.sqrt() / (2.0 * PI * x) * st.eval(x)
                }
            },
            lo,
            hi,
        )
        // integrand tail ~ x^{-1/2} p(x): bound the remainder by the
        // survival mass, negligible at this ceiling
    }

    /// Mass of the law above λ ≥ 0:
    /// ∫_0^∞ p(x) S(λ/(2√x)) dx with S the unit semicircle tail.
    pub fn tail_mass(&self, lambda: f64) -> f64 {
        assert!(lambda >= 0.0);
        if lambda == 0.0 {
            return 0.5;
        }
        let st = &self.stable;
        let lo = lambda * lambda / 4.0;
        let hi = (1e10f64).max(1e6 * lambda * lambda);
        let body = integrate_log(
            &mut |x: f64| {
                let w = lambda / (2.0 * x.sqrt());
                if w >= 1.0 {
                    return 0.0;
                }
                st.eval(x) * (w.acos() - w * (1.0 - w * w).sqrt()) / PI
            },
            lo,
            hi,
        );
        // beyond the ceiling the semicircle window is essentially full
        body + 0.5 * st.survival(hi)
    }
}

/// Quadrature in the log variable; keeps adaptive panels resolvable over
/// many decades of x.
fn integrate_log<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> f64 {
    let lo = lo.max(1e-12);
    if hi <= lo {
        return 0.0;
    }
    quad::adaptive(
        &mut |u: f64| {
            let x = u.exp();
            f(x) * x
        },
        lo.ln(),
        hi.ln(),
        1e-10,
        1e-14,
    )
}

/// Monotone unfolding map μ(λ) = ∫_0^λ ρ_α: the real line onto (-1/2, 1/2).
#[derive(Clone, Debug)]
pub struct UnfoldingMap {
    alpha: f64,
    grid: Vec<f64>,
    mu: Vec<f64>,
    /// tail coefficient: 1/2 - μ(λ) ≈ coeff · λ^{-α} beyond the grid
    tail_coeff: f64,
}

static UNFOLD_CACHE: OnceLock<Mutex<HashMap<u64, Arc<UnfoldingMap>>>> = OnceLock::new();

impl UnfoldingMap {
    /// Builds (or fetches) the cached map for this exponent.
    pub fn for_alpha(alpha: f64) -> Result<Arc<UnfoldingMap>, Error> {
        let cache = UNFOLD_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        {
            let guard = cache.lock().expect("unfold cache poisoned");
            if let Some(m) = guard.get(&alpha.to_bits()) {
                return Ok(m.clone());
            }
        }
        let built = Arc::new(Self::build(alpha)?);
        let mut guard = cache.lock().expect("unfold cache poisoned");
        Ok(guard.entry(alpha.to_bits()).or_insert(built).clone())
    }

    fn build(alpha: f64) -> Result<Self, Error> {
        let rho = AveragedSemicircle::new(alpha)?;
        // dense head then log-spaced shoulders out to the far tail
        let mut grid = Vec::new();
        let mut x = 0.0f64;
        while x < 2.0 {
            grid.push(x);
            x += 0.05;
        }
        let mut x = 2.0f64;
        while x <= 2.0e4 {
            grid.push(x);
            x *= 1.12;
        }
        let mu: Vec<f64> = grid
            .iter()
            .map(|&l| {
                if l == 0.0 {
                    0.0
                } else {
                    0.5 - rho.tail_mass(l)
                }
            })
            .collect();
        let last = *grid.last().unwrap();
        let tail_coeff = (0.5 - mu[mu.len() - 1]) * last.powf(alpha);
        Ok(UnfoldingMap {
            alpha,
            grid,
            mu,
            tail_coeff,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// μ(λ) ∈ (-1/2, 1/2), odd in λ, strictly increasing.
    pub fn eval(&self, lambda: f64) -> f64 {
        let a = lambda.abs();
        let sign = if lambda < 0.0 { -1.0 } else { 1.0 };
        let last = *self.grid.last().unwrap();
        if a >= last {
            return sign * (0.5 - self.tail_coeff * a.powf(-self.alpha)).min(0.5 - f64::MIN_POSITIVE);
        }
        let idx = match self
            .grid
            .binary_search_by(|g| g.partial_cmp(&a).unwrap())
        {
            Ok(i) => return sign * self.mu[i],
            Err(i) => i,
        };
        let (g0, g1) = (self.grid[idx - 1], self.grid[idx]);
        let (m0, m1) = (self.mu[idx - 1], self.mu[idx]);
        let t = (a - g0) / (g1 - g0);
        sign * ((1.0 - t) * m0 + t * m1)
    }

    /// Inverse of `eval` by monotone bracketing and bisection.
    pub fn inverse(&self, mu: f64) -> f64 {
        assert!(mu > -0.5 && mu < 0.5, "unfolded variable out of (-1/2,1/2)");
        let target = mu.abs();
        let sign = if mu < 0.0 { -1.0 } else { 1.0 };
        if target == 0.0 {
            return 0.0;
        }
        // bracket above the grid via the analytic tail
        let last_mu = self.mu[self.mu.len() - 1];
        if target >= last_mu {
            let lam = (self.tail_coeff / (0.5 - target)).powf(1.0 / self.alpha);
            return sign * lam;
        }
        let mut lo = 0.0f64;
        let mut hi = *self.grid.last().unwrap();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-13 * hi.max(1.0) {
                break;
            }
        }
        sign * 0.5 * (lo + hi)
    }
}

/// Scalar convenience over the cached stable grids: ρ_α(λ).
pub fn averaged_semicircle(lambda: f64, alpha: f64) -> Result<f64, Error> {
    Ok(AveragedSemicircle::new(alpha)?.density(lambda))
}

/// μ(λ) through the cached unfolding map.
pub fn unfolding_map(lambda: f64, alpha: f64) -> Result<f64, Error> {
    Ok(UnfoldingMap::for_alpha(alpha)?.eval(lambda))
}

// ---------------------------------------------------------------------------
// AnalyticDensity wrappers (named curves for the CLI and comparisons)
// ---------------------------------------------------------------------------

/// Looks up a reference curve by name; `m`, `l`, `alpha`, `c` feed the
/// parametric families.
pub fn reference_curve(
    name: &str,
    m: usize,
    l: usize,
    alpha: f64,
    c: f64,
) -> Result<AnalyticDensity, Error> {
    let curve = match name {
        "mp" => AnalyticDensity::new((0.0, 4.0), Normalization::Probability, mp_density),
        "inv-mp" => AnalyticDensity::new(
            (0.25, f64::INFINITY),
            Normalization::Probability,
            inv_mp_density,
        ),
        "airy-edge" => AnalyticDensity::new(
            (f64::NEG_INFINITY, f64::INFINITY),
            Normalization::MeanSpacingOne,
            airy_edge_density,
        ),
        "bessel-hard-edge" => AnalyticDensity::new(
            (0.0, f64::INFINITY),
            Normalization::MeanSpacingOne,
            bessel_hard_edge_density,
        ),
        "inverse-bessel" => AnalyticDensity::new(
            (0.0, f64::INFINITY),
            Normalization::MeanSpacingOne,
            inverse_bessel_density,
        ),
        "tail" => {
            let l = l.max(1);
            AnalyticDensity::new(
                (0.0, f64::INFINITY),
                Normalization::MeanSpacingOne,
                move |x| tail_density_l(x, l),
            )
        }
        "fuss-catalan" => {
            let m = m.max(1);
            AnalyticDensity::new(
                (0.0, fuss_catalan_edge(m)),
                Normalization::Probability,
                move |x| fuss_catalan_density(x, m).unwrap_or(0.0),
            )
        }
        "macro" => {
            let m = m.max(1);
            AnalyticDensity::new(
                (1.0 / fuss_catalan_edge(m), f64::INFINITY),
                Normalization::Probability,
                move |x| product_sum_macro_density(x, m).unwrap_or(0.0),
            )
        }
        "meijer-kernel" => {
            let m = m.max(1);
            AnalyticDensity::new(
                (0.0, f64::INFINITY),
                Normalization::MeanSpacingOne,
                move |x| meijer_kernel_density(x, m).unwrap_or(f64::NAN),
            )
        }
        "inverse-meijer" => {
            let m = m.max(1);
            AnalyticDensity::new(
                (0.0, f64::INFINITY),
                Normalization::MeanSpacingOne,
                move |x| inverse_meijer_density(x, m).unwrap_or(f64::NAN),
            )
        }
        "poisson-spacing" => {
            AnalyticDensity::new((0.0, f64::INFINITY), Normalization::Probability, poisson_spacing)
        }
        "wigner-surmise" => {
            AnalyticDensity::new((0.0, f64::INFINITY), Normalization::Probability, wigner_surmise)
        }
        "averaged-semicircle" => {
            let rho = AveragedSemicircle::new(alpha)?;
            AnalyticDensity::new(
                (f64::NEG_INFINITY, f64::INFINITY),
                Normalization::Probability,
                move |x| rho.density(x),
            )
        }
        "cauchy" => AnalyticDensity::new(
            (f64::NEG_INFINITY, f64::INFINITY),
            Normalization::Probability,
            move |x| cauchy_density(x, c),
        ),
        "unfolding-map" => {
            let map = UnfoldingMap::for_alpha(alpha)?;
            AnalyticDensity::new(
                (f64::NEG_INFINITY, f64::INFINITY),
                Normalization::MeanSpacingOne,
                move |x| map.eval(x),
            )
        }
        other => {
            return Err(Error::InvalidConfig {
                detail: format!("unknown reference curve '{other}'"),
            })
        }
    };
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mp_values() {
        assert_eq!(mp_density(4.0), 0.0);
        assert_eq!(mp_density(5.0), 0.0);
        assert!((mp_density(2.0) - 1.0 / (2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn inv_mp_values_and_mass() {
        assert_eq!(inv_mp_density(0.25), 0.0);
        assert!((inv_mp_density(1.0) - 3.0f64.sqrt() / (2.0 * PI)).abs() < 1e-14);
        // heavy λ^{-3/2} tail: finite part by quadrature, remainder analytic
        let cut = 1e8f64;
        let body = quad::adaptive(&mut inv_mp_density, 0.25, cut, 1e-10, 1e-12);
        let tail = 2.0 / (PI * cut.sqrt()); // ∫ λ^{-3/2}/π beyond the cut
        assert!((body + tail - 1.0).abs() < 1e-4, "mass = {}", body + tail);
    }

    #[test]
    fn airy_edge_values() {
        // ρ(0) = [Ai'(0)]²
        assert!((airy_edge_density(0.0) - 0.066_987).abs() < 1e-6);
        for i in 0..=100 {
            let s = -10.0 + 0.16 * i as f64;
            assert!(airy_edge_density(s) > 0.0, "s = {s}");
        }
        assert!(airy_edge_density(6.0) < 1e-6);
    }

    #[test]
    fn bessel_edge_values() {
        assert_eq!(bessel_hard_edge_density(0.0), 0.0);
        assert!((bessel_hard_edge_density(1.0) - 0.856_52).abs() < 1e-4);
        assert!((bessel_hard_edge_density(50.0) - 1.0).abs() < 0.01);
    }

    #[test]
    fn inverse_bessel_values() {
        assert!(
            (inverse_bessel_density(1.0) - bessel_hard_edge_density(1.0)).abs() < 1e-14
        );
        // ∝ λ^{-3} far out
        let r = inverse_bessel_density(100.0) / inverse_bessel_density(200.0);
        assert!((r - 8.0).abs() < 0.05, "ratio = {r}");
    }

    #[test]
    fn tail_density_composition() {
        assert_eq!(tail_density_l(0.7, 1), inverse_bessel_density(0.7));
        let v = tail_density_l(0.5, 2);
        assert!((v - 4.0 * inverse_bessel_density(1.0)).abs() < 1e-12);
        assert!((v - 3.4261).abs() < 2e-3, "4·ρ_invB(1) = {v}");
    }

    #[test]
    fn spacing_laws() {
        assert_eq!(poisson_spacing(0.0), 1.0);
        assert!((poisson_spacing(1.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(wigner_surmise(0.0), 0.0);
        assert!((wigner_surmise(1.0) - 0.907_589_2).abs() < 1e-6);
        for law in [poisson_spacing as fn(f64) -> f64, wigner_surmise] {
            let mass = quad::adaptive(&mut |s| law(s), 0.0, 40.0, 1e-10, 1e-12);
            let mean = quad::adaptive(&mut |s| s * law(s), 0.0, 40.0, 1e-10, 1e-12);
            assert!((mass - 1.0).abs() < 1e-8);
            assert!((mean - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn fuss_catalan_moments_table() {
        for m in 1..=4 {
            assert!((fuss_catalan_moment(1, m) - 1.0).abs() < 1e-12);
        }
        assert!((fuss_catalan_moment(4, 1) - 5.0).abs() < 1e-10);
        assert!((fuss_catalan_moment(3, 2) - 3.0).abs() < 1e-10);
    }

    #[test]
    fn unfolding_constants() {
        assert!((unfolding_constant(1) - PI / 2.0).abs() < 1e-12);
        assert!((unfolding_constant(2) - 1.209_20).abs() < 1e-5);
        assert!((unfolding_constant(200) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn fuss_catalan_density_matches_mp_at_m1() {
        for &x in &[0.5, 1.0, 2.0, 3.9] {
            let fc = fuss_catalan_density(x, 1).unwrap();
            assert!((fc - mp_density(x)).abs() < 1e-6, "x = {x}");
        }
    }

    #[test]
    fn fuss_catalan_support_and_origin_exponent() {
        let edge = fuss_catalan_edge(2);
        assert!((edge - 6.75).abs() < 1e-12);
        assert_eq!(fuss_catalan_density(6.76, 2).unwrap(), 0.0);
        assert!(fuss_catalan_density(6.74, 2).unwrap() > 0.0);
        // divergence exponent -M/(M+1) at the origin
        for m in 1..=2usize {
            let (x1, x2) = (1e-6, 1e-9);
            let r1 = fuss_catalan_density(x1, m).unwrap();
            let r2 = fuss_catalan_density(x2, m).unwrap();
            let slope = (r2.ln() - r1.ln()) / (x2.ln() - x1.ln());
            let want = -(m as f64) / (m as f64 + 1.0);
            assert!((slope - want).abs() < 5e-3, "m = {m}: slope {slope}");
        }
    }

    #[test]
    fn fuss_catalan_mass_and_moments_integrate() {
        // the (n-1)st moment of the density is the paper-normalized
        // Fuss-Catalan number FC_M(n)
        for m in 1..=2usize {
            let edge = fuss_catalan_edge(m);
            for n in 1..=4usize {
                let mom = quad::adaptive(
                    &mut |x: f64| x.powi(n as i32 - 1) * fuss_catalan_density(x, m).unwrap(),
                    0.0,
                    edge,
                    1e-8,
                    1e-10,
                );
                let want = fuss_catalan_moment(n, m);
                assert!(
                    ((mom - want) / want).abs() < 1e-4,
                    "m = {m}, n = {n}: {mom} vs {want}"
                );
            }
        }
    }

    #[test]
    fn meijer_kernel_reduces_to_bessel_at_m1() {
        for &x in &[0.25, 0.5, 1.0, 2.0] {
            let got = meijer_kernel_density(x, 1).unwrap();
            let want = bessel_hard_edge_density(x);
            assert!((got - want).abs() < 1e-6, "x = {x}: {got} vs {want}");
        }
    }

    #[test]
    fn meijer_kernel_mean_spacing_approaches_one() {
        // counting function minus λ settles to a constant once past the
        // first few oscillations
        for m in 1..=2usize {
            let n3 = quad::adaptive(
                &mut |x: f64| meijer_kernel_density(x, m).unwrap(),
                0.0,
                3.0,
                1e-8,
                1e-9,
            );
            let n4 = quad::adaptive(
                &mut |x: f64| meijer_kernel_density(x, m).unwrap(),
                0.0,
                4.0,
                1e-8,
                1e-9,
            );
            assert!(
                ((n4 - n3) - 1.0).abs() < 0.03,
                "m = {m}: counts {n3} .. {n4}"
            );
        }
    }

    #[test]
    fn meijer_first_peak_moves_toward_half_integer() {
        let peak = |m: usize| -> f64 {
            let mut best = (0.0, 0.0);
            for i in 1..260 {
                let x = 0.003 * i as f64;
                let v = meijer_kernel_density(x, m).unwrap();
                if v > best.1 {
                    best = (x, v);
                }
            }
            best.0
        };
        let (p1, p2, p3) = (peak(1), peak(2), peak(3));
        assert!(p1 > 0.3 && p3 < 0.65, "peaks {p1} {p2} {p3}");
        assert!(
            (p2 - 0.5).abs() <= (p1 - 0.5).abs() + 1e-3,
            "peaks {p1} {p2}"
        );
        assert!(
            (p3 - 0.5).abs() <= (p2 - 0.5).abs() + 1e-3,
            "peaks {p2} {p3}"
        );
    }

    #[test]
    fn inverse_meijer_jacobian_identity() {
        // ∫_[a,Λ] ρ_invMG = ∫_[1/Λ,1/a] ρ_MG by substitution; compare at
        // M = 1 on a window inside the kernel's f64 domain
        let (a, lam) = (1.0 / 6.0f64, 0.8f64);
        let lhs = quad::adaptive(
            &mut |x: f64| inverse_meijer_density(x, 1).unwrap(),
            a,
            lam,
            1e-9,
            1e-10,
        );
        let rhs = quad::adaptive(
            &mut |x: f64| meijer_kernel_density(x, 1).unwrap(),
            1.0 / lam,
            1.0 / a,
            1e-9,
            1e-10,
        );
        assert!((lhs - rhs).abs() < 1e-6, "{lhs} vs {rhs}");
    }

    #[test]
    fn averaged_semicircle_at_alpha_one() {
        let rho = AveragedSemicircle::new(1.0).unwrap();
        // closed-form reduction (1/π) E[x^{-1/2}] = 2/(π √(2π))
        let want = 2.0 / (PI * (2.0 * PI).sqrt());
        let got = rho.density(0.0);
        assert!((got / want - 1.0).abs() < 1e-3, "{got} vs {want}");
        assert!((got - 0.25397).abs() < 0.25397 * 0.002);
        // symmetry
        assert!((rho.density(1.3) - rho.density(-1.3)).abs() < 1e-9);
    }

    #[test]
    fn averaged_semicircle_tail_exponent() {
        for &alpha in &[0.5, 1.5] {
            let rho = AveragedSemicircle::new(alpha).unwrap();
            let (l1, l2) = (200.0, 400.0);
            let slope = (rho.density(l2).ln() - rho.density(l1).ln()) / (l2.ln() - l1.ln());
            assert!(
                (slope + 1.0 + alpha).abs() < 0.03,
                "alpha = {alpha}: slope = {slope}"
            );
        }
    }

    #[test]
    fn averaged_semicircle_mass() {
        let rho = AveragedSemicircle::new(1.0).unwrap();
        // 2·tail_mass(0) is the full mass by symmetry
        assert!((2.0 * rho.tail_mass(0.0) - 1.0).abs() < 1e-9);
        let half = quad::adaptive(&mut |x| rho.density(x), 0.0, 60.0, 1e-8, 1e-10);
        let beyond = rho.tail_mass(60.0);
        assert!((half + beyond - 0.5).abs() < 1e-4, "{}", half + beyond);
    }

    #[test]
    fn cauchy_matches_fig5_constants() {
        let rho1_zero = averaged_semicircle(0.0, 1.0).unwrap();
        let c = PI * rho1_zero;
        assert!((c - 0.79788).abs() < 0.002, "c = {c}");
        assert!((cauchy_density(0.0, c) - rho1_zero).abs() < 1e-12);
        // the two stable laws never coincide: both tails fall like λ^{-2}
        // but with different coefficients, so the gap grows outward
        let mut max_rel = 0.0f64;
        for &l in &[1.0, 2.0, 4.0, 8.0, 16.0] {
            let a = averaged_semicircle(l, 1.0).unwrap();
            let b = cauchy_density(l, c);
            max_rel = max_rel.max((a - b).abs() / b);
        }
        assert!(max_rel > 0.05, "max relative gap {max_rel}");
    }

    #[test]
    fn unfolding_map_properties() {
        let map = UnfoldingMap::for_alpha(1.0).unwrap();
        assert_eq!(map.eval(0.0), 0.0);
        assert!(map.eval(1e9) > 0.49999);
        assert!(map.eval(-1e9) < -0.49999);
        let mut prev = -0.6;
        for i in -40..=40 {
            let v = map.eval(i as f64 * 0.5);
            assert!(v > prev);
            prev = v;
        }
        // inverse round trip on a 10^3 grid
        for i in 0..1000 {
            let lam = -40.0 + 0.08 * i as f64;
            let mu = map.eval(lam);
            let back = map.inverse(mu);
            assert!(
                (back - lam).abs() < 1e-8 * lam.abs().max(1.0),
                "λ = {lam}, back = {back}"
            );
        }
    }

    #[test]
    fn reference_curve_lookup() {
        assert!(reference_curve("mp", 1, 1, 1.0, 1.0).is_ok());
        assert!(reference_curve("nope", 1, 1, 1.0, 1.0).is_err());
        let tail = reference_curve("tail", 1, 2, 1.0, 1.0).unwrap();
        assert!((tail.eval(0.5) - tail_density_l(0.5, 2)).abs() < 1e-12);
    }
}
