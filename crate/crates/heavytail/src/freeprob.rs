//! Numerical free-probability checks: empirical Green functions, R- and
//! S-transforms, additivity and scaling rules.

use num_complex::Complex;
use std::f64::consts::PI;

use crate::error::Error;

pub type C64 = Complex<f64>;

/// Empirical Green function of pooled macroscopic eigenvalues: the mean of
/// 1/(z - λ) is an exact rational function evaluable anywhere off the
/// support.
#[derive(Clone, Debug)]
pub struct EmpiricalGreen {
    eigenvalues: Vec<f64>,
    draws: usize,
}

impl EmpiricalGreen {
    pub fn from_draws(draws: &[Vec<f64>]) -> Self {
        let mut pooled = Vec::with_capacity(draws.iter().map(Vec::len).sum());
        for d in draws {
            pooled.extend_from_slice(d);
        }
        EmpiricalGreen {
            eigenvalues: pooled,
            draws: draws.len(),
        }
    }

    pub fn sample_size(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Rescales every pooled eigenvalue (for the scalar-scaling rule).
    pub fn scaled(&self, mu: f64) -> Self {
        EmpiricalGreen {
            eigenvalues: self.eigenvalues.iter().map(|&l| mu * l).collect(),
            draws: self.draws,
        }
    }

    /// G(z) = mean over pooled eigenvalues of 1/(z - λ).
    pub fn green(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &l in &self.eigenvalues {
            acc += (z - l).finv();
        }
        acc / self.eigenvalues.len() as f64
    }

    fn green_derivative(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &l in &self.eigenvalues {
            let inv = (z - l).finv();
            acc -= inv * inv;
        }
        acc / self.eigenvalues.len() as f64
    }

    /// Solves G(z) = y by damped Newton seeded from the asymptotic branch
    /// z ≈ 1/y, holding z in the closed upper half plane.
    pub fn invert_green(&self, y: C64) -> Result<C64, Error> {
        let mut z = y.finv();
        if z.im < 0.0 {
            z = C64::new(z.re, z.im.max(1e-3));
        }
        let mut residual = self.green(z) - y;
        for _ in 0..200 {
            if residual.norm() <= 1e-12 * y.norm() {
                return Ok(z);
            }
            let slope = self.green_derivative(z);
            if slope.norm() == 0.0 {
                break;
            }
            let mut step = -residual / slope;
            // Herglotz-sector projection: damp steps that would cross into
            // the lower half plane where the branch flips
            let mut damping = 1.0;
            for _ in 0..60 {
                let cand = z + step * damping;
                let cand = if y.im < -1e-12 && cand.im < 1e-12 {
                    C64::new(cand.re, 1e-12)
                } else {
                    cand
                };
                let r = self.green(cand) - y;
                if r.norm() < residual.norm() {
                    z = cand;
                    residual = r;
                    break;
                }
                damping *= 0.5;
                step = -residual / slope;
            }
            if damping < 1e-17 {
                break;
            }
        }
        if residual.norm() <= 1e-8 * y.norm() {
            Ok(z)
        } else {
            Err(Error::NonConvergence {
                what: format!("Green inversion stalled at y = {y}, residual {residual}"),
            })
        }
    }

    /// Real-branch inversion for y < 0 with z below the spectrum.
    pub fn invert_green_real(&self, y: f64) -> Result<f64, Error> {
        if y >= 0.0 {
            return Err(Error::InvalidConfig {
                detail: "real-branch inversion needs y < 0".into(),
            });
        }
        let min = self.min_eigenvalue();
        let green_real = |z: f64| -> f64 {
            self.eigenvalues.iter().map(|&l| 1.0 / (z - l)).sum::<f64>()
                / self.eigenvalues.len() as f64
        };
        // G decreases from 0^- to -inf as z rises toward the spectrum
        let mut hi = min - 1e-9 * min.abs().max(1.0);
        let mut lo = min - 1.0;
        while green_real(lo) < y {
            lo = min - 2.0 * (min - lo);
            if !lo.is_finite() || min - lo > 1e12 {
                return Err(Error::NonConvergence {
                    what: format!("no bracket for real Green inversion at y = {y}"),
                });
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if green_real(mid) > y {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-13 * hi.abs().max(1.0) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// R(y) = G^{-1}(y) - 1/y.
    pub fn r_transform(&self, y: C64) -> Result<C64, Error> {
        Ok(self.invert_green(y)? - y.finv())
    }

    pub fn r_transform_real(&self, y: f64) -> Result<f64, Error> {
        Ok(self.invert_green_real(y)? - 1.0 / y)
    }

    /// S(χ) from the fixed point S = 1/R(χS) on the real branch.
    pub fn s_transform(&self, chi: f64) -> Result<f64, Error> {
        if !(chi < 0.0 && chi > -1.0) {
            return Err(Error::InvalidConfig {
                detail: format!("s_transform expects χ in (-1, 0), got {chi}"),
            });
        }
        let mut s = 1.0f64;
        for _ in 0..300 {
            let y = chi * s;
            let r = self.r_transform_real(y)?;
            if !(r.is_finite() && r != 0.0) {
                return Err(Error::NonConvergence {
                    what: format!("S fixed point hit R = {r} at χ = {chi}"),
                });
            }
            let next = 0.5 * s + 0.5 / r;
            if (next - s).abs() <= 1e-11 * s.abs().max(1e-11) {
                return Ok(next);
            }
            s = next;
        }
        Err(Error::NonConvergence {
            what: format!("S fixed point did not settle at χ = {chi}"),
        })
    }
}

/// Evaluation grid with values; Herglotz flags recorded per point.
#[derive(Clone, Debug)]
pub struct GreenEstimate {
    pub points: Vec<C64>,
    pub values: Vec<C64>,
    pub sample_size: usize,
    pub draws: usize,
}

/// Evaluates the empirical Green function on a grid.
pub fn empirical_green(est: &EmpiricalGreen, grid: &[C64]) -> GreenEstimate {
    GreenEstimate {
        points: grid.to_vec(),
        values: grid.iter().map(|&z| est.green(z)).collect(),
        sample_size: est.sample_size(),
        draws: est.draws(),
    }
}

/// Herglotz property: Im G(z) < 0 whenever Im z > 0.
pub fn herglotz_ok(est: &GreenEstimate) -> bool {
    est.points
        .iter()
        .zip(est.values.iter())
        .all(|(z, g)| z.im <= 0.0 || g.im < 0.0)
}

/// Theory curve for the inverse-Ginibre product sums:
/// R(y) = -e^{iπ/(M+1)} y^{-M/(M+1)} on the principal branch.
pub fn r_stable_theory(y: C64, m: usize) -> C64 {
    let mf = m as f64;
    let phase = C64::new(0.0, PI / (mf + 1.0)).exp();
    -phase * y.powf(-mf / (mf + 1.0))
}

/// Outcome of a deviation scan; flagged points are excluded from the max
/// and surfaced to the caller instead of silently dropped.
#[derive(Clone, Debug, Default)]
pub struct DeviationReport {
    pub max_relative: f64,
    pub evaluated: usize,
    pub warnings: Vec<String>,
}

/// max_y |R_{A+B}(y) - R_A(y) - R_B(y)| / |R_{A+B}(y)| over the grid.
pub fn check_r_additivity(
    sum: &EmpiricalGreen,
    a: &EmpiricalGreen,
    b: &EmpiricalGreen,
    grid: &[C64],
) -> DeviationReport {
    let mut rep = DeviationReport::default();
    for &y in grid {
        let lhs = sum.r_transform(y);
        let rhs = a.r_transform(y).and_then(|ra| Ok(ra + b.r_transform(y)?));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                rep.evaluated += 1;
                rep.max_relative = rep.max_relative.max((l - r).norm() / l.norm());
            }
            (l, r) => {
                let e = l.err().or(r.err()).unwrap();
                rep.warnings.push(format!("y = {y}: {e}"));
            }
        }
    }
    rep
}

/// max_y |R_{scaled}(y) - μ R_base(μ y)| / |R_{scaled}(y)|.
pub fn check_r_scaling(
    scaled: &EmpiricalGreen,
    base: &EmpiricalGreen,
    mu: f64,
    grid: &[C64],
) -> DeviationReport {
    let mut rep = DeviationReport::default();
    for &y in grid {
        let lhs = scaled.r_transform(y);
        let rhs = base.r_transform(y * mu).map(|r| r * mu);
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                rep.evaluated += 1;
                rep.max_relative = rep.max_relative.max((l - r).norm() / l.norm());
            }
            (l, r) => {
                let e = l.err().or(r.err()).unwrap();
                rep.warnings.push(format!("y = {y}: {e}"));
            }
        }
    }
    rep
}

/// Closed-form semicircle Green function (variance parameter sigma²),
/// branch chosen so G ~ 1/z at infinity.
pub fn semicircle_green(z: C64, sigma: f64) -> C64 {
    let s2 = sigma * sigma;
    let mut w = (z * z - 4.0 * s2).sqrt();
    if (w + z).norm() < (z - w).norm() {
        w = -w;
    }
    (z - w) / (2.0 * s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::sample_gue;
    use crate::rng::derive_stream;

    fn gue_macroscopic_draws(n: usize, trials: u64, seed: u64) -> Vec<Vec<f64>> {
        (0..trials)
            .map(|t| {
                let mut rng = derive_stream(seed, 90, t);
                let h = sample_gue(n, 1.0, &mut rng);
                let scale = 1.0 / (n as f64).sqrt();
                h.eigenvalues()
                    .unwrap()
                    .into_iter()
                    .map(|l| l * scale)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn semicircle_green_closed_form_matches_quadrature() {
        let z = C64::new(0.3, 0.8);
        let g = semicircle_green(z, 1.0);
        let byquad = crate::quad::adaptive_complex(
            &mut |l: f64| {
                let rho = (4.0 - l * l).sqrt() / (2.0 * PI);
                (z - l).finv() * rho
            },
            -2.0,
            2.0,
            1e-10,
            1e-12,
        );
        assert!((g - byquad).norm() < 1e-8, "{g} vs {byquad}");
    }

    #[test]
    fn empirical_green_matches_semicircle() {
        let draws = gue_macroscopic_draws(150, 120, 21);
        let est = EmpiricalGreen::from_draws(&draws);
        let z = C64::new(0.0, 2.0);
        let got = est.green(z);
        let want = semicircle_green(z, 1.0);
        assert!((got - want).norm() < 0.01 * want.norm(), "{got} vs {want}");
        // asymptotic normalization G ~ 1/z far away
        let far = C64::new(100.0, 1.0);
        assert!((est.green(far) - far.finv()).norm() < 1e-3 * far.finv().norm());
        // Herglotz sign on a grid
        let grid: Vec<C64> = (0..10).map(|i| C64::new(-2.0 + 0.45 * i as f64, 0.4)).collect();
        assert!(herglotz_ok(&empirical_green(&est, &grid)));
    }

    #[test]
    fn semicircle_r_transform_is_linear() {
        let draws = gue_macroscopic_draws(150, 200, 22);
        let est = EmpiricalGreen::from_draws(&draws);
        for i in 0..8 {
            let z = C64::new(-1.5 + 0.3 * i as f64, 1.2);
            let y = semicircle_green(z, 1.0);
            let r = est.r_transform(y).unwrap();
            assert!(
                (r - y).norm() < 0.02 * y.norm().max(0.3),
                "R({y}) = {r}"
            );
        }
    }

    #[test]
    fn additivity_with_zero_matrix_is_exact() {
        let draws = gue_macroscopic_draws(60, 50, 23);
        let est = EmpiricalGreen::from_draws(&draws);
        let zeros = vec![vec![0.0f64; 60]; 50];
        let zero_est = EmpiricalGreen::from_draws(&zeros);
        let grid: Vec<C64> = (0..5)
            .map(|i| semicircle_green(C64::new(-0.9 + 0.4 * i as f64, 1.3), 1.0))
            .collect();
        // R of the zero matrix vanishes identically, so the sum check
        // against (A, 0) with sum = A must return 0 up to solver tolerance
        let rep = check_r_additivity(&est, &est, &zero_est, &grid);
        assert_eq!(rep.evaluated, 5);
        assert!(rep.max_relative < 1e-9, "dev = {}", rep.max_relative);
    }

    #[test]
    fn scaling_rule_with_mu_one_is_exact() {
        let draws = gue_macroscopic_draws(60, 50, 24);
        let est = EmpiricalGreen::from_draws(&draws);
        let grid: Vec<C64> = (0..5)
            .map(|i| semicircle_green(C64::new(-0.9 + 0.4 * i as f64, 1.3), 1.0))
            .collect();
        let rep = check_r_scaling(&est, &est, 1.0, &grid);
        assert!(rep.max_relative < 1e-10);
    }

    #[test]
    fn scaling_rule_mu_two_on_gue() {
        // R_{2A}(y) = 2 R_A(2y) = 4y for the unit semicircle
        let base = EmpiricalGreen::from_draws(&gue_macroscopic_draws(150, 200, 25));
        let scaled = base.scaled(2.0);
        let grid: Vec<C64> = (0..6)
            .map(|i| semicircle_green(C64::new(-1.2 + 0.4 * i as f64, 1.8), 2.0))
            .collect();
        let rep = check_r_scaling(&scaled, &base, 2.0, &grid);
        assert_eq!(rep.evaluated, 6);
        assert!(rep.max_relative < 1e-9, "dev = {}", rep.max_relative);
        for &y in &grid {
            let r = scaled.r_transform(y).unwrap();
            assert!((r - y * 4.0).norm() < 0.03 * (y * 4.0).norm().max(0.4));
        }
    }

    #[test]
    fn additivity_for_independent_gues() {
        // A, B independent unit GUEs; A + B is a GUE with variance 2
        let a = EmpiricalGreen::from_draws(&gue_macroscopic_draws(150, 150, 26));
        let b = EmpiricalGreen::from_draws(&gue_macroscopic_draws(150, 150, 27));
        let sum = {
            let draws: Vec<Vec<f64>> = (0..150u64)
                .map(|t| {
                    let mut rng = derive_stream(28, 90, t);
                    let h = sample_gue(150, 2.0f64.sqrt(), &mut rng);
                    let scale = 1.0 / 150.0f64.sqrt();
                    h.eigenvalues()
                        .unwrap()
                        .into_iter()
                        .map(|l| l * scale)
                        .collect()
                })
                .collect();
            EmpiricalGreen::from_draws(&draws)
        };
        let grid: Vec<C64> = (0..6)
            .map(|i| semicircle_green(C64::new(-1.0 + 0.4 * i as f64, 1.6), 2.0f64.sqrt()))
            .collect();
        let rep = check_r_additivity(&sum, &a, &b, &grid);
        assert_eq!(rep.evaluated, 6);
        assert!(rep.max_relative < 0.03, "dev = {}", rep.max_relative);
    }

    #[test]
    fn r_transform_stable_under_sample_doubling() {
        let half = EmpiricalGreen::from_draws(&gue_macroscopic_draws(100, 120, 29));
        let full = EmpiricalGreen::from_draws(&gue_macroscopic_draws(100, 240, 29));
        let y = semicircle_green(C64::new(0.3, 1.2), 1.0);
        let r1 = half.r_transform(y).unwrap();
        let r2 = full.r_transform(y).unwrap();
        assert!((r1 - r2).norm() < 0.02 * r2.norm().max(0.3), "{r1} vs {r2}");
    }

    #[test]
    fn identity_ensemble_s_transform_is_one() {
        let draws = vec![vec![1.0f64; 40]; 25];
        let est = EmpiricalGreen::from_draws(&draws);
        for &chi in &[-0.2, -0.4, -0.6] {
            let s = est.s_transform(chi).unwrap();
            assert!((s - 1.0).abs() < 1e-9, "S({chi}) = {s}");
        }
    }

    #[test]
    fn real_branch_inversion_roundtrip() {
        let draws = vec![vec![1.0f64, 2.0, 3.0]; 10];
        let est = EmpiricalGreen::from_draws(&draws);
        for &y in &[-0.2, -0.7, -2.0] {
            let z = est.invert_green_real(y).unwrap();
            assert!(z < 1.0);
            let g = (1.0 / (z - 1.0) + 1.0 / (z - 2.0) + 1.0 / (z - 3.0)) / 3.0;
            assert!((g - y).abs() < 1e-9);
        }
    }
}
