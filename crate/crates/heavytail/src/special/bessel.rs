//! Bessel functions J0 and J1: power series up to the crossover, Hankel
//! asymptotics beyond.

use std::f64::consts::{FRAC_PI_4, PI};

const SWITCHOVER: f64 = 16.0;

/// Hankel P/Q series for order nu at argument x (x > SWITCHOVER).
fn hankel(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let inv8x = 1.0 / (8.0 * x);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut num = 1.0f64; // running product of (mu - (2j-1)^2)
    let mut fact = 1.0f64;
    let mut pow = 1.0f64;
    let mut j = 0usize;
    for k in 1..=10usize {
        j += 1;
        num *= mu - ((2 * j - 1) * (2 * j - 1)) as f64;
        fact *= k as f64;
        pow *= inv8x;
        let term = num / fact * pow;
        if k % 2 == 1 {
            // odd k feeds Q with alternating sign (+, -, +, ...)
            if (k / 2) % 2 == 0 {
                q += term;
            } else {
                q -= term;
            }
        } else if (k / 2) % 2 == 1 {
            p -= term;
        } else {
            p += term;
        }
    }
    (p, q)
}

pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SWITCHOVER {
        // sum (-(x/2)^2)^k / (k!)^2
        let m = -0.25 * x * x;
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        for k in 1..200 {
            term *= m / ((k * k) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1.0) {
                break;
            }
        }
        sum
    } else {
        let (p, q) = hankel(0.0, x);
        let w = x - FRAC_PI_4;
        (2.0 / (PI * x)).sqrt() * (p * w.cos() - q * w.sin())
    }
}

pub fn bessel_j1(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    if x <= SWITCHOVER {
        // (x/2) * sum (-(x/2)^2)^k / (k! (k+1)!)
        let m = -0.25 * x * x;
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        for k in 1..200 {
            term *= m / ((k * (k + 1)) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1.0) {
                break;
            }
        }
        sign * 0.5 * x * sum
    } else {
        let (p, q) = hankel(1.0, x);
        let w = x - 3.0 * FRAC_PI_4;
        sign * (2.0 / (PI * x)).sqrt() * (p * w.cos() - q * w.sin())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert_eq!(bessel_j1(0.0), 0.0);
    }

    #[test]
    fn series_reference_points() {
        // independent oracle: long-double style summation at modest x
        assert!((bessel_j0(PI) + 0.304_242_177_644_093_86).abs() < 1e-12);
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-13);
        assert!((bessel_j1(1.0) - 0.440_050_585_744_933_5).abs() < 1e-13);
        assert!((bessel_j1(2.0) - 0.576_724_807_756_873_4).abs() < 1e-13);
    }

    /// Independent oracle: downward Miller recurrence normalized with
    /// J0 + 2 J2 + 2 J4 + ... = 1.
    fn miller_j0_j1(x: f64) -> (f64, f64) {
        let start = (x as usize) + 60;
        let mut jp = 0.0f64;
        let mut j = 1e-30f64;
        let mut norm = 0.0f64;
        let (mut j0, mut j1) = (0.0, 0.0);
        for k in (0..=start).rev() {
            let jm = 2.0 * (k as f64 + 1.0) / x * j - jp;
            jp = j;
            j = jm;
            if k % 2 == 0 {
                norm += if k == 0 { j } else { 2.0 * j };
            }
            if k == 1 {
                j1 = j;
            }
            if k == 0 {
                j0 = j;
            }
            // rescale to dodge overflow on long recurrences
            if j.abs() > 1e250 {
                jp /= 1e250;
                j /= 1e250;
                norm /= 1e250;
                j0 /= 1e250;
                j1 /= 1e250;
            }
        }
        (j0 / norm, j1 / norm)
    }

    #[test]
    fn asymptotic_region_matches_miller_recurrence() {
        for &x in &[10.0, 15.9, 16.1, 30.0, 157.0, 400.0] {
            let (m0, m1) = miller_j0_j1(x);
            assert!(
                (bessel_j0(x) - m0).abs() < 1e-10,
                "J0({x}) = {} vs {m0}",
                bessel_j0(x)
            );
            assert!(
                (bessel_j1(x) - m1).abs() < 1e-10,
                "J1({x}) = {} vs {m1}",
                bessel_j1(x)
            );
        }
    }

    #[test]
    fn large_argument_amplitude() {
        // J0² + J1² = 2/(πx) + (1/x)·sin(2x - π/2)/(πx) + O(x^{-3}): check
        // against the two-term asymptotic
        for &x in &[50.0f64, 120.0, 400.0] {
            let a = bessel_j0(x).powi(2) + bessel_j1(x).powi(2);
            let smooth = 2.0 / (PI * x);
            let wobble = (2.0 * (x - FRAC_PI_4)).sin() / (PI * x * x);
            assert!(
                (a - smooth - wobble).abs() < 1.0 / (x * x * x),
                "x = {x}: {a} vs {}",
                smooth + wobble
            );
        }
    }
}
