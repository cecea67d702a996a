//! Airy function Ai and its derivative on the real line.
//!
//! Maclaurin series in the middle, A&S 10.4 asymptotic expansions on both
//! sides. Returns the pair (Ai, Ai') since callers always want both.

use std::f64::consts::{FRAC_PI_4, PI};

/// Ai(0) = 3^{-2/3} / Γ(2/3)
const AI0: f64 = 0.355_028_053_887_817_24;
/// Ai'(0) = -3^{-1/3} / Γ(1/3)
const AIP0: f64 = -0.258_819_403_792_806_8;

const SWITCHOVER: f64 = 7.3;

/// u_k coefficients of the asymptotic series (u_0 = 1).
fn u_coeffs(n: usize) -> Vec<f64> {
    let mut u = vec![1.0f64; n];
    for k in 1..n {
        let kk = k as f64;
        u[k] = u[k - 1] * (6.0 * kk - 5.0) * (6.0 * kk - 3.0) * (6.0 * kk - 1.0)
            / ((2.0 * kk - 1.0) * 216.0 * kk);
    }
    u
}

fn v_coeffs(u: &[f64]) -> Vec<f64> {
    u.iter()
        .enumerate()
        .map(|(k, &uk)| {
            if k == 0 {
                1.0
            } else {
                uk * (6.0 * k as f64 + 1.0) / (1.0 - 6.0 * k as f64)
            }
        })
        .collect()
}

/// (Ai(x), Ai'(x))
pub fn airy_ai(x: f64) -> (f64, f64) {
    if x == 0.0 {
        (AI0, AIP0)
    } else if x.abs() <= SWITCHOVER {
        // Ai = c1 f - c2 g with f'' = x f; series in x^3
        let mut f = 1.0f64;
        let mut fp = 0.0f64;
        let mut g = x;
        let mut gp = 1.0f64;
        let mut fk = 1.0f64;
        let mut gk = x;
        for k in 1..80usize {
            let three_k = 3.0 * k as f64;
            fk *= x * x * x / (three_k * (three_k - 1.0));
            gk *= x * x * x / (three_k * (three_k + 1.0));
            f += fk;
            g += gk;
            fp += fk * three_k / x; // d/dx of the x^{3k} term
            gp += gk * (three_k + 1.0) / x;
            if fk.abs() + gk.abs() < 1e-18 {
                break;
            }
        }
        (AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp)
    } else if x > 0.0 {
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        let u = u_coeffs(14);
        let v = v_coeffs(&u);
        let mut su = 0.0f64;
        let mut sv = 0.0f64;
        let mut sign = 1.0f64;
        let mut zp = 1.0f64;
        for k in 0..14 {
            su += sign * u[k] / zp;
            sv += sign * v[k] / zp;
            sign = -sign;
            zp *= zeta;
        }
        let pre = (-zeta).exp() / (2.0 * PI.sqrt() * x.powf(0.25));
        (pre * su, -pre * x.sqrt() * sv)
    } else {
        let z = -x;
        let zeta = 2.0 / 3.0 * z.powf(1.5);
        let u = u_coeffs(14);
        let v = v_coeffs(&u);
        let (mut ue, mut uo, mut ve, mut vo) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let mut zp = 1.0f64;
        for k in 0..14 {
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                ue += sign * u[k] / zp;
                ve += sign * v[k] / zp;
            } else {
                uo += sign * u[k] / zp;
                vo += sign * v[k] / zp;
            }
            zp *= zeta;
        }
        let w = zeta + FRAC_PI_4;
        let pre = 1.0 / (PI.sqrt() * z.powf(0.25));
        let ai = pre * (w.sin() * ue - w.cos() * uo);
        let aip = -(z.powf(0.25) / PI.sqrt()) * (w.cos() * ve + w.sin() * vo);
        (ai, aip)
    }
}
