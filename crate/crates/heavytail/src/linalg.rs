//! Dense complex linear algebra used by the ensemble samplers.
//!
//! Everything here is desk scale (N up to a few hundred), so the solvers are
//! hand rolled: LU with partial pivoting for inverses, Householder reduction
//! plus implicit-shift QL for Hermitian eigenvalues. The inner loops run on
//! interleaved `[re, im]` slices with AVX2+FMA variants picked at runtime.

use num_complex::Complex;

use crate::error::Error;

pub type C64 = Complex<f64>;

/// Relative tolerance for the Hermiticity check on tagged matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Condition-estimate threshold above which an inverse draw is rejected.
pub const NEAR_SINGULAR_COND: f64 = 1e14;

// ---------------------------------------------------------------------------
// kernels
// ---------------------------------------------------------------------------

mod kernels {
    //! Interleaved complex vector kernels with runtime AVX2+FMA dispatch.
    //!
    //! Reductions use eight-wide explicit accumulator banks so the
    //! reassociation is fixed in source: results are deterministic for a
    //! given build and CPU regardless of call site or thread count.

    #[inline(always)]
    fn axpy_body(y: &mut [f64], ar: f64, ai: f64, x: &[f64]) {
        debug_assert_eq!(y.len(), x.len());
        for (yc, xc) in y.chunks_exact_mut(2).zip(x.chunks_exact(2)) {
            let (xr, xi) = (xc[0], xc[1]);
            yc[0] += ar * xr - ai * xi;
            yc[1] += ar * xi + ai * xr;
        }
    }

    /// row[j] -= a*conj(w[j]) + b*conj(v[j])
    #[inline(always)]
    fn rank2_body(row: &mut [f64], ar: f64, ai: f64, w: &[f64], br: f64, bi: f64, v: &[f64]) {
        for ((rc, wc), vc) in row
            .chunks_exact_mut(2)
            .zip(w.chunks_exact(2))
            .zip(v.chunks_exact(2))
        {
            let (wr, wi) = (wc[0], -wc[1]);
            let (vr, vi) = (vc[0], -vc[1]);
            rc[0] -= ar * wr - ai * wi + br * vr - bi * vi;
            rc[1] -= ar * wi + ai * wr + br * vi + bi * vr;
        }
    }

    #[inline(always)]
    fn dot_body<const CONJ: bool>(x: &[f64], y: &[f64]) -> (f64, f64) {
        debug_assert_eq!(x.len(), y.len());
        let mut acc = [0.0f64; 8];
        let mut xe = x.chunks_exact(8);
        let mut ye = y.chunks_exact(8);
        for (xc, yc) in (&mut xe).zip(&mut ye) {
            for l in 0..4 {
                let (xr, xi) = (xc[2 * l], xc[2 * l + 1]);
                let (yr, yi) = (yc[2 * l], yc[2 * l + 1]);
                if CONJ {
                    acc[2 * l] += xr * yr + xi * yi;
                    acc[2 * l + 1] += xr * yi - xi * yr;
                } else {
                    acc[2 * l] += xr * yr - xi * yi;
                    acc[2 * l + 1] += xr * yi + xi * yr;
                }
            }
        }
        let (mut sr, mut si) = (
            (acc[0] + acc[2]) + (acc[4] + acc[6]),
            (acc[1] + acc[3]) + (acc[5] + acc[7]),
        );
        for (xc, yc) in xe
            .remainder()
            .chunks_exact(2)
            .zip(ye.remainder().chunks_exact(2))
        {
            let (xr, xi) = (xc[0], xc[1]);
            let (yr, yi) = (yc[0], yc[1]);
            if CONJ {
                sr += xr * yr + xi * yi;
                si += xr * yi - xi * yr;
            } else {
                sr += xr * yr - xi * yi;
                si += xr * yi + xi * yr;
            }
        }
        (sr, si)
    }

    #[cfg(target_arch = "x86_64")]
    mod avx {
        #[target_feature(enable = "avx2,fma")]
        pub unsafe fn axpy(y: &mut [f64], ar: f64, ai: f64, x: &[f64]) {
            super::axpy_body(y, ar, ai, x)
        }
        #[target_feature(enable = "avx2,fma")]
        pub unsafe fn rank2(
            row: &mut [f64],
            ar: f64,
            ai: f64,
            w: &[f64],
            br: f64,
            bi: f64,
            v: &[f64],
        ) {
            super::rank2_body(row, ar, ai, w, br, bi, v)
        }
        #[target_feature(enable = "avx2,fma")]
        pub unsafe fn dotc(x: &[f64], y: &[f64]) -> (f64, f64) {
            super::dot_body::<true>(x, y)
        }
        #[target_feature(enable = "avx2,fma")]
        pub unsafe fn dotu(x: &[f64], y: &[f64]) -> (f64, f64) {
            super::dot_body::<false>(x, y)
        }
    }

    #[cfg(target_arch = "x86_64")]
    #[inline]
    fn have_avx() -> bool {
        std::arch::is_x86_feature_detected!("avx2") && std::arch::is_x86_feature_detected!("fma")
    }

    #[inline]
    pub fn axpy(y: &mut [f64], ar: f64, ai: f64, x: &[f64]) {
        #[cfg(target_arch = "x86_64")]
        if have_avx() {
            // SAFETY: feature availability checked above.
            return unsafe { avx::axpy(y, ar, ai, x) };
        }
        axpy_body(y, ar, ai, x)
    }

    #[inline]
    pub fn rank2(row: &mut [f64], ar: f64, ai: f64, w: &[f64], br: f64, bi: f64, v: &[f64]) {
        #[cfg(target_arch = "x86_64")]
        if have_avx() {
            // SAFETY: feature availability checked above.
            return unsafe { avx::rank2(row, ar, ai, w, br, bi, v) };
        }
        rank2_body(row, ar, ai, w, br, bi, v)
    }

    #[inline]
    pub fn dotc(x: &[f64], y: &[f64]) -> (f64, f64) {
        #[cfg(target_arch = "x86_64")]
        if have_avx() {
            // SAFETY: feature availability checked above.
            return unsafe { avx::dotc(x, y) };
        }
        dot_body::<true>(x, y)
    }

    #[inline]
    pub fn dotu(x: &[f64], y: &[f64]) -> (f64, f64) {
        #[cfg(target_arch = "x86_64")]
        if have_avx() {
            // SAFETY: feature availability checked above.
            return unsafe { avx::dotu(x, y) };
        }
        dot_body::<false>(x, y)
    }
}

#[inline]
fn as_f64(x: &[C64]) -> &[f64] {
    bytemuck::cast_slice(x)
}

#[inline]
fn as_f64_mut(x: &mut [C64]) -> &mut [f64] {
    bytemuck::cast_slice_mut(x)
}

/// y += a * x over complex slices.
#[inline]
pub fn axpy(y: &mut [C64], a: C64, x: &[C64]) {
    kernels::axpy(as_f64_mut(y), a.re, a.im, as_f64(x));
}

/// sum conj(x_i) * y_i
#[inline]
pub fn dotc(x: &[C64], y: &[C64]) -> C64 {
    let (re, im) = kernels::dotc(as_f64(x), as_f64(y));
    C64::new(re, im)
}

/// sum x_i * y_i
#[inline]
pub fn dotu(x: &[C64], y: &[C64]) -> C64 {
    let (re, im) = kernels::dotu(as_f64(x), as_f64(y));
    C64::new(re, im)
}

// ---------------------------------------------------------------------------
// dense matrices
// ---------------------------------------------------------------------------

/// Row-major dense complex square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    n: usize,
    data: Vec<C64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Dense {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Dense::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(n: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), n * n);
        Dense { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn transpose(&self) -> Dense {
        let n = self.n;
        let mut t = Dense::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max |A_ij - conj(A_ji)|
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// A <- (A + A†)/2; kills floating point drift before the eigensolver.
    pub fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in i..n {
                let avg = 0.5 * (self.data[i * n + j] + self.data[j * n + i].conj());
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
            let d = self.data[i * n + i];
            self.data[i * n + i] = C64::new(d.re, 0.0);
        }
    }

    /// C = self * other
    pub fn mul(&self, other: &Dense) -> Dense {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let bt = other.transpose();
        let mut c = Dense::zeros(n);
        for i in 0..n {
            let arow = self.row(i);
            let crow = c.row_mut(i);
            for (j, cij) in crow.iter_mut().enumerate() {
                *cij = dotu(arow, bt.row(j));
            }
        }
        c
    }

    /// G = self† * self, symmetrized.
    pub fn gram(&self) -> Dense {
        let n = self.n;
        let at = self.transpose();
        let mut g = Dense::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = dotc(at.row(i), at.row(j));
                g.data[i * n + j] = v;
                g.data[j * n + i] = v.conj();
            }
            let d = g.data[i * n + i];
            g.data[i * n + i] = C64::new(d.re, 0.0);
        }
        g
    }

    /// Scales every entry.
    pub fn scale(&mut self, s: f64) {
        for z in &mut self.data {
            *z *= s;
        }
    }

    /// self += other
    pub fn add_assign(&mut self, other: &Dense) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
    }

    /// Inverse via LU with partial pivoting. Also returns the pivot-ratio
    /// condition estimate max|U_kk|/min|U_kk|.
    pub fn lu_inverse(&self) -> Result<(Dense, f64), Error> {
        let n = self.n;
        let mut lu = self.clone();
        let mut inv = Dense::identity(n);
        let mut max_piv = 0.0f64;
        let mut min_piv = f64::INFINITY;

        for k in 0..n {
            let mut p = k;
            let mut best = lu.get(k, k).norm_sqr();
            for i in k + 1..n {
                let m = lu.get(i, k).norm_sqr();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::NearSingular {
                    cond: f64::INFINITY,
                });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                    inv.data.swap(k * n + j, p * n + j);
                }
            }
            let piv = lu.get(k, k);
            let mag = piv.norm();
            max_piv = max_piv.max(mag);
            min_piv = min_piv.min(mag);
            let piv_inv = piv.finv();
            for i in k + 1..n {
                let m = lu.get(i, k) * piv_inv;
                lu.set(i, k, m);
                let (head, tail) = lu.data.split_at_mut((i) * n);
                let krow = &head[k * n + k + 1..k * n + n];
                let irow = &mut tail[k + 1..n];
                axpy(irow, -m, krow);
            }
        }
        let cond = max_piv / min_piv;
        if cond > NEAR_SINGULAR_COND {
            return Err(Error::NearSingular { cond });
        }

        // forward substitution with unit lower triangle
        for k in 0..n {
            for i in k + 1..n {
                let m = lu.get(i, k);
                if m != C64::new(0.0, 0.0) {
                    let (head, tail) = inv.data.split_at_mut(i * n);
                    let krow = &head[k * n..k * n + n];
                    axpy(&mut tail[..n], -m, krow);
                }
            }
        }
        // back substitution with U
        for k in (0..n).rev() {
            let d = lu.get(k, k).finv();
            for z in inv.row_mut(k) {
                *z *= d;
            }
            for i in 0..k {
                let m = lu.get(i, k);
                let (head, tail) = inv.data.split_at_mut(k * n);
                let krow = &tail[..n];
                axpy(&mut head[i * n..i * n + n], -m, krow);
            }
        }
        Ok((inv, cond))
    }

    /// Eigenvalues of a Hermitian matrix, ascending. The input is assumed to
    /// be Hermitian up to roundoff; only the upper triangle and the real part
    /// of the diagonal are referenced after an internal copy.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>, Error> {
        let n = self.n;
        if n == 0 {
            return Ok(Vec::new());
        }
        let (mut d, mut e) = householder_tridiagonalize(self);
        tridiagonal_eigenvalues(&mut d, &mut e)?;
        d.sort_unstable_by(|a, b| a.partial_cmp(b).expect("eigenvalue NaN"));
        Ok(d)
    }
}

/// Householder reduction of a Hermitian matrix to a real symmetric
/// tridiagonal (diagonal d, off-diagonal e with e[k] between k and k+1).
/// Off-diagonal phases are dropped; they are a diagonal unitary similarity.
fn householder_tridiagonalize(a: &Dense) -> (Vec<f64>, Vec<f64>) {
    let n = a.n();
    let mut m = a.clone();
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n.saturating_sub(1)];
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut w = vec![C64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(1) {
        let len = n - k - 1;
        d[k] = m.get(k, k).re;
        // x = column below the diagonal = conj of the row tail
        let sigma: f64 = m.row(k)[k + 1..].iter().map(|z| z.norm_sqr()).sum();
        if sigma == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let norm = sigma.sqrt();
        let x0 = m.get(k, k + 1).conj();
        let phase = if x0 == C64::new(0.0, 0.0) {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        e[k] = norm;
        if len == 1 {
            m.set(k, k + 1, alpha.conj());
            m.set(k + 1, k, alpha);
            continue;
        }
        // v = x - alpha e1, tau = 2/|v|^2
        for (slot, r) in v[..len].iter_mut().zip(m.row(k)[k + 1..].iter()) {
            *slot = r.conj();
        }
        v[0] -= alpha;
        let vnorm_sqr = 2.0 * norm * (norm + x0.norm());
        let tau = 2.0 / vnorm_sqr;

        // p = tau * B v over the trailing Hermitian block
        for i in 0..len {
            let brow = &m.row(k + 1 + i)[k + 1..];
            w[i] = tau * dotu(brow, &v[..len]);
        }
        // w = p - (tau/2) (v†p) v
        let kappa = 0.5 * tau * dotc(&v[..len], &w[..len]);
        for i in 0..len {
            w[i] -= kappa * v[i];
        }
        // B -= v w† + w v†
        for i in 0..len {
            let (vi, wi) = (v[i], w[i]);
            let row = &mut m.row_mut(k + 1 + i)[k + 1..];
            kernels::rank2(
                as_f64_mut(row),
                vi.re,
                vi.im,
                as_f64(&w[..len]),
                wi.re,
                wi.im,
                as_f64(&v[..len]),
            );
        }
        m.set(k, k + 1, alpha.conj());
    }
    if n >= 1 {
        d[n - 1] = m.get(n - 1, n - 1).re;
    }
    (d, e)
}

/// Implicit-shift QL sweep on a real symmetric tridiagonal; eigenvalues only.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<(), Error> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let mut e = {
        let mut buf = vec![0.0f64; n];
        buf[..n - 1].copy_from_slice(e);
        buf
    };
    let eps = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::NonConvergence {
                    what: "tridiagonal QL iteration".into(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// tagged matrices
// ---------------------------------------------------------------------------

/// Structural tag carried by sampled matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureTag {
    General,
    Hermitian,
    HermitianPositiveDefinite,
    BlockDiagonal,
}

/// A dense complex matrix or an ordered direct sum of dense blocks.
#[derive(Clone, Debug)]
pub struct ComplexMatrix {
    structure: StructureTag,
    blocks: Vec<Dense>,
}

impl ComplexMatrix {
    pub fn general(m: Dense) -> Self {
        ComplexMatrix {
            structure: StructureTag::General,
            blocks: vec![m],
        }
    }

    pub fn hermitian(m: Dense) -> Self {
        ComplexMatrix {
            structure: StructureTag::Hermitian,
            blocks: vec![m],
        }
    }

    pub fn hermitian_positive_definite(m: Dense) -> Self {
        ComplexMatrix {
            structure: StructureTag::HermitianPositiveDefinite,
            blocks: vec![m],
        }
    }

    /// Ordered direct sum; the eigenvalue multiset is the union over blocks.
    pub fn block_diagonal(blocks: Vec<Dense>) -> Self {
        assert!(!blocks.is_empty());
        ComplexMatrix {
            structure: StructureTag::BlockDiagonal,
            blocks,
        }
    }

    pub fn structure(&self) -> StructureTag {
        self.structure
    }

    pub fn blocks(&self) -> &[Dense] {
        &self.blocks
    }

    /// Total dimension (sum of block dimensions).
    pub fn n(&self) -> usize {
        self.blocks.iter().map(Dense::n).sum()
    }

    pub fn dense(&self) -> &Dense {
        assert_eq!(self.blocks.len(), 1, "not a single dense matrix");
        &self.blocks[0]
    }

    /// Checks the structural invariant for Hermitian-tagged matrices:
    /// max |A_ij - conj(A_ji)| <= tol * max |A_ij|.
    pub fn hermiticity_ok(&self) -> bool {
        match self.structure {
            StructureTag::General => true,
            _ => self
                .blocks
                .iter()
                .all(|b| b.hermiticity_defect() <= HERMITICITY_TOL * b.max_abs()),
        }
    }

    /// Sorted eigenvalues of a Hermitian or block-diagonal-Hermitian matrix.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, Error> {
        if self.structure == StructureTag::General {
            return Err(Error::NonHermitianInput);
        }
        let mut all = Vec::with_capacity(self.n());
        for b in &self.blocks {
            all.extend(b.hermitian_eigenvalues()?);
        }
        all.sort_unstable_by(|a, b| a.partial_cmp(b).expect("eigenvalue NaN"));
        Ok(all)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kernels_match_naive() {
        let x: Vec<C64> = (0..37).map(|i| c(i as f64 * 0.3 - 2.0, 1.0 - i as f64 * 0.1)).collect();
        let y: Vec<C64> = (0..37).map(|i| c((i as f64).sin(), (i as f64).cos())).collect();
        let naive_c: C64 = x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum();
        let naive_u: C64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        assert!((dotc(&x, &y) - naive_c).norm() < 1e-12 * naive_c.norm());
        assert!((dotu(&x, &y) - naive_u).norm() < 1e-12 * naive_u.norm());

        let a = c(0.7, -1.3);
        let mut y1 = y.clone();
        axpy(&mut y1, a, &x);
        for i in 0..y.len() {
            assert!((y1[i] - (y[i] + a * x[i])).norm() < 1e-14);
        }
    }

    #[test]
    fn lu_inverse_roundtrip() {
        let n = 23;
        let mut m = Dense::zeros(n);
        let mut state = 0x1234u64;
        for i in 0..n {
            for j in 0..n {
                state = crate::rng::splitmix64(state);
                let re = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                state = crate::rng::splitmix64(state);
                let im = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                m.set(i, j, c(re, im));
            }
        }
        let (inv, cond) = m.lu_inverse().unwrap();
        assert!(cond < 1e8);
        let idn = m.mul(&inv);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((idn.get(i, j) - c(want, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = Dense::zeros(4);
        assert!(matches!(m.lu_inverse(), Err(Error::NearSingular { .. })));
    }

    #[test]
    fn eigenvalues_of_small_matrices() {
        // identity(3) -> {1,1,1}
        let eye = ComplexMatrix::hermitian(Dense::identity(3));
        let ev = eye.eigenvalues().unwrap();
        for v in ev {
            assert!((v - 1.0).abs() < 1e-12);
        }
        // [[0,1],[1,0]] -> {-1,1}
        let mut m = Dense::zeros(2);
        m.set(0, 1, c(1.0, 0.0));
        m.set(1, 0, c(1.0, 0.0));
        let ev = ComplexMatrix::hermitian(m).eigenvalues().unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
        // complex off-diagonal: [[2, i],[-i, 2]] -> {1, 3}
        let mut m = Dense::zeros(2);
        m.set(0, 0, c(2.0, 0.0));
        m.set(1, 1, c(2.0, 0.0));
        m.set(0, 1, c(0.0, 1.0));
        m.set(1, 0, c(0.0, -1.0));
        let ev = ComplexMatrix::hermitian(m).eigenvalues().unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_match_trace_and_frobenius() {
        let n = 40;
        let mut m = Dense::zeros(n);
        let mut state = 99u64;
        for i in 0..n {
            for j in i..n {
                state = crate::rng::splitmix64(state);
                let re = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                state = crate::rng::splitmix64(state);
                let im = if i == j {
                    0.0
                } else {
                    (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
                };
                m.set(i, j, c(re, im));
                m.set(j, i, c(re, -im));
            }
        }
        let ev = m.hermitian_eigenvalues().unwrap();
        let tr: f64 = (0..n).map(|i| m.get(i, i).re).sum();
        let fr2 = m.frobenius_norm().powi(2);
        assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-9 * tr.abs().max(1.0));
        assert!((ev.iter().map(|v| v * v).sum::<f64>() - fr2).abs() < 1e-9 * fr2);
    }

    #[test]
    fn eigenvector_residual_spot_check() {
        // inverse iteration with the computed eigenvalue; residual must be
        // at the backward-stable level.
        let n = 30;
        let mut m = Dense::zeros(n);
        let mut state = 7u64;
        for i in 0..n {
            for j in i..n {
                state = crate::rng::splitmix64(state);
                let re = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
                state = crate::rng::splitmix64(state);
                let im = if i == j {
                    0.0
                } else {
                    (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
                };
                m.set(i, j, c(re, im));
                m.set(j, i, c(re, -im));
            }
        }
        let ev = m.hermitian_eigenvalues().unwrap();
        let hnorm = m.frobenius_norm();
        for &lambda in [ev[0], ev[n / 2], ev[n - 1]].iter() {
            let mut shifted = m.clone();
            for i in 0..n {
                let d = shifted.get(i, i);
                shifted.set(i, i, d - c(lambda + 1e-11, 0.0));
            }
            let (inv, _) = shifted.lu_inverse().unwrap();
            let mut v = vec![c(1.0, 0.0); n];
            for _ in 0..3 {
                let mut next = vec![c(0.0, 0.0); n];
                for i in 0..n {
                    next[i] = dotu(inv.row(i), &v);
                }
                let norm = next.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                for z in &mut next {
                    *z /= norm;
                }
                v = next;
            }
            let mut residual = 0.0f64;
            for i in 0..n {
                let hv = dotu(m.row(i), &v);
                residual += (hv - lambda * v[i]).norm_sqr();
            }
            assert!(residual.sqrt() <= 1e-10 * hnorm);
        }
    }

    #[test]
    fn block_diagonal_eigenvalues_are_union() {
        let b1 = Dense::identity(2);
        let mut b2 = Dense::zeros(3);
        for i in 0..3 {
            b2.set(i, i, c(i as f64 + 2.0, 0.0));
        }
        let m = ComplexMatrix::block_diagonal(vec![b1, b2]);
        let ev = m.eigenvalues().unwrap();
        assert_eq!(ev.len(), 5);
        let want = [1.0, 1.0, 2.0, 3.0, 4.0];
        for (a, b) in ev.iter().zip(want.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn general_matrix_has_no_eigenvalue_path() {
        let m = ComplexMatrix::general(Dense::identity(2));
        assert!(matches!(m.eigenvalues(), Err(Error::NonHermitianInput)));
    }
}
