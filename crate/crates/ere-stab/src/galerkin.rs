//! Fourier–Galerkin discretization of the second-variation operator in the rotating frame,
//! `𝒜u = −u'' − 2J₂u' + f(t) K u` with `f = 1/(1 + e cos t)` and `K = diag(1 + α + 3β, 1 + α − 3β)`,
//! under periodic (`ω = 1`) or antiperiodic (`ω = −1`) boundary conditions.
//!
//! The real basis splits into two invariant sectors because `f` is even:
//! sector A spans `{cos·e₁, sin·e₂}` and sector B spans `{sin·e₁, cos·e₂}`.

use crate::common::{symmetric_eigenvalues, Error, Result};
use crate::model::EssentialParams;
use nalgebra::{DMatrix, DVector, Matrix2};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_N: usize = 64;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const NULLITY_FLOOR: f64 = 1e-10;
pub const CONVERGENCE_STEP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Omega {
    Plus1,
    Minus1,
}

impl Omega {
    pub fn from_sign(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Omega::Plus1),
            -1 => Ok(Omega::Minus1),
            _ => Err(Error::Domain(format!("omega must be +1 or -1, got {s}"))),
        }
    }

    pub fn sign(&self) -> f64 {
        match self {
            Omega::Plus1 => 1.0,
            Omega::Minus1 => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Trig {
    Const,
    Cos,
    Sin,
}

/// One real basis function `trig(k t)·e_comp`, normalized in `L²(0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisFn {
    pub trig: Trig,
    pub k: f64,
    pub comp: usize,
}

impl BasisFn {
    pub fn sector(&self) -> Sector {
        match (self.trig, self.comp) {
            (Trig::Const, 0) | (Trig::Cos, 0) | (Trig::Sin, 1) => Sector::A,
            _ => Sector::B,
        }
    }
}

/// `f̂₀ … f̂_order` with `1/(1 + e cos t) = f̂₀ + 2 Σ f̂_k cos kt`. Valid for `|e| < 1`.
pub fn fourier_f(e: f64, order: usize) -> Vec<f64> {
    let mut out = vec![0.0; order + 1];
    if e == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let s = (1.0 - e * e).sqrt();
    let rho = (1.0 - s) / e;
    let mut p = 1.0 / s;
    for c in out.iter_mut() {
        *c = p;
        p *= -rho;
    }
    out
}

fn basis(omega: Omega, n: usize) -> Vec<BasisFn> {
    let mut b = Vec::with_capacity(4 * n + 2);
    let ks: Vec<f64> = match omega {
        Omega::Plus1 => {
            b.push(BasisFn { trig: Trig::Const, k: 0.0, comp: 0 });
            b.push(BasisFn { trig: Trig::Const, k: 0.0, comp: 1 });
            (1..=n).map(|k| k as f64).collect()
        }
        Omega::Minus1 => (0..n).map(|k| k as f64 + 0.5).collect(),
    };
    for k in ks {
        b.push(BasisFn { trig: Trig::Cos, k, comp: 0 });
        b.push(BasisFn { trig: Trig::Sin, k, comp: 1 });
        b.push(BasisFn { trig: Trig::Sin, k, comp: 0 });
        b.push(BasisFn { trig: Trig::Cos, k, comp: 1 });
    }
    b
}

/// Truncated quadratic form of `𝒜` on the rotated trigonometric basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalerkinProblem {
    pub params: EssentialParams,
    pub omega: Omega,
    pub n: usize,
    pub basis: Vec<BasisFn>,
    pub matrix: DMatrix<f64>,
    pub fcoeffs: Vec<f64>,
    /// `|f̂_{2N}|`, the largest neglected scale of the coefficient convolution.
    pub tail_bound: f64,
}

fn potential_entry(a: &BasisFn, b: &BasisFn, f: &[f64]) -> f64 {
    let ff = |m: f64| f[m.abs().round() as usize];
    match (a.trig, b.trig) {
        (Trig::Const, Trig::Const) => ff(0.0),
        (Trig::Const, Trig::Cos) => 2f64.sqrt() * ff(b.k),
        (Trig::Cos, Trig::Const) => 2f64.sqrt() * ff(a.k),
        (Trig::Cos, Trig::Cos) => ff(a.k - b.k) + ff(a.k + b.k),
        (Trig::Sin, Trig::Sin) => ff(a.k - b.k) - ff(a.k + b.k),
        _ => 0.0,
    }
}

fn gyroscopic_entry(a: &BasisFn, b: &BasisFn) -> f64 {
    if a.k != b.k || a.comp == b.comp {
        return 0.0;
    }
    let k = a.k;
    match (a.trig, a.comp, b.trig, b.comp) {
        (Trig::Cos, 0, Trig::Sin, 1) | (Trig::Sin, 1, Trig::Cos, 0) => 2.0 * k,
        (Trig::Sin, 0, Trig::Cos, 1) | (Trig::Cos, 1, Trig::Sin, 0) => -2.0 * k,
        _ => 0.0,
    }
}

/// Assemble with `n` modes per component. Requires `n ≥ 1`; `n ≥ 8` is the intended range.
pub fn assemble(params: &EssentialParams, omega: Omega, n: usize) -> GalerkinProblem {
    let basis = basis(omega, n.max(1));
    let fcoeffs = fourier_f(params.e, 2 * n.max(1) + 1);
    let kdiag = [params.lambda3, params.lambda4];
    let dim = basis.len();
    let mut matrix = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..=i {
            let (a, b) = (&basis[i], &basis[j]);
            let mut v = gyroscopic_entry(a, b);
            if a.comp == b.comp {
                v += kdiag[a.comp] * potential_entry(a, b, &fcoeffs);
                if i == j {
                    v += a.k * a.k;
                }
            }
            matrix[(i, j)] = v;
            matrix[(j, i)] = v;
        }
    }
    let tail_bound = fcoeffs[2 * n.max(1)].abs();
    GalerkinProblem { params: *params, omega, n, basis, matrix, fcoeffs, tail_bound }
}

impl GalerkinProblem {
    pub fn sector_indices(&self, s: Sector) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].sector() == s).collect()
    }

    pub fn sector_matrix(&self, s: Sector) -> DMatrix<f64> {
        let idx = self.sector_indices(s);
        DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.matrix[(idx[i], idx[j])])
    }

    pub fn sector_eigenvalues(&self, s: Sector) -> Vec<f64> {
        symmetric_eigenvalues(&self.sector_matrix(s))
    }

    /// All eigenvalues, ascending, computed sector by sector.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev = self.sector_eigenvalues(Sector::A);
        ev.extend(self.sector_eigenvalues(Sector::B));
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// `max(tol·λ_max, 1e−10)`.
    pub fn threshold(&self, eigenvalues: &[f64], tol: f64) -> f64 {
        let lmax = eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        (tol * lmax).max(NULLITY_FLOOR)
    }
}

/// Counts of one discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub index: usize,
    pub nullity: usize,
    /// No eigenvalue in `(thr, 10·thr]` in absolute value.
    pub gap: bool,
}

pub fn counts(eigenvalues: &[f64], thr: f64) -> Counts {
    Counts {
        index: eigenvalues.iter().filter(|&&x| x < -thr).count(),
        nullity: eigenvalues.iter().filter(|&&x| x.abs() <= thr).count(),
        gap: !eigenvalues.iter().any(|&x| x.abs() > thr && x.abs() <= 10.0 * thr),
    }
}

/// Morse index and nullity with the convergence verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPair {
    pub index: usize,
    pub nullity: usize,
    pub converged: bool,
}

/// Counts at the problem's `N`, checked against `N + 8`.
pub fn index_and_nullity(problem: &GalerkinProblem, tol: f64) -> Result<IndexPair> {
    let c0 = problem_counts(problem, tol);
    let finer = assemble(&problem.params, problem.omega, problem.n + CONVERGENCE_STEP);
    let c1 = problem_counts(&finer, tol);
    if (c0.index, c0.nullity) != (c1.index, c1.nullity) {
        return Err(Error::NotConverged {
            n: problem.n,
            n2: finer.n,
            i0: c0.index,
            nu0: c0.nullity,
            i1: c1.index,
            nu1: c1.nullity,
        });
    }
    Ok(IndexPair { index: c0.index, nullity: c0.nullity, converged: c0.gap && c1.gap })
}

pub fn problem_counts(problem: &GalerkinProblem, tol: f64) -> Counts {
    let ev = problem.eigenvalues();
    counts(&ev, problem.threshold(&ev, tol))
}

/// `(i_ω, ν_ω)` at the default truncation.
pub fn index_pair(params: &EssentialParams, omega: Omega) -> Result<IndexPair> {
    index_and_nullity(&assemble(params, omega, DEFAULT_N), DEFAULT_TOL)
}

/// Number of eigenvalues `≤ 0` of one sector: the raw step function used for bisection.
pub fn sector_nonpositive_count(params: &EssentialParams, omega: Omega, sector: Sector, n: usize) -> usize {
    let p = assemble(params, omega, n);
    p.sector_eigenvalues(sector).iter().filter(|&&x| x <= 0.0).count()
}

/// Number of eigenvalues `≤ 0` over both sectors.
pub fn nonpositive_count(params: &EssentialParams, omega: Omega, n: usize) -> usize {
    let p = assemble(params, omega, n);
    p.eigenvalues().iter().filter(|&&x| x <= 0.0).count()
}

/// Coefficient vectors of `(1 + e cos t)·c` in the `ω = 1` basis for `c = e₁` and `c = e₂`,
/// the kernel of `𝒜` at `α = β = 0`.
pub fn zero_parameter_kernel(problem: &GalerkinProblem) -> Vec<DVector<f64>> {
    let e = problem.params.e;
    let sp = PI.sqrt();
    let s2p = (2.0 * PI).sqrt();
    let mut out = Vec::new();
    for c in 0..2 {
        let mut v = DVector::zeros(problem.basis.len());
        for (i, b) in problem.basis.iter().enumerate() {
            let (c1, c2) = if c == 0 { (1.0, 0.0) } else { (0.0, 1.0) };
            v[i] = match (b.trig, b.k as i64, b.comp) {
                (Trig::Const, 0, 0) => c1 * 0.5 * e * s2p,
                (Trig::Const, 0, 1) => c2 * 0.5 * e * s2p,
                (Trig::Cos, 1, 0) => c1 * sp,
                (Trig::Cos, 1, 1) => c2 * sp,
                (Trig::Sin, 1, 0) => c2 * sp,
                (Trig::Sin, 1, 1) => -c1 * sp,
                (Trig::Cos, 2, 0) => c1 * 0.5 * e * sp,
                (Trig::Cos, 2, 1) => c2 * 0.5 * e * sp,
                (Trig::Sin, 2, 0) => c2 * 0.5 * e * sp,
                (Trig::Sin, 2, 1) => -c1 * 0.5 * e * sp,
                _ => 0.0,
            };
        }
        out.push(v);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RecurrenceVerdict {
    Degenerate,
    Nondegenerate,
    Inconclusive,
}

/// Outcome of the three-term recurrence test for `ω = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceReport {
    pub verdict: RecurrenceVerdict,
    /// Relative smallest singular value of the reduced first-mode matrix, per sector.
    pub sigma_a: f64,
    pub sigma_b: f64,
    /// `|v_maxN| / |v_1|` of the minimal solution in the sector closest to singular.
    pub decay: f64,
}

fn l_symbol(n: f64, sector: Sector) -> Matrix2<f64> {
    let g = if sector == Sector::A { 2.0 * n } else { -2.0 * n };
    Matrix2::new(n * n, g, g, n * n)
}

fn rel_sigma_min(m: &Matrix2<f64>) -> (f64, f64) {
    let s = m.singular_values();
    let (hi, lo) = (s.max(), s.min());
    (lo / hi.max(1.0), lo / hi.max(f64::MIN_POSITIVE))
}

/// 1-degeneracy test from the recurrence obtained by multiplying `𝒜u = 0` by `1 + e cos t`:
/// `B_m v_m + (e/2)(L_{m+1} v_{m+1} + L_{m−1} v_{m−1}) = 0` for the mode vectors `v_m` of each sector,
/// with `B_m = L_m + K`. Backward Schur complements from `max_n` reduce it to `S₁ v₁ = 0`.
pub fn kernel_recurrence_test(params: &EssentialParams, max_n: usize, tol: f64) -> Result<RecurrenceReport> {
    if params.e == 0.0 {
        return Err(Error::Domain("recurrence test requires e != 0".into()));
    }
    if max_n < 32 {
        return Err(Error::Domain(format!("max_n must be at least 32, got {max_n}")));
    }
    let e = params.e;
    let k = Matrix2::new(params.lambda3, 0.0, 0.0, params.lambda4);
    let mut sig = [0.0; 2];
    let mut decay = [0.0; 2];
    for (si, sector) in [Sector::A, Sector::B].into_iter().enumerate() {
        let b = |m: usize| l_symbol(m as f64, sector) + k;
        let mut s: Vec<Matrix2<f64>> = vec![Matrix2::zeros(); max_n + 1];
        s[max_n] = b(max_n);
        for m in (1..max_n).rev() {
            let (_, raw) = rel_sigma_min(&s[m + 1]);
            if raw < 1e-14 {
                return Err(Error::SingularRecurrence(format!("reduced matrix at mode {} is singular", m + 1)));
            }
            let inv = s[m + 1].try_inverse().ok_or_else(|| Error::SingularRecurrence(format!("mode {}", m + 1)))?;
            s[m] = b(m) - l_symbol((m + 1) as f64, sector) * inv * l_symbol(m as f64, sector) * (e * e / 4.0);
        }
        let (rel, _) = rel_sigma_min(&s[1]);
        sig[si] = rel;
        let svd = s[1].svd(false, true);
        let vt = svd.v_t.unwrap();
        let imin = if svd.singular_values[0] < svd.singular_values[1] { 0 } else { 1 };
        let mut v = nalgebra::Vector2::new(vt[(imin, 0)], vt[(imin, 1)]);
        let v1 = v.norm();
        for m in 2..=max_n {
            let inv = s[m].try_inverse().unwrap();
            v = -(inv * l_symbol((m - 1) as f64, sector) * v) * (e / 2.0);
        }
        decay[si] = v.norm() / v1;
    }
    // the constant e₂ mode solves the mode-0 row of sector B on its own when K₂₂ = 0
    if params.lambda4.abs() < tol {
        sig[1] = 0.0;
        decay[1] = 0.0;
    }
    let best = if sig[0] <= sig[1] { 0 } else { 1 };
    let verdict = if sig[best] < tol && decay[best] < 1e-6 {
        RecurrenceVerdict::Degenerate
    } else if sig[best] > 1e3 * tol {
        RecurrenceVerdict::Nondegenerate
    } else {
        RecurrenceVerdict::Inconclusive
    };
    Ok(RecurrenceReport { verdict, sigma_a: sig[0], sigma_b: sig[1], decay: decay[best] })
}
