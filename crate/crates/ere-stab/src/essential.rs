//! The essential periodic Hamiltonian system `ξ' = J B(t) ξ` and its monodromy matrix.

use crate::common::{Error, Result};
use crate::model::EssentialParams;
use crate::sympl::{factored_nullity, factored_spectrum, j4, symplectic_residual};
use nalgebra::{Complex, Matrix4, SVector};
use ode_solvers::dop_shared::OutputType;
use ode_solvers::{Dop853, System};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type C64 = Complex<f64>;
/// The 16 entries of `X` followed by the time.
type State = SVector<f64, 17>;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_E_CAP: f64 = 0.99;
/// The period is split into this many sub-intervals, each integrated from the identity.
const SEGMENTS: usize = 8;
/// A sub-interval whose propagator exceeds this Frobenius norm is halved.
const SEGMENT_GROWTH: f64 = 16.0;
const MAX_SPLITS: u32 = 6;

/// `B(t)` of the essential system.
pub fn assemble_b(params: &EssentialParams, t: f64) -> Matrix4<f64> {
    let f = 1.0 / (1.0 + params.e * t.cos());
    #[rustfmt::skip]
    let b = Matrix4::new(
        1.0, 0.0, 0.0, 1.0,
        0.0, 1.0, -1.0, 0.0,
        0.0, -1.0, 1.0 - params.lambda3 * f, 0.0,
        1.0, 0.0, 0.0, 1.0 - params.lambda4 * f,
    );
    b
}

/// `t ↦ B(t)` for fixed parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientMatrix {
    pub params: EssentialParams,
}

impl CoefficientMatrix {
    pub fn new(params: EssentialParams) -> Self {
        CoefficientMatrix { params }
    }

    pub fn at(&self, t: f64) -> Matrix4<f64> {
        assemble_b(&self.params, t)
    }

    pub fn jb(&self, t: f64) -> Matrix4<f64> {
        j4() * self.at(t)
    }
}

#[derive(Clone, Copy)]
struct Variational {
    coeff: CoefficientMatrix,
}

impl System<f64, State> for Variational {
    // The time is read from the state: the solver's stage-12 node is 0 instead of 1.
    fn system(&self, _t: f64, y: &State, dy: &mut State) {
        let x = Matrix4::from_column_slice(&y.as_slice()[..16]);
        let d = self.coeff.jb(y[16]) * x;
        dy.as_mut_slice()[..16].copy_from_slice(d.as_slice());
        dy[16] = 1.0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegratorStats {
    pub evaluations: u32,
    pub accepted_steps: u32,
    pub rejected_steps: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyResult {
    pub params: EssentialParams,
    pub m: Matrix4<f64>,
    /// `‖MᵀJM − J‖_∞ / max(1, ‖M‖_∞²)`.
    pub symplectic_residual: f64,
    /// `‖MᵀJM − J‖_∞`.
    pub symplectic_residual_abs: f64,
    pub det: f64,
    pub spectrum: [C64; 4],
    pub tol: f64,
    pub stats: IntegratorStats,
    /// Propagators of the sub-intervals, `M = F_k ⋯ F_1`.
    pub factors: Vec<Matrix4<f64>>,
}

impl MonodromyResult {
    /// `dim ker(M − ωI)`, resolved from the factors.
    pub fn nullity(&self, omega: C64, tol: f64) -> usize {
        factored_nullity(&self.factors, omega, tol)
    }
}

/// Fundamental solution at `t = 2π`, integrated with DOP853 at relative and absolute tolerance `tol`.
///
/// The period is cut into sub-intervals, halved until each propagator is moderate, and the
/// propagators are multiplied together. The decaying directions of a strongly hyperbolic system
/// are then never integrated underneath a large growing one.
pub fn monodromy(params: &EssentialParams, tol: f64) -> Result<MonodromyResult> {
    monodromy_with_cap(params, tol, DEFAULT_E_CAP)
}

pub fn monodromy_with_cap(params: &EssentialParams, tol: f64, e_cap: f64) -> Result<MonodromyResult> {
    if !(1e-13..=1e-6).contains(&tol) {
        return Err(Error::Domain(format!("tol must lie in [1e-13, 1e-6], got {tol}")));
    }
    if params.e.abs() >= e_cap || params.e.abs() >= 1.0 {
        return Err(Error::Integration(format!("eccentricity {} at or beyond the cap {e_cap}", params.e)));
    }
    let sys = Variational { coeff: CoefficientMatrix::new(*params) };
    let mut stats = IntegratorStats { evaluations: 0, accepted_steps: 0, rejected_steps: 0 };
    let mut factors = Vec::with_capacity(SEGMENTS);
    let step = 2.0 * PI / SEGMENTS as f64;
    let mut pending: Vec<(f64, f64, u32)> =
        (0..SEGMENTS).rev().map(|k| (k as f64 * step, (k + 1) as f64 * step, 0)).collect();
    while let Some((t0, t1, depth)) = pending.pop() {
        let f = propagate(&sys, t0, t1, tol, &mut stats)?;
        if depth < MAX_SPLITS && f.norm() > SEGMENT_GROWTH {
            let mid = 0.5 * (t0 + t1);
            pending.push((mid, t1, depth + 1));
            pending.push((t0, mid, depth + 1));
        } else {
            factors.push(f);
        }
    }
    let m = factors.iter().fold(Matrix4::identity(), |acc, f| f * acc);
    let (abs, rel) = symplectic_residual(&m);
    Ok(MonodromyResult {
        params: *params,
        m,
        symplectic_residual: rel,
        symplectic_residual_abs: abs,
        det: factors.iter().map(|f| f.determinant()).product(),
        spectrum: factored_spectrum(&factors),
        factors,
        tol,
        stats,
    })
}

/// Propagator of `[t0, t1]`.
fn propagate(sys: &Variational, t0: f64, t1: f64, tol: f64, stats: &mut IntegratorStats) -> Result<Matrix4<f64>> {
    let mut y0 = State::zeros();
    y0.as_mut_slice()[..16].copy_from_slice(Matrix4::<f64>::identity().as_slice());
    y0[16] = t0;
    let h = t1 - t0;
    let mut solver = Dop853::from_param(
        sys.clone(),
        t0,
        t1,
        h,
        y0,
        tol,
        tol,
        0.9,
        0.0,
        0.333,
        6.0,
        h,
        0.0,
        1_000_000,
        u32::MAX,
        OutputType::Sparse,
    );
    let s = solver.integrate().map_err(|e| Error::Integration(e.to_string()))?;
    let y = solver.y_out().last().ok_or_else(|| Error::Integration("no output".into()))?;
    stats.evaluations += s.num_eval;
    stats.accepted_steps += s.accepted_steps;
    stats.rejected_steps += s.rejected_steps;
    Ok(Matrix4::from_column_slice(&y.as_slice()[..16]))
}

/// `M^m`.
pub fn monodromy_iterate(result: &MonodromyResult, m: u32) -> Matrix4<f64> {
    let mut out = Matrix4::identity();
    for _ in 0..m {
        out *= result.m;
    }
    out
}

/// Factors of `M^m`, in order of application.
pub fn iterate_factors(result: &MonodromyResult, m: u32) -> Vec<Matrix4<f64>> {
    (0..m).flat_map(|_| result.factors.iter().copied()).collect()
}

/// Characteristic multipliers at `e = 0` from `λ⁴ + (2 − 2α)λ² + (1 + α)² − 9β² = 0`.
pub fn closed_form_multipliers_e0(alpha: f64, beta: f64) -> [C64; 4] {
    let d = C64::new(9.0 * beta * beta - 4.0 * alpha, 0.0).sqrt();
    let mut out = [C64::new(0.0, 0.0); 4];
    let mut k = 0;
    for s in [1.0, -1.0] {
        let l2 = C64::new(alpha - 1.0, 0.0) + d * s;
        let l = l2.sqrt();
        for sign in [1.0, -1.0] {
            out[k] = (l * (2.0 * PI * sign)).exp();
            k += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::common::{rank_above, to_complex};
    use crate::model::make_params;
    use crate::sympl::symplectic_spectrum;

    fn dist_multiset(a: &[C64; 4], b: &[C64; 4]) -> f64 {
        let mut best = f64::INFINITY;
        let perms = permutations4();
        for p in perms {
            let d = (0..4).map(|i| (a[i] - b[p[i]]).norm() / b[p[i]].norm().max(1.0)).fold(0.0, f64::max);
            best = best.min(d);
        }
        best
    }

    fn permutations4() -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        let mut s = p;
                        s.sort();
                        if s == [0, 1, 2, 3] {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn b_entries() {
        let p = make_params(0.5, 0.5, 0.0).unwrap();
        let b = assemble_b(&p, 0.3);
        assert_eq!(b[(2, 2)], -2.0);
        assert_eq!(b[(3, 3)], 1.0);
        assert_eq!(b, b.transpose());
        let p = make_params(2.0, 0.5, 0.5).unwrap();
        assert!((assemble_b(&p, PI)[(2, 2)] - (1.0 - 2.0 * p.lambda3)).abs() < 1e-14);
        assert!((assemble_b(&p, 1.1) - assemble_b(&p, 1.1 + 2.0 * PI)).abs().max() < 1e-14);
    }

    #[test]
    fn jb_at_e0_has_printed_entries() {
        let p = make_params(2.0, 0.5, 0.0).unwrap();
        let k = CoefficientMatrix::new(p);
        let b = k.at(0.0);
        assert!((b[(2, 2)] - (-p.alpha - 3.0 * p.beta)).abs() < 1e-14);
        assert!((b[(3, 3)] - (-p.alpha + 3.0 * p.beta)).abs() < 1e-14);
        let jb = k.jb(0.0);
        assert!((jb[(0, 2)] - (p.alpha + 3.0 * p.beta)).abs() < 1e-14);
        assert!((jb[(1, 3)] - (p.alpha - 3.0 * p.beta)).abs() < 1e-14);
        assert_eq!(k.at(0.0), k.at(2.3));
    }

    #[test]
    fn matches_matrix_exponential_at_e0() {
        for (a, b) in [(2.0, 0.5), (4.0, 2.0), (0.6, 0.5)] {
            let p = make_params(a, b, 0.0).unwrap();
            let r = monodromy(&p, 1e-12).unwrap();
            let expm = (CoefficientMatrix::new(p).jb(0.0) * (2.0 * PI)).exp();
            let scale = expm.norm().max(1.0);
            assert!((r.m - expm).norm() / scale < 1e-10, "{a} {b}");
        }
    }

    #[test]
    fn unipotent_and_minus_one_points() {
        let r = monodromy(&make_params(0.5, 0.5, 0.0).unwrap(), 1e-12).unwrap();
        assert!(r.spectrum.iter().all(|z| (z - 1.0).norm() < 1e-8), "{:?}", r.spectrum);
        let r = monodromy(&make_params(0.75, 3f64.sqrt() / 3.0, 0.0).unwrap(), 1e-12).unwrap();
        assert!(r.spectrum.iter().all(|z| (z + 1.0).norm() < 1e-8), "{:?}", r.spectrum);
        let m2 = monodromy_iterate(&r, 2);
        assert!(symplectic_spectrum(&m2).iter().all(|z| (z - 1.0).norm() < 1e-8));
    }

    #[test]
    fn closed_form_spectrum_4_2() {
        let r = monodromy(&make_params(4.0, 2.0, 0.0).unwrap(), 1e-12).unwrap();
        let l1 = (3.0 + 20f64.sqrt()).sqrt();
        let th = (20f64.sqrt() - 3.0).sqrt();
        let expect = [
            C64::new((2.0 * PI * l1).exp(), 0.0),
            C64::new((-2.0 * PI * l1).exp(), 0.0),
            C64::from_polar(1.0, 2.0 * PI * th),
            C64::from_polar(1.0, -2.0 * PI * th),
        ];
        assert!(dist_multiset(&r.spectrum, &expect) < 1e-8);
        assert!(dist_multiset(&closed_form_multipliers_e0(4.0, 2.0), &expect) < 1e-12);
        assert!((r.det - 1.0).abs() < 1e-9 * r.m.norm().powi(2).max(1.0));
    }

    #[test]
    fn iterate_powers() {
        let r = monodromy(&make_params(2.0, 1.0, 0.4).unwrap(), 1e-11).unwrap();
        assert_eq!(monodromy_iterate(&r, 1), r.m);
        assert!((monodromy_iterate(&r, 3) - r.m * r.m * r.m).norm() < 1e-9 * r.m.norm().powi(3));
    }

    #[test]
    fn bott_identity_at_minus_one_point() {
        let r = monodromy(&make_params(0.75, 3f64.sqrt() / 3.0, 0.0).unwrap(), 1e-12).unwrap();
        let m = r.m;
        let i = Matrix4::<f64>::identity();
        let thr = 1e-6;
        let k2 = 4 - rank_above(&to_complex(&nalgebra::DMatrix::from_column_slice(4, 4, (m * m - i).as_slice())), thr);
        let kp = 4 - rank_above(&to_complex(&nalgebra::DMatrix::from_column_slice(4, 4, (m - i).as_slice())), thr);
        let km = 4 - rank_above(&to_complex(&nalgebra::DMatrix::from_column_slice(4, 4, (m + i).as_slice())), thr);
        assert_eq!(k2, kp + km);
        assert_eq!(km, 2);
    }

    #[test]
    fn tolerance_refinement_converges() {
        for (a, b, e) in [(2.0, 0.6, 0.3), (5.0, 2.0, 0.6)] {
            let p = make_params(a, b, e).unwrap();
            let ms: Vec<Matrix4<f64>> = (0..9).map(|k| monodromy(&p, 1e-9 / 2f64.powi(k)).unwrap().m).collect();
            let diffs: Vec<f64> = ms.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
            assert!(diffs.windows(2).all(|w| w[1] <= w[0] * 1.05), "{diffs:?}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = make_params(2.0, 0.5, 0.0).unwrap();
        assert!(matches!(monodromy(&p, 1e-3), Err(Error::Domain(_))));
        let p = EssentialParams::unchecked(2.0, 0.5, 0.995);
        assert!(matches!(monodromy(&p, 1e-10), Err(Error::Integration(_))));
    }
}
