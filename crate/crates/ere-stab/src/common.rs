//! Shared numerics: errors, bracketing, rank by singular values, eigenvalue wrappers.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error, Serialize, Deserialize)]
pub enum Error {
    #[error("collision: |q{index} - z*| = {distance:e}")]
    Collision { index: usize, distance: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("mass out of range: m = {0}")]
    MassRange(f64),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("unresolved spectrum class: {0}")]
    UnresolvedClass(String),
    #[error("degenerate Krein form: |g| = {0:e}")]
    DegenerateKrein(f64),
    #[error("Galerkin not converged: N={n} gives (i,nu)=({i0},{nu0}), N={n2} gives ({i1},{nu1})")]
    NotConverged { n: usize, n2: usize, i0: usize, nu0: usize, i1: usize, nu1: usize },
    #[error("singular recurrence: {0}")]
    SingularRecurrence(String),
    #[error("no bracket: {0}")]
    Bracket(String),
    #[error("degenerate bracket [{lo}, {hi}]: f has the same sign at both ends")]
    DegenerateBracket { lo: f64, hi: f64 },
    #[error("root count mismatch for {function} on {interval}: found {found}, expected {expected}")]
    RootCount { function: String, interval: String, found: usize, expected: usize },
}

impl Error {
    /// Process exit code: 1 for domain errors, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Collision { .. } | Error::Domain(_) | Error::MassRange(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn new<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> Self {
        Bracket { lo, hi, f_lo: f(lo), f_hi: f(hi) }
    }

    pub fn is_degenerate(&self) -> bool {
        !(self.f_lo * self.f_hi < 0.0)
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo).abs()
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Bisection on a sign-changing bracket, returning the final bracket with `width() <= xtol`.
pub fn bisect_bracket<F: FnMut(f64) -> f64>(mut f: F, bracket: Bracket, xtol: f64) -> Result<Bracket> {
    if bracket.is_degenerate() {
        if bracket.f_lo == 0.0 {
            return Ok(Bracket { hi: bracket.lo, f_hi: 0.0, ..bracket });
        }
        if bracket.f_hi == 0.0 {
            return Ok(Bracket { lo: bracket.hi, f_lo: 0.0, ..bracket });
        }
        return Err(Error::DegenerateBracket { lo: bracket.lo, hi: bracket.hi });
    }
    if !(xtol > 0.0) {
        return Err(Error::Domain(format!("xtol must be positive, got {xtol}")));
    }
    let mut b = bracket;
    while b.width() > xtol {
        let mid = b.midpoint();
        if mid <= b.lo.min(b.hi) || mid >= b.lo.max(b.hi) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(Bracket { lo: mid, hi: mid, f_lo: 0.0, f_hi: 0.0 });
        }
        if (fm < 0.0) == (b.f_lo < 0.0) {
            b.lo = mid;
            b.f_lo = fm;
        } else {
            b.hi = mid;
            b.f_hi = fm;
        }
    }
    Ok(b)
}

/// Root of `f` inside a sign-changing bracket.
pub fn bisect<F: FnMut(f64) -> f64>(f: F, bracket: Bracket, xtol: f64) -> Result<f64> {
    bisect_bracket(f, bracket, xtol).map(|b| b.midpoint())
}

/// Smallest `x` in `[lo, hi]` where a non-decreasing integer step function reaches `level`.
///
/// Requires `g(lo) < level <= g(hi)`. Returns the final `(lo, hi)` pair with `hi - lo <= xtol`,
/// `g(lo) < level` and `g(hi) >= level`.
pub fn locate_jump<G: FnMut(f64) -> i64>(mut g: G, lo: f64, hi: f64, level: i64, xtol: f64) -> Result<(f64, f64)> {
    if !(g(lo) < level && g(hi) >= level) {
        return Err(Error::DegenerateBracket { lo, hi });
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > xtol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if g(mid) >= level {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok((a, b))
}

pub fn central_difference<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<Complex<f64>>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Number of singular values above `threshold`.
pub fn rank_above(m: &DMatrix<Complex<f64>>, threshold: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s > threshold).count()
}

/// Orthonormal basis of the numerical null space of a square matrix (singular values `<= threshold`).
pub fn null_space(m: &DMatrix<Complex<f64>>, threshold: f64) -> Vec<nalgebra::DVector<Complex<f64>>> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= threshold)
        .map(|i| v_t.row(i).adjoint().into_owned())
        .collect()
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Eigenvalues of a general real square matrix.
pub fn general_eigenvalues(m: &DMatrix<f64>) -> Vec<Complex<f64>> {
    m.clone().complex_eigenvalues().iter().copied().collect()
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex<f64>> {
    m.map(|x| Complex::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bisect_sqrt2() {
        let f = |x: f64| x * x - 2.0;
        let r = bisect(f, Bracket::new(f, 1.0, 2.0), 1e-12).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn degenerate_bracket_rejected() {
        let f = |x: f64| x * x + 1.0;
        assert!(matches!(bisect(f, Bracket::new(f, -1.0, 1.0), 1e-8), Err(Error::DegenerateBracket { .. })));
    }

    #[test]
    fn jump_locator_on_step_function() {
        let jump = 0.376_543_21;
        let g = |x: f64| if x < jump { 1 } else { 3 };
        let (a, b) = locate_jump(g, 0.0, 1.0, 2, 1e-12).unwrap();
        assert!(a < jump && b >= jump && b - a <= 1e-12);
    }

    #[test]
    fn rank_of_projector() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(rank_above(&to_complex(&m), 1e-12), 2);
        let ns = null_space(&to_complex(&m), 1e-12);
        assert_eq!(ns.len(), 1);
        assert!((ns[0][2].norm() - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn bisect_stays_inside_and_is_bounded(a in -5.0f64..-0.1, b in 0.1f64..5.0, r in -0.09f64..0.09) {
            let mut evals = Vec::new();
            let xtol = 1e-9;
            let f = |x: f64| x - r;
            let br = Bracket::new(f, a, b);
            let mut count = 0usize;
            let out = bisect_bracket(|x| { evals.push(x); count += 1; x - r }, br, xtol).unwrap();
            prop_assert!(out.width() <= xtol || out.lo == out.hi);
            prop_assert!(evals.iter().all(|&x| x >= a && x <= b));
            let bound = (((b - a) / xtol).log2().ceil() as usize) + 2;
            prop_assert!(count <= bound);
        }
    }
}
