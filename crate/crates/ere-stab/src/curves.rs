//! Degenerate surfaces `Γ_n` (ω = 1) and `Σ_n^±` (ω = −1) traced in `(α, β, e)`, their slopes
//! at `e = 0`, and the surfaces `β̃_s`, `β̃_m`, `β̃_k` bounding the non-hyperbolic region.

use crate::common::{locate_jump, Error, Result};
use crate::essential::{monodromy, DEFAULT_TOL as INT_TOL};
use crate::galerkin::{assemble, problem_counts, sector_nonpositive_count, Omega, Sector, DEFAULT_N, DEFAULT_TOL};
use crate::model::{from_tilde, EssentialParams};
use crate::regions::beta_theta;
use crate::sympl::UNIT_TOL;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const BETA_CEILING: f64 = 100.0;
pub const TRACE_STEP: f64 = 0.01;
/// Relative half-width of the first bracket tried around a seed.
pub const REBRACKET: f64 = 0.05;
pub const MAX_E: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Lower,
    Upper,
}

/// Mode number of the curve at `e = 0`: `n` on `Γ_n`, `n + 1/2` on `Σ_n`.
pub fn mode(omega: Omega, n: u32) -> f64 {
    match omega {
        Omega::Plus1 => n as f64,
        Omega::Minus1 => n as f64 + 0.5,
    }
}

/// `β` on the curve at `e = 0`.
pub fn closed_form_beta(alpha: f64, omega: Omega, n: u32) -> f64 {
    beta_theta(mode(omega, n), alpha)
}

/// Sectors crossed by the curve and the per-sector count of nonpositive eigenvalues just past it.
pub fn sector_levels(omega: Omega, n: u32) -> Vec<(Sector, i64)> {
    let n = n as i64;
    match omega {
        Omega::Plus1 if n == 0 => vec![(Sector::B, 1)],
        Omega::Plus1 => vec![(Sector::A, n), (Sector::B, n + 1)],
        Omega::Minus1 => vec![(Sector::A, n + 1), (Sector::B, n + 1)],
    }
}

/// Position in the chain `Σ₀⁻ ≤ Σ₀⁺ < Γ₁ = Γ₁ < Σ₁⁻ ≤ Σ₁⁺ < …` counted from `Γ₀`.
pub fn ordinal(omega: Omega, n: u32, branch: Branch) -> u32 {
    let up = (branch == Branch::Upper) as u32;
    match omega {
        Omega::Plus1 if n == 0 => 0,
        Omega::Plus1 => 2 * n - 1 + up,
        Omega::Minus1 => 2 * n + 1 + up,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegenerateCurveSample {
    pub alpha: f64,
    pub e: f64,
    pub omega: Omega,
    pub n: u32,
    /// `None` when both branches coincide within the resolution.
    pub branch: Option<Branch>,
    pub ordinal: u32,
    pub beta: f64,
    pub multiplicity: usize,
    pub bracket_width: f64,
}

fn sector_count(alpha: f64, beta: f64, e: f64, omega: Omega, sector: Sector) -> i64 {
    sector_nonpositive_count(&EssentialParams::unchecked(alpha, beta, e), omega, sector, DEFAULT_N) as i64
}

/// Bracket `[lo, hi]` of the smallest `β` where the sector count reaches `level`, widened
/// geometrically around `seed` until it holds the jump.
fn sector_jump(
    alpha: f64,
    e: f64,
    omega: Omega,
    sector: Sector,
    level: i64,
    seed: f64,
    resolution: f64,
) -> Result<(f64, f64)> {
    let g = |b: f64| sector_count(alpha, b, e, omega, sector);
    let mut w = REBRACKET * seed.abs().max(1e-3);
    loop {
        let lo = (seed - w).max(0.0);
        let hi = (seed + w).min(BETA_CEILING);
        if g(lo) < level && g(hi) >= level {
            return locate_jump(g, lo, hi, level, resolution);
        }
        if lo == 0.0 && hi == BETA_CEILING {
            return Err(Error::Bracket(format!(
                "no {omega:?} jump to level {level} in sector {sector:?} for beta in [0, {BETA_CEILING}] at alpha={alpha}, e={e}"
            )));
        }
        w *= 2.0;
    }
}

fn nullity_at(alpha: f64, beta: f64, e: f64, omega: Omega) -> usize {
    let p = assemble(&EssentialParams::unchecked(alpha, beta, e), omega, DEFAULT_N);
    problem_counts(&p, DEFAULT_TOL).nullity
}

/// Per-sector brackets for one curve at `e`, seeded by `seeds` (or the `e = 0` curve).
fn sector_brackets(
    alpha: f64,
    omega: Omega,
    e: f64,
    n: u32,
    seeds: Option<&[f64]>,
    resolution: f64,
) -> Result<Vec<(f64, f64)>> {
    let b0 = closed_form_beta(alpha, omega, n);
    sector_levels(omega, n)
        .into_iter()
        .enumerate()
        .map(|(i, (s, level))| {
            let seed = seeds.map(|v| v[i]).unwrap_or(b0);
            sector_jump(alpha, e, omega, s, level, seed, resolution)
        })
        .collect()
}

fn samples_from(
    alpha: f64,
    omega: Omega,
    e: f64,
    n: u32,
    brackets: &[(f64, f64)],
    resolution: f64,
) -> Result<Vec<DegenerateCurveSample>> {
    let mid = |b: &(f64, f64)| 0.5 * (b.0 + b.1);
    let mut bs: Vec<(f64, f64)> = brackets.to_vec();
    bs.sort_by(|a, b| mid(a).partial_cmp(&mid(b)).unwrap());
    let make = |b: &(f64, f64), branch: Option<Branch>| -> Result<DegenerateCurveSample> {
        let beta = mid(b);
        let multiplicity = nullity_at(alpha, beta, e, omega);
        if multiplicity == 0 {
            return Err(Error::Bracket(format!("jump at beta={beta} has no kernel (alpha={alpha}, e={e}, {omega:?})")));
        }
        Ok(DegenerateCurveSample {
            alpha,
            e,
            omega,
            n,
            branch,
            ordinal: ordinal(omega, n, branch.unwrap_or(Branch::Lower)),
            beta,
            multiplicity,
            bracket_width: b.1 - b.0,
        })
    };
    if bs.len() == 1 || (mid(&bs[1]) - mid(&bs[0])).abs() <= 2.0 * resolution {
        let hull = (bs[0].0, bs.last().unwrap().1);
        return Ok(vec![make(&hull, None)?]);
    }
    Ok(vec![make(&bs[0], Some(Branch::Lower))?, make(&bs[1], Some(Branch::Upper))?])
}

fn check_inputs(e: f64, resolution: f64) -> Result<()> {
    if !(0.0..=MAX_E).contains(&e) {
        return Err(Error::Domain(format!("e must lie in [0, {MAX_E}], got {e}")));
    }
    if !(resolution >= 1e-10) {
        return Err(Error::Domain(format!("resolution must be at least 1e-10, got {resolution}")));
    }
    Ok(())
}

/// All samples of the `n`-th curve at one `e`: one merged sample or one per branch.
pub fn degenerate_samples(
    alpha: f64,
    omega: Omega,
    e: f64,
    n: u32,
    resolution: f64,
) -> Result<Vec<DegenerateCurveSample>> {
    check_inputs(e, resolution)?;
    let br = sector_brackets(alpha, omega, e, n, None, resolution)?;
    samples_from(alpha, omega, e, n, &br, resolution)
}

/// `β` of one branch of the `n`-th `ω`-degenerate curve at `(α, e)`.
pub fn degenerate_beta(
    alpha: f64,
    omega: Omega,
    e: f64,
    n: u32,
    branch: Branch,
    resolution: f64,
) -> Result<DegenerateCurveSample> {
    let s = degenerate_samples(alpha, omega, e, n, resolution)?;
    let pick = match branch {
        Branch::Lower => s[0],
        Branch::Upper => *s.last().unwrap(),
    };
    Ok(DegenerateCurveSample { ordinal: ordinal(omega, n, branch), ..pick })
}

/// Continuation in `e` from `0` to `e_max` with step `de`, each step re-bracketed around the
/// previous value.
pub fn trace(
    alpha: f64,
    omega: Omega,
    n: u32,
    e_max: f64,
    de: f64,
    resolution: f64,
) -> Result<Vec<DegenerateCurveSample>> {
    check_inputs(e_max, resolution)?;
    if !(de > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {de}")));
    }
    let steps = (e_max / de).round() as usize;
    let mut seeds: Option<Vec<f64>> = None;
    let mut out = Vec::new();
    for i in 0..=steps {
        let e = (i as f64 * de).min(e_max);
        let br = sector_brackets(alpha, omega, e, n, seeds.as_deref(), resolution)?;
        seeds = Some(br.iter().map(|b| 0.5 * (b.0 + b.1)).collect());
        out.extend(samples_from(alpha, omega, e, n, &br, resolution)?);
    }
    Ok(out)
}

/// Independent traces over several `α`, in parallel.
pub fn trace_columns(
    alphas: &[f64],
    omega: Omega,
    n: u32,
    e_max: f64,
    de: f64,
    resolution: f64,
) -> Vec<Result<Vec<DegenerateCurveSample>>> {
    alphas.par_iter().map(|&a| trace(a, omega, n, e_max, de, resolution)).collect()
}

/// `∂β/∂e` at `e = 0` by a central difference over `±h`, following each sector through
/// `e = 0` (negative `e` enters through the same assembly).
pub fn slope_at_e0(alpha: f64, omega: Omega, n: u32, branch: Branch, h: f64) -> Result<f64> {
    if !(1e-4..=1e-2).contains(&h) {
        return Err(Error::Domain(format!("h must lie in [1e-4, 1e-2], got {h}")));
    }
    let res = 1e-11;
    let plus = sector_brackets(alpha, omega, h, n, None, res)?;
    let minus = sector_brackets(alpha, omega, -h, n, None, res)?;
    let mid = |b: &(f64, f64)| 0.5 * (b.0 + b.1);
    let mut slopes: Vec<(f64, f64)> =
        plus.iter().zip(&minus).map(|(p, m)| (mid(p), (mid(p) - mid(m)) / (2.0 * h))).collect();
    slopes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(match branch {
        Branch::Lower => slopes[0].1,
        Branch::Upper => slopes.last().unwrap().1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NhSurfaces {
    pub alpha_tilde: f64,
    pub e: f64,
    pub beta_s: f64,
    pub beta_m: f64,
    pub beta_k: f64,
}

fn tilde_params(alpha_tilde: f64, beta_tilde: f64, e: f64) -> EssentialParams {
    let (a, b) = from_tilde(alpha_tilde, beta_tilde);
    EssentialParams::unchecked(a, b, e)
}

/// Whether the monodromy at `(α̃, β̃, e)` has an eigenvalue on the unit circle.
pub fn spectrum_meets_circle(alpha_tilde: f64, beta_tilde: f64, e: f64) -> Result<bool> {
    let r = monodromy(&tilde_params(alpha_tilde, beta_tilde, e), INT_TOL)?;
    Ok(r.spectrum.iter().any(|z| (z.norm() - 1.0).abs() < UNIT_TOL))
}

/// `β̃_k` by bisection on "spectrum meets U", then `β̃_s ≤ β̃_m` as the `−1`-nullity loci of the
/// two sectors on `[β̃_k, 0]`.
pub fn nh_surfaces(alpha_tilde: f64, e: f64, resolution: f64) -> Result<NhSurfaces> {
    if !(alpha_tilde > 0.0) {
        return Err(Error::Domain(format!("alpha_tilde must be positive, got {alpha_tilde}")));
    }
    if !(0.0..=0.9).contains(&e) {
        return Err(Error::Domain(format!("e must lie in [0, 0.9], got {e}")));
    }
    let mut failure = None;
    let meets = |bt: f64| match spectrum_meets_circle(alpha_tilde, bt, e) {
        Ok(v) => v as i64,
        Err(err) => {
            failure.get_or_insert(err);
            0
        }
    };
    let (klo, khi) = locate_jump(meets, -1.0, 0.0, 1, resolution).map_err(|_| {
        Error::Bracket(format!(
            "spectrum does not cross U on beta_tilde in [-1, 0] at alpha_tilde={alpha_tilde}, e={e}"
        ))
    })?;
    if let Some(err) = failure {
        return Err(err);
    }
    let beta_k = 0.5 * (klo + khi);
    let mut loci = Vec::new();
    for s in [Sector::A, Sector::B] {
        let g =
            |bt: f64| sector_nonpositive_count(&tilde_params(alpha_tilde, bt, e), Omega::Minus1, s, DEFAULT_N) as i64;
        let (lo, hi) = locate_jump(g, khi, 0.0, 1, resolution).map_err(|_| {
            Error::Bracket(format!(
                "no -1-degenerate point of sector {s:?} on beta_tilde in [{beta_k}, 0] at alpha_tilde={alpha_tilde}, e={e}"
            ))
        })?;
        loci.push(0.5 * (lo + hi));
    }
    loci.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(NhSurfaces { alpha_tilde, e, beta_s: loci[0], beta_m: loci[1], beta_k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galerkin::index_pair;
    use crate::regions::alpha_theta;

    #[test]
    fn gamma1_at_alpha4() {
        let s = degenerate_samples(4.0, Omega::Plus1, 0.0, 1, 1e-10).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0].beta - 32f64.sqrt() / 3.0).abs() < 1e-8);
        assert_eq!(s[0].multiplicity, 2);
    }

    #[test]
    fn sigma1_on_three_halves_curve() {
        let s = degenerate_beta(4.0, Omega::Minus1, 0.0, 1, Branch::Lower, 1e-10).unwrap();
        assert!((4.0 - (-13.0 / 4.0 + (9.0 * s.beta * s.beta + 9.0).sqrt())).abs() < 1e-7);
    }

    #[test]
    fn sigma_pair_coincides_then_splits() {
        let s0 = degenerate_samples(2.0, Omega::Minus1, 0.0, 0, 1e-10).unwrap();
        assert_eq!(s0.len(), 1);
        assert_eq!(s0[0].multiplicity, 2);
        let s1 = degenerate_samples(2.0, Omega::Minus1, 0.2, 0, 1e-10).unwrap();
        assert_eq!(s1.len(), 2);
        assert!(s1[0].beta < s1[1].beta);
    }

    #[test]
    fn closed_forms_up_to_n4() {
        for alpha in [1.0, 8.0] {
            for omega in [Omega::Plus1, Omega::Minus1] {
                for n in 0..=4 {
                    let s = degenerate_beta(alpha, omega, 0.0, n, Branch::Lower, 1e-10).unwrap();
                    let k = mode(omega, n);
                    assert!((alpha_theta(k, s.beta) - alpha).abs() < 1e-6, "{alpha} {omega:?} {n}");
                }
            }
        }
    }

    #[test]
    fn slopes() {
        let lo = slope_at_e0(2.0, Omega::Minus1, 0, Branch::Lower, 1e-3).unwrap();
        let hi = slope_at_e0(2.0, Omega::Minus1, 0, Branch::Upper, 1e-3).unwrap();
        assert!((lo + 1.0 / 24.0).abs() < 1e-3, "{lo}");
        assert!((hi - 1.0 / 24.0).abs() < 1e-3, "{hi}");
        let g = slope_at_e0(4.0, Omega::Plus1, 1, Branch::Lower, 1e-3).unwrap();
        assert!(g.abs() < 1e-3, "{g}");
        let s = slope_at_e0(4.0, Omega::Minus1, 1, Branch::Upper, 1e-3).unwrap();
        assert!(s.abs() < 1e-3, "{s}");
    }

    #[test]
    fn trace_keeps_even_multiplicity_on_gamma() {
        let t = trace(3.0, Omega::Plus1, 1, 0.1, 0.05, 1e-9).unwrap();
        assert_eq!(t.len(), 3);
        for s in &t {
            assert_eq!(s.branch, None);
            assert_eq!(s.multiplicity, 2, "e {}", s.e);
            let ip = index_pair(&EssentialParams::unchecked(s.alpha, s.beta, s.e), Omega::Plus1).unwrap();
            assert!(ip.nullity >= 1);
        }
    }

    #[test]
    fn ordinals() {
        assert_eq!(ordinal(Omega::Minus1, 0, Branch::Lower), 1);
        assert_eq!(ordinal(Omega::Minus1, 0, Branch::Upper), 2);
        assert_eq!(ordinal(Omega::Plus1, 1, Branch::Lower), 1);
        assert_eq!(ordinal(Omega::Plus1, 1, Branch::Upper), 2);
        assert_eq!(ordinal(Omega::Minus1, 1, Branch::Lower), 3);
    }

    #[test]
    fn nh_surfaces_at_e0() {
        let s = nh_surfaces(0.2, 0.0, 1e-9).unwrap();
        assert!((s.beta_s - s.beta_m).abs() < 1e-8);
        let (a, b) = from_tilde(s.alpha_tilde, s.beta_s);
        assert!((a - alpha_theta(0.5, b)).abs() < 1e-7);
        assert!(s.beta_k <= s.beta_s && s.beta_m <= 0.0);
        assert!(matches!(nh_surfaces(0.3, 0.0, 1e-9), Err(Error::Bracket(_))));
    }
}
