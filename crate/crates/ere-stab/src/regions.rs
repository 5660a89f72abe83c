//! Closed-form analysis at `e = 0` (regions ℛ₁–ℛ₄, sub-regions, index tables) and the stability
//! verdict for general `e`.

use crate::common::{Error, Result};
use crate::essential::{monodromy, MonodromyResult, DEFAULT_TOL as INT_TOL};
use crate::galerkin::{index_pair, IndexPair, Omega};
use crate::model::EssentialParams;
use crate::sympl::{classify_with_spectrum, Block, SpectrumClass, RANK_TOL};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Half-width of the band around each defining expression that is labeled a boundary.
pub const BOUNDARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Major {
    R1,
    R2,
    R3,
    R4,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SubRegion {
    /// `α > α_{1/2}(β)` inside ℛ₂.
    R2HalfMinus,
    R2HalfStar,
    /// `α < α_{1/2}(β)` inside ℛ₂.
    R2HalfPlus,
    /// `θ ∈ (n − 1/2, n)`.
    R3Minus(u32),
    /// `θ = n`.
    R3Star(u32),
    /// `θ ∈ (n, n + 1/2)`.
    R3Plus(u32),
    /// `θ = n + 1/2`.
    R3HalfStar(u32),
}

impl fmt::Display for SubRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubRegion::R2HalfMinus => write!(f, "R2,1/2-"),
            SubRegion::R2HalfStar => write!(f, "R2,1/2*"),
            SubRegion::R2HalfPlus => write!(f, "R2,1/2+"),
            SubRegion::R3Minus(n) => write!(f, "R3,{n}-"),
            SubRegion::R3Star(n) => write!(f, "R3,{n}*"),
            SubRegion::R3Plus(n) => write!(f, "R3,{n}+"),
            SubRegion::R3HalfStar(n) => write!(f, "R3,{}/2*", 2 * n + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionLabel {
    pub major: Major,
    /// Open regions whose closures contain the point, for boundary labels.
    pub adjacent: Vec<Major>,
    pub minor: Option<SubRegion>,
    /// `(θ₁, θ₂)` with `θ₁ ≤ θ₂`, when both radicands are nonnegative.
    pub thetas: Option<(f64, f64)>,
    /// Elliptic angle of ℛ₃.
    pub theta: Option<f64>,
    /// Positive real exponents `η` with multipliers `e^{±2πη}`.
    pub etas: Vec<f64>,
}

impl RegionLabel {
    pub fn is_boundary(&self) -> bool {
        self.major == Major::Boundary
    }
}

fn sign_band(x: f64) -> i32 {
    if x > BOUNDARY_TOL {
        1
    } else if x < -BOUNDARY_TOL {
        -1
    } else {
        0
    }
}

/// `α_θ(β) = −θ² − 1 + √(9β² + 4θ²)`, the curve on which the elliptic angle of ℛ₃ equals `θ`.
pub fn alpha_theta(theta: f64, beta: f64) -> f64 {
    -theta * theta - 1.0 + (9.0 * beta * beta + 4.0 * theta * theta).sqrt()
}

/// Inverse of [`alpha_theta`] in `β`.
pub fn beta_theta(theta: f64, alpha: f64) -> f64 {
    let a = alpha + theta * theta + 1.0;
    ((a * a - 4.0 * theta * theta).max(0.0)).sqrt() / 3.0
}

fn thetas_e0(alpha: f64, beta: f64) -> (Option<(f64, f64)>, f64) {
    let d = 9.0 * beta * beta - 4.0 * alpha;
    if d < -BOUNDARY_TOL {
        return (None, f64::NAN);
    }
    let sd = d.max(0.0).sqrt();
    let r1 = 1.0 - alpha - sd;
    let r2 = 1.0 - alpha + sd;
    let th2 = r2.max(0.0).sqrt();
    let pair = if r1 >= -BOUNDARY_TOL { Some((r1.max(0.0).sqrt(), th2)) } else { None };
    (pair, if r2 >= -BOUNDARY_TOL { th2 } else { f64::NAN })
}

fn r3_tag(alpha: f64, beta: f64, theta: f64) -> SubRegion {
    let n = theta.floor() as u32;
    let on = |t: f64| (alpha - alpha_theta(t, beta)).abs() <= BOUNDARY_TOL;
    for k in [n, n + 1] {
        if on(k as f64) {
            return SubRegion::R3Star(k);
        }
    }
    for k in [n.saturating_sub(1), n] {
        if on(k as f64 + 0.5) {
            return SubRegion::R3HalfStar(k);
        }
    }
    if theta - n as f64 > 0.5 {
        SubRegion::R3Minus(n + 1)
    } else {
        SubRegion::R3Plus(n)
    }
}

fn r2_tag(alpha: f64, beta: f64) -> SubRegion {
    match sign_band(alpha - alpha_theta(0.5, beta)) {
        1 => SubRegion::R2HalfMinus,
        -1 => SubRegion::R2HalfPlus,
        _ => SubRegion::R2HalfStar,
    }
}

/// Region of `(α, β)` at `e = 0` by the sign tests on `9β² − 4α`, `α − 3β + 1` and `α − 1`.
pub fn classify_e0(alpha: f64, beta: f64) -> RegionLabel {
    let d = 9.0 * beta * beta - 4.0 * alpha;
    let (sd, sg, sh) = (sign_band(d), sign_band(alpha - 3.0 * beta + 1.0), sign_band(alpha - 1.0));
    let (major, adjacent) = if sg < 0 {
        (Major::R3, vec![])
    } else if sd < 0 {
        (Major::R1, vec![])
    } else if sd > 0 && sg > 0 && sh < 0 {
        (Major::R2, vec![])
    } else if sd > 0 && sg > 0 && sh > 0 {
        (Major::R4, vec![])
    } else {
        let mut adj = Vec::new();
        if sd == 0 {
            adj.push(Major::R1);
        }
        if sg == 0 {
            adj.push(Major::R3);
        }
        if sh <= 0 {
            adj.push(Major::R2);
        }
        if sh >= 0 && sg >= 0 {
            adj.push(Major::R4);
        }
        adj.sort_by_key(|m| *m as u8);
        adj.dedup();
        (Major::Boundary, adj)
    };
    let (pair, th) = thetas_e0(alpha, beta);
    let sdq = d.max(0.0).sqrt();
    let mut etas = Vec::new();
    for r in [alpha - 1.0 + sdq, alpha - 1.0 - sdq] {
        if d >= 0.0 && r > 0.0 {
            etas.push(r.sqrt());
        }
    }
    let in_r2_closure =
        major == Major::R2 || (major == Major::Boundary && adjacent.contains(&Major::R2) && pair.is_some());
    let in_r3_closure = major == Major::R3 || (major == Major::Boundary && adjacent.contains(&Major::R3));
    let minor = if major == Major::R3 || (in_r3_closure && !in_r2_closure) {
        Some(r3_tag(alpha, beta, th.max(0.0)))
    } else if sg == 0 && sh > 0 {
        Some(SubRegion::R3Star(0))
    } else if in_r2_closure {
        Some(r2_tag(alpha, beta))
    } else {
        None
    };
    RegionLabel {
        major,
        adjacent,
        minor,
        thetas: if major == Major::R3 { None } else { pair },
        theta: if in_r3_closure && th.is_finite() { Some(th) } else { None },
        etas,
    }
}

/// `#{k ∈ ks : α < α_k(β)}` and `#{k ∈ ks : α = α_k(β)}` (within the band), for `k` up to where
/// the curves exceed `α`.
fn crossings(alpha: f64, beta: f64, first: f64) -> (usize, usize) {
    let (mut below, mut on) = (0, 0);
    let mut k = first;
    loop {
        let a = alpha_theta(k, beta);
        if alpha < a - BOUNDARY_TOL {
            below += 1;
        } else if (alpha - a).abs() <= BOUNDARY_TOL {
            on += 1;
        } else if a < alpha - 1.0 && k > 2.0 {
            break;
        }
        k += 1.0;
        if k > 1e4 {
            break;
        }
    }
    (below, on)
}

/// `(i_ω, ν_ω)` at `e = 0` from the region tables.
pub fn index_table_e0(alpha: f64, beta: f64, omega: Omega) -> IndexPair {
    let g = alpha - 3.0 * beta + 1.0;
    let d = 9.0 * beta * beta - 4.0 * alpha;
    let sg = sign_band(g);
    let pair = |i: usize, n: usize| IndexPair { index: i, nullity: n, converged: true };
    let r3_zone = sg <= 0;
    match omega {
        Omega::Plus1 => {
            if !r3_zone {
                return pair(0, 0);
            }
            let (below, on) = crossings(alpha, beta, 1.0);
            if sg < 0 {
                pair(1 + 2 * below, 2 * on)
            } else {
                pair(0, 1 + 2 * on)
            }
        }
        Omega::Minus1 => {
            if r3_zone {
                let (below, on) = crossings(alpha, beta, 0.5);
                return pair(2 * below, 2 * on);
            }
            if sign_band(d) < 0 || sign_band(alpha - 1.0) > 0 {
                return pair(0, 0);
            }
            match r2_tag(alpha, beta) {
                SubRegion::R2HalfPlus => pair(2, 0),
                SubRegion::R2HalfStar => pair(0, 2),
                _ => pair(0, 0),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    StronglyLinearlyStable,
    LinearlyStableNotStrongly,
    SpectrallyStableLinearlyUnstable,
    EllipticHyperbolicUnstable,
    HyperbolicUnstable,
    Unresolved,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::StronglyLinearlyStable => "strongly-linearly-stable",
            Verdict::LinearlyStableNotStrongly => "linearly-stable-not-strongly",
            Verdict::SpectrallyStableLinearlyUnstable => "spectrally-stable-linearly-unstable",
            Verdict::EllipticHyperbolicUnstable => "elliptic-hyperbolic-unstable",
            Verdict::HyperbolicUnstable => "hyperbolic-unstable",
            Verdict::Unresolved => "unresolved",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub verdict: Verdict,
    pub normal_form: Option<SpectrumClass>,
    pub unresolved_reason: Option<String>,
    pub index_plus1: IndexPair,
    pub index_minus1: IndexPair,
    pub monodromy: MonodromyResult,
}

impl StabilityVerdict {
    pub fn label(&self) -> String {
        self.normal_form.as_ref().map(|c| c.label()).unwrap_or_else(|| "unresolved".into())
    }
}

/// Verdict from a labeled normal form.
pub fn verdict_of(cls: &SpectrumClass) -> Verdict {
    if cls.none_on_unit_circle() {
        return Verdict::HyperbolicUnstable;
    }
    if !cls.all_on_unit_circle() {
        return Verdict::EllipticHyperbolicUnstable;
    }
    if !cls.semisimple() {
        return Verdict::SpectrallyStableLinearlyUnstable;
    }
    let at_pm_one = cls.blocks.iter().any(|b| matches!(b, Block::N1 { .. }));
    let mixed_collision = cls.krein.iter().any(|k| k.signs.0 > 0 && k.signs.1 > 0);
    if at_pm_one || mixed_collision {
        Verdict::LinearlyStableNotStrongly
    } else {
        Verdict::StronglyLinearlyStable
    }
}

/// Monodromy, normal form and both Galerkin indices merged into one verdict.
pub fn classify_general(params: &EssentialParams, tol: f64) -> Result<StabilityVerdict> {
    let mono = monodromy(params, INT_TOL)?;
    let index_plus1 = index_pair(params, Omega::Plus1)?;
    let index_minus1 = index_pair(params, Omega::Minus1)?;
    let (verdict, normal_form, unresolved_reason) = match classify_with_spectrum(&mono.m, mono.spectrum, tol) {
        Ok(cls) => (verdict_of(&cls), Some(cls), None),
        Err(e @ (Error::UnresolvedClass(_) | Error::DegenerateKrein(_))) => {
            (Verdict::Unresolved, None, Some(e.to_string()))
        }
        Err(e) => return Err(e),
    };
    Ok(StabilityVerdict { verdict, normal_form, unresolved_reason, index_plus1, index_minus1, monodromy: mono })
}

/// [`classify_general`] at the default classification threshold.
pub fn classify_params(params: &EssentialParams) -> Result<StabilityVerdict> {
    classify_general(params, RANK_TOL)
}
