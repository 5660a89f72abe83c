//! Parameter sweeps producing stability atlases, and the two-equal-mass family `m₁ = m₂ = m`.

use crate::common::{bisect, Bracket, Error, Result};
use crate::galerkin::IndexPair;
use crate::model::{alpha_beta_from_geometry, make_params, EssentialParams, LimitGeometry, MassConfig};
use crate::regions::{classify_e0, classify_general, RegionLabel, Verdict};
use crate::sympl::RANK_TOL;
use nalgebra::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

const S3_2: f64 = 0.866_025_403_784_438_6;
/// Distance kept from the pole `y = √3/2` and from the open ends of each interval.
pub const POLE_GUARD: f64 = 1e-6;
pub const ROOT_STEP: f64 = 1e-3;
pub const ROOT_XTOL: f64 = 1e-8;
pub const THREADS_ENV: &str = "ERE_STAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Interval {
    Y1,
    Y2,
    Y3,
}

impl Interval {
    /// Open interval `(lo, hi)`.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Interval::Y1 => (-S3_2, S3_2 - 1.0),
            Interval::Y2 => (0.0, S3_2),
            Interval::Y3 => (S3_2, S3_2 + 1.0),
        }
    }

    pub fn containing(y: f64) -> Option<Interval> {
        [Interval::Y1, Interval::Y2, Interval::Y3].into_iter().find(|iv| {
            let (lo, hi) = iv.bounds();
            y > lo && y < hi
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualMassPoint {
    pub y: f64,
    pub interval: Interval,
    pub m: f64,
    pub m3: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Residual of the collinear-axis central-configuration equation.
    pub residual: f64,
}

/// `m` and `m₃ = 1 − 2m` for the massless body at `½ + iy`. `m₃` is evaluated in a form free of
/// the cancellation at `y → √3/2`.
pub fn equal_masses(y: f64) -> (f64, f64) {
    let d = S3_2 - y;
    let r2 = y * y + 0.25;
    let r = r2.sqrt();
    let r3 = r2 * r;
    let den = 3f64.sqrt() - 2.0 * d / d.abs().powi(3) - 2.0 * y / r3;
    let m = (d - d / d.abs().powi(3)) / den;
    // 1 − r⁻³ with r² − 1 = −d(y + √3/2)
    let one_minus = -d * (y + S3_2) * (r2 + r + 1.0) / ((r + 1.0) * r3);
    let m3 = 2.0 * y * one_minus / den;
    (m, m3)
}

fn cc_residual(y: f64, m: f64, m3: f64) -> f64 {
    let d = S3_2 - y;
    let r3 = (y * y + 0.25).powf(1.5);
    -2.0 * m * y / r3 + m3 * d / d.abs().powi(3) + y - S3_2 * m3
}

fn alpha_beta_axis(y: f64, m: f64, m3: f64) -> (f64, f64) {
    let r2 = y * y + 0.25;
    let d3 = (y - S3_2).abs().powi(3);
    let alpha = 0.5 * (2.0 * m / r2.powf(1.5) + m3 / d3);
    let beta = 0.5 * (m * (0.5 - 2.0 * y * y) / r2.powf(2.5) - m3 / d3).abs();
    (alpha, beta)
}

pub fn equal_mass_point(y: f64) -> Result<EqualMassPoint> {
    let interval = Interval::containing(y).ok_or_else(|| Error::Domain(format!("y = {y} outside Y1, Y2, Y3")))?;
    if (y - S3_2).abs() < POLE_GUARD {
        return Err(Error::Domain(format!("y = {y} within {POLE_GUARD:e} of the pole")));
    }
    let (m, m3) = equal_masses(y);
    if !(m > 0.0 && m3 > 0.0) {
        return Err(Error::MassRange(m));
    }
    let (alpha, beta) = alpha_beta_axis(y, m, m3);
    let residual = cc_residual(y, m, m3);
    Ok(EqualMassPoint { y, interval, m, m3, alpha, beta, residual })
}

/// `(α, β)` of the same configuration through the general geometric formula.
pub fn equal_mass_geometry(p: &EqualMassPoint) -> Result<(f64, f64)> {
    let g = LimitGeometry::lagrangian(Complex::new(0.5, p.y))?;
    let masses = MassConfig::from_three(p.m, p.m, p.m3)?;
    alpha_beta_from_geometry(&g, &masses)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Indicator {
    /// `α − 3β + 1`
    Gamma0,
    /// `α − 3β`
    Hyperbolic,
    /// `α − 1`
    AlphaOne,
    /// `α − 9β²/4`
    Discriminant,
}

impl Indicator {
    pub const ALL: [Indicator; 4] =
        [Indicator::Gamma0, Indicator::Hyperbolic, Indicator::AlphaOne, Indicator::Discriminant];

    pub fn eval(&self, alpha: f64, beta: f64) -> f64 {
        match self {
            Indicator::Gamma0 => alpha - 3.0 * beta + 1.0,
            Indicator::Hyperbolic => alpha - 3.0 * beta,
            Indicator::AlphaOne => alpha - 1.0,
            Indicator::Discriminant => alpha - 2.25 * beta * beta,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Indicator::Gamma0 => "alpha-3beta+1",
            Indicator::Hyperbolic => "alpha-3beta",
            Indicator::AlphaOne => "alpha-1",
            Indicator::Discriminant => "alpha-9beta^2/4",
        }
    }

    /// Sign changes expected on Y₁ and Y₂.
    pub fn expected(&self, iv: Interval) -> usize {
        match (self, iv) {
            (Indicator::Gamma0, Interval::Y2) => 2,
            (Indicator::Hyperbolic, Interval::Y1 | Interval::Y2) => 2,
            (Indicator::Discriminant, Interval::Y1) => 1,
            (Indicator::Discriminant, Interval::Y2) => 2,
            _ => 0,
        }
    }
}

fn indicator_at(ind: Indicator, y: f64) -> f64 {
    let (m, m3) = equal_masses(y);
    let (a, b) = alpha_beta_axis(y, m, m3);
    ind.eval(a, b)
}

/// Sign changes of one indicator on an interval by stepping `step` and bisecting to `ROOT_XTOL`.
pub fn indicator_roots(ind: Indicator, iv: Interval, step: f64) -> Result<Vec<f64>> {
    let (lo, hi) = iv.bounds();
    let (lo, hi) = (lo + POLE_GUARD, hi - POLE_GUARD);
    let n = ((hi - lo) / step).ceil() as usize;
    let ys: Vec<f64> = (0..=n).map(|i| (lo + i as f64 * step).min(hi)).collect();
    let f = |y: f64| indicator_at(ind, y);
    let mut roots = Vec::new();
    for w in ys.windows(2) {
        let b = Bracket::new(f, w[0], w[1]);
        if !b.is_degenerate() {
            roots.push(bisect(f, b, ROOT_XTOL)?);
        }
    }
    Ok(roots)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledRoot {
    pub label: String,
    pub indicator: Indicator,
    pub y: f64,
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootTable {
    pub roots: Vec<LabeledRoot>,
    /// `m` at the `Y₁` discriminant root.
    pub m0: f64,
    pub step: f64,
}

impl RootTable {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.roots.iter().find(|r| r.label == label).map(|r| r.y)
    }
}

/// Roots of the four indicators on `Y₁` and `Y₂` with the given bracketing step.
pub fn equal_mass_roots_with_step(step: f64) -> Result<RootTable> {
    let labels: [(Indicator, Interval, &[&'static str]); 5] = [
        (Indicator::Hyperbolic, Interval::Y1, &["y11", "y12"]),
        (Indicator::Discriminant, Interval::Y1, &["y0"]),
        (Indicator::Gamma0, Interval::Y2, &["y21", "y24"]),
        (Indicator::Hyperbolic, Interval::Y2, &["y22", "y23"]),
        (Indicator::Discriminant, Interval::Y2, &["ybar21", "ybar22"]),
    ];
    for ind in Indicator::ALL {
        for iv in [Interval::Y1, Interval::Y2] {
            let found = indicator_roots(ind, iv, step)?.len();
            if found != ind.expected(iv) {
                return Err(Error::RootCount {
                    function: ind.name().into(),
                    interval: format!("{iv:?}"),
                    found,
                    expected: ind.expected(iv),
                });
            }
        }
    }
    let mut roots = Vec::new();
    for (ind, iv, names) in labels {
        for (y, label) in indicator_roots(ind, iv, step)?.into_iter().zip(names.iter()) {
            roots.push(LabeledRoot { label: label.to_string(), indicator: ind, y, m: equal_masses(y).0 });
        }
    }
    let m0 = roots.iter().find(|r| r.label == "y0").map(|r| r.m).unwrap_or(f64::NAN);
    Ok(RootTable { roots, m0, step })
}

pub fn equal_mass_roots() -> Result<RootTable> {
    equal_mass_roots_with_step(ROOT_STEP)
}

/// Verdict families expected on the sub-intervals between roots. `e0_only` families hold at
/// `e = 0` only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictFamily {
    pub name: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub e0_only: bool,
    pub allowed: Vec<Verdict>,
}

pub fn verdict_families(t: &RootTable) -> Vec<VerdictFamily> {
    let r = |l: &str| t.get(l).unwrap_or(f64::NAN);
    let hyp = vec![Verdict::HyperbolicUnstable];
    let eh = vec![Verdict::EllipticHyperbolicUnstable];
    let elliptic = vec![
        Verdict::StronglyLinearlyStable,
        Verdict::LinearlyStableNotStrongly,
        Verdict::SpectrallyStableLinearlyUnstable,
    ];
    let (y1lo, y1hi) = Interval::Y1.bounds();
    let (y3lo, y3hi) = Interval::Y3.bounds();
    vec![
        VerdictFamily { name: "Y1 [y11, y12]", lo: r("y11"), hi: r("y12"), e0_only: false, allowed: hyp.clone() },
        VerdictFamily { name: "Y1 (-sqrt3/2, y11)", lo: y1lo, hi: r("y11"), e0_only: true, allowed: hyp.clone() },
        VerdictFamily { name: "Y1 (y12, y0)", lo: r("y12"), hi: r("y0"), e0_only: true, allowed: hyp.clone() },
        VerdictFamily { name: "Y1 (y0, sqrt3/2-1)", lo: r("y0"), hi: y1hi, e0_only: true, allowed: elliptic },
        VerdictFamily { name: "Y2 (0, y21)", lo: 0.0, hi: r("y21"), e0_only: false, allowed: eh.clone() },
        VerdictFamily { name: "Y2 (y22, y23)", lo: r("y22"), hi: r("y23"), e0_only: false, allowed: hyp.clone() },
        VerdictFamily { name: "Y2 (y21, y24)", lo: r("y21"), hi: r("y24"), e0_only: true, allowed: hyp },
        VerdictFamily { name: "Y2 (y24, sqrt3/2)", lo: r("y24"), hi: S3_2, e0_only: false, allowed: eh.clone() },
        VerdictFamily { name: "Y3", lo: y3lo, hi: y3hi, e0_only: false, allowed: eh },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub family: String,
    pub y: f64,
    pub e: f64,
    pub verdict: Option<Verdict>,
    pub error: Option<String>,
    pub ok: bool,
}

/// Verdicts at `samples` interior points of every family, for each `e`.
pub fn check_verdict_families(t: &RootTable, es: &[f64], samples: usize) -> Vec<FamilyCheck> {
    let mut jobs = Vec::new();
    for fam in verdict_families(t) {
        for &e in es {
            if fam.e0_only && e != 0.0 {
                continue;
            }
            for k in 0..samples {
                let s = (k as f64 + 0.5) / samples as f64;
                let y = fam.lo + (fam.hi - fam.lo) * (0.02 + 0.96 * s);
                jobs.push((fam.clone(), y, e));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(fam, y, e)| {
            let res = equal_mass_point(y)
                .and_then(|p| make_params(p.alpha, p.beta, e))
                .and_then(|p| classify_general(&p, RANK_TOL));
            match res {
                Ok(v) => FamilyCheck {
                    family: fam.name.to_string(),
                    y,
                    e,
                    verdict: Some(v.verdict),
                    error: None,
                    ok: fam.allowed.contains(&v.verdict),
                },
                Err(err) => FamilyCheck {
                    family: fam.name.to_string(),
                    y,
                    e,
                    verdict: None,
                    error: Some(err.to_string()),
                    ok: false,
                },
            }
        })
        .collect()
}

fn verdict_at_y(y: f64, e: f64) -> Option<Verdict> {
    let p = equal_mass_point(y).ok()?;
    let params = make_params(p.alpha, p.beta, e).ok()?;
    classify_general(&params, RANK_TOL).ok().map(|v| v.verdict)
}

/// First `y` above `y₁,₂` in `Y₁` where the verdict stops being hyperbolic at eccentricity `e`,
/// by a coarse scan and bisection. `None` when the whole range stays hyperbolic.
pub fn first_verdict_change(t: &RootTable, e: f64, step: f64, xtol: f64) -> Option<f64> {
    let lo = t.get("y12")?;
    let hi = Interval::Y1.bounds().1 - POLE_GUARD;
    let hyp = |y: f64| verdict_at_y(y, e) == Some(Verdict::HyperbolicUnstable);
    let mut a = lo + 1e-6;
    while a + step < hi {
        let b = a + step;
        if !hyp(b) {
            let (mut l, mut h) = (a, b);
            while h - l > xtol {
                let mid = 0.5 * (l + h);
                if hyp(mid) {
                    l = mid;
                } else {
                    h = mid;
                }
            }
            return Some(0.5 * (l + h));
        }
        a = b;
    }
    None
}

/// Verdict-change location in `Y₁` as a function of `e`: the data behind the `e*` estimate.
pub fn e_star_profile(t: &RootTable, es: &[f64]) -> Vec<(f64, Option<f64>)> {
    es.par_iter().map(|&e| (e, first_verdict_change(t, e, 5e-3, 1e-6))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Coordinates {
    Plain,
    Tilde,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub coordinates: Coordinates,
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub es: Vec<f64>,
}

impl GridSpec {
    fn axis(r: (f64, f64), n: usize) -> Vec<f64> {
        if n <= 1 {
            return vec![r.0];
        }
        (0..n).map(|i| r.0 + (r.1 - r.0) * i as f64 / (n - 1) as f64).collect()
    }

    /// `(α, β, e)` for every cell, `e` outermost, then `y`, then `x`.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let xs = Self::axis(self.x, self.nx);
        let ys = Self::axis(self.y, self.ny);
        let mut out = Vec::with_capacity(xs.len() * ys.len() * self.es.len());
        for &e in &self.es {
            for &y in &ys {
                for &x in &xs {
                    let (a, b) = match self.coordinates {
                        Coordinates::Plain => (x, y),
                        Coordinates::Tilde => crate::model::from_tilde(x, y),
                    };
                    out.push((a, b, e));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasCell {
    pub index: usize,
    pub alpha: f64,
    pub beta: f64,
    pub e: f64,
    pub params: Option<EssentialParams>,
    pub region_e0: Option<RegionLabel>,
    pub verdict: Option<Verdict>,
    pub normal_form: Option<String>,
    pub index_plus1: Option<IndexPair>,
    pub index_minus1: Option<IndexPair>,
    pub thetas: Vec<f64>,
    pub symplectic_residual: Option<f64>,
    pub error: Option<String>,
    #[serde(skip)]
    pub runtime: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atlas {
    pub grid: GridSpec,
    pub cells: Vec<AtlasCell>,
    pub summary: BTreeMap<String, usize>,
}

pub fn cell(index: usize, alpha: f64, beta: f64, e: f64) -> AtlasCell {
    let start = Instant::now();
    let mut c = AtlasCell {
        index,
        alpha,
        beta,
        e,
        params: None,
        region_e0: None,
        verdict: None,
        normal_form: None,
        index_plus1: None,
        index_minus1: None,
        thetas: vec![],
        symplectic_residual: None,
        error: None,
        runtime: Duration::ZERO,
    };
    match make_params(alpha, beta, e) {
        Err(err) => c.error = Some(err.to_string()),
        Ok(p) => {
            c.params = Some(p);
            if e == 0.0 && beta > 0.0 {
                c.region_e0 = Some(classify_e0(alpha, beta));
            }
            match classify_general(&p, RANK_TOL) {
                Ok(v) => {
                    c.verdict = Some(v.verdict);
                    c.normal_form = Some(v.label());
                    c.index_plus1 = Some(v.index_plus1);
                    c.index_minus1 = Some(v.index_minus1);
                    c.thetas = v.normal_form.map(|n| n.rotation_angles()).unwrap_or_default();
                    c.symplectic_residual = Some(v.monodromy.symplectic_residual);
                    c.error = v.unresolved_reason;
                }
                Err(err) => c.error = Some(err.to_string()),
            }
        }
    }
    c.runtime = start.elapsed();
    c
}

/// Worker count after the `ERE_STAB_THREADS` cap.
pub fn effective_workers(requested: usize) -> usize {
    let cap = std::env::var(THREADS_ENV).ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0);
    let n = requested.max(1);
    cap.map_or(n, |c| n.min(c))
}

pub fn sweep(grid: &GridSpec, workers: usize) -> Result<Atlas> {
    let pts = grid.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(effective_workers(workers))
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    let cells: Vec<AtlasCell> =
        pool.install(|| pts.par_iter().enumerate().map(|(i, &(a, b, e))| cell(i, a, b, e)).collect());
    let mut summary = BTreeMap::new();
    for c in &cells {
        let key = match (&c.verdict, &c.error) {
            (Some(v), _) => v.as_str().to_string(),
            (None, _) => "error".to_string(),
        };
        *summary.entry(key).or_insert(0) += 1;
    }
    Ok(Atlas { grid: grid.clone(), cells, summary })
}

pub const CSV_SCHEMA: &str =
    "#schema=ere-stab-atlas/1 alpha,beta,e,verdict,i1,nu1,im1,num1,theta1,theta2,symp_residual";

pub fn atlas_csv(atlas: &Atlas) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["alpha", "beta", "e", "verdict", "i1", "nu1", "im1", "num1", "theta1", "theta2", "symp_residual"])
        .expect("in-memory write");
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    for c in &atlas.cells {
        let verdict = c.verdict.map(|v| v.as_str().to_string()).unwrap_or_else(|| "error".into());
        w.write_record([
            c.alpha.to_string(),
            c.beta.to_string(),
            c.e.to_string(),
            verdict,
            opt(c.index_plus1.map(|i| i.index)),
            opt(c.index_plus1.map(|i| i.nullity)),
            opt(c.index_minus1.map(|i| i.index)),
            opt(c.index_minus1.map(|i| i.nullity)),
            c.thetas.first().map(|t| t.to_string()).unwrap_or_default(),
            c.thetas.get(1).map(|t| t.to_string()).unwrap_or_default(),
            c.symplectic_residual.map(|r| format!("{r:e}")).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf8");
    format!("{CSV_SCHEMA}\n{body}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::Major;

    #[test]
    fn y0_and_m0() {
        let t = equal_mass_roots().unwrap();
        assert!((t.get("y0").unwrap() + 0.1355).abs() < 5e-4);
        assert!((t.m0 - 0.00270963).abs() < 1e-6);
    }

    #[test]
    fn residual_and_geometry_agree() {
        for y in [-0.7, -0.3, 0.1, 0.3, 0.6, 0.9, 1.5] {
            let p = equal_mass_point(y).unwrap();
            assert!(p.residual.abs() < 1e-12, "y {y}: {}", p.residual);
            let (a, b) = equal_mass_geometry(&p).unwrap();
            assert!((a - p.alpha).abs() < 1e-12 && (b - p.beta).abs() < 1e-12, "y {y}");
        }
    }

    #[test]
    fn small_mass_limit() {
        let p = equal_mass_point(S3_2 - 1.0 - 1e-6).unwrap();
        assert!(p.m < 1e-4);
        assert!((p.alpha - 0.5).abs() < 1e-3 && (p.beta - 0.5).abs() < 1e-3);
    }

    #[test]
    fn m3_stable_near_pole() {
        for d in [1e-3, 1e-4, 1e-5, 2e-6] {
            let (m, m3) = equal_masses(S3_2 - d);
            assert!(m3 > 0.0 && (m + m + m3 - 1.0).abs() < 1e-14, "d {d}");
            let p = equal_mass_point(S3_2 - d).unwrap();
            assert!((p.alpha - 1.625).abs() < 1e-2, "d {d}: {}", p.alpha);
        }
    }

    #[test]
    fn outside_intervals() {
        assert!(matches!(equal_mass_point(-0.1), Err(Error::Domain(_))));
        assert!(matches!(equal_mass_point(2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn root_table_stable_under_step_halving() {
        let a = equal_mass_roots_with_step(ROOT_STEP).unwrap();
        let b = equal_mass_roots_with_step(ROOT_STEP / 2.0).unwrap();
        assert_eq!(a.roots.len(), b.roots.len());
        for (x, y) in a.roots.iter().zip(&b.roots) {
            assert_eq!(x.label, y.label);
            assert!((x.y - y.y).abs() <= 1e-8);
        }
    }

    #[test]
    fn grid_e0_regions() {
        let g =
            GridSpec { coordinates: Coordinates::Plain, x: (0.1, 3.0), y: (0.1, 3.0), nx: 12, ny: 12, es: vec![0.0] };
        let pts = g.points();
        assert_eq!(pts.len(), 144);
        let atlas = Atlas {
            grid: g.clone(),
            cells: pts.iter().enumerate().take(20).map(|(i, &(a, b, e))| cell(i, a, b, e)).collect(),
            summary: BTreeMap::new(),
        };
        for c in &atlas.cells {
            if c.alpha >= c.beta {
                assert_eq!(c.region_e0.as_ref().map(|r| r.major), Some(classify_e0(c.alpha, c.beta).major));
            } else {
                assert!(c.error.is_some());
            }
        }
        assert!(atlas_csv(&atlas).starts_with("#schema="));
        let p1 = cell(0, 4.0 / 9.0, 4.0 / 9.0, 0.0);
        assert_eq!(p1.region_e0.unwrap().major, Major::Boundary);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let g = GridSpec {
            coordinates: Coordinates::Tilde,
            x: (0.1, 0.5),
            y: (-0.5, 0.5),
            nx: 3,
            ny: 3,
            es: vec![0.0, 0.4],
        };
        let a = serde_json::to_string(&sweep(&g, 1).unwrap()).unwrap();
        let b = serde_json::to_string(&sweep(&g, 8).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
