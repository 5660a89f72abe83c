//! Acceptance checks, one function per criterion. Used by the `acceptance` test target and by
//! `ere-stab self-test`.

use crate::curves::{
    closed_form_beta, degenerate_beta, degenerate_samples, mode, slope_at_e0, trace_columns, Branch, TRACE_STEP,
};
use crate::essential::{closed_form_multipliers_e0, iterate_factors, monodromy, DEFAULT_TOL};
use crate::galerkin::{
    assemble, index_and_nullity, index_pair, zero_parameter_kernel, Omega, DEFAULT_N, DEFAULT_TOL as GAL_TOL,
};
use crate::model::{make_params, EssentialParams};
use crate::regions::{alpha_theta, classify_e0, index_table_e0};
use crate::scan::{check_verdict_families, equal_mass_roots};
use crate::sympl::{factored_nullity, nullity, RANK_TOL};
use nalgebra::{Complex, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::{Duration, Instant};

type C64 = Complex<f64>;

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:>2} {:<28} {:>7.1}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(failures: &[String], ok_detail: String) -> Outcome {
    if failures.is_empty() {
        Outcome { passed: true, detail: ok_detail }
    } else {
        let shown: Vec<&str> = failures.iter().take(4).map(|s| s.as_str()).collect();
        Outcome { passed: false, detail: format!("{} failures; {}", failures.len(), shown.join("; ")) }
    }
}

pub const CRITERIA: [(u32, &str); 11] = [
    (1, "symplecticity"),
    (2, "e=0 spectrum"),
    (3, "index tables"),
    (4, "nullity vs monodromy"),
    (5, "degenerate curves e=0"),
    (6, "bifurcation slopes"),
    (7, "hyperbolicity"),
    (8, "kernel at alpha=beta=0"),
    (9, "equal-mass roots"),
    (10, "structural invariants"),
    (11, "monotonicity"),
];

pub fn run(id: u32) -> CriterionReport {
    let name = CRITERIA.iter().find(|c| c.0 == id).map(|c| c.1).unwrap_or("unknown");
    let start = Instant::now();
    let o = match id {
        1 => symplecticity(),
        2 => spectrum_e0(),
        3 => index_tables(),
        4 => nullity_agreement(),
        5 => curves_e0(),
        6 => slopes(),
        7 => hyperbolicity(),
        8 => zero_kernel(),
        9 => equal_mass(),
        10 => structural(),
        11 => monotonicity(),
        _ => Outcome { passed: false, detail: format!("no criterion {id}") },
    };
    CriterionReport { id, name, passed: o.passed, detail: o.detail, elapsed: start.elapsed() }
}

pub fn run_all() -> Vec<CriterionReport> {
    CRITERIA.iter().map(|c| run(c.0)).collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn symplecticity() -> Outcome {
    let mut pts = Vec::new();
    for &alpha in &linspace(0.1, 6.0, 20) {
        for &f in &linspace(0.02, 1.0, 20) {
            for e in [0.0, 0.3, 0.6, 0.9] {
                pts.push((alpha, alpha * f, e));
            }
        }
    }
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(8).build().expect("pool");
    let res: Vec<(f64, f64, f64, Result<f64, String>)> = pool.install(|| {
        pts.par_iter()
            .map(|&(a, b, e)| {
                let r = make_params(a, b, e)
                    .and_then(|p| monodromy(&p, DEFAULT_TOL))
                    .map(|m| m.symplectic_residual)
                    .map_err(|x| x.to_string());
                (a, b, e, r)
            })
            .collect()
    });
    let elapsed = start.elapsed().as_secs_f64();
    let mut failures = Vec::new();
    let mut worst = 0f64;
    for (a, b, e, r) in &res {
        match r {
            Ok(x) if *x < 1e-9 => worst = worst.max(*x),
            Ok(x) => failures.push(format!("({a:.3},{b:.3},{e}) residual {x:e}")),
            Err(s) => failures.push(format!("({a:.3},{b:.3},{e}) {s}")),
        }
    }
    if elapsed >= 60.0 {
        failures.push(format!("runtime {elapsed:.1}s"));
    }
    outcome(&failures, format!("{} points, max residual {worst:.1e}, {elapsed:.1}s", res.len()))
}

fn multiset_distance(a: &[C64; 4], b: &[C64; 4]) -> f64 {
    let mut best = f64::INFINITY;
    let mut perm = [0usize, 1, 2, 3];
    permute(&mut perm, 0, &mut |p| {
        let d = (0..4).map(|i| (a[i] - b[p[i]]).norm() / b[p[i]].norm().max(1.0)).fold(0.0, f64::max);
        best = best.min(d);
    });
    best
}

fn permute(p: &mut [usize; 4], k: usize, f: &mut dyn FnMut(&[usize; 4])) {
    if k == 4 {
        f(p);
        return;
    }
    for i in k..4 {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Representative `e = 0` points: five per open region, plus the unipotent points.
pub fn spectrum_points() -> Vec<(f64, f64)> {
    vec![
        (2.0, 0.5),
        (3.0, 0.8),
        (1.5, 0.3),
        (5.0, 1.0),
        (0.9, 0.4),
        (0.52, 0.5),
        (0.6, 0.52),
        (0.8, 0.598),
        (0.5, 0.48),
        (0.558, 0.5),
        (4.0, 2.0),
        (2.0, 1.2),
        (1.0, 0.8),
        (3.0, 1.5),
        (8.0, 3.5),
        (7.0, 2.0),
        (1.2, 0.7),
        (3.0, 1.2),
        (5.0, 1.9),
        (10.0, 3.5),
        (2.0, 2.0),
        (6.0, 3.0),
        (1.1, 0.68),
        (0.5, 0.5),
        (0.75, 3f64.sqrt() / 3.0),
    ]
}

fn spectrum_e0() -> Outcome {
    let pts = spectrum_points();
    let res: Vec<_> = pts
        .par_iter()
        .map(|&(a, b)| {
            let m = make_params(a, b, 0.0).and_then(|p| monodromy(&p, DEFAULT_TOL));
            (a, b, m.map(|m| multiset_distance(&m.spectrum, &closed_form_multipliers_e0(a, b))))
        })
        .collect();
    let mut failures = Vec::new();
    let mut worst = 0f64;
    let mut majors = std::collections::BTreeSet::new();
    for (a, b, r) in res {
        majors.insert(format!("{:?}", classify_e0(a, b).major));
        match r {
            Ok(d) if d < 1e-8 => worst = worst.max(d),
            Ok(d) => failures.push(format!("({a},{b}) distance {d:e}")),
            Err(e) => failures.push(format!("({a},{b}) {e}")),
        }
    }
    for m in ["R1", "R2", "R3", "R4"] {
        if !majors.contains(m) {
            failures.push(format!("no sample in {m}"));
        }
    }
    outcome(&failures, format!("{} points, max relative distance {worst:.1e}", pts.len()))
}

/// One point per sub-region for `n ≤ 3`.
pub fn sub_region_points() -> Vec<(&'static str, f64, f64)> {
    let mut v = vec![
        ("R1", 2.0, 0.5),
        ("R2,1/2+", 0.52, 0.5),
        ("R2,1/2*", alpha_theta(0.5, 0.5), 0.5),
        ("R2,1/2-", 0.558, 0.5),
        ("R4", 7.0, 2.0),
    ];
    let names = [
        "R3,0+", "R3,1/2*", "R3,1-", "R3,1*", "R3,1+", "R3,3/2*", "R3,2-", "R3,2*", "R3,2+", "R3,5/2*", "R3,3-",
        "R3,3*", "R3,3+",
    ];
    for (i, name) in names.iter().enumerate() {
        let theta = 0.25 * (i + 1) as f64;
        v.push((name, alpha_theta(theta, 10.0), 10.0));
    }
    v
}

fn index_tables() -> Outcome {
    let pts = sub_region_points();
    let res: Vec<_> = pts
        .par_iter()
        .map(|&(name, a, b)| {
            let p = EssentialParams::unchecked(a, b, 0.0);
            let mut errs = Vec::new();
            let label = classify_e0(a, b);
            let tag = label.minor.map(|m| m.to_string()).unwrap_or_else(|| format!("{:?}", label.major));
            if tag != name {
                errs.push(format!("{name}: labeled {tag}"));
            }
            for om in [Omega::Plus1, Omega::Minus1] {
                let t = index_table_e0(a, b, om);
                match index_and_nullity(&assemble(&p, om, DEFAULT_N), GAL_TOL) {
                    Ok(g) if (g.index, g.nullity) == (t.index, t.nullity) && g.converged => {}
                    Ok(g) => errs.push(format!(
                        "{name} {om:?}: galerkin ({},{}) converged={} table ({},{})",
                        g.index, g.nullity, g.converged, t.index, t.nullity
                    )),
                    Err(e) => errs.push(format!("{name} {om:?}: {e}")),
                }
            }
            errs
        })
        .collect();
    let failures: Vec<String> = res.into_iter().flatten().collect();
    outcome(&failures, format!("{} sub-regions, both omega", pts.len()))
}

/// Points with `e > 0`: generic ones and ones placed on degenerate surfaces.
fn degenerate_points(e: f64) -> Vec<(f64, f64, f64)> {
    let mut v = vec![(0.5, 0.5, e), (2.0, 1.0, e), (4.0, 5.0 / 3.0, e), (3.0, 0.9, e), (2.5, 1.3, e)];
    let curves = [
        (2.0, Omega::Minus1, 0u32, Branch::Lower),
        (2.0, Omega::Minus1, 0, Branch::Upper),
        (4.0, Omega::Plus1, 1, Branch::Lower),
    ];
    for (a, om, n, br) in curves {
        if let Ok(s) = degenerate_beta(a, om, e, n, br, 1e-10) {
            v.push((a, s.beta, e));
        }
    }
    v.truncate(8);
    v
}

fn nullity_agreement() -> Outcome {
    let mut pts: Vec<(f64, f64, f64)> = [0.2, 0.5, 0.8].iter().flat_map(|&e| degenerate_points(e)).collect();
    pts.push((2.0, 0.6, 0.5));
    let res: Vec<_> = pts
        .par_iter()
        .map(|&(a, b, e)| {
            let p = EssentialParams::unchecked(a, b, e);
            let mut errs = Vec::new();
            let m = match monodromy(&p, DEFAULT_TOL) {
                Ok(m) => m,
                Err(x) => return (vec![format!("({a},{b:.6},{e}) {x}")], 0),
            };
            let mut degenerate = 0;
            for om in [Omega::Plus1, Omega::Minus1] {
                let km = nullity(&m.m, C64::new(om.sign(), 0.0), RANK_TOL);
                match index_pair(&p, om) {
                    Ok(g) if g.nullity == km => degenerate += (km > 0) as usize,
                    Ok(g) => errs.push(format!("({a},{b:.6},{e}) {om:?}: galerkin {} monodromy {km}", g.nullity)),
                    Err(x) => errs.push(format!("({a},{b:.6},{e}) {om:?}: {x}")),
                }
            }
            (errs, degenerate)
        })
        .collect();
    let degenerate: usize = res.iter().map(|r| r.1).sum();
    let mut failures: Vec<String> = res.into_iter().flat_map(|r| r.0).collect();
    if pts.len() != 25 {
        failures.push(format!("{} points instead of 25", pts.len()));
    }
    outcome(&failures, format!("{} points, {degenerate} degenerate (point, omega) pairs", pts.len()))
}

fn curves_e0() -> Outcome {
    let mut jobs = Vec::new();
    for alpha in [1.0, 2.0, 4.0, 8.0] {
        for om in [Omega::Plus1, Omega::Minus1] {
            for n in 0..=4 {
                jobs.push((alpha, om, n));
            }
        }
    }
    let res: Vec<_> = jobs
        .par_iter()
        .map(|&(a, om, n)| {
            let exact = closed_form_beta(a, om, n);
            match degenerate_samples(a, om, 0.0, n, 1e-10) {
                Ok(s) => {
                    let d = s.iter().map(|x| (x.beta - exact).abs()).fold(0.0, f64::max);
                    let on = (alpha_theta(mode(om, n), s[0].beta) - a).abs();
                    if d < 1e-6 && on < 1e-6 && s.len() == 1 {
                        Ok(d)
                    } else {
                        Err(format!("alpha={a} {om:?} n={n}: |dbeta|={d:e}, branches {}", s.len()))
                    }
                }
                Err(e) => Err(format!("alpha={a} {om:?} n={n}: {e}")),
            }
        })
        .collect();
    let worst = res.iter().filter_map(|r| r.as_ref().ok()).fold(0.0f64, |a, b| a.max(*b));
    let failures: Vec<String> = res.into_iter().filter_map(|r| r.err()).collect();
    outcome(&failures, format!("{} curves, max |dbeta| {worst:.1e}", jobs.len()))
}

fn slopes() -> Outcome {
    let mut jobs: Vec<(f64, Omega, u32, Branch, f64)> = Vec::new();
    for n in 0..=3 {
        jobs.push((4.0, Omega::Plus1, n, Branch::Lower, 0.0));
    }
    for n in 1..=3 {
        for br in [Branch::Lower, Branch::Upper] {
            jobs.push((4.0, Omega::Minus1, n, br, 0.0));
        }
    }
    jobs.push((2.0, Omega::Minus1, 0, Branch::Lower, -1.0 / 24.0));
    jobs.push((2.0, Omega::Minus1, 0, Branch::Upper, 1.0 / 24.0));
    let res: Vec<_> = jobs
        .par_iter()
        .map(|&(a, om, n, br, want)| match slope_at_e0(a, om, n, br, 1e-3) {
            Ok(s) if (s - want).abs() < 1e-3 => Ok((s - want).abs()),
            Ok(s) => Err(format!("alpha={a} {om:?} n={n} {br:?}: slope {s:.6}, expected {want:.6}")),
            Err(e) => Err(format!("alpha={a} {om:?} n={n} {br:?}: {e}")),
        })
        .collect();
    let worst = res.iter().filter_map(|r| r.as_ref().ok()).fold(0.0f64, |a, b| a.max(*b));
    let failures: Vec<String> = res.into_iter().filter_map(|r| r.err()).collect();
    outcome(&failures, format!("{} slopes, max error {worst:.1e}", jobs.len()))
}

fn hyperbolicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pts = Vec::new();
    for _ in 0..50 {
        let beta: f64 = rng.gen_range(0.05..3.0);
        let alpha = 3.0 * beta * rng.gen_range(1.0..3.0);
        for e in [0.0, 0.3, 0.6, 0.9] {
            pts.push((alpha, beta, e));
        }
    }
    let res: Vec<_> = pts
        .par_iter()
        .map(|&(a, b, e)| {
            let p = make_params(a, b, e).expect("valid");
            let mut errs = Vec::new();
            let mut gap = f64::INFINITY;
            match monodromy(&p, DEFAULT_TOL) {
                Ok(m) => {
                    gap = m.spectrum.iter().map(|z| (z.norm() - 1.0).abs()).fold(f64::INFINITY, f64::min);
                    if gap <= 1e-4 {
                        errs.push(format!("({a:.3},{b:.3},{e}) ||z|-1| = {gap:e}"));
                    }
                }
                Err(x) => errs.push(format!("({a:.3},{b:.3},{e}) {x}")),
            }
            for om in [Omega::Plus1, Omega::Minus1] {
                match index_pair(&p, om) {
                    Ok(g) if g.index == 0 && g.nullity == 0 => {}
                    Ok(g) => errs.push(format!("({a:.3},{b:.3},{e}) {om:?}: ({},{})", g.index, g.nullity)),
                    Err(x) => errs.push(format!("({a:.3},{b:.3},{e}) {om:?}: {x}")),
                }
            }
            (errs, gap)
        })
        .collect();
    let gap = res.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let failures: Vec<String> = res.into_iter().flat_map(|r| r.0).collect();
    outcome(&failures, format!("{} points, min ||z|-1| = {gap:.2e}", pts.len()))
}

fn zero_kernel() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0f64;
    for e in [0.0, 0.3, 0.6, 0.9] {
        let p = assemble(&EssentialParams::unchecked(0.0, 0.0, e), Omega::Plus1, DEFAULT_N);
        for v in zero_parameter_kernel(&p) {
            let r: DVector<f64> = &p.matrix * &v;
            let res = r.norm() / v.norm();
            worst = worst.max(res);
            if res >= 1e-8 {
                failures.push(format!("e={e}: residual {res:e}"));
            }
        }
    }
    outcome(&failures, format!("max residual {worst:.1e}"))
}

pub const REFERENCE_ROOTS: [(&str, f64); 9] = [
    ("y11", -0.6724),
    ("y12", -0.1590),
    ("y0", -0.1355),
    ("y21", 0.1403),
    ("y22", 0.1796),
    ("y23", 0.4224),
    ("y24", 0.4937),
    ("ybar21", 0.1548),
    ("ybar22", 0.4679),
];

fn equal_mass() -> Outcome {
    let t = match equal_mass_roots() {
        Ok(t) => t,
        Err(e) => return Outcome { passed: false, detail: e.to_string() },
    };
    let mut failures = Vec::new();
    let mut worst = 0f64;
    for (label, want) in REFERENCE_ROOTS {
        match t.get(label) {
            Some(y) if (y - want).abs() < 5e-4 => worst = worst.max((y - want).abs()),
            Some(y) => failures.push(format!("{label} = {y:.6}, expected {want}")),
            None => failures.push(format!("{label} missing")),
        }
    }
    if (t.m0 - 0.00270963).abs() >= 1e-6 {
        failures.push(format!("m0 = {:.9}", t.m0));
    }
    let checks = check_verdict_families(&t, &[0.0, 0.3, 0.6, 0.9], 2);
    for c in checks.iter().filter(|c| !c.ok) {
        failures.push(format!(
            "{} y={:.4} e={}: {:?} {}",
            c.family,
            c.y,
            c.e,
            c.verdict,
            c.error.clone().unwrap_or_default()
        ));
    }
    outcome(
        &failures,
        format!("9 roots + m0 = {:.8}, max root error {worst:.1e}, {} verdict checks", t.m0, checks.len()),
    )
}

fn structural() -> Outcome {
    let mut failures = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut odd = 0;
    for _ in 0..20 {
        let beta: f64 = rng.gen_range(0.7..4.0);
        let alpha = rng.gen_range(beta..(3.0 * beta - 1.0));
        let e = rng.gen_range(0.0..0.9);
        match index_pair(&EssentialParams::unchecked(alpha, beta, e), Omega::Plus1) {
            Ok(g) if g.index % 2 == 1 => odd += 1,
            Ok(g) => failures.push(format!("i1 = {} at ({alpha:.3},{beta:.3},{e:.3})", g.index)),
            Err(x) => failures.push(format!("({alpha:.3},{beta:.3},{e:.3}): {x}")),
        }
    }

    let mut gamma_samples = 0;
    for n in [1u32, 2] {
        for col in trace_columns(&[2.0, 4.0], Omega::Plus1, n, 0.2, TRACE_STEP * 5.0, 1e-9) {
            match col {
                Ok(samples) => {
                    for s in samples.iter().filter(|s| s.e > 0.0) {
                        gamma_samples += 1;
                        if s.multiplicity != 2 || s.branch.is_some() {
                            failures.push(format!(
                                "Gamma_{n} at alpha={} e={}: multiplicity {}",
                                s.alpha, s.e, s.multiplicity
                            ));
                        }
                    }
                }
                Err(x) => failures.push(format!("Gamma_{n} trace: {x}")),
            }
        }
    }

    let mut chains = 0;
    let cols: Vec<(f64, f64)> = [2.0, 4.0].iter().flat_map(|&a| [0.0, 0.15, 0.3, 0.5].map(|e| (a, e))).collect();
    let chain_res: Vec<_> = cols.par_iter().map(|&(a, e)| ordering_chain(a, e)).collect();
    for r in chain_res {
        match r {
            Ok(()) => chains += 1,
            Err(x) => failures.push(x),
        }
    }

    let mut bott = 0;
    let mut bott_pts = Vec::new();
    for (a, om, n) in [
        (1.0, Omega::Minus1, 0),
        (2.0, Omega::Minus1, 0),
        (4.0, Omega::Minus1, 0),
        (1.0, Omega::Plus1, 1),
        (4.0, Omega::Plus1, 1),
        (4.0, Omega::Minus1, 1),
    ] {
        for e in [0.2, 0.5] {
            match degenerate_beta(a, om, e, n, Branch::Lower, 1e-10) {
                Ok(s) => bott_pts.push((a, s.beta, e)),
                Err(x) => failures.push(format!("Bott sample alpha={a} {om:?} n={n} e={e}: {x}")),
            }
        }
    }
    for &(a, b, e) in &bott_pts {
        let p = EssentialParams::unchecked(a, b, e);
        match monodromy(&p, DEFAULT_TOL) {
            Ok(m) => {
                let k2 = factored_nullity(&iterate_factors(&m, 2), C64::new(1.0, 0.0), RANK_TOL);
                let k1 = m.nullity(C64::new(1.0, 0.0), RANK_TOL);
                let km = m.nullity(C64::new(-1.0, 0.0), RANK_TOL);
                if k2 == k1 + km {
                    bott += 1;
                } else {
                    failures.push(format!("Bott at ({a},{b:.6},{e}): {k2} != {k1} + {km}"));
                }
            }
            Err(x) => failures.push(x.to_string()),
        }
    }
    outcome(
        &failures,
        format!("{odd}/20 odd i1, {gamma_samples} Gamma samples of multiplicity 2, {chains} ordered columns, {bott} Bott checks"),
    )
}

/// `Σ₀⁻ ≤ Σ₀⁺ < Γ₁ < Σ₁⁻ ≤ Σ₁⁺ < Γ₂` at one `(α, e)`, with 1- and −1-curves separated.
fn ordering_chain(alpha: f64, e: f64) -> Result<(), String> {
    let res = 1e-9;
    let b = |om, n, br| degenerate_beta(alpha, om, e, n, br, res).map(|s| s.beta).map_err(|x| x.to_string());
    let chain = [
        b(Omega::Minus1, 0, Branch::Lower)?,
        b(Omega::Minus1, 0, Branch::Upper)?,
        b(Omega::Plus1, 1, Branch::Lower)?,
        b(Omega::Minus1, 1, Branch::Lower)?,
        b(Omega::Minus1, 1, Branch::Upper)?,
        b(Omega::Plus1, 2, Branch::Lower)?,
    ];
    let strict = [false, true, true, false, true];
    for i in 0..5 {
        let ok = if strict[i] { chain[i + 1] - chain[i] > 2.0 * res } else { chain[i + 1] >= chain[i] };
        if !ok {
            return Err(format!("ordering at alpha={alpha} e={e}: {chain:?}"));
        }
    }
    Ok(())
}

fn monotonicity() -> Outcome {
    let mut failures = Vec::new();
    let mut strict_alpha = 0;
    let mut strict_beta = 0;
    let alpha_chains = [(1.0, 0.0), (1.5, 0.2), (2.0, 0.4), (0.8, 0.6), (2.5, 0.3)];
    let beta_chains = [(4.0, 0.0), (3.0, 0.2), (5.0, 0.4), (2.0, 0.6), (6.0, 0.3)];
    let run_chain = |pts: Vec<(f64, f64, f64)>| -> Result<Vec<(usize, usize)>, String> {
        pts.par_iter()
            .map(|&(a, b, e)| {
                let p = EssentialParams::unchecked(a, b, e);
                let i1 = index_pair(&p, Omega::Plus1).map_err(|x| format!("({a:.3},{b:.3},{e}): {x}"))?;
                let im = index_pair(&p, Omega::Minus1).map_err(|x| format!("({a:.3},{b:.3},{e}): {x}"))?;
                Ok((i1.index, im.index))
            })
            .collect()
    };
    for (beta, e) in alpha_chains {
        let pts: Vec<_> = linspace(beta + 0.013, 3.0 * beta + 2.0, 14).into_iter().map(|a| (a, beta, e)).collect();
        match run_chain(pts) {
            Ok(v) => {
                if v.windows(2).any(|w| w[1].0 > w[0].0 || w[1].1 > w[0].1) {
                    failures.push(format!("alpha chain beta={beta} e={e}: {v:?}"));
                }
                if v.windows(2).any(|w| w[1] != w[0]) {
                    strict_alpha += 1;
                }
            }
            Err(x) => failures.push(x),
        }
    }
    for (alpha, e) in beta_chains {
        let pts: Vec<_> = linspace(0.071, alpha, 14).into_iter().map(|b| (alpha, b, e)).collect();
        match run_chain(pts) {
            Ok(v) => {
                if v.windows(2).any(|w| w[1].0 < w[0].0 || w[1].1 < w[0].1) {
                    failures.push(format!("beta chain alpha={alpha} e={e}: {v:?}"));
                }
                if v.windows(2).any(|w| w[1] != w[0]) {
                    strict_beta += 1;
                }
            }
            Err(x) => failures.push(x),
        }
    }
    if strict_alpha == 0 || strict_beta == 0 {
        failures.push(format!("strict jumps: alpha chains {strict_alpha}, beta chains {strict_beta}"));
    }
    outcome(&failures, format!("10 chains, strict jumps in {strict_alpha} alpha and {strict_beta} beta chains"))
}
