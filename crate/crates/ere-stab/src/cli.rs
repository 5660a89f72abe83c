//! Command-line interface. Every subcommand writes one JSON document or one CSV table.
//!
//! Parameters come from flags, from the `parameters` map of a `--config` JSON file, or from
//! defaults, in that order of precedence. Exit codes: 0 success, 1 domain error or failed
//! self-test, 2 numerical non-convergence, 64 usage error.

use crate::acceptance;
use crate::common::Error;
use crate::curves::{nh_surfaces, trace, DegenerateCurveSample, NhSurfaces};
use crate::essential::{monodromy, IntegratorStats, DEFAULT_TOL};
use crate::galerkin::{assemble, index_and_nullity, Omega, DEFAULT_N, DEFAULT_TOL as GALERKIN_TOL};
use crate::model::{make_params, EssentialParams};
use crate::regions::{classify_general, Verdict};
use crate::scan::{
    atlas_csv, check_verdict_families, e_star_profile, equal_mass_point, equal_mass_roots, sweep, Atlas, Coordinates,
    EqualMassPoint, FamilyCheck, GridSpec, RootTable,
};
use crate::sympl::RANK_TOL;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Default tolerances, by config key.
pub const DEFAULT_TOLERANCES: [(&str, f64); 4] =
    [("integration", DEFAULT_TOL), ("rank", RANK_TOL), ("galerkin", GALERKIN_TOL), ("resolution", 1e-10)];

pub const TRACE_SCHEMA: &str =
    "#schema=ere-stab-trace/1 alpha,e,omega,n,branch,ordinal,beta,multiplicity,bracket_width";
pub const NH_SCHEMA: &str = "#schema=ere-stab-nh/1 alpha_tilde,e,beta_s,beta_m,beta_k";
pub const ROOTS_SCHEMA: &str = "#schema=ere-stab-roots/1 label,indicator,y,m";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    Monodromy,
    Index,
    Trace,
    NhSurfaces,
    Sweep,
    EqualMass,
    SelfTest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn tolerance(&self, key: &str) -> f64 {
        self.tolerances
            .get(key)
            .copied()
            .or_else(|| DEFAULT_TOLERANCES.iter().find(|t| t.0 == key).map(|t| t.1))
            .expect("known tolerance key")
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ere-stab",
    version,
    about = "Linear stability of elliptic relative equilibria of the restricted 4-body problem"
)]
struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, display_order = 100)]
    config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true, display_order = 100)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, global = true, display_order = 100)]
    format: Option<Format>,
    /// Tolerance override, `key=value` (integration, rank, galerkin, resolution).
    #[arg(long = "tol", global = true, display_order = 100, value_parser = parse_tol)]
    tolerances: Vec<(String, f64)>,
    #[command(subcommand)]
    command: Option<Sub>,
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    let v: f64 = v.parse().map_err(|_| format!("not a number: {v}"))?;
    Ok((k.to_string(), v))
}

#[derive(Debug, Args, Default)]
struct PointArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    e: Option<f64>,
    /// Give the point in tilde coordinates instead.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "alpha")]
    alpha_tilde: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "beta")]
    beta_tilde: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Monodromy, normal form, both indices and the stability verdict at one point.
    Classify(PointArgs),
    /// Monodromy matrix and its spectrum.
    Monodromy(PointArgs),
    /// Galerkin ω-index and nullity.
    Index {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_negative_numbers = true)]
        omega: Option<i32>,
        /// Truncation order.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Degenerate curve Γ_n (ω = 1) or Σ_n (ω = −1) at fixed α for e in [0, e_max].
    Trace {
        #[arg(long, allow_negative_numbers = true)]
        omega: Option<i32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        e_max: Option<f64>,
        #[arg(long)]
        de: Option<f64>,
    },
    /// The surfaces β_s, β_m, β_k at fixed α̃ and e.
    NhSurfaces {
        #[arg(long, allow_negative_numbers = true)]
        alpha_tilde: Option<f64>,
        #[arg(long)]
        e: Option<f64>,
    },
    /// Stability atlas over a grid.
    Sweep {
        #[arg(long, value_enum)]
        coordinates: Option<Coordinates>,
        #[arg(long, allow_negative_numbers = true)]
        x0: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        x1: Option<f64>,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        y0: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        y1: Option<f64>,
        #[arg(long)]
        ny: Option<usize>,
        /// Eccentricities, comma separated.
        #[arg(long, value_delimiter = ',')]
        es: Option<Vec<f64>>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// The two-equal-mass family with its limit position on the symmetry axis.
    EqualMass {
        /// Root table of the four indicator functions.
        #[arg(long)]
        roots: bool,
        /// Verdicts sampled on every sub-interval.
        #[arg(long)]
        families: bool,
        /// First verdict change in Y₁ for each eccentricity in `--es`.
        #[arg(long)]
        e_star: bool,
        /// Classify the point with this y.
        #[arg(long, allow_negative_numbers = true)]
        y: Option<f64>,
        #[arg(long)]
        e: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        es: Option<Vec<f64>>,
    },
    /// Run the acceptance checks.
    SelfTest {
        /// Criterion numbers; all when omitted.
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u32>>,
    },
}

fn command_of(s: &Sub) -> Command {
    match s {
        Sub::Classify(_) => Command::Classify,
        Sub::Monodromy(_) => Command::Monodromy,
        Sub::Index { .. } => Command::Index,
        Sub::Trace { .. } => Command::Trace,
        Sub::NhSurfaces { .. } => Command::NhSurfaces,
        Sub::Sweep { .. } => Command::Sweep,
        Sub::EqualMass { .. } => Command::EqualMass,
        Sub::SelfTest { .. } => Command::SelfTest,
    }
}

fn allowed_keys(c: Command) -> &'static [&'static str] {
    const POINT: &[&str] = &["alpha", "beta", "e", "alpha_tilde", "beta_tilde"];
    match c {
        Command::Classify | Command::Monodromy => POINT,
        Command::Index => &["alpha", "beta", "e", "alpha_tilde", "beta_tilde", "omega", "n"],
        Command::Trace => &["omega", "n", "alpha", "e_max", "de"],
        Command::NhSurfaces => &["alpha_tilde", "e"],
        Command::Sweep => &["coordinates", "x0", "x1", "nx", "y0", "y1", "ny", "es", "workers"],
        Command::EqualMass => &["roots", "families", "e_star", "y", "e", "es"],
        Command::SelfTest => &["criteria"],
    }
}

fn put<T: Serialize>(m: &mut BTreeMap<String, Value>, k: &str, v: Option<T>) {
    if let Some(v) = v {
        m.insert(k.to_string(), serde_json::to_value(v).expect("plain value"));
    }
}

fn put_point(m: &mut BTreeMap<String, Value>, p: PointArgs) {
    put(m, "alpha", p.alpha);
    put(m, "beta", p.beta);
    put(m, "e", p.e);
    put(m, "alpha_tilde", p.alpha_tilde);
    put(m, "beta_tilde", p.beta_tilde);
}

fn flag_parameters(s: Sub) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    match s {
        Sub::Classify(p) | Sub::Monodromy(p) => put_point(&mut m, p),
        Sub::Index { point, omega, n } => {
            put_point(&mut m, point);
            put(&mut m, "omega", omega);
            put(&mut m, "n", n);
        }
        Sub::Trace { omega, n, alpha, e_max, de } => {
            put(&mut m, "omega", omega);
            put(&mut m, "n", n);
            put(&mut m, "alpha", alpha);
            put(&mut m, "e_max", e_max);
            put(&mut m, "de", de);
        }
        Sub::NhSurfaces { alpha_tilde, e } => {
            put(&mut m, "alpha_tilde", alpha_tilde);
            put(&mut m, "e", e);
        }
        Sub::Sweep { coordinates, x0, x1, nx, y0, y1, ny, es, workers } => {
            put(&mut m, "coordinates", coordinates);
            put(&mut m, "x0", x0);
            put(&mut m, "x1", x1);
            put(&mut m, "nx", nx);
            put(&mut m, "y0", y0);
            put(&mut m, "y1", y1);
            put(&mut m, "ny", ny);
            put(&mut m, "es", es);
            put(&mut m, "workers", workers);
        }
        Sub::EqualMass { roots, families, e_star, y, e, es } => {
            put(&mut m, "roots", roots.then_some(true));
            put(&mut m, "families", families.then_some(true));
            put(&mut m, "e_star", e_star.then_some(true));
            put(&mut m, "y", y);
            put(&mut m, "e", e);
            put(&mut m, "es", es);
        }
        Sub::SelfTest { criteria } => put(&mut m, "criteria", criteria),
    }
    m
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(Error),
    SelfTest,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Collision { .. } | Error::Domain(_) | Error::MassRange(_) | Error::DegenerateBracket { .. } => {
            EXIT_DOMAIN
        }
        Error::Integration(_)
        | Error::UnresolvedClass(_)
        | Error::DegenerateKrein(_)
        | Error::NotConverged { .. }
        | Error::SingularRecurrence(_)
        | Error::Bracket(_)
        | Error::RootCount { .. } => EXIT_NUMERICAL,
    }
}

/// Merged parameters of one invocation.
struct Params {
    map: BTreeMap<String, Value>,
}

impl Params {
    fn f64_opt(&self, k: &str) -> Outcome<Option<f64>> {
        match self.map.get(k) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| Failure::Usage(format!("parameter {k} must be a number"))),
        }
    }

    fn f64(&self, k: &str) -> Outcome<f64> {
        self.f64_opt(k)?.ok_or_else(|| Failure::Usage(format!("missing parameter {k}")))
    }

    fn f64_or(&self, k: &str, d: f64) -> Outcome<f64> {
        Ok(self.f64_opt(k)?.unwrap_or(d))
    }

    fn int_opt(&self, k: &str) -> Outcome<Option<i64>> {
        match self.map.get(k) {
            None => Ok(None),
            Some(v) => v.as_i64().map(Some).ok_or_else(|| Failure::Usage(format!("parameter {k} must be an integer"))),
        }
    }

    fn int(&self, k: &str) -> Outcome<i64> {
        self.int_opt(k)?.ok_or_else(|| Failure::Usage(format!("missing parameter {k}")))
    }

    fn flag(&self, k: &str) -> Outcome<bool> {
        match self.map.get(k) {
            None => Ok(false),
            Some(v) => v.as_bool().ok_or_else(|| Failure::Usage(format!("parameter {k} must be true or false"))),
        }
    }

    fn list(&self, k: &str) -> Outcome<Option<Vec<Value>>> {
        match self.map.get(k) {
            None => Ok(None),
            Some(Value::Array(a)) => Ok(Some(a.clone())),
            Some(v) => Ok(Some(vec![v.clone()])),
        }
    }

    fn f64_list(&self, k: &str) -> Outcome<Option<Vec<f64>>> {
        self.list(k)?
            .map(|l| {
                l.iter()
                    .map(|v| v.as_f64().ok_or_else(|| Failure::Usage(format!("parameter {k} must hold numbers"))))
                    .collect()
            })
            .transpose()
    }

    fn omega(&self) -> Outcome<Omega> {
        let s = self.int("omega")?;
        Omega::from_sign(s as i32).map_err(|_| Failure::Usage(format!("omega must be 1 or -1, got {s}")))
    }

    fn point(&self) -> Outcome<EssentialParams> {
        let e = self.f64_or("e", 0.0)?;
        match (self.f64_opt("alpha_tilde")?, self.f64_opt("beta_tilde")?) {
            (Some(at), Some(bt)) => Ok(EssentialParams::from_tilde(at, bt, e)?),
            (None, None) => Ok(make_params(self.f64("alpha")?, self.f64("beta")?, e)?),
            _ => Err(Failure::Usage("give both alpha_tilde and beta_tilde".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsOut {
    pub alpha: f64,
    pub beta: f64,
    pub e: f64,
    pub alpha_tilde: f64,
    pub beta_tilde: f64,
}

impl From<&EssentialParams> for ParamsOut {
    fn from(p: &EssentialParams) -> Self {
        ParamsOut { alpha: p.alpha, beta: p.beta, e: p.e, alpha_tilde: p.alpha_tilde, beta_tilde: p.beta_tilde }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Indices {
    pub omega_plus1: [usize; 2],
    pub omega_minus1: [usize; 2],
}

/// Output of `classify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub params: ParamsOut,
    pub monodromy: [[f64; 4]; 4],
    pub spectrum: [[f64; 2]; 4],
    pub indices: Indices,
    pub verdict: Verdict,
    pub normal_form: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unresolved_reason: Option<String>,
}

/// Output of `monodromy`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyReport {
    pub params: ParamsOut,
    pub monodromy: [[f64; 4]; 4],
    pub spectrum: [[f64; 2]; 4],
    pub symplectic_residual: f64,
    pub det: f64,
    pub tol: f64,
    pub stats: IntegratorStats,
}

/// Output of `index`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub params: ParamsOut,
    pub omega: i32,
    pub n: usize,
    pub index: usize,
    pub nullity: usize,
    pub converged: bool,
}

/// Output of `equal-mass --y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualMassReport {
    pub point: EqualMassPoint,
    pub classification: ClassifyReport,
}

/// Output of `equal-mass --e-star`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EStarSample {
    pub e: f64,
    pub y: Option<f64>,
}

/// Output of `self-test`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfTestLine {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn rows(m: &Matrix4<f64>) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (k, x) in row.iter_mut().enumerate() {
            *x = m[(i, k)];
        }
    }
    out
}

fn spectrum_pairs(s: &[nalgebra::Complex<f64>; 4]) -> [[f64; 2]; 4] {
    s.map(|z| [z.re, z.im])
}

fn classify_report(p: &EssentialParams, cfg: &RunConfig) -> Outcome<ClassifyReport> {
    let v = classify_general(p, cfg.tolerance("rank"))?;
    Ok(ClassifyReport {
        params: p.into(),
        monodromy: rows(&v.monodromy.m),
        spectrum: spectrum_pairs(&v.monodromy.spectrum),
        indices: Indices {
            omega_plus1: [v.index_plus1.index, v.index_plus1.nullity],
            omega_minus1: [v.index_minus1.index, v.index_minus1.nullity],
        },
        verdict: v.verdict,
        normal_form: v.label(),
        unresolved_reason: v.unresolved_reason,
    })
}

enum Rendered {
    Json(String),
    Csv(String),
    Text(String),
}

fn json<T: Serialize>(v: &T) -> Rendered {
    Rendered::Json(serde_json::to_string_pretty(v).expect("serializable") + "\n")
}

fn csv_with_schema(schema: &str, header: &[&str], records: Vec<Vec<String>>) -> Rendered {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in records {
        w.write_record(&r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf8");
    Rendered::Csv(format!("{schema}\n{body}"))
}

fn trace_csv(samples: &[DegenerateCurveSample]) -> Rendered {
    let recs = samples
        .iter()
        .map(|s| {
            vec![
                s.alpha.to_string(),
                s.e.to_string(),
                (s.omega.sign() as i32).to_string(),
                s.n.to_string(),
                s.branch.map(|b| format!("{b:?}").to_lowercase()).unwrap_or_default(),
                s.ordinal.to_string(),
                s.beta.to_string(),
                s.multiplicity.to_string(),
                s.bracket_width.to_string(),
            ]
        })
        .collect();
    csv_with_schema(
        TRACE_SCHEMA,
        &["alpha", "e", "omega", "n", "branch", "ordinal", "beta", "multiplicity", "bracket_width"],
        recs,
    )
}

fn nh_csv(s: &NhSurfaces) -> Rendered {
    let rec = vec![
        s.alpha_tilde.to_string(),
        s.e.to_string(),
        s.beta_s.to_string(),
        s.beta_m.to_string(),
        s.beta_k.to_string(),
    ];
    csv_with_schema(NH_SCHEMA, &["alpha_tilde", "e", "beta_s", "beta_m", "beta_k"], vec![rec])
}

fn roots_csv(t: &RootTable) -> Rendered {
    let mut recs: Vec<Vec<String>> = t
        .roots
        .iter()
        .map(|r| vec![r.label.clone(), format!("{:?}", r.indicator), r.y.to_string(), r.m.to_string()])
        .collect();
    recs.push(vec!["m0".into(), String::new(), String::new(), t.m0.to_string()]);
    csv_with_schema(ROOTS_SCHEMA, &["label", "indicator", "y", "m"], recs)
}

fn execute(cmd: Command, p: &Params, cfg: &RunConfig, format: Option<Format>) -> Outcome<Rendered> {
    let want = |default: Format, csv_ok: bool| -> Outcome<Format> {
        match format.unwrap_or(default) {
            Format::Csv if !csv_ok => Err(Failure::Usage(format!("{cmd:?} has no CSV output"))),
            f => Ok(f),
        }
    };
    match cmd {
        Command::Classify => {
            want(Format::Json, false)?;
            Ok(json(&classify_report(&p.point()?, cfg)?))
        }
        Command::Monodromy => {
            want(Format::Json, false)?;
            let params = p.point()?;
            let r = monodromy(&params, cfg.tolerance("integration"))?;
            Ok(json(&MonodromyReport {
                params: (&params).into(),
                monodromy: rows(&r.m),
                spectrum: spectrum_pairs(&r.spectrum),
                symplectic_residual: r.symplectic_residual,
                det: r.det,
                tol: r.tol,
                stats: r.stats,
            }))
        }
        Command::Index => {
            want(Format::Json, false)?;
            let params = p.point()?;
            let om = p.omega()?;
            let n = p.int_opt("n")?.map(|n| n as usize).unwrap_or(DEFAULT_N);
            if n == 0 {
                return Err(Failure::Usage("n must be positive".into()));
            }
            let r = index_and_nullity(&assemble(&params, om, n), cfg.tolerance("galerkin"))?;
            Ok(json(&IndexReport {
                params: (&params).into(),
                omega: om.sign() as i32,
                n,
                index: r.index,
                nullity: r.nullity,
                converged: r.converged,
            }))
        }
        Command::Trace => {
            let f = want(Format::Csv, true)?;
            let n = p.int("n")?;
            if n < 0 {
                return Err(Failure::Usage("n must be nonnegative".into()));
            }
            let samples = trace(
                p.f64("alpha")?,
                p.omega()?,
                n as u32,
                p.f64_or("e_max", 0.5)?,
                p.f64_or("de", crate::curves::TRACE_STEP)?,
                cfg.tolerance("resolution"),
            )?;
            Ok(if f == Format::Csv { trace_csv(&samples) } else { json(&samples) })
        }
        Command::NhSurfaces => {
            let f = want(Format::Json, true)?;
            let s = nh_surfaces(p.f64("alpha_tilde")?, p.f64_or("e", 0.0)?, cfg.tolerance("resolution"))?;
            Ok(if f == Format::Csv { nh_csv(&s) } else { json(&s) })
        }
        Command::Sweep => {
            let f = want(Format::Csv, true)?;
            let coordinates = match p.map.get("coordinates") {
                None => Coordinates::Plain,
                Some(v) => serde_json::from_value(v.clone())
                    .map_err(|_| Failure::Usage("coordinates must be plain or tilde".into()))?,
            };
            let count = |k: &str, d: i64| -> Outcome<usize> {
                let v = p.int_opt(k)?.unwrap_or(d);
                if v < 1 {
                    return Err(Failure::Usage(format!("{k} must be positive")));
                }
                Ok(v as usize)
            };
            let grid = GridSpec {
                coordinates,
                x: (p.f64("x0")?, p.f64("x1")?),
                y: (p.f64("y0")?, p.f64("y1")?),
                nx: count("nx", 10)?,
                ny: count("ny", 10)?,
                es: p.f64_list("es")?.unwrap_or_else(|| vec![0.0]),
            };
            let atlas: Atlas = sweep(&grid, count("workers", rayon::current_num_threads() as i64)?)?;
            Ok(if f == Format::Csv { Rendered::Csv(atlas_csv(&atlas)) } else { json(&atlas) })
        }
        Command::EqualMass => {
            let modes = [p.flag("roots")?, p.flag("families")?, p.flag("e_star")?, p.map.contains_key("y")];
            if modes.iter().filter(|&&m| m).count() != 1 {
                return Err(Failure::Usage(
                    "equal-mass needs exactly one of --roots, --families, --e-star, --y".into(),
                ));
            }
            if modes[3] {
                want(Format::Json, false)?;
                let pt = equal_mass_point(p.f64("y")?)?;
                let params = make_params(pt.alpha, pt.beta, p.f64_or("e", 0.0)?)?;
                return Ok(json(&EqualMassReport { point: pt, classification: classify_report(&params, cfg)? }));
            }
            let t = equal_mass_roots()?;
            let es = p.f64_list("es")?.unwrap_or_else(|| vec![0.0, 0.3, 0.6, 0.9]);
            if modes[0] {
                let f = want(Format::Json, true)?;
                Ok(if f == Format::Csv { roots_csv(&t) } else { json(&t) })
            } else if modes[1] {
                want(Format::Json, false)?;
                let checks: Vec<FamilyCheck> = check_verdict_families(&t, &es, 3);
                Ok(json(&checks))
            } else {
                want(Format::Json, false)?;
                let prof: Vec<EStarSample> =
                    e_star_profile(&t, &es).into_iter().map(|(e, y)| EStarSample { e, y }).collect();
                Ok(json(&prof))
            }
        }
        Command::SelfTest => {
            let ids: Vec<u32> = match p.list("criteria")? {
                None => acceptance::CRITERIA.iter().map(|c| c.0).collect(),
                Some(l) => l
                    .iter()
                    .map(|v| {
                        v.as_u64().map(|x| x as u32).ok_or_else(|| Failure::Usage("criteria must be integers".into()))
                    })
                    .collect::<Outcome<_>>()?,
            };
            if let Some(bad) = ids.iter().find(|i| !acceptance::CRITERIA.iter().any(|c| c.0 == **i)) {
                return Err(Failure::Usage(format!("no criterion {bad}")));
            }
            let reports: Vec<_> = ids.iter().map(|&i| acceptance::run(i)).collect();
            let failed = reports.iter().filter(|r| !r.passed).count();
            let out = if format == Some(Format::Json) {
                let lines: Vec<SelfTestLine> = reports
                    .iter()
                    .map(|r| SelfTestLine {
                        id: r.id,
                        name: r.name.to_string(),
                        passed: r.passed,
                        detail: r.detail.clone(),
                        seconds: r.elapsed.as_secs_f64(),
                    })
                    .collect();
                json(&lines)
            } else if format == Some(Format::Csv) {
                return Err(Failure::Usage("self-test has no CSV output".into()));
            } else {
                let mut s: String = reports.iter().map(|r| format!("{r}\n")).collect();
                s.push_str(&format!("{failed} of {} criteria failed\n", reports.len()));
                Rendered::Text(s)
            };
            if failed > 0 {
                emit_text(&out);
                return Err(Failure::SelfTest);
            }
            Ok(out)
        }
    }
}

fn emit_text(r: &Rendered) {
    let s = match r {
        Rendered::Json(s) | Rendered::Csv(s) | Rendered::Text(s) => s,
    };
    print!("{s}");
}

fn load_config(path: &PathBuf) -> Outcome<RunConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let cfg: RunConfig =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))?;
    Ok(cfg)
}

fn check_tolerances(t: &BTreeMap<String, f64>) -> Outcome<()> {
    for k in t.keys() {
        if !DEFAULT_TOLERANCES.iter().any(|d| d.0 == k) {
            return Err(Failure::Usage(format!("unknown tolerance {k}")));
        }
    }
    Ok(())
}

fn run_inner(cli: Cli, out: &mut dyn Write) -> Outcome<()> {
    let mut cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    check_tolerances(&cfg.tolerances)?;
    for (k, v) in cli.tolerances {
        cfg.tolerances.insert(k, v);
    }
    check_tolerances(&cfg.tolerances)?;
    let (cmd, flags) = match cli.command {
        Some(s) => (command_of(&s), flag_parameters(s)),
        None => (cfg.command.ok_or_else(|| Failure::Usage("no subcommand given".into()))?, BTreeMap::new()),
    };
    let allowed = allowed_keys(cmd);
    if cfg.command.is_some_and(|c| c == cmd) || cfg.command.is_none() {
        if let Some(k) = cfg.parameters.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Failure::Usage(format!("unknown parameter {k} for {cmd:?}")));
        }
    } else {
        cfg.parameters.clear();
    }
    let mut map = cfg.parameters.clone();
    map.extend(flags);
    let format = cli.format.or(cfg.format);
    let output = cli.output.or(cfg.output_path.clone());
    let rendered = execute(cmd, &Params { map }, &cfg, format)?;
    let bytes = match &rendered {
        Rendered::Json(s) | Rendered::Csv(s) | Rendered::Text(s) => s.as_bytes(),
    };
    match output {
        Some(path) => {
            std::fs::write(&path, bytes).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?
        }
        None => out.write_all(bytes).map_err(|e| Failure::Usage(e.to_string()))?,
    }
    Ok(())
}

/// Runs one invocation, writing results to `out` and diagnostics to stderr. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match run_inner(cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n");
            let mut cmd = <Cli as clap::CommandFactory>::command();
            let _ = cmd.print_help();
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        Err(Failure::SelfTest) => EXIT_DOMAIN,
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run_with(std::iter::once("ere-stab").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn classify_unipotent_point() {
        let (code, out) = call(&["classify", "--alpha", "0.5", "--beta", "0.5", "--e", "0"]);
        assert_eq!(code, 0);
        let r: ClassifyReport = serde_json::from_str(&out).unwrap();
        assert!(r.spectrum.iter().all(|z| (z[0] - 1.0).abs() < 1e-6 && z[1].abs() < 1e-6));
        assert_eq!(r.indices.omega_plus1[1], 3);
        let v: Value = serde_json::from_str(&out).unwrap();
        for k in ["params", "monodromy", "spectrum", "indices", "verdict", "normal_form"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", out);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["classify", "--alpha", "0.2", "--beta", "0.5"]).0, EXIT_DOMAIN);
        assert_eq!(call(&["classify", "--alpha", "2"]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["classify", "--alpha", "2", "--beta", "0.5", "--format", "csv"]).0, EXIT_USAGE);
        assert_eq!(call(&["index", "--alpha", "2", "--beta", "0.5", "--omega", "3"]).0, EXIT_USAGE);
        assert_eq!(call(&["monodromy", "--alpha", "2", "--beta", "0.5", "--e", "0.995"]).0, EXIT_NUMERICAL);
        assert_eq!(call(&["monodromy", "--alpha", "2", "--beta", "0.5", "--e", "1.2"]).0, EXIT_DOMAIN);
        assert_eq!(
            call(&["monodromy", "--alpha", "2", "--beta", "0.5", "--tol", "rank=1e-6", "--tol", "bogus=1"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn trace_csv_has_schema_and_slope() {
        let (code, out) =
            call(&["trace", "--omega", "-1", "--n", "0", "--alpha", "2", "--e-max", "0.05", "--de", "0.01"]);
        assert_eq!(code, 0);
        let (schema, body) = out.split_once('\n').unwrap();
        assert!(schema.starts_with("#schema="));
        let mut rd = csv::Reader::from_reader(body.as_bytes());
        let mut by_branch: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
        for r in rd.records() {
            let r = r.unwrap();
            by_branch.entry(r[4].to_string()).or_default().push((r[1].parse().unwrap(), r[6].parse().unwrap()));
        }
        let beta0 = by_branch[""][0].1;
        for (b, pts) in by_branch {
            if b.is_empty() {
                continue;
            }
            let (e1, b1) = pts[0];
            let slope = (b1 - beta0) / e1;
            let want = if b == "lower" { -1.0 / 24.0 } else { 1.0 / 24.0 };
            assert!((slope - want).abs() < 5e-3, "{b}: {slope}");
        }
    }

    #[test]
    fn config_file_and_override() {
        let dir = std::env::temp_dir().join(format!("ere-stab-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let cfg = dir.join("run.json");
        std::fs::write(&cfg, r#"{"command":"index","parameters":{"alpha":2.0,"beta":0.5,"e":0.0,"omega":1}}"#).unwrap();
        let (code, out) = call(&["--config", cfg.to_str().unwrap()]);
        assert_eq!(code, 0);
        let r: IndexReport = serde_json::from_str(&out).unwrap();
        assert_eq!((r.params.alpha, r.omega), (2.0, 1));
        let (code, out) = call(&["--config", cfg.to_str().unwrap(), "index", "--alpha", "4", "--beta", "2"]);
        assert_eq!(code, 0);
        let r: IndexReport = serde_json::from_str(&out).unwrap();
        assert_eq!((r.params.alpha, r.params.beta, r.index), (4.0, 2.0, 3));
        std::fs::write(&cfg, r#"{"command":"index","parameters":{"alpha":2.0},"colour":"red"}"#).unwrap();
        assert_eq!(call(&["--config", cfg.to_str().unwrap()]).0, EXIT_USAGE);
        std::fs::write(&cfg, r#"{"command":"index","parameters":{"gamma":2.0}}"#).unwrap();
        assert_eq!(call(&["--config", cfg.to_str().unwrap()]).0, EXIT_USAGE);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn sweep_is_deterministic() {
        let args = [
            "sweep", "--x0", "0.5", "--x1", "4", "--nx", "3", "--y0", "0.2", "--y1", "1.5", "--ny", "3", "--es",
            "0,0.4",
        ];
        let (c1, a) = call(&args);
        let (c2, b) = call(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b);
        assert!(a.starts_with("#schema=ere-stab-atlas/1"));
        assert_eq!(a.lines().count(), 2 + 18);
    }
}
