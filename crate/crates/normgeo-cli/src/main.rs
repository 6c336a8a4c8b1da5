//! File-driven command-line front end for the normgeo toolkit.
//!
//! Every command reads JSON inputs, runs one operation, and writes a
//! single JSON document to standard output. Numeric results always carry
//! an explicit `exact` flag; inexact results report `lower`/`upper`
//! bounds. Exit codes: 0 success, 2 parse failure, 3 precondition
//! violation, 4 solver non-convergence (a partial result is still
//! printed).

use clap::{Parser, Subcommand};
use normgeo::cones::{self, ConeElement, DualConeSpec, SelfAdjointMap};
use normgeo::convexgeo::{self, ConvexSet};
use normgeo::duality::{norming_functional, Functional};
use normgeo::matrix::Matrix;
use normgeo::opnorm::{self, LinearMap};
use normgeo::quotient::{self, Subspace};
use normgeo::selftest::{self, Level};
use normgeo::spaces::{Exponent, NormSpec};
use normgeo::tracenorm;
use normgeo::vecfun::{self, VectorField};
use normgeo::{CertifiedValue, Error, Mode, ToleranceProfile, Vector};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "normgeo",
    version,
    about = "Norms, dual norms, projections, separation, dual cones, operator/trace/quotient norms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Convergence tolerance override for iterative solvers (eps_iter).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Iteration cap override.
    #[arg(long, global = true)]
    max_iter: Option<usize>,

    /// Seed for every randomized operation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Trial count for sampling operations.
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Restrict scalar mode; `real` rejects inputs with complex entries.
    #[arg(long, global = true, value_parser = parse_mode)]
    mode: Option<Mode>,

    /// Write the JSON document to this path instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "real" => Ok(Mode::Real),
        "complex" => Ok(Mode::Complex),
        other => Err(format!("unknown mode '{other}' (expected real|complex)")),
    }
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.parse::<Exponent>().map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// p-norm (or Gram norm) of a vector; with --q also reports the
    /// two-sided comparison bracket between the p- and q-norms.
    Norm {
        #[arg(long, value_parser = parse_exponent)]
        p: Option<Exponent>,
        /// Second exponent (p <= q) for the norm-comparison bracket.
        #[arg(long, value_parser = parse_exponent)]
        q: Option<Exponent>,
        /// Gram matrix file for an inner-product norm.
        #[arg(long)]
        gram: Option<PathBuf>,
        input: PathBuf,
    },
    /// Dual norm of a functional (a functional file, or a weight vector
    /// plus --p/--gram).
    Dualnorm {
        #[arg(long, value_parser = parse_exponent)]
        p: Option<Exponent>,
        #[arg(long)]
        gram: Option<PathBuf>,
        input: PathBuf,
    },
    /// Norming functional attaining the norm at a vector.
    Normer {
        #[arg(long, value_parser = parse_exponent)]
        p: Option<Exponent>,
        #[arg(long)]
        gram: Option<PathBuf>,
        input: PathBuf,
    },
    /// Nearest point of a convex set.
    Project { set: PathBuf, point: PathBuf },
    /// Separating hyperplane for an exterior point.
    Separate { set: PathBuf, point: PathBuf },
    /// Supporting hyperplane at a boundary point via an exterior
    /// direction.
    Support {
        set: PathBuf,
        point: PathBuf,
        direction: PathBuf,
        #[arg(long, default_value_t = 40)]
        steps: usize,
    },
    /// Separate a point from a cone through the origin.
    ConeSeparate { cone: PathBuf, point: PathBuf },
    /// Dual-cone membership.
    Dualcone { spec: PathBuf, element: PathBuf },
    /// PSD duality biconditional for a Hermitian matrix.
    PsdCheck { input: PathBuf },
    /// Operator norm of a linear map.
    Opnorm { map: PathBuf },
    /// Compare the operator norms of a map and its adjoint.
    AdjointCheck { map: PathBuf },
    /// Trace norm of a linear map.
    Tracenorm { map: PathBuf },
    /// Trace-pairing bound |tr(A T)| <= |A|_op |T|_tr.
    PairingCheck { a: PathBuf, t: PathBuf },
    /// Quotient norm of a vector modulo a subspace.
    Quotient {
        #[arg(long, value_parser = parse_exponent)]
        p: Option<Exponent>,
        #[arg(long)]
        gram: Option<PathBuf>,
        subspace: PathBuf,
        point: PathBuf,
    },
    /// Norm-preserving extension of a functional given on a subspace
    /// basis.
    Extend {
        #[arg(long, value_parser = parse_exponent)]
        p: Option<Exponent>,
        #[arg(long)]
        gram: Option<PathBuf>,
        subspace: PathBuf,
        values: PathBuf,
    },
    /// Mixed (p, V)-norm of a vector field.
    MixedNorm {
        #[arg(long, value_parser = parse_exponent)]
        p: Option<Exponent>,
        field: PathBuf,
    },
    /// Lifted-operator norm preservation check.
    LiftCheck {
        #[arg(long, value_parser = parse_exponent)]
        p: Option<Exponent>,
        /// Dimension of the value space.
        #[arg(long, default_value_t = 3)]
        value_dim: usize,
        /// Value norm: `matching` (same p) or `euclidean`.
        #[arg(long, default_value = "matching")]
        value_norm: String,
        matrix: PathBuf,
    },
    /// Run the full invariant battery.
    Selftest {
        #[arg(long, default_value = "quick")]
        level: String,
    },
}

enum CliError {
    Parse(String),
    Precondition(String),
    NonConvergence(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::NonConvergence(_) => 4,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Precondition(m) | CliError::NonConvergence(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli) {
        Ok((doc, exit)) => {
            let rendered = serde_json::to_string_pretty(&doc).expect("serializable document");
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, rendered + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{rendered}"),
            }
            ExitCode::from(exit)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> CliResult<(Value, u8)> {
    let mut profile = ToleranceProfile::default();
    if let Some(tol) = cli.tol {
        profile.eps_iter = tol;
        profile.eps_exact = profile.eps_exact.min(tol);
    }
    if let Some(mi) = cli.max_iter {
        profile.max_iter = mi;
    }
    profile
        .validate()
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let seed = cli.seed;
    let mode = cli.mode;

    let diagnostics = json!({
        "eps_exact": profile.eps_exact,
        "eps_iter": profile.eps_iter,
        "max_iter": profile.max_iter,
        "seed": seed,
    });
    let finish = |command: &str, mut payload: Value| -> (Value, u8) {
        payload["status"] = json!("ok");
        payload["command"] = json!(command);
        payload["diagnostics"] = diagnostics.clone();
        (payload, 0)
    };

    match cli.command {
        Command::Norm { p, q, gram, input } => {
            let v = read_vector(&input, mode)?;
            let spec = norm_spec(p, gram.as_deref(), mode, &profile)?;
            let value = spec.norm(&v)?;
            let mut payload = json!({ "value": value, "exact": true });
            if let (Some(p), Some(q)) = (p, q) {
                let c = normgeo::spaces::norm_comparison(&v, p, q, &profile)?;
                payload["comparison"] = json!({ "low": c.low, "high": c.high, "holds": c.holds });
            }
            Ok(finish("norm", payload))
        }
        Command::Dualnorm { p, gram, input } => {
            let f = read_functional(&input, p, gram.as_deref(), mode, &profile)?;
            let d = f.dual_norm()?;
            Ok(finish("dualnorm", certified_json(&d)))
        }
        Command::Normer { p, gram, input } => {
            let v = read_vector(&input, mode)?;
            let spec = norm_spec(p, gram.as_deref(), mode, &profile)?;
            let f = norming_functional(&v, &spec)?;
            let achieved = f.evaluate(&v)?;
            Ok(finish(
                "normer",
                json!({
                    "functional": serde_json::to_value(&f).expect("functional"),
                    "achieved": [achieved.re, achieved.im],
                    "dual_norm": f.dual_norm()?.lower,
                }),
            ))
        }
        Command::Project { set, point } => {
            let set = read_set(&set, &profile)?;
            let x = read_real_vec(&point, mode)?;
            let proj = convexgeo::project(&set, &x, &profile)?;
            let exit = if proj.converged { 0 } else { 4 };
            let mut doc = finish(
                "project",
                json!({
                    "point": proj.point,
                    "distance": proj.distance,
                    "iterations": proj.iterations,
                    "converged": proj.converged,
                }),
            )
            .0;
            if exit != 0 {
                doc["status"] = json!("nonconverged");
                eprintln!("error: projection did not converge; partial result reported");
            }
            Ok((doc, exit))
        }
        Command::Separate { set, point } => {
            let set = read_set(&set, &profile)?;
            let x = read_real_vec(&point, mode)?;
            let h = convexgeo::separate_point(&set, &x, &profile)?;
            Ok(finish(
                "separate",
                json!({ "normal": h.normal, "offset": h.offset }),
            ))
        }
        Command::Support {
            set,
            point,
            direction,
            steps,
        } => {
            let set = read_set(&set, &profile)?;
            let x = read_real_vec(&point, mode)?;
            let d = read_real_vec(&direction, mode)?;
            let h = convexgeo::supporting_hyperplane(&set, &x, &d, steps, &profile)?;
            Ok(finish(
                "support",
                json!({ "normal": h.normal, "offset": h.offset }),
            ))
        }
        Command::ConeSeparate { cone, point } => {
            let cone = read_set(&cone, &profile)?;
            let z = read_real_vec(&point, mode)?;
            let s = convexgeo::separate_cone(&cone, &z, &profile)?;
            let pairing = normgeo::realvec::dot(&s.normal, &z);
            Ok(finish(
                "cone-separate",
                json!({ "normal": s.normal, "nearest": s.nearest, "pairing_with_point": pairing }),
            ))
        }
        Command::Dualcone { spec, element } => {
            let spec: DualConeSpec = read_json(&spec)?;
            let element: ConeElement = read_json(&element)?;
            let member = cones::dual_cone_membership(&spec, &element, &profile)?;
            Ok(finish("dualcone", json!({ "member": member })))
        }
        Command::PsdCheck { input } => {
            let t: SelfAdjointMap = read_json(&input)?;
            check_matrix_mode(t.matrix(), mode)?;
            let trials = cli.trials.unwrap_or(64);
            let r = cones::psd_duality_check(&t, trials, seed, &profile)?;
            Ok(finish(
                "psd-check",
                json!({
                    "is_psd": r.is_psd,
                    "pairing_nonneg": r.pairing_nonneg,
                    "witness": r.witness.map(|w| serde_json::to_value(&w).expect("witness")),
                    "witness_pairing": r.witness_pairing,
                }),
            ))
        }
        Command::Opnorm { map } => {
            let t: LinearMap = read_json(&map)?;
            check_matrix_mode(&t.matrix, mode)?;
            let c = opnorm::operator_norm(&t, &profile, seed)?;
            Ok(finish("opnorm", certified_json(&c)))
        }
        Command::AdjointCheck { map } => {
            let t: LinearMap = read_json(&map)?;
            check_matrix_mode(&t.matrix, mode)?;
            let chk = opnorm::adjoint_norm_check(&t, &profile, seed)?;
            Ok(finish(
                "adjoint-check",
                json!({
                    "primal": certified_json(&chk.primal),
                    "dual": certified_json(&chk.dual),
                    "consistent": chk.consistent,
                }),
            ))
        }
        Command::Tracenorm { map } => {
            let t: LinearMap = read_json(&map)?;
            check_matrix_mode(&t.matrix, mode)?;
            let tr = tracenorm::trace_norm(&t, &profile, seed)?;
            let mut doc = certified_json(&tr.bounds);
            doc["decomposition"] = serde_json::to_value(&tr.decomposition).expect("decomposition");
            Ok(finish("tracenorm", doc))
        }
        Command::PairingCheck { a, t } => {
            let a: LinearMap = read_json(&a)?;
            let t: LinearMap = read_json(&t)?;
            let c = tracenorm::pairing_bound_check(&a, &t, &profile, seed)?;
            Ok(finish(
                "pairing-check",
                json!({ "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds }),
            ))
        }
        Command::Quotient {
            p,
            gram,
            subspace,
            point,
        } => {
            let w: Subspace = read_json(&subspace)?;
            let x = read_vector(&point, mode)?;
            let spec = norm_spec(p, gram.as_deref(), mode, &profile)?;
            let q = quotient::quotient_norm(&x, &w, &spec, &profile)?;
            Ok(finish("quotient", certified_json(&q)))
        }
        Command::Extend {
            p,
            gram,
            subspace,
            values,
        } => {
            let z: Subspace = read_json(&subspace)?;
            let vals = read_vector(&values, mode)?;
            let spec = norm_spec(p, gram.as_deref(), mode, &profile)?;
            let f = quotient::extend_functional(&z, vals.entries(), &spec, &profile)?;
            let restriction = quotient::restriction_norm(&z, vals.entries(), &spec, &profile)?;
            Ok(finish(
                "extend",
                json!({
                    "functional": serde_json::to_value(&f).expect("functional"),
                    "dual_norm": f.dual_norm()?.lower,
                    "restriction_norm": certified_json(&restriction),
                }),
            ))
        }
        Command::MixedNorm { p, field } => {
            let f: VectorField = read_json(&field)?;
            let p = p.ok_or_else(|| CliError::Parse("--p is required".into()))?;
            let value = vecfun::mixed_norm(&f, p)?;
            Ok(finish(
                "mixed-norm",
                json!({ "value": value, "exact": true }),
            ))
        }
        Command::LiftCheck {
            p,
            value_dim,
            value_norm,
            matrix,
        } => {
            let t: Matrix = read_json(&matrix)?;
            check_matrix_mode(&t, mode)?;
            let p = p.ok_or_else(|| CliError::Parse("--p is required".into()))?;
            let vnorm = match value_norm.as_str() {
                "matching" => NormSpec::p(p),
                "euclidean" => NormSpec::euclidean(),
                other => {
                    return Err(CliError::Parse(format!(
                        "unknown value norm '{other}' (expected matching|euclidean)"
                    )))
                }
            };
            let trials = cli.trials.unwrap_or(1000);
            let c = vecfun::lifted_norm_check(&t, p, &vnorm, value_dim, trials, seed, &profile)?;
            Ok(finish(
                "lift-check",
                json!({
                    "scalar_opnorm": certified_json(&c.scalar_opnorm),
                    "max_ratio": c.max_ratio,
                    "holds": c.holds,
                }),
            ))
        }
        Command::Selftest { level } => {
            let level: Level = level
                .parse()
                .map_err(|e: Error| CliError::Parse(e.to_string()))?;
            let report = selftest::selftest(seed, level);
            let ok = report.ok;
            let doc = json!({
                "status": if ok { "ok" } else { "fail" },
                "command": "selftest",
                "report": serde_json::to_value(&report).expect("report"),
            });
            Ok((doc, if ok { 0 } else { 1 }))
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("cannot parse {}: {e}", path.display())))
}

fn read_vector(path: &std::path::Path, mode: Option<Mode>) -> CliResult<Vector> {
    let v: Vector = read_json(path)?;
    if mode == Some(Mode::Real) && !v.is_real() {
        return Err(CliError::Parse(format!(
            "{} has complex entries but --mode real was given",
            path.display()
        )));
    }
    Ok(v)
}

fn read_real_vec(path: &std::path::Path, mode: Option<Mode>) -> CliResult<Vec<f64>> {
    let v = read_vector(path, mode)?;
    v.to_real()
        .map_err(|_| CliError::Parse(format!("{} must be a real vector", path.display())))
}

fn read_set(path: &std::path::Path, profile: &ToleranceProfile) -> CliResult<ConvexSet> {
    let set: ConvexSet = read_json(path)?;
    set.validate(profile)?;
    Ok(set)
}

fn check_matrix_mode(m: &Matrix, mode: Option<Mode>) -> CliResult<()> {
    if mode == Some(Mode::Real) && !m.is_real() {
        return Err(CliError::Parse(
            "matrix has complex entries but --mode real was given".into(),
        ));
    }
    Ok(())
}

fn norm_spec(
    p: Option<Exponent>,
    gram: Option<&std::path::Path>,
    mode: Option<Mode>,
    profile: &ToleranceProfile,
) -> CliResult<NormSpec> {
    match (p, gram) {
        (Some(_), Some(_)) => Err(CliError::Parse(
            "--p and --gram are mutually exclusive".into(),
        )),
        (Some(p), None) => Ok(NormSpec::p(p)),
        (None, Some(path)) => {
            let gram: Matrix = read_json(path)?;
            check_matrix_mode(&gram, mode)?;
            let spec = NormSpec::InnerProduct { gram };
            spec.validate(profile)?;
            Ok(spec)
        }
        (None, None) => Err(CliError::Parse("one of --p or --gram is required".into())),
    }
}

fn read_functional(
    path: &std::path::Path,
    p: Option<Exponent>,
    gram: Option<&std::path::Path>,
    mode: Option<Mode>,
    profile: &ToleranceProfile,
) -> CliResult<Functional> {
    // a functional file, or a bare weight vector plus --p/--gram
    if let Ok(mut f) = read_json::<Functional>(path) {
        if mode == Some(Mode::Real) && !f.weights.is_real() {
            return Err(CliError::Parse(format!(
                "{} has complex entries but --mode real was given",
                path.display()
            )));
        }
        if p.is_some() || gram.is_some() {
            f.space_norm = norm_spec(p, gram, mode, profile)?;
        }
        return Ok(f);
    }
    let weights = read_vector(path, mode)?;
    Ok(Functional::new(weights, norm_spec(p, gram, mode, profile)?))
}

fn certified_json(c: &CertifiedValue) -> Value {
    let bound = |x: f64| -> Value {
        if x.is_finite() {
            json!(x)
        } else {
            json!("inf")
        }
    };
    let mut doc = json!({
        "lower": bound(c.lower),
        "upper": bound(c.upper),
        "exact": c.exact,
    });
    if c.exact {
        doc["value"] = json!(c.lower);
    }
    if let Some(w) = &c.witness {
        doc["witness"] = serde_json::to_value(w).expect("witness");
    }
    doc
}
