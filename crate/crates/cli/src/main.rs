mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mldkit::germs::{
    self, check_kawakita_pattern, enumerate_admissible_weights, germ_weight_discrepancy,
    irreducibility_certificate, AdmissibleWeight, GermError,
};
use mldkit::lattice::LatticePoint;
use mldkit::newton::{longest_descending_chain, NewtonError};
use mldkit::rat::{self, Rat, RatParseError};
use mldkit::reid::{self, ReidError};
use mldkit::thresholds::{self, CtKind, ThresholdError};
use mldkit::toric::{self, MldValue, ToricError};
use mldkit::verify;
use mldkit::weighted::PolyError;
use num_integer::Integer;
use serde_json::{json, Value};
use thiserror::Error;

use input::{read_json, BasketFile, ConeFile, GermFile, NewtonFile};
use output::{rat_json, rats_json, Format};

/// Exact minimal log discrepancies, thresholds and basket arithmetic.
#[derive(Debug, Parser)]
#[command(name = "mldkit", version, about)]
struct Cli {
    /// Output format; JSON by default, a table for `verify`.
    #[arg(long, value_enum, global = true)]
    output: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimal log discrepancy of a toric pair at its fixed point.
    ToricMld { file: PathBuf },
    /// The a-lc threshold of the file's "divisor" with respect to the pair.
    ToricLct {
        file: PathBuf,
        /// The level `a`, as `p/q`.
        #[arg(long, value_parser = parse_rat_arg)]
        a: Rat,
    },
    /// Discrepancy data of one weighted blow-up of a germ.
    GermDiscrepancy {
        file: PathBuf,
        /// Comma-separated numerators `w₁,…,w_d` over the group order.
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        weight: Vec<i64>,
    },
    /// All admissible weights with `Σwᵢ ≤ budget` and their log discrepancies.
    GermWeights {
        file: PathBuf,
        #[arg(long)]
        budget: i64,
    },
    /// Newton polytope operations.
    Newton {
        #[command(subcommand)]
        action: NewtonAction,
    },
    /// Singular Riemann–Roch basket arithmetic.
    Reid {
        #[command(subcommand)]
        action: ReidAction,
    },
    /// Enumerate a finite shadow of a canonical-threshold set.
    CtScan {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        cap: i64,
        /// Also write the values as CSV.
        #[arg(long)]
        emit_csv: Option<PathBuf>,
    },
    /// Run the randomized invariant suites and print a pass/fail table.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum NewtonAction {
    /// Minimal generators of one polytope.
    Reduce { file: PathBuf },
    /// Longest descending chain in a JSON array of polytopes.
    Chain { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum ReidAction {
    /// The contribution c(r, b, i) of a point of type 1/r(1,−1,b).
    C {
        r: i64,
        b: i64,
        #[arg(allow_negative_numbers = true)]
        i: i64,
    },
    /// Check the periodic δ identity for a basket over i ∈ [0, imax].
    DeltaCheck {
        file: PathBuf,
        #[arg(long)]
        r: i64,
        /// Defaults to 2·lcm(r₁, r₂).
        #[arg(long)]
        imax: Option<i64>,
    },
    /// Index lcm(r₁/gcd(r₁,d₁), r₂/gcd(r₂,d₂)) of a basket.
    Index { file: PathBuf },
    /// The one-parameter family of basket data and its side conditions.
    Family { r: i64 },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Smooth,
    #[value(name = "cA")]
    CA,
}

impl From<KindArg> for CtKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Smooth => CtKind::Smooth,
            KindArg::CA => CtKind::CA,
        }
    }
}

fn parse_rat_arg(s: &str) -> Result<Rat, RatParseError> {
    rat::parse_rat(s)
}

#[derive(Debug, Error)]
pub enum CliError {
    /// A mathematical precondition failed; exit code 1.
    #[error("{0}")]
    Domain(String),
    /// The input could not be read or parsed; exit code 2.
    #[error("{path}: {msg}")]
    Input { path: String, msg: String },
    /// Bad arguments or environment; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Output could not be written; exit code 2.
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Input { .. } | CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

macro_rules! domain_errors {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        })*
    };
}

domain_errors!(
    GermError,
    ToricError,
    NewtonError,
    ReidError,
    ThresholdError,
    PolyError
);

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    let format = cli.output.unwrap_or(match cli.command {
        Command::Verify { .. } => Format::Human,
        _ => Format::Json,
    });
    match run(cli.command) {
        Ok((value, failed)) => {
            print!("{}", output::render(&value, format));
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// `MLDKIT_THREADS` caps the worker pool; the default uses every core.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("MLDKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "MLDKIT_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

/// The JSON result and whether it reports a failed check.
fn run(cmd: Command) -> Result<(Value, bool), CliError> {
    let ok = |v: Value| Ok((v, false));
    match cmd {
        Command::ToricMld { file } => ok(toric_mld(read_json::<ConeFile>(&file)?)?),
        Command::ToricLct { file, a } => ok(toric_lct(read_json::<ConeFile>(&file)?, &a)?),
        Command::GermDiscrepancy { file, weight } => {
            ok(germ_discrepancy(read_json::<GermFile>(&file)?, &weight)?)
        }
        Command::GermWeights { file, budget } => {
            ok(germ_weights(read_json::<GermFile>(&file)?, budget)?)
        }
        Command::Newton { action } => ok(newton(action)?),
        Command::Reid { action } => reid_cmd(action),
        Command::CtScan {
            kind,
            k,
            cap,
            emit_csv,
        } => ok(ct_scan(kind.into(), k, cap, emit_csv)?),
        Command::Verify { suite, seed } => verify_cmd(suite, seed),
    }
}

fn point_json(p: &LatticePoint) -> Value {
    json!(p.0)
}

fn toric_mld(file: ConeFile) -> Result<Value, CliError> {
    let cone = file.into_cone()?;
    let res = toric::toric_mld(&cone.pair)?;
    let mut out = serde_json::Map::new();
    out.insert(
        "mld".into(),
        match &res.value {
            MldValue::Finite(r) => rat_json(r),
            MldValue::NegInfinity => json!("-inf"),
        },
    );
    out.insert(
        "witness".into(),
        res.witness.as_ref().map_or(Value::Null, point_json),
    );
    if let (Some(q), Some(w)) = (&cone.quotient, &res.witness) {
        out.insert("witness_original".into(), rats_json(&q.to_original(&w.0)));
    }
    out.insert(
        "fold".into(),
        res.fold.as_ref().map_or(Value::Null, |f| {
            json!({
                "subset": f.subset,
                "lambda": rats_json(&f.lambda),
                "folded": rats_json(&f.folded),
                "point": f.fold.0,
            })
        }),
    );
    Ok(Value::Object(out))
}

fn toric_lct(file: ConeFile, a: &Rat) -> Result<Value, CliError> {
    let cone = file.into_cone()?;
    let d = cone.divisor.ok_or_else(|| {
        CliError::Domain("toric-lct needs a \"divisor\" entry in the cone file".into())
    })?;
    let res = toric::toric_alct(&cone.pair, &d, a)?;
    Ok(json!({
        "a": rat_json(a),
        "threshold": res.value.to_string(),
        "point": res.point.as_ref().map_or(Value::Null, point_json),
        "ray": res.ray,
    }))
}

fn germ_discrepancy(file: GermFile, weight: &[i64]) -> Result<Value, CliError> {
    let (germ, boundary) = file.into_germ()?;
    let w = AdmissibleWeight::new(&germ, weight)?;
    let disc = germ_weight_discrepancy(&germ, &w)?;
    let wb = germs::boundary_weight(&germ, &boundary, &w)?;
    let ld = germs::log_discrepancy(&germ, &boundary, &w)?;
    let cert = irreducibility_certificate(&germ, &w)?;
    let pattern = if matches!(germ.dim(), 4 | 5) {
        let rep = check_kawakita_pattern(&germ, &w)?;
        json!({
            "case": rep.case.map(|c| c.label()),
            "passed": rep.passed(),
            "conditions": rep.conditions.iter().map(|c| json!({"name": c.name, "holds": c.holds})).collect::<Vec<_>>(),
            "params": rep.params.iter().map(|(k, v)| json!({"name": k, "value": v})).collect::<Vec<_>>(),
        })
    } else {
        Value::Null
    };
    Ok(json!({
        "weight": w.to_string(),
        "witness_b": w.witness_b(),
        "germ_discrepancy": rat_json(&disc),
        "boundary_weight": rat_json(&wb),
        "log_discrepancy": rat_json(&ld),
        "certificate": cert.map(|c| json!({
            "kind": c.kind.to_string(),
            "predicted": rat_json(&c.predicted),
            "leading_terms": c.leading_terms.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        })),
        "pattern": pattern,
    }))
}

fn germ_weights(file: GermFile, budget: i64) -> Result<Value, CliError> {
    let (germ, boundary) = file.into_germ()?;
    germs::validate_boundary(&germ, &boundary)?;
    let rows = enumerate_admissible_weights(&germ, budget)
        .iter()
        .map(|w| {
            Ok(json!({
                "weight": w.numerators(),
                "witness_b": w.witness_b(),
                "log_discrepancy": rat_json(&germs::log_discrepancy(&germ, &boundary, w)?),
            }))
        })
        .collect::<Result<Vec<Value>, CliError>>()?;
    Ok(json!({ "denominator": germ.order(), "count": rows.len(), "weights": rows }))
}

fn newton(action: NewtonAction) -> Result<Value, CliError> {
    match action {
        NewtonAction::Reduce { file } => {
            let p = read_json::<NewtonFile>(&file)?.into_polytope()?;
            Ok(json!({
                "dim": p.dim(),
                "vertices": p.vertices().iter().map(|v| v.0.clone()).collect::<Vec<_>>(),
            }))
        }
        NewtonAction::Chain { file } => {
            let seq = read_json::<Vec<NewtonFile>>(&file)?
                .into_iter()
                .map(NewtonFile::into_polytope)
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(p) = seq.iter().find(|p| p.dim() != seq[0].dim()) {
                return Err(CliError::Domain(format!(
                    "polytopes of dimensions {} and {} in one sequence",
                    seq[0].dim(),
                    p.dim()
                )));
            }
            let chain = longest_descending_chain(&seq);
            Ok(json!({ "length": chain.len(), "chain": chain }))
        }
    }
}

fn reid_cmd(action: ReidAction) -> Result<(Value, bool), CliError> {
    match action {
        ReidAction::C { r, b, i } => Ok((
            json!({ "r": r, "b": b, "i": i, "c": rat_json(&reid::c_point(r, b, i)?) }),
            false,
        )),
        ReidAction::DeltaCheck { file, r, imax } => {
            let config = read_json::<BasketFile>(&file)?.into_config()?;
            let [p1, p2] = config.points;
            let imax = imax.unwrap_or(2 * p1.r.lcm(&p2.r));
            let rep = reid::verify_delta_identity(&config, r, imax)?;
            Ok((
                json!({
                    "r": r,
                    "imax": imax,
                    "checked": rep.checked,
                    "passed": rep.passed(),
                    "violations": rep.violations,
                }),
                !rep.passed(),
            ))
        }
        ReidAction::Index { file } => {
            let config = read_json::<BasketFile>(&file)?.into_config()?;
            let [p1, p2] = config.points;
            Ok((
                json!({ "index": reid::index_from_basket(p1.r, p1.d, p2.r, p2.d)? }),
                false,
            ))
        }
        ReidAction::Family { r } => {
            let rep = reid::remark_family(r)?;
            let c = rep.config;
            let [p1, p2] = c.points;
            let imax = 2 * p1.r.lcm(&p2.r);
            let delta = reid::verify_delta_identity(&c, r, imax)?;
            let index = reid::index_from_basket(p1.r, p1.d, p2.r, p2.d)?;
            let divisibility = reid::check_divisibility_conclusion(&c, r)?;
            let passed = rep.passed() && delta.passed() && index == r && divisibility;
            let point = |p: &reid::FictitiousPoint| json!({"r": p.r, "b": p.b, "d": p.d, "v": p.v, "f": p.class()});
            Ok((
                json!({
                    "rparam": r,
                    "basket": { "n": c.n, "a": c.a, "b": c.b, "points": [point(&p1), point(&p2)] },
                    "conditions": rep.conditions.iter().map(|c| json!({"name": c.name, "holds": c.holds})).collect::<Vec<_>>(),
                    "delta_identity": { "imax": imax, "passed": delta.passed() },
                    "index": index,
                    "divisibility": divisibility,
                    "passed": passed,
                }),
                !passed,
            ))
        }
    }
}

fn ct_scan(kind: CtKind, k: i64, cap: i64, csv_path: Option<PathBuf>) -> Result<Value, CliError> {
    let entries = thresholds::enumerate_ct_set(kind, k, cap)?;
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["value_num", "value_den", "r1", "r2", "dm"])?;
        for e in &entries {
            w.write_record([
                e.value.numer().to_string(),
                e.value.denom().to_string(),
                e.r1.to_string(),
                e.r2.to_string(),
                e.dm.to_string(),
            ])?;
        }
        w.flush()?;
    }
    let tau = thresholds::accumulation_point(k);
    Ok(json!({
        "k": k,
        "cap": cap,
        "accumulation_point": rat_json(&tau),
        "count": entries.len(),
        "min": entries.first().map(|e| rat_json(&e.value)),
        "values": entries.iter().map(|e| rat_json(&e.value)).collect::<Vec<_>>(),
    }))
}

fn verify_cmd(suite: Option<String>, seed: u64) -> Result<(Value, bool), CliError> {
    let reports = match suite {
        Some(name) => vec![verify::run_suite(&name, seed).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown suite {name:?}; expected one of {}",
                verify::SUITES.join(", ")
            ))
        })?],
        None => verify::run_all(seed),
    };
    let failed = reports.iter().any(|r| !r.passed());
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "suite": r.name,
                "checks": r.checks,
                "status": if r.passed() { "PASS" } else { "FAIL" },
                "failures": r.failures,
            })
        })
        .collect();
    Ok((
        json!({ "seed": seed, "passed": !failed, "suites": rows }),
        failed,
    ))
}
