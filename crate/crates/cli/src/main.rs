//! `quenta`: construct QUENTA codes, re-check identities, reproduce tables,
//! search parameter grids and write asymptotic bound curves.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use quenta::bounds;
use quenta::funcfield::{Curve, EllipticModel, Place};
use quenta::galois::Field;
use quenta::lincode::DEFAULT_BUDGET;
use quenta::quenta::{
    ag_generic, coefficient_grid, elliptic_family, hermitian_construction_rational, hermitian_curve_family,
    rank_results, rational_family, search, QuentaCode, QuentaParams,
};
use quenta::tables;
use quenta::verify::{self, Campaign, Family, Prop};

mod gv;

/// Version of the JSON documents written by this tool.
const SCHEMA: u32 = 1;
const BUDGET_ENV: &str = "QUENTA_BUDGET";
/// Grid searches enumerate less and fall back to witnesses.
const SEARCH_BUDGET: u64 = 1 << 16;

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] quenta::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0} propositions failed")]
    Falsified(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(quenta::Error::Assertion(_)) | CliError::Falsified(_) => 3,
            CliError::Io { .. } => 4,
            CliError::Core(_) | CliError::Usage(_) => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "quenta", version, about = "AG codes and entanglement-assisted quantum codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one code from a family and print its parameters.
    Construct(ConstructArgs),
    /// Run seeded property campaigns.
    Verify(VerifyArgs),
    /// Recompute a parameter table and compare with the printed values.
    Table(TableArgs),
    /// Write the asymptotic rate and entanglement curves as CSV.
    Bounds(BoundsArgs),
    /// Enumerate a family's constraint grid and rank the results.
    Search(SearchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Rational,
    Hermitian,
    Elliptic,
    HermRs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Enumeration budget on q^k (default: $QUENTA_BUDGET or 2^24).
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Curves {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Field order (rational), Hermitian parameter (hermitian, herm-rs).
    #[arg(long)]
    q: Option<u32>,
    /// Elliptic curves live over GF(2^s).
    #[arg(long)]
    s: Option<u32>,
    /// Elliptic model: x3, x3+x, x3+x+1, x3+dx or x3+d.
    #[arg(long)]
    curve: Option<String>,
    /// Elliptic base place P0 as "x,y" element reps.
    #[arg(long)]
    p0: Option<String>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    curves: Curves,
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["A1", "A2"])]
    a: Option<Vec<i64>>,
    #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["B1", "B2"])]
    b: Option<Vec<i64>>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    /// Skip the family constraints and use G1 = A, G2 = B directly.
    #[arg(long)]
    generic: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// Property name; all properties when omitted.
    #[arg(long)]
    prop: Option<String>,
    /// Curve backend: rational, hermitian or elliptic.
    #[arg(long)]
    curve: Option<String>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// 2, 3 or 4.
    id: u8,
    /// Low-weight search rounds for rows with only a bound (default 200 for table 2, else 0).
    #[arg(long)]
    witness_rounds: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = 100)]
    steps: u32,
    /// File holding an expression in `q` and `delta` for the comparison rate.
    #[arg(long)]
    gv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    curves: Curves,
    /// Keep only rows with known Singleton defect at most this.
    #[arg(long)]
    max_defect: Option<i64>,
    /// Print at most this many rows.
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long, default_value_t = 20)]
    witness_rounds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Table(a) => table(a),
        Command::Bounds(a) => bounds_cmd(a),
        Command::Search(a) => search_cmd(a),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn budget(flag: Option<u64>, fallback: u64) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(fallback),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --family {family}")))
}

fn pair(v: &Option<Vec<i64>>, flag: &str) -> Result<(i64, i64)> {
    match v.as_deref() {
        Some([x, y]) => Ok((*x, *y)),
        _ => Err(CliError::Usage(format!("--{flag} takes two integers"))),
    }
}

fn parse_place(f: &Field, s: &str) -> Result<Place> {
    let bad = || CliError::Usage(format!("--p0 expects \"x,y\" element reps, got {s:?}"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    let x: u32 = x.trim().parse().map_err(|_| bad())?;
    let y: u32 = y.trim().parse().map_err(|_| bad())?;
    Ok(Place::Affine { x: f.elem(x)?, y: Some(f.elem(y)?) })
}

/// Elliptic curves selected by `--s`, `--curve` and `--p0`.
fn elliptic_curves(c: &Curves) -> Result<Vec<Curve>> {
    let s = need(c.s, "s", "elliptic")?;
    let models = match &c.curve {
        Some(name) => vec![EllipticModel::parse(name)?],
        None => EllipticModel::ALL.to_vec(),
    };
    let mut out = Vec::new();
    for m in models {
        if c.curve.is_none() && m.count_places(s)? < 4 {
            continue;
        }
        let mut curve = m.curve(s)?;
        if let Some(p) = &c.p0 {
            let place = parse_place(curve.field(), p)?;
            curve = curve.with_p0(place)?;
        }
        out.push(curve);
    }
    Ok(out)
}

fn generic_curve(c: &Curves) -> Result<Curve> {
    Ok(match c.family {
        FamilyArg::Rational => Curve::rational(&Field::with_order(need(c.q, "q", "rational")?)?),
        FamilyArg::Hermitian => Curve::hermitian(need(c.q, "q", "hermitian")?)?,
        FamilyArg::Elliptic => elliptic_curves(c)?.remove(0),
        FamilyArg::HermRs => return Err(CliError::Usage("--generic needs a curve family".into())),
    })
}

fn code_document(command: &str, code: &QuentaCode) -> Value {
    let classical: Vec<Value> = code
        .classical
        .iter()
        .map(|c| json!({"n": c.n(), "k": c.k(), "generator": c.generator().to_reps()}))
        .collect();
    json!({"spec": SCHEMA, "command": command, "params": code.params, "classical": classical})
}

fn params_text(p: &QuentaParams) -> String {
    let mut s = format!("{p}  d: {}", p.d_provenance);
    if let Some(d) = p.singleton_defect {
        s.push_str(&format!("  singleton defect {d}"));
    }
    s.push_str(&format!("  entanglement defect {}", p.entanglement_defect));
    for f in p.mismatches() {
        s.push_str(&format!("\n  {} ({}): formula {} vs computed {}", f.quantity, f.source, f.formula, f.computed));
    }
    for n in &p.notes {
        s.push_str(&format!("\n  note: {n}"));
    }
    s.push('\n');
    s
}

fn construct(a: ConstructArgs) -> Result<()> {
    let budget = budget(a.common.budget, DEFAULT_BUDGET)?;
    let c = &a.curves;
    let code = if a.generic {
        let curve = generic_curve(c)?;
        let (g1, g2) = (pair(&a.a, "a")?, pair(&a.b, "b")?);
        ag_generic(&curve, &curve.standard_d(), &curve.two_point(g1.0, g1.1), &curve.two_point(g2.0, g2.1), budget)?
    } else {
        match c.family {
            FamilyArg::Rational => {
                let ((a1, a2), (b1, b2)) = (pair(&a.a, "a")?, pair(&a.b, "b")?);
                rational_family(need(c.q, "q", "rational")?, a1, a2, b1, b2, budget)?
            }
            FamilyArg::Hermitian => {
                let ((a1, a2), (b1, b2)) = (pair(&a.a, "a")?, pair(&a.b, "b")?);
                hermitian_curve_family(need(c.q, "q", "hermitian")?, a1, a2, b1, b2, budget)?
            }
            FamilyArg::Elliptic => {
                let ((a1, a2), (b1, b2)) = (pair(&a.a, "a")?, pair(&a.b, "b")?);
                let curve = elliptic_curves(c)?.remove(0);
                elliptic_family(&curve, a1, a2, b1, b2, budget)?
            }
            FamilyArg::HermRs => hermitian_construction_rational(
                need(c.q, "q", "herm-rs")?,
                need(a.t, "t", "herm-rs")?,
                need(a.r, "r", "herm-rs")?,
                budget,
            )?,
        }
    };
    let text = match a.common.format {
        Format::Json => to_json(&code_document("construct", &code)),
        Format::Text => params_text(&code.params),
    };
    emit(&text, a.common.out.as_ref())
}

fn verify_cmd(a: VerifyArgs) -> Result<()> {
    let props = match &a.prop {
        Some(p) if p != "all" => vec![Prop::parse(p)?],
        _ => Prop::ALL.to_vec(),
    };
    let cfg = Campaign {
        trials: a.trials,
        seed: a.seed,
        family: a.curve.as_deref().map(Family::parse).transpose()?,
        q: a.q,
    };
    let reports = props
        .iter()
        .map(|&p| verify::run(p, &cfg))
        .collect::<quenta::Result<Vec<_>>>()?;
    let text = match a.format {
        Format::Json => to_json(&json!({"spec": SCHEMA, "command": "verify", "seed": a.seed, "reports": reports})),
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&format!("{r}\n"));
                for f in &r.failures {
                    s.push_str(&format!("  counterexample: {f}\n"));
                }
            }
            s
        }
    };
    emit(&text, a.out.as_ref())?;
    let failed = reports.iter().filter(|r| !r.ok()).count();
    if failed > 0 {
        return Err(CliError::Falsified(failed));
    }
    Ok(())
}

fn table(a: TableArgs) -> Result<()> {
    let rows = tables::rows(a.id)?;
    let budget = budget(a.common.budget, DEFAULT_BUDGET)?;
    let rounds = a.witness_rounds.unwrap_or(if a.id == 2 { 200 } else { 0 });
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let reports = rows
        .iter()
        .map(|r| tables::reproduce(r, budget, rounds, &mut rng))
        .collect::<quenta::Result<Vec<_>>>()?;
    let text = match a.common.format {
        Format::Json => to_json(&json!({"spec": SCHEMA, "command": "table", "table": a.id, "seed": a.seed, "rows": reports})),
        Format::Text => {
            let mut s = format!("{:<26} {:<26} {:<13} status\n", "printed", "computed", "d");
            for r in &reports {
                s.push_str(&format!(
                    "{:<26} {:<26} {:<13} {}\n",
                    r.printed.to_string(),
                    r.computed.to_string(),
                    r.computed.d_provenance.to_string(),
                    r.status()
                ));
            }
            s
        }
    };
    emit(&text, a.common.out.as_ref())
}

fn bounds_cmd(a: BoundsArgs) -> Result<()> {
    let grid = bounds::delta_grid(a.q, a.steps)?;
    let rows = match &a.gv {
        Some(path) => {
            let plugin = gv::Plugin::load(path)?;
            bounds::gv_compare(a.q, &grid, Some(|q, d| plugin.rate(q, d)))?
        }
        None => bounds::gv_compare(a.q, &grid, None::<fn(u32, f64) -> quenta::Result<f64>>)?,
    };
    emit(&bounds::to_csv(&rows), a.out.as_ref())
}

fn search_cmd(a: SearchArgs) -> Result<()> {
    let budget = budget(a.common.budget, SEARCH_BUDGET)?;
    let c = &a.curves;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut witness = |mut code: QuentaCode| -> quenta::Result<QuentaCode> {
        code.certify_by_witness(a.witness_rounds, &mut rng)?;
        Ok(code)
    };
    let found = match c.family {
        FamilyArg::Rational => {
            let q = need(c.q, "q", "rational")?;
            search(coefficient_grid(q as i64 - 1), |(a1, a2, b1, b2)| {
                witness(rational_family(q, a1, a2, b1, b2, budget)?)
            })?
        }
        FamilyArg::Hermitian => {
            let q = need(c.q, "q", "hermitian")?;
            search(coefficient_grid((q * q * q) as i64 - 1), |(a1, a2, b1, b2)| {
                witness(hermitian_curve_family(q, a1, a2, b1, b2, budget)?)
            })?
        }
        FamilyArg::Elliptic => {
            let mut all = Vec::new();
            for curve in elliptic_curves(c)? {
                let e = curve.places().len() as i64;
                all.extend(search(coefficient_grid(e - 2), |(a1, a2, b1, b2)| {
                    witness(elliptic_family(&curve, a1, a2, b1, b2, budget)?)
                })?);
            }
            rank_results(all)
        }
        FamilyArg::HermRs => {
            let q = need(c.q, "q", "herm-rs")?;
            let grid = (0..q).flat_map(|t| (0..q).map(move |r| (t, r)));
            search(grid, |(t, r)| witness(hermitian_construction_rational(q, t, r, budget)?))?
        }
    };
    if found.is_empty() {
        return Err(CliError::Usage("the constraint grid is empty".into()));
    }
    let mut kept: Vec<QuentaParams> = found
        .into_iter()
        .filter(|p| a.max_defect.is_none_or(|m| p.singleton_defect.is_some_and(|d| d <= m)))
        .collect();
    if let Some(l) = a.limit {
        kept.truncate(l);
    }
    let text = match a.common.format {
        Format::Json => to_json(&json!({"spec": SCHEMA, "command": "search", "seed": a.seed, "results": kept})),
        Format::Text => kept.iter().map(params_text).collect(),
    };
    emit(&text, a.common.out.as_ref())
}
