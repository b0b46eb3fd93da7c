//! `weil`: load Weil algebras, lift expressions, extract derivatives,
//! decide equivalence modulo an ideal, and run the law suites.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use num_traits::One;
use weilkit::harness::{self, Config};
use weilkit::prolong::{equiv_mod, parse_map, parse_scalar, taylor_lift, EquivWitness, SmoothMap};
use weilkit::weil::{WeilAlgebra, WeilElement, WeilPresentation};
use weilkit::{LiftError, ProbeError, Scalar, WeilError, Q};

const MAX_ORDER: u32 = 12;

#[derive(Parser)]
#[command(name = "weil", version, about = "Weil algebras and jet lifting of smooth maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a presentation file and print its quotient basis.
    Check { file: PathBuf },
    /// Lift an expression through a Weil algebra at a base point.
    Lift {
        /// Presentation file or preset (real, dual, d2, jetK).
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        expr: String,
        /// Comma-separated rationals, one per input.
        #[arg(long)]
        at: String,
    },
    /// Derivatives f, f', ..., f^(k) of a one-variable expression.
    Derive {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Decide whether f and g agree modulo the ideal of the algebra.
    Equiv {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Run the configured suites and write a report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Re-run one case, given as `check:case_seed`.
        #[arg(long)]
        replay: Option<String>,
    },
}

/// Outcome classes, mapped to exit codes.
enum Fail {
    /// A property failed or a counterexample was found.
    Property(String),
    /// Usage, parse or configuration error.
    Usage(String),
    /// Input parsed but was rejected.
    Semantic(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Property(_) => 1,
            Fail::Usage(_) => 2,
            Fail::Semantic(_) => 3,
        }
    }
}

impl fmt::Display for Fail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fail::Property(m) | Fail::Usage(m) | Fail::Semantic(m) => f.write_str(m),
        }
    }
}

impl From<WeilError> for Fail {
    fn from(e: WeilError) -> Fail {
        match e {
            WeilError::ImproperIdeal(_)
            | WeilError::ZeroNilpotency
            | WeilError::DuplicateVariable(_)
            | WeilError::BasePointViolation { .. }
            | WeilError::IdealViolation { .. }
            | WeilError::NotInvertible => Fail::Semantic(e.to_string()),
            _ => Fail::Usage(e.to_string()),
        }
    }
}

impl From<LiftError> for Fail {
    fn from(e: LiftError) -> Fail {
        match e {
            LiftError::Weil(w) => w.into(),
            LiftError::Domain { .. } => Fail::Semantic(e.to_string()),
            _ => Fail::Usage(e.to_string()),
        }
    }
}

impl From<ProbeError> for Fail {
    fn from(e: ProbeError) -> Fail {
        match e {
            ProbeError::Weil(w) => w.into(),
            ProbeError::Lift(l) => l.into(),
            _ => Fail::Usage(e.to_string()),
        }
    }
}

fn load_algebra(spec: &str) -> Result<Arc<WeilAlgebra>, Fail> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(WeilAlgebra::from_presentation(&WeilPresentation::load(path)?)?);
    }
    WeilAlgebra::preset(spec)
        .map_err(|_| Fail::Usage(format!("`{spec}` is neither a presentation file nor a preset")))
}

fn parse_point(text: &str) -> Result<Vec<Q>, Fail> {
    text.split(',').map(|s| parse_scalar(s.trim()).map_err(Fail::from)).collect()
}

fn cmd_check(file: &Path) -> Result<(), Fail> {
    let pres = WeilPresentation::load(file)?;
    let w = WeilAlgebra::from_presentation(&pres)?;
    println!("dimension {}, basis [{}]", w.dimension(), w.basis_display().join(", "));
    println!("nilpotency order {}", w.nilpotency_order());
    Ok(())
}

/// Lift `f` at `a + (x_1, ..., x_n)`, exactly when possible.
fn lift_at<S: Scalar>(f: &SmoothMap, w: &Arc<WeilAlgebra>, at: &[Q]) -> Result<Vec<WeilElement<S>>, LiftError> {
    let point: Vec<WeilElement<S>> = at
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let c = WeilElement::constant(w, S::from_rational(a));
            if i < w.nvars() {
                c.add(&WeilElement::variable(w, i)).expect("same algebra")
            } else {
                c
            }
        })
        .collect();
    taylor_lift(f, w, &point)
}

fn print_lift<S: Scalar>(values: &[WeilElement<S>]) {
    for (i, v) in values.iter().enumerate() {
        println!("f{i} = {v}");
    }
}

fn cmd_lift(algebra: &str, expr: &str, at: &str) -> Result<(), Fail> {
    let w = load_algebra(algebra)?;
    let at = parse_point(at)?;
    let f = parse_map(expr, Some(at.len()))?;
    match lift_at::<Q>(&f, &w, &at) {
        Ok(v) => print_lift(&v),
        Err(LiftError::Inexact { .. }) => print_lift(&lift_at::<f64>(&f, &w, &at)?),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn derivative_rows<S: Scalar>(f: &SmoothMap, order: u32, at: &Q) -> Result<Vec<String>, LiftError> {
    let w = WeilAlgebra::jet(order);
    let jet = lift_at::<S>(f, &w, std::slice::from_ref(at))?.remove(0);
    let mut factorial = Q::one();
    let mut rows = Vec::new();
    for (j, c) in jet.coords().iter().enumerate() {
        if j > 0 {
            factorial *= Q::from_integer((j as i64).into());
        }
        rows.push(c.times(&S::from_rational(&factorial)).render());
    }
    Ok(rows)
}

fn cmd_derive(order: u32, expr: &str, at: &str) -> Result<(), Fail> {
    if order > MAX_ORDER {
        return Err(Fail::Usage(format!("order {order} exceeds the maximum of {MAX_ORDER}")));
    }
    let at = parse_scalar(at.trim())?;
    let f = parse_map(expr, Some(1))?;
    let rows = match derivative_rows::<Q>(&f, order, &at) {
        Err(LiftError::Inexact { .. }) => derivative_rows::<f64>(&f, order, &at)?,
        other => other?,
    };
    for (j, r) in rows.iter().enumerate() {
        println!("{j}\t{}", r.strip_suffix("/1").unwrap_or(r));
    }
    Ok(())
}

fn report_equiv<S: Scalar>(w: Option<EquivWitness<S>>) -> Result<(), Fail> {
    match w {
        None => {
            println!("equivalent");
            Ok(())
        }
        Some(w) => {
            let why = if w.base_point_differs { " (base points differ)" } else { "" };
            println!("not equivalent: component {} differs by {}{why}", w.component, w.difference);
            Err(Fail::Property(String::new()))
        }
    }
}

fn cmd_equiv(algebra: &str, f: &str, g: &str) -> Result<(), Fail> {
    let w = load_algebra(algebra)?;
    let f = parse_map(f, Some(w.nvars()))?;
    let g = parse_map(g, Some(w.nvars()))?;
    match equiv_mod::<Q>(&f, &g, &w) {
        Ok(r) => report_equiv(r),
        Err(LiftError::Inexact { .. }) => report_equiv(equiv_mod::<f64>(&f, &g, &w)?),
        Err(e) => Err(e.into()),
    }
}

fn cmd_verify(config: &Path, out: Option<&Path>, seed: Option<u64>, replay: Option<&str>) -> Result<(), Fail> {
    let mut cfg = Config::load(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(spec) = replay {
        let (name, case_seed) = spec
            .rsplit_once(':')
            .and_then(|(n, s)| Some((n, s.parse::<u64>().ok()?)))
            .ok_or_else(|| Fail::Usage(format!("--replay expects `check:case_seed`, got `{spec}`")))?;
        let report = harness::replay(&cfg, name, case_seed)?;
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        println!("{text}");
        return if report.passed() { Ok(()) } else { Err(Fail::Property(String::new())) };
    }
    let out = out.ok_or_else(|| Fail::Usage("verify needs --out unless --replay is given".into()))?;
    let report = harness::run_suite(&cfg)?;
    std::fs::write(out, report.to_json()).map_err(|e| Fail::Usage(format!("{}: {e}", out.display())))?;
    for s in &report.suites {
        let status = if s.passed() { "ok" } else { "FAILED" };
        let extra = match (&s.outcome, s.skipped) {
            (Some(o), 0) => format!(" [{o}]"),
            (Some(o), k) => format!(" [{o}, {k} inconclusive]"),
            (None, 0) => String::new(),
            (None, k) => format!(" [{k} inconclusive]"),
        };
        println!("{:<18} {status:<6} {} cases, {} failures{extra}", s.name, s.cases, s.failures);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Fail::Property(format!("{} failures; see {}", report.failures(), out.display())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { file } => cmd_check(file),
        Command::Lift { algebra, expr, at } => cmd_lift(algebra, expr, at),
        Command::Derive { order, expr, at } => cmd_derive(*order, expr, at),
        Command::Equiv { algebra, f, g } => cmd_equiv(algebra, f, g),
        Command::Verify { config, out, seed, replay } => {
            cmd_verify(config, out.as_deref(), *seed, replay.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string();
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.code())
        }
    }
}
