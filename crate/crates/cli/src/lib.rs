//! Command-line front end for the Wang-sequence solver.
//!
//! [`run`] takes the argument vector and returns the exit code with everything
//! that should be written to stdout and stderr, so the binary is a thin shell
//! and tests can drive the whole interface in-process.

pub mod problem;
pub mod report;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use wang_core::extension::{enumerate_extensions, ExtensionProblem};
use wang_core::tables::{self, PAIRING_RANGE, U2_RANGE};
use wang_core::wang::{
    easy_thom_check, solve_homotopy_range, solve_ktheory, Grading, WangError, WangProblem,
};
use wang_core::{smith_normal_form, FgGroup, IntMatrix, LocalizationRing};

use problem::{Loaded, SchemaError};
use report::{KRecords, Record, Report};

/// Everything a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Schema(#[from] SchemaError),
    #[error("{flag}: {message}")]
    Flag { flag: &'static str, message: String },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            _ => 2,
        }
    }
}

fn flag(flag: &'static str, message: impl ToString) -> CliError {
    CliError::Flag {
        flag,
        message: message.to_string(),
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Example {
    /// Homotopy of the sections of S⁷ ×_{S³} M₂ → S⁴.
    #[value(name = "hopf-m2")]
    HopfM2,
    /// K-theory of the same bundle.
    #[value(name = "hopf-m2-ktheory")]
    HopfM2Ktheory,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Table {
    /// π_n(U(2)) with named generators.
    U2,
    /// The Samelson products [ι, −].
    Pairing,
}

#[derive(Parser, Debug)]
#[command(
    name = "wang",
    version,
    about = "Solve Wang exact sequences for bundles of C*-algebras over spheres"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a problem file.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// `all`, or a comma-separated list of primes to invert.
        #[arg(long)]
        localize: Option<String>,
    },
    /// Solve a built-in problem.
    Example {
        #[arg(value_enum)]
        name: Example,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        localize: Option<String>,
    },
    /// Smith normal form U·A·V = D of an integer matrix such as [[2,4],[6,8]].
    Snf {
        #[arg(long)]
        matrix: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Every middle group G of 0 → SUB → G → QUOT → 0.
    Ext {
        /// Group literal: `rank,[d1,d2,…]` or a rendered form such as `ℤ ⊕ ℤ/2`.
        #[arg(long)]
        sub: String,
        #[arg(long)]
        quot: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Print built-in tables.
    Tables {
        #[arg(value_enum)]
        which: Table,
        /// Degree range `a..b`, inclusive.
        #[arg(long)]
        range: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Runs one command line; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(text)
                }
                _ => Outcome::fail(2, text),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(stdout) => Outcome::ok(stdout),
        Err(e) => Outcome::fail(e.code(), format!("error: {e}\n")),
    }
}

fn dispatch(command: Command) -> Result<String, CliError> {
    match command {
        Command::Solve {
            input,
            format,
            localize,
        } => {
            let text = std::fs::read_to_string(&input).map_err(|source| CliError::Read {
                path: input.clone(),
                source,
            })?;
            let ring = localize.as_deref().map(parse_localize).transpose()?;
            let loaded = problem::parse(&text)?.build(ring)?;
            Ok(render(&solve(&loaded)?, format))
        }
        Command::Example {
            name,
            format,
            localize,
        } => {
            let builtin = match name {
                Example::HopfM2 => problem::HOPF_BUILTIN,
                Example::HopfM2Ktheory => problem::HOPF_KTHEORY_BUILTIN,
            };
            let mut loaded = problem::builtin_problem(builtin)?;
            if let Some(l) = localize.as_deref() {
                loaded.problem = loaded.problem.with_localization(parse_localize(l)?);
            }
            Ok(render(&solve(&loaded)?, format))
        }
        Command::Snf { matrix, format } => snf(&matrix, format),
        Command::Ext { sub, quot, format } => ext(&sub, &quot, format),
        Command::Tables {
            which,
            range,
            format,
        } => tables_command(which, range.as_deref(), format),
    }
}

fn parse_localize(text: &str) -> Result<LocalizationRing, CliError> {
    let text = text.trim();
    if text == "all" {
        return Ok(LocalizationRing::rationals());
    }
    let primes = text
        .split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| {
            flag(
                "--localize",
                format!("expected \"all\" or primes like \"2,3\": {e}"),
            )
        })?;
    LocalizationRing::inverting(primes).map_err(|e| flag("--localize", e))
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Table => report.to_table(),
        Format::Json => report.to_json(),
    }
}

fn internal(e: WangError) -> CliError {
    CliError::Internal(e.to_string())
}

/// Solves a validated problem and assembles its report.
pub fn solve_report(loaded: &Loaded) -> Result<Report, String> {
    solve(loaded).map_err(|e| e.to_string())
}

fn solve(loaded: &Loaded) -> Result<Report, CliError> {
    let p = &loaded.problem;
    let mut report = Report {
        kind: p.grading().to_string(),
        k: p.k(),
        localization: p.localization().to_string(),
        degrees: Vec::new(),
        ktheory: None,
        notes: loaded.provenance.clone(),
    };
    match p.grading() {
        Grading::Homotopy => {
            let results = solve_homotopy_range(p).map_err(internal)?;
            report.degrees = results.iter().map(Record::from).collect();
        }
        Grading::KTheory => {
            let solved = solve_ktheory(p).map_err(internal)?;
            report.ktheory = Some(KRecords {
                k0: Record::from(&solved.k0),
                k1: Record::from(&solved.k1),
            });
            report.notes.extend(ktheory_notes(p)?);
        }
    }
    Ok(report)
}

fn ktheory_notes(p: &WangProblem) -> Result<Vec<String>, CliError> {
    let mut notes = Vec::new();
    let Some(check) = easy_thom_check(p).map_err(internal)? else {
        return Ok(notes);
    };
    let k0 = &check.ses.sub;
    notes.push(format!(
        "k = {} is even and K₁(B) = 0, so K₁(A) = 0 and 0 → K₀(B) → K₀(A) → K₀(B) → 0 is exact with K₀(B) = {k0}",
        p.k()
    ));
    if p.k() == 4 && *k0 == FgGroup::free(1) {
        notes.push(
            "discrepancy: for the Hopf bundle S⁷ ×_{S³} M₂ → S⁴ the sequence forces K₀(A) ≅ ℤ²; the published statement K₀(A) ≅ ℤ, K₁(A) = 0 contradicts it and is not reproduced".to_owned(),
        );
    }
    Ok(notes)
}

fn number(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(number).collect()))
            .collect(),
    )
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn snf(text: &str, format: Format) -> Result<String, CliError> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(text).map_err(|e| {
        flag(
            "--matrix",
            format!("expected a JSON list of integer rows: {e}"),
        )
    })?;
    let cols = rows.first().map_or(0, Vec::len);
    let a = IntMatrix::from_rows(&rows, cols)
        .ok_or_else(|| flag("--matrix", "rows differ in length"))?;
    let s = smith_normal_form(&a);
    let factors: Vec<String> = s.invariant_factors.iter().map(BigInt::to_string).collect();
    Ok(match format {
        Format::Table => format!(
            "U = {}\nD = {}\nV = {}\ninvariant factors: {}\n",
            s.u,
            s.d,
            s.v,
            if factors.is_empty() {
                "-".to_owned()
            } else {
                factors.join(", ")
            }
        ),
        Format::Json => pretty(&json!({
            "U": matrix_json(&s.u),
            "D": matrix_json(&s.d),
            "V": matrix_json(&s.v),
            "invariant_factors": s.invariant_factors.iter().map(number).collect::<Vec<_>>(),
        })),
    })
}

fn group_arg(flag_name: &'static str, text: &str) -> Result<FgGroup, CliError> {
    text.parse().map_err(|e| flag(flag_name, e))
}

fn ext(sub: &str, quot: &str, format: Format) -> Result<String, CliError> {
    let p = ExtensionProblem::new(group_arg("--sub", sub)?, group_arg("--quot", quot)?);
    let ans = enumerate_extensions(&p);
    let names: Vec<String> = ans.candidates.iter().map(FgGroup::to_string).collect();
    Ok(match format {
        Format::Table => format!(
            "sub: {}\nquot: {}\ncandidates: {}\nsplit: {}\nforced unique: {}\n",
            p.sub,
            p.quot,
            names.join(" or "),
            ans.split_member,
            if ans.forced_unique { "yes" } else { "no" }
        ),
        Format::Json => pretty(&json!({
            "sub": p.sub.to_string(),
            "quot": p.quot.to_string(),
            "candidates": names,
            "split_member": ans.split_member.to_string(),
            "forced_unique": ans.forced_unique,
        })),
    })
}

fn parse_range(text: Option<&str>, (lo, hi): (i64, i64)) -> Result<(i64, i64), CliError> {
    let Some(text) = text else {
        return Ok((lo, hi));
    };
    let bad = || {
        flag(
            "--range",
            format!("expected a..b within {lo}..{hi}, found {text:?}"),
        )
    };
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| bad())?;
    if a > b || a < lo || b > hi {
        return Err(bad());
    }
    Ok((a, b))
}

fn tables_command(which: Table, range: Option<&str>, format: Format) -> Result<String, CliError> {
    match which {
        Table::U2 => {
            let (a, b) = parse_range(range, U2_RANGE)?;
            let mut rows = Vec::new();
            for n in a..=b {
                let group = tables::u2_homotopy(n).map_err(|e| flag("--range", e))?;
                let gens = tables::u2_generators(n).map_err(|e| flag("--range", e))?;
                let source = tables::u2_source(n).map_err(|e| flag("--range", e))?;
                rows.push((n, group, gens, source));
            }
            Ok(match format {
                Format::Table => {
                    let mut out = String::from("n | π_n(U(2)) | generators | source\n");
                    for (n, g, gens, source) in &rows {
                        let gens: Vec<String> = gens
                            .iter()
                            .map(|x| match x.order {
                                Some(o) => format!("{} (order {o})", x.label),
                                None => format!("{} (order ∞)", x.label),
                            })
                            .collect();
                        let gens = if gens.is_empty() { "-".to_owned() } else { gens.join(", ") };
                        let _ = writeln!(out, "{n} | {g} | {gens} | {source}");
                    }
                    out
                }
                Format::Json => pretty(&Value::Array(
                    rows.iter()
                        .map(|(n, g, gens, source)| {
                            json!({
                                "n": n,
                                "group": g.to_string(),
                                "generators": gens.iter().map(|x| json!({"label": x.label, "order": x.order})).collect::<Vec<_>>(),
                                "source": source,
                            })
                        })
                        .collect(),
                )),
            })
        }
        Table::Pairing => {
            let (a, b) = parse_range(range, PAIRING_RANGE)?;
            let entries: Vec<_> = tables::pairing_table().range(a..=b).collect();
            Ok(match format {
                Format::Table => {
                    let mut out = String::from("n | map | matrix | value | source\n");
                    for (n, e) in &entries {
                        let _ = writeln!(
                            out,
                            "{n} | {} → {} | {} | {} | {}",
                            e.hom.source(),
                            e.hom.target(),
                            e.hom.matrix(),
                            e.value,
                            e.source
                        );
                    }
                    out
                }
                Format::Json => pretty(&Value::Array(
                    entries
                        .iter()
                        .map(|(n, e)| {
                            json!({
                                "n": n,
                                "source_group": e.hom.source().to_string(),
                                "target_group": e.hom.target().to_string(),
                                "matrix": matrix_json(e.hom.matrix()),
                                "value": e.value,
                                "source": e.source,
                            })
                        })
                        .collect(),
                )),
            })
        }
    }
}
