//! `cubelin` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 anomaly (rank-bound
//! violation, failed Keller inversion, or any harness anomaly).

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};

use crate::druzkowski::rank_bound_certificate;
use crate::examples::{builtin_example, BUILTIN_NAMES};
use crate::inversion::{decide_automorphism_with_bound, default_degree_bound, is_keller, InverseResult};
use crate::io::{matrix_to_json, parse_matrix};
use crate::linalg::ScalarMatrix;
use crate::pairing::{corollary_pipeline, gz_reduce, CorollaryReport, GZPair};
use crate::search::{run_search_with_records, SearchConfig, SearchReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_ANOMALY: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cubelin", version, about = "Exact analysis and inversion of cubic-linear maps X + (AX)^3")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank-bound certificate for a matrix.
    Verify {
        /// Inline JSON, a built-in example name, or a file path.
        matrix: String,
    },
    /// Decide invertibility and print the exact inverse.
    Invert {
        matrix: String,
        /// Degree cutoff for the formal inverse (default 3^(n-1)).
        #[arg(long)]
        degree_bound: Option<u32>,
    },
    /// Reduce to the paired cubic map in dimension rank(A).
    Reduce { matrix: String },
    /// Run the nonzero-diagonal, n <= 9 inversion pipeline.
    Corollary { matrix: String },
    /// Run an enumeration / sampling search from a JSON config file.
    Search {
        config: String,
        /// Worker threads (overrides the config).
        #[arg(long)]
        workers: Option<usize>,
        /// Emit one JSON line per candidate before the summary.
        #[arg(long)]
        records: bool,
    },
    /// Print a built-in matrix.
    Example { name: String },
}

/// Parses `args` (including the program name) and runs the command,
/// writing to the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = if code == EXIT_OK { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
    }
}

/// Inline JSON if it starts with `[`, then a built-in name, then a path.
pub fn load_matrix(arg: &str) -> Result<ScalarMatrix, String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('[') {
        return parse_matrix(trimmed).map_err(|e| e.to_string());
    }
    if BUILTIN_NAMES.contains(&arg) {
        return builtin_example(arg).map_err(|e| e.to_string());
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(format!(
            "{arg:?} is neither inline JSON, a built-in example ({}), nor an existing file",
            BUILTIN_NAMES.join(", ")
        ));
    }
    let text = std::fs::read_to_string(path).map_err(|e| format!("reading {arg}: {e}"))?;
    parse_matrix(&text).map_err(|e| format!("{arg}: {e}"))
}

fn load_square(arg: &str) -> Result<ScalarMatrix, String> {
    let m = load_matrix(arg)?;
    if !m.is_square() || m.rows() == 0 {
        return Err(format!("expected a nonempty square matrix, got {}x{}", m.rows(), m.cols()));
    }
    Ok(m)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let json = cli.json;
    let io = |e: std::io::Error| e.to_string();
    match cli.command {
        Command::Example { name } => {
            let m = builtin_example(&name).map_err(|e| e.to_string())?;
            writeln!(out, "{}", matrix_to_json(&m)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Verify { matrix } => {
            let a = load_square(&matrix)?;
            let cert = rank_bound_certificate(&a).map_err(|e| e.to_string())?;
            if json {
                writeln!(out, "{}", to_json(&cert)).map_err(io)?;
            } else {
                let n = a.rows();
                writeln!(out, "n = {n}, rank = {}, delta = {}", cert.rank, cert.delta).map_err(io)?;
                writeln!(
                    out,
                    "trace condition (A^t D A = 0): {}",
                    if cert.trace_condition_holds { "holds" } else { "fails" }
                )
                .map_err(io)?;
                if cert.trace_condition_holds {
                    writeln!(
                        out,
                        "rank bound: 2*rank = {} <= n + delta = {}{}",
                        2 * cert.rank,
                        cert.bound_times_two,
                        if cert.is_tight() { " (tight)" } else { "" }
                    )
                    .map_err(io)?;
                }
                writeln!(
                    out,
                    "theorem satisfied: {}",
                    match (cert.theorem_satisfied, cert.trace_condition_holds) {
                        (true, true) => "yes",
                        (true, false) => "yes (vacuous)",
                        (false, _) => "NO",
                    }
                )
                .map_err(io)?;
            }
            if cert.theorem_satisfied {
                Ok(EXIT_OK)
            } else {
                writeln!(err, "ANOMALY: rank bound violated for {}", matrix_to_json(&a)).map_err(io)?;
                Ok(EXIT_ANOMALY)
            }
        }
        Command::Invert { matrix, degree_bound } => {
            let a = load_square(&matrix)?;
            let keller = is_keller(&a);
            let bound = degree_bound.unwrap_or_else(|| default_degree_bound(a.rows()));
            let result = decide_automorphism_with_bound(&a, bound);
            write_inverse(out, &result, json).map_err(io)?;
            if keller && !result.is_invertible() && bound >= default_degree_bound(a.rows()) {
                writeln!(err, "ANOMALY: Keller map not inverted within degree {bound}").map_err(io)?;
                return Ok(EXIT_ANOMALY);
            }
            Ok(EXIT_OK)
        }
        Command::Reduce { matrix } => {
            let a = load_square(&matrix)?;
            let pair = gz_reduce(&a).map_err(|e| e.to_string())?;
            write_pair(out, &pair, json).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Corollary { matrix } => {
            let a = load_square(&matrix)?;
            let report = corollary_pipeline(&a).map_err(|e| e.to_string())?;
            write_corollary(out, &report, json).map_err(io)?;
            if report.is_anomaly() {
                writeln!(err, "ANOMALY: {}", report.anomaly.as_deref().unwrap_or("pipeline failure")).map_err(io)?;
                return Ok(EXIT_ANOMALY);
            }
            Ok(EXIT_OK)
        }
        Command::Search { config, workers, records } => {
            let text = std::fs::read_to_string(&config).map_err(|e| format!("reading {config}: {e}"))?;
            let mut cfg = SearchConfig::from_json(&text).map_err(|e| format!("{config}: {e}"))?;
            if let Some(w) = workers {
                cfg.workers = w;
                cfg.validate().map_err(|e| e.to_string())?;
            }
            let report = run_search_with_records(&cfg, records).map_err(|e| e.to_string())?;
            write_search(out, &report, json || records).map_err(io)?;
            if report.has_anomalies() {
                writeln!(err, "ANOMALY: {} anomalous candidate(s)", report.anomalies.len()).map_err(io)?;
                return Ok(EXIT_ANOMALY);
            }
            Ok(EXIT_OK)
        }
    }
}

fn write_map_lines(out: &mut dyn Write, label: &str, map: &crate::poly::PolyMap) -> std::io::Result<()> {
    for (i, p) in map.components().iter().enumerate() {
        writeln!(out, "  {label}{} = {p}", i + 1)?;
    }
    Ok(())
}

fn write_inverse(out: &mut dyn Write, result: &InverseResult, json: bool) -> std::io::Result<()> {
    if json {
        return writeln!(out, "{}", to_json(result));
    }
    writeln!(out, "status: {:?}", result.status)?;
    writeln!(out, "degree bound used: {}", result.degree_bound_used)?;
    if let (Some(deg), Some(inv)) = (result.inverse_degree, &result.inverse) {
        writeln!(out, "inverse degree: {deg}")?;
        write_map_lines(out, "G", inv)?;
    }
    Ok(())
}

fn write_pair(out: &mut dyn Write, pair: &GZPair, json: bool) -> std::io::Result<()> {
    if json {
        return writeln!(out, "{}", to_json(pair));
    }
    writeln!(out, "rank: {}", pair.rank)?;
    writeln!(out, "B = {}", matrix_to_json(&pair.b))?;
    writeln!(out, "C = {}", matrix_to_json(&pair.c))?;
    writeln!(out, "G (variables x1..x{}):", pair.rank)?;
    write_map_lines(out, "G", &pair.g)
}

fn write_corollary(out: &mut dyn Write, r: &CorollaryReport, json: bool) -> std::io::Result<()> {
    if json {
        return writeln!(out, "{}", to_json(r));
    }
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    writeln!(out, "n: {}", r.n)?;
    writeln!(out, "outcome: {}", to_json(&r.outcome).trim_matches('"'))?;
    writeln!(out, "nonzero diagonal: {}", r.diag_nonzero)?;
    writeln!(out, "keller: {}", opt(r.keller.map(|k| k.to_string())))?;
    writeln!(out, "rank: {}", opt(r.rank.map(|k| k.to_string())))?;
    writeln!(out, "reduced map inverse degree: {}", opt(r.g_inverse_degree.map(|k| k.to_string())))?;
    writeln!(out, "lifted inverse degree: {}", opt(r.f_inverse_degree.map(|k| k.to_string())))?;
    writeln!(out, "verified: {}", r.verified)?;
    if let Some(a) = &r.anomaly {
        writeln!(out, "anomaly: {a}")?;
    }
    Ok(())
}

fn write_search(out: &mut dyn Write, report: &SearchReport, json: bool) -> std::io::Result<()> {
    if json {
        out.write_all(report.records_jsonl().as_bytes())?;
        return writeln!(out, "{}", report.summary_json());
    }
    let t = &report.totals;
    writeln!(out, "candidates: {}", t.candidates)?;
    writeln!(out, "trace condition: {}", t.trace_zero)?;
    if t.keller_evaluated > 0 {
        writeln!(out, "keller: {} of {}", t.keller, t.keller_evaluated)?;
    }
    writeln!(out, "passed filters: {}", t.passed_filters)?;
    if t.rank_bound_checked > 0 {
        writeln!(out, "rank bound checked: {} (tight: {})", t.rank_bound_checked, t.rank_bound_tight)?;
    }
    if t.invert_attempted > 0 {
        writeln!(out, "invertible: {}, not invertible: {}", t.invertible, t.not_invertible)?;
    }
    if t.corollary_attempted > 0 {
        writeln!(
            out,
            "corollary: verified {}, zero diagonal {}, not keller {}, anomalies {}",
            t.corollary_verified, t.corollary_diagonal_has_zero, t.corollary_not_keller, t.corollary_anomaly
        )?;
    }
    writeln!(out, "anomalies: {}", report.anomalies.len())?;
    for a in &report.anomalies {
        writeln!(out, "  #{} {} {:?}", a.index, matrix_to_json(&a.matrix), a.anomaly_kinds)?;
    }
    writeln!(out, "duration: {} ms", report.duration_ms)
}
