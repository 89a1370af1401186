//! Command-line front end: parse presentation files, run the
//! side-confluence / extra-condition checks, compute normal forms and
//! Koszul data, and verify the contracting homotopy.
//!
//! Exit codes: 0 = property holds / all cells pass; 1 = property fails;
//! 2 = usage, input, or undetermined-at-k-max errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use koszulkit::error::KoszulError;
use koszulkit::expr::parse_poly;
use koszulkit::koszul::KoszulEngine;
use koszulkit::presentation::Presentation;
use koszulkit::word::Alphabet;

const DEFAULT_K_MAX: usize = 64;

#[derive(Debug, Deserialize)]
struct PresentationFile {
    field: String,
    generators: Vec<String>,
    #[serde(rename = "N")]
    n: usize,
    relations: Vec<String>,
}

#[derive(Parser)]
#[command(
    name = "koszulkit",
    about = "Confluence, Koszul complexes, and contracting homotopies \
             for N-homogeneous algebras over the rationals",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Presentation file (JSON).
    file: PathBuf,
    /// Cap on the confluence exponent search
    /// (default: KOSZULKIT_KMAX or 64).
    #[arg(long)]
    k_max: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide side-confluence and the extra-condition.
    Check {
        #[command(flatten)]
        common: CommonArgs,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Normal form of a relation-grammar expression.
    Nf {
        #[command(flatten)]
        common: CommonArgs,
        /// Expression, e.g. "x2*x2*x1*x1 - 2*x1*x2*x1*x2".
        expr: String,
    },
    /// Dimensions (and small bases) of the Koszul spaces J_n.
    Jn {
        #[command(flatten)]
        common: CommonArgs,
        /// Largest homological degree to report.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Verify the contracting homotopy cell by cell.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Largest total degree (default 2N+3).
        #[arg(long)]
        max_degree: Option<usize>,
        /// Largest homological degree (default: first n with J_n = 0).
        #[arg(long)]
        max_n: Option<usize>,
        /// Worker threads for the per-cell checks.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Emit the full report as JSON on stdout.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to a file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the critical branchings of the presentation.
    Branchings {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Dump the reduction pair and left-bound operator of one bidegree.
    Opdump {
        #[command(flatten)]
        common: CommonArgs,
        /// Homological degree.
        #[arg(long)]
        n: usize,
        /// Total degree.
        #[arg(long)]
        m: usize,
    },
}

fn effective_k_max(flag: Option<usize>) -> Result<usize, String> {
    if let Some(k) = flag {
        return Ok(k);
    }
    match std::env::var("KOSZULKIT_KMAX") {
        Ok(v) => v
            .parse::<usize>()
            .map_err(|_| format!("KOSZULKIT_KMAX must be an integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_K_MAX),
    }
}

fn load_presentation(path: &PathBuf) -> Result<Presentation, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let pf: PresentationFile = serde_json::from_str(&text)
        .map_err(|e| format!("{}: invalid presentation file: {e}", path.display()))?;
    if pf.field != "rational" {
        return Err(format!(
            "{}: unsupported field `{}` (only \"rational\")",
            path.display(),
            pf.field
        ));
    }
    let alphabet = Alphabet::new(pf.generators.iter().map(String::as_str).collect())
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let mut relations = Vec::new();
    for (i, r) in pf.relations.iter().enumerate() {
        let poly = parse_poly(&alphabet, r).map_err(|e| match e {
            KoszulError::Parse { col, msg } => format!(
                "{}: relation {}, column {col}: {msg}",
                path.display(),
                i + 1
            ),
            other => format!("{}: relation {}: {other}", path.display(), i + 1),
        })?;
        relations.push(poly);
    }
    Presentation::load_and_interreduce(alphabet, pf.n, relations)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn input_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn map_engine_error(e: &KoszulError) -> String {
    match e {
        KoszulError::UndeterminedAtKMax { k_max } => format!(
            "confluence undetermined at k_max = {k_max}; try raising --k-max"
        ),
        other => other.to_string(),
    }
}

fn cmd_check(common: &CommonArgs, json: bool) -> ExitCode {
    let p = match load_presentation(&common.file) {
        Ok(p) => p,
        Err(e) => return input_error(&e),
    };
    let k_max = match effective_k_max(common.k_max) {
        Ok(k) => k,
        Err(e) => return input_error(&e),
    };
    let report = match p.check_side_confluence(k_max) {
        Ok(r) => r,
        Err(e) => return input_error(&map_engine_error(&e)),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        if report.side_confluent {
            let ks: Vec<String> = report
                .witnesses
                .iter()
                .map(|(deg, k)| format!("k={k} @deg{deg}"))
                .collect();
            if ks.is_empty() {
                println!("side-confluent (no internal degrees to check)");
            } else {
                println!("side-confluent ({})", ks.join(", "));
            }
        } else {
            println!(
                "NOT side-confluent (fails at degree {})",
                report.failing_degree.unwrap()
            );
        }
        println!(
            "extra-condition: {}",
            if report.extra_condition { "HOLDS" } else { "FAILS" }
        );
        let branchings = p.critical_branchings();
        println!("critical branchings: {}", branchings.len());
        for b in &branchings {
            println!("  source {}", p.alphabet().format_word(&b.source()));
        }
    }
    if report.side_confluent && report.extra_condition {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_nf(common: &CommonArgs, expr: &str) -> ExitCode {
    let p = match load_presentation(&common.file) {
        Ok(p) => p,
        Err(e) => return input_error(&e),
    };
    let poly = match parse_poly(p.alphabet(), expr) {
        Ok(f) => f,
        Err(KoszulError::Parse { col, msg }) => {
            return input_error(&format!("expression column {col}: {msg}"))
        }
        Err(e) => return input_error(&e.to_string()),
    };
    println!("{}", p.alphabet().format_poly(&p.normal_form(&poly)));
    ExitCode::SUCCESS
}

fn cmd_jn(common: &CommonArgs, max_n: Option<usize>) -> ExitCode {
    let p = match load_presentation(&common.file) {
        Ok(p) => p,
        Err(e) => return input_error(&e),
    };
    let k_max = match effective_k_max(common.k_max) {
        Ok(k) => k,
        Err(e) => return input_error(&e),
    };
    let eng = KoszulEngine::new(&p, k_max);
    let n_max = max_n.unwrap_or_else(|| eng.suggested_n_max(2 * p.n() + 3));
    for n in 0..=n_max {
        let j = eng.j_space(n);
        let mut line = format!("J_{n}: dim {} (degree {})", j.dim(), eng.l(n));
        if j.dim() > 0 && j.dim() <= 4 && eng.l(n) > 0 {
            let basis: Vec<String> = j
                .basis()
                .iter()
                .map(|b| p.alphabet().format_poly(b))
                .collect();
            line.push_str(&format!("  basis: {}", basis.join(" ; ")));
        }
        println!("{line}");
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    presentation: String,
    confluence: &'a koszulkit::presentation::ConfluenceReport,
    homotopy: &'a koszulkit::koszul::HomotopyReport,
}

fn cmd_verify(
    common: &CommonArgs,
    max_degree: Option<usize>,
    max_n: Option<usize>,
    jobs: usize,
    json: bool,
    out: Option<&PathBuf>,
) -> ExitCode {
    let p = match load_presentation(&common.file) {
        Ok(p) => p,
        Err(e) => return input_error(&e),
    };
    let k_max = match effective_k_max(common.k_max) {
        Ok(k) => k,
        Err(e) => return input_error(&e),
    };
    let confluence = match p.check_side_confluence(k_max) {
        Ok(r) => r,
        Err(e) => return input_error(&map_engine_error(&e)),
    };
    if !confluence.side_confluent {
        return input_error(&format!(
            "presentation is not side-confluent (degree {}); the homotopy is undefined",
            confluence.failing_degree.unwrap()
        ));
    }
    let eng = KoszulEngine::new(&p, k_max);
    let m_max = max_degree.unwrap_or(2 * p.n() + 3);
    let n_max = max_n.unwrap_or_else(|| eng.suggested_n_max(m_max));
    let report = match eng.verify_homotopy(n_max, m_max, jobs.max(1)) {
        Ok(r) => r,
        Err(e) => return input_error(&map_engine_error(&e)),
    };
    let combined = VerifyReport {
        presentation: common.file.display().to_string(),
        confluence: &confluence,
        homotopy: &report,
    };
    let json_text = serde_json::to_string_pretty(&combined).unwrap();
    if let Some(path) = out {
        if let Err(e) = std::fs::write(path, &json_text) {
            return input_error(&format!("cannot write {}: {e}", path.display()));
        }
    }
    if json {
        println!("{json_text}");
    } else {
        println!("homotopy check, n <= {n_max}, degree <= {m_max}");
        for cell in &report.cells {
            println!(
                "  n={} m={} dim={:4}  {}",
                cell.n,
                cell.m,
                cell.dim,
                if cell.pass { "pass" } else { "FAIL" }
            );
            if let Some(w) = &cell.witness {
                println!("      fails on {}", w.basis_label);
            }
        }
        println!("overall: {}", if report.all_pass { "pass" } else { "FAIL" });
    }
    if report.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_branchings(common: &CommonArgs) -> ExitCode {
    let p = match load_presentation(&common.file) {
        Ok(p) => p,
        Err(e) => return input_error(&e),
    };
    let ab = p.alphabet();
    let branchings = p.critical_branchings();
    if branchings.is_empty() {
        println!("no critical branchings");
        return ExitCode::SUCCESS;
    }
    for b in &branchings {
        println!(
            "({}, {}, {}) source {} relations ({}, {})",
            ab.format_word(&b.w1),
            ab.format_word(&b.w2),
            ab.format_word(&b.w3),
            ab.format_word(&b.source()),
            b.f + 1,
            b.g + 1
        );
    }
    ExitCode::SUCCESS
}

fn cmd_opdump(common: &CommonArgs, n: usize, m: usize) -> ExitCode {
    let p = match load_presentation(&common.file) {
        Ok(p) => p,
        Err(e) => return input_error(&e),
    };
    let k_max = match effective_k_max(common.k_max) {
        Ok(k) => k,
        Err(e) => return input_error(&e),
    };
    let eng = KoszulEngine::new(&p, k_max);
    let pair = match eng.reduction_pair(n, m) {
        Ok(pr) => pr,
        Err(e) => return input_error(&map_engine_error(&e)),
    };
    let ab = p.alphabet();
    println!("reduction pair ({n},{m}); confluence witness k = {}", pair.witness.k);
    for (name, op) in [("F1", &pair.f1), ("F2", &pair.f2)] {
        let rows = op.nontrivial_rows();
        println!("{name}: {} nontrivial rows", rows.len());
        for (w, img) in rows {
            println!("  {} -> {}", ab.format_word(&w), ab.format_poly(&img));
        }
    }
    match eng.left_bound(n, m) {
        Ok(h) => {
            let src = eng.cell_basis(n, m);
            let tgt = eng.cell_basis(n + 1, m);
            println!("h'_{n}: {} -> {} (dims {} -> {})", m, m, h.source_dim, h.target_dim);
            for (j, col) in h.columns.iter().enumerate() {
                let terms: Vec<String> = col
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !num::Zero::is_zero(*c))
                    .map(|(i, c)| format!("{c}·[{}]", tgt.labels[i]))
                    .collect();
                println!(
                    "  {} -> {}",
                    src.labels[j],
                    if terms.is_empty() {
                        "0".to_string()
                    } else {
                        terms.join(" + ")
                    }
                );
            }
        }
        Err(e) => return input_error(&map_engine_error(&e)),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Check { common, json } => cmd_check(common, *json),
        Command::Nf { common, expr } => cmd_nf(common, expr),
        Command::Jn { common, max_n } => cmd_jn(common, *max_n),
        Command::Verify {
            common,
            max_degree,
            max_n,
            jobs,
            json,
            out,
        } => cmd_verify(common, *max_degree, *max_n, *jobs, *json, out.as_ref()),
        Command::Branchings { common } => cmd_branchings(common),
        Command::Opdump { common, n, m } => cmd_opdump(common, *n, *m),
    }
}
