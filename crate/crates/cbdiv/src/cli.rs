//! Command-line surface: batch computation and verification with
//! machine-readable output. Exit codes: 0 success or verified, 1 an
//! identity failed, 2 invalid input or assumptions not applicable.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::duality::{verify_critical_vanishing, verify_divisor_identity, DualityInstance, TheoremOutcome};
use crate::embedding::{make_slrs_embedding, YoungDiagram};
use crate::fusionrank::{rank_block, rank_cache_load_json, rank_cache_to_json, RankQuery};
use crate::liealg::{Family, RootSystem, Weight};
use crate::picm0n::psi_class;
use crate::rational::ratio_to_string;
use crate::{chern, Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cbdiv",
    about = "Exact conformal-block divisor computations on the moduli of stable pointed rational curves",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank of an n-point block.
    Rank {
        /// Algebra, e.g. A1 or A3.
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        level: u64,
        /// Weights as bracketed coordinate lists, e.g. "[1],[1],[1],[1]".
        #[arg(long)]
        weights: String,
    },
    /// First Chern class of a block bundle as a divisor class.
    C1 {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weights: String,
    },
    /// Psi class of a marked point expanded over boundary divisors.
    Psi {
        /// Number of marked points.
        #[arg(long)]
        n: usize,
        /// Marked point, 1-based.
        #[arg(long)]
        point: usize,
    },
    /// Conformal anomaly of an algebra at a level, and trace anomalies of
    /// any weights given.
    Anomaly {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weights: Option<String>,
    },
    /// Branching table of a level-one ambient weight under the
    /// tensor-product embedding.
    Branch {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// The ambient weight, e.g. "[0,1,0]" for r*s = 4.
        #[arg(long)]
        weights: String,
    },
    /// Verify the divisor identity for a tuple of diagrams.
    VerifyTheorem {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// Diagrams as bracketed row lists, e.g. "[1],[1],[1],[1]".
        #[arg(long)]
        diagrams: String,
    },
    /// Verify the critical-level vanishing statement for a tuple of
    /// diagrams with total box count r*s.
    VerifyCorollary {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        diagrams: String,
    },
    /// Run verification over every admissible diagram tuple described by
    /// a JSON config file.
    Sweep {
        config: PathBuf,
    },
}

/// Entry point used by the binary; prints results to stdout, errors to
/// stderr, and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let cache_dir = std::env::var_os("CBDIV_CACHE_DIR").map(PathBuf::from);
    if let Some(dir) = &cache_dir {
        load_cache(dir);
    }
    let code = match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    };
    if let Some(dir) = &cache_dir {
        save_cache(dir);
    }
    code
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Rank {
            algebra,
            level,
            weights,
        } => {
            let rs = parse_algebra(algebra)?;
            let ws = parse_weights(weights, rs.rank())?;
            let q = RankQuery::new(rs, *level, ws).map_err(flag("--weights"))?;
            let rank = rank_block(&q);
            match cli.format {
                Format::Json => println!("{}", serde_json::json!({ "rank": rank })),
                Format::Csv => println!("rank\n{rank}"),
            }
            Ok(EXIT_OK)
        }
        Command::C1 {
            algebra,
            level,
            weights,
        } => {
            let rs = parse_algebra(algebra)?;
            let ws = parse_weights(weights, rs.rank())?;
            let q = chern::ChernQuery::new(rs, *level, ws).map_err(flag("--weights"))?;
            let class = chern::c1_psi_form(&q)?;
            print_class(&class, cli.format);
            Ok(EXIT_OK)
        }
        Command::Psi { n, point } => {
            let class = psi_class(*n, *point).map_err(flag("--point"))?;
            print_class(&class, cli.format);
            Ok(EXIT_OK)
        }
        Command::Anomaly {
            algebra,
            level,
            weights,
        } => {
            let rs = parse_algebra(algebra)?;
            let conformal = ratio_to_string(&rs.conformal_anomaly(*level));
            let mut trace = Vec::new();
            if let Some(ws) = weights {
                for w in parse_weights(ws, rs.rank())? {
                    rs.assert_in_level(&w, *level).map_err(flag("--weights"))?;
                    trace.push(ratio_to_string(&rs.trace_anomaly(*level, &w)?));
                }
            }
            match cli.format {
                Format::Json => {
                    if trace.is_empty() {
                        println!("{}", serde_json::json!({ "conformal": conformal }))
                    } else {
                        println!(
                            "{}",
                            serde_json::json!({ "conformal": conformal, "trace": trace })
                        )
                    }
                }
                Format::Csv => {
                    println!("quantity,value");
                    println!("conformal,{conformal}");
                    for (i, t) in trace.iter().enumerate() {
                        println!("trace[{i}],{t}");
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Branch { r, s, weights } => {
            let e = make_slrs_embedding(*r, *s).map_err(flag("--r/--s"))?;
            let mut ws = parse_weights(weights, e.ambient().rank())?;
            if ws.len() != 1 {
                return Err(Error::InvalidInput(
                    "--weights must carry exactly one ambient weight".into(),
                ));
            }
            let big = ws.pop().unwrap();
            let pairs = e.branch_affine(&big).map_err(flag("--weights"))?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&pairs).unwrap()),
                Format::Csv => {
                    println!("lambda,mu,n_gap");
                    for p in pairs {
                        println!(
                            "{},{},{}",
                            join_coords(p.lambda.coords()),
                            join_coords(p.mu.coords()),
                            p.n_gap
                        );
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::VerifyTheorem { r, s, diagrams } => {
            let e = make_slrs_embedding(*r, *s).map_err(flag("--r/--s"))?;
            let ds = parse_diagrams(diagrams, *r, *s as u64)?;
            if ds.len() < 4 {
                return Err(Error::TooFewPoints(ds.len()));
            }
            let inst = DualityInstance::from_diagrams(e, &ds).map_err(flag("--diagrams"))?;
            let outcome = verify_divisor_identity(&inst)?;
            println!("{}", serde_json::to_string(&outcome).unwrap());
            Ok(match outcome {
                TheoremOutcome::Checked(r) if r.passed => EXIT_OK,
                TheoremOutcome::Checked(_) => EXIT_IDENTITY_FAILED,
                TheoremOutcome::NotApplicable { .. } => EXIT_INVALID,
            })
        }
        Command::VerifyCorollary { r, s, diagrams } => {
            let ds = parse_diagrams(diagrams, *r, *s as u64)?;
            if ds.len() < 4 {
                return Err(Error::TooFewPoints(ds.len()));
            }
            let report = verify_critical_vanishing(*r, *s, &ds).map_err(flag("--diagrams"))?;
            println!("{}", serde_json::to_string(&report).unwrap());
            Ok(if report.passed {
                EXIT_OK
            } else {
                EXIT_IDENTITY_FAILED
            })
        }
        Command::Sweep { config } => {
            let text = std::fs::read_to_string(config)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", config.display())))?;
            let config: SweepConfig = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidInput(format!("malformed sweep config: {e}")))?;
            run_sweep(&config, cli.format)
        }
    }
}

fn flag(name: &'static str) -> impl Fn(Error) -> Error {
    move |e| Error::InvalidInput(format!("{name}: {e}"))
}

fn print_class(class: &crate::picm0n::DivisorClass, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(class).unwrap()),
        Format::Csv => {
            println!("side,value");
            for (idx, v) in class.coeffs() {
                println!(
                    "{},{}",
                    idx.side().iter().map(ToString::to_string).join(" "),
                    ratio_to_string(v)
                );
            }
        }
    }
}

fn join_coords(coords: &[i64]) -> String {
    coords.iter().map(ToString::to_string).join(" ")
}

/// Parses an algebra name such as "A1" or "D4".
pub fn parse_algebra(name: &str) -> Result<RootSystem> {
    let name = name.trim();
    let mut chars = name.chars();
    let family = chars
        .next()
        .ok_or_else(|| Error::InvalidInput("--algebra: empty".into()))
        .and_then(Family::from_char)
        .map_err(flag("--algebra"))?;
    let rank: usize = chars
        .as_str()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("--algebra: malformed rank in {name:?}")))?;
    RootSystem::new(family, rank).map_err(flag("--algebra"))
}

/// Parses "[a,b],[c],..." into coordinate vectors of the given length.
pub fn parse_weights(text: &str, rank: usize) -> Result<Vec<Weight>> {
    let lists = parse_bracket_lists(text)?;
    lists
        .into_iter()
        .map(|coords| {
            if coords.len() != rank {
                return Err(Error::InvalidInput(format!(
                    "--weights: expected {rank} coordinates, got {coords:?}"
                )));
            }
            Weight::new(coords).map_err(flag("--weights"))
        })
        .collect()
}

/// Parses "[2,1],[1],[]" into diagrams bounded by the r x s box.
pub fn parse_diagrams(text: &str, r: usize, s: u64) -> Result<Vec<YoungDiagram>> {
    let lists = parse_bracket_lists(text)?;
    lists
        .into_iter()
        .map(|rows| {
            let rows: Vec<u64> = rows
                .into_iter()
                .map(|v| {
                    u64::try_from(v).map_err(|_| {
                        Error::InvalidInput("--diagrams: negative row length".into())
                    })
                })
                .collect::<Result<_>>()?;
            YoungDiagram::new(rows, r, s).map_err(flag("--diagrams"))
        })
        .collect()
}

fn parse_bracket_lists(text: &str) -> Result<Vec<Vec<i64>>> {
    let bad = |what: &str| Error::InvalidInput(format!("malformed list {text:?}: {what}"));
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if !rest.starts_with('[') {
            return Err(bad("expected '['"));
        }
        let close = rest.find(']').ok_or_else(|| bad("missing ']'"))?;
        let inner = &rest[1..close];
        let mut coords = Vec::new();
        for piece in inner.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            coords.push(
                piece
                    .parse::<i64>()
                    .map_err(|_| bad("non-integer entry"))?,
            );
        }
        out.push(coords);
        rest = rest[close + 1..].trim_start();
        if let Some(stripped) = rest.strip_prefix(',') {
            rest = stripped.trim_start();
        } else if !rest.is_empty() {
            return Err(bad("expected ',' between lists"));
        }
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
pub struct SweepConfig {
    pub jobs: Vec<SweepJob>,
}

#[derive(Debug, Deserialize)]
pub struct SweepJob {
    pub r: usize,
    pub s: usize,
    pub n: usize,
    /// Exact total box count; `box_sum_mod` filters by residue mod r*s
    /// instead. Default: residue 0 mod r*s.
    #[serde(default)]
    pub box_sum: Option<u64>,
    #[serde(default)]
    pub box_sum_mod: Option<u64>,
}

#[derive(Debug, Serialize)]
struct SweepRow {
    r: usize,
    s: usize,
    n: usize,
    diagrams: String,
    status: String,
    b_nonzero: bool,
}

#[derive(Debug, Serialize)]
struct SweepSummary {
    instances: usize,
    verified: usize,
    failed: usize,
    not_applicable: usize,
}

fn run_sweep(config: &SweepConfig, format: Format) -> Result<i32> {
    let mut rows: Vec<SweepRow> = Vec::new();
    for job in &config.jobs {
        if job.r < 2 || job.s < 2 {
            return Err(Error::InvalidInput(format!(
                "sweep job needs r, s >= 2, got ({}, {})",
                job.r, job.s
            )));
        }
        if job.n < 4 {
            return Err(Error::TooFewPoints(job.n));
        }
        if job.box_sum.is_some() && job.box_sum_mod.is_some() {
            return Err(Error::InvalidInput(
                "sweep job cannot set both box_sum and box_sum_mod".into(),
            ));
        }
        let embedding = make_slrs_embedding(job.r, job.s)?;
        let shapes = YoungDiagram::enumerate(job.r, job.s as u64);
        let modulus = (job.r * job.s) as u64;
        let admissible: Vec<Vec<YoungDiagram>> = shapes
            .iter()
            .cloned()
            .combinations_with_replacement(job.n)
            .filter(|tuple| {
                let total: u64 = tuple.iter().map(YoungDiagram::boxes).sum();
                match (job.box_sum, job.box_sum_mod) {
                    (Some(exact), _) => total == exact,
                    (None, Some(m)) => total % modulus == m % modulus,
                    (None, None) => total % modulus == 0,
                }
            })
            .collect();
        let job_rows: Vec<SweepRow> = admissible
            .par_iter()
            .map(|tuple| {
                let diagrams = tuple
                    .iter()
                    .map(|d| format!("[{}]", d.rows().iter().join(",")))
                    .join("|");
                let outcome = DualityInstance::from_diagrams(embedding.clone(), tuple)
                    .and_then(|inst| verify_divisor_identity(&inst));
                let (status, b_nonzero) = match outcome {
                    Ok(TheoremOutcome::Checked(rep)) => (
                        if rep.passed { "verified" } else { "failed" },
                        rep.b_table.values().any(|&b| b != 0),
                    ),
                    Ok(TheoremOutcome::NotApplicable { .. }) => ("not_applicable", false),
                    Err(_) => ("not_applicable", false),
                };
                SweepRow {
                    r: job.r,
                    s: job.s,
                    n: job.n,
                    diagrams,
                    status: status.to_string(),
                    b_nonzero,
                }
            })
            .collect();
        rows.extend(job_rows);
    }

    let summary = SweepSummary {
        instances: rows.len(),
        verified: rows.iter().filter(|r| r.status == "verified").count(),
        failed: rows.iter().filter(|r| r.status == "failed").count(),
        not_applicable: rows.iter().filter(|r| r.status == "not_applicable").count(),
    };
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::json!({ "instances": rows, "summary": summary })
            );
        }
        Format::Csv => {
            println!("r,s,n,diagrams,status,b_nonzero");
            for row in &rows {
                println!(
                    "{},{},{},{},{},{}",
                    row.r, row.s, row.n, row.diagrams, row.status, row.b_nonzero
                );
            }
            println!(
                "# instances={} verified={} failed={} not_applicable={}",
                summary.instances, summary.verified, summary.failed, summary.not_applicable
            );
        }
    }
    Ok(if summary.failed > 0 {
        EXIT_IDENTITY_FAILED
    } else {
        EXIT_OK
    })
}

const CACHE_FILE: &str = "cbdiv-rank-cache-v1.json";

fn load_cache(dir: &std::path::Path) {
    let path = dir.join(CACHE_FILE);
    match std::fs::read_to_string(&path) {
        Ok(text) => {
            if let Err(e) = rank_cache_load_json(&text) {
                eprintln!("warning: ignoring cache {}: {e}", path.display());
            }
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
        Err(e) => eprintln!("warning: cannot read cache {}: {e}", path.display()),
    }
}

fn save_cache(dir: &std::path::Path) {
    if let Err(e) = std::fs::create_dir_all(dir) {
        eprintln!("warning: cannot create cache dir {}: {e}", dir.display());
        return;
    }
    let path = dir.join(CACHE_FILE);
    if let Err(e) = std::fs::write(&path, rank_cache_to_json()) {
        eprintln!("warning: cannot write cache {}: {e}", path.display());
    }
}
