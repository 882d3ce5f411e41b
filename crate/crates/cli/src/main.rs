//! `btprop`: test, repair and fit Bradley–Terry tournaments from the command
//! line.
//!
//! Every subcommand prints a JSON report on stdout. Exit status is 0 when the
//! property holds or the command succeeded, 1 when it is rejected (or the
//! file is invalid, for `validate`), and 2 on any error.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use btprop_core::approx::{min_approx_bt_eps, scores_from_root};
use btprop_core::balance::total_discrepancy_with_threads;
use btprop_core::format::{parse_tree, TournamentFile};
use btprop_core::repair::{best_root_with_threads, repair_with_root};
use btprop_core::{
    extend_tree, fit_scores_least_squares, gen_bt, gen_cyclic, gen_random, l1_distance_oracle,
    test_bt, Outcome, ScoreVector, StochasticTournament, TesterConfig, DEFAULT_TOL,
};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use report::Report;

#[derive(Debug, Parser)]
#[command(
    name = "btprop",
    version,
    about = "Bradley-Terry property testing on stochastic tournaments"
)]
struct Cli {
    /// Balance tolerance applied to every check.
    #[arg(long, global = true, env = "BT_DEFAULT_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Worker threads for the tester and discrepancy scans.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a tournament file and check its invariants.
    Validate { file: PathBuf },
    /// Run the constant-query tester.
    Test {
        file: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Accept triangles that are (1+E)-balanced instead of exactly balanced.
        #[arg(long, value_name = "E")]
        eps_balance: Option<f64>,
    },
    /// Total and per-root discrepancy sums.
    Disc {
        file: PathBuf,
        #[arg(long)]
        per_root: bool,
    },
    /// Rewrite the tournament into a reversible one around a root.
    Repair {
        file: PathBuf,
        /// Defaults to the root with the smallest discrepancy sum.
        #[arg(long)]
        root: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Fit scores and report the smallest eps they verify at.
    Fit {
        file: PathBuf,
        #[arg(long, conflicts_with = "lsq")]
        root: Option<usize>,
        /// Least squares on log-odds.
        #[arg(long)]
        lsq: bool,
    },
    /// Write a generated tournament.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Extend weights on a spanning tree to a reversible tournament.
    ExtendTree {
        tree: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Upper and lower bounds on the L1 distance to reversibility (n <= 8).
    Distance {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        budget: usize,
    },
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// From scores, `p_xy = a(x) / (a(x) + a(y))`.
    Bt {
        #[arg(long, value_delimiter = ',', required = true)]
        scores: Vec<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// `i -> i+1 (mod n)` with probability `p`, all other pairs fair.
    Cyclic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Uniform weights.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
struct Output {
    #[arg(short, long)]
    output: PathBuf,
}

enum Status {
    Holds,
    Rejected,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Holds) => ExitCode::SUCCESS,
        Ok(Status::Rejected) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Status> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol >= 0.0) {
        bail!("--tol must be a finite non-negative number, got {tol}");
    }
    let threads = cli.threads.max(1);
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Test {
            file,
            eps,
            delta,
            seed,
            eps_balance,
        } => {
            let f = load(file)?;
            let mut cfg = TesterConfig::new(*eps)
                .delta(*delta)
                .seed(*seed)
                .tol(tol)
                .threads(threads);
            if let Some(e) = eps_balance {
                cfg = cfg.eps_balanced(*e);
            }
            let v = test_bt(&f.tournament, &cfg)?;
            let witness_labels = v.witness.map(|t| t.vertices().map(|x| f.label(x)).to_vec());
            Report::new(
                "test",
                json!({ "file": file, "tester": cfg }),
                json!({ "verdict": v, "witness_labels": witness_labels }),
            )
            .seeded(*seed)
            .emit()?;
            Ok(match v.outcome {
                Outcome::Accept => Status::Holds,
                Outcome::Reject => Status::Rejected,
            })
        }
        Command::Disc { file, per_root } => {
            let f = load(file)?;
            let sums = total_discrepancy_with_threads(&f.tournament, threads);
            let mut result = json!({ "total": sums.total, "triangles": sums.triangles });
            if *per_root {
                result["per_root"] = json!(sums.per_root);
            }
            Report::new(
                "disc",
                json!({ "file": file, "per_root": per_root }),
                result,
            )
            .emit()?;
            Ok(Status::Holds)
        }
        Command::Repair { file, root, output } => {
            let f = load(file)?;
            let t = &f.tournament;
            let r = match root {
                Some(r) => *r,
                None => best_root_with_threads(t, threads)?,
            };
            let (out, rep) = repair_with_root(t, r, tol)?;
            if rep.clamped() {
                eprintln!(
                    "warning: some balancing values were clamped; output is not exactly reversible"
                );
            }
            let file_out = TournamentFile {
                tournament: out,
                labels: f.labels.clone(),
            };
            write(output, &file_out.serialize())?;
            Report::new(
                "repair",
                json!({ "file": file, "root": root, "tol": tol, "output": output }),
                json!(rep),
            )
            .emit()?;
            Ok(Status::Holds)
        }
        Command::Fit { file, root, lsq } => {
            let f = load(file)?;
            let t = &f.tournament;
            let (method, scores) = if *lsq {
                ("lsq".to_string(), fit_scores_least_squares(t))
            } else {
                let r = match root {
                    Some(r) => *r,
                    None => best_root_with_threads(t, threads)?,
                };
                (format!("root:{r}"), scores_from_root(t, r)?)
            };
            let eps = min_approx_bt_eps(t, &scores, tol, 1e-6)?;
            let labels: Vec<String> = (0..t.n()).map(|x| f.label(x)).collect();
            Report::new(
                "fit",
                json!({ "file": file, "root": root, "lsq": lsq, "tol": tol }),
                json!({ "method": method, "scores": scores, "labels": labels, "eps": eps }),
            )
            .emit()?;
            Ok(Status::Holds)
        }
        Command::Gen { kind } => generate(kind),
        Command::ExtendTree { tree, output } => {
            let text = read(tree)?;
            let tw = parse_tree(&text).with_context(|| format!("{}", tree.display()))?;
            let ext = extend_tree(&tw)?;
            if !ext.clamped.is_empty() {
                eprintln!("warning: {} chord weights were clamped", ext.clamped.len());
            }
            write(output, &btprop_core::format::serialize(&ext.tournament))?;
            Report::new(
                "extend-tree",
                json!({ "tree": tree, "output": output }),
                json!(ext.summary()),
            )
            .emit()?;
            Ok(Status::Holds)
        }
        Command::Distance { file, budget } => {
            let f = load(file)?;
            let d = l1_distance_oracle(&f.tournament, *budget)?;
            Report::new(
                "distance",
                json!({ "file": file, "budget": budget }),
                json!(d),
            )
            .emit()?;
            Ok(Status::Holds)
        }
    }
}

fn validate(file: &Path) -> anyhow::Result<Status> {
    let text = read(file)?;
    let (status, result) = match TournamentFile::parse(&text) {
        Ok(f) => {
            let t = &f.tournament;
            let m = t.markov_matrix();
            let row_err = (0..t.n())
                .map(|x| (m.row(x).iter().sum::<f64>() - 1.0).abs())
                .fold(0.0, f64::max);
            if row_err > 1e-12 {
                (
                    Status::Rejected,
                    json!({ "valid": false, "error": format!("Markov row sum off by {row_err}") }),
                )
            } else {
                (
                    Status::Holds,
                    json!({
                        "valid": true,
                        "n": t.n(),
                        "pairs": t.pair_count(),
                        "labelled": f.labels.is_some(),
                        "max_row_sum_error": row_err,
                    }),
                )
            }
        }
        Err(e) => (
            Status::Rejected,
            json!({ "valid": false, "line": e.line(), "error": e.to_string() }),
        ),
    };
    Report::new("validate", json!({ "file": file }), result).emit()?;
    Ok(status)
}

fn generate(kind: &GenKind) -> anyhow::Result<Status> {
    let (t, config, out, seed): (StochasticTournament, _, _, _) = match kind {
        GenKind::Bt { scores, out } => (
            gen_bt(&ScoreVector::new(scores.clone())?)?,
            json!({ "kind": "bt", "scores": scores }),
            out,
            None,
        ),
        GenKind::Cyclic { n, p, out } => (
            gen_cyclic(*n, *p)?,
            json!({ "kind": "cyclic", "n": n, "p": p }),
            out,
            None,
        ),
        GenKind::Random { n, seed, out } => (
            gen_random(*n, *seed)?,
            json!({ "kind": "random", "n": n }),
            out,
            Some(*seed),
        ),
    };
    write(&out.output, &btprop_core::format::serialize(&t))?;
    let mut report = Report::new(
        "gen",
        config,
        json!({ "output": out.output, "n": t.n(), "pairs": t.pair_count() }),
    );
    if let Some(s) = seed {
        report = report.seeded(s);
    }
    report.emit()?;
    Ok(Status::Holds)
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<TournamentFile> {
    let text = read(path)?;
    TournamentFile::parse(&text).with_context(|| format!("{}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
