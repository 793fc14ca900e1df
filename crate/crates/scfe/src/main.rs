//! Command-line front end. Exit codes: 0 = drawable/valid, 1 = not drawable
//! or invalid, 2 = usage or parse error, 3 = internal verification failure.

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use scfe::construction::ConstructionError;
use scfe::graph::SignedGraph;
use scfe::io::{gen_instance, parse_drawing, parse_graph, write_drawing, write_graph, GenMode};
use scfe::recognition::oracle_pca;
use scfe::render::{render_drawing_svg, render_model_svg};
use scfe::solver::{decide_general, verify, SolveError, SolveOptions, SolveResult};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "scfe", version, about = "Signed graphs on a circle: decide, draw, verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the graph admits a valid circular drawing
    Decide {
        graph: PathBuf,
        /// Refuse to search beyond this many unsigned pairs
        #[arg(long = "max-k", default_value_t = 25)]
        max_k: u32,
        /// Examine every completion and count the drawable ones
        #[arg(long)]
        exhaustive: bool,
    },
    /// Decide and emit a witness drawing (stdout or -o), optionally with SVG
    Draw {
        graph: PathBuf,
        /// Write the drawing file here instead of stdout
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Write an SVG of the drawing
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write an SVG of the equal-length arc model
        #[arg(long = "model-svg")]
        model_svg: Option<PathBuf>,
        /// Refuse to search beyond this many unsigned pairs
        #[arg(long = "max-k", default_value_t = 25)]
        max_k: u32,
    },
    /// Check a drawing against a graph and list every violation
    Verify { graph: PathBuf, drawing: PathBuf },
    /// Brute-force reference decision by exhaustive enumeration (tiny n)
    Oracle {
        graph: PathBuf,
        /// Refuse graphs larger than this
        #[arg(long = "n-max", default_value_t = 7)]
        n_max: u32,
    },
    /// Generate a test instance on stdout
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: u32,
        /// pca (drawable by construction) or random
        #[arg(long)]
        mode: String,
        /// Probability that a pair stays unsigned (random mode), e.g. 1/4
        #[arg(long = "missing-prob", default_value = "1/4")]
        missing_prob: String,
    },
}

enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn report(self) -> ExitCode {
        match self {
            CliError::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            CliError::Internal(msg) => {
                eprintln!("internal error: {msg}");
                ExitCode::from(3)
            }
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn solve_error(e: SolveError) -> CliError {
    match e {
        SolveError::TooManyMissingPairs { .. } | SolveError::SizeMismatch { .. } => {
            usage(e.to_string())
        }
        SolveError::NotComplete => CliError::Internal(e.to_string()),
        SolveError::Construction(inner) => match inner {
            ConstructionError::VerificationFailed(_) => CliError::Internal(inner.to_string()),
            other => CliError::Internal(other.to_string()),
        },
    }
}

fn read_graph(path: &Path) -> Result<SignedGraph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SCFE_LOG")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => e.report(),
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Decide { graph, max_k, exhaustive } => {
            let g = read_graph(&graph)?;
            let opts = SolveOptions { max_missing: max_k, exhaustive };
            match decide_general(&g, &opts).map_err(solve_error)? {
                SolveResult::Drawable {
                    completion,
                    equal_length,
                    completions_examined,
                    drawable_completions,
                    ..
                } => {
                    println!("drawable");
                    println!("completions-examined {completions_examined}");
                    if let Some(count) = drawable_completions {
                        println!("drawable-completions {count}");
                    }
                    println!("delta {}", equal_length.delta());
                    for (pair, sign) in completion.assignments() {
                        println!("completion {} {} {}", pair.u(), pair.v(), sign.symbol());
                    }
                    Ok(ExitCode::SUCCESS)
                }
                SolveResult::NotDrawable { completions_examined } => {
                    println!("not-drawable");
                    println!("completions-examined {completions_examined}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Draw { graph, output, svg, model_svg, max_k } => {
            let g = read_graph(&graph)?;
            let opts = SolveOptions { max_missing: max_k, exhaustive: false };
            match decide_general(&g, &opts).map_err(solve_error)? {
                SolveResult::Drawable { drawing, equal_length, .. } => {
                    let text = write_drawing(&drawing);
                    match &output {
                        Some(path) => write_file(path, &text)?,
                        None => print!("{text}"),
                    }
                    if let Some(path) = &svg {
                        write_file(path, &render_drawing_svg(&g, &drawing))?;
                    }
                    if let Some(path) = &model_svg {
                        write_file(path, &render_model_svg(equal_length.model()))?;
                    }
                    Ok(ExitCode::SUCCESS)
                }
                SolveResult::NotDrawable { completions_examined } => {
                    eprintln!("not-drawable (examined {completions_examined} completions)");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Verify { graph, drawing } => {
            let g = read_graph(&graph)?;
            let text = std::fs::read_to_string(&drawing)
                .map_err(|e| usage(format!("cannot read {}: {e}", drawing.display())))?;
            let d =
                parse_drawing(&text).map_err(|e| usage(format!("{}: {e}", drawing.display())))?;
            let report = verify(&g, &d).map_err(solve_error)?;
            if report.window.is_empty() {
                println!("window empty");
            } else {
                println!("window {} {}", report.window.lo, report.window.hi);
            }
            for (a, friend, enemy) in &report.violations {
                println!("violation {a} {friend} {enemy}");
            }
            if report.valid {
                println!("valid");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("invalid");
                Ok(ExitCode::from(1))
            }
        }
        Command::Oracle { graph, n_max } => {
            let g = read_graph(&graph)?;
            let missing = g.missing_pairs();
            if missing.len() >= 25 {
                return Err(usage(format!(
                    "{} unsigned pairs is beyond the oracle's reach",
                    missing.len()
                )));
            }
            let mut drawable = false;
            for mask in 0u64..(1u64 << missing.len()) {
                let mut assignments = std::collections::BTreeMap::new();
                for (j, pair) in missing.iter().enumerate() {
                    let negative = (mask >> (missing.len() - 1 - j)) & 1 == 1;
                    assignments.insert(
                        *pair,
                        if negative {
                            scfe::graph::Sign::Negative
                        } else {
                            scfe::graph::Sign::Positive
                        },
                    );
                }
                let completed = g
                    .apply_completion(&scfe::graph::Completion::new(assignments))
                    .expect("completion covers missing pairs");
                let found = oracle_pca(&completed.positive_subgraph(), n_max)
                    .map_err(|e| usage(e.to_string()))?;
                if found.is_some() {
                    drawable = true;
                    break;
                }
            }
            if drawable {
                println!("drawable");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("not-drawable");
                Ok(ExitCode::from(1))
            }
        }
        Command::Gen { seed, n, mode, missing_prob } => {
            let mode = GenMode::from_str(&mode).map_err(usage)?;
            let prob = BigRational::from_str(&missing_prob)
                .map_err(|e| usage(format!("bad missing probability: {e}")))?;
            let g = gen_instance(seed, n, mode, &prob).map_err(|e| usage(e.to_string()))?;
            print!("{}", write_graph(&g));
            Ok(ExitCode::SUCCESS)
        }
    }
}
