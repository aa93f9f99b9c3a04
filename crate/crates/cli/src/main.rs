//! `nswhard`: generate cubic graphs, reduce them to NSW auctions, solve,
//! verify, extract vertex covers, and run the lemma checks.
//!
//! Exit codes: 0 success, 1 a check was falsified, 2 bad input, 3 the
//! instance exceeds the requested solver's budget.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nswhard::allocation::{parse_allocation, serialize_allocation};
use nswhard::graph::{generate_family, parse_graph, write_graph};
use nswhard::reduction::{build_instance, parse_instance, serialize_instance};
use nswhard::solver::{improve_allocation, solve_bruteforce, solve_structured};
use nswhard::valuations::{check_superadditive_additive, check_supermodular, nsw_log2, CheckMode};
use nswhard::verifier::{extract_cover, theorem_sweep, verify_capprox};
use nswhard::{fraction, AuctionInstance, Error, NswPower, ReductionParams};

#[derive(Parser, Debug)]
#[command(name = "nswhard", version, about = "Vertex cover to supermodular Nash social welfare, exactly")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a cubic graph file for a named family or a seeded random graph.
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a graph file into an auction instance file.
    Reduce {
        graph: PathBuf,
        /// Approximation factor, integer or p/q, at least 1.
        #[arg(short, long, default_value = "1")]
        c: String,
        #[arg(long, default_value = "1/100")]
        epsilon: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute an optimal allocation.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Structured)]
        method: Method,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Diagnose an allocation; exit 1 if the approximation theorem fails on it.
    Verify {
        instance: PathBuf,
        allocation: PathBuf,
        /// Hand unassigned items to the greedy agent instead of rejecting.
        #[arg(long)]
        complete_with_greedy: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the minimum vertex cover read off a c-approximate allocation.
    ExtractVc {
        instance: PathBuf,
        allocation: PathBuf,
        #[arg(long)]
        complete_with_greedy: bool,
    },
    /// Run a check suite on an instance; exit 1 on any violation.
    Check {
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: Suite,
        /// Enumerate every bundle pair (supermodular mode, at most 14 items).
        #[arg(long)]
        exhaustive: bool,
        /// Sampled pairs for supermodular/classes modes.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        /// Random allocations for lemmas mode.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Move one removable vertex of V_E to the greedy agent.
    Improve {
        instance: PathBuf,
        allocation: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        complete_with_greedy: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Structured,
    Bruteforce,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Supermodular,
    Classes,
    Lemmas,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget { .. } => 3,
            Error::Falsified(_) | Error::NotApproximate => 1,
            _ => 2,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn bad_input(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        msg: msg.into(),
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("nswhard: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| bad_input(format!("{}: {e}", path.display())))
}

/// Writes via a sibling temp file and a rename, or to stdout without a path.
fn emit(path: Option<&Path>, content: &str) -> CliResult<()> {
    let Some(path) = path else {
        print!("{content}");
        return Ok(());
    };
    let io_err = |e: std::io::Error| Failure {
        code: 2,
        msg: format!("{}: {e}", path.display()),
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(io_err)?;
    f.write_all(content.as_bytes()).map_err(io_err)?;
    f.sync_all().map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// Status lines go to stdout when the payload went to a file, else stderr.
fn status(to_file: bool, line: &str) {
    if to_file {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn load_instance(path: &Path) -> CliResult<AuctionInstance> {
    Ok(parse_instance(&read(path)?)?)
}

fn describe(inst: &AuctionInstance, v: NswPower) -> String {
    match v {
        NswPower::Zero => "NSW^n = 0".to_string(),
        NswPower::Positive { two_exp, alpha_exp } => format!(
            "k={two_exp} g={alpha_exp} log2_nsw={:.6}",
            nsw_log2(v, inst.alpha_log2, inst.n_agents).expect("positive")
        ),
    }
}

fn run(cmd: Command) -> CliResult<u8> {
    match cmd {
        Command::Generate {
            family,
            n,
            seed,
            output,
        } => {
            let g = generate_family(&family, n, seed)?;
            emit(output.as_deref(), &write_graph(&g))?;
            Ok(0)
        }
        Command::Reduce {
            graph,
            c,
            epsilon,
            output,
        } => {
            let g = parse_graph(&read(&graph)?)?;
            let params = ReductionParams::parse(&c, &epsilon)?;
            let inst = build_instance(&g, &params);
            emit(output.as_deref(), &serialize_instance(&inst))?;
            status(
                output.is_some(),
                &format!(
                    "N={} M={} n={} items={} alpha_log2={:.6}",
                    inst.vertex_count(),
                    inst.edge_count(),
                    inst.n_agents,
                    inst.item_count(),
                    inst.alpha_log2
                ),
            );
            Ok(0)
        }
        Command::Solve {
            instance,
            method,
            output,
        } => {
            let inst = load_instance(&instance)?;
            let (alloc, value) = match method {
                Method::Structured => solve_structured(&inst)?,
                Method::Bruteforce => solve_bruteforce(&inst)?,
            };
            emit(output.as_deref(), &serialize_allocation(&alloc))?;
            status(output.is_some(), &describe(&inst, value));
            Ok(0)
        }
        Command::Verify {
            instance,
            allocation,
            complete_with_greedy,
            output,
        } => {
            let inst = load_instance(&instance)?;
            let a = parse_allocation(&inst, &read(&allocation)?, complete_with_greedy)?;
            let report = verify_capprox(&inst, &a)?;
            emit(output.as_deref(), &to_json(&report))?;
            Ok(if report.theorem_holds { 0 } else { 1 })
        }
        Command::ExtractVc {
            instance,
            allocation,
            complete_with_greedy,
        } => {
            let inst = load_instance(&instance)?;
            let a = parse_allocation(&inst, &read(&allocation)?, complete_with_greedy)?;
            let cover = extract_cover(&inst, &a)?;
            println!("{cover}");
            Ok(0)
        }
        Command::Check {
            instance,
            mode,
            exhaustive,
            budget,
            trials,
            seed,
            output,
        } => {
            let inst = load_instance(&instance)?;
            let (json, passed) = match mode {
                Suite::Supermodular => {
                    let how = if exhaustive {
                        CheckMode::Exhaustive
                    } else {
                        CheckMode::Sampled
                    };
                    // an oversized exhaustive request is a configuration error
                    let r = check_supermodular(&inst, how, budget, seed).map_err(|e| match e {
                        Error::Budget { .. } => bad_input(e.to_string()),
                        other => other.into(),
                    })?;
                    (to_json(&r), r.passed())
                }
                Suite::Classes => {
                    let r = check_superadditive_additive(&inst, budget, seed);
                    (to_json(&r), r.passed())
                }
                Suite::Lemmas => {
                    let r = theorem_sweep(&inst, trials, seed)?;
                    (to_json(&r), r.passed())
                }
            };
            emit(output.as_deref(), &json)?;
            Ok(if passed { 0 } else { 1 })
        }
        Command::Improve {
            instance,
            allocation,
            vertex,
            complete_with_greedy,
            output,
        } => {
            let inst = load_instance(&instance)?;
            let a = parse_allocation(&inst, &read(&allocation)?, complete_with_greedy)?;
            let better = improve_allocation(&inst, &a, vertex)?;
            emit(output.as_deref(), &serialize_allocation(&better))?;
            let before = nswhard::valuations::nsw_power(&inst, &a);
            let after = nswhard::valuations::nsw_power(&inst, &better);
            status(
                output.is_some(),
                &format!(
                    "before: {} | after: {} | c={}",
                    describe(&inst, before),
                    describe(&inst, after),
                    fraction::to_string(inst.params.c())
                ),
            );
            Ok(0)
        }
    }
}
