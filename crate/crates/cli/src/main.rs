//! `memdp-solve`: command-line front end for the MEMDP solvers.
//!
//! Exit codes: 0 on success, 1 on input errors (bad files, flags or
//! arguments), 2 when a solver refuses to go on (size or depth guards).

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use memdp::rational::parse_rat;
use memdp::Rat;

#[derive(Debug, Parser)]
#[command(name = "memdp-solve", version, about = "Solvers for multiple-environment MDPs with parity objectives")]
struct Cli {
    /// Print a machine-readable JSON result.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for grid and simulation work (fallback: MEMDP_SOLVE_THREADS).
    #[arg(long, global = true, value_name = "N")]
    parallel: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

fn rational(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Grid,
    Bisect,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check a model document and list every violation.
    Validate { model: PathBuf },
    /// Exact parity values of an MDP (or of each environment of an MEMDP).
    MdpParity { model: PathBuf },
    /// Approximate prior values.
    PriorValue {
        model: PathBuf,
        /// `{"E1":"1/2",...}` or `uniform`.
        #[arg(long, default_value = "uniform")]
        belief: String,
        #[arg(long, value_parser = rational)]
        gamma: Rat,
        /// Cap on distinguishing steps per reset; forfeits the guarantee when
        /// below the required depth.
        #[arg(long)]
        max_depth: Option<u64>,
        /// Report a single state instead of all of them.
        #[arg(long)]
        state: Option<String>,
    },
    /// Decide whether the prior value reaches alpha, up to eps.
    Gap {
        model: PathBuf,
        #[arg(long, default_value = "uniform")]
        belief: String,
        #[arg(long, value_parser = rational)]
        alpha: Rat,
        #[arg(long, value_parser = rational)]
        eps: Rat,
        /// Initial state; defaults to the first declared state.
        #[arg(long)]
        state: Option<String>,
    },
    /// Worst-case value over all priors.
    UniValue {
        model: PathBuf,
        #[arg(long, value_parser = rational)]
        eps: Rat,
        #[arg(long, value_enum, default_value = "grid")]
        method: Method,
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        max_depth: Option<u64>,
    },
    /// Convergence constants for a target accuracy.
    Constants {
        model: PathBuf,
        #[arg(long, value_parser = rational)]
        eps: Rat,
    },
    /// POMDP utilities.
    Pomdp {
        #[command(subcommand)]
        cmd: PomdpCmd,
    },
    /// Monte-Carlo simulation of a strategy in one environment.
    Simulate {
        model: PathBuf,
        #[arg(long)]
        env: String,
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        runs: u64,
        #[arg(long, default_value_t = 200)]
        horizon: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also report aggregate belief statistics.
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        state: Option<String>,
        /// Prior used for the belief statistics.
        #[arg(long, default_value = "uniform")]
        belief: String,
    },
}

#[derive(Debug, Subcommand)]
enum PomdpCmd {
    /// Dirac preservation and observation compatibility.
    Check { model: PathBuf },
    /// Builds the equivalent MEMDP from a belief over states.
    Convert {
        model: PathBuf,
        #[arg(long)]
        belief: String,
    },
}

fn threads(flag: Option<usize>) -> Result<usize, String> {
    if let Some(n) = flag {
        return Ok(n.max(1));
    }
    match std::env::var("MEMDP_SOLVE_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|n| n.max(1))
            .map_err(|_| format!("MEMDP_SOLVE_THREADS must be a positive integer, got `{v}`")),
        Err(_) => Ok(1),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let n = match threads(cli.parallel) {
        Ok(n) => n,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    // Ignore failure: a pool may already exist in tests.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    let ctx = commands::Context {
        json: cli.json,
        parallel: n > 1,
        argv: argv[1..].to_vec(),
    };
    let outcome = match cli.cmd {
        Cmd::Validate { model } => commands::validate(&ctx, &model),
        Cmd::MdpParity { model } => commands::mdp_parity(&ctx, &model),
        Cmd::PriorValue {
            model,
            belief,
            gamma,
            max_depth,
            state,
        } => commands::prior_value_cmd(&ctx, &model, &belief, &gamma, max_depth, state.as_deref()),
        Cmd::Gap {
            model,
            belief,
            alpha,
            eps,
            state,
        } => commands::gap(&ctx, &model, &belief, &alpha, &eps, state.as_deref()),
        Cmd::UniValue {
            model,
            eps,
            method,
            state,
            max_depth,
        } => commands::uni_value(&ctx, &model, &eps, method, state.as_deref(), max_depth),
        Cmd::Constants { model, eps } => commands::constants(&ctx, &model, &eps),
        Cmd::Pomdp { cmd: PomdpCmd::Check { model } } => commands::pomdp_check(&ctx, &model),
        Cmd::Pomdp {
            cmd: PomdpCmd::Convert { model, belief },
        } => commands::pomdp_convert(&ctx, &model, &belief),
        Cmd::Simulate {
            model,
            env,
            strategy,
            runs,
            horizon,
            seed,
            stats,
            state,
            belief,
        } => commands::simulate(
            &ctx,
            &commands::SimArgs {
                model,
                env,
                strategy,
                runs,
                horizon,
                seed,
                stats,
                state,
                belief,
            },
        ),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
