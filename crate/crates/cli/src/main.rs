//! `vz`: batch front end for scenario files.
//!
//! Exit status is 0 on success, 1 when a scenario (or trait file) cannot be
//! read, parsed or evaluated, and 2 on usage errors.

mod commands;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use virtue_core::generalization::Mode;

use commands::{CliError, Input, Overrides};
use report::{render, Line};

#[derive(Parser)]
#[command(name = "vz", version, about = "Project, appraise and learn traits from scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Default)]
struct Common {
    /// Print line-delimited JSON instead of s-expressions.
    #[arg(long, global = true)]
    json: bool,
    /// Override the scenario's horizon.
    #[arg(long, global = true, value_name = "N")]
    horizon: Option<u64>,
}

#[derive(Args, Clone, Debug, Default)]
struct Thresholds {
    /// Admirations needed to admit an exemplar.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: Option<u64>,
    /// Minimum number of eligible situations for a trait.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    m: Option<u64>,
    /// Fraction of eligible situations in which the action must be performed, in (0, 1].
    #[arg(long, value_parser = parse_gamma)]
    gamma: Option<f64>,
    /// Anti-unification mode.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and sort-check scenario files.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the projected timeline.
    Project {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print total utilities for every occurrence.
    Utility {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Print every emotion that holds.
    Emotions {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Saturate the `assert` formulas and print the result.
    Infer {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Maximum modal nesting of derived formulas.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_depth: Option<u64>,
    },
    /// Generalize the `gamma` formula sets.
    Generalize {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
    },
    /// Identify exemplars and learn traits.
    Learn {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        thresholds: Thresholds,
        /// Write the learnt traits to this file.
        #[arg(long, value_name = "PATH")]
        traits: Option<PathBuf>,
    },
    /// Apply a trait file to the scenario's `act` situations.
    Act {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PATH")]
        traits: PathBuf,
    },
    /// Observe, admire, learn and act, for each file in turn.
    Run {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        thresholds: Thresholds,
    },
}

fn parse_gamma(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(g) if g > 0.0 && g <= 1.0 => Ok(g),
        _ => Err(format!("`{s}` is not a real in (0, 1]")),
    }
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    Mode::from_keyword(s).ok_or_else(|| format!("`{s}` is not a mode (expected fo or ho)"))
}

fn overrides(common: &Common, thresholds: Option<&Thresholds>) -> Overrides {
    let t = thresholds.cloned().unwrap_or_default();
    Overrides {
        horizon: common.horizon,
        n: t.n.map(|n| n as usize),
        m: t.m.map(|m| m as usize),
        gamma: t.gamma,
        mode: t.mode,
        max_depth: None,
    }
}

/// Runs `job` over every file on scoped worker threads; results come back
/// in argument order.
fn each_file<F>(files: &[PathBuf], job: F) -> Vec<Result<Vec<Line>, CliError>>
where
    F: Fn(&Path) -> Result<Vec<Line>, CliError> + Sync,
{
    std::thread::scope(|scope| {
        let handles: Vec<_> = files.iter().map(|f| scope.spawn(|| job(f))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker thread panicked"))
            .collect()
    })
}

fn execute(command: Command) -> (Vec<Result<Vec<Line>, CliError>>, bool) {
    match command {
        Command::Check { files, common } => (
            each_file(&files, |f| Ok(commands::check(&Input::load(f)?))),
            common.json,
        ),
        Command::Project { file, common } => {
            let o = overrides(&common, None);
            (vec![Input::load(&file).and_then(|i| commands::project(&i, &o))], common.json)
        }
        Command::Utility { file, common } => {
            let o = overrides(&common, None);
            (vec![Input::load(&file).and_then(|i| commands::utility(&i, &o))], common.json)
        }
        Command::Emotions { file, common } => {
            let o = overrides(&common, None);
            (vec![Input::load(&file).and_then(|i| commands::emotions(&i, &o))], common.json)
        }
        Command::Infer {
            file,
            common,
            max_depth,
        } => {
            let mut o = overrides(&common, None);
            o.max_depth = max_depth.map(|d| d as usize);
            (vec![Input::load(&file).and_then(|i| commands::infer(&i, &o))], common.json)
        }
        Command::Generalize { file, common, mode } => {
            let mut o = overrides(&common, None);
            o.mode = mode;
            (vec![Input::load(&file).and_then(|i| commands::generalize(&i, &o))], common.json)
        }
        Command::Learn {
            file,
            common,
            thresholds,
            traits,
        } => {
            let o = overrides(&common, Some(&thresholds));
            let result = Input::load(&file).and_then(|i| commands::learn(&i, &o)).and_then(|(lines, store)| {
                if let Some(path) = &traits {
                    std::fs::write(path, store).map_err(|source| CliError::Io {
                        file: path.display().to_string(),
                        source,
                    })?;
                }
                Ok(lines)
            });
            (vec![result], common.json)
        }
        Command::Act { file, common, traits } => (
            vec![Input::load(&file).and_then(|i| commands::act(&i, &traits))],
            common.json,
        ),
        Command::Run {
            files,
            common,
            thresholds,
        } => {
            let o = overrides(&common, Some(&thresholds));
            (
                each_file(&files, |f| commands::run(&Input::load(f)?, &o)),
                common.json,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (results, json) = execute(cli.command);
    let mut stdout = std::io::stdout().lock();
    let mut status = ExitCode::SUCCESS;
    for result in results {
        match result {
            Ok(lines) => {
                let _ = stdout.write_all(render(&lines, json).as_bytes());
            }
            Err(e) => {
                let _ = stdout.flush();
                eprintln!("vz: {e}");
                status = ExitCode::from(1);
            }
        }
    }
    status
}
