//! Command-line front end: parse channel/state files, run the library's
//! computations, and emit JSON (single results) or CSV (sweeps).
//!
//! Exit codes are script-friendly:
//!
//! | code | meaning                                        |
//! |------|------------------------------------------------|
//! | 0    | success                                        |
//! | 2    | unparseable input (flags, files, config)       |
//! | 3    | dimension mismatch or unsupported dimension    |
//! | 4    | channel is not completely positive             |
//! | 5    | requested construction is infeasible           |
//! | 6    | solver failure or verification above tolerance |

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::channels::{choi, is_cptp, iterate, kraus_from_choi, ChannelSpec};
use crate::classify::{classify_channel_with, DEFAULT_SEARCH_BUDGET};
use crate::coherence::{c_l1, c_relative_entropy};
use crate::diamond::{diamond_analytic_diagonal, diamond_distance, diamond_interior_point};
use crate::dilation::{
    build_generic_dilation, build_gio_dilation, build_sio_dilation, verify_dilation,
    DilationUnitary,
};
use crate::error::{Error, Result};
use crate::experiment::{run_experiment, ExperimentConfig};
use crate::states::DensityMatrix;

/// Residual above which a dilation is reported as failed verification.
const DILATION_RESIDUAL_LIMIT: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "aqnn",
    version,
    about = "Attractor network quantum channels: apply, verify, classify, dilate, compare"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Apply a channel to a state (optionally several times) and report the
    /// resulting state with its coherence.
    Apply {
        /// Channel spec JSON file.
        #[arg(long)]
        spec: PathBuf,
        /// Density matrix JSON file.
        #[arg(long)]
        state: PathBuf,
        /// Number of applications.
        #[arg(long, default_value_t = 1)]
        iterations: u64,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterate a channel a fixed number of times (alias of `apply` with a
    /// required repetition count).
    Iterate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        iterations: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the channel's Choi matrix.
    Choi {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the complete-positivity / trace-preservation verdict.
    CptpCheck {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full classification report (fixed points, incoherence classes,
    /// activation, certificates).
    Classify {
        #[arg(long)]
        spec: PathBuf,
        /// Remix budget for the certificate search.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: usize,
        /// Seed for the certificate search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an environment dilation and verify its round trip.
    Dilate {
        #[arg(long)]
        spec: PathBuf,
        /// Construction: gio, sio, or generic.
        #[arg(long)]
        method: String,
        /// Verification states.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diamond distance between two channels (pass --spec twice).
    Diamond {
        #[arg(long = "spec", required = true)]
        specs: Vec<PathBuf>,
        /// Solution path: auto, analytic, or sdp.
        #[arg(long, default_value = "auto")]
        method: String,
        /// Extra random probes for the sampling lower bound (0 skips it).
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a configured sweep and write its CSV.
    Experiment {
        /// Experiment config JSON file.
        #[arg(long)]
        config: PathBuf,
        /// Override the config's output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Maps every library error onto the documented exit-code contract.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse(_)
        | Error::Io { .. }
        | Error::NonHermitianInput { .. }
        | Error::InvalidState { .. }
        | Error::BadDimension { .. }
        | Error::BadRank { .. } => 2,
        Error::DimensionMismatch { .. } | Error::DimensionTooLarge { .. } => 3,
        Error::NotCptp { .. } | Error::NotPsd { .. } => 4,
        Error::ConstraintInfeasible { .. } | Error::WrongVariant { .. } => 5,
        Error::SolverDidNotConverge { .. } | Error::DepthExceeded { .. } => 6,
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            if let Error::ConstraintInfeasible { .. } = err {
                eprintln!("hint: rerun with --method generic for an unstructured dilation");
            }
            exit_code_for(&err)
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_spec(path: &Path) -> Result<ChannelSpec> {
    serde_json::from_str(&read_file(path)?).map_err(Error::from)
}

fn load_state(path: &Path) -> Result<DensityMatrix> {
    serde_json::from_str(&read_file(path)?).map_err(Error::from)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json values serialize")
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Apply { spec, state, iterations, out }
        | Command::Iterate { spec, state, iterations, out } => {
            let spec = load_spec(&spec)?;
            let state = load_state(&state)?;
            let result = iterate(&spec, &state, iterations)?;
            let payload = json!({
                "state": result,
                "iterations": iterations,
                "c_l1": c_l1(&result),
                "c_re": c_relative_entropy(&result),
            });
            emit(&out, &pretty(&payload))
        }
        Command::Choi { spec, out } => {
            let spec = load_spec(&spec)?;
            let choi_state = choi(&spec);
            let (re, im) = choi_state.matrix().to_re_im();
            let payload = json!({
                "dim_in": choi_state.dim_in(),
                "re": re,
                "im": im,
                "tp_residual": choi_state.tp_residual(),
            });
            emit(&out, &pretty(&payload))
        }
        Command::CptpCheck { spec, out } => {
            let spec = load_spec(&spec)?;
            let verdict = is_cptp(&spec);
            emit(&out, &pretty(&serde_json::to_value(verdict).map_err(Error::from)?))
        }
        Command::Classify { spec, budget, seed, out } => {
            let spec = load_spec(&spec)?;
            let report = classify_channel_with(&spec, budget, seed)?;
            emit(&out, &pretty(&serde_json::to_value(report).map_err(Error::from)?))
        }
        Command::Dilate { spec, method, trials, out } => {
            let spec = load_spec(&spec)?;
            let dilation: DilationUnitary = match method.as_str() {
                "gio" => build_gio_dilation(&spec)?,
                "sio" => build_sio_dilation(&spec)?,
                "generic" => {
                    let kraus = kraus_from_choi(&choi(&spec))?;
                    build_generic_dilation(&kraus)?
                }
                other => {
                    return Err(Error::Parse(format!(
                        "unknown dilation method '{other}' (expected gio, sio, or generic)"
                    )));
                }
            };
            let residual = verify_dilation(&dilation, &spec, trials)?;
            let payload = json!({
                "dilation": dilation,
                "method": method,
                "verification_residual": residual,
                "trials": trials,
            });
            emit(&out, &pretty(&payload))?;
            if residual > DILATION_RESIDUAL_LIMIT {
                return Err(Error::SolverDidNotConverge {
                    context: "dilation verification residual exceeds tolerance",
                    residual,
                });
            }
            Ok(())
        }
        Command::Diamond { specs, method, trials, seed, out } => {
            if specs.len() != 2 {
                return Err(Error::Parse(format!(
                    "diamond needs exactly two --spec arguments, got {}",
                    specs.len()
                )));
            }
            let spec_a = load_spec(&specs[0])?;
            let spec_b = load_spec(&specs[1])?;
            let result = match method.as_str() {
                "auto" => diamond_distance(&spec_a, &spec_b)?,
                "sdp" => diamond_interior_point(&spec_a, &spec_b)?,
                "analytic" => diamond_analytic_diagonal(&spec_a, &spec_b).ok_or(
                    Error::ConstraintInfeasible {
                        context: "analytic path needs a diagonal Choi difference".to_string(),
                        violation: f64::NAN,
                    },
                )?,
                other => {
                    return Err(Error::Parse(format!(
                        "unknown diamond method '{other}' (expected auto, analytic, or sdp)"
                    )));
                }
            };
            let mut payload = json!({
                "value": result.value,
                "lambda_opt": result.lambda_opt,
                "dual_gap_estimate": result.dual_gap_estimate,
                "method": result.method,
            });
            if trials > 0 {
                let bound =
                    crate::diamond::diamond_lower_bound(&spec_a, &spec_b, trials, seed)?;
                payload["lower_bound"] = json!(bound);
            }
            emit(&out, &pretty(&payload))
        }
        Command::Experiment { config, out } => {
            let mut config = ExperimentConfig::from_json(&read_file(&config)?)?;
            if let Some(path) = out {
                config.output_path = path.display().to_string();
            }
            let summary = run_experiment(&config)?;
            println!("{}", pretty(&serde_json::to_value(summary).map_err(Error::from)?));
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_error_variant_has_an_exit_code() {
        assert_eq!(exit_code_for(&Error::Parse("x".into())), 2);
        assert_eq!(
            exit_code_for(&Error::DimensionMismatch { context: "", got: 1, expected: 2 }),
            3
        );
        assert_eq!(
            exit_code_for(&Error::NotCptp { min_choi_eigenvalue: -0.1, tp_residual: 0.0 }),
            4
        );
        assert_eq!(
            exit_code_for(&Error::ConstraintInfeasible { context: String::new(), violation: 0.1 }),
            5
        );
        assert_eq!(
            exit_code_for(&Error::SolverDidNotConverge { context: "", residual: 0.1 }),
            6
        );
    }

    #[test]
    fn command_line_grammar_parses() {
        let cli = Cli::try_parse_from([
            "aqnn", "diamond", "--spec", "a.json", "--spec", "b.json", "--method", "sdp",
        ])
        .unwrap();
        match cli.command {
            Command::Diamond { specs, method, .. } => {
                assert_eq!(specs.len(), 2);
                assert_eq!(method, "sdp");
            }
            _ => panic!("parsed the wrong command"),
        }
        assert!(Cli::try_parse_from(["aqnn", "apply", "--spec", "s.json"]).is_err());
    }
}
