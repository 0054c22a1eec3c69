use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use svzeta_cli::{
    cmd_dims, cmd_fsv, cmd_lyndon, cmd_mzv, cmd_polylog, cmd_sv_table, cmd_verify, Config,
    Format, Method, Suite,
};

/// Single-valued multiple zeta values, dimension tables and checks.
#[derive(Parser)]
#[command(name = "svzeta", version)]
struct Cli {
    /// Target absolute error for numeric values.
    #[arg(long, global = true, default_value_t = 1e-7)]
    prec: f64,
    /// MZV cache file, created if missing.
    #[arg(long, global = true, env = "SVZETA_CACHE")]
    cache: Option<PathBuf>,
    /// Output format (dims defaults to csv, everything else to text).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Enable weight-13 checks and symbolic tables above weight 11.
    #[arg(long, global = true)]
    slow: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// ζ_sv for all convergent compositions up to a weight.
    SvTable {
        #[arg(long, default_value_t = 8)]
        weight: usize,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// ζ(n1,...,nr), e.g. `mzv 3,5`.
    Mzv {
        composition: String,
        #[arg(long, value_enum, default_value_t = Method::HalfSplit)]
        method: Method,
    },
    /// Lyndon words of a weight over {3 < 2}.
    Lyndon {
        weight: u32,
        /// Use the alphabet f3 < f5 < f7 < ... instead.
        #[arg(long)]
        f_alphabet: bool,
    },
    /// The sv map on an f-word, e.g. `fsv 3,5`.
    Fsv { fword: String },
    /// L_w(z) for a word in 0/1 letters and z = "re,im".
    Polylog {
        word: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
        /// Path vertices "re,im;re,im;..." ending at z.
        #[arg(long, allow_hyphen_values = true)]
        path: Option<String>,
        /// Evaluate the single-valued version instead.
        #[arg(long)]
        sv: bool,
    },
    /// Dimension table.
    Dims {
        #[arg(long, default_value_t = 20)]
        weight: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<(String, bool)> {
    let default_format = match cli.command {
        Command::Dims { .. } => Format::Csv,
        _ => Format::Text,
    };
    let cfg = Config {
        target_err: cli.prec,
        cache: cli.cache,
        format: cli.format.unwrap_or(default_format),
        slow: cli.slow,
    };
    cfg.validate()?;
    let ok = |s: String| (s, true);
    Ok(match cli.command {
        Command::SvTable { weight } => ok(cmd_sv_table(&cfg, weight)?),
        Command::Verify { suite } => cmd_verify(&cfg, suite)?,
        Command::Mzv {
            composition,
            method,
        } => ok(cmd_mzv(&cfg, &composition, method)?),
        Command::Lyndon { weight, f_alphabet } => ok(cmd_lyndon(&cfg, weight, f_alphabet)?),
        Command::Fsv { fword } => ok(cmd_fsv(&cfg, &fword)?),
        Command::Polylog { word, z, path, sv } => {
            ok(cmd_polylog(&cfg, &word, &z, path.as_deref(), sv)?)
        }
        Command::Dims { weight } => ok(cmd_dims(cfg.format, weight)?),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, passed)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
