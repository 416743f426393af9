//! Command-line front door for the torsion laboratory.
//!
//! Exit codes: 0 success (and, for `bounds`, every report passed),
//! 1 bound failure, 2 solver failure, 3 configuration error.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use torsionlab::error::Error;
use torsionlab::experiments::{
    run_bound_suite, run_convergence, run_perturbation_study, run_punched_study, run_table,
    StudyConfig,
};
use torsionlab::geometry::domain_from_name;

#[derive(Parser)]
#[command(name = "torsionlab", about = "torsional rigidity and eigenvalue studies", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// output path; format chosen by extension (.csv or .json), stdout if absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// RNG seed for the stochastic pieces
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// inequality tolerance as a fraction of the bound magnitude
    #[arg(long, global = true, default_value_t = 0.01)]
    tol: f64,
    /// JSON study config; command-line flags fill anything it leaves out
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the benchmark shape table
    Table {
        /// grid ladder, comma separated spacings
        #[arg(long, value_delimiter = ',', default_values_t = [0.015625, 0.0078125])]
        ladder: Vec<f64>,
    },
    /// Punched-square family study
    Punched {
        #[arg(long = "L", default_value_t = 1.0)]
        l: f64,
        #[arg(long = "N-list", value_delimiter = ',', default_values_t = [1u32, 2, 4, 8])]
        n_list: Vec<u32>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Single-hole perturbation asymptotics
    Perturb {
        #[arg(long, default_value = "square")]
        domain: String,
        /// puncture point, comma separated coordinates
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.0])]
        x0: Vec<f64>,
        /// hole radii, strictly decreasing
        #[arg(long, value_delimiter = ',', default_values_t = [0.0625, 0.03125, 0.015625, 0.0078125])]
        deltas: Vec<f64>,
    },
    /// Grid convergence with Richardson extrapolation
    Converge {
        #[arg(long)]
        domain: String,
        #[arg(long, default_value = "lambda1")]
        quantity: String,
        #[arg(long, value_delimiter = ',', default_values_t = [0.03125, 0.015625, 0.0078125])]
        ladder: Vec<f64>,
    },
    /// Run the inequality suite over a corpus
    Bounds {
        #[arg(long, default_value = "default")]
        corpus: String,
    },
}

fn write_output(common: &Common, text: &str) -> Result<(), Error> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_config(common: &Common) -> Result<StudyConfig, Error> {
    let mut config = match &common.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => StudyConfig::default(),
    };
    config.seed = common.seed;
    config.tol = common.tol;
    Ok(config)
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let mut config = load_config(&cli.common)?;
    match &cli.command {
        Command::Table { ladder } => {
            config.study = "table".into();
            if cli.common.config.is_none() {
                config.ladder = ladder.clone();
            }
            let study = run_table(&config)?;
            write_output(&cli.common, &study.to_csv())?;
            Ok(true)
        }
        Command::Punched { l, n_list, dim } => {
            config.study = "punched".into();
            if cli.common.config.is_none() {
                config.side = *l;
                config.n_list = n_list.clone();
                config.dim = *dim;
            }
            let study = run_punched_study(&config)?;
            write_output(&cli.common, &study.to_csv())?;
            Ok(study.rows.iter().all(|r| r.pass))
        }
        Command::Perturb { domain, x0, deltas } => {
            config.study = "perturb".into();
            if cli.common.config.is_none() {
                config.domain = if domain == "square" { String::new() } else { domain.clone() };
                config.x0 = x0.clone();
                config.deltas = deltas.clone();
            }
            let study = run_perturbation_study(&config)?;
            write_output(&cli.common, &study.to_csv())?;
            Ok(true)
        }
        Command::Converge {
            domain,
            quantity,
            ladder,
        } => {
            config.study = "converge".into();
            if cli.common.config.is_none() {
                config.ladder = ladder.clone();
                config.quantity = quantity.clone();
                config.domain = domain.clone();
            }
            config.validate()?;
            let d = domain_from_name(&config.domain)?;
            let result = run_convergence(&d, &config.quantity, &config.ladder, &config.eigen_options())?;
            write_output(&cli.common, &result.to_csv())?;
            Ok(true)
        }
        Command::Bounds { corpus } => {
            config.study = "bounds".into();
            if cli.common.config.is_none() {
                config.corpus = corpus.clone();
            }
            let suite = run_bound_suite(&config)?;
            write_output(&cli.common, &suite.to_json())?;
            Ok(suite.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::InvalidConfig(_) | Error::InvalidSpec(_) | Error::Io(_) | Error::Json(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
