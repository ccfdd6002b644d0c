use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use fresco_core::cli::{run, Command, JobSpec};

/// Exact computations with frescos given by presentation files.
#[derive(Parser, Debug)]
#[command(name = "fresco", version)]
struct Cli {
    /// Raise the working order (never lowers it).
    #[arg(long, global = true)]
    order: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Bernstein polynomial of the presented fresco.
    Bernstein {
        /// Print the minimal polynomial instead.
        #[arg(long)]
        minimal: bool,
        file: PathBuf,
    },
    /// Principal Jordan-Hölder presentation recomputed from the module.
    Jh { file: PathBuf },
    /// Presentation of the push-forward by a change of variable.
    Push {
        #[arg(long)]
        theta: PathBuf,
        file: PathBuf,
    },
    /// Semi-simple part.
    Ssp { file: PathBuf },
    /// Rank of the semi-simple part and length of the semi-simple filtration.
    Delta { file: PathBuf },
    /// Twisted dual.
    Dual {
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        file: PathBuf,
    },
    /// Rank-3 normal form.
    Classify3 { file: PathBuf },
    /// The rank-3 parameter γ.
    Gamma { file: PathBuf },
    /// The quasi-invariant π_{i,j}.
    Pi {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        file: PathBuf,
    },
    /// The rank-2 parameter α.
    Alpha2 { file: PathBuf },
    /// Reduction onto the versal support.
    Versal { file: PathBuf },
    /// Isomorphism test between two presentations.
    Iso { first: PathBuf, second: PathBuf },
    /// Compare a parameter before and after a change of variable.
    Probe {
        /// gamma, alpha2 or pi
        #[arg(long)]
        param: String,
        #[arg(long)]
        theta: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<i64>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        file: PathBuf,
    },
}

fn job(cli: Cli) -> JobSpec {
    let mut spec = match cli.command {
        Cmd::Bernstein { minimal, file } => {
            let mut s = JobSpec::new(Command::Bernstein, vec![file]);
            s.minimal = minimal;
            s
        }
        Cmd::Jh { file } => JobSpec::new(Command::Jh, vec![file]),
        Cmd::Push { theta, file } => {
            let mut s = JobSpec::new(Command::Push, vec![file]);
            s.theta = Some(theta);
            s
        }
        Cmd::Ssp { file } => JobSpec::new(Command::Ssp, vec![file]),
        Cmd::Delta { file } => JobSpec::new(Command::Delta, vec![file]),
        Cmd::Dual { delta, file } => {
            let mut s = JobSpec::new(Command::Dual, vec![file]);
            s.delta = Some(delta);
            s
        }
        Cmd::Classify3 { file } => JobSpec::new(Command::Classify3, vec![file]),
        Cmd::Gamma { file } => JobSpec::new(Command::Gamma, vec![file]),
        Cmd::Pi { i, j, file } => {
            let mut s = JobSpec::new(Command::Pi, vec![file]);
            s.pair = Some((i, j));
            s
        }
        Cmd::Alpha2 { file } => JobSpec::new(Command::Alpha2, vec![file]),
        Cmd::Versal { file } => JobSpec::new(Command::Versal, vec![file]),
        Cmd::Iso { first, second } => JobSpec::new(Command::Iso, vec![first, second]),
        Cmd::Probe {
            param,
            theta,
            weight,
            i,
            j,
            file,
        } => {
            let mut s = JobSpec::new(Command::Probe, vec![file]);
            s.param = Some(param);
            s.theta = Some(theta);
            s.weight = weight;
            s.pair = i.zip(j);
            s
        }
    };
    spec.order = cli.order;
    spec
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let report = run(&job(cli));
    print!("{}", report.stdout);
    eprint!("{}", report.stderr);
    ExitCode::from(report.code as u8)
}
