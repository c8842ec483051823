use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use multideg::frontend::{parse_problem, run, Command, RunError, RunOptions};

#[derive(Parser)]
#[command(name = "multideg", version, about = "Multidegrees of bifiltered D-modules")]
struct Cli {
    /// Emit a JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Term order on the homogenized ring, e.g. `grevlex(dx1,dx2)`.
    #[arg(long, global = true, value_name = "SPEC")]
    order: Option<String>,
    /// Include the resolution (ranks and shifts per level).
    #[arg(long, global = true)]
    show_resolution: bool,
    /// Also check that each level generates the kernel of the previous map.
    #[arg(long, global = true)]
    verify_exact: bool,
    /// Accept negative shifts.
    #[arg(long, global = true)]
    allow_negative_shifts: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// K-polynomial, codimension and multidegree.
    Multidegree { file: PathBuf },
    /// The multidegree report plus volume, generic prediction and the
    /// Cohen-Macaulay test.
    Gkz { file: PathBuf },
    /// Reduced Gröbner basis of the toric ideal.
    Toric { file: PathBuf },
    /// Normalized volume of the matrix.
    Volume { file: PathBuf },
    /// The bifiltered free resolution.
    Resolve { file: PathBuf },
    /// Multidegrees over every parameter in `beta_list`.
    Sweep { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, file) = match cli.cmd {
        Cmd::Multidegree { file } => (Command::Multidegree, file),
        Cmd::Gkz { file } => (Command::Gkz, file),
        Cmd::Toric { file } => (Command::Toric, file),
        Cmd::Volume { file } => (Command::Volume, file),
        Cmd::Resolve { file } => (Command::Resolve, file),
        Cmd::Sweep { file } => (Command::Sweep, file),
    };
    let src = match std::fs::read_to_string(&file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        json: cli.json,
        order: cli.order,
        show_resolution: cli.show_resolution,
        verify_exactness: cli.verify_exact,
        allow_negative_shifts: cli.allow_negative_shifts,
    };
    let result = parse_problem(&src)
        .map_err(RunError::from)
        .and_then(|job| run(&job, command, &opts));
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let RunError::Verification { output, .. } = &e {
                print!("{output}");
            }
            eprintln!("{}: {e}", file.display());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
