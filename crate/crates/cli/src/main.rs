use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypergamma_cli::{parse_spec, render, run, write_csv, CliError, Command, Mode, Outcome, RunOptions};

/// Exact computations for hypergeometric series on GL_n.
#[derive(Parser)]
#[command(name = "hypergamma", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Spec document; read from stdin when omitted.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// RNG seed for Monte-Carlo estimates.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Series truncation order.
    #[arg(long, global = true)]
    truncation: Option<i64>,
    /// Report exact rationals (default).
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Report floats.
    #[arg(long, global = true)]
    float: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the term table as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension of an irreducible representation.
    Dim,
    /// Schur polynomial at a point.
    Schur,
    /// Degree of the orbit closure.
    Degree,
    /// Orbits of faces of the weight polytope.
    Orbits,
    /// Nonresonance of a character.
    Nonresonant,
    /// Cobase test for toric data.
    Cobase,
    /// Haar integral over U_n.
    Integrate,
    /// Contour Fourier transform of a class function.
    Fourier,
    /// 3j table for a GL_2 triple.
    Threej,
    /// Γ-series operations.
    Series {
        #[command(subcommand)]
        action: SeriesCmd,
    },
}

#[derive(Subcommand)]
enum SeriesCmd {
    /// List the terms.
    Expand,
    /// Evaluate at a point.
    Eval,
    /// Run an identity check.
    Check,
}

fn command(c: &Cmd) -> Command {
    match c {
        Cmd::Dim => Command::Dim,
        Cmd::Schur => Command::Schur,
        Cmd::Degree => Command::Degree,
        Cmd::Orbits => Command::Orbits,
        Cmd::Nonresonant => Command::Nonresonant,
        Cmd::Cobase => Command::Cobase,
        Cmd::Integrate => Command::Integrate,
        Cmd::Fourier => Command::Fourier,
        Cmd::Threej => Command::Threej,
        Cmd::Series { action: SeriesCmd::Expand } => Command::SeriesExpand,
        Cmd::Series { action: SeriesCmd::Eval } => Command::SeriesEval,
        Cmd::Series { action: SeriesCmd::Check } => Command::SeriesCheck,
    }
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let text = match &cli.common.spec {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(e.to_string()))?;
            s
        }
    };
    let spec = parse_spec(&text)?;
    let opts = RunOptions {
        mode: if cli.common.float { Mode::Float } else { Mode::Exact },
        seed: cli.common.seed,
        truncation: cli.common.truncation,
    };
    let out = run(command(&cli.command), &spec, &opts)?;
    let rendered = render(&out.report);
    match &cli.common.out {
        Some(p) => std::fs::write(p, rendered).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => print!("{rendered}"),
    }
    if let Some(p) = &cli.common.csv {
        let table = out.table.as_ref().ok_or_else(|| CliError::Usage("this command has no term table".into()))?;
        let f = std::fs::File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        write_csv(table, f)?;
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => ExitCode::from(out.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
