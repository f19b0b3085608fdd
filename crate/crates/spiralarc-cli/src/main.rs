use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spiralarc_cli::doc::{self, Config};
use spiralarc_cli::{run, CliError, Command, Outputs};

#[derive(Parser)]
#[command(name = "spiralarc", version, about = "Biarc and triarc approximation of spirals")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Length-preserving biarc for a spiral's end data.
    Approx(Args),
    /// Length bounds for spirals with given end data.
    Bounds(Args),
    /// Spiral triarc of prescribed length or family parameter.
    Triarc(Args),
    /// Endpoint set of two-level spiral models.
    Model(Args),
    /// Closeness sweep for four-vertex ovals.
    Oval(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Input document (TOML).
    #[arg(long)]
    input: PathBuf,
    /// Report destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Figure path; extra figures get a suffix before the extension.
    #[arg(long)]
    out_svg: Option<PathBuf>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Contact resolution as a multiple of pi.
    #[arg(long)]
    mu_resolution: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    sequential: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", CliError::validation(e.to_string().trim()).json_line());
            return ExitCode::from(2);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.json_line());
            ExitCode::from(e.code)
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (cmd, args) = match cli.command {
        Cmd::Approx(a) => (Command::Approx, a),
        Cmd::Bounds(a) => (Command::Bounds, a),
        Cmd::Triarc(a) => (Command::Triarc, a),
        Cmd::Model(a) => (Command::Model, a),
        Cmd::Oval(a) => (Command::Oval, a),
    };
    let text = fs::read_to_string(&args.input)
        .map_err(|e| CliError::io(format!("{}: {e}", args.input.display())))?;
    let input = doc::parse(&text)?;
    let flags = Config {
        grid: args.grid,
        tol: args.tol,
        mu_resolution: args.mu_resolution,
        steps: args.steps,
        sequential: args.sequential.then_some(true),
    };
    let out = run(cmd, &input, &flags)?;
    write_outputs(&out, &args)
}

fn write(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn with_suffix(path: &Path, name: &str) -> PathBuf {
    if name.is_empty() {
        return path.to_path_buf();
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("figure");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("svg");
    path.with_file_name(format!("{stem}-{name}.{ext}"))
}

fn write_outputs(out: &Outputs, args: &Args) -> Result<(), CliError> {
    let report = out.doc.to_toml();
    match &args.out {
        Some(p) => write(p, &report)?,
        None => print!("{report}"),
    }
    if let Some(p) = &args.out_csv {
        write(p, &out.csv.to_csv()?)?;
    }
    if let Some(p) = &args.out_svg {
        for (name, fig) in &out.svg {
            write(&with_suffix(p, name), &fig.render())?;
        }
    }
    Ok(())
}
