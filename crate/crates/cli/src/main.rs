use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use coregroup::frontend::{run_source, Command, ExitStatus, JobSpec, OutputFormat};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Wirtinger,
    Core,
    UnorientedWirtinger,
    Kernel,
    Cover,
    DirectCover,
    Abelianize,
    Homcount,
    Verify13,
    Verify15,
    RoundtripSelftest,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::Wirtinger => Command::Wirtinger,
            Cmd::Core => Command::Core,
            Cmd::UnorientedWirtinger => Command::UnorientedWirtinger,
            Cmd::Kernel => Command::Kernel,
            Cmd::Cover => Command::Cover,
            Cmd::DirectCover => Command::DirectCover,
            Cmd::Abelianize => Command::Abelianize,
            Cmd::Homcount => Command::Homcount,
            Cmd::Verify13 => Command::Verify13,
            Cmd::Verify15 => Command::Verify15,
            Cmd::RoundtripSelftest => Command::RoundtripSelftest,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

/// Core groups, cyclic branched cover presentations and their invariants.
#[derive(Debug, Parser)]
#[command(name = "coregroup", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Input file; `-` or absent reads standard input.
    input: Option<PathBuf>,
    /// Cover degree.
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated target groups, e.g. S3,Z3,Q8.
    #[arg(long, value_delimiter = ',')]
    targets: Vec<String>,
    /// Node budget for each homomorphism search.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Direct-cover transversal generator, by name or 1-based index.
    #[arg(long)]
    axis: Option<String>,
    /// Print the cover presentation before generator elimination.
    #[arg(long)]
    unreduced: bool,
}

fn read_source(args: &Args) -> io::Result<Option<String>> {
    let needs_input = !matches!(args.command, Cmd::RoundtripSelftest) || args.input.is_some();
    if !needs_input {
        return Ok(None);
    }
    let mut text = String::new();
    match &args.input {
        Some(path) if path.as_os_str() != "-" => text = std::fs::read_to_string(path)?,
        _ => {
            io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(Some(text))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let source = match read_source(&args) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: reading input: {e}");
            return ExitCode::from(1);
        }
    };
    let mut job = JobSpec::new(args.command.into());
    job.k = args.k;
    job.targets = args
        .targets
        .iter()
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect();
    job.budget = args.budget;
    job.format = match args.format {
        Format::Text => OutputFormat::Text,
        Format::Structured => OutputFormat::Structured,
    };
    job.axis = args.axis;
    job.unreduced = args.unreduced;

    let outcome = run_source(job, source.as_deref());
    let _ = io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = io::stderr().write_all(outcome.stderr.as_bytes());
    match outcome.status {
        ExitStatus::Success => ExitCode::SUCCESS,
        s => ExitCode::from(s.code() as u8),
    }
}
