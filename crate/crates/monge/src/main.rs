use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use monge::dsl::parse_system_file;
use monge::examples::builtin;
use monge::report::{analyze, render_text, Options, Request, Status};

#[derive(Parser)]
#[command(name = "monge", version, about = "Exact analysis of Monge-Ampère exterior differential systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the report as a single JSON object.
    #[arg(long, global = true)]
    json: bool,
    /// Random points per numeric non-vanishing check; 0 disables sampling.
    #[arg(long, global = true, default_value_t = monge_core::sample::DEFAULT_SAMPLES)]
    sample: usize,
    /// Seed for the sampling points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic quadratic, discriminant and type.
    Classify { file: PathBuf },
    /// Factor Ω + λdθ for each root.
    Characteristics { file: PathBuf },
    /// Derived flag of each characteristic system.
    DerivedFlag { file: PathBuf },
    /// Integrability and the two assumptions for each characteristic system.
    Hypotheses { file: PathBuf },
    /// Certify every declared intermediate integral.
    CheckIntegral { file: PathBuf },
    /// Pull the system back to every declared surface.
    CheckSurface { file: PathBuf },
    /// Verify the normalform block.
    NormalForm { file: PathBuf },
    /// Run the checks listed in the file, or all of them.
    Report { file: PathBuf },
}

fn read(path: &PathBuf) -> Result<String, String> {
    match std::fs::read_to_string(path) {
        Ok(text) => Ok(text),
        Err(e) => {
            builtin(&path.to_string_lossy()).map(str::to_string).ok_or_else(|| format!("{}: {e}", path.display()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (request, file) = match &cli.command {
        Command::Classify { file } => (Request::Classify, file),
        Command::Characteristics { file } => (Request::Characteristics, file),
        Command::DerivedFlag { file } => (Request::DerivedFlag, file),
        Command::Hypotheses { file } => (Request::Hypotheses, file),
        Command::CheckIntegral { file } => (Request::Integrals, file),
        Command::CheckSurface { file } => (Request::Surfaces, file),
        Command::NormalForm { file } => (Request::NormalForm, file),
        Command::Report { file } => (Request::Report, file),
    };
    let text = match read(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(Status::ParseError.code());
        }
    };
    let spec = match parse_system_file(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}:{e}", file.display());
            return ExitCode::from(Status::ParseError.code());
        }
    };
    let (report, status) = analyze(&spec, request, Options { samples: cli.sample, seed: cli.seed });
    for e in &report.errors {
        eprintln!("error: {e}");
    }
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", render_text(&report));
    }
    ExitCode::from(status.code())
}
