use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use markov_orlicz_cli::{emit, parse_config_in, run, Format, EXIT_ERROR};

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Both,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Both => Format::Both,
        }
    }
}

/// Run a Markov-Bernstein / Orlicz-norm experiment described by a config file.
#[derive(Parser)]
#[command(name = "markov-orlicz", version, about)]
struct Cli {
    /// Experiment configuration file
    #[arg(long)]
    config: PathBuf,
    /// Output path (overrides [output] path); stdout when neither is set
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (overrides [output] format)
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Seed (overrides [experiment] seed)
    #[arg(long)]
    seed: Option<u64>,
    /// Progress messages on stderr
    #[arg(long)]
    verbose: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", cli.config.display());
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let base = cli.config.parent().map(PathBuf::from).unwrap_or_default();
    let mut cfg = match parse_config_in(&text, &base) {
        Ok(c) => c,
        Err(errs) => {
            eprintln!("{}: invalid configuration", cli.config.display());
            eprintln!("{errs}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    if let Some(s) = cli.seed {
        cfg.set_seed(s);
    }
    cfg.set_output(cli.out, cli.format.map(Format::from));
    let report = run(&cfg, cli.verbose);
    if let Err(e) = emit(&report, cfg.format, cfg.output_path.as_deref()) {
        eprintln!("{e}");
        return ExitCode::from(EXIT_ERROR as u8);
    }
    ExitCode::from(report.exit_code as u8)
}
