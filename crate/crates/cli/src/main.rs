use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ends_cli::{parse_config, run, Command, Format, Preset, RunOptions};

/// Exact certificates for ends of filtered algebras.
#[derive(Parser, Debug)]
#[command(name = "algebra-ends", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// TOML run configuration.
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Use a built-in configuration instead of a file.
    #[arg(long, value_enum)]
    preset: Option<Preset>,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Override params.seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Include operator columns and echelon rows.
    #[arg(long)]
    dump: bool,

    /// Print the effective configuration and exit.
    #[arg(long)]
    print_config: bool,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Ok(n) = std::env::var("ALGEBRA_ENDS_THREADS") {
        match n.parse::<usize>() {
            Ok(n) => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            Err(_) => return usage(format!("ALGEBRA_ENDS_THREADS must be a number, got `{n}`")),
        }
    }

    let (text, origin) = match (&cli.config, cli.preset) {
        (Some(path), _) => match std::fs::read_to_string(path) {
            Ok(t) => (t, path.display().to_string()),
            Err(e) => return usage(format!("{}: {e}", path.display())),
        },
        (None, Some(p)) => (p.text().to_owned(), format!("preset {p:?}")),
        (None, None) => unreachable!("clap requires one of config or preset"),
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return usage(format!("{origin}: {e}")),
    };
    if let Some(seed) = cli.seed {
        cfg.params.seed = Some(seed);
    }
    if cli.print_config {
        print!("{}", cfg.render());
        return ExitCode::SUCCESS;
    }

    let report = match run(cli.command, &cfg, RunOptions { dump: cli.dump }) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let format = cli.format.or(cfg.output.format).unwrap_or_default();
    let text = match report.render(format) {
        Ok(t) => t,
        Err(e) => return usage(e),
    };
    let out = cli.out.or_else(|| cfg.output.path.as_ref().map(PathBuf::from));
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
