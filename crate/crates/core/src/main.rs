use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tamed_index::config::{parse_config, parse_window_flag, ProblemConfig};
use tamed_index::report::{run_analytic, run_compare, run_topological, Format, RunError};

/// Equivariant index of a tamed Dirac operator, from the fixed set and from
/// a discretized model operator.
#[derive(Parser)]
#[command(name = "tamed-index", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fixed-point (topological) index on the window.
    Topo(Args),
    /// Kernel counts of the discretized model operator.
    Analytic(Args),
    /// Both sides, weight by weight. Exit 0 MATCH, 2 PARTIAL, 3 MISMATCH.
    Compare(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Problem configuration file.
    config: PathBuf,
    /// Override the window, as LO:HI.
    #[arg(long, value_name = "LO:HI", allow_hyphen_values = true)]
    window: Option<String>,
    /// Override the grid size N of the analytic model.
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
    /// Override the kernel tolerance.
    #[arg(long, value_name = "T")]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Machine,
}

fn load(args: &Args) -> Result<ProblemConfig, RunError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| RunError::Usage(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(w) = &args.window {
        let (lo, hi) = parse_window_flag(w).ok_or_else(|| RunError::Usage(format!("malformed --window `{w}`")))?;
        cfg.set_window(lo, hi)?;
    }
    if args.grid.is_some() || args.tol.is_some() {
        let a = cfg
            .analytic
            .as_mut()
            .ok_or_else(|| RunError::Usage("--grid and --tol need an [analytic] section".into()))?;
        if let Some(n) = args.grid {
            a.points = n;
        }
        if let Some(t) = args.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(RunError::Usage(format!("--tol must be positive, got {t}")));
            }
            a.tol = Some(t);
        }
        a.plane_model()?;
    }
    Ok(cfg)
}

fn run(command: Command) -> Result<(String, i32), RunError> {
    let (args, which) = match &command {
        Command::Topo(a) => (a, 0),
        Command::Analytic(a) => (a, 1),
        Command::Compare(a) => (a, 2),
    };
    let format = match args.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Machine => Format::Machine,
    };
    let cfg = load(args)?;
    Ok(match which {
        0 => (run_topological(&cfg)?.render(format), 0),
        1 => (run_analytic(&cfg)?.render(format), 0),
        _ => {
            let r = run_compare(&cfg)?;
            (r.render(format), r.verdict.exit_code())
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
