mod artifact;
mod commands;
mod config;
mod error;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use commands::Ctx;
use config::RunConfig;
use error::CliError;
use std::path::PathBuf;
use std::process::ExitCode;
use su3casson::repvariety::GroupKind;

/// Representation varieties, twisted cohomology, holonomy checks and
/// wall-crossing audits. Artifacts are written as JSON (and CSV) into `--out`.
#[derive(Parser, Debug)]
#[command(name = "su3casson", version)]
struct Cli {
    /// Flat `key = value` config file (keys: seed, tol.<name>, bound.<name>).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override one config key, e.g. `--set bound.starts=64`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory for artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Group {
    Su2,
    Su3,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and normalize a presentation.
    Parse {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Find representations and deduplicate conjugacy classes.
    Solve {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long, value_enum, default_value = "su3")]
        group: Group,
    },
    /// Twisted cohomology of each solved class.
    Cohomology {
        #[arg(long)]
        solve: PathBuf,
        #[arg(long)]
        class: Option<usize>,
    },
    /// Three-eigenvalue witnesses and detecting loops for H^1 cocycles.
    Detect {
        #[arg(long)]
        solve: PathBuf,
        #[arg(long)]
        class: Option<usize>,
    },
    /// Hessian spanning checks on U(1)-reducible classes.
    SpanCheck {
        #[arg(long)]
        solve: PathBuf,
        #[arg(long)]
        class: Option<usize>,
    },
    /// Finite-difference verification of the holonomy derivative formulas.
    HolcalcCheck,
    /// Wall-crossing audit of a model family (`pitchfork`, `figure1` or a JSON file).
    Bifurcate {
        #[arg(long)]
        scenario: String,
    },
    /// Markdown and CSV summary of existing artifacts.
    Report {
        /// Directory holding the artifacts; defaults to `--out`.
        #[arg(long)]
        artifacts: Option<PathBuf>,
    },
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut c = RunConfig::default();
    if let Some(p) = &cli.config {
        c.apply_text(&artifact::read_text(p)?)?;
        c.path("config", &p.display().to_string());
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    for o in &cli.overrides {
        let (k, v) = o.split_once('=').ok_or_else(|| CliError::Validation(format!("--set expects KEY=VALUE, got `{o}`")))?;
        c.set(k.trim(), v.trim())?;
    }
    c.path("out", &cli.out.display().to_string());
    Ok(c)
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("SU3CASSON_THREADS") {
        let n: usize = v.parse().map_err(|_| CliError::Validation(format!("SU3CASSON_THREADS must be an integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let mut config = build_config(&cli)?;
    let show = |p: &PathBuf| p.display().to_string();
    match &cli.command {
        Command::Parse { input } => config.path("in", &show(input)),
        Command::Solve { presentation, .. } => config.path("presentation", &show(presentation)),
        Command::Cohomology { solve, .. } | Command::Detect { solve, .. } | Command::SpanCheck { solve, .. } => {
            config.path("solve", &show(solve))
        }
        Command::Bifurcate { scenario } => config.path("scenario", scenario),
        Command::Report { artifacts } => config.path("artifacts", &show(artifacts.as_ref().unwrap_or(&cli.out))),
        Command::HolcalcCheck => {}
    }
    let ctx = Ctx { config, out: cli.out.clone() };
    match cli.command {
        Command::Parse { input } => commands::parse(&ctx, &input),
        Command::Solve { presentation, group } => {
            let g = match group {
                Group::Su2 => GroupKind::Su2InSu3,
                Group::Su3 => GroupKind::Su3,
            };
            commands::solve(&ctx, &presentation, g)
        }
        Command::Cohomology { solve, class } => commands::cohomology(&ctx, &solve, class),
        Command::Detect { solve, class } => commands::detect(&ctx, &solve, class),
        Command::SpanCheck { solve, class } => commands::span_check(&ctx, &solve, class),
        Command::HolcalcCheck => commands::holcalc_check(&ctx),
        Command::Bifurcate { scenario } => commands::bifurcate(&ctx, &scenario),
        Command::Report { artifacts } => report::report(&ctx, artifacts.as_ref().unwrap_or(&cli.out)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("su3casson: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
