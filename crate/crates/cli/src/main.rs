use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use superschur_cli::{run_sweep, Check, ConfigError, SweepConfig, VerificationReport};

#[derive(Debug, Parser)]
#[command(
    name = "superschur",
    version,
    about = "Exact verification sweeps for gl(m|n) mixed Schur-Weyl duality"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// key = value config file; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Even dimensions, e.g. 3, 0-3, 0..=3, 1,2.
    #[arg(long, global = true)]
    m: Option<String>,
    /// Odd dimensions.
    #[arg(long, global = true)]
    n: Option<String>,
    /// Number of V factors.
    #[arg(long, global = true)]
    r: Option<String>,
    /// Number of dual factors.
    #[arg(long, global = true)]
    s: Option<String>,

    /// Resource guard on ambient matrix entries N^2 (default 300000).
    #[arg(long, global = true)]
    max_dim: Option<String>,
    /// Resource guard on (m+n)^{2(r+s)} bidegree products (default 1e6).
    #[arg(long, global = true)]
    max_span: Option<String>,
    /// Largest m+n for the symbolic ring checks (default 4).
    #[arg(long, global = true)]
    symbolic_bound: Option<String>,
    /// Odd generators of the Grassmann ring for Berezinian samples (default 4).
    #[arg(long, global = true)]
    grassmann: Option<String>,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Seed for random Berezinian samples.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Random Berezinian samples per (m|n) (default 100).
    #[arg(long, global = true)]
    samples: Option<String>,
    /// Bipartition counting: exact sizes (r,s) or all contractions.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Exit with status 3 when a resource guard skips a point.
    #[arg(long, global = true)]
    strict: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Jsonl,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bidegree span dimension against the image of rho_{r,s}.
    Dims,
    /// Symbolic identities of k[GL(m|n)] and Berezinian laws.
    VerifyRing,
    /// Double centralizer between rho_{r,s} and the walled Brauer algebra.
    SchurWeyl,
    /// Jacobson radical of the image of rho_{r,s}.
    Semisimple,
    /// Cross bipartition counts against centre dimensions.
    Bipartitions,
    /// Every check enabled in the config, written to a directory.
    Report {
        /// Output directory for report.jsonl, report.txt and dims.csv.
        #[arg(long, default_value = "superschur-report")]
        out: PathBuf,
        /// Comma-separated checks, or all.
        #[arg(long)]
        checks: Option<String>,
    },
}

fn build_config(cli: &Cli) -> Result<SweepConfig, ConfigError> {
    let mut cfg = SweepConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    let flags = [
        ("m", &cli.m),
        ("n", &cli.n),
        ("r", &cli.r),
        ("s", &cli.s),
        ("max_dim", &cli.max_dim),
        ("max_span", &cli.max_span),
        ("symbolic_bound", &cli.symbolic_bound),
        ("grassmann", &cli.grassmann),
        ("seed", &cli.seed),
        ("samples", &cli.samples),
        ("mode", &cli.mode),
    ];
    for (key, value) in flags {
        if let Some(value) = value {
            cfg.set(key, value)?;
        }
    }
    if let Some(dir) = &cli.cache_dir {
        cfg.cache_dir = Some(dir.clone());
    }
    cfg.strict |= cli.strict;
    let single = match &cli.command {
        Command::Dims => Some(Check::Dims),
        Command::VerifyRing => Some(Check::VerifyRing),
        Command::SchurWeyl => Some(Check::SchurWeyl),
        Command::Semisimple => Some(Check::Semisimple),
        Command::Bipartitions => Some(Check::Bipartitions),
        Command::Report { checks, .. } => {
            if let Some(checks) = checks {
                cfg.set("checks", checks)?;
            }
            None
        }
    };
    if let Some(check) = single {
        cfg.checks = [check].into_iter().collect();
    }
    Ok(cfg)
}

fn render(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Table => report.to_table(),
        Format::Jsonl => report.to_jsonl(),
        Format::Csv => report.dims_csv(),
    }
}

fn write_report(report: &VerificationReport, out: &PathBuf) -> std::io::Result<()> {
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("report.jsonl"), report.to_jsonl())?;
    std::fs::write(out.join("report.txt"), report.to_table())?;
    std::fs::write(out.join("dims.csv"), report.dims_csv())?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_sweep(&cfg) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: cache directory: {e}");
            return ExitCode::from(2);
        }
    };
    if let Command::Report { out, .. } = &cli.command {
        if let Err(e) = write_report(&report, out) {
            eprintln!("error: writing {}: {e}", out.display());
            return ExitCode::from(2);
        }
        eprintln!("wrote {}", out.display());
    }
    print!("{}", render(&report, cli.format));
    ExitCode::from(report.exit_code(cfg.strict) as u8)
}
