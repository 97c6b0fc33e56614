use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use trigcurve::Tolerances;
use trigcurve_cli::fixtures::{all_pairs, write_fixture};
use trigcurve_cli::input::read_source;
use trigcurve_cli::plot::{render_svg, PlotOptions};
use trigcurve_cli::report::{analyze, curve_of, AnalyzeOptions, Verdict};
use trigcurve_cli::sweep::{parse_range, run, write_csv, SweepSpec};
use trigcurve_cli::{config, exit_code, EXIT_BOUND_VIOLATED};

/// Self-intersections, rotation numbers and extremal curves of
/// trigonometric curves p(e^{it}).
#[derive(Parser, Debug)]
#[command(name = "trigcurve", version, about)]
struct Cli {
    /// TOML file of tolerances (key = value)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override one tolerance, e.g. --set grid_factor=12 (repeatable)
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Worker threads; defaults to TRIGCURVE_THREADS, then all cores
    #[arg(long, global = true, env = "TRIGCURVE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report for one curve, as JSON
    Analyze {
        /// Inline formula, JSON document, or a file holding either
        input: String,
        /// Treat the input as a rational map (P)/(Q) on the unit circle
        #[arg(long)]
        rational: bool,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Include wall-clock timings (makes the output non-reproducible)
        #[arg(long)]
        timings: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Random-coefficient sweep over (m, n) cells, as CSV
    Sweep {
        /// Range of m, e.g. 1..3 or -3..-1 (inclusive)
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        /// Range of n, e.g. 2..5 (inclusive)
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add a row per cell for the extremal trinomial
        #[arg(long)]
        extremal: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write extremal fixtures {m}_{n}.json
    Extremal {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "all")]
        m: Option<i64>,
        #[arg(long, required_unless_present = "all")]
        n: Option<i64>,
        /// Every 1 <= |m| < n <= max-n
        #[arg(long, conflicts_with_all = ["m", "n"])]
        all: bool,
        #[arg(long, default_value_t = 6)]
        max_n: i64,
        #[arg(long, default_value = "fixtures/extremal")]
        dir: PathBuf,
    },
    /// Draw a curve as SVG
    Plot {
        input: String,
        #[arg(long)]
        rational: bool,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 2048)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        annotate: Switch,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

fn emit(out: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn run_command(cli: Cli, cfg: &Tolerances) -> anyhow::Result<i32> {
    match cli.command {
        Command::Analyze { input, rational, radius, timings, out } => {
            let source = read_source(&input, rational)?;
            let report = analyze(&source, cfg, &AnalyzeOptions { radius, timings })?;
            emit(out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))?;
            Ok(if report.verdict == Verdict::BoundViolated { EXIT_BOUND_VIOLATED } else { 0 })
        }
        Command::Sweep { m, n, trials, seed, extremal, out } => {
            let spec = SweepSpec { m: parse_range(&m)?, n: parse_range(&n)?, trials, seed, extremal };
            let (rows, summary) = run(&spec, cfg)?;
            for (m, n) in &summary.skipped {
                eprintln!("skipped ({m},{n}): only monomials have that support");
            }
            match &out {
                Some(path) => write_csv(&rows, std::fs::File::create(path)?)?,
                None => write_csv(&rows, std::io::stdout().lock())?,
            }
            eprintln!("{} rows, {} violations, {} errors", summary.rows, summary.violations, summary.errors);
            Ok(if summary.violations > 0 { EXIT_BOUND_VIOLATED } else { 0 })
        }
        Command::Extremal { m, n, all, max_n, dir } => {
            let pairs = match (all, m, n) {
                (true, _, _) => all_pairs(max_n),
                (false, Some(m), Some(n)) => vec![(m, n)],
                _ => unreachable!("clap enforces --m/--n or --all"),
            };
            let mut failed = 0;
            let mut stdout = std::io::stdout().lock();
            for (m, n) in pairs {
                match write_fixture(&dir, m, n, cfg) {
                    Ok((path, f)) => {
                        // A closed pipe must not stop the remaining fixtures.
                        let _ = writeln!(stdout, "{} count {} = sigma {}", path.display(), f.extremal.count, f.extremal.sigma);
                    }
                    Err(e) => {
                        failed += 1;
                        eprintln!("({m},{n}): {e}");
                    }
                }
            }
            Ok(if failed > 0 { 1 } else { 0 })
        }
        Command::Plot { input, rational, radius, samples, annotate, out } => {
            let source = read_source(&input, rational)?;
            let report = analyze(&source, cfg, &AnalyzeOptions { radius, timings: false })?;
            let curve = curve_of(&source.curve, report.radius)?;
            let opts = PlotOptions { samples, annotate: annotate == Switch::On, ..PlotOptions::default() };
            emit(out.as_deref(), &render_svg(&report, curve.as_ref(), &opts))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let result = config::load(cli.config.as_deref(), &cli.overrides)
        .map_err(anyhow::Error::from)
        .and_then(|cfg| run_command(cli, &cfg));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
