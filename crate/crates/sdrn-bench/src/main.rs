//! Command-line interface for the benchmark harness.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use sdrn_bench::config::{parse_channels, Algo, ConfigFile, ExperimentConfig};
use sdrn_bench::error::{BenchError, Result};
use sdrn_bench::loader::LoadedDataset;
use sdrn_bench::report::{self, Document};
use sdrn_bench::runner::run_trials;
use sdrn_bench::sweeps::{sweep_scale, sweep_vigilance};
use sdrn_bench::{datasets, fetch, loader};

#[derive(Parser)]
#[command(
    name = "sdrn-bench",
    version,
    about = "Clustering benchmarks for the sdrn library"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Download and verify a built-in dataset (or `all`) into the cache.
    Fetch {
        /// Dataset name, or `all` for every built-in dataset.
        dataset: String,
    },
    /// Run repeated shuffled trials of one algorithm on one dataset.
    Run(RunArgs),
    /// Run trials across a grid of vigilance values.
    SweepVigilance(RunArgs),
    /// Run trials across a grid of uniform scale factors.
    SweepScale(RunArgs),
    /// Merge the run reports under a directory into one summary table.
    Report {
        /// Directory tree to scan for report.json files.
        #[arg(long, default_value = "bench-out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Built-in dataset name, or a path to a delimited file.
    #[arg(long)]
    dataset: Option<String>,
    #[arg(long, value_enum)]
    algo: Option<Algo>,
    /// Vigilance threshold in [0, 1).
    #[arg(long)]
    rho: Option<f64>,
    /// Grouping overlap threshold in (0, 2].
    #[arg(long)]
    tau: Option<f64>,
    /// Activation decay rate.
    #[arg(long)]
    alpha: Option<f64>,
    /// Node template learning rate in [0, 1].
    #[arg(long)]
    lr: Option<f64>,
    /// Global bounding-box learning rate in (0, 1].
    #[arg(long)]
    glr: Option<f64>,
    /// Number of independently shuffled trials.
    #[arg(long)]
    trials: Option<u32>,
    /// Base seed; trial t shuffles with seed + t.
    #[arg(long)]
    seed: Option<u64>,
    /// Uniform factor applied to every feature value.
    #[arg(long)]
    scale: Option<f64>,
    /// Fraction of points k-means trains on.
    #[arg(long)]
    split_ratio: Option<f64>,
    /// Per-channel dimensions, e.g. `3,2`; default is one channel.
    #[arg(long)]
    channels: Option<String>,
    /// Output directory for report files.
    #[arg(long, default_value = "bench-out")]
    out: PathBuf,
    /// Never touch the network; fail if the dataset is not cached.
    #[arg(long)]
    offline: bool,
    /// Flat key-value TOML file; flags given here still win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Field delimiter for custom dataset files.
    #[arg(long)]
    delimiter: Option<char>,
    /// Label column index (0-based) for custom files; default last.
    #[arg(long)]
    label_col: Option<usize>,
    /// Skip a header row in custom dataset files.
    #[arg(long)]
    has_header: bool,
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &args.config {
        ConfigFile::load(path)?.apply(&mut cfg);
    }
    if let Some(v) = &args.dataset {
        cfg.dataset = v.clone();
    }
    if let Some(v) = args.algo {
        cfg.algo = v;
    }
    macro_rules! flag {
        ($($field:ident),* $(,)?) => {
            $(if let Some(v) = args.$field { cfg.$field = v; })*
        };
    }
    flag!(rho, tau, alpha, lr, glr, trials, seed, scale, split_ratio, delimiter);
    if let Some(raw) = &args.channels {
        cfg.channels = Some(parse_channels(raw)?);
    }
    if args.offline {
        cfg.offline = true;
    }
    if args.label_col.is_some() {
        cfg.label_col = args.label_col;
    }
    if args.has_header {
        cfg.has_header = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load(cfg: &ExperimentConfig) -> Result<LoadedDataset> {
    let channels = cfg.channels.as_deref();
    if let Some(spec) = datasets::by_name(&cfg.dataset) {
        let path = fetch::ensure(&spec, cfg.offline)?;
        return loader::load_dataset(&path, &spec, channels);
    }
    let path = Path::new(&cfg.dataset);
    if !path.is_file() {
        return Err(BenchError::Input(format!(
            "{:?} is not a built-in dataset ({}) or an existing file",
            cfg.dataset,
            datasets::ALL
                .iter()
                .map(|s| s.name)
                .collect::<Vec<_>>()
                .join(", ")
        )));
    }
    if !cfg.delimiter.is_ascii() {
        return Err(BenchError::Input(format!(
            "delimiter {:?} must be a single ASCII character",
            cfg.delimiter
        )));
    }
    loader::load_delimited(
        path,
        cfg.delimiter as u8,
        cfg.has_header,
        cfg.label_col,
        channels,
    )
}

fn cmd_fetch(name: &str) -> Result<()> {
    let specs: Vec<_> = if name == "all" {
        datasets::ALL.to_vec()
    } else {
        vec![datasets::by_name(name).ok_or_else(|| {
            BenchError::Input(format!(
                "unknown dataset {name:?}; expected one of {} or `all`",
                datasets::ALL
                    .iter()
                    .map(|s| s.name)
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })?]
    };
    for spec in specs {
        let path = fetch::fetch(&spec)?;
        println!("{}: {} (sha256 verified)", spec.name, path.display());
    }
    Ok(())
}

fn cmd_run(args: &RunArgs, mode: SweepMode) -> Result<()> {
    let cfg = build_config(args)?;
    let data = load(&cfg)?;
    let text = match mode {
        SweepMode::None => {
            let (run, timings) = run_trials(&cfg, &data)?;
            report::emit_all(&args.out, &Document::Run(run), &timings)?
        }
        SweepMode::Vigilance => {
            let (sweep, timings) = sweep_vigilance(&cfg, &data, None)?;
            report::emit_all(&args.out, &Document::VigilanceSweep(sweep), &timings)?
        }
        SweepMode::Scale => {
            let (sweep, timings) = sweep_scale(&cfg, &data, None)?;
            report::emit_all(&args.out, &Document::ScaleSweep(sweep), &timings)?
        }
    };
    print!("{text}");
    println!("report written to {}", args.out.join("report.json").display());
    Ok(())
}

enum SweepMode {
    None,
    Vigilance,
    Scale,
}

fn collect_reports(dir: &Path, found: &mut Vec<PathBuf>) -> Result<()> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| BenchError::io(&dir.display().to_string(), &e))?;
    for entry in entries {
        let entry = entry.map_err(|e| BenchError::io(&dir.display().to_string(), &e))?;
        let path = entry.path();
        if path.is_dir() {
            collect_reports(&path, found)?;
        } else if path.file_name().is_some_and(|n| n == "report.json") {
            found.push(path);
        }
    }
    Ok(())
}

fn cmd_report(out: &Path) -> Result<()> {
    let mut paths = Vec::new();
    collect_reports(out, &mut paths)?;
    paths.sort();
    let mut runs = Vec::new();
    for path in &paths {
        if let Document::Run(run) = report::read_report(path)? {
            runs.push(run);
        }
    }
    if runs.is_empty() {
        return Err(BenchError::Input(format!(
            "no run reports found under {}",
            out.display()
        )));
    }
    let refs: Vec<&_> = runs.iter().collect();
    let csv = report::summarize_runs(&refs);
    std::fs::write(out.join("summary.csv"), &csv)
        .map_err(|e| BenchError::io(&out.display().to_string(), &e))?;
    print!("{}", report::render_runs_text(&refs));
    println!("merged {} runs into {}", runs.len(), out.join("summary.csv").display());
    Ok(())
}

fn real_main(cli: Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Fetch { dataset } => cmd_fetch(dataset),
        Cmd::Run(args) => cmd_run(args, SweepMode::None),
        Cmd::SweepVigilance(args) => cmd_run(args, SweepMode::Vigilance),
        Cmd::SweepScale(args) => cmd_run(args, SweepMode::Scale),
        Cmd::Report { out } => cmd_report(out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match real_main(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
