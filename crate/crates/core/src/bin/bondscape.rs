use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use bondscape::agent::IntRange;
use bondscape::engine::{run_epoch_traced, ModelConfig, TRACE_HEADER};
use bondscape::experiments::{run_experiment, write_outputs, Preset, DEFAULT_EPOCHS};
use bondscape::landscape::Landscape;
use bondscape::metrics::{reference_check, SummaryStats};

const EXIT_USAGE: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 2;

#[derive(Parser)]
#[command(name = "bondscape", version, about = "Market-maker liquidity simulator for OTC bond markets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a multi-epoch campaign and write its results to a directory
    Run(RunArgs),
    /// Summary statistics of one numeric CSV column
    Stats {
        file: PathBuf,
        #[arg(long)]
        column: String,
        /// Print a CSV row instead of JSON
        #[arg(long)]
        csv: bool,
    },
    /// Recompute the published AOFM summary table from the embedded series
    ReferenceCheck,
    /// Dump the generated client grid as CSV
    Landscape {
        #[arg(long)]
        out: PathBuf,
        /// Model configuration (JSON) whose grid and mounds to use
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Experiment preset (hp1, hp2, hp3, hp4)
    #[arg(long)]
    preset: Option<String>,
    /// Full model configuration (JSON, same fields as ModelConfig); replaces the preset
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_EPOCHS)]
    epochs: usize,
    /// Master seed
    #[arg(long, env = "BONDSCAPE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
    /// Override the number of agents
    #[arg(long)]
    agents: Option<usize>,
    /// Override the vision range, e.g. 1-5
    #[arg(long)]
    vision: Option<IntRange>,
    /// Override the cost range, e.g. 1-2
    #[arg(long)]
    costs: Option<IntRange>,
    /// Override the starting-stock range, e.g. 35-55
    #[arg(long)]
    accumulation: Option<IntRange>,
    /// Override the horizon
    #[arg(long)]
    max_steps: Option<u32>,
    /// Also write a per-step agent trace (trace.csv)
    #[arg(long)]
    trace: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Run(args) => run(args),
        Command::Stats { file, column, csv } => stats(&file, &column, csv),
        Command::ReferenceCheck => Ok(reference()),
        Command::Landscape { out, config } => {
            let config = match config {
                Some(path) => load_config(&path)?,
                None => ModelConfig::default(),
            };
            let grid = Landscape::generate(config.grid.0, config.grid.1, &config.mounds)?;
            grid.write_csv(BufWriter::new(
                File::create(&out).with_context(|| format!("creating {}", out.display()))?,
            ))?;
            let (b, c) = grid.total_resources();
            println!("wrote {} cells to {} (bonds {b}, cash {c})", grid.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_config(path: &Path) -> anyhow::Result<ModelConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config: ModelConfig = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    config.validate()?;
    Ok(config)
}

fn run(args: RunArgs) -> anyhow::Result<ExitCode> {
    let (name, mut config) = match (&args.preset, &args.config) {
        (_, Some(path)) => (args.preset.clone().unwrap_or_else(|| "custom".into()), load_config(path)?),
        (Some(p), None) => {
            let preset: Preset = p.parse()?;
            (preset.name().to_string(), preset.config(args.seed))
        }
        (None, None) => bail!("either --preset or --config is required"),
    };
    if let Some(n) = args.agents {
        config.n_agents = n;
    }
    if let Some(r) = args.vision {
        config.init_ranges.vision = r;
    }
    if let Some(r) = args.costs {
        config.init_ranges.cost = r;
    }
    if let Some(r) = args.accumulation {
        config.init_ranges.accumulation = r;
    }
    if let Some(t) = args.max_steps {
        config.max_steps = t;
    }

    let result = run_experiment(&name, &config, args.epochs, args.seed, args.jobs)?;
    write_outputs(&result, &args.out)?;
    if args.trace {
        let mut w = csv::Writer::from_writer(BufWriter::new(File::create(args.out.join("trace.csv"))?));
        w.write_record(TRACE_HEADER)?;
        for epoch in 0..args.epochs as u64 {
            run_epoch_traced(&result.manifest.config, epoch, &mut w)?;
        }
        w.flush()?;
    }

    let s = &result.stats;
    let mut out = io::stdout().lock();
    writeln!(out, "{name}: {} epochs, seed {}", result.n_epochs(), args.seed)?;
    writeln!(
        out,
        "trade %: median {:.2}  mean {:.2}  std {:.2}  min {:.2}  q1 {:.2}  q3 {:.2}  max {:.2}",
        s.trade_pct.median, s.trade_pct.mean, s.trade_pct.std, s.trade_pct.min, s.trade_pct.q1, s.trade_pct.q3, s.trade_pct.max
    )?;
    writeln!(
        out,
        "lifespan: mean {:.1}  median {:.1}  max {:.0}",
        s.lifespan.mean, s.lifespan.median, s.lifespan.max
    )?;
    writeln!(
        out,
        "zero-trade epochs {:.1}%  epochs with survivors at horizon {:.1}%",
        s.zero_trade_share, s.survivor_share_at_horizon
    )?;
    writeln!(out, "results in {}", args.out.display())?;
    Ok(ExitCode::SUCCESS)
}

fn stats(file: &Path, column: &str, as_csv: bool) -> anyhow::Result<ExitCode> {
    let mut reader = csv::Reader::from_path(file).with_context(|| format!("opening {}", file.display()))?;
    let idx = reader
        .headers()?
        .iter()
        .position(|h| h == column)
        .with_context(|| format!("no column `{column}` in {}", file.display()))?;
    let mut values = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let field = record.get(idx).unwrap_or("");
        let v: f64 = field
            .trim()
            .parse()
            .with_context(|| format!("row {}: `{field}` is not a number", line + 1))?;
        values.push(v);
    }
    let s = SummaryStats::from_values(&values)?;
    if as_csv {
        let mut w = csv::Writer::from_writer(io::stdout().lock());
        w.write_record(SummaryStats::CSV_HEADER)?;
        w.write_record(s.csv_row())?;
        w.flush()?;
    } else {
        println!("{}", serde_json::to_string_pretty(&s)?);
    }
    Ok(ExitCode::SUCCESS)
}

fn reference() -> ExitCode {
    let checks = reference_check();
    println!("{:<8} {:>10} {:>10} {:>8}  result", "field", "computed", "published", "tol");
    for c in &checks {
        println!(
            "{:<8} {:>10.4} {:>10.2} {:>8.2}  {}",
            c.field,
            c.computed,
            c.published,
            c.tolerance,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    if checks.iter().all(|c| c.pass) {
        println!("reference check passed");
        ExitCode::SUCCESS
    } else {
        println!("reference check FAILED");
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}
