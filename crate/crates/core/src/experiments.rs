//! Hypothesis presets and the multi-epoch campaign runner.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::agent::IntRange;
use crate::engine::{run_epoch, EpochResult, ModelConfig};
use crate::error::{Error, Result};
use crate::metrics::{histogram, trade_fraction, write_histogram_csv, zero_trade_epoch_share, HistogramBin, SummaryStats};
use crate::rng::RNG_FAMILY;

pub const DEFAULT_EPOCHS: usize = 100;
pub const DEFAULT_HISTOGRAM_BINS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Australian calibration: 4 agents, vision 1-49, costs 1-5.
    Hp1,
    /// Narrow client breadth: vision 1-5.
    Hp2,
    /// Narrow client breadth with 16 agents.
    Hp3,
    /// Doubled business costs: 5-10.
    Hp4,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Hp1, Preset::Hp2, Preset::Hp3, Preset::Hp4];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Hp1 => "hp1",
            Preset::Hp2 => "hp2",
            Preset::Hp3 => "hp3",
            Preset::Hp4 => "hp4",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::Hp1 => "Australian calibration: 4 market makers, client breadth 1-49, costs 1-5, stocks 35-55",
            Preset::Hp2 => "Reduced client breadth: as hp1 with vision 1-5",
            Preset::Hp3 => "Reduced client breadth, more market makers: as hp2 with 16 agents",
            Preset::Hp4 => "Doubled business costs: as hp1 with costs 5-10",
        }
    }

    pub fn config(self, seed: u64) -> ModelConfig {
        let mut c = ModelConfig {
            seed,
            ..ModelConfig::default()
        };
        match self {
            Preset::Hp1 => {}
            Preset::Hp2 => c.init_ranges.vision = IntRange::new(1, 5),
            Preset::Hp3 => {
                c.init_ranges.vision = IntRange::new(1, 5);
                c.n_agents = 16;
            }
            Preset::Hp4 => c.init_ranges.cost = IntRange::new(5, 10),
        }
        c
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// One row of `epochs.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRow {
    pub epoch: u64,
    pub end_step: u32,
    pub trades: u64,
    pub services: u64,
    pub trade_pct: f64,
    pub max_lifespan: u32,
    pub mean_lifespan: f64,
    pub survivors: usize,
}

impl From<&EpochResult> for EpochRow {
    fn from(r: &EpochResult) -> Self {
        Self {
            epoch: r.epoch_index,
            end_step: r.end_step,
            trades: r.n_trade_events,
            services: r.n_service_events,
            trade_pct: trade_fraction(r),
            max_lifespan: r.max_lifespan(),
            mean_lifespan: r.mean_lifespan(),
            survivors: r.survivors_at_horizon,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub preset: String,
    pub n_epochs: usize,
    pub master_seed: u64,
    pub rng_family: String,
    pub code_version: String,
    pub interaction_definition: String,
    pub histogram_bins: usize,
    pub config: ModelConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignStats {
    pub trade_pct: SummaryStats,
    /// Over every agent of every epoch.
    pub lifespan: SummaryStats,
    pub zero_trade_share: f64,
    pub survivor_share_at_horizon: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub preset: String,
    pub rows: Vec<EpochRow>,
    pub epochs: Vec<EpochResult>,
    pub stats: CampaignStats,
    pub manifest: Manifest,
}

impl ExperimentResult {
    pub fn n_epochs(&self) -> usize {
        self.rows.len()
    }

    pub fn trade_pcts(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.trade_pct).collect()
    }

    pub fn histogram(&self, n_bins: usize) -> Result<Vec<HistogramBin>> {
        histogram(&self.trade_pcts(), n_bins)
    }
}

/// Runs epochs `0..n_epochs` of `config` with master seed `master_seed` on a
/// pool of `jobs` workers. Output does not depend on `jobs`.
pub fn run_experiment(preset: &str, config: &ModelConfig, n_epochs: usize, master_seed: u64, jobs: usize) -> Result<ExperimentResult> {
    if n_epochs == 0 {
        return Err(Error::Config("a campaign needs at least one epoch".into()));
    }
    if jobs == 0 {
        return Err(Error::Config("jobs must be at least 1".into()));
    }
    let config = ModelConfig {
        seed: master_seed,
        ..config.clone()
    };
    config.validate()?;
    let mut epochs = run_epochs(&config, n_epochs, jobs)?;
    epochs.sort_by_key(|r| r.epoch_index);
    aggregate(preset, &config, epochs)
}

#[cfg(feature = "parallel")]
fn run_epochs(config: &ModelConfig, n_epochs: usize, jobs: usize) -> Result<Vec<EpochResult>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} workers: {e}")))?;
    pool.install(|| (0..n_epochs as u64).into_par_iter().map(|i| run_epoch(config, i)).collect())
}

#[cfg(not(feature = "parallel"))]
fn run_epochs(config: &ModelConfig, n_epochs: usize, _jobs: usize) -> Result<Vec<EpochResult>> {
    (0..n_epochs as u64).map(|i| run_epoch(config, i)).collect()
}

fn aggregate(preset: &str, config: &ModelConfig, epochs: Vec<EpochResult>) -> Result<ExperimentResult> {
    let rows: Vec<EpochRow> = epochs.iter().map(EpochRow::from).collect();
    let lifespans: Vec<f64> = epochs.iter().flat_map(|e| e.lifespans.values().map(|&v| f64::from(v))).collect();
    let stats = CampaignStats {
        trade_pct: SummaryStats::from_values(&rows.iter().map(|r| r.trade_pct).collect::<Vec<_>>())?,
        // a campaign of agent-free epochs has no lifespans to summarize
        lifespan: SummaryStats::from_values(if lifespans.is_empty() { &[0.0] } else { &lifespans })?,
        zero_trade_share: zero_trade_epoch_share(&epochs)?,
        survivor_share_at_horizon: 100.0 * rows.iter().filter(|r| r.survivors > 0).count() as f64 / rows.len() as f64,
    };
    let manifest = Manifest {
        preset: preset.to_string(),
        n_epochs: rows.len(),
        master_seed: config.seed,
        rng_family: RNG_FAMILY.to_string(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        interaction_definition: format!(
            "one service event per agent-step harvest; one trade event per {:?} (trade_event_unit)",
            config.trade_event_unit
        )
        .to_lowercase(),
        histogram_bins: DEFAULT_HISTOGRAM_BINS,
        config: config.clone(),
    };
    Ok(ExperimentResult {
        preset: preset.to_string(),
        rows,
        epochs,
        stats,
        manifest,
    })
}

pub fn write_epochs_csv<W: Write>(rows: &[EpochRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trades_csv<W: Write>(epochs: &[EpochResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["epoch", "step", "buyer_id", "seller_id", "bonds_moved", "cash_moved", "price"])?;
    for e in epochs {
        for t in &e.trade_records {
            w.write_record([
                e.epoch_index.to_string(),
                t.step.to_string(),
                t.bond_buyer.to_string(),
                t.bond_seller.to_string(),
                t.bonds_moved.to_string(),
                t.cash_moved.to_string(),
                t.price.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_stats_csv<W: Write>(stats: &CampaignStats, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["metric"];
    header.extend(SummaryStats::CSV_HEADER);
    w.write_record(&header)?;
    for (name, s) in [("trade_pct", &stats.trade_pct), ("lifespan", &stats.lifespan)] {
        let mut rec = vec![name.to_string()];
        rec.extend(s.csv_row());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `epochs.csv`, `stats.json`, `stats.csv`, `histogram.csv`,
/// `trades.csv` and `manifest.json` into `dir`.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let create = |name: &str| -> Result<BufWriter<File>> { Ok(BufWriter::new(File::create(dir.join(name))?)) };
    write_epochs_csv(&result.rows, create("epochs.csv")?)?;
    write_trades_csv(&result.epochs, create("trades.csv")?)?;
    write_histogram_csv(&result.histogram(result.manifest.histogram_bins)?, create("histogram.csv")?)?;
    write_stats_csv(&result.stats, create("stats.csv")?)?;
    let mut stats = create("stats.json")?;
    serde_json::to_writer_pretty(&mut stats, &result.stats)?;
    writeln!(stats)?;
    stats.flush()?;
    let mut manifest = create("manifest.json")?;
    serde_json::to_writer_pretty(&mut manifest, &result.manifest)?;
    writeln!(manifest)?;
    manifest.flush()?;
    Ok(())
}
