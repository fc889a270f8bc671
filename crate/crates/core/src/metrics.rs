//! Distribution statistics over epochs and the embedded AOFM reference data.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::engine::EpochResult;
use crate::error::{Error, Result};

/// Share of interactions that were MM-to-MM trades, in percent.
pub fn trade_fraction(result: &EpochResult) -> f64 {
    trade_percent(result.n_trade_events, result.n_service_events)
}

pub fn trade_percent(trades: u64, services: u64) -> f64 {
    let total = trades + services;
    if total == 0 {
        return 0.0;
    }
    100.0 * trades as f64 / total as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n - 1); 0 for a single value.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub n: usize,
}

impl SummaryStats {
    /// Quartiles interpolate linearly at rank `(n + 1) p` (1-based), clamped
    /// to the extremes: the spreadsheet "exclusive" quartile.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("summary statistics of an empty sample".into()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Domain("summary statistics of a sample containing NaN".into()));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let mean = sorted.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let q1 = quantile_exclusive(&sorted, 0.25);
        let median = quantile_exclusive(&sorted, 0.5);
        let q3 = quantile_exclusive(&sorted, 0.75);
        Ok(Self {
            mean,
            median,
            std,
            min: sorted[0],
            max: sorted[n - 1],
            q1,
            q3,
            iqr: q3 - q1,
            n,
        })
    }

    pub const CSV_HEADER: [&'static str; 9] = ["mean", "median", "std", "min", "max", "q1", "q3", "iqr", "n"];

    pub fn csv_row(&self) -> [String; 9] {
        [
            self.mean.to_string(),
            self.median.to_string(),
            self.std.to_string(),
            self.min.to_string(),
            self.max.to_string(),
            self.q1.to_string(),
            self.q3.to_string(),
            self.iqr.to_string(),
            self.n.to_string(),
        ]
    }
}

fn quantile_exclusive(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = (n as f64 + 1.0) * p;
    if rank <= 1.0 {
        return sorted[0];
    }
    if rank >= n as f64 {
        return sorted[n - 1];
    }
    let lo = rank.floor() as usize;
    let frac = rank - lo as f64;
    sorted[lo - 1] + frac * (sorted[lo] - sorted[lo - 1])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub count: usize,
    pub cumulative_pct: f64,
}

/// Equal-width bins over `[min, max]`; the last bin includes `max`. A sample
/// with no spread lands entirely in the first bin.
pub fn histogram(values: &[f64], n_bins: usize) -> Result<Vec<HistogramBin>> {
    if n_bins == 0 {
        return Err(Error::Domain("histogram needs at least one bin".into()));
    }
    if values.is_empty() {
        return Ok(Vec::new());
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (max - min) / n_bins as f64;
    let mut counts = vec![0usize; n_bins];
    for &v in values {
        let idx = if width > 0.0 {
            (((v - min) / width) as usize).min(n_bins - 1)
        } else {
            0
        };
        counts[idx] += 1;
    }
    let total = values.len() as f64;
    let mut running = 0;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| {
            running += count;
            HistogramBin {
                lower: min + i as f64 * width,
                count,
                cumulative_pct: running as f64 / total * 100.0,
            }
        })
        .collect())
}

pub fn write_histogram_csv<W: Write>(bins: &[HistogramBin], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bin_lower", "count", "cumulative_pct"])?;
    for b in bins {
        w.write_record([b.lower.to_string(), b.count.to_string(), b.cumulative_pct.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Percent of epochs without a single MM-to-MM trade.
pub fn zero_trade_epoch_share(results: &[EpochResult]) -> Result<f64> {
    if results.is_empty() {
        return Err(Error::Domain("zero-trade share of no epochs".into()));
    }
    let zero = results.iter().filter(|r| r.n_trade_events == 0).count();
    Ok(100.0 * zero as f64 / results.len() as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSeries {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
}

const AOFM_INTERBANK_PCT: [(&str, f64); 32] = [
    ("Sep 16", 28.357),
    ("Dec 16", 29.266),
    ("Mar 17", 26.316),
    ("Jun 17", 27.980),
    ("Sep 17", 28.729),
    ("Dec 17", 28.252),
    ("Mar 18", 26.779),
    ("Jun 18", 23.524),
    ("Sep 18", 24.873),
    ("Dec 18", 24.420),
    ("Mar 19", 23.654),
    ("Jun 19", 22.075),
    ("Sep 19", 27.104),
    ("Dec 19", 31.115),
    ("Mar 20", 29.303),
    ("Jun 20", 27.083),
    ("Sep 20", 28.698),
    ("Dec 20", 23.240),
    ("Mar 21", 22.865),
    ("Jun 21", 21.144),
    ("Sep 21", 15.935),
    ("Dec 21", 19.344),
    ("Mar 22", 25.486),
    ("Jun 22", 27.435),
    ("Sep 22", 32.764),
    ("Dec 22", 32.547),
    ("Mar 23", 36.691),
    ("Jun 23", 30.461),
    ("Sep 23", 32.398),
    ("Dec 23", 30.656),
    ("Mar 24", 36.036),
    ("Jun 24", 26.837),
];

/// Quarterly share (percent) of Australian government bond secondary-market
/// turnover traded between market makers, Sep 2016 to Jun 2024 (AOFM).
pub fn aofm_reference() -> ReferenceSeries {
    ReferenceSeries {
        labels: AOFM_INTERBANK_PCT.iter().map(|(l, _)| l.to_string()).collect(),
        values: AOFM_INTERBANK_PCT.iter().map(|&(_, v)| v).collect(),
    }
}

/// Published quarterly summary of the AOFM series, in percent.
pub const AOFM_PUBLISHED: SummaryStats = SummaryStats {
    mean: 27.23,
    median: 27.27,
    std: 4.54,
    min: 15.94,
    max: 36.69,
    q1: 23.85,
    q3: 30.17,
    iqr: 6.33,
    n: 32,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldCheck {
    pub field: &'static str,
    pub computed: f64,
    pub published: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Recomputes the published summary from the embedded series. Mean, min and
/// max are method-free and must agree to 0.01; median and std to 0.05; the
/// quartiles, being method-sensitive, to 0.15.
pub fn reference_check() -> Vec<FieldCheck> {
    let stats = SummaryStats::from_values(&aofm_reference().values).expect("series is non-empty");
    let p = AOFM_PUBLISHED;
    [
        ("mean", stats.mean, p.mean, 0.01),
        ("median", stats.median, p.median, 0.05),
        ("std", stats.std, p.std, 0.05),
        ("min", stats.min, p.min, 0.01),
        ("max", stats.max, p.max, 0.01),
        ("q1", stats.q1, p.q1, 0.15),
        ("q3", stats.q3, p.q3, 0.15),
        ("iqr", stats.iqr, p.iqr, 0.15),
    ]
    .into_iter()
    .map(|(field, computed, published, tolerance)| FieldCheck {
        field,
        computed,
        published,
        tolerance,
        // rounding slack so an exact two-decimal match on the band edge passes
        pass: (computed - published).abs() <= tolerance + 1e-9,
    })
    .collect()
}
