//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p bondscape --test acceptance`.

mod oracle;
mod properties;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bondscape::experiments::{run_experiment, ExperimentResult, Preset};
use bondscape::metrics::reference_check;

/// Fixed master seed for the calibration campaigns.
const CAMPAIGN_SEED: u64 = 2024;
const CAMPAIGN_EPOCHS: usize = 100;
const CAMPAIGN_JOBS: usize = 4;

type Property = fn() -> Result<(), String>;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn reference() -> Verdict {
    let start = Instant::now();
    let checks = reference_check();
    let elapsed = start.elapsed();
    let failed: Vec<_> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} {:.4} vs {}", c.field, c.computed, c.published))
        .collect();
    let pass = failed.is_empty() && elapsed < Duration::from_secs(1);
    let detail = if failed.is_empty() {
        format!("all {} fields within tolerance in {}", checks.len(), secs(elapsed))
    } else {
        failed.join("; ")
    };
    Verdict::new(pass, detail)
}

struct Campaigns {
    hp: [ExperimentResult; 4],
    hp1_time: Duration,
}

fn campaigns() -> Campaigns {
    let run = |p: Preset| {
        run_experiment(p.name(), &p.config(CAMPAIGN_SEED), CAMPAIGN_EPOCHS, CAMPAIGN_SEED, CAMPAIGN_JOBS).expect("preset campaign runs")
    };
    let start = Instant::now();
    let hp1 = run(Preset::Hp1);
    let hp1_time = start.elapsed();
    Campaigns {
        hp: [hp1, run(Preset::Hp2), run(Preset::Hp3), run(Preset::Hp4)],
        hp1_time,
    }
}

fn hp1_calibration(c: &Campaigns) -> Verdict {
    let s = &c.hp[0].stats;
    let t = &s.trade_pct;
    let pass = (15.0..=45.0).contains(&t.median)
        && t.min <= 5.0
        && t.max >= 80.0
        && s.survivor_share_at_horizon >= 40.0
        && c.hp1_time < Duration::from_secs(120);
    Verdict::new(
        pass,
        format!(
            "median {:.2} (15..45), range [{:.2}, {:.2}] (must cover [5, 80]), survivors {:.0}% (>= 40), {}",
            t.median,
            t.min,
            t.max,
            s.survivor_share_at_horizon,
            secs(c.hp1_time)
        ),
    )
}

fn hp2_collapse(c: &Campaigns) -> Verdict {
    let s = &c.hp[1].stats;
    let pass = s.zero_trade_share >= 50.0 && s.trade_pct.median < 5.0;
    Verdict::new(
        pass,
        format!(
            "zero-trade epochs {:.0}% (>= 50), median {:.2} (< 5)",
            s.zero_trade_share, s.trade_pct.median
        ),
    )
}

fn hp3_recovery(c: &Campaigns) -> Verdict {
    let (m1, m2) = (c.hp[0].stats.trade_pct.median, c.hp[1].stats.trade_pct.median);
    let t = &c.hp[2].stats.trade_pct;
    let pass = m2 < t.median && t.median < m1 && (2.0..=12.0).contains(&t.mean);
    Verdict::new(
        pass,
        format!("median {m2:.2} < {:.2} < {m1:.2}, mean {:.2} (2..12)", t.median, t.mean),
    )
}

fn hp4_instability(c: &Campaigns) -> Verdict {
    let (s1, s4) = (&c.hp[0].stats, &c.hp[3].stats);
    let pass =
        s4.lifespan.mean < 0.1 * s1.lifespan.mean && s4.survivor_share_at_horizon == 0.0 && s4.trade_pct.median > s1.trade_pct.median;
    Verdict::new(
        pass,
        format!(
            "lifespan {:.1} vs hp1 {:.1} (< 10%), survivors {:.0}% (0), median {:.2} > hp1 {:.2}",
            s4.lifespan.mean, s1.lifespan.mean, s4.survivor_share_at_horizon, s4.trade_pct.median, s1.trade_pct.median
        ),
    )
}

fn mechanism() -> Verdict {
    let start = Instant::now();
    let props: [(&str, Property); 6] = [
        ("a welfare", properties::welfare_strictly_increases),
        ("b price", properties::price_bracketed),
        ("c conservation", properties::trading_conserves),
        ("d landscape", properties::landscape_never_grows),
        ("e parallelism", properties::parallelism_is_invisible),
        ("f exhausted", properties::exhausted_agents_never_act),
    ];
    let failures: Vec<String> = props
        .iter()
        .filter_map(|(name, f)| f().err().map(|e| format!("({name}) {e}")))
        .collect();
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(30);
    let detail = if failures.is_empty() {
        format!("6 properties x {} cases in {}", properties::CASES, secs(elapsed))
    } else {
        failures.join("; ")
    };
    Verdict::new(pass, detail)
}

fn oracle_equivalence() -> Verdict {
    let default_rule = bondscape::engine::ModelConfig::default().lot_rule;
    let (steps, lots, bad) = oracle::compare(0..100, default_rule);
    Verdict::new(
        bad.is_empty(),
        if bad.is_empty() {
            format!("100 seeds, {steps} steps, {lots} lots identical")
        } else {
            bad.join("; ")
        },
    )
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |n: u32, name: &str, v: Verdict| {
        all &= v.pass;
        println!("criterion {n} {:<28} {}  {}", name, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    };
    report(1, "reference reproduction", reference());
    let c = campaigns();
    report(2, "hp1 calibration", hp1_calibration(&c));
    report(3, "hp2 collapse", hp2_collapse(&c));
    report(4, "hp3 partial recovery", hp3_recovery(&c));
    report(5, "hp4 instability", hp4_instability(&c));
    report(6, "mechanism properties", mechanism());
    report(7, "oracle equivalence", oracle_equivalence());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
