//! Mechanism properties over randomized populations and small worlds.

use std::collections::BTreeMap;

use bondscape::agent::{mrs, welfare, AgentInitRanges, IntRange, MarketMaker};
use bondscape::engine::{ModelConfig, Simulation, TradeEventUnit};
use bondscape::experiments::{run_experiment, write_outputs};
use bondscape::landscape::{MoundSpec, Pos, ResourceKind};
use bondscape::rng::epoch_stream;
use bondscape::trading::{trade_session, LotRule, TradeRecord};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub const CASES: u32 = 1000;

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

fn rule() -> impl Strategy<Value = LotRule> {
    prop_oneof![Just(LotRule::Bisect), Just(LotRule::BisectFinal), Just(LotRule::Unit)]
}

/// 2-8 agents on a 10x10 desk with arbitrary integer-ish holdings.
fn population() -> impl Strategy<Value = Vec<MarketMaker>> {
    prop::collection::vec((0usize..10, 0usize..10, 1u32..200, 1u32..200, 1u32..6, 1u32..6, 1u32..10), 2..8).prop_map(|specs| {
        specs
            .into_iter()
            .enumerate()
            .map(|(id, (x, y, b, c, mb, mc, v))| MarketMaker::new(id, Pos::new(x, y), f64::from(b), f64::from(c), mb, mc, v).unwrap())
            .collect()
    })
}

fn small_world() -> impl Strategy<Value = ModelConfig> {
    let mound = (0usize..12, 0usize..12, 1u32..8, 1u32..8, any::<bool>()).prop_map(|(x, y, peak, radius, bond)| {
        let kind = if bond { ResourceKind::Bond } else { ResourceKind::Cash };
        MoundSpec::new(kind, Pos::new(x, y), f64::from(peak), radius)
    });
    (
        prop::collection::vec(mound, 1..5),
        1usize..10,
        (1u32..4, 0u32..6),
        (1u32..4, 0u32..3),
        5u32..40,
        any::<u64>(),
        rule(),
    )
        .prop_map(|(mounds, n, (vlo, vspan), (clo, cspan), steps, seed, lot_rule)| ModelConfig {
            n_agents: n,
            grid: (12, 12),
            mounds,
            init_ranges: AgentInitRanges {
                vision: IntRange::new(vlo, vlo + vspan),
                cost: IntRange::new(clo, clo + cspan),
                accumulation: IntRange::new(5, 40),
            },
            max_steps: steps,
            seed,
            trade_event_unit: TradeEventUnit::Lot,
            lot_rule,
        })
}

/// Replays a session's lots over the pre-session holdings and checks each
/// lot against the state right before it.
/// Called per lot with the (buyer, seller) holdings and costs just before it.
type LotCheck<'a> = dyn FnMut(&TradeRecord, [(f64, f64); 2], [(u32, u32); 2]) -> Result<(), TestCaseError> + 'a;

fn check_lots(before: &[MarketMaker], records: &[TradeRecord], check: &mut LotCheck) -> Result<(), TestCaseError> {
    let mut hold: BTreeMap<usize, (f64, f64)> = before.iter().map(|a| (a.id(), (a.bonds(), a.cash()))).collect();
    let costs: BTreeMap<usize, (u32, u32)> = before.iter().map(|a| (a.id(), (a.bond_cost(), a.cash_cost()))).collect();
    for r in records {
        let (buyer, seller) = (hold[&r.bond_buyer], hold[&r.bond_seller]);
        check(r, [buyer, seller], [costs[&r.bond_buyer], costs[&r.bond_seller]])?;
        hold.insert(r.bond_buyer, (buyer.0 + r.bonds_moved, buyer.1 - r.cash_moved));
        hold.insert(r.bond_seller, (seller.0 - r.bonds_moved, seller.1 + r.cash_moved));
    }
    Ok(())
}

fn session(agents: &[MarketMaker], rule: LotRule, seed: u64) -> (Vec<MarketMaker>, Vec<TradeRecord>) {
    let mut after = agents.to_vec();
    let order: Vec<usize> = (0..after.len()).collect();
    let out = trade_session(&mut after, &order, 1, rule, &mut epoch_stream(seed, 0));
    (after, out.records)
}

pub fn welfare_strictly_increases() -> Result<(), String> {
    runner()
        .run(&(population(), rule(), any::<u64>()), |(agents, rule, seed)| {
            let (_, records) = session(&agents, rule, seed);
            check_lots(&agents, &records, &mut |r, [b, s], [cb, cs]| {
                prop_assert!(welfare(b.0 + r.bonds_moved, b.1 - r.cash_moved, cb.0, cb.1) > welfare(b.0, b.1, cb.0, cb.1));
                prop_assert!(welfare(s.0 - r.bonds_moved, s.1 + r.cash_moved, cs.0, cs.1) > welfare(s.0, s.1, cs.0, cs.1));
                Ok(())
            })
        })
        .map_err(|e| e.to_string())
}

pub fn price_bracketed() -> Result<(), String> {
    runner()
        .run(&(population(), rule(), any::<u64>()), |(agents, rule, seed)| {
            let (_, records) = session(&agents, rule, seed);
            check_lots(&agents, &records, &mut |r, [b, s], [cb, cs]| {
                let (hi, lo) = (mrs(b.0, b.1, cb.0, cb.1).unwrap(), mrs(s.0, s.1, cs.0, cs.1).unwrap());
                prop_assert!(lo < r.price && r.price < hi, "price {} outside ({lo}, {hi})", r.price);
                Ok(())
            })
        })
        .map_err(|e| e.to_string())
}

pub fn trading_conserves() -> Result<(), String> {
    runner()
        .run(&(population(), rule(), any::<u64>()), |(agents, rule, seed)| {
            let total = |v: &[MarketMaker]| v.iter().fold((0.0, 0.0), |t, a| (t.0 + a.bonds(), t.1 + a.cash()));
            let (after, records) = session(&agents, rule, seed);
            prop_assert_eq!(total(&agents), total(&after));
            let mut replay: BTreeMap<usize, (f64, f64)> = agents.iter().map(|a| (a.id(), (a.bonds(), a.cash()))).collect();
            for r in &records {
                replay.get_mut(&r.bond_buyer).unwrap().0 += r.bonds_moved;
                replay.get_mut(&r.bond_buyer).unwrap().1 -= r.cash_moved;
                replay.get_mut(&r.bond_seller).unwrap().0 -= r.bonds_moved;
                replay.get_mut(&r.bond_seller).unwrap().1 += r.cash_moved;
            }
            for a in &after {
                prop_assert_eq!(replay[&a.id()], (a.bonds(), a.cash()));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn landscape_never_grows() -> Result<(), String> {
    runner()
        .run(&small_world(), |config| {
            let mut sim = Simulation::new(&config, 0).unwrap();
            let mut prev = sim.landscape().total_resources();
            let mut cells: Vec<_> = sim.landscape().cells().to_vec();
            while sim.step().is_some() {
                let now = sim.landscape().total_resources();
                prop_assert!(now.0 <= prev.0 && now.1 <= prev.1);
                for (old, new) in cells.iter().zip(sim.landscape().cells()) {
                    prop_assert!(new.bonds <= old.bonds && new.cash <= old.cash);
                }
                prev = now;
                cells = sim.landscape().cells().to_vec();
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn parallelism_is_invisible() -> Result<(), String> {
    let files = [
        "epochs.csv",
        "trades.csv",
        "histogram.csv",
        "stats.csv",
        "stats.json",
        "manifest.json",
    ];
    runner()
        .run(&(small_world(), 1usize..6, 2usize..9), |(config, epochs, jobs)| {
            let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
            for (dir, j) in dirs.iter().zip([1, jobs]) {
                let result = run_experiment("prop", &config, epochs, config.seed, j).unwrap();
                write_outputs(&result, dir.path()).unwrap();
            }
            for f in files {
                let a = std::fs::read(dirs[0].path().join(f)).unwrap();
                let b = std::fs::read(dirs[1].path().join(f)).unwrap();
                prop_assert!(a == b, "{} differs between 1 and {} workers", f, jobs);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn exhausted_agents_never_act() -> Result<(), String> {
    runner()
        .run(&small_world(), |config| {
            let mut sim = Simulation::new(&config, 0).unwrap();
            while !sim.is_finished() {
                let before = sim.agents().to_vec();
                let report = sim.step().unwrap();
                let dead: Vec<usize> = before.iter().filter(|a| !a.is_alive()).map(|a| a.id()).collect();
                for a in &before {
                    prop_assert_eq!(a.is_alive(), a.bonds() > 0.0 && a.cash() > 0.0);
                }
                prop_assert!(report.order.iter().all(|i| !dead.contains(i)));
                prop_assert!(report.moves.iter().all(|m| !dead.contains(&m.agent)));
                let died_now: Vec<usize> = report.moves.iter().filter(|m| m.died).map(|m| m.agent).collect();
                prop_assert!(report.trades.iter().all(|t| ![t.bond_buyer, t.bond_seller]
                    .iter()
                    .any(|i| dead.contains(i) || died_now.contains(i))));
                for id in dead {
                    let (was, now) = (&before[id], &sim.agents()[id]);
                    prop_assert_eq!((was.pos(), was.bonds(), was.cash()), (now.pos(), now.bonds(), now.cash()));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}
