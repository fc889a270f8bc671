//! Brute-force reimplementation of one simulation step on plain arrays,
//! checked against the engine move by move and lot by lot.

use bondscape::agent::{AgentInitRanges, IntRange};
use bondscape::engine::{ModelConfig, Simulation};
use bondscape::landscape::{MoundSpec, Pos, ResourceKind};
use bondscape::rng::EpochRng;
use bondscape::trading::LotRule;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug)]
struct Mm {
    pos: (usize, usize),
    bonds: f64,
    cash: f64,
    mb: f64,
    mc: f64,
    vision: usize,
    alive: bool,
}

#[derive(Debug, PartialEq)]
pub struct Lot {
    buyer: usize,
    seller: usize,
    bonds: f64,
    cash: f64,
    price: f64,
}

fn cheb(a: (usize, usize), b: (usize, usize)) -> usize {
    a.0.abs_diff(b.0).max(a.1.abs_diff(b.1))
}

fn welfare(b: f64, c: f64, mb: f64, mc: f64) -> f64 {
    let s = mb + mc;
    b.powf(mb / s) * c.powf(mc / s)
}

fn mrs(b: f64, c: f64, mb: f64, mc: f64) -> f64 {
    (c / mc) / (b / mb)
}

fn round_to_quantum(v: f64) -> f64 {
    const Q: f64 = 4_294_967_296.0;
    (v * Q).round() / Q
}

/// (agent, destination)
type Move = (usize, (usize, usize));

struct World {
    w: usize,
    h: usize,
    cells: Vec<(f64, f64)>,
    mms: Vec<Mm>,
}

impl World {
    fn best_cell(&self, i: usize, rng: &mut EpochRng) -> (usize, usize) {
        let me = &self.mms[i];
        let mut scored = Vec::new();
        for y in 0..self.h {
            for x in 0..self.w {
                let p = (x, y);
                let d = cheb(me.pos, p);
                if d > me.vision {
                    continue;
                }
                let taken = self.mms.iter().enumerate().any(|(j, o)| j != i && o.alive && o.pos == p);
                if taken && p != me.pos {
                    continue;
                }
                let (cb, cc) = self.cells[y * self.w + x];
                scored.push((welfare(me.bonds + cb, me.cash + cc, me.mb, me.mc), d, p));
            }
        }
        let top = scored.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
        let near = scored.iter().filter(|s| s.0 == top).map(|s| s.1).min().unwrap();
        let ties: Vec<_> = scored.iter().filter(|s| s.0 == top && s.1 == near).map(|s| s.2).collect();
        if ties.len() == 1 {
            ties[0]
        } else {
            ties[rng.random_range(0..ties.len())]
        }
    }

    fn trade(&mut self, i: usize, j: usize, rule: LotRule, out: &mut Vec<Lot>) {
        for _ in 0..1000 {
            let (a, b) = (&self.mms[i], &self.mms[j]);
            let (ma, mb) = (mrs(a.bonds, a.cash, a.mb, a.mc), mrs(b.bonds, b.cash, b.mb, b.mc));
            if ma == mb {
                return;
            }
            let (buy, sell) = if ma > mb { (i, j) } else { (j, i) };
            let (bu, se) = (self.mms[buy].clone(), self.mms[sell].clone());
            let price = (ma * mb).sqrt();
            let halvings = if rule == LotRule::Unit { 0 } else { 20 };
            // every candidate lot size, full lot first
            let candidates: Vec<(f64, f64)> = (0..=halvings)
                .map(|k| {
                    let s = 0.5f64.powi(k);
                    if price > 1.0 {
                        (s, round_to_quantum(price * s))
                    } else {
                        (round_to_quantum(s / price), s)
                    }
                })
                .collect();
            let feasible = |&(db, dc): &(f64, f64)| db > 0.0 && dc > 0.0 && se.bonds - db > 0.0 && bu.cash - dc > 0.0;
            let keeps_order =
                |&(db, dc): &(f64, f64)| mrs(bu.bonds + db, bu.cash - dc, bu.mb, bu.mc) >= mrs(se.bonds - db, se.cash + dc, se.mb, se.mc);
            // the largest lot that keeps the ordering, reached only through feasible larger lots
            let Some(k) = candidates.iter().position(|c| !feasible(c) || keeps_order(c)) else {
                return;
            };
            let lot = candidates[k];
            if !feasible(&lot) {
                return;
            }
            let (db, dc) = lot;
            let gains = welfare(bu.bonds + db, bu.cash - dc, bu.mb, bu.mc) > welfare(bu.bonds, bu.cash, bu.mb, bu.mc)
                && welfare(se.bonds - db, se.cash + dc, se.mb, se.mc) > welfare(se.bonds, se.cash, se.mb, se.mc);
            if !gains {
                return;
            }
            self.mms[buy].bonds += db;
            self.mms[buy].cash -= dc;
            self.mms[sell].bonds -= db;
            self.mms[sell].cash += dc;
            out.push(Lot {
                buyer: buy,
                seller: sell,
                bonds: db,
                cash: dc,
                price,
            });
            if rule == LotRule::BisectFinal && k > 0 {
                return;
            }
        }
    }

    /// One full step: (moves as (agent, destination), executed lots).
    fn step(&mut self, rule: LotRule, rng: &mut EpochRng) -> (Vec<Move>, Vec<Lot>) {
        let mut order: Vec<usize> = (0..self.mms.len()).filter(|&i| self.mms[i].alive).collect();
        order.shuffle(rng);
        let mut moves = Vec::new();
        for &i in &order {
            let to = self.best_cell(i, rng);
            let cell = std::mem::take(&mut self.cells[to.1 * self.w + to.0]);
            let m = &mut self.mms[i];
            m.pos = to;
            m.bonds = (m.bonds + cell.0 - m.mb).max(0.0);
            m.cash = (m.cash + cell.1 - m.mc).max(0.0);
            m.alive = m.bonds > 0.0 && m.cash > 0.0;
            moves.push((i, to));
        }
        let mut lots = Vec::new();
        for &i in &order {
            if !self.mms[i].alive {
                continue;
            }
            let mut partners: Vec<usize> = (0..self.mms.len())
                .filter(|&j| j != i && self.mms[j].alive && cheb(self.mms[i].pos, self.mms[j].pos) <= self.mms[i].vision)
                .collect();
            partners.shuffle(rng);
            for j in partners {
                self.trade(i, j, rule, &mut lots);
            }
        }
        (moves, lots)
    }
}

fn desk_config(seed: u64, lot_rule: LotRule) -> ModelConfig {
    ModelConfig {
        n_agents: 2,
        grid: (5, 5),
        mounds: vec![
            MoundSpec::new(ResourceKind::Bond, Pos::new(1, 1), 4.0, 3),
            MoundSpec::new(ResourceKind::Cash, Pos::new(3, 3), 4.0, 3),
            MoundSpec::new(ResourceKind::Cash, Pos::new(0, 4), 2.0, 2),
        ],
        init_ranges: AgentInitRanges {
            vision: IntRange::new(4, 4),
            cost: IntRange::new(1, 5),
            accumulation: IntRange::new(5, 25),
        },
        max_steps: 10,
        seed,
        lot_rule,
        ..ModelConfig::default()
    }
}

/// Compares engine and oracle over `seeds`; returns (steps compared, lots compared, mismatches).
pub fn compare(seeds: std::ops::Range<u64>, rule: LotRule) -> (usize, usize, Vec<String>) {
    let (mut steps, mut n_lots, mut bad) = (0, 0, Vec::new());
    for seed in seeds {
        let config = desk_config(seed, rule);
        let mut sim = Simulation::new(&config, 0).expect("valid desk config");
        let land = sim.landscape();
        let mut world = World {
            w: land.width(),
            h: land.height(),
            cells: land.cells().iter().map(|c| (c.bonds, c.cash)).collect(),
            mms: sim
                .agents()
                .iter()
                .map(|a| Mm {
                    pos: (a.pos().x, a.pos().y),
                    bonds: a.bonds(),
                    cash: a.cash(),
                    mb: f64::from(a.bond_cost()),
                    mc: f64::from(a.cash_cost()),
                    vision: a.vision() as usize,
                    alive: a.is_alive(),
                })
                .collect(),
        };
        while !sim.is_finished() {
            let mut rng = sim.rng().clone();
            let report = sim.step().expect("unfinished epoch steps");
            let (moves, lots) = world.step(rule, &mut rng);
            steps += 1;
            n_lots += lots.len();
            let engine_moves: Vec<_> = report.moves.iter().map(|m| (m.agent, (m.to.x, m.to.y))).collect();
            let engine_lots: Vec<_> = report
                .trades
                .iter()
                .map(|t| Lot {
                    buyer: t.bond_buyer,
                    seller: t.bond_seller,
                    bonds: t.bonds_moved,
                    cash: t.cash_moved,
                    price: t.price,
                })
                .collect();
            if engine_moves != moves {
                bad.push(format!(
                    "seed {seed} step {}: moves {engine_moves:?} vs oracle {moves:?}",
                    report.step
                ));
            }
            if engine_lots != lots {
                bad.push(format!(
                    "seed {seed} step {}: {} engine lots vs {} oracle lots",
                    report.step,
                    engine_lots.len(),
                    lots.len()
                ));
            }
            let holdings_match = sim
                .agents()
                .iter()
                .zip(&world.mms)
                .all(|(a, m)| a.bonds() == m.bonds && a.cash() == m.cash && a.is_alive() == m.alive);
            if !holdings_match {
                bad.push(format!("seed {seed} step {}: holdings diverged", report.step));
            }
            if &rng != sim.rng() {
                bad.push(format!("seed {seed} step {}: random stream consumption differs", report.step));
            }
            if !bad.is_empty() {
                break;
            }
        }
    }
    (steps, n_lots, bad)
}
