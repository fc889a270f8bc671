//! Epoch execution.
//!
//! Each step shuffles the live agents once. In that order every agent picks a
//! cell, moves, services the client there and pays its costs; agents whose
//! bond or cash stock hits zero leave the market immediately. A trade phase
//! then walks the same order. The epoch ends at `max_steps` or when nobody is
//! left.

use std::collections::BTreeMap;
use std::io::Write;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::agent::{spawn_agents, AgentInitRanges, IntRange, MarketMaker};
use crate::error::{Error, Result};
use crate::landscape::{default_mounds, Landscape, MoundSpec, Pos};
use crate::rng::{epoch_stream, EpochRng};
use crate::trading::{trade_session, LotRule, TradeRecord};

/// What one unit of MM-to-MM interaction is when counting trade events.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TradeEventUnit {
    /// One event per pair encounter that executed at least one lot.
    Encounter,
    /// One event per executed lot.
    #[default]
    Lot,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub n_agents: usize,
    /// (width, height)
    pub grid: (usize, usize),
    pub mounds: Vec<MoundSpec>,
    pub init_ranges: AgentInitRanges,
    pub max_steps: u32,
    pub seed: u64,
    #[serde(default)]
    pub trade_event_unit: TradeEventUnit,
    #[serde(default)]
    pub lot_rule: LotRule,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            n_agents: 4,
            grid: (50, 50),
            mounds: default_mounds(),
            init_ranges: AgentInitRanges {
                vision: IntRange::new(1, 49),
                cost: IntRange::new(1, 5),
                accumulation: IntRange::new(35, 55),
            },
            max_steps: 1500,
            seed: 0,
            trade_event_unit: TradeEventUnit::default(),
            lot_rule: LotRule::default(),
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_steps < 1 {
            return Err(Error::Config("max_steps must be at least 1".into()));
        }
        if self.grid.0 == 0 || self.grid.1 == 0 {
            return Err(Error::Config(format!("grid dimensions must be positive, got {:?}", self.grid)));
        }
        if self.n_agents > self.grid.0 * self.grid.1 {
            return Err(Error::Config(format!("{} agents do not fit on the grid", self.n_agents)));
        }
        self.init_ranges.validate()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepLog {
    pub step: u32,
    pub trades: u32,
    pub services: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochResult {
    pub epoch_index: u64,
    pub end_step: u32,
    pub n_trade_events: u64,
    pub n_service_events: u64,
    pub trade_records: Vec<TradeRecord>,
    /// Agent id to steps survived.
    pub lifespans: BTreeMap<usize, u32>,
    pub survivors_at_horizon: usize,
    pub final_landscape_totals: (f64, f64),
    pub step_log: Vec<StepLog>,
}

impl EpochResult {
    pub fn max_lifespan(&self) -> u32 {
        self.lifespans.values().copied().max().unwrap_or(0)
    }

    pub fn mean_lifespan(&self) -> f64 {
        if self.lifespans.is_empty() {
            return 0.0;
        }
        self.lifespans.values().map(|&v| f64::from(v)).sum::<f64>() / self.lifespans.len() as f64
    }
}

pub fn step_event_counts(result: &EpochResult) -> (u64, u64) {
    (result.n_trade_events, result.n_service_events)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub agent: usize,
    pub from: Pos,
    pub to: Pos,
    pub harvested: (f64, f64),
    pub died: bool,
}

/// Everything that happened in one step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub step: u32,
    pub order: Vec<usize>,
    pub moves: Vec<MoveRecord>,
    pub trades: Vec<TradeRecord>,
    pub trade_events: u32,
}

/// A single epoch that can be advanced one step at a time.
#[derive(Clone, Debug)]
pub struct Simulation {
    config: ModelConfig,
    epoch_index: u64,
    rng: EpochRng,
    landscape: Landscape,
    agents: Vec<MarketMaker>,
    step: u32,
    finished: bool,
    trade_records: Vec<TradeRecord>,
    n_trade_events: u64,
    n_service_events: u64,
    step_log: Vec<StepLog>,
}

impl Simulation {
    pub fn new(config: &ModelConfig, epoch_index: u64) -> Result<Self> {
        config.validate()?;
        let mut rng = epoch_stream(config.seed, epoch_index);
        let landscape = Landscape::generate(config.grid.0, config.grid.1, &config.mounds)?;
        let agents = spawn_agents(config, &mut rng)?;
        let finished = agents.is_empty();
        Ok(Self {
            config: config.clone(),
            epoch_index,
            rng,
            landscape,
            agents,
            step: 0,
            finished,
            trade_records: Vec::new(),
            n_trade_events: 0,
            n_service_events: 0,
            step_log: Vec::new(),
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn landscape(&self) -> &Landscape {
        &self.landscape
    }

    pub fn agents(&self) -> &[MarketMaker] {
        &self.agents
    }

    /// Last completed step (0 before the first).
    pub fn current_step(&self) -> u32 {
        self.step
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// The stream the next step will draw from.
    pub fn rng(&self) -> &EpochRng {
        &self.rng
    }

    pub fn trade_records(&self) -> &[TradeRecord] {
        &self.trade_records
    }

    pub fn event_counts(&self) -> (u64, u64) {
        (self.n_trade_events, self.n_service_events)
    }

    /// Advances one step, or returns `None` once the epoch is over.
    pub fn step(&mut self) -> Option<StepReport> {
        if self.finished {
            return None;
        }
        self.step += 1;
        let t = self.step;

        let mut order: Vec<usize> = (0..self.agents.len()).filter(|&i| self.agents[i].is_alive()).collect();
        order.shuffle(&mut self.rng);

        let mut moves = Vec::with_capacity(order.len());
        for &i in &order {
            let occupied: Vec<Pos> = self
                .agents
                .iter()
                .enumerate()
                .filter(|&(j, a)| j != i && a.is_alive())
                .map(|(_, a)| a.pos())
                .collect();
            let agent = &mut self.agents[i];
            let from = agent.pos();
            let to = agent.choose_move(&self.landscape, &occupied, &mut self.rng);
            agent.relocate(to);
            let harvested = self.landscape.harvest(to).expect("moves stay on the grid");
            agent.metabolize(harvested, t);
            moves.push(MoveRecord {
                agent: agent.id(),
                from,
                to,
                harvested,
                died: !agent.is_alive(),
            });
        }
        let services = moves.len() as u32;

        let session = trade_session(&mut self.agents, &order, t, self.config.lot_rule, &mut self.rng);
        let trade_events = match self.config.trade_event_unit {
            TradeEventUnit::Encounter => session.trading_encounters,
            TradeEventUnit::Lot => session.records.len() as u32,
        };

        self.n_service_events += u64::from(services);
        self.n_trade_events += u64::from(trade_events);
        self.step_log.push(StepLog {
            step: t,
            trades: trade_events,
            services,
        });
        self.trade_records.extend(session.records.iter().cloned());

        if t >= self.config.max_steps || self.agents.iter().all(|a| !a.is_alive()) {
            self.finished = true;
        }
        Some(StepReport {
            step: t,
            order,
            moves,
            trades: session.records,
            trade_events,
        })
    }

    pub fn into_result(self) -> EpochResult {
        let end_step = self.step;
        let lifespans = self.agents.iter().map(|a| (a.id(), a.death_step().unwrap_or(end_step))).collect();
        let survivors_at_horizon = if end_step == self.config.max_steps {
            self.agents.iter().filter(|a| a.is_alive()).count()
        } else {
            0
        };
        EpochResult {
            epoch_index: self.epoch_index,
            end_step,
            n_trade_events: self.n_trade_events,
            n_service_events: self.n_service_events,
            trade_records: self.trade_records,
            lifespans,
            survivors_at_horizon,
            final_landscape_totals: self.landscape.total_resources(),
            step_log: self.step_log,
        }
    }
}

/// Runs one complete epoch on the stream derived from `(config.seed, epoch_index)`.
pub fn run_epoch(config: &ModelConfig, epoch_index: u64) -> Result<EpochResult> {
    let mut sim = Simulation::new(config, epoch_index)?;
    while sim.step().is_some() {}
    Ok(sim.into_result())
}

/// Runs an epoch and writes one `epoch,step,agent_id,x,y,bonds_acc,cash_acc,alive`
/// row per agent for the initial state (step 0) and after every step.
pub fn run_epoch_traced<W: Write>(config: &ModelConfig, epoch_index: u64, out: &mut csv::Writer<W>) -> Result<EpochResult> {
    fn dump<W: Write>(sim: &Simulation, epoch: u64, out: &mut csv::Writer<W>) -> Result<()> {
        for a in sim.agents() {
            out.write_record([
                epoch.to_string(),
                sim.current_step().to_string(),
                a.id().to_string(),
                a.pos().x.to_string(),
                a.pos().y.to_string(),
                a.bonds().to_string(),
                a.cash().to_string(),
                a.is_alive().to_string(),
            ])?;
        }
        Ok(())
    }
    let mut sim = Simulation::new(config, epoch_index)?;
    dump(&sim, epoch_index, out)?;
    while sim.step().is_some() {
        dump(&sim, epoch_index, out)?;
    }
    Ok(sim.into_result())
}

pub const TRACE_HEADER: [&str; 8] = ["epoch", "step", "agent_id", "x", "y", "bonds_acc", "cash_acc", "alive"];
