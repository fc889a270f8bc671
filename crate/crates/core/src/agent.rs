//! Market makers and their individual behaviour: what they can see, where
//! they move, what servicing clients costs them and how they value holdings.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::ModelConfig;
use crate::error::{Error, Result};
use crate::landscape::{Landscape, Pos};

/// Inclusive integer interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    pub lo: u32,
    pub hi: u32,
}

impl IntRange {
    pub const fn new(lo: u32, hi: u32) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, v: u32) -> bool {
        (self.lo..=self.hi).contains(&v)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(self.lo..=self.hi)
    }

    fn validate(&self, what: &str) -> Result<()> {
        if self.lo < 1 || self.lo > self.hi {
            return Err(Error::Config(format!(
                "{what} range [{}, {}] needs 1 <= lo <= hi",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for IntRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl std::str::FromStr for IntRange {
    type Err = Error;

    /// Parses `LO-HI` or a single value.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| Error::Config(format!("bad range `{s}`: {e}")));
        let range = match s.split_once(['-', ',']) {
            Some((lo, hi)) => Self::new(parse(lo)?, parse(hi)?),
            None => {
                let v = parse(s)?;
                Self::new(v, v)
            }
        };
        range.validate("parsed")?;
        Ok(range)
    }
}

/// Sampling ranges for heterogeneous agent parameters. `cost` applies to the
/// bond and cash costs independently, `accumulation` to both starting stocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentInitRanges {
    pub vision: IntRange,
    pub cost: IntRange,
    pub accumulation: IntRange,
}

impl AgentInitRanges {
    pub fn validate(&self) -> Result<()> {
        self.vision.validate("vision")?;
        self.cost.validate("cost")?;
        self.accumulation.validate("accumulation")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarketMaker {
    id: usize,
    pos: Pos,
    bonds_acc: f64,
    cash_acc: f64,
    bond_cost: u32,
    cash_cost: u32,
    vision: u32,
    alive: bool,
    death_step: Option<u32>,
}

impl MarketMaker {
    pub fn new(id: usize, pos: Pos, bonds_acc: f64, cash_acc: f64, bond_cost: u32, cash_cost: u32, vision: u32) -> Result<Self> {
        if bond_cost < 1 || cash_cost < 1 || vision < 1 {
            return Err(Error::Config(format!(
                "agent {id}: costs and vision must be >= 1 (got m_b={bond_cost}, m_c={cash_cost}, v={vision})"
            )));
        }
        if !(bonds_acc > 0.0 && cash_acc > 0.0 && bonds_acc.is_finite() && cash_acc.is_finite()) {
            return Err(Error::Config(format!("agent {id}: starting holdings must be positive")));
        }
        Ok(Self {
            id,
            pos,
            bonds_acc,
            cash_acc,
            bond_cost,
            cash_cost,
            vision,
            alive: true,
            death_step: None,
        })
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn pos(&self) -> Pos {
        self.pos
    }

    pub fn bonds(&self) -> f64 {
        self.bonds_acc
    }

    pub fn cash(&self) -> f64 {
        self.cash_acc
    }

    pub fn bond_cost(&self) -> u32 {
        self.bond_cost
    }

    pub fn cash_cost(&self) -> u32 {
        self.cash_cost
    }

    pub fn vision(&self) -> u32 {
        self.vision
    }

    pub fn is_alive(&self) -> bool {
        self.alive
    }

    pub fn death_step(&self) -> Option<u32> {
        self.death_step
    }

    pub fn welfare(&self) -> f64 {
        welfare(self.bonds_acc, self.cash_acc, self.bond_cost, self.cash_cost)
    }

    pub fn mrs(&self) -> Result<f64> {
        mrs(self.bonds_acc, self.cash_acc, self.bond_cost, self.cash_cost)
    }

    pub fn sees(&self, other: Pos) -> bool {
        self.pos.chebyshev(other) <= self.vision as usize
    }

    pub(crate) fn relocate(&mut self, to: Pos) {
        self.pos = to;
    }

    pub(crate) fn apply_trade(&mut self, d_bonds: f64, d_cash: f64) {
        self.bonds_acc += d_bonds;
        self.cash_acc += d_cash;
        debug_assert!(self.bonds_acc > 0.0 && self.cash_acc > 0.0);
    }

    /// Adds the harvest, pays the per-step costs (floored at zero) and marks
    /// the agent dead at `step` if either stock is exhausted.
    pub fn metabolize(&mut self, harvested: (f64, f64), step: u32) {
        debug_assert!(self.alive, "dead agent {} metabolized", self.id);
        self.bonds_acc = (self.bonds_acc + harvested.0 - f64::from(self.bond_cost)).max(0.0);
        self.cash_acc = (self.cash_acc + harvested.1 - f64::from(self.cash_cost)).max(0.0);
        if self.bonds_acc == 0.0 || self.cash_acc == 0.0 {
            self.alive = false;
            self.death_step = Some(step);
        }
    }

    /// Highest-welfare reachable cell. Candidates are the visible cells not
    /// held by another agent (the current cell always qualifies); ties go to
    /// the nearer cell, then to a uniform draw over the remaining cells in
    /// row-major order. `rng` is only touched when that final tie has more
    /// than one member.
    pub fn choose_move<R: Rng + ?Sized>(&self, landscape: &Landscape, occupied: &[Pos], rng: &mut R) -> Pos {
        let mut best: Vec<Pos> = Vec::new();
        let mut best_key = (f64::NEG_INFINITY, usize::MAX);
        for cell_pos in visible_cells(self.pos, self.vision, landscape.dims()) {
            if cell_pos != self.pos && occupied.contains(&cell_pos) {
                continue;
            }
            let cell = landscape.cell(cell_pos).expect("visible cells are on-grid");
            // an empty cell never beats the current one: same score, larger distance
            if cell.is_empty() && cell_pos != self.pos {
                continue;
            }
            let score = welfare(
                self.bonds_acc + cell.bonds,
                self.cash_acc + cell.cash,
                self.bond_cost,
                self.cash_cost,
            );
            let dist = self.pos.chebyshev(cell_pos);
            if score > best_key.0 || (score == best_key.0 && dist < best_key.1) {
                best_key = (score, dist);
                best.clear();
                best.push(cell_pos);
            } else if score == best_key.0 && dist == best_key.1 {
                best.push(cell_pos);
            }
        }
        match best.len() {
            0 => self.pos,
            1 => best[0],
            n => best[rng.random_range(0..n)],
        }
    }
}

/// Draws `config.n_agents` market makers. For each agent in turn the stream is
/// consumed as: position (rejection-sampled over unoccupied cells), vision,
/// bond cost, cash cost, bond stock, cash stock.
pub fn spawn_agents<R: Rng + ?Sized>(config: &ModelConfig, rng: &mut R) -> Result<Vec<MarketMaker>> {
    let (width, height) = config.grid;
    let n_cells = width * height;
    if config.n_agents > n_cells {
        return Err(Error::Config(format!("{} agents do not fit on {n_cells} cells", config.n_agents)));
    }
    config.init_ranges.validate()?;
    let ranges = &config.init_ranges;
    let mut taken = vec![false; n_cells];
    let mut agents = Vec::with_capacity(config.n_agents);
    for id in 0..config.n_agents {
        let idx = loop {
            let i = rng.random_range(0..n_cells);
            if !taken[i] {
                taken[i] = true;
                break i;
            }
        };
        let pos = Pos::new(idx % width, idx / width);
        let vision = ranges.vision.sample(rng);
        let bond_cost = ranges.cost.sample(rng);
        let cash_cost = ranges.cost.sample(rng);
        let bonds = ranges.accumulation.sample(rng);
        let cash = ranges.accumulation.sample(rng);
        agents.push(MarketMaker::new(
            id,
            pos,
            f64::from(bonds),
            f64::from(cash),
            bond_cost,
            cash_cost,
            vision,
        )?);
    }
    Ok(agents)
}

/// On-grid cells within Chebyshev radius `vision` of `pos`, row-major.
pub fn visible_cells(pos: Pos, vision: u32, dims: (usize, usize)) -> impl Iterator<Item = Pos> {
    let v = vision as usize;
    let (width, height) = dims;
    let xs = pos.x.saturating_sub(v)..=(pos.x + v).min(width - 1);
    let ys = pos.y.saturating_sub(v)..=(pos.y + v).min(height - 1);
    ys.flat_map(move |y| xs.clone().map(move |x| Pos::new(x, y)))
}

/// Cobb-Douglas welfare `A_b^(m_b/(m_b+m_c)) * A_c^(m_c/(m_b+m_c))`.
pub fn welfare(bonds_acc: f64, cash_acc: f64, bond_cost: u32, cash_cost: u32) -> f64 {
    let total = f64::from(bond_cost + cash_cost);
    bonds_acc.powf(f64::from(bond_cost) / total) * cash_acc.powf(f64::from(cash_cost) / total)
}

/// Marginal rate of substitution `(A_c / m_c) / (A_b / m_b)`.
pub fn mrs(bonds_acc: f64, cash_acc: f64, bond_cost: u32, cash_cost: u32) -> Result<f64> {
    if !(bonds_acc > 0.0 && cash_acc > 0.0) {
        return Err(Error::UndefinedMrs {
            bonds: bonds_acc,
            cash: cash_acc,
        });
    }
    Ok((cash_acc / f64::from(cash_cost)) / (bonds_acc / f64::from(bond_cost)))
}
