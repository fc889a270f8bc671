//! Bilateral market-maker exchange.
//!
//! Two agents trade when their MRS values differ. The agent with the higher
//! MRS buys bonds, paying cash at the geometric mean of both MRS values. Each
//! lot must strictly raise both parties' welfare and may not push their MRS
//! values past each other; lots are repeated until one of those conditions
//! fails.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::agent::MarketMaker;
use crate::error::{Error, Result};

/// Safety bound on lots per encounter.
pub const MAX_LOTS: usize = 1000;
/// A lot that would invert the MRS ordering is halved at most this many times.
pub const MAX_HALVINGS: u32 = 20;
/// Lot quantities are multiples of this (2^-32). Holdings built from integer
/// harvests and costs plus such lots stay exactly representable, so every
/// transfer conserves system totals bit for bit.
pub const LOT_QUANTUM: f64 = 1.0 / 4_294_967_296.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeRecord {
    pub step: u32,
    /// Index of the pair encounter within the step that produced this lot.
    pub encounter: u32,
    pub bond_buyer: usize,
    pub bond_seller: usize,
    pub bonds_moved: f64,
    pub cash_moved: f64,
    /// Cash per bond.
    pub price: f64,
}

pub fn trade_price(mrs_a: f64, mrs_b: f64) -> Result<f64> {
    if !(mrs_a > 0.0 && mrs_b > 0.0) {
        return Err(Error::Domain(format!(
            "trade price needs positive MRS values, got {mrs_a} and {mrs_b}"
        )));
    }
    Ok((mrs_a * mrs_b).sqrt())
}

/// Strict welfare gain from changing holdings by (`d_bonds`, `d_cash`).
pub fn welfare_improves(agent: &MarketMaker, d_bonds: f64, d_cash: f64) -> bool {
    let after = crate::agent::welfare(agent.bonds() + d_bonds, agent.cash() + d_cash, agent.bond_cost(), agent.cash_cost());
    after > agent.welfare()
}

fn quantize(v: f64) -> f64 {
    (v / LOT_QUANTUM).round() * LOT_QUANTUM
}

/// `(bonds, cash)` of a lot at `price`, scaled by `scale` (a power of two).
/// Above parity one bond changes hands for `price` cash, otherwise `1/price`
/// bonds for one unit of cash.
fn lot_at(price: f64, scale: f64) -> (f64, f64) {
    if price > 1.0 {
        (scale, quantize(price * scale))
    } else {
        (quantize(scale / price), scale)
    }
}

fn mrs_of(bonds: f64, cash: f64, agent: &MarketMaker) -> f64 {
    (cash / f64::from(agent.cash_cost())) / (bonds / f64::from(agent.bond_cost()))
}

/// How a lot that would invert the MRS ordering is handled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LotRule {
    /// Halve the lot until it no longer inverts; keep trading afterwards.
    Bisect,
    /// Halve the lot until it no longer inverts, execute it, then stop.
    BisectFinal,
    /// Stop as soon as a full lot would invert.
    #[default]
    Unit,
}

/// Runs the lot loop between `a` and `b` and returns every executed lot.
pub fn attempt_trade_pair(a: &mut MarketMaker, b: &mut MarketMaker, step: u32) -> Vec<TradeRecord> {
    attempt_trade_pair_with(a, b, step, 0, LotRule::default())
}

pub fn attempt_trade_pair_with(a: &mut MarketMaker, b: &mut MarketMaker, step: u32, encounter: u32, rule: LotRule) -> Vec<TradeRecord> {
    let mut lots = Vec::new();
    if !(a.is_alive() && b.is_alive()) {
        return lots;
    }
    for _ in 0..MAX_LOTS {
        let (Ok(mrs_a), Ok(mrs_b)) = (a.mrs(), b.mrs()) else { break };
        if mrs_a == mrs_b {
            break;
        }
        let (buyer, seller) = if mrs_a > mrs_b { (&mut *a, &mut *b) } else { (&mut *b, &mut *a) };
        let price = (mrs_a * mrs_b).sqrt();

        let mut lot = None;
        let mut scale = 1.0;
        let halvings = if rule == LotRule::Unit { 0 } else { MAX_HALVINGS };
        for _ in 0..=halvings {
            let (bonds, cash) = lot_at(price, scale);
            if !(bonds > 0.0 && cash > 0.0) || seller.bonds() - bonds <= 0.0 || buyer.cash() - cash <= 0.0 {
                break;
            }
            let buyer_after = mrs_of(buyer.bonds() + bonds, buyer.cash() - cash, buyer);
            let seller_after = mrs_of(seller.bonds() - bonds, seller.cash() + cash, seller);
            if buyer_after >= seller_after {
                lot = Some((bonds, cash));
                break;
            }
            scale *= 0.5;
        }
        let Some((bonds, cash)) = lot else { break };
        if !(welfare_improves(buyer, bonds, -cash) && welfare_improves(seller, -bonds, cash)) {
            break;
        }
        buyer.apply_trade(bonds, -cash);
        seller.apply_trade(-bonds, cash);
        lots.push(TradeRecord {
            step,
            encounter,
            bond_buyer: buyer.id(),
            bond_seller: seller.id(),
            bonds_moved: bonds,
            cash_moved: cash,
            price,
        });
        if rule == LotRule::BisectFinal && scale < 1.0 {
            break;
        }
    }
    lots
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SessionOutcome {
    pub records: Vec<TradeRecord>,
    /// Pair encounters that executed at least one lot.
    pub trading_encounters: u32,
}

/// One trade phase. `order` lists agent indices in activation order; each
/// live agent meets every other live agent standing inside its visible
/// square, in a freshly shuffled order (candidates are gathered in index
/// order before the shuffle).
pub fn trade_session<R: Rng + ?Sized>(
    agents: &mut [MarketMaker],
    order: &[usize],
    step: u32,
    rule: LotRule,
    rng: &mut R,
) -> SessionOutcome {
    let mut out = SessionOutcome::default();
    let mut encounter = 0;
    for &i in order {
        if !agents[i].is_alive() {
            continue;
        }
        let viewer = &agents[i];
        let mut partners: Vec<usize> = (0..agents.len())
            .filter(|&j| j != i && agents[j].is_alive() && viewer.sees(agents[j].pos()))
            .collect();
        partners.shuffle(rng);
        for j in partners {
            let [a, b] = agents.get_disjoint_mut([i, j]).expect("distinct indices");
            let lots = attempt_trade_pair_with(a, b, step, encounter, rule);
            if !lots.is_empty() {
                out.trading_encounters += 1;
                out.records.extend(lots);
            }
            encounter += 1;
        }
    }
    out
}
