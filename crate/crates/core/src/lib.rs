//! Agent-based model of liquidity in an over-the-counter government bond
//! market.
//!
//! A handful of market makers roam a static 50x50 grid of passive clients,
//! collecting bonds and cash from them while paying fixed per-step costs.
//! With no order book and no public price, market makers trade with each
//! other bilaterally: whenever two of them value bonds differently (their
//! marginal rates of substitution differ) they swap bonds for cash at the
//! geometric mean of the two rates, as long as both come out better off.
//!
//! * [`landscape`]: the client grid and its resource mounds.
//! * [`agent`]: market-maker state, vision, movement and costs.
//! * [`trading`]: the bilateral exchange rule.
//! * [`engine`]: one epoch, stepped with a random activation order.
//! * [`metrics`]: campaign statistics and the AOFM reference series.
//! * [`experiments`]: the hp1-hp4 presets and the campaign runner.
//!
//! ```
//! use bondscape::{engine::run_epoch, experiments::Preset, metrics::trade_fraction};
//!
//! let config = Preset::Hp1.config(42);
//! let epoch = run_epoch(&config, 0).unwrap();
//! assert!(epoch.end_step <= 1500);
//! assert!((0.0..=100.0).contains(&trade_fraction(&epoch)));
//! ```

pub mod agent;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod landscape;
pub mod metrics;
pub mod rng;
pub mod trading;

pub use error::{Error, Result};
