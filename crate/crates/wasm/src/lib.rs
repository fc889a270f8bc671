//! wasm-bindgen bindings behind the static page in `www/`.
//!
//! Three operations are exposed: rendering a client grid, stepping a single
//! epoch, and running a small campaign for its trade-percentage histogram.
//! Everything crosses the boundary as flat typed arrays or JSON strings.

use bondscape::engine::{ModelConfig, Simulation};
use bondscape::experiments::{run_experiment, Preset};
use bondscape::landscape::{Landscape, MoundSpec};
use bondscape::metrics::histogram;
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn preset_config(preset: &str, seed: u64) -> Result<ModelConfig, JsError> {
    Ok(preset.parse::<Preset>().map_err(js_err)?.config(seed))
}

/// Preset mounds with every peak and radius replaced, so the page can
/// show how mound shape changes the grid.
fn reshaped(mut config: ModelConfig, peak: f64, radius: u32) -> ModelConfig {
    for m in &mut config.mounds {
        *m = MoundSpec::new(m.kind, m.center, peak, radius);
    }
    config
}

/// Interleaved `[bonds, cash]` per cell, row-major.
fn flatten(grid: &Landscape) -> Vec<f64> {
    grid.cells().iter().flat_map(|c| [c.bonds, c.cash]).collect()
}

/// Client grid of the default layout with the given mound peak and radius.
/// Returns interleaved bond/cash levels per cell, row-major.
#[wasm_bindgen]
pub fn landscape(peak: f64, radius: u32) -> Result<Vec<f64>, JsError> {
    let config = reshaped(ModelConfig::default(), peak, radius);
    let grid = Landscape::generate(config.grid.0, config.grid.1, &config.mounds).map_err(js_err)?;
    Ok(flatten(&grid))
}

/// One epoch that the page advances step by step.
#[wasm_bindgen]
pub struct Demo {
    sim: Simulation,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(preset: &str, seed: u64, epoch: u64, peak: f64, radius: u32) -> Result<Demo, JsError> {
        let config = reshaped(preset_config(preset, seed)?, peak, radius);
        config.validate().map_err(js_err)?;
        Ok(Demo {
            sim: Simulation::new(&config, epoch).map_err(js_err)?,
        })
    }

    pub fn width(&self) -> usize {
        self.sim.landscape().width()
    }

    pub fn height(&self) -> usize {
        self.sim.landscape().height()
    }

    /// Advances up to `n` steps; returns how many were taken.
    pub fn advance(&mut self, n: u32) -> u32 {
        (0..n).take_while(|_| self.sim.step().is_some()).count() as u32
    }

    pub fn finished(&self) -> bool {
        self.sim.is_finished()
    }

    pub fn cells(&self) -> Vec<f64> {
        flatten(self.sim.landscape())
    }

    /// `[x, y, bonds, cash, alive]` per agent.
    pub fn agents(&self) -> Vec<f64> {
        self.sim
            .agents()
            .iter()
            .flat_map(|a| {
                [
                    a.pos().x as f64,
                    a.pos().y as f64,
                    a.bonds(),
                    a.cash(),
                    f64::from(u8::from(a.is_alive())),
                ]
            })
            .collect()
    }

    /// JSON with the step counter and the running event counts.
    pub fn status(&self) -> String {
        let (trades, services) = self.sim.event_counts();
        let alive = self.sim.agents().iter().filter(|a| a.is_alive()).count();
        serde_json::json!({
            "step": self.sim.current_step(),
            "trades": trades,
            "services": services,
            "alive": alive,
            "lots": self.sim.trade_records().len(),
        })
        .to_string()
    }
}

/// Runs `epochs` epochs of a preset and returns JSON with summary
/// statistics and a histogram of per-epoch trade percentages.
#[wasm_bindgen]
pub fn campaign(preset: &str, epochs: usize, seed: u64, bins: usize) -> Result<String, JsError> {
    let config = preset_config(preset, seed)?;
    let result = run_experiment(preset, &config, epochs, seed, 1).map_err(js_err)?;
    let hist = histogram(&result.trade_pcts(), bins).map_err(js_err)?;
    let out = serde_json::json!({
        "stats": result.stats,
        "histogram": hist,
    });
    Ok(out.to_string())
}
