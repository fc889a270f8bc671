use thiserror::Error;

use crate::landscape::Pos;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("position ({}, {}) is outside the {width}x{height} grid", .pos.x, .pos.y)]
    OutOfBounds { pos: Pos, width: usize, height: usize },

    #[error("MRS is undefined for zero holdings (bonds = {bonds}, cash = {cash})")]
    UndefinedMrs { bonds: f64, cash: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown preset `{0}` (expected hp1, hp2, hp3 or hp4)")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
