//! The static client grid.
//!
//! Every cell is one passive client holding some quantity of a generic
//! government bond and some cash. Resources are laid out as mounds whose
//! values fall off linearly with Chebyshev distance from the mound centre.
//! Nothing regrows: once a market maker services a client the cell is empty
//! for the rest of the epoch.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pos {
    pub x: usize,
    pub y: usize,
}

impl Pos {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    pub fn chebyshev(self, other: Pos) -> usize {
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClientCell {
    pub bonds: f64,
    pub cash: f64,
}

impl ClientCell {
    pub fn is_empty(&self) -> bool {
        self.bonds == 0.0 && self.cash == 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResourceKind {
    Bond,
    Cash,
}

/// One resource concentration on the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoundSpec {
    pub center: Pos,
    pub peak: f64,
    pub radius: u32,
    pub kind: ResourceKind,
}

impl MoundSpec {
    pub fn new(kind: ResourceKind, center: Pos, peak: f64, radius: u32) -> Self {
        Self {
            center,
            peak,
            radius,
            kind,
        }
    }

    /// Unrounded contribution of this mound at `pos`.
    pub fn level_at(&self, pos: Pos) -> f64 {
        let d = self.center.chebyshev(pos) as f64;
        (self.peak - self.peak * d / f64::from(self.radius)).max(0.0)
    }

    fn validate(&self, width: usize, height: usize) -> Result<()> {
        if !(self.peak > 0.0 && self.peak.is_finite()) {
            return Err(Error::Config(format!("mound peak must be positive, got {}", self.peak)));
        }
        if self.radius == 0 {
            return Err(Error::Config("mound radius must be positive".into()));
        }
        if self.center.x >= width || self.center.y >= height {
            return Err(Error::Config(format!(
                "mound center ({}, {}) is off the {width}x{height} grid",
                self.center.x, self.center.y
            )));
        }
        Ok(())
    }
}

/// Two bond mounds on one diagonal and two cash mounds on the other.
pub fn default_mounds() -> Vec<MoundSpec> {
    const PEAK: f64 = 3.0;
    const RADIUS: u32 = 25;
    vec![
        MoundSpec::new(ResourceKind::Bond, Pos::new(12, 12), PEAK, RADIUS),
        MoundSpec::new(ResourceKind::Bond, Pos::new(37, 37), PEAK, RADIUS),
        MoundSpec::new(ResourceKind::Cash, Pos::new(12, 37), PEAK, RADIUS),
        MoundSpec::new(ResourceKind::Cash, Pos::new(37, 12), PEAK, RADIUS),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Landscape {
    width: usize,
    height: usize,
    cells: Vec<ClientCell>,
}

impl Landscape {
    /// Builds the grid from mound specs. Overlapping mounds of the same kind
    /// combine by maximum; each cell value is rounded half-up to an integer.
    pub fn generate(width: usize, height: usize, mounds: &[MoundSpec]) -> Result<Self> {
        check_dims(width, height)?;
        for m in mounds {
            m.validate(width, height)?;
        }
        let mut cells = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let pos = Pos::new(x, y);
                let level = |kind| {
                    mounds
                        .iter()
                        .filter(|m| m.kind == kind)
                        .map(|m| m.level_at(pos))
                        .fold(0.0_f64, f64::max)
                };
                cells.push(ClientCell {
                    bonds: round_half_up(level(ResourceKind::Bond)),
                    cash: round_half_up(level(ResourceKind::Cash)),
                });
            }
        }
        Ok(Self { width, height, cells })
    }

    /// Row-major cells, `cells[y * width + x]`.
    pub fn from_cells(width: usize, height: usize, cells: Vec<ClientCell>) -> Result<Self> {
        check_dims(width, height)?;
        if cells.len() != width * height {
            return Err(Error::Config(format!(
                "expected {} cells for a {width}x{height} grid, got {}",
                width * height,
                cells.len()
            )));
        }
        if let Some(c) = cells.iter().find(|c| !(c.bonds >= 0.0 && c.cash >= 0.0)) {
            return Err(Error::Config(format!("negative cell resources {c:?}")));
        }
        Ok(Self { width, height, cells })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, pos: Pos) -> bool {
        pos.x < self.width && pos.y < self.height
    }

    pub fn cell(&self, pos: Pos) -> Option<&ClientCell> {
        self.contains(pos).then(|| &self.cells[pos.y * self.width + pos.x])
    }

    pub fn cells(&self) -> &[ClientCell] {
        &self.cells
    }

    /// Collects the client's entire holding, leaving the cell at (0, 0).
    pub fn harvest(&mut self, pos: Pos) -> Result<(f64, f64)> {
        if !self.contains(pos) {
            return Err(Error::OutOfBounds {
                pos,
                width: self.width,
                height: self.height,
            });
        }
        let cell = std::mem::take(&mut self.cells[pos.y * self.width + pos.x]);
        Ok((cell.bonds, cell.cash))
    }

    pub fn total_resources(&self) -> (f64, f64) {
        self.cells.iter().fold((0.0, 0.0), |(b, c), cell| (b + cell.bonds, c + cell.cash))
    }

    /// CSV snapshot with header `x,y,bonds,cash`, row-major.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "bonds", "cash"])?;
        for (i, cell) in self.cells.iter().enumerate() {
            let (x, y) = (i % self.width, i / self.width);
            w.write_record([x.to_string(), y.to_string(), cell.bonds.to_string(), cell.cash.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::Config(format!("grid dimensions must be positive, got {width}x{height}")));
    }
    Ok(())
}

fn round_half_up(v: f64) -> f64 {
    (v + 0.5).floor()
}
