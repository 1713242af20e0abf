use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::simpson;

/// Fewest strictly interior nodes a grid may have.
pub const MIN_INTERIOR_NODES: usize = 16;

/// Uniform radial grid `r_i = r_min + i h`, `i = 0..=N`.
///
/// Node 0 carries the Dirichlet condition and is not an unknown; nodes
/// `1..N-1` are strictly interior and node `N` (at `r_max`) carries the
/// Neumann condition, so an operator on this grid has `N` rows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    r_min: f64,
    r_max: f64,
    h: f64,
    intervals: usize,
}

impl RadialGrid {
    /// `h` must divide `r_max - r_min` (to a relative 1e-9); the stored step
    /// is recomputed as `(r_max - r_min) / N` so the last node is `r_max`.
    pub fn new(r_min: f64, r_max: f64, h: f64) -> Result<Self> {
        if !(r_min.is_finite() && r_min > 0.0) {
            return Err(Error::InvalidGrid(format!("r_min must be positive, got {r_min}")));
        }
        if !(r_max.is_finite() && r_max > r_min) {
            return Err(Error::InvalidGrid(format!(
                "r_max must exceed r_min (got r_min = {r_min}, r_max = {r_max})"
            )));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidGrid(format!("step must be positive, got {h}")));
        }
        let span = r_max - r_min;
        let ratio = span / h;
        let intervals = ratio.round();
        if (ratio - intervals).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "step {h} does not divide the interval [{r_min}, {r_max}]"
            )));
        }
        let intervals = intervals as usize;
        if intervals < MIN_INTERIOR_NODES + 1 {
            return Err(Error::InvalidGrid(format!(
                "{} interior nodes, need at least {MIN_INTERIOR_NODES}",
                intervals.saturating_sub(1)
            )));
        }
        Ok(Self {
            r_min,
            r_max,
            h: span / intervals as f64,
            intervals,
        })
    }

    /// `[0.01, 5.00]` with `h = 0.001`.
    pub fn standard() -> Self {
        Self::new(0.01, 5.0, 0.001).expect("standard grid is valid")
    }

    /// Grid over the same interval with a given number of intervals.
    pub fn with_intervals(r_min: f64, r_max: f64, intervals: usize) -> Result<Self> {
        Self::new(r_min, r_max, (r_max - r_min) / intervals as f64)
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `N`: number of steps between `r_min` and `r_max`.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn n_interior(&self) -> usize {
        self.intervals - 1
    }

    /// Rows of an operator on this grid (interior nodes plus `r_max`).
    pub fn unknowns(&self) -> usize {
        self.intervals
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.intervals {
            self.r_max
        } else {
            self.r_min + i as f64 * self.h
        }
    }

    /// All `N + 1` nodes including both ends.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.intervals).map(|i| self.node(i)).collect()
    }

    /// Same interval, half the step.
    pub fn refined(&self) -> Self {
        Self {
            h: (self.r_max - self.r_min) / (2 * self.intervals) as f64,
            intervals: 2 * self.intervals,
            ..*self
        }
    }
}

/// Samples of a radial function at every node of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.intervals() + 1 {
            return Err(Error::InvalidArgument(format!(
                "profile has {} values but the grid has {} nodes",
                values.len(),
                grid.intervals() + 1
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "profile value at r = {} is not finite",
                grid.node(i)
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let values = grid.nodes().into_iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values)
    }

    pub fn zeros(grid: RadialGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.intervals() + 1],
        }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `2π ∫ r v(r) dr` by composite Simpson over the whole grid.
    pub fn areal_integral(&self) -> f64 {
        let weighted: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| self.grid.node(i) * v)
            .collect();
        2.0 * std::f64::consts::PI * simpson(&weighted, self.grid.h())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
