use serde::Serialize;

use super::{assemble, eigen_solve_with, SolveOptions};
use crate::analytic::QuantumNumbers;
use crate::error::{Error, Result};
use crate::geometry::SurfaceSpec;
use crate::grid::RadialGrid;

/// Eigenvalues tracked per level.
pub const TRACKED_LEVELS: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceLevel {
    pub h: f64,
    pub intervals: usize,
    pub kappas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub levels: Vec<ConvergenceLevel>,
    /// `orders[j][n]`: observed order of `κ_{n+1}` from levels `j..j+3`.
    pub orders: Vec<Vec<f64>>,
}

/// `levels` spectra starting at `base_grid`, halving `h` each time.
pub fn convergence_study(
    spec: &SurfaceSpec,
    qn: QuantumNumbers,
    base_grid: &RadialGrid,
    levels: usize,
    options: SolveOptions,
) -> Result<ConvergenceStudy> {
    if levels < 3 {
        return Err(Error::InvalidArgument(format!(
            "a convergence study needs at least 3 levels, got {levels}"
        )));
    }
    let mut grids = vec![*base_grid];
    for _ in 1..levels {
        let next = grids.last().expect("non-empty").refined();
        grids.push(next);
    }
    convergence_study_grids(spec, qn, &grids, options)
}

/// Spectra on explicit grids. Observed orders assume a constant refinement
/// ratio between consecutive grids:
/// `p = ln(|κ(h_1) - κ(h_2)| / |κ(h_2) - κ(h_3)|) / ln(h_1 / h_2)`.
pub fn convergence_study_grids(
    spec: &SurfaceSpec,
    qn: QuantumNumbers,
    grids: &[RadialGrid],
    options: SolveOptions,
) -> Result<ConvergenceStudy> {
    if grids.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a convergence study needs at least 3 grids, got {}",
            grids.len()
        )));
    }
    for (i, g) in grids.iter().enumerate() {
        if grids[..i].iter().any(|other| other.intervals() == g.intervals()) {
            return Err(Error::InvalidArgument(
                "convergence levels must use distinct grids".into(),
            ));
        }
    }
    let mut levels = Vec::with_capacity(grids.len());
    for grid in grids {
        let op = assemble(spec, qn, grid)?;
        let sol = eigen_solve_with(&op, TRACKED_LEVELS, options)?;
        levels.push(ConvergenceLevel {
            h: grid.h(),
            intervals: grid.intervals(),
            kappas: sol.kappas,
        });
    }
    let orders = levels
        .windows(3)
        .map(|w| {
            let ratio = (w[0].h / w[1].h).ln();
            (0..TRACKED_LEVELS)
                .map(|n| {
                    let coarse = (w[0].kappas[n] - w[1].kappas[n]).abs();
                    let fine = (w[1].kappas[n] - w[2].kappas[n]).abs();
                    (coarse / fine).ln() / ratio
                })
                .collect()
        })
        .collect();
    Ok(ConvergenceStudy { levels, orders })
}
