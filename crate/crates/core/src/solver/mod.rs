//! Finite-difference eigenproblem of the decoupled radial Dirac equation.
//!
//! [`assemble`] turns a surface and quantum numbers into a tridiagonal
//! operator `M` with `M ψ = κ^2 ψ`. [`eigen_solve`] extracts the lowest
//! positive eigenvalues. When every `sub[k] * sup[k]` is positive the
//! operator is diagonally similar to a symmetric matrix, whose spectrum is
//! found by Sturm bisection and whose vectors come from inverse iteration.
//! Otherwise a dense Hessenberg QR iteration is used (small grids only).

mod convergence;
mod hessenberg;
mod operator;
mod tridiag;

use serde::Serialize;

use crate::analytic::{normalize_density, AngularMomentum, QuantumNumbers};
use crate::error::{Error, Result};
use crate::geometry::SurfaceSpec;
use crate::grid::{RadialGrid, RadialProfile};
use crate::par::Execution;

pub use convergence::{convergence_study, convergence_study_grids, ConvergenceLevel, ConvergenceStudy, TRACKED_LEVELS};
pub use hessenberg::{DEFLATION_TOL, MAX_DENSE_DIM};
pub use operator::{assemble, OperatorLabel, TridiagonalOperator};

use tridiag::{inverse_iteration, SturmData};

/// Most eigenpairs a single solve returns.
pub const MAX_EIGENCOUNT: usize = 50;

/// Eigenvalues at or below this are not part of the positive spectrum.
pub const POSITIVE_EIGENVALUE_FLOOR: f64 = 1e-10;

/// Largest `|Im λ| / |λ|` the Hessenberg path accepts.
pub const MAX_IMAGINARY_RESIDUE: f64 = 1e-8;

/// Components below this fraction of the largest one are skipped when
/// fixing the sign of a mode.
const SIGN_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenPath {
    /// Diagonal similarity to a symmetric matrix, Sturm bisection and
    /// inverse iteration.
    Symmetric,
    /// Dense Francis double-shift QR.
    Hessenberg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Method {
    /// Symmetric path when the operator allows it, Hessenberg otherwise.
    #[default]
    Auto,
    /// Always use the Hessenberg path.
    Hessenberg,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub execution: Execution,
    pub method: Method,
}

/// The lowest part of the positive spectrum of an operator.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSolution {
    /// `κ_n = sqrt(λ_n)`, strictly increasing.
    pub kappas: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    /// One profile per eigenvalue over every grid node, `ψ(r_min) = 0`,
    /// normalized so that `2π ∫ r ψ^2 dr = 1` and with the first
    /// non-negligible entry positive.
    pub modes: Vec<RadialProfile>,
    pub grid: RadialGrid,
    pub label: Option<OperatorLabel>,
    pub path: EigenPath,
    /// Largest `|Im λ| / |λ|` among the retained eigenvalues (0 on the
    /// symmetric path).
    pub max_imag_residue: f64,
}

impl EigenSolution {
    pub fn len(&self) -> usize {
        self.kappas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappas.is_empty()
    }

    /// `κ_n` with `n` counted from 1.
    pub fn kappa(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.kappas.get(i).copied())
    }

    /// Mode `n`, counted from 1.
    pub fn mode(&self, n: usize) -> Option<&RadialProfile> {
        n.checked_sub(1).and_then(|i| self.modes.get(i))
    }
}

struct RawSpectrum {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    path: EigenPath,
    max_imag_residue: f64,
}

pub fn eigen_solve(op: &TridiagonalOperator, count: usize) -> Result<EigenSolution> {
    eigen_solve_with(op, count, SolveOptions::default())
}

/// The `count` smallest eigenvalues above [`POSITIVE_EIGENVALUE_FLOOR`] and
/// their modes.
pub fn eigen_solve_with(op: &TridiagonalOperator, count: usize, options: SolveOptions) -> Result<EigenSolution> {
    if count == 0 || count > MAX_EIGENCOUNT {
        return Err(Error::InvalidArgument(format!(
            "eigencount must be in 1..={MAX_EIGENCOUNT}, got {count}"
        )));
    }
    let use_symmetric = options.method == Method::Auto && op.is_symmetrizable();
    let raw = if use_symmetric {
        symmetric_spectrum(op, count, options.execution)?
    } else {
        hessenberg_spectrum(op, count, options.execution)?
    };

    let grid = *op.grid();
    let modes = options
        .execution
        .map_range(raw.vectors.len(), |i| finish_mode(&grid, &raw.vectors[i]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let kappas: Vec<f64> = raw.values.iter().map(|v| v.sqrt()).collect();
    if kappas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::NoConvergence {
            stage: "eigenvalue separation",
            iterations: 0,
            residual: 0.0,
        });
    }
    Ok(EigenSolution {
        kappas,
        eigenvalues: raw.values,
        modes,
        grid,
        label: op.label(),
        path: raw.path,
        max_imag_residue: raw.max_imag_residue,
    })
}

/// Prepends the Dirichlet node, fixes the sign and normalizes.
fn finish_mode(grid: &RadialGrid, vector: &[f64]) -> Result<RadialProfile> {
    let mut values = Vec::with_capacity(vector.len() + 1);
    values.push(0.0);
    values.extend_from_slice(vector);
    let largest = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if let Some(first) = values.iter().find(|v| v.abs() > SIGN_THRESHOLD * largest) {
        if *first < 0.0 {
            for v in values.iter_mut() {
                *v = -*v;
            }
        }
    }
    let profile = RadialProfile::new(*grid, values)?;
    let zero = RadialProfile::zeros(*grid);
    let (scale, _) = normalize_density(&profile, &zero)?;
    Ok(profile.map(|v| v * scale))
}

fn not_enough(requested: usize, available: usize) -> Error {
    Error::NotEnoughEigenvalues { requested, available }
}

fn symmetric_spectrum(op: &TridiagonalOperator, count: usize, exec: Execution) -> Result<RawSpectrum> {
    let n = op.dim();
    let products: Vec<f64> = op.sub().iter().zip(op.sup()).map(|(l, u)| l * u).collect();
    let sturm = SturmData::new(op.diag(), products);
    let (lo, hi) = sturm.gershgorin();
    let first = sturm.count_below(POSITIVE_EIGENVALUE_FLOOR);
    // An eigenvalue sitting exactly on the floor is not positive enough.
    let first = if first < n && sturm.bisect(first, lo, hi) <= POSITIVE_EIGENVALUE_FLOOR {
        first + 1
    } else {
        first
    };
    let available = n - first;
    if count > available {
        return Err(not_enough(count, available));
    }

    let values = exec.map_range(count, |j| sturm.bisect(first + j, lo, hi));

    let offdiag = op.symmetric_offdiag();
    let weights = op.similarity_weights().expect("operator is symmetrizable");
    let norm = sturm.diag.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
        + 2.0 * offdiag.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let clusters = clusters(&values, 1e-8 * norm);

    let groups = exec.map_range(clusters.len(), |c| -> Result<Vec<Vec<f64>>> {
        let mut found: Vec<Vec<f64>> = Vec::new();
        for j in clusters[c].clone() {
            let y = inverse_iteration(&offdiag, op.diag(), &offdiag, values[j], first + j, &found)?;
            found.push(y);
        }
        Ok(found)
    });
    let mut vectors = Vec::with_capacity(count);
    for group in groups {
        for y in group? {
            vectors.push(y.iter().zip(&weights).map(|(a, d)| a * d).collect());
        }
    }
    Ok(RawSpectrum {
        values,
        vectors,
        path: EigenPath::Symmetric,
        max_imag_residue: 0.0,
    })
}

/// Index ranges of ascending `values` whose neighbours are closer than
/// `gap`.
fn clusters(values: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for j in 1..=values.len() {
        if j == values.len() || values[j] - values[j - 1] > gap {
            out.push(start..j);
            start = j;
        }
    }
    out
}

fn hessenberg_spectrum(op: &TridiagonalOperator, count: usize, exec: Execution) -> Result<RawSpectrum> {
    let all = hessenberg::tridiagonal_eigenvalues(op.sub(), op.diag(), op.sup())?;
    let mut positive: Vec<(f64, f64)> = all
        .into_iter()
        .filter(|(re, _)| *re > POSITIVE_EIGENVALUE_FLOOR)
        .collect();
    positive.sort_by(|a, b| a.0.total_cmp(&b.0));
    if count > positive.len() {
        return Err(not_enough(count, positive.len()));
    }
    positive.truncate(count);
    let max_imag_residue = positive
        .iter()
        .map(|(re, im)| im.abs() / re.abs())
        .fold(0.0_f64, f64::max);
    if max_imag_residue > MAX_IMAGINARY_RESIDUE {
        return Err(Error::NoConvergence {
            stage: "Hessenberg QR (complex eigenvalues in the requested range)",
            iterations: 0,
            residual: max_imag_residue,
        });
    }
    let values: Vec<f64> = positive.iter().map(|p| p.0).collect();
    let vectors = exec
        .map_range(count, |j| inverse_iteration(op.sub(), op.diag(), op.sup(), values[j], j, &[]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(RawSpectrum {
        values,
        vectors,
        path: EigenPath::Hessenberg,
        max_imag_residue,
    })
}

/// Sublattice A and B spectra for one `m`, with modes paired by index and
/// jointly normalized.
///
/// B is solved as A with `-m`, so `B(m)` and `A(-m)` share every bit.
pub fn solve_spinor_pair(
    spec: &SurfaceSpec,
    m: AngularMomentum,
    grid: &RadialGrid,
    count: usize,
) -> Result<(EigenSolution, EigenSolution)> {
    solve_spinor_pair_with(spec, m, grid, count, SolveOptions::default())
}

pub fn solve_spinor_pair_with(
    spec: &SurfaceSpec,
    m: AngularMomentum,
    grid: &RadialGrid,
    count: usize,
    options: SolveOptions,
) -> Result<(EigenSolution, EigenSolution)> {
    let solve = |qn: QuantumNumbers| -> Result<EigenSolution> {
        let op = assemble(spec, qn, grid)?;
        let mut sol = eigen_solve_with(&op, count, options)?;
        sol.label = Some(OperatorLabel { spec: *spec, qn });
        Ok(sol)
    };
    let (a, b) = options.execution.join(
        || solve(QuantumNumbers::a(m)),
        || solve(QuantumNumbers::a(m.negated())),
    );
    let (mut a, mut b) = (a?, b?);
    if let Some(label) = b.label.as_mut() {
        label.qn = QuantumNumbers::b(m);
    }
    for (pa, pb) in a.modes.iter_mut().zip(b.modes.iter_mut()) {
        let (scale, _) = normalize_density(pa, pb)?;
        *pa = pa.map(|v| v * scale);
        *pb = pb.map(|v| v * scale);
    }
    Ok((a, b))
}
