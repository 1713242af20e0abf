use crate::analytic::QuantumNumbers;
use crate::error::{Error, Result};
use crate::geometry::SurfaceSpec;
use crate::grid::RadialGrid;

/// Where an operator came from. Operators built by hand have none.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorLabel {
    pub spec: SurfaceSpec,
    pub qn: QuantumNumbers,
}

/// A real tridiagonal matrix.
///
/// `sub[k]` is the entry at row `k + 1`, column `k`; `sup[k]` is the entry
/// at row `k`, column `k + 1`. Row `k` of an assembled operator belongs to
/// grid node `k + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalOperator {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
    grid: RadialGrid,
    label: Option<OperatorLabel>,
}

impl TridiagonalOperator {
    /// Wraps explicit bands. `diag.len()` must equal `grid.unknowns()`.
    pub fn from_bands(grid: RadialGrid, sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n != grid.unknowns() {
            return Err(Error::InvalidArgument(format!(
                "operator has {n} rows but the grid has {} unknowns",
                grid.unknowns()
            )));
        }
        if sub.len() + 1 != n || sup.len() + 1 != n {
            return Err(Error::InvalidArgument(format!(
                "band lengths {}/{n}/{} do not form a tridiagonal matrix",
                sub.len(),
                sup.len()
            )));
        }
        if sub.iter().chain(&diag).chain(&sup).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("operator has non-finite entries".into()));
        }
        Ok(Self { sub, diag, sup, grid, label: None })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn label(&self) -> Option<OperatorLabel> {
        self.label
    }

    /// `y = M x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(x.len(), n, "vector length must match the operator");
        (0..n)
            .map(|k| {
                let mut v = self.diag[k] * x[k];
                if k > 0 {
                    v += self.sub[k - 1] * x[k - 1];
                }
                if k + 1 < n {
                    v += self.sup[k] * x[k + 1];
                }
                v
            })
            .collect()
    }

    /// True when every off-diagonal product `sub[k] * sup[k]` is positive,
    /// i.e. a real diagonal similarity makes the matrix symmetric.
    pub fn is_symmetrizable(&self) -> bool {
        self.sub.iter().zip(&self.sup).all(|(l, u)| l * u > 0.0)
    }

    /// Diagonal `d` with `D^{-1} M D` symmetric, scaled so `max d = 1`.
    ///
    /// `None` when the operator is not symmetrizable.
    pub fn similarity_weights(&self) -> Option<Vec<f64>> {
        if !self.is_symmetrizable() {
            return None;
        }
        let mut logs = Vec::with_capacity(self.dim());
        let mut acc = 0.0;
        logs.push(acc);
        for (l, u) in self.sub.iter().zip(&self.sup) {
            acc += 0.5 * ((l / u).ln());
            logs.push(acc);
        }
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(logs.into_iter().map(|v| (v - top).exp()).collect())
    }

    /// Off-diagonal of the symmetrized matrix, `sign(sup) sqrt(sub sup)`.
    pub(crate) fn symmetric_offdiag(&self) -> Vec<f64> {
        self.sub
            .iter()
            .zip(&self.sup)
            .map(|(l, u)| u.signum() * (l * u).sqrt())
            .collect()
    }
}

/// Discretizes the negated radial operator of sublattice-equivalent `qn`
/// on the unknown nodes `1..=N` of `grid`.
///
/// With `p = F^2`, `q = F (F' + 2 A_θ)` and
/// `c = F A_θ' - (m/r^2)(m + F) + A_θ^2` (sublattice B enters as A with
/// `-m`), row `i` reads
///
/// `-(p/h^2 - q/2h) ψ_{i-1} + (2p/h^2 - c) ψ_i - (p/h^2 + q/2h) ψ_{i+1} = κ^2 ψ_i`.
///
/// `ψ_0 = 0` drops the left neighbour of the first row and the ghost
/// reflection `ψ_{N+1} = ψ_{N-1}` folds the last row's right neighbour into
/// its left one.
pub fn assemble(spec: &SurfaceSpec, qn: QuantumNumbers, grid: &RadialGrid) -> Result<TridiagonalOperator> {
    let n = grid.unknowns();
    let m = qn.effective_m();
    let h = grid.h();
    let inv_h2 = 1.0 / (h * h);
    let inv_2h = 0.5 / h;

    let mut lower = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for i in 1..=n {
        let r = grid.node(i);
        let big_f = spec.fermi_factor(r);
        let big_f_prime = spec.fermi_factor_derivative(r);
        let gauge = spec.pseudo_gauge(r)?;
        let gauge_prime = spec.pseudo_gauge_derivative(r)?;

        let p = big_f * big_f;
        let q = big_f * (big_f_prime + 2.0 * gauge);
        let c = big_f * gauge_prime - (m / (r * r)) * (m + big_f) + gauge * gauge;
        lower.push(-(p * inv_h2 - q * inv_2h));
        diag.push(2.0 * p * inv_h2 - c);
        upper.push(-(p * inv_h2 + q * inv_2h));
    }

    let ghost = upper[n - 1];
    lower[n - 1] += ghost;
    let sub = lower[1..].to_vec();
    upper.truncate(n - 1);

    let mut op = TridiagonalOperator::from_bands(*grid, sub, diag, upper)?;
    op.label = Some(OperatorLabel { spec: *spec, qn });
    Ok(op)
}
