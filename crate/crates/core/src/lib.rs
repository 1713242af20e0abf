//! Massless Dirac fermions on axially symmetric curved surfaces.
//!
//! The crate covers the whole pipeline from a bump profile to observables:
//!
//! * [`geometry`]: metric deformation, Fermi-velocity factor, pseudo-gauge
//!   potential, curvature and the geometric phase.
//! * [`specialfn`]: integer-order Bessel functions of the first kind.
//! * [`analytic`]: effective potentials and approximate spinor solutions.
//! * [`solver`]: finite-difference discretization of the decoupled radial
//!   equation and its tridiagonal eigenproblem.
//! * [`postproc`]: densities, peaks and spectrum fits.
//!
//! Data-parallel loops go through [`Execution`]; with the `parallel`
//! feature disabled every strategy runs sequentially.

pub mod analytic;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod par;
pub mod postproc;
pub mod quadrature;
pub mod solver;
pub mod specialfn;

pub use analytic::{AngularMomentum, QuantumNumbers, Sublattice};
pub use error::{Error, Result};
pub use geometry::{SurfaceKind, SurfaceSpec};
pub use grid::{RadialGrid, RadialProfile};
pub use par::Execution;
pub use solver::{assemble, eigen_solve, solve_spinor_pair, EigenSolution, TridiagonalOperator};
