//! Closed-form physics of the radial problem: effective potentials,
//! approximate Bessel-type spinors, and spinor normalization.
//!
//! Sublattice B with angular momentum `m` is always evaluated as sublattice
//! A with `-m`. The sign in `m (m ± F)` and in `∓ m / r` is therefore fixed
//! once (A takes the upper sign) and the B/A symmetry holds bit for bit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{SurfaceKind, SurfaceSpec};
use crate::grid::{RadialGrid, RadialProfile};
use crate::par::Execution;
use crate::specialfn::{bessel_j, BesselOrder};

/// Step of the centered difference used for the outer derivative in the
/// full effective potential.
pub const OUTER_DERIVATIVE_STEP: f64 = 1e-6;

/// Total angular momentum `m`, a half-integer stored as `2m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngularMomentum(i32);

impl AngularMomentum {
    pub fn from_twice(twice: i32) -> Result<Self> {
        if twice % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "m must be a half-integer, got {twice}/2"
            )));
        }
        Ok(Self(twice))
    }

    /// Accepts only exact multiples of 1/2 that are half-odd.
    pub fn from_f64(m: f64) -> Result<Self> {
        let twice = 2.0 * m;
        if !twice.is_finite() || twice.fract() != 0.0 || twice.abs() > f64::from(i32::MAX) {
            return Err(Error::InvalidArgument(format!("m = {m} is not a half-integer")));
        }
        Self::from_twice(twice as i32)
    }

    pub fn half() -> Self {
        Self(1)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn negated(self) -> Self {
        Self(-self.0)
    }
}

impl fmt::Display for AngularMomentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

impl FromStr for AngularMomentum {
    type Err = Error;

    /// `"1/2"`, `"-3/2"`, `"+5/2"` or a decimal such as `"1.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse m from `{s}`"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().trim_start_matches('+').parse().map_err(|_| bad())?;
            let den: i32 = den.trim().parse().map_err(|_| bad())?;
            return match den {
                2 => Self::from_twice(num),
                _ => Err(Error::InvalidArgument(format!(
                    "m must be written over 2 (e.g. 3/2), got `{s}`"
                ))),
            };
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        Self::from_f64(v)
    }
}

impl Serialize for AngularMomentum {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AngularMomentum {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Number(v) => Self::from_f64(v).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sublattice {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub m: AngularMomentum,
    pub lattice: Sublattice,
}

impl QuantumNumbers {
    pub fn new(m: AngularMomentum, lattice: Sublattice) -> Self {
        Self { m, lattice }
    }

    pub fn a(m: AngularMomentum) -> Self {
        Self::new(m, Sublattice::A)
    }

    pub fn b(m: AngularMomentum) -> Self {
        Self::new(m, Sublattice::B)
    }

    /// The sublattice-A quantum numbers that describe the same equation.
    pub fn as_lattice_a(self) -> Self {
        match self.lattice {
            Sublattice::A => self,
            Sublattice::B => Self::a(self.m.negated()),
        }
    }

    /// `m` of the equivalent sublattice-A equation.
    pub fn effective_m(self) -> f64 {
        self.as_lattice_a().m.value()
    }

    /// Bessel order `(1 + 2m)/2` (A) or `(1 - 2m)/2` (B).
    pub fn bessel_order(self) -> i64 {
        (1 + i64::from(self.as_lattice_a().m.twice())) / 2
    }
}

fn require_positive(quantity: &'static str, r: f64) -> Result<()> {
    if r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            quantity,
            r,
            reason: "requires r > 0",
        })
    }
}

/// Field-free effective potential `∓ m / r + A_θ(r)`.
pub fn effective_potential_simple(spec: &SurfaceSpec, qn: QuantumNumbers, r: f64) -> Result<f64> {
    require_positive("effective potential", r)?;
    let m = qn.effective_m();
    Ok(-m / r + spec.pseudo_gauge(r)?)
}

/// Full effective potential of the decoupled second-order equation:
///
/// `-F A_θ' - A_θ^2 + (m/r^2)(m ± F) + (1/2) d/dr[F (F' + 2 A_θ')]
///  + (1/4) F^2 (F' + 2 A_θ)^2`.
///
/// The inner bracket of the total derivative is analytic; the outer
/// derivative is a centered difference with step
/// `min(OUTER_DERIVATIVE_STEP, r / 2)`.
pub fn effective_potential_full(spec: &SurfaceSpec, qn: QuantumNumbers, r: f64) -> Result<f64> {
    require_positive("effective potential", r)?;
    let m = qn.effective_m();
    let big_f = spec.fermi_factor(r);
    let big_f_prime = spec.fermi_factor_derivative(r);
    let gauge = spec.pseudo_gauge(r)?;
    let gauge_prime = spec.pseudo_gauge_derivative(r)?;

    let inner = |s: f64| -> Result<f64> {
        Ok(spec.fermi_factor(s) * (spec.fermi_factor_derivative(s) + 2.0 * spec.pseudo_gauge_derivative(s)?))
    };
    let step = OUTER_DERIVATIVE_STEP.min(0.5 * r);
    let outer = (inner(r + step)? - inner(r - step)?) / (2.0 * step);

    let drift = big_f_prime + 2.0 * gauge;
    Ok(-big_f * gauge_prime - gauge * gauge
        + (m / (r * r)) * (m + big_f)
        + 0.5 * outer
        + 0.25 * big_f * big_f * drift * drift)
}

/// Approximate spinor component without Fermi-velocity variation:
///
/// * Gaussian: `exp((alpha/4) e^{-2r^2/b^2}) sqrt(r) J_ν(κ r)`
/// * volcano: `r^{-1/4} sqrt(r) J_ν(κ r) = r^{1/4} J_ν(κ r)`
/// * flat: `sqrt(r) J_ν(κ r)`
///
/// with `ν = (1 ± 2m)/2`. The overall constant is left at 1; fix it with
/// [`normalize_density`].
pub fn analytic_spinor(spec: &SurfaceSpec, qn: QuantumNumbers, kappa: f64, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain {
            quantity: "analytic spinor",
            r,
            reason: "radius must be non-negative",
        });
    }
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidArgument(format!("kappa must be positive, got {kappa}")));
    }
    let order = BesselOrder::new(qn.bessel_order())?;
    let bessel = bessel_j(order, kappa * r)?;
    let envelope = match spec.kind() {
        SurfaceKind::Gaussian => {
            let b = spec.width();
            (0.25 * spec.alpha() * (-2.0 * r * r / (b * b)).exp()).exp() * r.sqrt()
        }
        SurfaceKind::Volcano => r.powf(0.25),
        SurfaceKind::Flat => r.sqrt(),
    };
    Ok(envelope * bessel)
}

/// [`analytic_spinor`] sampled at every grid node.
pub fn spinor_profile(
    spec: &SurfaceSpec,
    qn: QuantumNumbers,
    kappa: f64,
    grid: &RadialGrid,
    exec: Execution,
) -> Result<RadialProfile> {
    let values = exec
        .map_range(grid.intervals() + 1, |i| analytic_spinor(spec, qn, kappa, grid.node(i)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    RadialProfile::new(*grid, values)
}

/// Max-norm residual of `-χ'' + (m/r^2)(m ± 1) χ - κ^2 χ` at the interior
/// nodes of `chi`'s grid, with the 3-point second difference.
pub fn klein_gordon_residual(qn: QuantumNumbers, kappa: f64, chi: &RadialProfile) -> Result<f64> {
    let grid = chi.grid();
    if grid.n_interior() < crate::grid::MIN_INTERIOR_NODES {
        return Err(Error::InvalidGrid("grid too coarse for a residual".into()));
    }
    let m = qn.effective_m();
    let h2 = grid.h() * grid.h();
    let v = chi.values();
    let mut worst = 0.0_f64;
    for i in 1..grid.intervals() {
        let r = grid.node(i);
        let second = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / h2;
        let res = -second + (m / (r * r)) * (m + 1.0) * v[i] - kappa * kappa * v[i];
        worst = worst.max(res.abs());
    }
    Ok(worst)
}

/// Jointly normalizes a spinor so that `2π ∫ r (|ψ_A|^2 + |ψ_B|^2) dr = 1`.
///
/// Returns the common amplitude factor `s` (multiply both components by it)
/// and the normalized density `ρ`.
pub fn normalize_density(psi_a: &RadialProfile, psi_b: &RadialProfile) -> Result<(f64, RadialProfile)> {
    if psi_a.grid() != psi_b.grid() {
        return Err(Error::InvalidArgument("spinor components live on different grids".into()));
    }
    let rho: Vec<f64> = psi_a
        .values()
        .iter()
        .zip(psi_b.values())
        .map(|(a, b)| a * a + b * b)
        .collect();
    let rho = RadialProfile::new(*psi_a.grid(), rho)?;
    let total = rho.areal_integral();
    if !(total > 0.0) {
        return Err(Error::ZeroProfile);
    }
    let scale = 1.0 / total.sqrt();
    let factor = scale * scale;
    Ok((scale, rho.map(|v| v * factor)))
}

/// First `count` positive κ with `d/dr [sqrt(r) J_ν(κ r)] = 0` at `r_max`,
/// for the α = 0 equation of `qn`. Only the solution regular at the origin
/// enters, so the Dirichlet node at a small positive `r_min` is treated as
/// if it were at the origin.
pub fn flat_boundary_roots(qn: QuantumNumbers, r_max: f64, count: usize) -> Result<Vec<f64>> {
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(Error::InvalidArgument(format!("r_max must be positive, got {r_max}")));
    }
    let nu = qn.bessel_order().abs();
    let order = BesselOrder::new(nu)?;
    let lower = BesselOrder::new(nu - 1)?;
    // r^{1/2} d/dr [sqrt(r) J_ν(κr)] ∝ (1/2 - ν) J_ν(x) + x J_{ν-1}(x), x = κ r_max
    let g = |x: f64| -> Result<f64> {
        Ok((0.5 - nu as f64) * bessel_j(order, x)? + x * bessel_j(lower, x)?)
    };
    let mut roots = Vec::with_capacity(count);
    let step = 0.05;
    let mut lo = 1e-3;
    let mut g_lo = g(lo)?;
    while roots.len() < count {
        let hi = lo + step;
        let g_hi = g(hi)?;
        if g_lo == 0.0 {
            roots.push(lo / r_max);
        } else if g_lo * g_hi < 0.0 {
            let (mut a, mut b, mut ga) = (lo, hi, g_lo);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let gm = g(mid)?;
                if gm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if ga * gm < 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    ga = gm;
                }
            }
            roots.push(0.5 * (a + b) / r_max);
        }
        lo = hi;
        g_lo = g_hi;
    }
    Ok(roots)
}
