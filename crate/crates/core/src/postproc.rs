//! Observables derived from eigensolutions: paired spinor densities, peak
//! tables and linear fits of the spectrum.

use serde::Serialize;

use crate::analytic::normalize_density;
use crate::error::{Error, Result};
use crate::grid::{RadialGrid, RadialProfile};
use crate::solver::{EigenSolution, OperatorLabel};

/// Fraction of the profile maximum used as the default peak prominence.
pub const DEFAULT_RELATIVE_PROMINENCE: f64 = 0.01;

/// Largest allowed deviation of `2π ∫ r ρ dr` from 1.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Sublattice densities of one spinor, jointly normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorDensity {
    pub density_a: RadialProfile,
    pub density_b: RadialProfile,
    pub rho: RadialProfile,
    pub kappa_a: f64,
    pub kappa_b: f64,
    /// Mode index, counted from 1.
    pub index: usize,
    pub label_a: Option<OperatorLabel>,
    pub label_b: Option<OperatorLabel>,
}

impl SpinorDensity {
    pub fn grid(&self) -> &RadialGrid {
        self.rho.grid()
    }

    /// `2π ∫ r ρ dr`.
    pub fn total_probability(&self) -> f64 {
        self.rho.areal_integral()
    }
}

/// Pairs mode `index` (from 1) of two solutions into a normalized density.
pub fn density_from_solutions(a: &EigenSolution, b: &EigenSolution, index: usize) -> Result<SpinorDensity> {
    let (Some(psi_a), Some(psi_b)) = (a.mode(index), b.mode(index)) else {
        return Err(Error::InvalidArgument(format!(
            "mode index {index} is outside 1..={}",
            a.len().min(b.len())
        )));
    };
    spinor_density(psi_a, psi_b, a.kappas[index - 1], b.kappas[index - 1], index)
        .map(|d| SpinorDensity {
            label_a: a.label,
            label_b: b.label,
            ..d
        })
}

/// Normalized density of an arbitrary pair of spinor components.
pub fn spinor_density(
    psi_a: &RadialProfile,
    psi_b: &RadialProfile,
    kappa_a: f64,
    kappa_b: f64,
    index: usize,
) -> Result<SpinorDensity> {
    let (scale, rho) = normalize_density(psi_a, psi_b)?;
    let factor = scale * scale;
    let density = SpinorDensity {
        density_a: psi_a.map(|v| v * v * factor),
        density_b: psi_b.map(|v| v * v * factor),
        rho,
        kappa_a,
        kappa_b,
        index,
        label_a: None,
        label_b: None,
    };
    let total = density.total_probability();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NoConvergence {
            stage: "density normalization",
            iterations: 1,
            residual: (total - 1.0).abs(),
        });
    }
    Ok(density)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Peak {
    pub r: f64,
    pub value: f64,
    pub prominence: f64,
}

/// Local maxima (`v[i-1] < v[i] >= v[i+1]`, interior nodes only) whose
/// topographic prominence is at least `min_prominence`, sorted by `r`.
///
/// A non-positive threshold keeps every local maximum.
pub fn find_peaks(profile: &RadialProfile, min_prominence: f64) -> Vec<Peak> {
    let v = profile.values();
    let grid = profile.grid();
    let mut peaks = Vec::new();
    for i in 1..v.len().saturating_sub(1) {
        if !(v[i] > v[i - 1] && v[i] >= v[i + 1]) {
            continue;
        }
        let prominence = prominence(v, i);
        if min_prominence <= 0.0 || prominence >= min_prominence {
            peaks.push(Peak {
                r: grid.node(i),
                value: v[i],
                prominence,
            });
        }
    }
    peaks
}

/// [`find_peaks`] with the threshold `fraction * max(profile)`.
pub fn find_peaks_relative(profile: &RadialProfile, fraction: f64) -> Vec<Peak> {
    let top = profile.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let threshold = fraction * top;
    // An all-zero profile has no maxima anyway; keep the threshold positive
    // so that flat plateaus of zeros are not reported.
    find_peaks(profile, if threshold > 0.0 { threshold } else { f64::MIN_POSITIVE })
}

fn prominence(v: &[f64], i: usize) -> f64 {
    let height = v[i];
    let mut left_min = height;
    for j in (0..i).rev() {
        if v[j] > height {
            break;
        }
        left_min = left_min.min(v[j]);
    }
    let mut right_min = height;
    for &x in &v[i + 1..] {
        if x > height {
            break;
        }
        right_min = right_min.min(x);
    }
    height - left_min.max(right_min)
}

/// Ordinary least squares of `κ_n` against `n = 1, 2, ...`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_used: usize,
    /// Set when the data have no spread, so `r_squared` is undefined and
    /// reported as 0.
    pub degenerate: bool,
}

pub const MIN_FIT_POINTS: usize = 5;

pub fn fit_spectrum(kappas: &[f64]) -> Result<SpectrumFit> {
    let n = kappas.len();
    if n < MIN_FIT_POINTS {
        return Err(Error::InvalidArgument(format!(
            "a spectrum fit needs at least {MIN_FIT_POINTS} values, got {n}"
        )));
    }
    if kappas.iter().any(|k| !k.is_finite()) {
        return Err(Error::InvalidArgument("spectrum contains non-finite values".into()));
    }
    let nf = n as f64;
    let mean_x = (nf + 1.0) / 2.0;
    let mean_y = kappas.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (i, y) in kappas.iter().enumerate() {
        let dx = (i + 1) as f64 - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let degenerate = syy <= f64::EPSILON * f64::EPSILON * mean_y * mean_y * nf || syy == 0.0;
    let r_squared = if degenerate {
        0.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(SpectrumFit {
        slope: if degenerate { 0.0 } else { slope },
        intercept: if degenerate { mean_y } else { intercept },
        r_squared,
        n_used: n,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(f: impl Fn(f64) -> f64) -> RadialProfile {
        let grid = RadialGrid::new(0.001, 3.0, 0.001).unwrap();
        RadialProfile::from_fn(grid, |r| Ok(f(r))).unwrap()
    }

    #[test]
    fn monotone_profile_has_no_peaks() {
        assert!(find_peaks(&profile(|r| r * r), 0.01).is_empty());
        assert!(find_peaks(&profile(|r| -r), 0.0).is_empty());
    }

    #[test]
    fn sine_squared_peaks() {
        let p = profile(|r| (std::f64::consts::PI * r).sin().powi(2));
        let peaks = find_peaks(&p, 0.01);
        let radii: Vec<f64> = peaks.iter().map(|p| p.r).collect();
        assert_eq!(radii.len(), 3, "{radii:?}");
        for (r, want) in radii.iter().zip([0.5, 1.5, 2.5]) {
            assert!((r - want).abs() <= 0.001);
        }
        assert!(peaks.iter().all(|p| (p.prominence - 1.0).abs() < 1e-5));
    }

    #[test]
    fn prominence_filters_ripples() {
        let p = profile(|r| (-(r - 1.5f64).powi(2)).exp() + 1e-3 * (300.0 * r).sin());
        assert_eq!(find_peaks_relative(&p, DEFAULT_RELATIVE_PROMINENCE).len(), 1);
        assert!(find_peaks(&p, 0.0).len() > 5);
    }

    #[test]
    fn fit_exact_line_and_degenerate() {
        let k: Vec<f64> = (1..=10).map(|n| 0.6 * n as f64).collect();
        let fit = fit_spectrum(&k).unwrap();
        assert!((fit.slope - 0.6).abs() < 1e-14);
        assert!(fit.intercept.abs() < 1e-13);
        assert!((fit.r_squared - 1.0).abs() < 1e-14);
        assert!(!fit.degenerate);

        let fit = fit_spectrum(&[2.0; 6]).unwrap();
        assert!(fit.degenerate);
        assert_eq!(fit.r_squared, 0.0);
        assert_eq!(fit.slope, 0.0);

        assert!(fit_spectrum(&[1.0, 2.0, 3.0, 4.0]).is_err());
    }

    #[test]
    fn zero_density_is_rejected() {
        let z = profile(|_| 0.0);
        assert_eq!(spinor_density(&z, &z, 1.0, 1.0, 1), Err(Error::ZeroProfile));
    }
}
