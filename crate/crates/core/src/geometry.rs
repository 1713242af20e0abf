//! Closed-form differential geometry of an axially symmetric bump `z(r)`.
//!
//! The embedding enters the Dirac problem only through the radial metric
//! deformation `1 + alpha f(r)`, where `alpha f(r) = z'(r)^2` and
//! `alpha = A^2 / b^2`. Everything else (Fermi factor, pseudo-gauge
//! potential, curvature, connection) is built from `f` and `f'`.
//!
//! `f'` is always evaluated from expanded polynomial-times-exponential
//! forms, so there is no removable singularity at `r = 0` or at the volcano
//! node `r = b / sqrt(2)`. In the same spirit, `f'(r) / r` is kept as its own
//! regular function; it is what the curvature scalar actually needs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;

/// Absolute tolerance for the integral inside the geometric phase.
pub const PHASE_QUADRATURE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Gaussian,
    Volcano,
    Flat,
}

impl SurfaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Gaussian => "gaussian",
            SurfaceKind::Volcano => "volcano",
            SurfaceKind::Flat => "flat",
        }
    }
}

impl std::str::FromStr for SurfaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(SurfaceKind::Gaussian),
            "volcano" => Ok(SurfaceKind::Volcano),
            "flat" => Ok(SurfaceKind::Flat),
            other => Err(Error::InvalidSurface(format!(
                "unknown surface `{other}` (expected gaussian, volcano or flat)"
            ))),
        }
    }
}

/// A bump geometry. `alpha` is always derived from amplitude and width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceSpec {
    kind: SurfaceKind,
    amplitude: f64,
    width: f64,
    alpha: f64,
}

/// Point values of the geometric fields at one radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometryFields {
    pub r: f64,
    pub f: f64,
    pub f_prime: f64,
    pub fermi_factor: f64,
    pub pseudo_gauge: f64,
    pub curvature: f64,
}

/// The non-zero connection coefficients of the spatial metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Christoffel {
    /// Γ^r_rr
    pub r_rr: f64,
    /// Γ^r_θθ
    pub r_thth: f64,
    /// Γ^θ_rθ = Γ^θ_θr
    pub th_rth: f64,
}

impl SurfaceSpec {
    pub fn new(kind: SurfaceKind, amplitude: f64, width: f64) -> Result<Self> {
        match kind {
            SurfaceKind::Flat => Ok(Self::flat()),
            _ => {
                if !(amplitude.is_finite() && amplitude > 0.0) {
                    return Err(Error::InvalidSurface(format!(
                        "amplitude must be positive and finite, got {amplitude}"
                    )));
                }
                if !(width.is_finite() && width > 0.0) {
                    return Err(Error::InvalidSurface(format!(
                        "width must be positive and finite, got {width}"
                    )));
                }
                Ok(Self {
                    kind,
                    amplitude,
                    width,
                    alpha: amplitude * amplitude / (width * width),
                })
            }
        }
    }

    pub fn gaussian(amplitude: f64, width: f64) -> Result<Self> {
        Self::new(SurfaceKind::Gaussian, amplitude, width)
    }

    pub fn volcano(amplitude: f64, width: f64) -> Result<Self> {
        Self::new(SurfaceKind::Volcano, amplitude, width)
    }

    /// The undeformed plane. Amplitude and width are recorded as 0 and 1.
    pub fn flat() -> Self {
        Self {
            kind: SurfaceKind::Flat,
            amplitude: 0.0,
            width: 1.0,
            alpha: 0.0,
        }
    }

    /// Builds a surface from the perturbation parameter directly by fixing
    /// `width = 1` and `amplitude = sqrt(alpha)`. `alpha = 0` yields the flat
    /// surface.
    pub fn with_alpha(kind: SurfaceKind, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidSurface(format!(
                "alpha must be non-negative and finite, got {alpha}"
            )));
        }
        if alpha == 0.0 || kind == SurfaceKind::Flat {
            return Ok(Self::flat());
        }
        Self::new(kind, alpha.sqrt(), 1.0)
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Height `z(r)` of the embedded surface.
    pub fn profile_height(&self, r: f64) -> f64 {
        let b = self.width;
        match self.kind {
            SurfaceKind::Gaussian => self.amplitude * (-(r * r) / (b * b)).exp(),
            SurfaceKind::Volcano => self.amplitude * r * (-(r * r) / (b * b)).exp(),
            SurfaceKind::Flat => 0.0,
        }
    }

    /// `f(r)` and `f'(r)`.
    pub fn metric_deformation(&self, r: f64) -> (f64, f64) {
        (self.deformation(r), r * self.deformation_slope_over_r(r))
    }

    fn deformation(&self, r: f64) -> f64 {
        let b = self.width;
        let s = r * r / (b * b);
        match self.kind {
            SurfaceKind::Gaussian => 4.0 * s * (-2.0 * s).exp(),
            SurfaceKind::Volcano => {
                let u = 1.0 - 2.0 * s;
                b * b * u * u * (-2.0 * s).exp()
            }
            SurfaceKind::Flat => 0.0,
        }
    }

    /// `f'(r) / r`, finite at the origin for every kind.
    ///
    /// Gaussian: f' = (8 r / b^2)(1 - 2 s) e^{-2s}, s = r^2 / b^2.
    /// Volcano:  f' = -4 r u (2 + u) e^{-2s},    u = 1 - 2s.
    fn deformation_slope_over_r(&self, r: f64) -> f64 {
        let b = self.width;
        let s = r * r / (b * b);
        let e = (-2.0 * s).exp();
        match self.kind {
            SurfaceKind::Gaussian => 8.0 / (b * b) * (1.0 - 2.0 * s) * e,
            SurfaceKind::Volcano => {
                let u = 1.0 - 2.0 * s;
                -4.0 * u * (2.0 + u) * e
            }
            SurfaceKind::Flat => 0.0,
        }
    }

    /// `alpha f(r)`, i.e. `z'(r)^2`.
    fn stretch(&self, r: f64) -> f64 {
        self.alpha * self.deformation(r)
    }

    /// `F(r) = (1 + alpha f)^{-1/2}`, in `(0, 1]`.
    pub fn fermi_factor(&self, r: f64) -> f64 {
        1.0 / (1.0 + self.stretch(r)).sqrt()
    }

    /// `1 - F(r)` without cancellation for small deformations.
    fn fermi_deficit(&self, r: f64) -> f64 {
        let x = self.stretch(r);
        let s = (1.0 + x).sqrt();
        x / (s * (1.0 + s))
    }

    /// `F'(r) = -alpha f' F^3 / 2`.
    pub fn fermi_factor_derivative(&self, r: f64) -> f64 {
        let (_, fp) = self.metric_deformation(r);
        let big_f = self.fermi_factor(r);
        -0.5 * self.alpha * fp * big_f * big_f * big_f
    }

    fn origin_error(&self, quantity: &'static str, r: f64) -> Error {
        if r < 0.0 || r.is_nan() {
            Error::Domain {
                quantity,
                r,
                reason: "radius must be non-negative",
            }
        } else {
            Error::Domain {
                quantity,
                r,
                reason: "diverges at the origin for the volcano profile",
            }
        }
    }

    /// Pseudo-gauge potential `A_θ(r) = (1 - F(r)) / (2r)`.
    ///
    /// At `r = 0` the Gaussian and flat limits are 0 (`A_θ ≈ alpha r / b^2`);
    /// the volcano potential diverges like `1/r` and is reported as a domain
    /// error.
    pub fn pseudo_gauge(&self, r: f64) -> Result<f64> {
        if r > 0.0 {
            return Ok(self.fermi_deficit(r) / (2.0 * r));
        }
        match (self.kind, r == 0.0) {
            (SurfaceKind::Gaussian | SurfaceKind::Flat, true) => Ok(0.0),
            _ => Err(self.origin_error("pseudo-gauge potential", r)),
        }
    }

    /// `A_θ'(r) = -F'/(2r) - (1 - F)/(2r^2)` for `r > 0`.
    pub fn pseudo_gauge_derivative(&self, r: f64) -> Result<f64> {
        if r > 0.0 {
            let fp = self.fermi_factor_derivative(r);
            return Ok(-fp / (2.0 * r) - self.fermi_deficit(r) / (2.0 * r * r));
        }
        match (self.kind, r == 0.0) {
            (SurfaceKind::Flat, true) => Ok(0.0),
            // A_θ = alpha r / b^2 + O(r^3)
            (SurfaceKind::Gaussian, true) => Ok(self.alpha / (self.width * self.width)),
            _ => Err(self.origin_error("pseudo-gauge derivative", r)),
        }
    }

    /// Scalar curvature `R(r) = -alpha f'(r) / (r (1 + alpha f)^2)`.
    ///
    /// Evaluated through the regular `f'/r`, so `r = 0` returns the limits
    /// `R(0) = -8 alpha / b^2` (Gaussian) and `12 alpha / (1 + alpha b^2)^2`
    /// (volcano).
    pub fn curvature_scalar(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(self.origin_error("curvature scalar", r));
        }
        if self.kind == SurfaceKind::Flat {
            return Ok(0.0);
        }
        let one_plus = 1.0 + self.stretch(r);
        Ok(-self.alpha * self.deformation_slope_over_r(r) / (one_plus * one_plus))
    }

    pub fn christoffel_symbols(&self, r: f64) -> Result<Christoffel> {
        if !(r > 0.0) {
            return Err(Error::Domain {
                quantity: "Christoffel symbols",
                r,
                reason: "Γ^θ_rθ = 1/r requires r > 0",
            });
        }
        let (f, fp) = self.metric_deformation(r);
        let one_plus = 1.0 + self.alpha * f;
        Ok(Christoffel {
            r_rr: self.alpha * fp / (2.0 * one_plus),
            r_thth: -r / one_plus,
            th_rth: 1.0 / r,
        })
    }

    /// `μ(r) = exp(-∫_{r_lower}^{r} A_θ(s) ds)`.
    ///
    /// The Gaussian and flat integrands are regular, so `r_lower = 0` is
    /// allowed there; the volcano integral diverges logarithmically at the
    /// origin and needs `r_lower > 0`.
    pub fn geometric_phase(&self, r: f64, r_lower: f64) -> Result<f64> {
        self.check_phase_limits(r, r_lower)?;
        if self.kind == SurfaceKind::Flat {
            return Ok(1.0);
        }
        let integral = self.phase_integral(r_lower, r)?;
        Ok((-integral).exp())
    }

    fn check_phase_limits(&self, r: f64, r_lower: f64) -> Result<()> {
        if !(r_lower >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "geometric phase needs finite limits with r_lower >= 0 (got r_lower = {r_lower}, r = {r})"
            )));
        }
        if r < r_lower {
            return Err(Error::InvalidArgument(format!(
                "geometric phase needs r >= r_lower (got r = {r}, r_lower = {r_lower})"
            )));
        }
        if r_lower == 0.0 && self.kind == SurfaceKind::Volcano {
            return Err(Error::Domain {
                quantity: "geometric phase",
                r: 0.0,
                reason: "the volcano pseudo-gauge integral diverges at the origin; pass r_lower > 0",
            });
        }
        Ok(())
    }

    fn phase_integral(&self, a: f64, b: f64) -> Result<f64> {
        // Neither endpoint is sampled by Gauss-Kronrod, so the integrand is
        // only evaluated at r > 0.
        integrate_adaptive(
            |s| self.fermi_deficit(s) / (2.0 * s),
            a,
            b,
            PHASE_QUADRATURE_TOL,
        )
    }

    /// `μ` at every radius of the ascending slice `radii`, sharing one lower
    /// limit. Segments between consecutive radii are integrated separately
    /// and accumulated.
    pub fn geometric_phase_profile(&self, radii: &[f64], r_lower: f64) -> Result<Vec<f64>> {
        let Some(&first) = radii.first() else {
            return Ok(Vec::new());
        };
        self.check_phase_limits(first, r_lower)?;
        if radii.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::InvalidArgument(
                "geometric phase profile needs ascending radii".into(),
            ));
        }
        if self.kind == SurfaceKind::Flat {
            return Ok(vec![1.0; radii.len()]);
        }
        let mut out = Vec::with_capacity(radii.len());
        let mut acc = self.phase_integral(r_lower, first)?;
        out.push((-acc).exp());
        for w in radii.windows(2) {
            acc += self.phase_integral(w[0], w[1])?;
            out.push((-acc).exp());
        }
        Ok(out)
    }

    /// All point fields at `r > 0` (at `r = 0` for non-volcano kinds).
    pub fn fields(&self, r: f64) -> Result<GeometryFields> {
        let (f, f_prime) = self.metric_deformation(r);
        Ok(GeometryFields {
            r,
            f,
            f_prime,
            fermi_factor: self.fermi_factor(r),
            pseudo_gauge: self.pseudo_gauge(r)?,
            curvature: self.curvature_scalar(r)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn construction_validates_and_derives_alpha() {
        let s = SurfaceSpec::gaussian(1.3, 1.0).unwrap();
        assert_eq!(s.alpha(), 1.3 * 1.3 / (1.0 * 1.0));
        assert!(SurfaceSpec::gaussian(0.0, 1.0).is_err());
        assert!(SurfaceSpec::volcano(1.0, -2.0).is_err());
        assert!(SurfaceSpec::volcano(f64::NAN, 2.0).is_err());
        let a = SurfaceSpec::with_alpha(SurfaceKind::Volcano, 0.25).unwrap();
        assert_eq!((a.amplitude(), a.width(), a.alpha()), (0.5, 1.0, 0.25));
        assert_eq!(SurfaceSpec::with_alpha(SurfaceKind::Gaussian, 0.0).unwrap().kind(), SurfaceKind::Flat);
        // flat ignores whatever amplitude/width it is given
        assert_eq!(SurfaceSpec::new(SurfaceKind::Flat, 3.0, 0.1).unwrap(), SurfaceSpec::flat());
    }

    #[test]
    fn profile_heights() {
        let g = SurfaceSpec::gaussian(2.5, 1.25).unwrap();
        assert_eq!(g.profile_height(0.0), 2.5);
        let v = SurfaceSpec::volcano(2.5, 1.25).unwrap();
        assert_eq!(v.profile_height(0.0), 0.0);
        let unit = SurfaceSpec::gaussian(1.0, 1.0).unwrap();
        assert!(close(unit.profile_height(1.0), 0.367_879_441_171_442_32, 1e-16));
        assert_eq!(SurfaceSpec::flat().profile_height(0.7), 0.0);
    }

    #[test]
    fn deformation_values() {
        let v = SurfaceSpec::volcano(1.0, 2.0).unwrap();
        assert_eq!(v.metric_deformation(0.0).0, 4.0);
        let g = SurfaceSpec::gaussian(1.0, 1.0).unwrap();
        assert_eq!(g.metric_deformation(0.0), (0.0, 0.0));
        assert!(close(g.metric_deformation(1.0).0, 0.541_341_132_946_450_77, 1e-15));
        // f'(1) = (2 - 4) f(1) for the unit Gaussian
        assert!(close(g.metric_deformation(1.0).1, -2.0 * 0.541_341_132_946_450_77, 1e-15));
    }

    #[test]
    fn volcano_slope_is_regular_at_its_node() {
        let v = SurfaceSpec::volcano(1.3, 2.0).unwrap();
        let node = 2.0 / 2f64.sqrt();
        let (f, fp) = v.metric_deformation(node);
        assert!(f.abs() < 1e-15);
        assert!(fp.is_finite() && fp.abs() < 1e-14);
    }

    #[test]
    fn fermi_factor_values() {
        assert_eq!(SurfaceSpec::flat().fermi_factor(3.0), 1.0);
        let v = SurfaceSpec::volcano(1.0, 2.0).unwrap();
        assert!(close(v.fermi_factor(0.0), std::f64::consts::FRAC_1_SQRT_2, 1e-15));
        let g = SurfaceSpec::gaussian(1.0, 1.0).unwrap();
        assert!(close(g.fermi_factor(40.0), 1.0, 1e-15));
    }

    #[test]
    fn pseudo_gauge_limits() {
        assert_eq!(SurfaceSpec::flat().pseudo_gauge(0.4).unwrap(), 0.0);
        let g = SurfaceSpec::gaussian(1.0, 1.0).unwrap();
        assert_eq!(g.pseudo_gauge(0.0).unwrap(), 0.0);
        // 40-digit reference: 9.99999950000002399999879666...e-5
        let at = g.pseudo_gauge(1e-4).unwrap();
        assert!(close(at, 9.999_999_500_000_024e-5, 1e-18));
        let v = SurfaceSpec::volcano(1.0, 2.0).unwrap();
        assert!(close(v.pseudo_gauge(0.01).unwrap(), 14.643_335_118_221_68, 1e-11));
        assert!(matches!(v.pseudo_gauge(0.0), Err(Error::Domain { .. })));
        assert!(g.pseudo_gauge(-1.0).is_err());
    }

    #[test]
    fn curvature_values_and_origin_limits() {
        assert_eq!(SurfaceSpec::flat().curvature_scalar(1.0).unwrap(), 0.0);
        let g = SurfaceSpec::gaussian(1.0, 1.0).unwrap();
        assert!(close(g.curvature_scalar(1.0).unwrap(), 0.455_725_664_110_026_16, 1e-14));
        assert!(close(g.curvature_scalar(0.0).unwrap(), -8.0, 1e-15));
        let v = SurfaceSpec::volcano(1.0, 2.0).unwrap();
        let alpha = 0.25;
        let limit = 12.0 * alpha / ((1.0 + alpha * 4.0) * (1.0 + alpha * 4.0));
        assert!(close(v.curvature_scalar(0.0).unwrap(), limit, 1e-15));
        assert!(close(v.curvature_scalar(1e-7).unwrap(), limit, 1e-12));
    }

    #[test]
    fn gaussian_curvature_dips_then_peaks_then_decays() {
        let g = SurfaceSpec::gaussian(1.0, 1.0).unwrap();
        assert!(g.curvature_scalar(0.1).unwrap() < 0.0);
        assert!(g.curvature_scalar(1.0).unwrap() > 0.0);
        assert!(g.curvature_scalar(10.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn christoffel_values() {
        let c = SurfaceSpec::flat().christoffel_symbols(2.0).unwrap();
        assert_eq!((c.r_rr, c.r_thth, c.th_rth), (0.0, -2.0, 0.5));
        let g = SurfaceSpec::gaussian(1.0, 1.0).unwrap();
        let c = g.christoffel_symbols(1.0).unwrap();
        assert!(close(c.r_rr, -0.351_214_355_716_060_7, 1e-14));
        let far = g.christoffel_symbols(30.0).unwrap();
        assert_eq!((far.r_rr, far.r_thth), (0.0, -30.0));
        assert!(g.christoffel_symbols(0.0).is_err());
    }

    #[test]
    fn geometric_phase_limits_and_errors() {
        assert_eq!(SurfaceSpec::flat().geometric_phase(3.0, 0.0).unwrap(), 1.0);
        let v = SurfaceSpec::volcano(1.0, 2.0).unwrap();
        assert!(matches!(v.geometric_phase(1.0, 0.0), Err(Error::Domain { .. })));
        assert!(v.geometric_phase(1.0, 0.01).unwrap() < 1.0);
        let g = SurfaceSpec::gaussian(1.0, 1.0).unwrap();
        assert!(g.geometric_phase(0.5, 1.0).is_err());
        // converges: the tail beyond 10 b contributes nothing visible
        let a = g.geometric_phase(10.0, 0.0).unwrap();
        let b = g.geometric_phase(50.0, 0.0).unwrap();
        assert!(close(a, b, 1e-12));
    }

    #[test]
    fn phase_profile_matches_pointwise() {
        let v = SurfaceSpec::volcano(1.3, 2.0).unwrap();
        let radii: Vec<f64> = (1..=50).map(|i| 0.01 + 0.1 * i as f64).collect();
        let prof = v.geometric_phase_profile(&radii, 0.01).unwrap();
        for (r, mu) in radii.iter().zip(&prof) {
            assert!(close(*mu, v.geometric_phase(*r, 0.01).unwrap(), 1e-9));
        }
    }
}
