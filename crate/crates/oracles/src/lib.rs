//! Reference computations for the test suites.
//!
//! Nothing here shares code with `curved-dirac`: Bessel functions come from
//! power series and integral representations, integrals from composite
//! Gauss-Legendre rules, and curvature from finite differences. Inputs are
//! plain closures so the crate has no dependencies.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// by Newton iteration on `P_n`.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite 32-point Gauss-Legendre over `panels` equal panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre_rule(32);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut part = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            part += w * f(mid + half * x);
        }
        total += part * half;
    }
    total
}

fn oscillation_panels(n: i32, x: f64) -> usize {
    8 + ((x + f64::from(n.abs())) / 2.0).ceil() as usize
}

/// `J_n(x)`: ascending series for `x <= 2`, where the integral below would
/// lose relative accuracy to cancellation, and
/// `(1/π) ∫_0^π cos(n τ - x sin τ) dτ` beyond.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    if n < 0 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        return sign * bessel_j(-n, x);
    }
    let nf = f64::from(n);
    if x <= 2.0 {
        let mut term = 1.0;
        for k in 1..=n {
            term *= 0.5 * x / f64::from(k);
        }
        let mut sum = 0.0;
        for k in 1..60 {
            sum += term;
            term *= -0.25 * x * x / (f64::from(k) * (nf + f64::from(k)));
        }
        return sum;
    }
    integrate(|t| (nf * t - x * t.sin()).cos(), 0.0, PI, oscillation_panels(n, x)) / PI
}

/// `Y_n(x)` for `n >= 0`, `x > 0`, from
/// `(1/π) ∫_0^π sin(x sin τ - n τ) dτ
///  - (1/π) ∫_0^∞ (e^{n t} + (-1)^n e^{-n t}) e^{-x sinh t} dt`.
pub fn bessel_y(n: i32, x: f64) -> f64 {
    assert!(n >= 0 && x > 0.0, "bessel_y oracle needs n >= 0 and x > 0");
    let nf = f64::from(n);
    let first = integrate(|t| (x * t.sin() - nf * t).sin(), 0.0, PI, oscillation_panels(n, x)) / PI;
    let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
    let tail = |t: f64| (nf * t - x * t.sinh()).exp() + parity * (-nf * t - x * t.sinh()).exp();
    // The integrand peaks where x cosh t = n and then decays double
    // exponentially; stop once the exponent is below -60.
    let mut upper = 1.0;
    while nf * upper - x * upper.sinh() > -60.0 {
        upper += 0.5;
    }
    let second = integrate(tail, 0.0, upper, (upper * 16.0).ceil() as usize) / PI;
    first - second
}

/// `J_n'(x) = J_{n-1}(x) - (n / x) J_n(x)`.
pub fn bessel_j_prime(n: i32, x: f64) -> f64 {
    bessel_j(n - 1, x) - f64::from(n) / x * bessel_j(n, x)
}

/// `Y_n'(x)`. For `n = 0`, `Y_0' = -Y_1`.
pub fn bessel_y_prime(n: i32, x: f64) -> f64 {
    if n == 0 {
        -bessel_y(1, x)
    } else {
        bessel_y(n - 1, x) - f64::from(n) / x * bessel_y(n, x)
    }
}

fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut g_lo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ascending roots of `g` on `(start, ∞)` found by a sign scan of step
/// `step` followed by bisection.
pub fn scan_roots(g: impl Fn(f64) -> f64, start: f64, step: f64, count: usize) -> Vec<f64> {
    let mut roots = Vec::with_capacity(count);
    let mut lo = start;
    let mut g_lo = g(lo);
    while roots.len() < count {
        let hi = lo + step;
        let g_hi = g(hi);
        if g_lo == 0.0 || (g_lo < 0.0) != (g_hi < 0.0) {
            roots.push(bisect(&g, lo, hi));
        }
        lo = hi;
        g_lo = g_hi;
    }
    roots
}

/// Wavenumbers `κ` of `-χ'' + ((ν^2 - 1/4)/r^2) χ = κ^2 χ` on `[a, L]` with
/// `χ(a) = 0` and `χ'(L) = 0`.
///
/// `χ = sqrt(r) [Y_ν(κa) J_ν(κr) - J_ν(κa) Y_ν(κr)]`, and the roots of
/// `χ'(L)` are the eigenvalues.
pub fn flat_boundary_roots(nu: u32, a: f64, l: f64, count: usize) -> Vec<f64> {
    let n = nu as i32;
    let det = |k: f64| {
        let (ja, ya) = (bessel_j(n, k * a), bessel_y(n, k * a));
        let (jl, yl) = (bessel_j(n, k * l), bessel_y(n, k * l));
        let (djl, dyl) = (bessel_j_prime(n, k * l), bessel_y_prime(n, k * l));
        let z = ya * jl - ja * yl;
        let dz = ya * djl - ja * dyl;
        // scaled by sqrt(L), sign irrelevant
        (z / (2.0 * l) + k * dz) / ya.abs().max(1.0)
    };
    scan_roots(det, 1e-3, 0.02, count)
}

/// Roots of the same problem when the Dirichlet end sits at the origin
/// (only `J` survives).
pub fn flat_origin_roots(nu: u32, l: f64, count: usize) -> Vec<f64> {
    let n = nu as i32;
    let g = |k: f64| bessel_j(n, k * l) / (2.0 * l) + k * bessel_j_prime(n, k * l);
    scan_roots(g, 1e-3, 0.02, count)
}

/// Christoffel symbols `(Γ^r_rr, Γ^r_θθ, Γ^θ_rθ)` of the metric
/// `diag(g_rr(r), r^2)` (overall sign irrelevant) with `g_rr'` by a
/// centered difference of step `step`.
pub fn christoffels_from_metric(g_rr: impl Fn(f64) -> f64, r: f64, step: f64) -> [f64; 3] {
    let g = g_rr(r);
    let dg = (g_rr(r + step) - g_rr(r - step)) / (2.0 * step);
    [dg / (2.0 * g), -r / g, 1.0 / r]
}

/// Ricci scalar of `-(g_rr dr^2 + r^2 dθ^2)` from its Christoffel symbols
/// (ordered as in [`christoffels_from_metric`]), with the radial
/// derivatives by the 5-point centered stencil of step `step`.
pub fn ricci_scalar_from_christoffels(
    gamma: impl Fn(f64) -> [f64; 3],
    g_rr: f64,
    r: f64,
    step: f64,
) -> f64 {
    let [r_rr, r_thth, th_rth] = gamma(r);
    let samples = [gamma(r - 2.0 * step), gamma(r - step), gamma(r + step), gamma(r + 2.0 * step)];
    let derivative = |k: usize| {
        (samples[0][k] - 8.0 * samples[1][k] + 8.0 * samples[2][k] - samples[3][k]) / (12.0 * step)
    };
    let d_r_thth = derivative(1);
    let d_th_rth = derivative(2);
    // R_rr = R^θ_rθr, R_θθ = R^r_θrθ
    let ricci_rr = -d_th_rth + th_rth * r_rr - th_rth * th_rth;
    let ricci_thth = d_r_thth + r_rr * r_thth - r_thth * th_rth;
    // inverse metric of the negative-definite form
    -(ricci_rr / g_rr + ricci_thth / (r * r))
}

/// `(z'(r), z''(r))` of `z = A e^{-r^2/b^2}`.
pub fn gaussian_slopes(amplitude: f64, width: f64, r: f64) -> (f64, f64) {
    let b2 = width * width;
    let e = (-r * r / b2).exp();
    let d1 = -2.0 * amplitude * r / b2 * e;
    let d2 = -2.0 * amplitude / b2 * e + 4.0 * amplitude * r * r / (b2 * b2) * e;
    (d1, d2)
}

/// `(z'(r), z''(r))` of `z = A r e^{-r^2/b^2}`.
pub fn volcano_slopes(amplitude: f64, width: f64, r: f64) -> (f64, f64) {
    let b2 = width * width;
    let e = (-r * r / b2).exp();
    let d1 = amplitude * e - 2.0 * amplitude * r * r / b2 * e;
    let d2 = -2.0 * amplitude * r / b2 * e - 4.0 * amplitude * r / b2 * e
        + 4.0 * amplitude * r * r * r / (b2 * b2) * e;
    (d1, d2)
}

/// Gaussian curvature of the surface of revolution with slopes `(z', z'')`
/// at radius `r`: `z' z'' / (r (1 + z'^2)^2)`.
pub fn embedding_curvature((d1, d2): (f64, f64), r: f64) -> f64 {
    d1 * d2 / (r * (1.0 + d1 * d1).powi(2))
}

/// One row of the extended-precision Bessel table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselReference {
    pub n: i32,
    pub x: f64,
    pub value: f64,
}

const BESSEL_TABLE: &str = include_str!("../data/bessel_j_reference.csv");

/// `J_n(x)` computed with 50-digit arithmetic, `n = 0..=10` and
/// `x = k/8` for `k = 1..=400` plus a few irregular points.
pub fn bessel_reference_table() -> Vec<BesselReference> {
    BESSEL_TABLE
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let mut parts = line.split(',');
            let mut next = || parts.next().expect("three columns").trim();
            let n = next().parse().expect("integer order");
            let x = next().parse().expect("argument");
            let value = next().parse().expect("value");
            BesselReference { n, x, value }
        })
        .collect()
}
