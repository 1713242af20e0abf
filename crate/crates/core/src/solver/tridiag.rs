//! Kernels on tridiagonal matrices: Sturm counts, bisection, a pivoted LU
//! solve and inverse iteration.

use crate::error::{Error, Result};

/// Tridiagonal matrix given by its diagonal and the off-diagonal products
/// `c[k] = sub[k] * sup[k]`. All that Sturm counting needs.
pub(crate) struct SturmData<'a> {
    pub diag: &'a [f64],
    pub products: Vec<f64>,
    pivmin: f64,
}

impl<'a> SturmData<'a> {
    pub fn new(diag: &'a [f64], products: Vec<f64>) -> Self {
        let largest = products.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
        Self {
            diag,
            products,
            pivmin: f64::MIN_POSITIVE * largest,
        }
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut negatives = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < self.pivmin {
            q = -self.pivmin;
        }
        if q < 0.0 {
            negatives += 1;
        }
        for k in 1..self.diag.len() {
            q = self.diag[k] - x - self.products[k - 1] / q;
            if q.abs() < self.pivmin {
                q = -self.pivmin;
            }
            if q < 0.0 {
                negatives += 1;
            }
        }
        negatives
    }

    /// Gershgorin interval of the symmetrized matrix.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let off: Vec<f64> = self.products.iter().map(|c| c.abs().sqrt()).collect();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..n {
            let mut radius = 0.0;
            if k > 0 {
                radius += off[k - 1];
            }
            if k + 1 < n {
                radius += off[k];
            }
            lo = lo.min(self.diag[k] - radius);
            hi = hi.max(self.diag[k] + radius);
        }
        let pad = f64::EPSILON * 4.0 * lo.abs().max(hi.abs()) + 2.0 * self.pivmin;
        (lo - pad, hi + pad)
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection inside
    /// `[lo, hi]`.
    pub fn bisect(&self, index: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            let tol = 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + self.pivmin;
            if hi - lo <= tol || mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// `A - shift I` factored as `P L U` with partial pivoting. `U` has two
/// super-diagonals.
pub(crate) struct PivotedLu {
    lower: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl PivotedLu {
    pub fn factor(sub: &[f64], diag: &[f64], sup: &[f64], shift: f64) -> Self {
        let n = diag.len();
        let mut lower = sub.to_vec();
        let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
        let mut du = sup.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let norm = diag
            .iter()
            .chain(sub)
            .chain(sup)
            .fold(shift.abs(), |m, v| m.max(v.abs()));

        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= lower[i].abs() {
                if d[i] != 0.0 {
                    let fact = lower[i] / d[i];
                    lower[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / lower[i];
                d[i] = lower[i];
                lower[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        // A shift at an eigenvalue makes the last pivot vanish; a tiny
        // replacement is exactly what inverse iteration wants.
        let tiny = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
        for v in &mut d {
            if v.abs() < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        Self { lower, d, du, du2, swapped }
    }

    /// Solves in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.lower[i] * b[i];
            } else {
                b[i + 1] -= self.lower[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn scale_to_unit(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

/// Deterministic, index-dependent start vector with no special structure.
fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    let mut state = 0x9E37_79B9_7F4A_7C15_u64 ^ (seed as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect();
    scale_to_unit(&mut v);
    v
}

fn residual(sub: &[f64], diag: &[f64], sup: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let n = diag.len();
    let mut worst = 0.0_f64;
    for k in 0..n {
        let mut r = (diag[k] - lambda) * v[k];
        if k > 0 {
            r += sub[k - 1] * v[k - 1];
        }
        if k + 1 < n {
            r += sup[k] * v[k + 1];
        }
        worst = worst.max(r.abs());
    }
    worst
}

/// Unit eigenvector of the tridiagonal `(sub, diag, sup)` for the
/// eigenvalue estimate `lambda`, kept orthogonal to `deflate` (used for
/// members of a tight cluster of a symmetric matrix).
pub(crate) fn inverse_iteration(
    sub: &[f64],
    diag: &[f64],
    sup: &[f64],
    lambda: f64,
    seed: usize,
    deflate: &[Vec<f64>],
) -> Result<Vec<f64>> {
    const MAX_ITERATIONS: usize = 8;
    let norm = diag
        .iter()
        .chain(sub)
        .chain(sup)
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let tol = 64.0 * f64::EPSILON * norm.max(lambda.abs()) * (diag.len() as f64).sqrt();

    let lu = PivotedLu::factor(sub, diag, sup, lambda);
    let mut v = start_vector(diag.len(), seed);
    let mut last = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        lu.solve(&mut v);
        for u in deflate {
            let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        if scale_to_unit(&mut v) == 0.0 || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NoConvergence {
                stage: "inverse iteration",
                iterations: MAX_ITERATIONS,
                residual: f64::NAN,
            });
        }
        last = residual(sub, diag, sup, lambda, &v);
        if last <= tol {
            return Ok(v);
        }
    }
    // The shift is only as good as the eigenvalue estimate; accept a
    // residual at the level of the matrix rounding error.
    if last <= 1e3 * tol {
        Ok(v)
    } else {
        Err(Error::NoConvergence {
            stage: "inverse iteration",
            iterations: MAX_ITERATIONS,
            residual: last,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_counts_second_difference_matrix() {
        // tridiag(-1, 2, -1) of size n: λ_k = 2 - 2 cos(kπ/(n+1))
        let n = 50;
        let diag = vec![2.0; n];
        let data = SturmData::new(&diag, vec![1.0; n - 1]);
        let (lo, hi) = data.gershgorin();
        for k in 0..n {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            let got = data.bisect(k, lo, hi);
            assert!((got - exact).abs() < 1e-14, "k = {k}: {got} vs {exact}");
        }
        assert_eq!(data.count_below(0.0), 0);
        assert_eq!(data.count_below(4.0), n);
    }

    #[test]
    fn pivoted_lu_solves_general_tridiagonal() {
        let sub = vec![3.0, -1.0, 0.5, 2.0];
        let diag = vec![0.0, 1.0, -2.0, 4.0, 1.5];
        let sup = vec![1.0, 2.0, -3.0, 0.25];
        let x = vec![1.0, -2.0, 0.5, 3.0, -1.0];
        let mut b: Vec<f64> = (0..5)
            .map(|k| {
                let mut v = diag[k] * x[k];
                if k > 0 {
                    v += sub[k - 1] * x[k - 1];
                }
                if k < 4 {
                    v += sup[k] * x[k + 1];
                }
                v
            })
            .collect();
        PivotedLu::factor(&sub, &diag, &sup, 0.0).solve(&mut b);
        for (got, want) in b.iter().zip(&x) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn inverse_iteration_recovers_sine_modes() {
        let n = 40;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        let lambda = 2.0 - 2.0 * (3.0 * std::f64::consts::PI / (n + 1) as f64).cos();
        let v = inverse_iteration(&off, &diag, &off, lambda, 7, &[]).unwrap();
        let sign = v[0].signum();
        let norm = (0..n)
            .map(|j| ((j + 1) as f64 * 3.0 * std::f64::consts::PI / (n + 1) as f64).sin().powi(2))
            .sum::<f64>()
            .sqrt();
        for j in 0..n {
            let exact = ((j + 1) as f64 * 3.0 * std::f64::consts::PI / (n + 1) as f64).sin() / norm;
            assert!((sign * v[j] - exact).abs() < 1e-12);
        }
    }
}
