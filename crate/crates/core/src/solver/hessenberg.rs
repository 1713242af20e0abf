//! Francis double-shift QR on an upper Hessenberg matrix, eigenvalues only.
//!
//! Used when the tridiagonal operator cannot be symmetrized. The matrix is
//! already Hessenberg, so no reduction step is needed, but the iteration
//! fills the upper triangle and storage is dense.

use crate::error::{Error, Result};

/// Sub-diagonal entries below `DEFLATION_TOL` times the neighbouring
/// diagonal magnitude are treated as zero.
pub const DEFLATION_TOL: f64 = 1e-12;

/// Largest matrix the dense fallback accepts.
pub const MAX_DENSE_DIM: usize = 1000;

/// Iterations allowed per deflated eigenvalue before giving up.
const ITERATIONS_PER_EIGENVALUE: usize = 30;

struct Dense {
    n: usize,
    a: Vec<f64>,
}

impl Dense {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.a[i * self.n + j]
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues `(re, im)` of the tridiagonal matrix `(sub, diag, sup)`, in no
/// particular order.
pub(crate) fn tridiagonal_eigenvalues(sub: &[f64], diag: &[f64], sup: &[f64]) -> Result<Vec<(f64, f64)>> {
    let n = diag.len();
    if n > MAX_DENSE_DIM {
        return Err(Error::InvalidArgument(format!(
            "operator of dimension {n} cannot be symmetrized and exceeds the dense fallback limit {MAX_DENSE_DIM}; refine the grid"
        )));
    }
    let mut m = Dense { n, a: vec![0.0; n * n] };
    for k in 0..n {
        *m.at_mut(k, k) = diag[k];
        if k + 1 < n {
            *m.at_mut(k + 1, k) = sub[k];
            *m.at_mut(k, k + 1) = sup[k];
        }
    }
    hqr(&mut m)
}

fn hqr(m: &mut Dense) -> Result<Vec<(f64, f64)>> {
    let n = m.n;
    let mut out = vec![(0.0, 0.0); n];
    if n == 0 {
        return Ok(out);
    }
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += m.at(i, j).abs();
        }
    }

    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let mut its = 0usize;
    while nn >= 0 {
        let nu = nn as usize;
        // Look for a single small sub-diagonal element.
        let mut l = nu;
        while l > 0 {
            let mut s = m.at(l - 1, l - 1).abs() + m.at(l, l).abs();
            if s == 0.0 {
                s = anorm;
            }
            if m.at(l, l - 1).abs() <= DEFLATION_TOL * s {
                *m.at_mut(l, l - 1) = 0.0;
                break;
            }
            l -= 1;
        }

        let mut x = m.at(nu, nu);
        if l == nu {
            out[nu] = (x + t, 0.0);
            nn -= 1;
            its = 0;
            continue;
        }
        let mut y = m.at(nu - 1, nu - 1);
        let mut w = m.at(nu, nu - 1) * m.at(nu - 1, nu);
        if l == nu - 1 {
            let p = 0.5 * (y - x);
            let q = p * p + w;
            let z = q.abs().sqrt();
            x += t;
            if q >= 0.0 {
                let z = p + sign(z, p);
                out[nu - 1] = (x + z, 0.0);
                out[nu] = (if z != 0.0 { x - w / z } else { x + z }, 0.0);
            } else {
                out[nu] = (x + p, -z);
                out[nu - 1] = (x + p, z);
            }
            nn -= 2;
            its = 0;
            continue;
        }

        if its == ITERATIONS_PER_EIGENVALUE {
            return Err(Error::NoConvergence {
                stage: "Hessenberg QR",
                iterations: its,
                residual: m.at(nu, nu - 1).abs(),
            });
        }
        if its == 10 || its == 20 {
            // Exceptional shift.
            t += x;
            for i in 0..=nu {
                *m.at_mut(i, i) -= x;
            }
            let s = m.at(nu, nu - 1).abs() + m.at(nu - 1, nu - 2).abs();
            x = 0.75 * s;
            y = x;
            w = -0.4375 * s * s;
        }
        its += 1;

        // Look for two consecutive small sub-diagonal elements.
        let mut mm = nu - 2;
        let (mut p, mut q, mut r);
        loop {
            let z = m.at(mm, mm);
            let rr = x - z;
            let ss = y - z;
            p = (rr * ss - w) / m.at(mm + 1, mm) + m.at(mm, mm + 1);
            q = m.at(mm + 1, mm + 1) - z - rr - ss;
            r = m.at(mm + 2, mm + 1);
            let s = p.abs() + q.abs() + r.abs();
            p /= s;
            q /= s;
            r /= s;
            if mm == l {
                break;
            }
            let u = m.at(mm, mm - 1).abs() * (q.abs() + r.abs());
            let v = p.abs() * (m.at(mm - 1, mm - 1).abs() + z.abs() + m.at(mm + 1, mm + 1).abs());
            if u <= f64::EPSILON * v {
                break;
            }
            mm -= 1;
        }
        for i in mm..nu - 1 {
            *m.at_mut(i + 2, i) = 0.0;
            if i != mm {
                *m.at_mut(i + 2, i - 1) = 0.0;
            }
        }

        // Double QR step on rows l..=nn and columns mm..=nn.
        let mut k = mm;
        while k < nu {
            if k != mm {
                p = m.at(k, k - 1);
                q = m.at(k + 1, k - 1);
                r = if k + 1 != nu { m.at(k + 2, k - 1) } else { 0.0 };
                x = p.abs() + q.abs() + r.abs();
                if x != 0.0 {
                    p /= x;
                    q /= x;
                    r /= x;
                }
            }
            let s = sign((p * p + q * q + r * r).sqrt(), p);
            if s != 0.0 {
                if k == mm {
                    if l != mm {
                        *m.at_mut(k, k - 1) = -m.at(k, k - 1);
                    }
                } else {
                    *m.at_mut(k, k - 1) = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=nu {
                    let mut pp = m.at(k, j) + q * m.at(k + 1, j);
                    if k + 1 != nu {
                        pp += r * m.at(k + 2, j);
                        *m.at_mut(k + 2, j) -= pp * z;
                    }
                    *m.at_mut(k + 1, j) -= pp * y;
                    *m.at_mut(k, j) -= pp * x;
                }
                let mmin = nu.min(k + 3);
                for i in l..=mmin {
                    let mut pp = x * m.at(i, k) + y * m.at(i, k + 1);
                    if k + 1 != nu {
                        pp += z * m.at(i, k + 2);
                        *m.at_mut(i, k + 2) -= pp * r;
                    }
                    *m.at_mut(i, k + 1) -= pp * q;
                    *m.at_mut(i, k) -= pp;
                }
            }
            k += 1;
        }
    }
    Ok(out)
}
