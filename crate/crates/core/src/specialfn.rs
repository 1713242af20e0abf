//! Bessel functions of the first kind at integer order.
//!
//! Three regimes, chosen by argument:
//!
//! * `x <= 1`: ascending power series. Terms fall by at least 4x per step
//!   and never cancel badly.
//! * `1 < x < max(100, 2 n^2)`: Miller's downward recurrence started well
//!   above `max(n, x)` and normalized with `J_0 + 2 Σ J_2k = 1`.
//! * beyond that: Hankel's asymptotic expansion. At the switch the first
//!   correction term `(4n^2 - 1) / (8x)` is at most 1/4 and the series is
//!   truncated at its smallest term.
//!
//! Negative orders use `J_{-n}(x) = (-1)^n J_n(x)`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BesselOrder(i32);

impl BesselOrder {
    pub const MAX_ABS: i32 = 64;

    pub fn new(n: i64) -> Result<Self> {
        if n.unsigned_abs() > Self::MAX_ABS as u64 {
            return Err(Error::UnsupportedOrder(n));
        }
        Ok(Self(n as i32))
    }

    pub fn get(self) -> i32 {
        self.0
    }
}

const SERIES_MAX_X: f64 = 1.0;

fn hankel_min_x(n: u32) -> f64 {
    (2.0 * f64::from(n * n)).max(100.0)
}

pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    if !(x >= 0.0) || x.is_infinite() {
        return Err(Error::Domain {
            quantity: "Bessel J",
            r: x,
            reason: "argument must be finite and non-negative",
        });
    }
    let n = order.get().unsigned_abs();
    let value = bessel_j_nonneg(n, x);
    Ok(if order.get() < 0 && n % 2 == 1 { -value } else { value })
}

/// Convenience wrapper taking a raw integer order.
pub fn bessel_j_int(n: i64, x: f64) -> Result<f64> {
    bessel_j(BesselOrder::new(n)?, x)
}

fn bessel_j_nonneg(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_MAX_X {
        series(n, x)
    } else if x < hankel_min_x(n) {
        miller(n, x)
    } else {
        hankel(n, x)
    }
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= half / f64::from(k);
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    for k in 1..200u32 {
        term *= q / (f64::from(k) * f64::from(n + k));
        sum += term;
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(n: u32, x: f64) -> f64 {
    let top = f64::from(n).max(x);
    let mut start = (top + 40.0 + 10.0 * top.cbrt()).ceil() as u32;
    start += start % 2;

    const RESCALE_AT: f64 = 1e250;
    let two_over_x = 2.0 / x;
    let mut above = 0.0_f64; // J_{k+1}
    let mut current = 1e-300_f64; // J_k
    let mut norm = 0.0_f64;
    let mut wanted = if n == start { current } else { 0.0 };

    for k in (1..=start).rev() {
        let below = f64::from(k) * two_over_x * current - above;
        above = current;
        current = below; // now J_{k-1}
        let idx = k - 1;
        if idx == n {
            wanted = current;
        }
        if idx > 0 && idx % 2 == 0 {
            norm += 2.0 * current;
        }
        if current.abs() > RESCALE_AT {
            current /= RESCALE_AT;
            above /= RESCALE_AT;
            norm /= RESCALE_AT;
            wanted /= RESCALE_AT;
        }
    }
    norm += current;
    wanted / norm
}

fn hankel(n: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(n) * f64::from(n);
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut prev_abs = f64::INFINITY;
    for k in 1..200u32 {
        let odd = f64::from(2 * k - 1);
        term *= (mu - odd * odd) / (f64::from(k) * eight_x);
        let abs = term.abs();
        if abs >= prev_abs || abs < 1e-17 {
            break;
        }
        prev_abs = abs;
        // a_k enters P (even k) or Q (odd k) with sign (-1)^{floor(k/2)}
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
    }
    let phase = x - (0.5 * f64::from(n) + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * phase.cos() - q * phase.sin())
}
