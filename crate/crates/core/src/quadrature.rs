//! Adaptive Gauss-Kronrod and composite Simpson quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae on [0, 1] (symmetric), with the embedded
// 7-point Gauss weights at the odd positions.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.000_000_000_000_000_0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

/// Kronrod estimate and |Kronrod - Gauss| on one interval.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]` by bisecting the interval with the largest
/// error estimate until the summed estimate drops below `abs_tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate_adaptive(f, b, a, abs_tol).map(|v| -v);
    }
    let (value, error) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total_value = value;
    let mut total_error = error;

    while total_error > abs_tol {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence {
                stage: "adaptive quadrature",
                iterations: heap.len(),
                residual: total_error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        total_value += lv + rv - worst.value;
        total_error += le + re - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Segment { a: mid, b: worst.b, value: rv, error: re });
        if !total_value.is_finite() {
            return Err(Error::NoConvergence {
                stage: "adaptive quadrature",
                iterations: heap.len(),
                residual: f64::INFINITY,
            });
        }
    }
    // Re-sum to shed the drift of the running total.
    Ok(heap.iter().map(|s| s.value).sum())
}

/// Composite Simpson rule for samples on a uniform grid with spacing `h`.
///
/// An odd number of intervals closes with Simpson's 3/8 rule on the last
/// three, so the rule stays fourth order for every sample count >= 4.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        3 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let intervals = n - 1;
            let (even_end, tail) = if intervals.is_multiple_of(2) {
                (n - 1, 0.0)
            } else {
                let k = n - 4;
                let t = 3.0 * h / 8.0
                    * (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]);
                (k, t)
            };
            if even_end == 0 {
                return tail;
            }
            let mut odd = 0.0;
            let mut even = 0.0;
            for i in 1..even_end {
                if i % 2 == 1 {
                    odd += values[i];
                } else {
                    even += values[i];
                }
            }
            h / 3.0 * (values[0] + 4.0 * odd + 2.0 * even + values[even_end]) + tail
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_kronrod_polynomials_and_exponentials() {
        let v = integrate_adaptive(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-12).unwrap();
        assert!((v - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-12);
        let v = integrate_adaptive(|x: f64| (-x * x).exp(), 0.0, 10.0, 1e-12).unwrap();
        assert!((v - 0.886_226_925_452_758).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_sharp_features() {
        let v = integrate_adaptive(|x: f64| x.sqrt(), 0.0, 1.0, 1e-11).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10);
        let v = integrate_adaptive(|x: f64| 1.0 / x, 1e-3, 1.0, 1e-10).unwrap();
        assert!((v - 1000f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        assert_eq!(integrate_adaptive(|x| x, 1.0, 1.0, 1e-10).unwrap(), 0.0);
        let v = integrate_adaptive(|x| x, 1.0, 0.0, 1e-12).unwrap();
        assert!((v + 0.5).abs() < 1e-14);
    }

    #[test]
    fn simpson_is_exact_for_cubics_at_any_count() {
        for n in 4..12 {
            let h = 2.0 / (n - 1) as f64;
            let vals: Vec<f64> = (0..n).map(|i| {
                let x = i as f64 * h;
                x * x * x - x + 1.0
            }).collect();
            assert!((simpson(&vals, h) - 4.0).abs() < 1e-12, "n = {n}");
        }
    }
}
