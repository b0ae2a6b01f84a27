//! Extrema of real functions on the unit circle `θ ↦ q(θ)`.
//!
//! Two independent routes: dense sampling with golden-section refinement,
//! and (for `Re P(e^{iθ})` with `P` a polynomial) critical points obtained
//! from the roots of the derivative as an algebraic polynomial in `u = e^{iθ}`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::Float;

use crate::error::Result;
use crate::linalg::polynomial_roots;

/// Location and value of an extremum on the circle.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CircleExtremum {
    pub value: f64,
    /// Angle in `[0, 2π)`.
    pub theta: f64,
}

pub const DEFAULT_BOUNDARY_SAMPLES: usize = 1 << 14;
const REFINED_PEAKS: usize = 4;
const GOLDEN_ITERS: usize = 80;

pub(crate) fn wrap_angle(theta: f64) -> f64 {
    let t = theta - TAU * (theta / TAU).floor();
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> CircleExtremum {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..GOLDEN_ITERS {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        if b - a < 1e-15 {
            break;
        }
    }
    if f1 >= f2 {
        CircleExtremum { value: f1, theta: x1 }
    } else {
        CircleExtremum { value: f2, theta: x2 }
    }
}

/// Maximum of `f` over `samples` equispaced angles `offset + 2πj/samples`,
/// then refined by golden-section search around the best few local peaks.
/// Ties between samples resolve to the smallest index.
pub fn sampled_max<F: Fn(f64) -> f64>(f: F, samples: usize, offset: f64) -> CircleExtremum {
    let m = samples.max(3);
    let step = TAU / m as f64;
    let values: Vec<f64> = (0..m).map(|j| f(offset + step * j as f64)).collect();
    let mut peaks: Vec<usize> = (0..m)
        .filter(|&j| {
            let prev = values[(j + m - 1) % m];
            let next = values[(j + 1) % m];
            values[j] >= prev && values[j] >= next
        })
        .collect();
    // stable sort keeps the smaller index first among equal values
    peaks.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(core::cmp::Ordering::Equal));
    let first = peaks.first().copied().unwrap_or(0);
    let mut best = CircleExtremum { value: values[first], theta: offset + step * first as f64 };
    for &j in peaks.iter().take(REFINED_PEAKS) {
        let centre = offset + step * j as f64;
        let refined = golden_max(&f, centre - step, centre + step);
        if refined.value > best.value {
            best = refined;
        }
    }
    best.theta = wrap_angle(best.theta);
    best
}

pub fn sampled_min<F: Fn(f64) -> f64>(f: F, samples: usize, offset: f64) -> CircleExtremum {
    let max = sampled_max(|t| -f(t), samples, offset);
    CircleExtremum { value: -max.value, theta: max.theta }
}

/// `Re P(e^{iθ})` for polynomial coefficients `p` (low to high).
pub fn re_on_circle(p: &[Complex64], theta: f64) -> f64 {
    let u = Complex64::from_polar(1.0, theta);
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c).re
}

/// Exact maximum of `θ ↦ Re P(e^{iθ})` through the critical points: the
/// roots of `u^m · d/dθ Re P(e^{iθ})`, a degree-`2m` polynomial in `u`.
pub fn certified_max_re(p: &[Complex64]) -> Result<CircleExtremum> {
    let m = p.iter().rposition(|c| c.norm() > 0.0).unwrap_or(0);
    if m == 0 {
        let value = p.first().map_or(0.0, |c| c.re);
        return Ok(CircleExtremum { value, theta: 0.0 });
    }
    // Re P(e^{iθ}) = Σ_{k=-m}^{m} h_k u^k with h_0 = Re p_0, h_k = p_k/2, h_{-k} = conj(p_k)/2.
    let h = |k: isize| -> Complex64 {
        match k {
            0 => Complex64::new(p[0].re, 0.0),
            k if k > 0 => p[k as usize] * 0.5,
            k => p[(-k) as usize].conj() * 0.5,
        }
    };
    let mi = m as isize;
    let derivative: Vec<Complex64> = (0..=2 * mi)
        .map(|j| {
            let k = j - mi;
            Complex64::new(0.0, k as f64) * h(k)
        })
        .collect();
    let roots = polynomial_roots(&derivative)?;

    let q = |theta: f64| re_on_circle(p, theta);
    let dp: Vec<Complex64> = p.iter().enumerate().skip(1).map(|(n, &c)| c * n as f64).collect();
    let ddp: Vec<Complex64> = dp.iter().enumerate().skip(1).map(|(n, &c)| c * n as f64).collect();
    let eval = |coeffs: &[Complex64], u: Complex64| {
        coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
    };

    let mut best = CircleExtremum { value: q(0.0), theta: 0.0 };
    for root in roots {
        let mut theta = root.arg();
        let mut value = q(theta);
        for _ in 0..4 {
            let u = Complex64::from_polar(1.0, theta);
            let d1 = (Complex64::i() * u * eval(&dp, u)).re;
            let d2 = (-u * eval(&dp, u) - u * u * eval(&ddp, u)).re;
            if d2 >= 0.0 {
                break;
            }
            let next = theta - d1 / d2;
            let next_value = q(next);
            if !(next_value >= value) {
                break;
            }
            theta = next;
            value = next_value;
        }
        if value > best.value {
            best = CircleExtremum { value, theta };
        }
    }
    best.theta = wrap_angle(best.theta);
    Ok(best)
}

/// Offset that places `angle` halfway between two samples of an `m`-point grid.
pub(crate) fn half_step_offset(angle: f64, m: usize) -> f64 {
    angle + PI / m as f64
}
