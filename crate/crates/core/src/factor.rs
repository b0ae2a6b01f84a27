//! Berkson–Porta factorisation `G(z) = F(z)(ᾱz − 1)(z − α)` and the
//! zero-free obstruction for polynomial generators.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::boundary::{self, DEFAULT_BOUNDARY_SAMPLES};
use crate::error::{Error, Result};
use crate::linalg::polynomial_roots;
use crate::series::{TruncatedSeries, DEFAULT_CAP};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BerksonPorta {
    pub alpha: Complex64,
    pub f: TruncatedSeries,
    /// `min_θ Re F(e^{iθ})`.
    pub re_f_min: f64,
    pub arg_min: f64,
    /// `Re F ≥ −tol` on the circle.
    pub pass: bool,
}

/// Divides `G` by `(ᾱz − 1)(z − α)`: synthetic division by `z − α`, then the
/// geometric series of `1/(ᾱz − 1)` truncated at `cap` coefficients.
pub fn berkson_porta_factor(g: &TruncatedSeries, alpha: Complex64, cap: usize, tol: f64) -> Result<BerksonPorta> {
    let modulus = alpha.norm();
    if modulus > 1.0 + tol {
        return Err(Error::OutsideDisc { what: "Denjoy-Wolff point", modulus });
    }
    let coeffs = g.coeffs();
    let d = coeffs.len() - 1;
    if d == 0 {
        return Err(Error::NotAZero { point: alpha, residual: coeffs[0].norm() });
    }

    let mut quotient = alloc::vec![Complex64::new(0.0, 0.0); d];
    quotient[d - 1] = coeffs[d];
    for k in (1..d).rev() {
        quotient[k - 1] = coeffs[k] + alpha * quotient[k];
    }
    let remainder = coeffs[0] + alpha * quotient[0];
    let scale: f64 = coeffs.iter().enumerate().map(|(k, c)| c.norm() * modulus.powi(k as i32)).sum();
    if remainder.norm() > tol * (1.0 + scale) {
        return Err(Error::NotAZero { point: alpha, residual: remainder.norm() });
    }

    let ac = alpha.conj();
    let f = if alpha.norm() == 0.0 {
        TruncatedSeries::new(quotient.iter().map(|&q| -q).collect())?
    } else {
        let len = cap.max(d);
        let mut out: Vec<Complex64> = Vec::with_capacity(len);
        let mut prev = Complex64::new(0.0, 0.0);
        for n in 0..len {
            let q = quotient.get(n).copied().unwrap_or_default();
            prev = ac * prev - q;
            out.push(prev);
        }
        let peak = out.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let clipped = out.last().is_some_and(|c| c.norm() > 1e-15 * peak.max(1.0));
        TruncatedSeries::new(out)?.with_truncated(clipped)
    };

    // Pointwise F = Q(u)/(ᾱu − 1) on the circle, avoiding u = α when |α| = 1.
    let q_series = TruncatedSeries::new(quotient)?;
    let re_f = |theta: f64| {
        let u = Complex64::from_polar(1.0, theta);
        (q_series.eval(u) / (ac * u - 1.0)).re
    };
    let m = DEFAULT_BOUNDARY_SAMPLES;
    let extremum = boundary::sampled_min(re_f, m, boundary::half_step_offset(alpha.arg(), m));
    Ok(BerksonPorta {
        alpha,
        f,
        re_f_min: extremum.value,
        arg_min: extremum.theta,
        pass: extremum.value >= -tol,
    })
}

pub fn berkson_porta_factor_default(g: &TruncatedSeries, alpha: Complex64) -> Result<BerksonPorta> {
    berkson_porta_factor(g, alpha, DEFAULT_CAP, crate::conditions::DEFAULT_TOL)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RootObstruction {
    /// No roots in the closed disc: `A` cannot generate a semigroup.
    pub obstructed: bool,
    pub roots: Vec<Complex64>,
    pub min_modulus: Option<f64>,
}

/// Roots of the polynomial `G` and whether all of them lie outside `|z| ≤ 1 + tol`.
pub fn root_obstruction(g: &TruncatedSeries, tol: f64) -> Result<RootObstruction> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let roots = polynomial_roots(&g.poly_coeffs(1e-14))?;
    let min_modulus = roots.iter().map(|r| r.norm()).reduce(f64::min);
    let obstructed = min_modulus.is_none_or(|m| m > 1.0 + tol);
    Ok(RootObstruction { obstructed, roots, min_modulus })
}
