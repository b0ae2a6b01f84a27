//! Carathéodory–Toeplitz positivity test with Sylvester minors.
//!
//! For `f = Σ μ_n z^n`, `N_k = M_k + M_kᴴ` where `M_k` is the upper-triangular
//! Toeplitz matrix with `(i, j)` entry `μ_{j−i}`. `N_k` is the Toeplitz matrix
//! of the symbol `2 Re f(e^{iθ})`, so its smallest eigenvalue decreases to
//! `2 min_θ Re f(e^{iθ})` as `k` grows and never drops below it.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, leading_minors, ComplexMatrix};
use crate::series::TruncatedSeries;

/// Relative slack on the smallest eigenvalue: PSD means `λ_min ≥ −tol·(1 + ‖N_k‖_∞)`.
pub const PSD_REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum Definiteness {
    Pd,
    Psd,
    Indefinite,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ToeplitzTestResult {
    pub order: usize,
    pub matrix: ComplexMatrix,
    pub min_eigenvalue: f64,
    pub leading_minors: Vec<f64>,
    pub verdict: Definiteness,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ToeplitzReport {
    pub results: Vec<ToeplitzTestResult>,
    /// Every `N_k`, `k ≤ k_max`, is nonnegative definite.
    pub right_half_plane: bool,
}

/// `N_k` for the coefficients of `f`.
pub fn toeplitz_matrix(f: &TruncatedSeries, k: usize) -> ComplexMatrix {
    let mut n = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        n.set(i, i, Complex64::new(2.0 * f.coeff(0).re, 0.0));
        for j in i + 1..k {
            let mu = f.coeff(j - i);
            n.set(i, j, mu);
            n.set(j, i, mu.conj());
        }
    }
    n
}

fn classify(matrix: &ComplexMatrix, min_eigenvalue: f64, minors: &[f64], rel_tol: f64) -> Definiteness {
    let slack = rel_tol * (1.0 + matrix.norm_inf());
    if min_eigenvalue > slack && minors.iter().all(|&m| m > 0.0) {
        Definiteness::Pd
    } else if min_eigenvalue >= -slack {
        Definiteness::Psd
    } else {
        Definiteness::Indefinite
    }
}

pub fn caratheodory_toeplitz(f: &TruncatedSeries, k_max: usize) -> Result<ToeplitzReport> {
    caratheodory_toeplitz_with_tol(f, k_max, PSD_REL_TOL)
}

pub fn caratheodory_toeplitz_with_tol(f: &TruncatedSeries, k_max: usize, rel_tol: f64) -> Result<ToeplitzReport> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1"));
    }
    let full = toeplitz_matrix(f, k_max);
    let all_minors = leading_minors(&full);
    let mut results = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let matrix = full.leading(k);
        let min_eigenvalue = hermitian_eigenvalues(&matrix)?[0];
        let minors = all_minors[..k].to_vec();
        let verdict = classify(&matrix, min_eigenvalue, &minors, rel_tol);
        results.push(ToeplitzTestResult { order: k, matrix, min_eigenvalue, leading_minors: minors, verdict });
    }
    let right_half_plane = results.iter().all(|r| r.verdict != Definiteness::Indefinite);
    Ok(ToeplitzReport { results, right_half_plane })
}

/// Sylvester test on the 2×2 matrix `[[−Re a₁, −(ā₀ + a₂)], [−(a₀ + ā₂), −Re a₁]]`
/// for a generator of degree at most 2.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadraticReduction {
    pub matrix: ComplexMatrix,
    pub leading_minors: Vec<f64>,
    /// Both minors positive, i.e. `Re a₁ + |ā₀ + a₂| < 0`.
    pub positive_definite: bool,
}

pub fn quadratic_generator_reduction(g: &TruncatedSeries) -> Result<QuadraticReduction> {
    if g.degree().is_some_and(|d| d > 2) {
        return Err(Error::InvalidArgument("quadratic reduction needs a generator of degree at most 2"));
    }
    let diag = Complex64::new(-g.coeff(1).re, 0.0);
    let off = -(g.coeff(0).conj() + g.coeff(2));
    let mut matrix = ComplexMatrix::zeros(2, 2);
    matrix.set(0, 0, diag);
    matrix.set(1, 1, diag);
    matrix.set(0, 1, off);
    matrix.set(1, 0, off.conj());
    // closed-form minors keep the sign test free of elimination round-off
    let minors = alloc::vec![diag.re, diag.re * diag.re - off.norm_sqr()];
    let positive_definite = minors.iter().all(|&m| m > 0.0);
    Ok(QuadraticReduction { matrix, leading_minors: minors, positive_definite })
}
