//! Thin layer over nalgebra for the dense eigen/singular-value work, plus
//! hand-written determinants so Sylvester minors stay independent of the
//! eigensolver.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

/// Dense row-major complex matrix used for exported sections and Toeplitz blocks.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Leading `k × k` block.
    pub fn leading(&self, k: usize) -> Self {
        let mut out = Self::zeros(k, k);
        for i in 0..k {
            out.data[i * k..(i + 1) * k].copy_from_slice(&self.row(i)[..k]);
        }
        out
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|c| c.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// Roots of `Σ c_k z^k` (coefficients low to high, trailing zeros allowed)
/// from the eigenvalues of the companion matrix, Newton-polished.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let Some(deg) = coeffs.iter().rposition(|c| c.norm() > 0.0) else {
        return Err(Error::ZeroPolynomial);
    };
    let coeffs = &coeffs[..=deg];
    let zeros_at_origin = coeffs.iter().position(|c| c.norm() > 0.0).unwrap_or(0);
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    let reduced = &coeffs[zeros_at_origin..];
    let d = reduced.len() - 1;
    if d == 0 {
        return Ok(roots);
    }
    let lead = reduced[d];
    let mut companion = DMatrix::<Complex64>::zeros(d, d);
    for j in 0..d {
        companion[(0, j)] = -reduced[d - 1 - j] / lead;
    }
    for i in 1..d {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    let schur = Schur::try_new(companion, EIG_EPS, EIG_MAX_ITER).ok_or(Error::EigenFailure)?;
    let eig = schur.eigenvalues().ok_or(Error::EigenFailure)?;
    for mut z in eig.iter().copied() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(reduced, z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !(step.re.is_finite() && step.im.is_finite()) {
                break;
            }
            let candidate = z - step;
            if eval(reduced, candidate).norm() <= p.norm() {
                z = candidate;
            } else {
                break;
            }
        }
        roots.push(z);
    }
    Ok(roots)
}

fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.rows == 0 {
        return Ok(Vec::new());
    }
    let eig = SymmetricEigen::try_new(m.to_nalgebra(), EIG_EPS, EIG_MAX_ITER).ok_or(Error::EigenFailure)?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    Ok(values)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows;
    let mut a = m.data.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].norm().partial_cmp(&a[j * n + col].norm()).unwrap())
            .unwrap_or(col);
        if a[pivot * n + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for i in col + 1..n {
            let factor = a[i * n + col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[i * n + k] -= factor * v;
            }
        }
    }
    det
}

/// Real parts of the leading principal minors `det A_p`, `p = 1..=n`.
/// For Hermitian input the determinants are real.
pub fn leading_minors(m: &ComplexMatrix) -> Vec<f64> {
    (1..=m.rows).map(|p| determinant(&m.leading(p)).re).collect()
}

/// Largest singular value (spectral norm) of a dense matrix.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Ok(0.0);
    }
    let svd = SVD::try_new(m.to_nalgebra(), false, false, EIG_EPS, EIG_MAX_ITER).ok_or(Error::EigenFailure)?;
    Ok(svd.singular_values.iter().copied().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_of_quadratic() {
        let mut roots = polynomial_roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((roots[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((roots[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn roots_with_zero_factor_and_constants() {
        let roots = polynomial_roots(&[c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(roots, vec![c(0.0, 0.0)]);
        assert!(polynomial_roots(&[c(3.0, 1.0)]).unwrap().is_empty());
        assert_eq!(polynomial_roots(&[c(0.0, 0.0)]), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn determinant_and_minors() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m.set(0, 0, c(2.0, 0.0));
        m.set(0, 1, c(0.0, 1.0));
        m.set(1, 0, c(0.0, -1.0));
        m.set(1, 1, c(3.0, 0.0));
        assert_eq!(leading_minors(&m), vec![2.0, 5.0]);
        let eig = hermitian_eigenvalues(&m).unwrap();
        assert!((eig[0] * eig[1] - 5.0).abs() < 1e-12);
        assert!((eig[0] + eig[1] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let mut m = ComplexMatrix::zeros(3, 3);
        m.set(0, 0, c(1.0, 0.0));
        m.set(1, 1, c(0.0, -4.0));
        m.set(2, 2, c(2.0, 0.0));
        assert!((spectral_norm(&m).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(spectral_norm(&ComplexMatrix::zeros(4, 4)).unwrap(), 0.0);
    }
}
