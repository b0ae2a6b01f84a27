//! Truncated complex power series `c_0 + c_1 z + ... + c_N z^N`.
//!
//! Every operation that can produce terms of order above its cap drops
//! them and sets the `truncated` flag on the result, so callers can tell
//! an exact polynomial result from a clipped one.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default maximum number of coefficients kept by products and compositions.
pub const DEFAULT_CAP: usize = 256;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(into = "Vec<Complex64>", try_from = "Vec<Complex64>")
)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
    truncated: bool,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients. An empty vector is the zero series.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        let coeffs = if coeffs.is_empty() { vec![ZERO] } else { coeffs };
        Ok(Self { coeffs, truncated: false })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![ZERO], truncated: false }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c], truncated: false }
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = ONE;
        Self { coeffs, truncated: false }
    }

    /// The identity symbol `z`.
    pub fn identity() -> Self {
        Self::monomial(1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^n`, zero past the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    /// Truncation order `N` (there are `N + 1` stored coefficients).
    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// True when some operation producing this series dropped nonzero terms.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub(crate) fn with_truncated(mut self, truncated: bool) -> Self {
        self.truncated |= truncated;
        self
    }

    /// Index of the last nonzero coefficient, `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != ZERO)
    }

    /// Degree after discarding trailing coefficients with modulus `<= tol * max|c_n|`.
    pub fn effective_degree(&self, tol: f64) -> Option<usize> {
        let scale = self.max_modulus();
        if scale == 0.0 {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.norm() > tol * scale)
    }

    /// Copy with trailing near-zero coefficients removed (keeps at least one).
    pub fn trimmed(&self, tol: f64) -> Self {
        let len = self.effective_degree(tol).map_or(1, |d| d + 1);
        Self { coeffs: self.coeffs[..len].to_vec(), truncated: self.truncated }
    }

    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| f64::max(m, c.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Value and first derivative at `z` in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut value = ZERO;
        let mut slope = ZERO;
        for &c in self.coeffs.iter().rev() {
            slope = slope * z + value;
            value = value * z + c;
        }
        (value, slope)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self { coeffs: vec![ZERO], truncated: self.truncated };
        }
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(n, &c)| c * n as f64).collect();
        Self { coeffs, truncated: self.truncated }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| c * s).collect(), truncated: self.truncated }
    }

    /// Multiplies by `z^k`, shifting coefficients up.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs, truncated: self.truncated }
    }

    /// Product keeping at most `cap` coefficients.
    pub fn mul_capped(&self, other: &Self, cap: usize) -> Self {
        let cap = cap.max(1);
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let len = full.min(cap);
        let mut coeffs = vec![ZERO; len];
        let mut dropped = false;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k < len {
                    coeffs[k] += a * b;
                } else if b != ZERO {
                    dropped = true;
                    break;
                }
            }
        }
        Self { coeffs, truncated: self.truncated || other.truncated || dropped }
    }

    /// Exact product (no cap).
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_capped(other, usize::MAX)
    }

    /// Taylor coefficients of `self ∘ inner` through order `cap - 1`, by Horner
    /// nesting. Requires `|inner(0)| < 1`.
    pub fn compose(&self, inner: &Self, cap: usize) -> Result<Self> {
        let inner0 = inner.coeff(0).norm();
        if inner0 >= 1.0 {
            return Err(Error::OutsideDisc { what: "inner symbol value at 0", modulus: inner0 });
        }
        let mut acc = Self::constant(*self.coeffs.last().unwrap_or(&ZERO));
        for &c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul_capped(inner, cap);
            acc.coeffs[0] += c;
        }
        acc.truncated |= self.truncated;
        Ok(acc)
    }

    /// `G f'` with at most `cap` coefficients.
    pub fn apply_generator(generator: &Self, f: &Self, cap: usize) -> Self {
        generator.mul_capped(&f.derivative(), cap)
    }

    /// Keeps the first `len` coefficients (zero-padding if shorter).
    pub fn resized(&self, len: usize) -> Self {
        let len = len.max(1);
        let dropped = self.coeffs.iter().skip(len).any(|c| *c != ZERO);
        let mut coeffs: Vec<Complex64> = self.coeffs.iter().copied().take(len).collect();
        coeffs.resize(len, ZERO);
        Self { coeffs, truncated: self.truncated || dropped }
    }

    /// Coefficients as a polynomial in the form expected by root finders:
    /// trailing zeros removed.
    pub(crate) fn poly_coeffs(&self, tol: f64) -> Vec<Complex64> {
        self.trimmed(tol).coeffs
    }
}

impl From<TruncatedSeries> for Vec<Complex64> {
    fn from(s: TruncatedSeries) -> Self {
        s.coeffs
    }
}

impl TryFrom<Vec<Complex64>> for TruncatedSeries {
    type Error = Error;

    fn try_from(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::new(coeffs)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: Self) -> TruncatedSeries {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|n| self.coeff(n) + rhs.coeff(n)).collect();
        TruncatedSeries { coeffs, truncated: self.truncated || rhs.truncated }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: Self) -> TruncatedSeries {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|n| self.coeff(n) - rhs.coeff(n)).collect();
        TruncatedSeries { coeffs, truncated: self.truncated || rhs.truncated }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        self.scale(-ONE)
    }
}

/// `f ∘ φ` truncated at `cap` coefficients.
pub fn series_compose(f: &TruncatedSeries, phi: &TruncatedSeries, cap: usize) -> Result<TruncatedSeries> {
    f.compose(phi, cap)
}

/// The generator action `A f = G f'`, truncated at `cap` coefficients.
pub fn apply_a(generator: &TruncatedSeries, f: &TruncatedSeries, cap: usize) -> TruncatedSeries {
    TruncatedSeries::apply_generator(generator, f, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_finite() {
        let err = TruncatedSeries::new(vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite { index: 1 });
    }

    #[test]
    fn empty_is_zero() {
        let s = TruncatedSeries::new(vec![]).unwrap();
        assert_eq!(s.trunc_order(), 0);
        assert!(s.is_zero());
        assert_eq!(s.degree(), None);
    }

    #[test]
    fn compose_with_identity_is_noop() {
        let f = TruncatedSeries::new(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0)]).unwrap();
        let g = f.compose(&TruncatedSeries::identity(), DEFAULT_CAP).unwrap();
        assert_eq!(g.trimmed(0.0), f);
        assert!(!g.is_truncated());
    }

    #[test]
    fn compose_square_with_half() {
        let f = TruncatedSeries::monomial(2);
        let phi = TruncatedSeries::from_real(&[0.0, 0.5]).unwrap();
        let g = f.compose(&phi, DEFAULT_CAP).unwrap();
        assert_eq!(g.coeffs(), &[c(0.0, 0.0), c(0.0, 0.0), c(0.25, 0.0)]);
    }

    #[test]
    fn compose_rejects_inner_outside_disc() {
        let phi = TruncatedSeries::from_real(&[1.0, 0.5]).unwrap();
        assert!(TruncatedSeries::monomial(2).compose(&phi, 8).is_err());
    }

    #[test]
    fn compose_flags_cap_overflow() {
        let f = TruncatedSeries::monomial(4);
        let phi = TruncatedSeries::from_real(&[0.0, 1.0, 1.0]).unwrap();
        let g = f.compose(&phi, 5).unwrap();
        assert_eq!(g.trunc_order(), 4);
        assert!(g.is_truncated());
        assert_eq!(g.coeff(4), c(1.0, 0.0));
    }

    #[test]
    fn generator_on_monomials() {
        let g = TruncatedSeries::from_real(&[0.0, -1.0]).unwrap();
        let f = TruncatedSeries::monomial(5);
        let af = apply_a(&g, &f, DEFAULT_CAP);
        assert_eq!(af.coeff(5), c(-5.0, 0.0));
        assert_eq!(af.degree(), Some(5));

        let one = TruncatedSeries::from_real(&[1.0]).unwrap();
        let af = apply_a(&one, &TruncatedSeries::monomial(2), DEFAULT_CAP);
        assert_eq!(af.coeffs(), &[c(0.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn horner_derivative_matches_series_derivative() {
        let f = TruncatedSeries::new(vec![c(0.3, -1.0), c(2.0, 0.5), c(-1.0, 0.0), c(0.1, 0.2)]).unwrap();
        let z = c(0.4, -0.3);
        let (v, d) = f.eval_with_derivative(z);
        assert!((v - f.eval(z)).norm() < 1e-15);
        assert!((d - f.derivative().eval(z)).norm() < 1e-15);
    }

    #[test]
    fn effective_degree_ignores_noise() {
        let f = TruncatedSeries::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-17, 0.0)]).unwrap();
        assert_eq!(f.degree(), Some(2));
        assert_eq!(f.effective_degree(1e-14), Some(1));
    }
}
