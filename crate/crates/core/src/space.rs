//! Weighted Hardy spaces `H²(β)`: norms, inner products and reproducing kernels.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Positive weights beyond the last stored value repeat that value.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(into = "Vec<f64>", try_from = "Vec<f64>")
)]
pub struct CustomWeights(Vec<f64>);

impl CustomWeights {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidWeight);
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl From<CustomWeights> for Vec<f64> {
    fn from(w: CustomWeights) -> Self {
        w.0
    }
}

impl TryFrom<Vec<f64>> for CustomWeights {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

/// The weight rule `n ↦ β_n` defining `‖f‖² = Σ |c_n|² β_n²`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum WeightSequence {
    /// `β_n = 1`
    Hardy,
    /// `β_0 = 1`, `β_n = √n`
    Dirichlet,
    /// `β_n = 1/√(n+1)`
    Bergman,
    Custom(CustomWeights),
}

/// Lower bound allowed for `β_n^{1/n}` is `(1 - 1e-6)(n+1)^{-POLY_ALLOWANCE/n}`,
/// which admits polynomially decaying weights such as Bergman's.
const POLY_ALLOWANCE: f64 = 4.0;
const MIN_KERNEL_HORIZON: usize = 64;

impl WeightSequence {
    pub fn custom(values: Vec<f64>) -> Result<Self> {
        CustomWeights::new(values).map(Self::Custom)
    }

    /// `β_n = n^{-alpha}` for `n >= 1`, `β_0 = 1`, stored through index `len - 1`.
    pub fn power_law(alpha: f64, len: usize) -> Result<Self> {
        let values = (0..len.max(1))
            .map(|n| if n == 0 { 1.0 } else { (n as f64).powf(-alpha) })
            .collect();
        Self::custom(values)
    }

    /// `β_n²`, computed without a square root for the named spaces.
    pub fn beta_sq(&self, n: usize) -> f64 {
        match self {
            Self::Hardy => 1.0,
            Self::Dirichlet => {
                if n == 0 {
                    1.0
                } else {
                    n as f64
                }
            }
            Self::Bergman => 1.0 / (n as f64 + 1.0),
            Self::Custom(w) => {
                let v = w.0[n.min(w.0.len() - 1)];
                v * v
            }
        }
    }

    pub fn beta(&self, n: usize) -> f64 {
        match self {
            Self::Custom(w) => w.0[n.min(w.0.len() - 1)],
            _ => self.beta_sq(n).sqrt(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Hardy => "hardy",
            Self::Dirichlet => "dirichlet",
            Self::Bergman => "bergman",
            Self::Custom(_) => "custom",
        }
    }

    /// Smallest `β_n^{1/n}` over `n ∈ [h/2, h]`, `h = max(horizon, 64)`,
    /// and whether it clears the polynomial-decay allowance.
    pub fn kernel_check(&self, horizon: usize) -> (bool, f64) {
        let h = horizon.max(MIN_KERNEL_HORIZON);
        let mut ok = true;
        let mut min_root = f64::INFINITY;
        for n in (h / 2).max(1)..=h {
            let nf = n as f64;
            let root = (self.beta_sq(n).ln() / (2.0 * nf)).exp();
            let floor = (1.0 - 1e-6) * (-POLY_ALLOWANCE * (nf + 1.0).ln() / nf).exp();
            min_root = min_root.min(root);
            ok &= root >= floor;
        }
        (ok, min_root)
    }

    pub fn has_kernels(&self, horizon: usize) -> bool {
        self.kernel_check(horizon).0
    }

    /// `Err` at the first index `n <= upto` with `β_n > β_{n-1}`.
    pub fn check_non_increasing(&self, upto: usize) -> Result<()> {
        match self {
            Self::Hardy | Self::Bergman => Ok(()),
            _ => match (1..=upto).find(|&n| self.beta_sq(n) > self.beta_sq(n - 1)) {
                Some(index) => Err(Error::WeightNotDecreasing { index }),
                None => Ok(()),
            },
        }
    }
}

/// `Σ_{n} f_n conj(g_n) β_n²` over the shared indices.
pub fn weighted_inner(f: &TruncatedSeries, g: &TruncatedSeries, weights: &WeightSequence) -> Complex64 {
    f.coeffs()
        .iter()
        .zip(g.coeffs())
        .enumerate()
        .map(|(n, (a, b))| a * b.conj() * weights.beta_sq(n))
        .sum()
}

/// `‖f‖_β²`; identical summation to `weighted_inner(f, f, β).re`.
pub fn weighted_norm_sq(f: &TruncatedSeries, weights: &WeightSequence) -> f64 {
    weighted_inner(f, f, weights).re
}

pub fn weighted_norm(f: &TruncatedSeries, weights: &WeightSequence) -> f64 {
    weighted_norm_sq(f, weights).sqrt()
}

/// `⟨f, z g'⟩_{H²} + f(0) conj(g(0))`.
pub fn dirichlet_inner(f: &TruncatedSeries, g: &TruncatedSeries) -> Complex64 {
    let head = f.coeff(0) * g.coeff(0).conj();
    let tail: Complex64 = f
        .coeffs()
        .iter()
        .zip(g.coeffs())
        .enumerate()
        .skip(1)
        .map(|(n, (a, b))| a * (b * n as f64).conj())
        .sum();
    head + tail
}

/// Inner product of the given space, routing Dirichlet weights through
/// [`dirichlet_inner`].
pub fn space_inner(f: &TruncatedSeries, g: &TruncatedSeries, weights: &WeightSequence) -> Complex64 {
    match weights {
        WeightSequence::Dirichlet => dirichlet_inner(f, g),
        _ => weighted_inner(f, g, weights),
    }
}

/// Truncated reproducing kernel `k_w^N(z) = Σ_{n≤N} conj(w)^n / β_n² z^n`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReproducingKernel {
    pub anchor: Complex64,
    pub series: TruncatedSeries,
    /// Partial sum `Σ_{n≤N} |w|^{2n} / β_n²`.
    pub norm_sq: f64,
}

impl ReproducingKernel {
    pub fn normalized(&self) -> TruncatedSeries {
        self.series.scale(Complex64::new(1.0 / self.norm_sq.sqrt(), 0.0))
    }
}

pub fn kernel_at(w: Complex64, weights: &WeightSequence, order: usize) -> Result<ReproducingKernel> {
    let modulus = w.norm();
    if modulus >= 1.0 {
        return Err(Error::OutsideDisc { what: "kernel anchor", modulus });
    }
    let (ok, min_root) = weights.kernel_check(order);
    if !ok {
        return Err(Error::NoReproducingKernel { min_root });
    }
    let wc = w.conj();
    let r2 = modulus * modulus;
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut power = Complex64::new(1.0, 0.0);
    let mut r2n = 1.0;
    let mut norm_sq = 0.0;
    for n in 0..=order {
        let b2 = weights.beta_sq(n);
        coeffs.push(power / b2);
        norm_sq += r2n / b2;
        power *= wc;
        r2n *= r2;
    }
    Ok(ReproducingKernel { anchor: w, series: TruncatedSeries::new(coeffs)?, norm_sq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn named_weights() {
        assert_eq!(WeightSequence::Dirichlet.beta_sq(0), 1.0);
        assert_eq!(WeightSequence::Dirichlet.beta_sq(7), 7.0);
        assert!((WeightSequence::Bergman.beta(3) - 0.5).abs() < 1e-15);
        assert_eq!(WeightSequence::Hardy.beta(100), 1.0);
    }

    #[test]
    fn custom_weights_validate_and_repeat_last() {
        assert_eq!(WeightSequence::custom(vec![1.0, -2.0]), Err(Error::InvalidWeight));
        assert_eq!(WeightSequence::custom(vec![]), Err(Error::InvalidWeight));
        let w = WeightSequence::custom(vec![1.0, 0.5]).unwrap();
        assert_eq!(w.beta(10), 0.5);
    }

    #[test]
    fn named_spaces_have_kernels() {
        for w in [WeightSequence::Hardy, WeightSequence::Dirichlet, WeightSequence::Bergman] {
            for horizon in [8, 64, 256, 2000] {
                assert!(w.has_kernels(horizon), "{w:?} at {horizon}");
            }
        }
        let fast = WeightSequence::custom((0..300).map(|n| 0.5f64.powi(n)).collect()).unwrap();
        assert!(!fast.has_kernels(256));
    }

    #[test]
    fn kernel_rejects_boundary_anchor() {
        let err = kernel_at(Complex64::new(0.6, 0.8), &WeightSequence::Hardy, 10).unwrap_err();
        assert!(matches!(err, Error::OutsideDisc { .. }));
    }

    #[test]
    fn kernel_at_origin() {
        let k = kernel_at(Complex64::new(0.0, 0.0), &WeightSequence::Bergman, 12).unwrap();
        assert_eq!(k.series.coeff(0), Complex64::new(1.0, 0.0));
        assert!(k.series.coeffs()[1..].iter().all(|c| c.norm() == 0.0));
        assert_eq!(k.norm_sq, 1.0);
    }

    #[test]
    fn monotonicity_check() {
        assert!(WeightSequence::Hardy.check_non_increasing(100).is_ok());
        assert_eq!(
            WeightSequence::Dirichlet.check_non_increasing(10),
            Err(Error::WeightNotDecreasing { index: 2 })
        );
    }
}
