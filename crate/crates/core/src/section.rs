//! Finite sections of `C_φ` and `A f = G f'` on `H²(β)`, in the orthonormal
//! basis `e_n = z^n / β_n`, and the norm bounds they are compared against.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::conditions::{condition_c, BoundaryMethod, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::flow::{classify_closed_form, flow_series, SemiflowModel};
use crate::linalg::{spectral_norm, ComplexMatrix};
use crate::series::TruncatedSeries;
use crate::space::WeightSequence;

pub const DEFAULT_SECTION_DIM: usize = 64;
/// Columns whose spill beyond the section exceeds this fraction of their norm
/// make the section unreliable.
pub const SPILL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum SectionKind {
    Composition,
    Generator,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiniteSection {
    /// `N + 1`.
    pub dim: usize,
    pub entries: ComplexMatrix,
    pub space: WeightSequence,
    pub kind: SectionKind,
    pub symbol: TruncatedSeries,
    /// Largest ratio, over columns, of the weighted norm falling outside the
    /// section to the column norm.
    pub tail_mass: f64,
    pub reliable: bool,
}

/// Matrix of `C_φ` (kind `Composition`, symbol `φ`) or of `A` (kind
/// `Generator`, symbol `G`) on `span{e_0, …, e_N}`.
pub fn finite_section(
    kind: SectionKind,
    symbol: &TruncatedSeries,
    n: usize,
    weights: &WeightSequence,
) -> Result<FiniteSection> {
    let dim = n + 1;
    let beta: Vec<f64> = (0..=2 * n + 1 + symbol.coeffs().len()).map(|i| weights.beta(i)).collect();
    let mut entries = ComplexMatrix::zeros(dim, dim);
    let mut tail_mass = 0.0f64;
    let mut record = |inside: f64, outside: f64| {
        let total = inside + outside;
        if total > 0.0 {
            tail_mass = tail_mass.max((outside / total).sqrt());
        }
    };
    match kind {
        SectionKind::Composition => {
            let phi0 = symbol.coeff(0).norm();
            if phi0 >= 1.0 {
                return Err(Error::OutsideDisc { what: "phi(0)", modulus: phi0 });
            }
            let cap = 2 * n + 2;
            let phi = symbol.resized(symbol.coeffs().len().min(cap));
            let mut power = TruncatedSeries::constant(Complex64::new(1.0, 0.0));
            for j in 0..dim {
                if j > 0 {
                    power = power.mul_capped(&phi, cap);
                }
                let (mut inside, mut outside) = (0.0, 0.0);
                for (i, &c) in power.coeffs().iter().enumerate() {
                    let v = c * (beta[i] / beta[j]);
                    if i < dim {
                        entries.set(i, j, v);
                        inside += v.norm_sqr();
                    } else {
                        outside += v.norm_sqr();
                    }
                }
                record(inside, outside);
            }
        }
        SectionKind::Generator => {
            for j in 1..dim {
                let (mut inside, mut outside) = (0.0, 0.0);
                // A z^j = j G z^{j-1}
                for (m, &g) in symbol.coeffs().iter().enumerate() {
                    let i = m + j - 1;
                    let v = g * (j as f64 * beta[i] / beta[j]);
                    if i < dim {
                        entries.set(i, j, v);
                        inside += v.norm_sqr();
                    } else {
                        outside += v.norm_sqr();
                    }
                }
                record(inside, outside);
            }
        }
    }
    Ok(FiniteSection {
        dim,
        entries,
        space: weights.clone(),
        kind,
        symbol: symbol.clone(),
        tail_mass,
        reliable: tail_mass <= SPILL_TOL,
    })
}

/// Section of `C_{φ_t}` for the semiflow `m`.
pub fn flow_section(m: &SemiflowModel, t: f64, n: usize, weights: &WeightSequence) -> Result<FiniteSection> {
    let phi = flow_series(m, t, 2 * n + 1)?;
    finite_section(SectionKind::Composition, &phi, n, weights)
}

/// Largest singular value of the section: a lower bound for the operator
/// norm, non-decreasing in `N`.
pub fn operator_norm(section: &FiniteSection) -> Result<f64> {
    spectral_norm(&section.entries)
}

fn check_phi0(phi0: Complex64) -> Result<f64> {
    let r = phi0.norm();
    if !(r < 1.0) {
        return Err(Error::OutsideDisc { what: "phi(0)", modulus: r });
    }
    Ok(r)
}

/// `√((1 + |φ(0)|)/(1 − |φ(0)|))`, the norm bound for `C_φ` on `H²`.
pub fn hardy_norm_bound(phi0: Complex64) -> Result<f64> {
    let r = check_phi0(phi0)?;
    Ok(((1.0 + r) / (1.0 - r)).sqrt())
}

/// `√((L + 2 + √(L(4 + L)))/2)` with `L = log(1/(1 − |φ(0)|²))`, the norm
/// bound for `C_φ` on the Dirichlet space.
pub fn dirichlet_norm_bound(phi0: Complex64) -> Result<f64> {
    let r = check_phi0(phi0)?;
    let l = -(-r * r).ln_1p();
    Ok(((l + 2.0 + (l * (4.0 + l)).sqrt()) / 2.0).sqrt())
}

/// The bound matching `weights`, if one is known.
pub fn norm_bound(weights: &WeightSequence, phi0: Complex64) -> Result<Option<f64>> {
    match weights {
        WeightSequence::Hardy => hardy_norm_bound(phi0).map(Some),
        WeightSequence::Dirichlet => dirichlet_norm_bound(phi0).map(Some),
        _ => check_phi0(phi0).map(|_| None),
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GrowthFit {
    /// `max_t log ‖C_{φ_t}‖_N / t` over the grid.
    pub w_hat: f64,
    /// Least-squares slope through the origin of `‖C_{φ_t}‖_N − 1` against `t`
    /// on the three smallest grid times.
    pub small_t_slope: f64,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub phi0: Vec<Complex64>,
    /// Every section along the grid passed the spill check.
    pub reliable: bool,
}

pub fn growth_bound_fit(
    g: &TruncatedSeries,
    weights: &WeightSequence,
    n: usize,
    t_grid: &[f64],
) -> Result<GrowthFit> {
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidArgument("growth fit needs a nonempty grid of positive times"));
    }
    let c = condition_c(g, BoundaryMethod::Certified, DEFAULT_TOL);
    if !c.pass {
        return Err(Error::NotAGenerator { boundary_max: c.boundary_max });
    }
    let model = classify_closed_form(g);
    let mut times = t_grid.to_vec();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    let mut norms = Vec::with_capacity(times.len());
    let mut phi0 = Vec::with_capacity(times.len());
    let mut reliable = true;
    for &t in &times {
        let section = flow_section(&model, t, n, weights)?;
        reliable &= section.reliable;
        phi0.push(section.symbol.coeff(0));
        norms.push(operator_norm(&section)?);
    }
    let w_hat = times.iter().zip(&norms).map(|(&t, &v)| v.ln() / t).fold(f64::NEG_INFINITY, f64::max);
    let k = times.len().min(3);
    let (num, den) = times[..k]
        .iter()
        .zip(&norms[..k])
        .fold((0.0, 0.0), |(num, den), (&t, &v)| (num + t * (v - 1.0), den + t * t));
    Ok(GrowthFit { w_hat, small_t_slope: num / den, times, norms, phi0, reliable })
}
