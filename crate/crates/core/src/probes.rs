//! Numerical-range probes: Rayleigh quotients `⟨Af, f⟩/⟨f, f⟩` at kernels,
//! at the `f_N` family and at shifted Dirichlet witnesses.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::series::{apply_a, TruncatedSeries};
use crate::space::{dirichlet_inner, space_inner, weighted_norm, WeightSequence};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(tag = "kind", rename_all = "snake_case"))]
pub enum ProbeKind {
    Kernel { w: Complex64 },
    FN { theta: f64, n: usize, alpha_exp: f64 },
    DirichletShift { k: usize },
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RangeProbeResult {
    pub probe_kind: ProbeKind,
    pub rayleigh: Complex64,
    pub re_part: f64,
}

impl RangeProbeResult {
    fn new(probe_kind: ProbeKind, rayleigh: Complex64) -> Self {
        Self { probe_kind, rayleigh, re_part: rayleigh.re }
    }
}

/// `⟨Af, f⟩/⟨f, f⟩` in `H²(β)`, using the Dirichlet inner product for
/// Dirichlet weights. `Af` is formed without truncation.
pub fn rayleigh_quotient(g: &TruncatedSeries, f: &TruncatedSeries, weights: &WeightSequence) -> Result<Complex64> {
    let norm_sq = space_inner(f, f, weights).re;
    if f.is_zero() || !(norm_sq > 0.0) {
        return Err(Error::ZeroVector);
    }
    let af = apply_a(g, f, g.coeffs().len() + f.coeffs().len());
    Ok(space_inner(&af, f, weights) / norm_sq)
}

/// Rayleigh quotient at the normalised kernel `k̂_w`, from the closed ratio
/// `(w̄ G(w)/|w|²) · Σ n|w|^{2n}/β_n² / Σ |w|^{2n}/β_n²` summed over `n ≤ N`.
pub fn kernel_probe(g: &TruncatedSeries, w: Complex64, weights: &WeightSequence, n: usize) -> Result<RangeProbeResult> {
    let r = w.norm();
    if r == 0.0 {
        return Err(Error::InvalidArgument("kernel probe needs w != 0"));
    }
    if r >= 1.0 {
        return Err(Error::OutsideDisc { what: "kernel anchor", modulus: r });
    }
    weights.check_non_increasing(n)?;
    let r2 = r * r;
    let (mut moment, mut mass) = (0.0, 0.0);
    let mut r2n = 1.0;
    for m in 0..=n {
        let term = r2n / weights.beta_sq(m);
        mass += term;
        moment += m as f64 * term;
        r2n *= r2;
    }
    let rayleigh = w.conj() * g.eval(w) / r2 * (moment / mass);
    Ok(RangeProbeResult::new(ProbeKind::Kernel { w }, rayleigh))
}

/// `(1/2)^{1/(2N+2)}`: beyond this radius the kernel mass past index `N`
/// outweighs the mass up to `N`.
pub fn tail_threshold(n: usize, weights: &WeightSequence) -> Result<f64> {
    weights.check_non_increasing(2 * n + 2)?;
    Ok(0.5f64.powf(1.0 / (2 * n + 2) as f64))
}

/// `f_N = c_N Σ_{n=1}^{N} √6 e^{−inθ}/(π n^{1−α}) z^n`, normalised in `weights`
/// (intended for `β_n = n^{−α}`).
pub fn fn_witness(theta: f64, n: usize, alpha_exp: f64, weights: &WeightSequence) -> Result<TruncatedSeries> {
    if n == 0 {
        return Err(Error::InvalidArgument("f_N needs N >= 1"));
    }
    let scale = 6f64.sqrt() / PI;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    for (m, c) in coeffs.iter_mut().enumerate().skip(1) {
        let mf = m as f64;
        *c = Complex64::from_polar(scale / mf.powf(1.0 - alpha_exp), -mf * theta);
    }
    let raw = TruncatedSeries::new(coeffs)?;
    let norm = weighted_norm(&raw, weights);
    Ok(raw.scale(Complex64::new(1.0 / norm, 0.0)))
}

pub fn fn_probe(
    g: &TruncatedSeries,
    theta: f64,
    n: usize,
    alpha_exp: f64,
    weights: &WeightSequence,
) -> Result<RangeProbeResult> {
    let f = fn_witness(theta, n, alpha_exp, weights)?;
    let rayleigh = rayleigh_quotient(g, &f, weights)?;
    Ok(RangeProbeResult::new(ProbeKind::FN { theta, n, alpha_exp }, rayleigh))
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShiftWitness {
    pub probe: RangeProbeResult,
    /// `f_k` with `f_k' = z^k f'` and `f_k(0) = 0`.
    pub f_k: TruncatedSeries,
    /// `‖f_k‖²_𝒟` from the inner product.
    pub norm_sq: f64,
    /// `|‖f_k‖²_𝒟 − Σ |a_n|² n²/(n+k)|`.
    pub norm_identity_defect: f64,
}

/// `f_k(z) = Σ_{n≥1} a_n n/(n+k) z^{n+k}` and its Dirichlet Rayleigh quotient.
pub fn dirichlet_shift_witness(f: &TruncatedSeries, k: usize, g: &TruncatedSeries) -> Result<ShiftWitness> {
    let a = f.coeffs();
    let mut coeffs: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); a.len() + k];
    let mut identity = 0.0;
    for (n, &an) in a.iter().enumerate().skip(1) {
        let nf = n as f64;
        coeffs[n + k] = an * (nf / (nf + k as f64));
        identity += an.norm_sqr() * nf * nf / (nf + k as f64);
    }
    let f_k = TruncatedSeries::new(coeffs)?;
    if f_k.is_zero() {
        return Err(Error::ZeroVector);
    }
    let norm_sq = dirichlet_inner(&f_k, &f_k).re;
    let rayleigh = rayleigh_quotient(g, &f_k, &WeightSequence::Dirichlet)?;
    Ok(ShiftWitness {
        probe: RangeProbeResult::new(ProbeKind::DirichletShift { k }, rayleigh),
        f_k,
        norm_sq,
        norm_identity_defect: (norm_sq - identity).abs(),
    })
}

/// `⟨G f', z f'⟩_{H²}`, the numerator of every shift witness.
pub fn shift_witness_constant(f: &TruncatedSeries, g: &TruncatedSeries) -> Complex64 {
    let df = f.derivative();
    let gdf = g.mul(&df);
    let zdf = df.shift(1);
    gdf.coeffs().iter().zip(zdf.coeffs()).map(|(a, b)| a * b.conj()).sum()
}
