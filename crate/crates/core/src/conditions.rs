//! The generation tests for `A f = G f'` on `H²(𝔻)` and `𝒟`.
//!
//! * (A) `Re α₁ + |conj(α₀) + α₂| + Σ_{n≥3} |α_n| ≤ 0` (sufficient).
//! * (B) `2 Re(z̄ G(z)) + (1 − |z|²) Re G'(z) ≤ 0` on the disc.
//! * (C) `max_{|z|=1} Re(z̄ G(z)) ≤ 0`.
//!
//! (B) and (C) are equivalent and characterise generators; (B) is only
//! sampled here while (C) has a certified route, so (C) carries the verdict.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::cell::OnceCell;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::boundary::{self, CircleExtremum, DEFAULT_BOUNDARY_SAMPLES};
use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

pub const DEFAULT_TOL: f64 = 1e-9;

/// `G̃(z) = α₁ + (α₂ + conj(α₀)) z + Σ_{n≥3} α_n z^{n−1}`.
pub fn g_tilde(g: &TruncatedSeries) -> TruncatedSeries {
    let n = g.coeffs().len().max(2);
    let mut coeffs = Vec::with_capacity(n - 1);
    coeffs.push(g.coeff(1));
    coeffs.push(g.coeff(2) + g.coeff(0).conj());
    coeffs.extend((3..n).map(|k| g.coeff(k)));
    TruncatedSeries::new(coeffs).expect("finite input").with_truncated(g.is_truncated())
}

/// A generator symbol together with derived data.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    g: TruncatedSeries,
    g_tilde: OnceCell<TruncatedSeries>,
    dw_point: Option<Complex64>,
}

impl GeneratorSpec {
    pub fn new(g: TruncatedSeries) -> Self {
        Self { g, g_tilde: OnceCell::new(), dw_point: None }
    }

    /// Attaches a Denjoy–Wolff point; interior points must be zeros of `G`.
    pub fn with_dw_point(mut self, alpha: Complex64, tol: f64) -> Result<Self> {
        let modulus = alpha.norm();
        if modulus > 1.0 + tol {
            return Err(Error::OutsideDisc { what: "Denjoy-Wolff point", modulus });
        }
        if modulus < 1.0 && !self.g.is_zero() {
            let residual = self.g.eval(alpha).norm();
            if residual > tol * (1.0 + self.g.max_modulus()) {
                return Err(Error::NotAZero { point: alpha, residual });
            }
        }
        self.dw_point = Some(alpha);
        Ok(self)
    }

    pub fn g(&self) -> &TruncatedSeries {
        &self.g
    }

    pub fn g_tilde(&self) -> &TruncatedSeries {
        self.g_tilde.get_or_init(|| g_tilde(&self.g))
    }

    pub fn dw_point(&self) -> Option<Complex64> {
        self.dw_point
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionA {
    pub pass: bool,
    pub value: f64,
}

pub fn condition_a(g: &TruncatedSeries) -> ConditionA {
    condition_a_with_tol(g, 0.0)
}

pub fn condition_a_with_tol(g: &TruncatedSeries, tol: f64) -> ConditionA {
    let tail: f64 = g.coeffs().iter().skip(3).map(|c| c.norm()).sum();
    let value = g.coeff(1).re + (g.coeff(0).conj() + g.coeff(2)).norm() + tail;
    ConditionA { pass: value <= tol, value }
}

/// Polar sampling of the open disc for condition (B).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiscGrid {
    pub radial: usize,
    pub angular: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub include_origin: bool,
    /// Local pattern search around the best grid point and along the outer ring.
    pub refine: bool,
}

impl Default for DiscGrid {
    fn default() -> Self {
        Self { radial: 100, angular: 100, r_min: 0.05, r_max: 0.999, include_origin: true, refine: true }
    }
}

impl DiscGrid {
    fn validate(&self) -> Result<()> {
        if self.radial == 0 || self.angular == 0 {
            return Err(Error::InvalidArgument("disc grid must be nonempty"));
        }
        if !(self.r_max < 1.0 && self.r_min >= 0.0 && self.r_min <= self.r_max) {
            return Err(Error::InvalidArgument("disc grid radii must satisfy 0 <= r_min <= r_max < 1"));
        }
        Ok(())
    }

    fn radius(&self, i: usize) -> f64 {
        if self.radial == 1 {
            self.r_max
        } else {
            self.r_min + (self.r_max - self.r_min) * i as f64 / (self.radial - 1) as f64
        }
    }

    pub fn len(&self) -> usize {
        self.radial * self.angular + usize::from(self.include_origin)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionB {
    pub pass: bool,
    pub worst_point: Complex64,
    pub worst_value: f64,
    pub points_evaluated: usize,
}

/// `2 Re(z̄ G(z)) + (1 − |z|²) Re G'(z)`.
pub fn condition_b_expression(g: &TruncatedSeries, z: Complex64) -> f64 {
    let (value, slope) = g.eval_with_derivative(z);
    2.0 * (z.conj() * value).re + (1.0 - z.norm_sqr()) * slope.re
}

const MAX_REFINE_RADIUS: f64 = 1.0 - 1e-12;

pub fn condition_b_grid(g: &TruncatedSeries, grid: &DiscGrid, tol: f64) -> Result<ConditionB> {
    grid.validate()?;
    let expr = |r: f64, theta: f64| condition_b_expression(g, Complex64::from_polar(r, theta));
    let dtheta = TAU / grid.angular as f64;

    let mut evaluated = 0usize;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    if grid.include_origin {
        best = (condition_b_expression(g, Complex64::new(0.0, 0.0)), 0.0, 0.0);
        evaluated += 1;
    }
    let mut ring_best = (f64::NEG_INFINITY, grid.r_max, 0.0);
    for i in 0..grid.radial {
        let r = grid.radius(i);
        for j in 0..grid.angular {
            let theta = dtheta * j as f64;
            let v = expr(r, theta);
            evaluated += 1;
            if v > best.0 {
                best = (v, r, theta);
            }
            if i + 1 == grid.radial && v > ring_best.0 {
                ring_best = (v, r, theta);
            }
        }
    }

    if grid.refine {
        let dr = if grid.radial > 1 { (grid.r_max - grid.r_min) / (grid.radial - 1) as f64 } else { 0.01 };
        for start in [best, ring_best] {
            let (v, r, theta, n) = pattern_search(&expr, start, dr.max(1e-3), dtheta);
            evaluated += n;
            if v > best.0 {
                best = (v, r, theta);
            }
        }
    }

    Ok(ConditionB {
        pass: best.0 <= tol,
        worst_point: Complex64::from_polar(best.1, best.2),
        worst_value: best.0,
        points_evaluated: evaluated,
    })
}

/// Compass search maximising `f(r, θ)` with `0 <= r <= 1 − 1e−12`.
fn pattern_search<F: Fn(f64, f64) -> f64>(
    f: &F,
    start: (f64, f64, f64),
    mut dr: f64,
    mut dtheta: f64,
) -> (f64, f64, f64, usize) {
    let (mut best, mut r, mut theta) = start;
    let mut evals = 0;
    while dr > 1e-13 || dtheta > 1e-13 {
        let mut moved = false;
        for (sr, st) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let rc = (r + sr * dr).clamp(0.0, MAX_REFINE_RADIUS);
            let tc = theta + st * dtheta;
            let v = f(rc, tc);
            evals += 1;
            if v > best {
                best = v;
                r = rc;
                theta = tc;
                moved = true;
                break;
            }
        }
        if !moved {
            dr *= 0.5;
            dtheta *= 0.5;
        }
        if evals > 20_000 {
            break;
        }
    }
    (best, r, boundary::wrap_angle(theta), evals)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum BoundaryMethod {
    Sampled,
    Certified,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionC {
    pub pass: bool,
    pub boundary_max: f64,
    pub arg_max: f64,
    pub method: BoundaryMethod,
    pub notes: Vec<String>,
}

/// `max_θ Re(e^{−iθ} G(e^{iθ}))`, computed as `max_θ Re G̃(e^{iθ})`.
pub fn condition_c(g: &TruncatedSeries, method: BoundaryMethod, tol: f64) -> ConditionC {
    let gt = g_tilde(g);
    let mut notes = Vec::new();
    if g.is_truncated() {
        notes.push(String::from("G is a truncated series: boundary maximum is that of the truncation"));
    }
    let (extremum, method) = match method {
        BoundaryMethod::Sampled => (sampled_boundary_max(gt.coeffs()), BoundaryMethod::Sampled),
        BoundaryMethod::Certified => match boundary::certified_max_re(gt.coeffs()) {
            Ok(e) => (e, BoundaryMethod::Certified),
            Err(err) => {
                notes.push(format!("certified mode failed ({err}); fell back to sampling"));
                (sampled_boundary_max(gt.coeffs()), BoundaryMethod::Sampled)
            }
        },
    };
    if extremum.value.abs() <= tol {
        notes.push(String::from("marginal: boundary maximum within tolerance of zero"));
    }
    ConditionC {
        pass: extremum.value <= tol,
        boundary_max: extremum.value,
        arg_max: extremum.theta,
        method,
        notes,
    }
}

fn sampled_boundary_max(g_tilde: &[Complex64]) -> CircleExtremum {
    boundary::sampled_max(|t| boundary::re_on_circle(g_tilde, t), DEFAULT_BOUNDARY_SAMPLES, 0.0)
}

/// Overall generation decision, driven by condition (C).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum Generation {
    Generates,
    DoesNotGenerate,
    Marginal,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionReport {
    pub condition_a: ConditionA,
    pub condition_b: ConditionB,
    pub condition_c: ConditionC,
    pub verdict: Generation,
    pub notes: Vec<String>,
}

/// Runs (A), (B) on `grid` and certified (C), and combines them.
pub fn analyze(g: &TruncatedSeries, grid: &DiscGrid, tol: f64) -> Result<ConditionReport> {
    let a = condition_a_with_tol(g, tol);
    let b = condition_b_grid(g, grid, tol)?;
    let c = condition_c(g, BoundaryMethod::Certified, tol);
    let mut notes = vec![];
    if a.value.abs() <= tol {
        notes.push(String::from("marginal: condition (A) value within tolerance of zero"));
    }
    if b.worst_value.abs() <= tol {
        notes.push(String::from("marginal: condition (B) maximum within tolerance of zero"));
    }
    let verdict = if c.boundary_max.abs() <= tol {
        Generation::Marginal
    } else if c.pass {
        Generation::Generates
    } else {
        Generation::DoesNotGenerate
    };
    if b.pass != c.pass {
        notes.push(format!(
            "conditions (B) and (C) disagree: grid max {:e}, boundary max {:e}",
            b.worst_value, c.boundary_max
        ));
    }
    if a.pass && !c.pass {
        notes.push(String::from("condition (A) passed but (C) failed"));
    }
    Ok(ConditionReport { condition_a: a, condition_b: b, condition_c: c, verdict, notes })
}
