//! Semiflows `φ_t` solving `∂_t φ_t(z) = G(φ_t(z))`, `φ_0(z) = z`.
//!
//! Closed forms cover `az + b`, `c(z − a)(z − b)`, `c(z − a)²`, `c(z − a)^n`
//! and `cz(z^n − a)`; anything else is integrated numerically.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, TAU};

use num_complex::Complex64;
use num_traits::Float;

use crate::conditions::{condition_c, BoundaryMethod, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::ode::{self, StepControl};
use crate::series::TruncatedSeries;

/// Trajectories stop once `|w| ≥ 1 − EXIT_MARGIN`.
pub const EXIT_MARGIN: f64 = 1e-9;
/// Relative size below which a coefficient counts as zero when matching closed forms.
pub const CLASSIFY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(tag = "kind", rename_all = "snake_case"))]
pub enum FlowVariant {
    /// `G = az + b`, `a ≠ 0`.
    LinearAB { a: Complex64, b: Complex64 },
    /// `G = c(z − a)(z − b)`, `a ≠ b`.
    QuadraticDistinct { c: Complex64, a: Complex64, b: Complex64 },
    /// `G = c(z − a)²`.
    QuadraticDouble { c: Complex64, a: Complex64 },
    /// `G = c(z − a)^n`, `n ≥ 2`.
    PowerShift { c: Complex64, a: Complex64, n: u32 },
    /// `G = cz(z^n − a)`, `a ≠ 0`.
    MonomialShift { c: Complex64, a: Complex64, n: u32 },
    Numeric,
}

impl FlowVariant {
    pub fn name(&self) -> &'static str {
        match self {
            Self::LinearAB { .. } => "linear_ab",
            Self::QuadraticDistinct { .. } => "quadratic_distinct",
            Self::QuadraticDouble { .. } => "quadratic_double",
            Self::PowerShift { .. } => "power_shift",
            Self::MonomialShift { .. } => "monomial_shift",
            Self::Numeric => "numeric",
        }
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self, Self::Numeric)
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SemiflowModel {
    pub variant: FlowVariant,
    pub g: TruncatedSeries,
    /// Attracting point of a closed form, when it has one.
    pub dw_point: Option<Complex64>,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficients of `c(z − a)^n`.
fn power_shift_coeffs(c: Complex64, a: Complex64, n: u32) -> Vec<Complex64> {
    (0..=n).map(|k| c * binomial(n, k) * (-a).powu(n - k)).collect()
}

impl SemiflowModel {
    /// Builds a closed-form model, reconstructing `G` from the parameters.
    pub fn from_variant(variant: FlowVariant) -> Result<Self> {
        let coeffs = match variant {
            FlowVariant::LinearAB { a, b } => {
                if a == ZERO {
                    return Err(Error::InvalidArgument("linear model needs a != 0"));
                }
                vec![b, a]
            }
            FlowVariant::QuadraticDistinct { c, a, b } => {
                if c == ZERO || a == b {
                    return Err(Error::InvalidArgument("distinct quadratic needs c != 0 and a != b"));
                }
                vec![c * a * b, -c * (a + b), c]
            }
            FlowVariant::QuadraticDouble { c, a } => {
                if c == ZERO {
                    return Err(Error::InvalidArgument("quadratic model needs c != 0"));
                }
                power_shift_coeffs(c, a, 2)
            }
            FlowVariant::PowerShift { c, a, n } => {
                if c == ZERO || n < 2 {
                    return Err(Error::InvalidArgument("power shift needs c != 0 and n >= 2"));
                }
                power_shift_coeffs(c, a, n)
            }
            FlowVariant::MonomialShift { c, a, n } => {
                if c == ZERO || a == ZERO || n < 1 {
                    return Err(Error::InvalidArgument("monomial shift needs c != 0, a != 0 and n >= 1"));
                }
                let mut coeffs = vec![ZERO; n as usize + 2];
                coeffs[1] = -c * a;
                coeffs[n as usize + 1] = c;
                coeffs
            }
            FlowVariant::Numeric => {
                return Err(Error::InvalidArgument("numeric models are built with SemiflowModel::numeric"));
            }
        };
        let g = TruncatedSeries::new(coeffs)?;
        let dw_point = closed_form_dw(&variant).ok();
        Ok(Self { variant, g, dw_point })
    }

    pub fn numeric(g: TruncatedSeries) -> Self {
        Self { variant: FlowVariant::Numeric, g, dw_point: None }
    }
}

fn near(x: Complex64, y: Complex64, scale: f64) -> bool {
    (x - y).norm() <= CLASSIFY_TOL * scale
}

/// Matches a polynomial `G` against the closed-form families, falling back to
/// [`FlowVariant::Numeric`].
pub fn classify_closed_form(g: &TruncatedSeries) -> SemiflowModel {
    let numeric = || SemiflowModel::numeric(g.clone());
    if g.is_truncated() {
        return numeric();
    }
    let scale = g.max_modulus();
    let Some(degree) = g.effective_degree(CLASSIFY_TOL) else {
        return numeric();
    };
    let p = g.poly_coeffs(CLASSIFY_TOL);
    let model = |variant| SemiflowModel { variant, g: g.clone(), dw_point: closed_form_dw(&variant).ok() };
    match degree {
        0 => numeric(),
        1 => model(FlowVariant::LinearAB { a: p[1], b: p[0] }),
        2 => {
            let c = p[2];
            let disc = p[1] * p[1] - c * p[0] * 4.0;
            let half = -p[1] / (c * 2.0);
            if disc.norm() <= CLASSIFY_TOL * (p[1].norm_sqr() + (c * p[0]).norm() * 4.0).max(f64::MIN_POSITIVE) {
                return model(FlowVariant::QuadraticDouble { c, a: half });
            }
            let root = disc.sqrt() / (c * 2.0);
            let (mut a, mut b) = (half + root, half - root);
            if (b.re, b.im) > (a.re, a.im) {
                core::mem::swap(&mut a, &mut b);
            }
            model(FlowVariant::QuadraticDistinct { c, a, b })
        }
        d => {
            let n = d as u32;
            let c = p[d];
            let a = -p[d - 1] / (c * d as f64);
            let candidate = power_shift_coeffs(c, a, n);
            if candidate.iter().zip(&p).all(|(&x, &y)| near(x, y, scale)) {
                return model(FlowVariant::PowerShift { c, a, n });
            }
            let middle_zero = p[2..d].iter().all(|&x| near(x, ZERO, scale));
            if near(p[0], ZERO, scale) && middle_zero && !near(p[1], ZERO, scale) {
                return model(FlowVariant::MonomialShift { c, a: -p[1] / c, n: n - 1 });
            }
            numeric()
        }
    }
}

fn closed_form_dw(variant: &FlowVariant) -> Result<Complex64> {
    let rate_sign = |rate: f64| -> Result<bool> {
        if rate == 0.0 {
            Err(Error::Automorphism)
        } else {
            Ok(rate < 0.0)
        }
    };
    match *variant {
        FlowVariant::LinearAB { a, b } => {
            if rate_sign(a.re)? {
                Ok(-b / a)
            } else {
                Err(Error::NotAGenerator { boundary_max: f64::NAN })
            }
        }
        FlowVariant::QuadraticDistinct { c, a, b } => {
            // (w − a)/(w − b) evolves by the factor e^{c(a − b)t}
            Ok(if rate_sign((c * (a - b)).re)? { a } else { b })
        }
        FlowVariant::QuadraticDouble { a, .. } | FlowVariant::PowerShift { a, .. } => Ok(a),
        FlowVariant::MonomialShift { c, a, .. } => {
            if rate_sign(-(c * a).re)? {
                Ok(ZERO)
            } else {
                Err(Error::NotAGenerator { boundary_max: f64::NAN })
            }
        }
        FlowVariant::Numeric => Err(Error::InvalidArgument("numeric model has no closed-form attracting point")),
    }
}

/// `e^x − 1` without cancellation for small `x`.
fn exp_m1(x: Complex64) -> Complex64 {
    let half_sin = (x.im * 0.5).sin();
    Complex64::new(x.re.exp_m1() * x.im.cos() - 2.0 * half_sin * half_sin, x.re.exp() * x.im.sin())
}

fn check_inputs(t: f64, z: Complex64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisc { what: "starting point", modulus: z.norm() });
    }
    Ok(())
}

/// Distance from the origin to the segment `[1, b]`.
fn segment_clearance(b: Complex64) -> f64 {
    let d = b - ONE;
    let len = d.norm_sqr();
    if len == 0.0 {
        return 1.0;
    }
    let s = (-d.re / len).clamp(0.0, 1.0);
    (ONE + d * s).norm()
}

const SINGULAR_EPS: f64 = 1e-14;

/// `arg f(t)` continued from `arg f(0) = 0`, assuming `f(0) = 1`.
fn tracked_arg<F: Fn(f64) -> Complex64>(f: &F, t: f64) -> Result<(Complex64, f64)> {
    fn walk<F: Fn(f64) -> Complex64>(
        f: &F,
        s0: f64,
        b0: Complex64,
        arg0: f64,
        s1: f64,
        depth: u32,
    ) -> Result<(Complex64, f64)> {
        let b1 = f(s1);
        if !(b1.norm() > SINGULAR_EPS) {
            return Err(Error::SingularTime { t: s1 });
        }
        let step = (b1 / b0).arg();
        if step.abs() > FRAC_PI_4 && depth < 40 {
            let mid = 0.5 * (s0 + s1);
            let (bm, argm) = walk(f, s0, b0, arg0, mid, depth + 1)?;
            return walk(f, mid, bm, argm, s1, depth + 1);
        }
        Ok((b1, arg0 + step))
    }
    const SEGMENTS: usize = 64;
    let (mut b, mut arg) = (ONE, 0.0);
    for k in 1..=SEGMENTS {
        let s0 = t * (k - 1) as f64 / SEGMENTS as f64;
        let s1 = t * k as f64 / SEGMENTS as f64;
        (b, arg) = walk(f, s0, b, arg, s1, 0)?;
    }
    Ok((b, arg))
}

/// `φ_t(z)`.
pub fn evaluate_flow(m: &SemiflowModel, t: f64, z: Complex64) -> Result<Complex64> {
    check_inputs(t, z)?;
    if t == 0.0 {
        return Ok(z);
    }
    match m.variant {
        FlowVariant::LinearAB { a, b } => {
            let at = a * t;
            Ok(at.exp() * z + b / a * exp_m1(at))
        }
        FlowVariant::QuadraticDistinct { c, a, b } => {
            let ea = (a * c * t).exp();
            let eb = (b * c * t).exp();
            let num = z * (a * eb - b * ea) + a * b * (ea - eb);
            let den = z * (eb - ea) + (a * ea - b * eb);
            let scale = z.norm() * (eb.norm() + ea.norm()) + (a * ea).norm() + (b * eb).norm();
            if den.norm() <= SINGULAR_EPS * scale {
                return Err(Error::SingularTime { t });
            }
            Ok(num / den)
        }
        FlowVariant::QuadraticDouble { c, a } => {
            let act = a * c * t;
            let den = -z * c * t + (ONE + act);
            if den.norm() <= SINGULAR_EPS * (1.0 + (z * c * t).norm() + act.norm()) {
                return Err(Error::SingularTime { t });
            }
            Ok((z * (ONE - act) + a * a * c * t) / den)
        }
        FlowVariant::PowerShift { c, a, n } => {
            let k = (n - 1) as f64;
            let base = ONE - c * (k * t) * (z - a).powu(n - 1);
            // the base moves along a straight segment from 1; the principal
            // branch is continuous unless that segment meets the origin
            if segment_clearance(base) <= SINGULAR_EPS {
                return Err(Error::SingularTime { t });
            }
            Ok(a + (z - a) / base.powf(1.0 / k))
        }
        FlowVariant::MonomialShift { c, a, n } => {
            let nf = n as f64;
            let zn = z.powu(n);
            let base = |s: f64| ONE + zn * exp_m1(-c * a * (nf * s)) / a;
            let (b, arg) = tracked_arg(&base, t)?;
            let root = Complex64::from_polar(b.norm().powf(1.0 / nf), arg / nf);
            Ok(z * (-c * a * t).exp() / root)
        }
        FlowVariant::Numeric => {
            let traj = integrate_flow(&m.g, t, z, &StepControl::default())?;
            let w = *traj.points.last().expect("trajectory starts with z0");
            if traj.exited {
                return Err(Error::BoundaryExit { t: *traj.times.last().unwrap_or(&0.0), modulus: w.norm() });
            }
            Ok(w)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<Complex64>,
    /// Hyperbolic speed `2|G(w)|/(1 − |w|²)` at each point.
    pub speeds: Vec<f64>,
    /// Stopped early at the boundary margin.
    pub exited: bool,
}

impl Trajectory {
    fn push(&mut self, g: &TruncatedSeries, t: f64, w: Complex64) {
        self.times.push(t);
        self.points.push(w);
        self.speeds.push(hyperbolic_speed(g, w));
    }

    pub fn end(&self) -> (f64, Complex64) {
        (*self.times.last().expect("nonempty"), *self.points.last().expect("nonempty"))
    }
}

pub fn hyperbolic_speed(g: &TruncatedSeries, w: Complex64) -> f64 {
    2.0 * g.eval(w).norm() / (1.0 - w.norm_sqr())
}

pub fn integrate_flow(g: &TruncatedSeries, t_end: f64, z0: Complex64, ctrl: &StepControl) -> Result<Trajectory> {
    integrate_flow_with_margin(g, t_end, z0, ctrl, EXIT_MARGIN)
}

/// Adaptive integration of `dw/dt = G(w)` recording every accepted step.
pub fn integrate_flow_with_margin(
    g: &TruncatedSeries,
    t_end: f64,
    z0: Complex64,
    ctrl: &StepControl,
    exit_margin: f64,
) -> Result<Trajectory> {
    check_inputs(t_end, z0)?;
    let mut traj = Trajectory { times: vec![], points: vec![], speeds: vec![], exited: false };
    let limit = 1.0 - exit_margin;
    if z0.norm() >= limit {
        traj.push(g, 0.0, z0);
        traj.exited = true;
        return Ok(traj);
    }
    let end = ode::solve(
        |y, dy| dy[0] = g.eval(y[0]),
        &[z0],
        t_end,
        ctrl,
        |y| y[0].norm() < limit,
        |t, y| traj.push(g, t, y[0]),
    )?;
    traj.exited = end.exited;
    Ok(traj)
}

/// Trajectory of any model: closed forms are sampled at `samples` equal time
/// steps, numeric models are integrated.
pub fn trajectory(m: &SemiflowModel, t_end: f64, z0: Complex64, samples: usize) -> Result<Trajectory> {
    if !m.variant.is_closed_form() {
        return integrate_flow(&m.g, t_end, z0, &StepControl::default());
    }
    check_inputs(t_end, z0)?;
    let samples = samples.max(1);
    let mut traj = Trajectory { times: vec![], points: vec![], speeds: vec![], exited: false };
    traj.push(&m.g, 0.0, z0);
    for k in 1..=samples {
        let t = t_end * k as f64 / samples as f64;
        match evaluate_flow(m, t, z0) {
            Ok(w) if w.norm() < 1.0 - EXIT_MARGIN => traj.push(&m.g, t, w),
            Ok(_) | Err(Error::SingularTime { .. }) => {
                traj.exited = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(traj)
}

/// Poincaré distance `2 artanh |(z₁ − z₂)/(1 − z₁ z̄₂)|`.
pub fn hyperbolic_dist(z1: Complex64, z2: Complex64) -> f64 {
    let r = ((z1 - z2) / (ONE - z1 * z2.conj())).norm();
    2.0 * r.min(1.0).atanh()
}

/// `max |φ_{t+s}(z) − φ_t(φ_s(z))|` over the samples `(t, s, z)`.
pub fn check_semigroup_law(m: &SemiflowModel, samples: &[(f64, f64, Complex64)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(t, s, z) in samples {
        let direct = evaluate_flow(m, t + s, z)?;
        let composed = evaluate_flow(m, t, evaluate_flow(m, s, z)?)?;
        worst = worst.max((direct - composed).norm());
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DenjoyWolff {
    pub point: Complex64,
    /// The point lies on the unit circle.
    pub boundary: bool,
    /// Found by long-time integration rather than a closed form.
    pub numeric: bool,
}

pub const DW_MAX_DOUBLINGS: u32 = 10;
pub const DW_MOVEMENT_TOL: f64 = 1e-8;
pub const DW_BOUNDARY_BAND: f64 = 1e-4;

/// Denjoy–Wolff point of the semiflow.
pub fn denjoy_wolff(m: &SemiflowModel) -> Result<DenjoyWolff> {
    if m.variant.is_closed_form() {
        let point = match closed_form_dw(&m.variant) {
            Err(Error::NotAGenerator { .. }) => {
                let c = condition_c(&m.g, BoundaryMethod::Certified, DEFAULT_TOL);
                return Err(Error::NotAGenerator { boundary_max: c.boundary_max });
            }
            other => other?,
        };
        return Ok(DenjoyWolff { point, boundary: point.norm() >= 1.0 - 1e-12, numeric: false });
    }
    let c = condition_c(&m.g, BoundaryMethod::Certified, DEFAULT_TOL);
    if !c.pass {
        return Err(Error::NotAGenerator { boundary_max: c.boundary_max });
    }
    let ctrl = StepControl::default();
    let mut w = ZERO;
    let mut elapsed = 0.0;
    let mut previous_modulus = 0.0;
    for k in 0..=DW_MAX_DOUBLINGS {
        let target = (1u32 << k) as f64;
        let traj = integrate_flow(&m.g, target - elapsed, w, &ctrl)?;
        let (_, next) = traj.end();
        elapsed = target;
        let movement = (next - w).norm();
        let outward = next.norm() > previous_modulus;
        previous_modulus = next.norm();
        w = next;
        if traj.exited || (next.norm() > 1.0 - DW_BOUNDARY_BAND && outward && movement > 0.0) {
            if traj.exited || movement < DW_BOUNDARY_BAND {
                return Ok(DenjoyWolff { point: w / w.norm(), boundary: true, numeric: true });
            }
            continue;
        }
        if movement < DW_MOVEMENT_TOL {
            return Ok(DenjoyWolff { point: w, boundary: false, numeric: true });
        }
    }
    if w.norm() > 1.0 - DW_BOUNDARY_BAND {
        return Ok(DenjoyWolff { point: w / w.norm(), boundary: true, numeric: true });
    }
    Err(Error::NoConvergence)
}

/// Taylor coefficients of `φ_t` through order `order`.
///
/// Linear models are exact; other closed forms use a Cauchy integral on a
/// circle of radius just below 1; numeric models integrate the coefficient
/// system `Φ' = G ∘ Φ`.
pub fn flow_series(m: &SemiflowModel, t: f64, order: usize) -> Result<TruncatedSeries> {
    check_inputs(t, ZERO)?;
    let len = order + 1;
    if t == 0.0 {
        return Ok(TruncatedSeries::identity().resized(len));
    }
    match m.variant {
        FlowVariant::LinearAB { a, b } => {
            let at = a * t;
            TruncatedSeries::new(vec![b / a * exp_m1(at), at.exp()]).map(|s| s.resized(len))
        }
        FlowVariant::Numeric => numeric_flow_series(&m.g, t, len),
        _ => cauchy_coefficients(|z| evaluate_flow(m, t, z), len),
    }
}

fn cauchy_coefficients<F: Fn(Complex64) -> Result<Complex64>>(f: F, len: usize) -> Result<TruncatedSeries> {
    let rho = (-3.0 / len as f64).exp();
    let m = (16 * len).max(256).next_power_of_two();
    let twiddle: Vec<Complex64> = (0..m).map(|j| Complex64::from_polar(1.0, -TAU * j as f64 / m as f64)).collect();
    let values = (0..m)
        .map(|j| f(Complex64::from_polar(rho, TAU * j as f64 / m as f64)))
        .collect::<Result<Vec<_>>>()?;
    let mut coeffs = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc = ZERO;
        for (j, &v) in values.iter().enumerate() {
            acc += v * twiddle[(j * n) % m];
        }
        coeffs.push(acc / (m as f64 * rho.powi(n as i32)));
    }
    Ok(TruncatedSeries::new(coeffs)?.with_truncated(true))
}

fn numeric_flow_series(g: &TruncatedSeries, t: f64, len: usize) -> Result<TruncatedSeries> {
    let mut y0 = vec![ZERO; len];
    if len > 1 {
        y0[1] = ONE;
    }
    let limit = 1.0 - EXIT_MARGIN;
    let end = ode::solve(
        |y, dy| {
            let composed = TruncatedSeries::new(y.to_vec()).and_then(|phi| g.compose(&phi, len));
            match composed {
                Ok(s) => {
                    for (i, d) in dy.iter_mut().enumerate() {
                        *d = s.coeff(i);
                    }
                }
                Err(_) => dy.fill(Complex64::new(f64::NAN, f64::NAN)),
            }
        },
        &y0,
        t,
        &StepControl::default(),
        |y| y[0].norm() < limit,
        |_, _| {},
    )?;
    if end.exited {
        return Err(Error::BoundaryExit { t: end.t, modulus: end.y[0].norm() });
    }
    Ok(TruncatedSeries::new(end.y)?.with_truncated(true))
}
