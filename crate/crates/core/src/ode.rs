//! Dormand–Prince 5(4) with adaptive step size for autonomous complex systems.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Steps below this size count as underflow.
    pub h_min: f64,
    /// Upper bound on a single step; `f64::INFINITY` for none.
    pub h_max: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, max_steps: 1_000_000, h_min: 1e-14, h_max: f64::INFINITY }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Final state of an integration run.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveEnd {
    pub t: f64,
    pub y: Vec<Complex64>,
    /// Stopped early because the state left the admissible region.
    pub exited: bool,
    pub steps: usize,
}

struct Workspace {
    k: [Vec<Complex64>; 7],
    tmp: Vec<Complex64>,
    y_new: Vec<Complex64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); n];
        Self {
            k: [z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
            tmp: z.clone(),
            y_new: z,
        }
    }
}

/// One trial step of size `h` from `y` (with `k[0] = f(y)` already set).
/// Leaves the 5th-order result in `ws.y_new` and returns the scaled error norm.
fn trial_step<F>(rhs: &mut F, y: &[Complex64], h: f64, ctrl: &StepControl, ws: &mut Workspace) -> f64
where
    F: FnMut(&[Complex64], &mut [Complex64]),
{
    let n = y.len();
    macro_rules! stage {
        ($dst:expr, $($coef:expr => $idx:expr),+) => {{
            for i in 0..n {
                ws.tmp[i] = y[i] + (Complex64::new(0.0, 0.0) $(+ ws.k[$idx][i] * $coef)+) * h;
            }
            let (head, tail) = ws.k.split_at_mut($dst);
            let _ = head;
            rhs(&ws.tmp, &mut tail[0]);
        }};
    }
    stage!(1, A21 => 0);
    stage!(2, A31 => 0, A32 => 1);
    stage!(3, A41 => 0, A42 => 1, A43 => 2);
    stage!(4, A51 => 0, A52 => 1, A53 => 2, A54 => 3);
    stage!(5, A61 => 0, A62 => 1, A63 => 2, A64 => 3, A65 => 4);
    for i in 0..n {
        ws.y_new[i] = y[i]
            + (ws.k[0][i] * B1 + ws.k[2][i] * B3 + ws.k[3][i] * B4 + ws.k[4][i] * B5 + ws.k[5][i] * B6) * h;
    }
    {
        let (head, tail) = ws.k.split_at_mut(6);
        let _ = head;
        rhs(&ws.y_new, &mut tail[0]);
    }
    let mut acc = 0.0;
    for i in 0..n {
        let e = (ws.k[0][i] * E1
            + ws.k[2][i] * E3
            + ws.k[3][i] * E4
            + ws.k[4][i] * E5
            + ws.k[5][i] * E6
            + ws.k[6][i] * E7)
            * h;
        let sc = ctrl.atol + ctrl.rtol * y[i].norm().max(ws.y_new[i].norm());
        acc += (e.re / sc).powi(2) + (e.im / sc).powi(2);
    }
    (acc / (2 * n.max(1)) as f64).sqrt()
}

/// Integrates `y' = rhs(y)` from `y0` over `[0, t_end]`.
///
/// `inside` marks admissible states. A step that lands outside is shortened
/// by bisection to the last admissible point, which ends the run with
/// `exited = true`. `on_step` sees `(0, y0)` and every accepted step.
pub fn solve<F, I, O>(
    mut rhs: F,
    y0: &[Complex64],
    t_end: f64,
    ctrl: &StepControl,
    inside: I,
    mut on_step: O,
) -> Result<SolveEnd>
where
    F: FnMut(&[Complex64], &mut [Complex64]),
    I: Fn(&[Complex64]) -> bool,
    O: FnMut(f64, &[Complex64]),
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = 0.0;
    on_step(t, &y);
    if t_end <= 0.0 {
        return Ok(SolveEnd { t, y, exited: false, steps: 0 });
    }
    let mut ws = Workspace::new(n);
    rhs(&y, &mut ws.k[0]);

    let scale = |v: &[Complex64]| (v.iter().map(|c| c.norm_sqr()).sum::<f64>() / n.max(1) as f64).sqrt();
    let d0 = scale(&y);
    let d1 = scale(&ws.k[0]);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(t_end).min(ctrl.h_max).max(ctrl.h_min);

    let mut steps = 0usize;
    loop {
        if steps >= ctrl.max_steps {
            return Err(Error::StepLimit { t, max_steps: ctrl.max_steps });
        }
        let last_step = t + h >= t_end;
        if last_step {
            h = t_end - t;
        }
        let err = trial_step(&mut rhs, &y, h, ctrl, &mut ws);
        if !err.is_finite() || err > 1.0 {
            let factor = if err.is_finite() { (0.9 * err.powf(-0.2)).max(0.2) } else { 0.2 };
            h *= factor;
            if h < ctrl.h_min {
                return Err(Error::StepUnderflow { t, last: y.first().copied().unwrap_or_default() });
            }
            continue;
        }
        steps += 1;

        if !inside(&ws.y_new) {
            // bisect on the step length for the last admissible landing point
            let (mut lo, mut hi) = (0.0, h);
            let mut best: Option<Vec<Complex64>> = None;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                trial_step(&mut rhs, &y, mid, ctrl, &mut ws);
                if inside(&ws.y_new) {
                    lo = mid;
                    best = Some(ws.y_new.clone());
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-15 * (1.0 + t) {
                    break;
                }
            }
            if let Some(state) = best {
                t += lo;
                y = state;
                on_step(t, &y);
            }
            return Ok(SolveEnd { t, y, exited: true, steps });
        }

        t = if last_step { t_end } else { t + h };
        core::mem::swap(&mut y, &mut ws.y_new);
        let (first, rest) = ws.k.split_at_mut(1);
        core::mem::swap(&mut first[0], &mut rest[5]);
        on_step(t, &y);
        if last_step {
            return Ok(SolveEnd { t, y, exited: false, steps });
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * factor).min(ctrl.h_max);
        if h < ctrl.h_min {
            return Err(Error::StepUnderflow { t, last: y.first().copied().unwrap_or_default() });
        }
    }
}
