#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiflow_core::series::TruncatedSeries;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(coeffs: &[f64]) -> TruncatedSeries {
    TruncatedSeries::from_real(coeffs).unwrap()
}

pub fn series(coeffs: Vec<Complex64>) -> TruncatedSeries {
    TruncatedSeries::new(coeffs).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the disc of radius `r`.
pub fn point_in_disc(rng: &mut impl Rng, r: f64) -> Complex64 {
    let rad = r * rng.gen::<f64>().sqrt();
    Complex64::from_polar(rad, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Coefficients with modulus at most `bound`, uniform in the square.
pub fn random_poly(rng: &mut impl Rng, degree: usize, bound: f64) -> TruncatedSeries {
    let coeffs = (0..=degree)
        .map(|_| loop {
            let z = c(rng.gen_range(-bound..bound), rng.gen_range(-bound..bound));
            if z.norm() <= bound {
                break z;
            }
        })
        .collect();
    series(coeffs)
}

/// `az + b` with `Re a < 0` and `|b| ≤ −Re a`: the linear generators.
pub fn random_linear_generator(rng: &mut impl Rng) -> TruncatedSeries {
    let a = c(-rng.gen_range(0.2..1.5), rng.gen_range(-1.0..1.0));
    let b = point_in_disc(rng, -a.re * 0.95);
    series(vec![b, a])
}

/// `F (ᾱz − 1)(z − α)` with constant `Re F > 0` and `|α| < 0.9`.
pub fn random_quadratic_generator(rng: &mut impl Rng) -> TruncatedSeries {
    let alpha = point_in_disc(rng, 0.9);
    let f = c(rng.gen_range(0.2..1.5), rng.gen_range(-1.0..1.0));
    series(vec![f * alpha, -f * (1.0 + alpha.norm_sqr()), f * alpha.conj()])
}

/// Fixed-step classical RK4 for `w' = G(w)`, the reference integrator.
pub fn rk4(g: &TruncatedSeries, z0: Complex64, t: f64, steps: usize) -> Complex64 {
    let h = t / steps as f64;
    let mut w = z0;
    for _ in 0..steps {
        let k1 = g.eval(w);
        let k2 = g.eval(w + k1 * (h / 2.0));
        let k3 = g.eval(w + k2 * (h / 2.0));
        let k4 = g.eval(w + k3 * h);
        w += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    w
}

/// Dense sampling of `max_θ Re(e^{−iθ} G(e^{iθ}))` straight from `G`.
pub fn boundary_max_oracle(g: &TruncatedSeries, samples: usize) -> f64 {
    (0..samples)
        .map(|j| {
            let u = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / samples as f64);
            (u.conj() * g.eval(u)).re
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `G(z) = −z + z²/√3 − z³/√3`.
pub fn cubic_example() -> TruncatedSeries {
    let s = 3f64.sqrt();
    real(&[0.0, -1.0, 1.0 / s, -1.0 / s])
}
