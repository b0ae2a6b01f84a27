use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coefficient {index} is not a finite complex number")]
    NonFinite { index: usize },

    #[error("{what} must lie in the open unit disc, got modulus {modulus}")]
    OutsideDisc { what: &'static str, modulus: f64 },

    #[error("weight sequence fails the kernel-existence check (min beta_n^(1/n) = {min_root})")]
    NoReproducingKernel { min_root: f64 },

    #[error("weight sequence must be non-increasing (increase at index {index})")]
    WeightNotDecreasing { index: usize },

    #[error("custom weight values must be positive and finite")]
    InvalidWeight,

    #[error("the zero function has no Rayleigh quotient")]
    ZeroVector,

    #[error("the zero polynomial is not an admissible generator here")]
    ZeroPolynomial,

    #[error("{0}")]
    InvalidArgument(&'static str),

    #[error("{point} is not a zero of G (residual {residual:e})")]
    NotAZero { point: Complex64, residual: f64 },

    #[error("negative flow time {0}")]
    NegativeTime(f64),

    #[error("closed form is singular at time {t} (denominator vanishes)")]
    SingularTime { t: f64 },

    #[error("trajectory left the disc at t = {t} (|w| = {modulus})")]
    BoundaryExit { t: f64, modulus: f64 },

    #[error("step size underflow at t = {t}, last state {last}")]
    StepUnderflow { t: f64, last: Complex64 },

    #[error("integrator exceeded {max_steps} steps before t = {t}")]
    StepLimit { t: f64, max_steps: usize },

    #[error("flow is an automorphism without an attracting point")]
    Automorphism,

    #[error("G does not generate a semiflow (boundary max {boundary_max})")]
    NotAGenerator { boundary_max: f64 },

    #[error("no Denjoy-Wolff limit found within the search horizon")]
    NoConvergence,

    #[error("eigenvalue iteration did not converge")]
    EigenFailure,
}
