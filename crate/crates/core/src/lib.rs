#![no_std]
// `num_traits::Float` supplies libm-backed float methods in no_std builds;
// inherent methods shadow it whenever std is part of the build
#![allow(unused_imports)]
extern crate alloc;

pub mod boundary;
pub mod conditions;
pub mod error;
pub mod factor;
pub mod flow;
pub mod linalg;
pub mod probes;
pub mod ode;
pub mod section;
pub mod series;
pub mod space;
pub mod toeplitz;
