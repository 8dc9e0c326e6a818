#![no_std]
//! Classical and quantum structures of the linear quad lattice equation
//! `(p_i + p_j)(u_i - u_j) = (p_i - p_j)(u - u_ij)`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is a pure function
//! over small value types:
//!
//! - [`params`]: lattice parameters and every derived coefficient.
//! - [`lattice2form`]: quad solving, cube consistency, the Lagrangian 2-form.
//! - [`reduction`]: staircase reductions to commuting symplectic maps.
//! - [`oscgauss`]: exact oscillatory Gaussian kernels and their marginals.
//! - [`qprop1d`]: propagators of the reduced oscillator along time paths.
//! - [`qsurface`]: surface propagators in `Z^3` and their local moves.

extern crate alloc;

mod error;
pub mod lattice2form;
mod linalg;
pub mod oscgauss;
pub mod params;
pub mod qprop1d;
pub mod qsurface;
pub mod reduction;

pub use error::{Error, Result};
pub use linalg::Mat;
pub use num_complex::Complex64;
