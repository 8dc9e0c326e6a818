//! Periodic staircase reductions of the quad equation.
//!
//! The 3-vertex staircase gives a discrete harmonic oscillator in
//! `x = u1 - u0`; the 6-vertex staircase gives two coupled oscillators.
//! Maps are obtained by solving the lattice equations for the shifted
//! vertices and projecting onto differences.

pub mod flows;
pub mod maps;
pub mod p3;
pub mod solutions;

pub use maps::{
    bar_map, bar_matrix, commutator_residual, corner_residuals, hat_map, hat_matrix,
    invariant_common, invariant_eval, momentum_a, momentum_b, oneform_closure_residual, State2,
    StepLagrangian,
};
