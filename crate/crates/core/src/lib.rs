//! Semi-analytic solvers for the complex-valued Burgers' equation
//! `u_t - nu * u_xx + u * u_x = 0` on the real line.
//!
//! The equation is split into a sequence of linear diffusion problems whose
//! elements are recovered one by one from a tagged series (see [`transform`]).
//! Three solution routes are implemented and cross-checked:
//!
//! * [`closed_form`] — the Bell-polynomial series for the initial condition
//!   `u(x, 0) = exp(i x)`, together with its Weierstrass term bound.
//! * [`greens_engine`] — a generic numerical realization of the recursive
//!   Green's-function solution for arbitrary periodic initial conditions.
//! * [`reference`] — independent high-accuracy oracles: Cole-Hopf quadrature
//!   and a pseudospectral integrating-factor RK4 time stepper.
//!
//! [`analysis`] reproduces the convergence experiments (truncation sweeps in
//! `N` and viscosity sweeps locating the small-viscosity blow-up) and the
//! ratio-test constant of the term-bound series. [`combinatorics`] holds the
//! exact integer kernels (Stirling numbers, weighted Stirling sums, partial
//! Bell polynomials) everything above is built on.

// Validation guards use `!(x > 0.0)` so NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod closed_form;
pub mod combinatorics;
pub mod error;
pub mod greens_engine;
pub mod grid;
pub mod quadrature;
pub mod reference;
pub mod spectral;
pub mod transform;

pub use error::{BurgersError, Result};
pub use grid::GridField;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
