//! Spectra of multi-parameter biharmonic Steklov eigenvalue problems.
//!
//! The library computes, for a fixed interior coefficient `sigma`, the
//! eigenvalues of two families of fourth-order boundary eigenvalue problems
//! on planar domains — one keeping the boundary-value weight fixed and
//! solving for the normal-derivative weight, one the other way around —
//! together with their limiting problems obtained by forcing the boundary
//! value or the normal derivative to vanish.
//!
//! On the unit disk with `sigma = 0` every eigenvalue lies on an explicit
//! rational branch indexed by the angular mode, which this crate evaluates
//! in closed form and uses as an oracle for the Galerkin path: polynomial
//! trial spaces, exact or exact-for-degree quadrature, and a dense
//! symmetric generalized eigensolver. On top of the spectra sit branch
//! sweeps (monotonicity, Lipschitz bounds, limits), eigenvalue-counting
//! asymptotics, and a boundary-value solver that expands Dirichlet data in
//! the Steklov trace bases and diagnoses when the data resists a
//! well-behaved expansion.

// Negated float comparisons like `!(x > 0.0)` are deliberate: a NaN must
// take the failure path, which `x <= 0.0` would not guarantee.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod ball;
pub mod basis;
pub mod boundary;
pub mod branch;
pub mod dirichlet;
pub mod eigensolver;
pub mod error;
pub mod fmt;
pub mod param;
pub mod poly;
pub mod sequence;
pub mod solver;
pub mod spectrum;
pub mod weyl;

pub use error::{Result, SteklovError};
pub use param::{Geometry, ProblemKind, SigmaParameter, SpectralParameter};
pub use spectrum::Spectrum;
