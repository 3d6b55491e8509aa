//! Dynamical determinants of almost hyperbolic analytic surface maps given
//! by a symbolic model of hyperbolic and parabolic blocks.
//!
//! - [`model`]: symbols, transitions, domains and block maps; JSON files and validation.
//! - [`pinning`]: half-inverse coordinates, iterated along words, and periodic points.
//! - [`determinant`]: trace sums, the cycle-expanded determinant, closed-form products and slit sets.
//! - [`operator`]: contour-quadrature sections of the transfer operator, Fatou coordinates and model operators.
//! - [`cli`]: the `detzeta` command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod determinant;
pub mod model;
pub mod operator;
pub mod pinning;
