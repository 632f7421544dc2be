//! Virtual element discretization of the 2D linear elasticity Dirichlet
//! problem on polygonal meshes whose cells may carry arbitrarily small edges.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the direct sparse
//! solver and the command-line driver live in the `polyvem` companion crate.
//!
//! Layout:
//! - [`geometry`]: polygonal meshes, generators, small-edge splitting, metrics, validation.
//! - [`quadrature`]: scaled monomials, exact polygon moments, polygon and edge rules.
//! - [`vem`]: per-element projectors, stabilizations, stiffness, load, interpolation.
//! - [`solver`]: global numbering, sparse assembly, Dirichlet elimination, PCG.
//! - [`study`]: manufactured solutions, error norms, convergence rates, study driver.
//! - [`checks`]: randomized invariant suites.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod checks;
mod error;
pub mod geometry;
mod math;
pub mod quadrature;
pub mod solver;
pub mod study;
pub mod vem;

pub use error::{Error, Result};
pub use geometry::{Cell, Mesh, Point2};
