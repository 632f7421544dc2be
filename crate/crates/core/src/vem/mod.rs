//! Per-element virtual element machinery for linear elasticity.
//!
//! Local DOFs of a cell with n vertices are numbered interleaved by
//! component (`2 * node + c`). Nodes are the n vertices, then for k = 2 the
//! n edge midpoints (edge i joins vertex i and i + 1) and the cell node
//! carrying the mean value of each component.

mod element;
mod interp;
mod load;
mod material;
mod norm;
mod projector;
mod stab;
mod stiffness;

pub use element::{Degree, DofLayout, Element, NodeKind};
pub use interp::{interpolate_local, polynomial_dofs, rigid_modes};
pub use load::local_load;
pub use material::{lame_from_young_poisson, Material};
pub use norm::{edge_l2_projector, triple_norm, EdgePolynomial};
pub use projector::{energy_projector, l2_projectors, EnergyProjection, L2Projections};
pub use stab::{stab_classic, stab_derivative, StabKind};
pub use stiffness::{local_stiffness, rigid_kernel_dimension, LocalOperators};

/// A displacement field: point -> (u_1, u_2).
pub type VectorField<'a> = &'a dyn Fn(crate::geometry::Point2) -> [f64; 2];

#[cfg(test)]
mod tests;
