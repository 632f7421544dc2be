//! Global numbering, assembly, Dirichlet elimination and linear solves.

mod assemble;
mod csr;
mod dirichlet;
mod dofmap;
mod iterative;

pub use assemble::{assemble, SparseSystem};
pub use csr::CsrMatrix;
pub use dirichlet::{apply_dirichlet, ReducedSystem};
pub use dofmap::{build_dof_map, GlobalDofMap, GlobalNode};
pub use iterative::{ConjugateGradient, LinearSolver, SolveReport};

use alloc::format;
use alloc::vec::Vec;

use crate::geometry::Mesh;
use crate::vem::{Degree, Material, StabKind, VectorField};
use crate::{Error, Result};

/// Relative residual every accepted solution must reach.
pub const RESIDUAL_GATE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Solution {
    /// Full global DOF vector, boundary values included.
    pub dofs: Vec<f64>,
    pub report: SolveReport,
}

/// Solves the reduced system and expands it with the boundary values.
pub fn solve(reduced: &ReducedSystem, solver: &dyn LinearSolver) -> Result<Solution> {
    let n = reduced.matrix.nrows();
    if n == 0 {
        return Ok(Solution {
            dofs: reduced.expand(&[]),
            report: SolveReport {
                method: "trivial",
                iterations: 0,
                residual: 0.0,
            },
        });
    }
    let (x, mut report) = solver.solve(&reduced.matrix, &reduced.rhs)?;
    report.residual = relative_residual(&reduced.matrix, &x, &reduced.rhs);
    if !(report.residual <= RESIDUAL_GATE) {
        return Err(Error::Solver(format!(
            "{} left relative residual {:e} above {RESIDUAL_GATE:e}",
            report.method, report.residual
        )));
    }
    Ok(Solution {
        dofs: reduced.expand(&x),
        report,
    })
}

/// ‖A x − b‖ / ‖b‖, or the absolute residual when b = 0.
pub fn relative_residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> f64 {
    let r: f64 = a.residual(x, b).iter().map(|v| v * v).sum();
    let nb: f64 = b.iter().map(|v| v * v).sum();
    let r = crate::math::sqrt(r);
    if nb > 0.0 {
        r / crate::math::sqrt(nb)
    } else {
        r
    }
}

/// Discretization choices for one solve.
#[derive(Debug, Clone, Copy)]
pub struct Discretization {
    pub degree: Degree,
    pub material: Material,
    pub stab: StabKind,
}

/// Assembles, eliminates the Dirichlet data `g` and solves.
pub fn solve_problem(
    mesh: &Mesh,
    disc: &Discretization,
    f: VectorField<'_>,
    g: VectorField<'_>,
    solver: &dyn LinearSolver,
) -> Result<(GlobalDofMap, Solution)> {
    let map = build_dof_map(mesh, disc.degree);
    let system = assemble(mesh, &map, &disc.material, disc.stab, f)?;
    let reduced = apply_dirichlet(&system, &map, g);
    let solution = solve(&reduced, solver)?;
    Ok((map, solution))
}

#[cfg(test)]
mod tests;
