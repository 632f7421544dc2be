use super::errors::error_norms;
use super::manufactured::{ExactSolution, PolynomialSolution};
use crate::geometry::Mesh;
use crate::solver::{solve_problem, Discretization, LinearSolver};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchResult {
    pub rel_l2: f64,
    pub rel_h1: f64,
}

/// Solves with the polynomial as Dirichlet data and matching load, and
/// reports projected errors relative to the polynomial's norms.
pub fn patch_test(
    mesh: &Mesh,
    disc: &Discretization,
    exact: &PolynomialSolution,
    lin: &dyn LinearSolver,
) -> Result<PatchResult> {
    let (map, sol) = solve_problem(mesh, disc, &|p| exact.f(p), &|p| exact.u(p), lin)?;
    let (e0, e1) = error_norms(mesh, &map, &disc.material, exact, &sol.dofs)?;
    let zeros = alloc::vec![0.0; map.num_dofs()];
    let (n0, n1) = error_norms(mesh, &map, &disc.material, exact, &zeros)?;
    Ok(PatchResult {
        rel_l2: e0 / n0,
        rel_h1: if n1 > 0.0 { e1 / n1 } else { e1 },
    })
}
