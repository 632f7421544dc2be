use alloc::vec::Vec;

use nalgebra::DVector;

use super::manufactured::ExactSolution;
use crate::geometry::{Mesh, Point2};
use crate::quadrature::polygon_quadrature;
use crate::solver::GlobalDofMap;
use crate::vem::{energy_projector, Element, Material};
use crate::Result;

/// Calls `visit(cell, element, coefficients of Π u_h)` for every cell.
pub fn for_each_projected_cell(
    mesh: &Mesh,
    map: &GlobalDofMap,
    material: &Material,
    dofs: &[f64],
    mut visit: impl FnMut(usize, &Element, &DVector<f64>),
) -> Result<()> {
    for c in 0..mesh.num_cells() {
        let el = Element::new(mesh.polygon(c), map.degree).map_err(|e| e.in_cell(c))?;
        let proj = energy_projector(&el, material).map_err(|e| e.in_cell(c))?;
        let local =
            DVector::from_iterator(el.num_dofs(), map.cell_dofs[c].iter().map(|&g| dofs[g]));
        visit(c, &el, &(&proj.pi_star * local));
    }
    Ok(())
}

fn eval_projected(el: &Element, coeffs: &DVector<f64>, p: Point2) -> ([f64; 2], [[f64; 2]; 2]) {
    let m = el.basis.eval(p);
    let g = el.basis.eval_grad(p);
    let mut u = [0.0; 2];
    let mut grad = [[0.0; 2]; 2];
    for a in 0..m.len() {
        for c in 0..2 {
            let w = coeffs[2 * a + c];
            u[c] += w * m[a];
            grad[c][0] += w * g[a][0];
            grad[c][1] += w * g[a][1];
        }
    }
    (u, grad)
}

/// (‖u − Π u_h‖_{0,Ω}, |u − Π u_h|_{1,h}) at quadrature order 2k + 2.
pub fn error_norms(
    mesh: &Mesh,
    map: &GlobalDofMap,
    material: &Material,
    exact: &dyn ExactSolution,
    dofs: &[f64],
) -> Result<(f64, f64)> {
    let order = 2 * map.degree.get() + 2;
    let (mut l2, mut h1) = (0.0, 0.0);
    for_each_projected_cell(mesh, map, material, dofs, |_, el, coeffs| {
        let (rule, _) = polygon_quadrature(&el.polygon, order);
        for (x, w) in rule.points.iter().zip(&rule.weights) {
            let (uh, gh) = eval_projected(el, coeffs, *x);
            let u = exact.u(*x);
            let g = exact.grad(*x);
            for c in 0..2 {
                l2 += w * (u[c] - uh[c]) * (u[c] - uh[c]);
                for d in 0..2 {
                    h1 += w * (g[c][d] - gh[c][d]) * (g[c][d] - gh[c][d]);
                }
            }
        }
    })?;
    Ok((crate::math::sqrt(l2), crate::math::sqrt(h1)))
}

/// Π u_h evaluated at every cell centroid.
pub fn projected_samples(
    mesh: &Mesh,
    map: &GlobalDofMap,
    material: &Material,
    dofs: &[f64],
) -> Result<Vec<(Point2, [f64; 2])>> {
    let mut out = Vec::with_capacity(mesh.num_cells());
    for_each_projected_cell(mesh, map, material, dofs, |_, el, coeffs| {
        let c = el.basis.center;
        out.push((c, eval_projected(el, coeffs, c).0));
    })?;
    Ok(out)
}
