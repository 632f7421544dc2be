use alloc::vec::Vec;

use super::element::{DofLayout, Element, NodeKind};
use super::VectorField;
use crate::quadrature::polygon_quadrature;

/// DOFs of the interpolant of a smooth field: nodal values, and for k = 2
/// the cell mean computed at quadrature order 2k + 2.
pub fn interpolate_local(el: &Element, field: VectorField<'_>) -> Vec<f64> {
    let layout = el.layout;
    let mut out = alloc::vec![0.0; layout.num_dofs()];
    for node in 0..layout.num_nodes() {
        let v = match layout.node_kind(node) {
            NodeKind::Moment => {
                let (rule, _) = polygon_quadrature(&el.polygon, 2 * el.k() + 2);
                let mut s = [0.0; 2];
                for (x, w) in rule.points.iter().zip(&rule.weights) {
                    let fx = field(*x);
                    s[0] += w * fx[0];
                    s[1] += w * fx[1];
                }
                [s[0] / el.area, s[1] / el.area]
            }
            _ => field(el.node_point(node)),
        };
        out[DofLayout::dof(node, 0)] = v[0];
        out[DofLayout::dof(node, 1)] = v[1];
    }
    out
}

/// DOFs of the vector polynomial with interleaved scaled-monomial
/// coefficients `coeffs`.
pub fn polynomial_dofs(el: &Element, coeffs: &[f64]) -> Vec<f64> {
    let layout = el.layout;
    let dim = el.basis.dim();
    let mut out = alloc::vec![0.0; layout.num_dofs()];
    for node in 0..layout.num_nodes() {
        let m: Vec<f64> = match layout.node_kind(node) {
            NodeKind::Moment => (0..dim).map(|a| el.moments[a] / el.area).collect(),
            _ => el.basis.eval(el.node_point(node)),
        };
        for c in 0..2 {
            out[DofLayout::dof(node, c)] = (0..dim).map(|a| m[a] * coeffs[2 * a + c]).sum();
        }
    }
    out
}

/// DOFs of (1, 0), (0, 1) and (−(y − y_E), x − x_E).
pub fn rigid_modes(el: &Element) -> [Vec<f64>; 3] {
    let np = el.num_poly();
    let unit = |entries: &[(usize, f64)]| {
        let mut c = alloc::vec![0.0; np];
        for &(i, v) in entries {
            c[i] = v;
        }
        polynomial_dofs(el, &c)
    };
    let h = el.diameter;
    [
        unit(&[(0, 1.0)]),
        unit(&[(1, 1.0)]),
        // m_(0,1) = (y − y_E)/h sits at index 2, m_(1,0) at index 1
        unit(&[(2 * 2, -h), (2 + 1, h)]),
    ]
}
