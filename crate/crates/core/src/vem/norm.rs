use alloc::vec::Vec;

use super::element::{edge_shape, DofLayout, Element};
use crate::geometry::Point2;
use crate::quadrature::gauss_legendre;
use crate::{Error, Result};

/// A vector polynomial on an edge, in powers of the parameter t ∈ [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgePolynomial {
    pub length: f64,
    /// coeffs[i] multiplies t^i.
    pub coeffs: Vec<[f64; 2]>,
}

impl EdgePolynomial {
    pub fn eval(&self, t: f64) -> [f64; 2] {
        let mut out = [0.0; 2];
        for c in self.coeffs.iter().rev() {
            out = [out[0] * t + c[0], out[1] * t + c[1]];
        }
        out
    }

    /// ‖p‖²_{0,e}.
    pub fn norm_squared(&self) -> f64 {
        let mut s = 0.0;
        for (i, ci) in self.coeffs.iter().enumerate() {
            for (j, cj) in self.coeffs.iter().enumerate() {
                s += (ci[0] * cj[0] + ci[1] * cj[1]) / (i + j + 1) as f64;
            }
        }
        self.length * s
    }
}

/// Π⁰_{k−1,e} of the degree-k edge trace given by its nodal values (start,
/// [midpoint], end).
pub fn edge_l2_projector(
    a: Point2,
    b: Point2,
    trace: &[[f64; 2]],
    k: usize,
) -> Result<EdgePolynomial> {
    let length = a.dist(b);
    if !(length > 0.0) {
        return Err(Error::DegenerateGeometry("zero-length edge"));
    }
    if trace.len() != k + 1 || k == 0 {
        return Err(Error::InvalidParameter(alloc::format!(
            "edge trace of degree {k} needs {} nodal values, got {}",
            k + 1,
            trace.len()
        )));
    }
    let m = k;
    let (nodes, weights) = gauss_legendre(k + 1);
    let mut rhs = nalgebra::DMatrix::<f64>::zeros(m, 2);
    for (s, w) in nodes.iter().zip(&weights) {
        let t = 0.5 * (s + 1.0);
        let phi = edge_shape(k, t);
        let v = phi.iter().zip(trace).fold([0.0; 2], |acc, (p, tv)| {
            [acc[0] + p * tv[0], acc[1] + p * tv[1]]
        });
        let mut ti = 1.0;
        for i in 0..m {
            for c in 0..2 {
                rhs[(i, c)] += 0.5 * w * ti * v[c];
            }
            ti *= t;
        }
    }
    let mass = nalgebra::DMatrix::from_fn(m, m, |i, j| 1.0 / (i + j + 1) as f64);
    let sol = mass
        .lu()
        .solve(&rhs)
        .ok_or(Error::DegenerateGeometry("singular edge mass matrix"))?;
    Ok(EdgePolynomial {
        length,
        coeffs: (0..m).map(|i| [sol[(i, 0)], sol[(i, 1)]]).collect(),
    })
}

/// |||v|||_{k,E}: ‖Π⁰_{k−2} v‖²_{0,E} + h_E Σ_e ‖Π⁰_{k−1,e} v‖²_{0,e}, square-rooted.
pub fn triple_norm(el: &Element, dofs: &[f64]) -> Result<f64> {
    let layout = el.layout;
    let k = el.k();
    let mut sum = 0.0;
    for i in 0..layout.num_vertices {
        let (a, b) = el.polygon.edge(i);
        let trace: Vec<[f64; 2]> = layout
            .edge_nodes(i)
            .iter()
            .map(|&(node, _)| [dofs[DofLayout::dof(node, 0)], dofs[DofLayout::dof(node, 1)]])
            .collect();
        sum += edge_l2_projector(a, b, &trace, k)?.norm_squared();
    }
    sum *= el.diameter;
    if let Some(mn) = layout.moment_node() {
        let (m0, m1) = (dofs[DofLayout::dof(mn, 0)], dofs[DofLayout::dof(mn, 1)]);
        sum += el.area * (m0 * m0 + m1 * m1);
    }
    Ok(crate::math::sqrt(sum))
}
