use core::str::FromStr;

use nalgebra::DMatrix;

use super::element::{edge_shape_dt, DofLayout, Element};
use crate::quadrature::gauss_legendre;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum StabKind {
    /// DOF-identity on the boundary nodal values.
    Classic,
    /// h_E ∫_{∂E} ∂_s w · ∂_s v.
    #[default]
    Derivative,
}

impl StabKind {
    pub const ALL: [StabKind; 2] = [StabKind::Classic, StabKind::Derivative];

    pub fn name(self) -> &'static str {
        match self {
            StabKind::Classic => "dofi",
            StabKind::Derivative => "dtangent",
        }
    }

    pub fn matrix(self, el: &Element) -> DMatrix<f64> {
        match self {
            StabKind::Classic => stab_classic(&el.layout),
            StabKind::Derivative => stab_derivative(el),
        }
    }
}

impl core::fmt::Display for StabKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StabKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "dofi" | "classic" => Ok(StabKind::Classic),
            "dtangent" | "derivative" => Ok(StabKind::Derivative),
            _ => Err(Error::InvalidParameter(alloc::format!(
                "unknown stabilization '{s}' (expected dofi or dtangent)"
            ))),
        }
    }
}

/// Identity on vertex and edge-midpoint DOFs, zero on cell moments.
pub fn stab_classic(layout: &DofLayout) -> DMatrix<f64> {
    let n = layout.num_dofs();
    let mut s = DMatrix::zeros(n, n);
    for i in 0..2 * layout.num_boundary_nodes() {
        s[(i, i)] = 1.0;
    }
    s
}

/// h_E Σ_e ∫_e ∂_s φ_i ∂_s φ_j per component, exact for the degree-k traces.
pub fn stab_derivative(el: &Element) -> DMatrix<f64> {
    let k = el.k();
    let layout = el.layout;
    let n = layout.num_dofs();
    let mut s = DMatrix::zeros(n, n);
    let (nodes_q, weights_q) = gauss_legendre(k);
    for i in 0..layout.num_vertices {
        let (a, b) = el.polygon.edge(i);
        let len = a.dist(b);
        let nodes = layout.edge_nodes(i);
        for (tq, wq) in nodes_q.iter().zip(&weights_q) {
            let t = 0.5 * (tq + 1.0);
            // ds = len dt, ∂_s = ∂_t / len, and dt carries weight wq / 2
            let w = el.diameter * 0.5 * wq / len;
            let ds = edge_shape_dt(k, t);
            for (p, &(ni, _)) in nodes.iter().enumerate() {
                for (q, &(nj, _)) in nodes.iter().enumerate() {
                    let v = w * ds[p] * ds[q];
                    for c in 0..2 {
                        s[(DofLayout::dof(ni, c), DofLayout::dof(nj, c))] += v;
                    }
                }
            }
        }
    }
    s
}
