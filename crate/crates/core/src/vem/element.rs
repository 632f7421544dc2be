use alloc::format;
use alloc::vec::Vec;

use crate::geometry::{Point2, Polygon};
use crate::quadrature::{polygon_monomial_moments, ScaledMonomialBasis};
use crate::{Error, Result};

/// Polynomial degree of the method. Only k = 1 and k = 2 are implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree(u8);

impl Degree {
    pub const ONE: Degree = Degree(1);
    pub const TWO: Degree = Degree(2);

    pub fn new(k: u32) -> Result<Self> {
        match k {
            1 | 2 => Ok(Degree(k as u8)),
            _ => Err(Error::InvalidParameter(format!(
                "degree k = {k} is not supported (use 1 or 2)"
            ))),
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Vertex(usize),
    /// Midpoint of local edge i.
    EdgeMidpoint(usize),
    /// Cell-mean node.
    Moment,
}

/// Local numbering of scalar nodes and vector DOFs of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofLayout {
    pub degree: Degree,
    pub num_vertices: usize,
}

impl DofLayout {
    pub fn new(degree: Degree, num_vertices: usize) -> Self {
        Self {
            degree,
            num_vertices,
        }
    }

    pub fn num_nodes(&self) -> usize {
        match self.degree.get() {
            1 => self.num_vertices,
            _ => 2 * self.num_vertices + 1,
        }
    }

    pub fn num_dofs(&self) -> usize {
        2 * self.num_nodes()
    }

    /// Boundary nodes, i.e. vertices and edge midpoints.
    pub fn num_boundary_nodes(&self) -> usize {
        match self.degree.get() {
            1 => self.num_vertices,
            _ => 2 * self.num_vertices,
        }
    }

    pub fn node_kind(&self, node: usize) -> NodeKind {
        let n = self.num_vertices;
        if node < n {
            NodeKind::Vertex(node)
        } else if node < 2 * n {
            NodeKind::EdgeMidpoint(node - n)
        } else {
            NodeKind::Moment
        }
    }

    pub fn moment_node(&self) -> Option<usize> {
        (self.degree.get() == 2).then_some(2 * self.num_vertices)
    }

    /// Scalar nodes on local edge i in the order start, [midpoint], end, with
    /// their parameter along the edge.
    pub fn edge_nodes(&self, i: usize) -> Vec<(usize, f64)> {
        let n = self.num_vertices;
        let j = (i + 1) % n;
        match self.degree.get() {
            1 => alloc::vec![(i, 0.0), (j, 1.0)],
            _ => alloc::vec![(i, 0.0), (n + i, 0.5), (j, 1.0)],
        }
    }

    pub fn dof(node: usize, comp: usize) -> usize {
        2 * node + comp
    }
}

/// Lagrange basis of degree k on [0, 1] at parameter t, ordered like
/// [`DofLayout::edge_nodes`].
pub(crate) fn edge_shape(k: usize, t: f64) -> Vec<f64> {
    if k == 1 {
        alloc::vec![1.0 - t, t]
    } else {
        alloc::vec![
            (2.0 * t - 1.0) * (t - 1.0),
            4.0 * t * (1.0 - t),
            t * (2.0 * t - 1.0)
        ]
    }
}

/// d/dt of [`edge_shape`].
pub(crate) fn edge_shape_dt(k: usize, t: f64) -> Vec<f64> {
    if k == 1 {
        alloc::vec![-1.0, 1.0]
    } else {
        alloc::vec![4.0 * t - 3.0, 4.0 - 8.0 * t, 4.0 * t - 1.0]
    }
}

/// A cell with everything that depends only on its geometry and k.
#[derive(Debug, Clone)]
pub struct Element {
    pub polygon: Polygon,
    pub layout: DofLayout,
    /// Basis of P_k.
    pub basis: ScaledMonomialBasis,
    pub area: f64,
    pub diameter: f64,
    pub perimeter: f64,
    /// ∫_E m_α for all scaled monomials of degree <= 2k.
    pub moments: Vec<f64>,
}

impl Element {
    pub fn new(polygon: Polygon, degree: Degree) -> Result<Self> {
        if polygon.len() < 3 {
            return Err(Error::DegenerateGeometry("cell has fewer than 3 vertices"));
        }
        let area = polygon.signed_area();
        if !(area > 0.0) {
            return Err(Error::DegenerateGeometry("cell is not counter-clockwise"));
        }
        if polygon.edges().any(|(a, b)| !(a.dist(b) > 0.0)) {
            return Err(Error::DegenerateGeometry("zero-length edge"));
        }
        let k = degree.get();
        let basis = ScaledMonomialBasis::for_polygon(&polygon, k);
        let moments = polygon_monomial_moments(&polygon, &basis, 2 * k)?;
        Ok(Self {
            layout: DofLayout::new(degree, polygon.len()),
            diameter: basis.scale,
            perimeter: polygon.perimeter(),
            area,
            basis,
            moments,
            polygon,
        })
    }

    pub fn k(&self) -> usize {
        self.layout.degree.get()
    }

    pub fn num_dofs(&self) -> usize {
        self.layout.num_dofs()
    }

    /// Dimension of the vector space [P_k]^2.
    pub fn num_poly(&self) -> usize {
        2 * self.basis.dim()
    }

    /// ∫_E m_a m_b for monomial indices a, b (product degree <= 2k).
    pub fn moment_of_product(&self, a: usize, b: usize) -> f64 {
        let ea = self.basis.exponents()[a];
        let eb = self.basis.exponents()[b];
        self.moments[ScaledMonomialBasis::index_of(ea.0 + eb.0, ea.1 + eb.1)]
    }

    /// ∫_E m_(a,b) for exponents of degree <= 2k.
    pub fn moment(&self, a: u32, b: u32) -> f64 {
        self.moments[ScaledMonomialBasis::index_of(a, b)]
    }

    /// Physical location of a boundary node.
    pub fn node_point(&self, node: usize) -> Point2 {
        match self.layout.node_kind(node) {
            NodeKind::Vertex(i) => self.polygon.vertex(i),
            NodeKind::EdgeMidpoint(i) => {
                let (a, b) = self.polygon.edge(i);
                a.lerp(b, 0.5)
            }
            NodeKind::Moment => self.basis.center,
        }
    }

    /// Mass matrix ∫_E m_a m_b over the first `dim` monomials.
    pub(crate) fn mass(&self, dim: usize) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(dim, dim, |a, b| self.moment_of_product(a, b))
    }
}
