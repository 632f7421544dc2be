use alloc::vec::Vec;

use crate::geometry::{edge_key, Mesh, Point2};
use crate::vem::{Degree, DofLayout};

/// Geometric carrier of a global scalar node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GlobalNode {
    Vertex(usize),
    /// Midpoint of the edge with the given (low, high) vertex key.
    Edge(usize, usize),
    Cell(usize),
}

/// Global numbering: vertices, then edge midpoints in ascending edge-key
/// order, then cell moments. DOF index = 2 · node + component.
#[derive(Debug, Clone)]
pub struct GlobalDofMap {
    pub degree: Degree,
    pub nodes: Vec<GlobalNode>,
    /// Location of each node; cell nodes sit at the centroid.
    pub node_points: Vec<Point2>,
    pub cell_dofs: Vec<Vec<usize>>,
    pub boundary: Vec<bool>,
}

impl GlobalDofMap {
    pub fn num_dofs(&self) -> usize {
        2 * self.nodes.len()
    }

    pub fn boundary_dofs(&self) -> Vec<usize> {
        (0..self.num_dofs()).filter(|&d| self.boundary[d]).collect()
    }
}

pub fn build_dof_map(mesh: &Mesh, degree: Degree) -> GlobalDofMap {
    let nv = mesh.num_vertices();
    let mut nodes: Vec<GlobalNode> = (0..nv).map(GlobalNode::Vertex).collect();
    let mut node_points = mesh.vertices.clone();
    let mut node_boundary: Vec<bool> = (0..nv)
        .map(|v| mesh.boundary_vertex_flags.get(v).copied().unwrap_or(false))
        .collect();

    let k2 = degree.get() == 2;
    let mut edge_node = alloc::collections::BTreeMap::new();
    if k2 {
        for (&(a, b), uses) in &mesh.edge_table() {
            edge_node.insert((a, b), nodes.len());
            nodes.push(GlobalNode::Edge(a, b));
            node_points.push(mesh.vertices[a].lerp(mesh.vertices[b], 0.5));
            node_boundary.push(uses.uses.len() == 1);
        }
    }

    let mut cell_dofs = Vec::with_capacity(mesh.num_cells());
    for (c, cell) in mesh.cells.iter().enumerate() {
        let layout = DofLayout::new(degree, cell.len());
        let mut local = Vec::with_capacity(layout.num_nodes());
        local.extend(cell.vertex_ids.iter().copied());
        if k2 {
            local.extend(cell.edges().map(|(a, b)| edge_node[&edge_key(a, b)]));
            local.push(nodes.len());
            nodes.push(GlobalNode::Cell(c));
            node_points.push(mesh.polygon(c).centroid());
            node_boundary.push(false);
        }
        cell_dofs.push(local.iter().flat_map(|&n| [2 * n, 2 * n + 1]).collect());
    }

    GlobalDofMap {
        degree,
        nodes,
        node_points,
        cell_dofs,
        boundary: node_boundary.iter().flat_map(|&b| [b, b]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_mesh, Cell, Domain, MeshKind};

    #[test]
    fn square_grid_counts() {
        let mesh = generate_mesh(Domain::UnitSquare, MeshKind::Squares, 2, 0).unwrap();
        let map = build_dof_map(&mesh, Degree::ONE);
        assert_eq!(map.num_dofs(), 18);
        assert_eq!(map.boundary_dofs().len(), 16);
        let map = build_dof_map(&mesh, Degree::TWO);
        // 9 vertices + 12 edges + 4 cells
        assert_eq!(map.num_dofs(), 50);
        assert_eq!(map.boundary_dofs().len(), 2 * (8 + 8));
    }

    #[test]
    fn single_cell_k2() {
        let mesh = generate_mesh(Domain::UnitSquare, MeshKind::Squares, 1, 0).unwrap();
        let map = build_dof_map(&mesh, Degree::TWO);
        assert_eq!(map.num_dofs(), 18);
        let mut local = map.cell_dofs[0].clone();
        local.sort_unstable();
        assert_eq!(local, (0..18).collect::<Vec<_>>());
        assert_eq!(map.boundary_dofs().len(), 16);
    }

    #[test]
    fn shared_edge_numbered_once() {
        let v = alloc::vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0)
        ];
        let mesh = Mesh::from_cells(
            v,
            alloc::vec![
                Cell::new(alloc::vec![0, 1, 2]),
                Cell::new(alloc::vec![0, 2, 3])
            ],
        );
        let map = build_dof_map(&mesh, Degree::TWO);
        // 4 vertices + 5 edges + 2 cells
        assert_eq!(map.nodes.len(), 11);
        // local edge 1→2 of cell 0 and local edge 0→2 of cell 1 meet at (0, 2)
        let shared0 = map.cell_dofs[0][2 * (3 + 2)];
        let shared1 = map.cell_dofs[1][2 * 3];
        assert_eq!(shared0, shared1);
        assert_eq!(map.nodes[shared0 / 2], GlobalNode::Edge(0, 2));
        assert!(!map.boundary[shared0]);
    }
}
