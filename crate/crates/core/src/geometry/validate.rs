use alloc::vec::Vec;
use core::fmt;

use super::{edge_key, segments_cross, Mesh, Polygon};
use crate::math;

/// Relative separation below which two consecutive vertices count as one.
pub const COINCIDENCE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    TooFewVertices {
        cell: usize,
    },
    VertexOutOfRange {
        cell: usize,
        index: usize,
    },
    NonFiniteVertex {
        vertex: usize,
    },
    CoincidentVertices {
        cell: usize,
        local: usize,
    },
    Orientation {
        cell: usize,
        signed_area: f64,
    },
    SelfIntersection {
        cell: usize,
        edges: (usize, usize),
    },
    EdgeOveruse {
        edge: (usize, usize),
        count: usize,
    },
    EdgeSameOrientation {
        edge: (usize, usize),
        cells: (usize, usize),
    },
    Overlap {
        cells: (usize, usize),
    },
    UnusedVertex {
        vertex: usize,
    },
    BoundaryFlag {
        vertex: usize,
        expected: bool,
    },
}

impl Violation {
    pub fn rule(&self) -> &'static str {
        match self {
            Violation::TooFewVertices { .. } => "min-vertices",
            Violation::VertexOutOfRange { .. } => "index-range",
            Violation::NonFiniteVertex { .. } => "finite-coordinates",
            Violation::CoincidentVertices { .. } => "distinct-vertices",
            Violation::Orientation { .. } => "orientation",
            Violation::SelfIntersection { .. } => "simple-polygon",
            Violation::EdgeOveruse { .. } => "edge-sharing",
            Violation::EdgeSameOrientation { .. } => "edge-orientation",
            Violation::Overlap { .. } => "area-sum",
            Violation::UnusedVertex { .. } => "unused-vertex",
            Violation::BoundaryFlag { .. } => "boundary-flag",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.rule())?;
        match self {
            Violation::TooFewVertices { cell } => {
                write!(f, "cell {cell} has fewer than 3 vertices")
            }
            Violation::VertexOutOfRange { cell, index } => {
                write!(f, "cell {cell} references missing vertex {index}")
            }
            Violation::NonFiniteVertex { vertex } => write!(f, "vertex {vertex} is not finite"),
            Violation::CoincidentVertices { cell, local } => {
                write!(
                    f,
                    "cell {cell}: vertices {local} and its successor coincide"
                )
            }
            Violation::Orientation { cell, signed_area } => {
                write!(
                    f,
                    "cell {cell} is not counter-clockwise (signed area {signed_area:e})"
                )
            }
            Violation::SelfIntersection { cell, edges } => {
                write!(f, "cell {cell}: edges {} and {} cross", edges.0, edges.1)
            }
            Violation::EdgeOveruse { edge, count } => {
                write!(f, "edge {}-{} is used by {count} cells", edge.0, edge.1)
            }
            Violation::EdgeSameOrientation { edge, cells } => write!(
                f,
                "edge {}-{} has the same orientation in cells {} and {}",
                edge.0, edge.1, cells.0, cells.1
            ),
            Violation::Overlap { cells } => write!(
                f,
                "cells {} and {} overlap; cell areas exceed the covered area",
                cells.0, cells.1
            ),
            Violation::UnusedVertex { vertex } => write!(f, "vertex {vertex} belongs to no cell"),
            Violation::BoundaryFlag { vertex, expected } => {
                write!(f, "vertex {vertex} boundary flag should be {expected}")
            }
        }
    }
}

/// Lists every broken mesh or cell invariant. An empty list means the mesh
/// is usable by the discretization.
pub fn validate_mesh(mesh: &Mesh) -> Vec<Violation> {
    let mut out = Vec::new();
    let nv = mesh.num_vertices();
    for (i, v) in mesh.vertices.iter().enumerate() {
        if !v.is_finite() {
            out.push(Violation::NonFiniteVertex { vertex: i });
        }
    }
    let mut structurally_ok = true;
    for (c, cell) in mesh.cells.iter().enumerate() {
        if cell.len() < 3 {
            out.push(Violation::TooFewVertices { cell: c });
            structurally_ok = false;
        }
        for &index in &cell.vertex_ids {
            if index >= nv {
                out.push(Violation::VertexOutOfRange { cell: c, index });
                structurally_ok = false;
            }
        }
    }
    if !structurally_ok {
        return out;
    }

    let polygons: Vec<Polygon> = (0..mesh.num_cells()).map(|c| mesh.polygon(c)).collect();
    for (c, poly) in polygons.iter().enumerate() {
        let h = poly.diameter();
        for (i, (a, b)) in poly.edges().enumerate() {
            if a.dist(b) <= COINCIDENCE_TOL * h {
                out.push(Violation::CoincidentVertices { cell: c, local: i });
            }
        }
        let sa = poly.signed_area();
        if !(sa > 0.0) {
            out.push(Violation::Orientation {
                cell: c,
                signed_area: sa,
            });
        }
        let n = poly.len();
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = poly.edge(i);
                let (p, q) = poly.edge(j);
                if segments_cross(a, b, p, q) {
                    out.push(Violation::SelfIntersection {
                        cell: c,
                        edges: (i, j),
                    });
                }
            }
        }
    }

    let table = mesh.edge_table();
    for (&(a, b), e) in &table {
        if e.uses.len() > 2 {
            out.push(Violation::EdgeOveruse {
                edge: (a, b),
                count: e.uses.len(),
            });
        } else if e.uses.len() == 2 {
            let (c0, l0) = e.uses[0];
            let (c1, l1) = e.uses[1];
            if mesh.cells[c0].edge(l0) == mesh.cells[c1].edge(l1) {
                out.push(Violation::EdgeSameOrientation {
                    edge: edge_key(a, b),
                    cells: (c0, c1),
                });
            }
        }
    }

    for cells in overlapping_pairs(&polygons) {
        out.push(Violation::Overlap { cells });
    }

    let mut used = alloc::vec![false; nv];
    for cell in &mesh.cells {
        for &v in &cell.vertex_ids {
            used[v] = true;
        }
    }
    for (vertex, &u) in used.iter().enumerate() {
        if !u {
            out.push(Violation::UnusedVertex { vertex });
        }
    }

    let expected = mesh.topological_boundary_flags();
    for (vertex, &e) in expected.iter().enumerate() {
        let got = mesh
            .boundary_vertex_flags
            .get(vertex)
            .copied()
            .unwrap_or(false);
        if used[vertex] && got != e {
            out.push(Violation::BoundaryFlag {
                vertex,
                expected: e,
            });
        }
    }
    out
}

/// Relative mismatch between the summed cell areas and the domain area.
pub fn tiling_defect(mesh: &Mesh, domain_area: f64) -> f64 {
    (mesh.total_area() - domain_area).abs() / domain_area
}

fn overlapping_pairs(polygons: &[Polygon]) -> Vec<(usize, usize)> {
    if polygons.len() < 2 {
        return Vec::new();
    }
    let boxes: Vec<_> = polygons.iter().map(Polygon::bbox).collect();
    let (mut lo, mut hi) = boxes[0];
    for &(a, b) in &boxes {
        lo.x = lo.x.min(a.x);
        lo.y = lo.y.min(a.y);
        hi.x = hi.x.max(b.x);
        hi.y = hi.y.max(b.y);
    }
    let side = (math::sqrt(polygons.len() as f64) as usize).clamp(1, 512);
    let wx = ((hi.x - lo.x) / side as f64).max(f64::MIN_POSITIVE);
    let wy = ((hi.y - lo.y) / side as f64).max(f64::MIN_POSITIVE);
    let bin = |x: f64, w: f64, o: f64| (((x - o) / w) as usize).min(side - 1);
    let mut bins: Vec<Vec<usize>> = alloc::vec![Vec::new(); side * side];
    for (c, &(a, b)) in boxes.iter().enumerate() {
        for by in bin(a.y, wy, lo.y)..=bin(b.y, wy, lo.y) {
            for bx in bin(a.x, wx, lo.x)..=bin(b.x, wx, lo.x) {
                bins[by * side + bx].push(c);
            }
        }
    }
    let mut candidates = Vec::new();
    for members in &bins {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                candidates.push((a.min(b), a.max(b)));
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    candidates
        .into_iter()
        .filter(|&(a, b)| {
            boxes_overlap(boxes[a], boxes[b]) && polygons_overlap(&polygons[a], &polygons[b])
        })
        .collect()
}

fn boxes_overlap(a: (super::Point2, super::Point2), b: (super::Point2, super::Point2)) -> bool {
    a.0.x < b.1.x && b.0.x < a.1.x && a.0.y < b.1.y && b.0.y < a.1.y
}

fn polygons_overlap(p: &Polygon, q: &Polygon) -> bool {
    for (a, b) in p.edges() {
        for (c, d) in q.edges() {
            if segments_cross(a, b, c, d) {
                return true;
            }
        }
    }
    let tol = 1e-12 * p.diameter().max(q.diameter());
    let inside = |x: &Polygon, y: &Polygon| {
        x.vertices.iter().any(|&v| y.contains_strictly(v, tol))
            || x.edges()
                .any(|(a, b)| y.contains_strictly(a.lerp(b, 0.5), tol))
            || {
                let c = x.centroid();
                x.contains_strictly(c, tol) && y.contains_strictly(c, tol)
            }
    };
    inside(p, q) || inside(q, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Cell, Point2};
    use alloc::vec;

    fn grid2() -> Mesh {
        let mut v = Vec::new();
        for j in 0..3 {
            for i in 0..3 {
                v.push(Point2::new(i as f64 * 0.5, j as f64 * 0.5));
            }
        }
        let cells = vec![
            Cell::new(vec![0, 1, 4, 3]),
            Cell::new(vec![1, 2, 5, 4]),
            Cell::new(vec![3, 4, 7, 6]),
            Cell::new(vec![4, 5, 8, 7]),
        ];
        Mesh::from_cells(v, cells)
    }

    #[test]
    fn valid_grid_has_no_violations() {
        assert!(validate_mesh(&grid2()).is_empty());
    }

    #[test]
    fn clockwise_cell_is_reported() {
        let mut m = grid2();
        m.cells[2].vertex_ids.reverse();
        let v = validate_mesh(&m);
        assert!(v.contains(&Violation::Orientation {
            cell: 2,
            signed_area: -0.25
        }));
    }

    #[test]
    fn overlapping_cells_break_area_sum() {
        let v = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
            Point2::new(0.5, 0.0),
            Point2::new(1.5, 0.0),
            Point2::new(1.5, 1.0),
            Point2::new(0.5, 1.0),
        ];
        let m = Mesh::from_cells(
            v,
            vec![Cell::new(vec![0, 1, 2, 3]), Cell::new(vec![4, 5, 6, 7])],
        );
        let violations = validate_mesh(&m);
        assert!(violations.contains(&Violation::Overlap { cells: (0, 1) }));
        assert!(violations.iter().any(|v| v.rule() == "area-sum"));
        // the sum of the two unit squares exceeds the 1.5 covered
        assert!(tiling_defect(&m, 1.5) > 0.3);
    }

    #[test]
    fn duplicate_cell_is_reported() {
        let mut m = grid2();
        m.cells.push(m.cells[0].clone());
        let violations = validate_mesh(&m);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::Overlap { .. })));
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::EdgeSameOrientation { .. })
                || matches!(v, Violation::EdgeOveruse { .. })));
    }

    #[test]
    fn index_and_flag_errors() {
        let mut m = grid2();
        m.boundary_vertex_flags[4] = true;
        assert_eq!(
            validate_mesh(&m),
            vec![Violation::BoundaryFlag {
                vertex: 4,
                expected: false
            }]
        );
        m.cells[0].vertex_ids[0] = 99;
        assert_eq!(
            validate_mesh(&m),
            vec![Violation::VertexOutOfRange { cell: 0, index: 99 }]
        );
    }

    #[test]
    fn bow_tie_is_not_simple() {
        let m = Mesh::from_cells(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 1.0),
            ],
            vec![Cell::new(vec![0, 2, 3, 1])],
        );
        let v = validate_mesh(&m);
        assert!(v
            .iter()
            .any(|v| matches!(v, Violation::SelfIntersection { .. })));
    }
}
