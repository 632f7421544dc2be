use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{edge_key, Cell, Mesh};
use crate::{Error, Result};

/// Split position used for the small-edge mesh family.
pub const DEFAULT_EDGE_FRACTION: f64 = 1.0 / 50.0;

/// Inserts one point on every edge at arclength `fraction * |e|` from the
/// edge's lower-indexed endpoint, so both cells sharing an edge receive the
/// same point. A triangle becomes a hexagon with the same area.
pub fn split_edges_small(mesh: &Mesh, fraction: f64) -> Result<Mesh> {
    if !(fraction > 0.0 && fraction <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "edge split fraction {fraction} outside (0, 1/2]"
        )));
    }
    let table = mesh.edge_table();
    let mut vertices = mesh.vertices.clone();
    let mut flags = mesh.boundary_vertex_flags.clone();
    flags.resize(vertices.len(), false);
    let mut inserted: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&(a, b), uses) in &table {
        let p = mesh.vertices[a].lerp(mesh.vertices[b], fraction);
        inserted.insert((a, b), vertices.len());
        vertices.push(p);
        flags.push(uses.uses.len() == 1);
    }
    let cells = mesh
        .cells
        .iter()
        .map(|cell| {
            let mut ids = Vec::with_capacity(2 * cell.len());
            for (a, b) in cell.edges() {
                ids.push(a);
                ids.push(inserted[&edge_key(a, b)]);
            }
            Cell::new(ids)
        })
        .collect();
    Ok(Mesh::new(vertices, cells, flags))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{validate_mesh, Point2};
    use alloc::vec;

    fn reference_triangle() -> Mesh {
        Mesh::from_cells(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 1.0),
            ],
            vec![Cell::new(vec![0, 1, 2])],
        )
    }

    #[test]
    fn midpoint_split_gives_hexagon() {
        let m = split_edges_small(&reference_triangle(), 0.5).unwrap();
        assert_eq!(m.cells[0].len(), 6);
        assert!((m.polygon(0).area() - 0.5).abs() < 1e-15);
        assert!(m.vertices.contains(&Point2::new(0.5, 0.5)));
        assert!(validate_mesh(&m).is_empty());
    }

    #[test]
    fn fiftieth_split_lengths() {
        let m = split_edges_small(&reference_triangle(), 1.0 / 50.0).unwrap();
        let poly = m.polygon(0);
        let lengths: Vec<f64> = poly.edges().map(|(a, b)| a.dist(b)).collect();
        // hypotenuse runs from vertex 1 to vertex 2, split near vertex 1
        assert!((lengths[2] - 2f64.sqrt() / 50.0).abs() < 1e-15);
        assert!((poly.min_edge() - 1.0 / 50.0).abs() < 1e-15);
        assert!((poly.area() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn shared_edges_get_one_point() {
        let v = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        let m = Mesh::from_cells(v, vec![Cell::new(vec![0, 1, 2]), Cell::new(vec![0, 2, 3])]);
        let s = split_edges_small(&m, 0.02).unwrap();
        assert_eq!(s.num_vertices(), 4 + 5);
        assert!(validate_mesh(&s).is_empty());
        assert_eq!(s.boundary_vertex_flags, s.topological_boundary_flags());
    }

    #[test]
    fn rejects_bad_fraction() {
        let m = reference_triangle();
        assert!(split_edges_small(&m, 0.0).is_err());
        assert!(split_edges_small(&m, 0.6).is_err());
        assert!(split_edges_small(&m, f64::NAN).is_err());
    }
}
