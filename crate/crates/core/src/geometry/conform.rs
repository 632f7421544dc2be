//! Turns a soup of independently computed polygons into a conforming mesh.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{point_segment_distance, Cell, Mesh, Point2};
use crate::{math, Error, Result};

/// Merges vertices closer than `tol` and inserts vertices that lie on the
/// interior of another cell's edge into that edge, so neighbouring cells
/// share complete edges.
pub(crate) fn conforming_mesh(polygons: &[Vec<Point2>], tol: f64) -> Result<Mesh> {
    let mut welder = Welder::new(tol);
    let mut cells = Vec::with_capacity(polygons.len());
    for poly in polygons {
        let mut ids: Vec<usize> = poly.iter().map(|&p| welder.insert(p)).collect();
        ids.dedup();
        while ids.len() > 1 && ids.first() == ids.last() {
            ids.pop();
        }
        if ids.len() < 3 {
            return Err(Error::DegenerateMesh(format!(
                "polygon collapsed to {} vertices while welding",
                ids.len()
            )));
        }
        cells.push(Cell::new(ids));
    }
    let vertices = welder.points;
    let cells = insert_hanging_vertices(&vertices, cells, tol);
    Ok(Mesh::from_cells(vertices, cells).compact())
}

struct Welder {
    tol: f64,
    points: Vec<Point2>,
    grid: BTreeMap<(i64, i64), Vec<usize>>,
}

impl Welder {
    fn new(tol: f64) -> Self {
        Self {
            tol,
            points: Vec::new(),
            grid: BTreeMap::new(),
        }
    }

    fn key(&self, p: Point2) -> (i64, i64) {
        (
            math::floor(p.x / self.tol) as i64,
            math::floor(p.y / self.tol) as i64,
        )
    }

    fn insert(&mut self, p: Point2) -> usize {
        let (kx, ky) = self.key(p);
        for dy in -1..=1 {
            for dx in -1..=1 {
                if let Some(list) = self.grid.get(&(kx + dx, ky + dy)) {
                    for &i in list {
                        if self.points[i].dist(p) <= self.tol {
                            return i;
                        }
                    }
                }
            }
        }
        let id = self.points.len();
        self.points.push(p);
        self.grid.entry((kx, ky)).or_default().push(id);
        id
    }
}

/// Collapses interior edges shorter than `tol` to their midpoint. Edges
/// touching the boundary are kept, and no cell drops below three vertices.
pub(crate) fn collapse_short_edges(mut mesh: Mesh, tol: f64) -> Mesh {
    loop {
        let nv = mesh.num_vertices();
        let mut target: Vec<usize> = (0..nv).collect();
        let mut touched = alloc::vec![false; nv];
        let mut remaining: Vec<usize> = mesh.cells.iter().map(Cell::len).collect();
        let mut collapsed = false;
        for (&(a, b), e) in &mesh.edge_table() {
            let flags = &mesh.boundary_vertex_flags;
            if flags[a] || flags[b] || touched[a] || touched[b] {
                continue;
            }
            if mesh.vertices[a].dist(mesh.vertices[b]) >= tol
                || e.uses.iter().any(|&(c, _)| remaining[c] <= 3)
            {
                continue;
            }
            mesh.vertices[a] = mesh.vertices[a].lerp(mesh.vertices[b], 0.5);
            target[b] = a;
            touched[a] = true;
            touched[b] = true;
            for &(c, _) in &e.uses {
                remaining[c] -= 1;
            }
            collapsed = true;
        }
        if !collapsed {
            return mesh;
        }
        let cells = mesh
            .cells
            .iter()
            .map(|cell| {
                let mut ids: Vec<usize> = cell.vertex_ids.iter().map(|&v| target[v]).collect();
                ids.dedup();
                while ids.len() > 1 && ids.first() == ids.last() {
                    ids.pop();
                }
                Cell::new(ids)
            })
            .collect();
        mesh = Mesh::from_cells(mesh.vertices, cells).compact();
    }
}

fn insert_hanging_vertices(vertices: &[Point2], cells: Vec<Cell>, tol: f64) -> Vec<Cell> {
    if vertices.is_empty() {
        return cells;
    }
    // bin size from the typical edge length keeps each query local
    let mut total = 0.0;
    let mut count = 0usize;
    for cell in &cells {
        for (a, b) in cell.edges() {
            total += vertices[a].dist(vertices[b]);
            count += 1;
        }
    }
    let bin = (total / count.max(1) as f64).max(tol * 16.0);
    let key = |p: Point2| (math::floor(p.x / bin) as i64, math::floor(p.y / bin) as i64);
    let mut grid: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, &p) in vertices.iter().enumerate() {
        grid.entry(key(p)).or_default().push(i);
    }

    cells
        .into_iter()
        .map(|cell| {
            let mut ids = Vec::with_capacity(cell.len());
            for (a, b) in cell.edges() {
                ids.push(a);
                let (pa, pb) = (vertices[a], vertices[b]);
                let len = pa.dist(pb);
                let (ka, kb) = (key(pa), key(pb));
                let mut hits: Vec<(f64, usize)> = Vec::new();
                for gy in ka.1.min(kb.1) - 1..=ka.1.max(kb.1) + 1 {
                    for gx in ka.0.min(kb.0) - 1..=ka.0.max(kb.0) + 1 {
                        let Some(list) = grid.get(&(gx, gy)) else {
                            continue;
                        };
                        for &v in list {
                            if v == a || v == b {
                                continue;
                            }
                            let p = vertices[v];
                            let t = (p - pa).dot(pb - pa) / (len * len);
                            if t * len > tol
                                && (1.0 - t) * len > tol
                                && point_segment_distance(p, pa, pb) <= tol
                            {
                                hits.push((t, v));
                            }
                        }
                    }
                }
                hits.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
                ids.extend(hits.into_iter().map(|(_, v)| v));
            }
            Cell::new(ids)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::validate_mesh;
    use alloc::vec;

    #[test]
    fn hanging_node_is_inserted() {
        // one big square on the left, two half squares on the right
        let left = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        let lower = vec![
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 0.5),
            Point2::new(1.0, 0.5),
        ];
        let upper = vec![
            Point2::new(1.0, 0.5),
            Point2::new(2.0, 0.5),
            Point2::new(2.0, 1.0),
            Point2::new(1.0, 1.0 + 1e-13),
        ];
        let m = conforming_mesh(&[left, lower, upper], 1e-10).unwrap();
        assert_eq!(m.cells[0].len(), 5);
        assert_eq!(m.num_vertices(), 8);
        assert!(validate_mesh(&m).is_empty());
    }

    #[test]
    fn short_interior_edge_is_collapsed() {
        // 2x2 squares with the centre vertex split into a 1e-6 edge
        let p = |x: f64, y: f64| Point2::new(x, y);
        let (c0, c1) = (p(1.0 - 5e-7, 1.0), p(1.0 + 5e-7, 1.0));
        let polys = vec![
            vec![p(0.0, 0.0), p(1.0, 0.0), c0, p(0.0, 1.0)],
            vec![p(1.0, 0.0), p(2.0, 0.0), p(2.0, 1.0), c1, c0],
            vec![c1, p(2.0, 1.0), p(2.0, 2.0), p(1.0, 2.0)],
            vec![p(0.0, 1.0), c0, c1, p(1.0, 2.0), p(0.0, 2.0)],
        ];
        let m = conforming_mesh(&polys, 1e-10).unwrap();
        assert_eq!(m.num_vertices(), 10);
        let m = collapse_short_edges(m, 1e-3);
        assert_eq!(m.num_vertices(), 9);
        assert!(m.cells.iter().all(|c| c.len() == 4));
        assert!(validate_mesh(&m).is_empty());
        assert!((m.total_area() - 4.0).abs() < 1e-14);
        // boundary edges are left alone however short
        let m2 = collapse_short_edges(m.clone(), 10.0);
        assert_eq!(m2.num_vertices(), 9);
    }
}
