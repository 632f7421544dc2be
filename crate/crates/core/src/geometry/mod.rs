//! Polygonal meshes: data model, generators, small-edge splitting, metrics
//! and validation.

mod conform;
mod generate;
mod metrics;
mod split;
mod validate;
mod voronoi;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::math;

pub use generate::{generate_mesh, Domain, MeshKind};
pub use metrics::{mesh_metrics, CellMetrics, MeshMetrics};
pub use split::{split_edges_small, DEFAULT_EDGE_FRACTION};
pub use validate::{tiling_defect, validate_mesh, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        math::hypot(self.x, self.y)
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn lerp(self, other: Self, t: f64) -> Self {
        Self::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

/// A polygonal cell given by counter-clockwise vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub vertex_ids: Vec<usize>,
}

impl Cell {
    pub fn new(vertex_ids: Vec<usize>) -> Self {
        Self { vertex_ids }
    }

    pub fn len(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_ids.is_empty()
    }

    /// Local edge `i` as the global vertex pair (V_i, V_{i+1}).
    pub fn edge(&self, i: usize) -> (usize, usize) {
        let n = self.vertex_ids.len();
        (self.vertex_ids[i], self.vertex_ids[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_ids.len()).map(move |i| self.edge(i))
    }
}

/// Undirected edge key with the lower vertex index first.
pub fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Cells incident to one undirected edge, as (cell, local edge) pairs.
#[derive(Debug, Clone, Default)]
pub struct EdgeUse {
    pub uses: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point2>,
    pub cells: Vec<Cell>,
    pub boundary_vertex_flags: Vec<bool>,
}

impl Mesh {
    pub fn new(vertices: Vec<Point2>, cells: Vec<Cell>, boundary_vertex_flags: Vec<bool>) -> Self {
        Self {
            vertices,
            cells,
            boundary_vertex_flags,
        }
    }

    /// Builds a mesh and derives the boundary flags from the topology: a
    /// vertex is on the boundary when it touches an edge used by one cell.
    pub fn from_cells(vertices: Vec<Point2>, cells: Vec<Cell>) -> Self {
        let mut mesh = Self::new(vertices, cells, Vec::new());
        mesh.boundary_vertex_flags = mesh.topological_boundary_flags();
        mesh
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn polygon(&self, cell: usize) -> Polygon {
        Polygon::new(
            self.cells[cell]
                .vertex_ids
                .iter()
                .map(|&v| self.vertices[v])
                .collect(),
        )
    }

    /// Undirected edges in ascending key order with their incident cells.
    pub fn edge_table(&self) -> BTreeMap<(usize, usize), EdgeUse> {
        let mut table: BTreeMap<(usize, usize), EdgeUse> = BTreeMap::new();
        for (c, cell) in self.cells.iter().enumerate() {
            for (i, (a, b)) in cell.edges().enumerate() {
                table.entry(edge_key(a, b)).or_default().uses.push((c, i));
            }
        }
        table
    }

    /// (cell, local edge) pairs lying on the domain boundary.
    pub fn boundary_edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .edge_table()
            .values()
            .filter(|e| e.uses.len() == 1)
            .map(|e| e.uses[0])
            .collect();
        out.sort_unstable();
        out
    }

    pub fn topological_boundary_flags(&self) -> Vec<bool> {
        let mut flags = alloc::vec![false; self.vertices.len()];
        for (&(a, b), e) in &self.edge_table() {
            if e.uses.len() == 1 {
                flags[a] = true;
                flags[b] = true;
            }
        }
        flags
    }

    pub fn total_area(&self) -> f64 {
        (0..self.cells.len()).map(|c| self.polygon(c).area()).sum()
    }

    /// Drops vertices not referenced by any cell, renumbering the rest in
    /// their original order.
    pub fn compact(mut self) -> Self {
        let mut used = alloc::vec![false; self.vertices.len()];
        for cell in &self.cells {
            for &v in &cell.vertex_ids {
                used[v] = true;
            }
        }
        let mut remap = alloc::vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        let mut flags = Vec::new();
        for (i, &u) in used.iter().enumerate() {
            if u {
                remap[i] = vertices.len();
                vertices.push(self.vertices[i]);
                flags.push(self.boundary_vertex_flags.get(i).copied().unwrap_or(false));
            }
        }
        for cell in &mut self.cells {
            for v in &mut cell.vertex_ids {
                *v = remap[*v];
            }
        }
        self.vertices = vertices;
        self.boundary_vertex_flags = flags;
        self
    }
}

/// Vertex coordinates of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub vertices: Vec<Point2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point2>) -> Self {
        Self { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` from V_i to V_{i+1}.
    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    /// Shoelace area, positive for counter-clockwise orientation.
    pub fn signed_area(&self) -> f64 {
        let o = self.vertices.first().copied().unwrap_or_default();
        0.5 * self.edges().map(|(a, b)| (a - o).cross(b - o)).sum::<f64>()
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point2 {
        let o = self.vertices.first().copied().unwrap_or_default();
        let mut a2 = 0.0;
        let mut cx = 0.0;
        let mut cy = 0.0;
        for (p, q) in self.edges() {
            let (p, q) = (p - o, q - o);
            let w = p.cross(q);
            a2 += w;
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        if a2 == 0.0 {
            let n = self.vertices.len().max(1) as f64;
            let s = self
                .vertices
                .iter()
                .fold(Point2::default(), |acc, &v| acc + v);
            return s * (1.0 / n);
        }
        Point2::new(o.x + cx / (3.0 * a2), o.y + cy / (3.0 * a2))
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, &a) in self.vertices.iter().enumerate() {
            for &b in &self.vertices[i + 1..] {
                d = d.max(a.dist(b));
            }
        }
        d
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn min_edge(&self) -> f64 {
        self.edges()
            .map(|(a, b)| a.dist(b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Every edge is seen from `p` under a positive angle.
    pub fn is_star_shaped_wrt(&self, p: Point2) -> bool {
        self.edges().all(|(a, b)| (a - p).cross(b - p) > 0.0)
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        let scale = self.diameter().max(f64::MIN_POSITIVE);
        (0..n).all(|i| {
            let a = self.vertex(i);
            let b = self.vertex(i + 1);
            let c = self.vertex(i + 2);
            (b - a).cross(c - b) >= -1e-12 * scale * scale
        })
    }

    /// Winding-number test; points on the boundary count as outside.
    pub fn contains_strictly(&self, p: Point2, tol: f64) -> bool {
        for (a, b) in self.edges() {
            if point_segment_distance(p, a, b) <= tol {
                return false;
            }
        }
        let mut winding = 0i32;
        for (a, b) in self.edges() {
            if a.y <= p.y {
                if b.y > p.y && (b - a).cross(p - a) > 0.0 {
                    winding += 1;
                }
            } else if b.y <= p.y && (b - a).cross(p - a) < 0.0 {
                winding -= 1;
            }
        }
        winding != 0
    }

    pub fn translated(&self, shift: Point2) -> Self {
        Self::new(self.vertices.iter().map(|&v| v + shift).collect())
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }
}

pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a.lerp(b, t))
}

/// Distance from `p` to the infinite line through `a` and `b`.
pub fn point_line_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    (d.cross(p - a)).abs() / d.norm()
}

/// Proper crossing of two segments: interiors intersect in a single point
/// that is not an endpoint of either segment.
pub fn segments_cross(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}
