use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::conform::{collapse_short_edges, conforming_mesh};
use super::split::split_edges_small;
use super::validate::{tiling_defect, validate_mesh};
use super::voronoi::{clipped_voronoi, lloyd, Rect};
use super::{Cell, Mesh, Point2};
use crate::{math, Error, Result};

const LLOYD_ITERATIONS: usize = 3;
const SEED_JITTER: f64 = 0.25;
const DEFORMATION: f64 = 0.2;
const WELD_TOL: f64 = 1e-10;
/// Interior Voronoi edges below this fraction of the seed spacing are collapsed.
const COLLAPSE_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    /// (0,1)²
    UnitSquare,
    /// (0,2)² \ [1,2)²
    LShape,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::UnitSquare => "square",
            Domain::LShape => "lshape",
        }
    }

    pub fn area(self) -> f64 {
        match self {
            Domain::UnitSquare => 1.0,
            Domain::LShape => 3.0,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" | "unit_square" => Ok(Domain::UnitSquare),
            "lshape" | "l-shape" => Ok(Domain::LShape),
            _ => Err(Error::InvalidParameter(format!("unknown domain `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeshKind {
    Triangles,
    /// Deformed triangles with a vertex inserted at every edge midpoint.
    DeformedTrianglesMidpoints,
    DeformedSquares,
    Squares,
    Voronoi,
    /// Three independently seeded Voronoi strips glued along x = 1/3, 2/3.
    GluedVoronoi,
}

impl MeshKind {
    pub const ALL: [MeshKind; 6] = [
        MeshKind::Triangles,
        MeshKind::DeformedTrianglesMidpoints,
        MeshKind::DeformedSquares,
        MeshKind::Squares,
        MeshKind::Voronoi,
        MeshKind::GluedVoronoi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeshKind::Triangles => "triangles",
            MeshKind::DeformedTrianglesMidpoints => "tri-mid",
            MeshKind::DeformedSquares => "dsquares",
            MeshKind::Squares => "squares",
            MeshKind::Voronoi => "voronoi",
            MeshKind::GluedVoronoi => "gvoronoi",
        }
    }
}

impl fmt::Display for MeshKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeshKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triangles" => Ok(MeshKind::Triangles),
            "tri-mid" | "deformed_triangles_midpoints" => Ok(MeshKind::DeformedTrianglesMidpoints),
            "dsquares" | "deformed_squares" => Ok(MeshKind::DeformedSquares),
            "squares" => Ok(MeshKind::Squares),
            "voronoi" => Ok(MeshKind::Voronoi),
            "gvoronoi" | "glued_voronoi" => Ok(MeshKind::GluedVoronoi),
            _ => Err(Error::InvalidParameter(format!("unknown mesh kind `{s}`"))),
        }
    }
}

/// Builds a mesh of `domain`. `level` n gives cells of size about 1/n on
/// both domains (n×n squares on the unit square; the L-shape uses the same
/// spacing on (0,2)² with the upper-right quarter removed). The result is
/// a deterministic function of the arguments.
pub fn generate_mesh(domain: Domain, kind: MeshKind, level: usize, seed: u64) -> Result<Mesh> {
    if level == 0 {
        return Err(Error::InvalidParameter(
            "mesh level must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mesh = match kind {
        MeshKind::Squares => structured(domain, level, false),
        MeshKind::Triangles => structured(domain, level, true),
        MeshKind::DeformedSquares => {
            let m = structured(domain, level, false);
            deform(m, DEFORMATION / level as f64, &mut rng)
        }
        MeshKind::DeformedTrianglesMidpoints => {
            let m = structured(domain, level, true);
            let m = deform(m, DEFORMATION / level as f64, &mut rng);
            split_edges_small(&m, 0.5)?
        }
        MeshKind::Voronoi => {
            let (seeds, pieces) = match domain {
                Domain::UnitSquare => (
                    jittered_lattice(
                        Rect::new(0.0, 0.0, 1.0, 1.0),
                        level,
                        level,
                        &mut rng,
                        |_, _| true,
                    ),
                    alloc::vec![Rect::new(0.0, 0.0, 1.0, 1.0)],
                ),
                Domain::LShape => (
                    jittered_lattice(
                        Rect::new(0.0, 0.0, 2.0, 2.0),
                        2 * level,
                        2 * level,
                        &mut rng,
                        |i, j| i < level || j < level,
                    ),
                    alloc::vec![Rect::new(0.0, 0.0, 2.0, 1.0), Rect::new(0.0, 1.0, 1.0, 2.0)],
                ),
            };
            voronoi_polygons(seeds, &pieces, domain, 1.0 / level as f64)?
        }
        MeshKind::GluedVoronoi => {
            if domain != Domain::UnitSquare {
                return Err(Error::UnsupportedMesh {
                    domain: domain.name(),
                    kind: kind.name(),
                });
            }
            let cols = (math::round(level as f64 / 3.0) as usize).max(1);
            let mut polygons = Vec::new();
            for strip in 0..3u64 {
                let rect = Rect::new(strip as f64 / 3.0, 0.0, (strip + 1) as f64 / 3.0, 1.0);
                let mut patch_rng = ChaCha8Rng::seed_from_u64(
                    seed.wrapping_add(strip.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
                );
                let seeds = jittered_lattice(rect, cols, level, &mut patch_rng, |_, _| true);
                let patch =
                    voronoi_polygons(seeds, &[rect], Domain::UnitSquare, 1.0 / level as f64)?;
                polygons.extend((0..patch.num_cells()).map(|c| patch.polygon(c).vertices));
            }
            conforming_mesh(&polygons, WELD_TOL)?
        }
    };
    check_generated(&mesh, domain)?;
    Ok(mesh)
}

fn voronoi_polygons(
    seeds: Vec<Point2>,
    pieces: &[Rect],
    domain: Domain,
    spacing: f64,
) -> Result<Mesh> {
    let seeds = lloyd(seeds, pieces, LLOYD_ITERATIONS);
    let polygons: Vec<Vec<Point2>> = clipped_voronoi(&seeds, pieces)
        .into_iter()
        .flatten()
        .collect();
    let mesh = conforming_mesh(&polygons, WELD_TOL * domain.area())?;
    Ok(collapse_short_edges(mesh, COLLAPSE_FRACTION * spacing))
}

fn check_generated(mesh: &Mesh, domain: Domain) -> Result<()> {
    if let Some(v) = validate_mesh(mesh).first() {
        return Err(Error::DegenerateMesh(format!("{v}")));
    }
    let defect = tiling_defect(mesh, domain.area());
    if defect > 1e-10 {
        return Err(Error::DegenerateMesh(format!(
            "cell areas miss the domain area by {defect:e} (relative)"
        )));
    }
    Ok(())
}

/// n×n cells of size 1/n on the unit square, or the L-shape cut from a
/// 2n×2n grid on (0,2)².
fn structured(domain: Domain, n: usize, triangles: bool) -> Mesh {
    let (cells_per_side, keep): (usize, fn(usize, usize, usize) -> bool) = match domain {
        Domain::UnitSquare => (n, |_, _, _| true),
        Domain::LShape => (2 * n, |i, j, n| i < n || j < n),
    };
    let m = cells_per_side;
    let spacing = 1.0 / n as f64;
    let mut vertices = Vec::with_capacity((m + 1) * (m + 1));
    for j in 0..=m {
        for i in 0..=m {
            vertices.push(Point2::new(i as f64 * spacing, j as f64 * spacing));
        }
    }
    let v = |i: usize, j: usize| j * (m + 1) + i;
    let mut cells = Vec::new();
    for j in 0..m {
        for i in 0..m {
            if !keep(i, j, n) {
                continue;
            }
            if triangles {
                cells.push(Cell::new(alloc::vec![
                    v(i, j),
                    v(i + 1, j),
                    v(i + 1, j + 1)
                ]));
                cells.push(Cell::new(alloc::vec![
                    v(i, j),
                    v(i + 1, j + 1),
                    v(i, j + 1)
                ]));
            } else {
                cells.push(Cell::new(alloc::vec![
                    v(i, j),
                    v(i + 1, j),
                    v(i + 1, j + 1),
                    v(i, j + 1)
                ]));
            }
        }
    }
    Mesh::from_cells(vertices, cells).compact()
}

/// Displaces every interior vertex by a random vector of length below
/// `magnitude`. Boundary vertices stay fixed.
fn deform(mut mesh: Mesh, magnitude: f64, rng: &mut ChaCha8Rng) -> Mesh {
    for (p, &boundary) in mesh.vertices.iter_mut().zip(&mesh.boundary_vertex_flags) {
        let r: f64 = rng.random::<f64>() * magnitude;
        let theta: f64 = rng.random::<f64>() * 2.0 * core::f64::consts::PI;
        if !boundary {
            p.x += r * math::cos(theta);
            p.y += r * math::sin(theta);
        }
    }
    mesh
}

fn jittered_lattice(
    rect: Rect,
    nx: usize,
    ny: usize,
    rng: &mut ChaCha8Rng,
    keep: impl Fn(usize, usize) -> bool,
) -> Vec<Point2> {
    let dx = (rect.hi.x - rect.lo.x) / nx as f64;
    let dy = (rect.hi.y - rect.lo.y) / ny as f64;
    let mut seeds = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let jx = (rng.random::<f64>() * 2.0 - 1.0) * SEED_JITTER;
            let jy = (rng.random::<f64>() * 2.0 - 1.0) * SEED_JITTER;
            if keep(i, j) {
                seeds.push(Point2::new(
                    rect.lo.x + (i as f64 + 0.5 + jx) * dx,
                    rect.lo.y + (j as f64 + 0.5 + jy) * dy,
                ));
            }
        }
    }
    seeds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::mesh_metrics;

    #[test]
    fn squares_level_two() {
        let m = generate_mesh(Domain::UnitSquare, MeshKind::Squares, 2, 0).unwrap();
        assert_eq!(m.num_cells(), 4);
        assert_eq!(m.num_vertices(), 9);
        assert!(m.cells.iter().all(|c| c.len() == 4));
        assert_eq!(m.boundary_vertex_flags.iter().filter(|&&b| b).count(), 8);
    }

    #[test]
    fn triangles_level_one() {
        let m = generate_mesh(Domain::UnitSquare, MeshKind::Triangles, 1, 0).unwrap();
        assert_eq!(m.num_cells(), 2);
        assert!((m.total_area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn voronoi_tiles_square_with_convex_cells() {
        let m = generate_mesh(Domain::UnitSquare, MeshKind::Voronoi, 4, 7).unwrap();
        assert_eq!(m.num_cells(), 16);
        assert!((m.total_area() - 1.0).abs() <= 1e-10);
        assert!((0..m.num_cells()).all(|c| m.polygon(c).is_convex()));
    }

    #[test]
    fn voronoi_interior_edges_are_not_degenerate() {
        let n = 32;
        let m = generate_mesh(Domain::UnitSquare, MeshKind::Voronoi, n, 2024).unwrap();
        let flags = &m.boundary_vertex_flags;
        for &(a, b) in m.edge_table().keys() {
            if !flags[a] && !flags[b] {
                assert!(m.vertices[a].dist(m.vertices[b]) >= COLLAPSE_FRACTION / n as f64);
            }
        }
        assert!((0..m.num_cells()).all(|c| m.polygon(c).is_convex()));
    }

    #[test]
    fn lshape_families() {
        for kind in [
            MeshKind::Squares,
            MeshKind::Triangles,
            MeshKind::DeformedSquares,
            MeshKind::DeformedTrianglesMidpoints,
            MeshKind::Voronoi,
        ] {
            let m = generate_mesh(Domain::LShape, kind, 4, 3).unwrap();
            assert!((m.total_area() - 3.0).abs() < 1e-10, "{kind}");
            for (p, _) in m.vertices.iter().zip(&m.boundary_vertex_flags) {
                assert!(
                    !(p.x > 1.0 + 1e-12 && p.y > 1.0 + 1e-12),
                    "{kind}: vertex in removed square"
                );
            }
        }
        assert_eq!(
            generate_mesh(Domain::LShape, MeshKind::GluedVoronoi, 4, 0),
            Err(Error::UnsupportedMesh {
                domain: "lshape",
                kind: "gvoronoi"
            })
        );
    }

    #[test]
    fn glued_voronoi_has_short_interface_edges() {
        let m = generate_mesh(Domain::UnitSquare, MeshKind::GluedVoronoi, 9, 1).unwrap();
        let mm = mesh_metrics(&m);
        assert!((m.total_area() - 1.0).abs() < 1e-10);
        assert!(mm.min_edge() < 0.05 * mm.h);
    }

    #[test]
    fn deformation_keeps_boundary_and_is_seeded() {
        let a = generate_mesh(Domain::UnitSquare, MeshKind::DeformedSquares, 6, 11).unwrap();
        let b = generate_mesh(Domain::UnitSquare, MeshKind::DeformedSquares, 6, 11).unwrap();
        let c = generate_mesh(Domain::UnitSquare, MeshKind::DeformedSquares, 6, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let s = generate_mesh(Domain::UnitSquare, MeshKind::Squares, 6, 11).unwrap();
        for i in 0..a.num_vertices() {
            let d = a.vertices[i].dist(s.vertices[i]);
            if a.boundary_vertex_flags[i] {
                assert_eq!(d, 0.0);
            } else {
                assert!(d <= 0.2 / 6.0);
            }
        }
    }

    #[test]
    fn tri_mid_cells_are_hexagons() {
        let m = generate_mesh(
            Domain::UnitSquare,
            MeshKind::DeformedTrianglesMidpoints,
            3,
            0,
        )
        .unwrap();
        assert_eq!(m.num_cells(), 18);
        assert!(m.cells.iter().all(|c| c.len() == 6));
    }

    #[test]
    fn level_zero_rejected() {
        assert!(generate_mesh(Domain::UnitSquare, MeshKind::Squares, 0, 0).is_err());
    }
}
