//! Clipped Voronoi tessellations with Lloyd relaxation.
//!
//! The region is a union of axis-aligned rectangles with disjoint interiors.
//! Each Voronoi cell is clipped against every rectangle separately and the
//! pieces are glued back together along their shared sides.

use alloc::vec::Vec;

use super::{point_segment_distance, Point2, Polygon};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Rect {
    pub lo: Point2,
    pub hi: Point2,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self {
            lo: Point2::new(x0, y0),
            hi: Point2::new(x1, y1),
        }
    }

    fn polygon(&self) -> Vec<Point2> {
        alloc::vec![
            self.lo,
            Point2::new(self.hi.x, self.lo.y),
            self.hi,
            Point2::new(self.lo.x, self.hi.y),
        ]
    }

    fn contains(&self, p: Point2) -> bool {
        p.x >= self.lo.x && p.x <= self.hi.x && p.y >= self.lo.y && p.y <= self.hi.y
    }

    fn area(&self) -> f64 {
        (self.hi.x - self.lo.x) * (self.hi.y - self.lo.y)
    }
}

/// Keeps the part of a convex polygon with `normal · x <= offset`.
fn clip_halfplane(poly: &[Point2], normal: Point2, offset: f64) -> Vec<Point2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let fp = normal.dot(p) - offset;
        let fq = normal.dot(q) - offset;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push(p.lerp(q, t));
        }
    }
    out
}

struct SeedGrid {
    lo: Point2,
    size: f64,
    nx: usize,
    ny: usize,
    bins: Vec<Vec<usize>>,
}

impl SeedGrid {
    fn new(seeds: &[Point2], lo: Point2, hi: Point2) -> Self {
        let side = (math::sqrt(seeds.len() as f64) as usize).max(1);
        let size = ((hi.x - lo.x).max(hi.y - lo.y) / side as f64).max(f64::MIN_POSITIVE);
        let nx = (((hi.x - lo.x) / size) as usize + 1).max(1);
        let ny = (((hi.y - lo.y) / size) as usize + 1).max(1);
        let mut grid = Self {
            lo,
            size,
            nx,
            ny,
            bins: alloc::vec![Vec::new(); nx * ny],
        };
        for (i, &s) in seeds.iter().enumerate() {
            let (bx, by) = grid.bin_of(s);
            grid.bins[by * nx + bx].push(i);
        }
        grid
    }

    fn bin_of(&self, p: Point2) -> (usize, usize) {
        let bx = (math::floor((p.x - self.lo.x) / self.size).max(0.0) as usize).min(self.nx - 1);
        let by = (math::floor((p.y - self.lo.y) / self.size).max(0.0) as usize).min(self.ny - 1);
        (bx, by)
    }

    /// Seeds in the ring of bins at Chebyshev distance `r` around `center`.
    fn ring(&self, center: (usize, usize), r: usize, out: &mut Vec<usize>) -> bool {
        out.clear();
        let (cx, cy) = (center.0 as i64, center.1 as i64);
        let r = r as i64;
        let mut any_bin = false;
        for by in cy - r..=cy + r {
            for bx in cx - r..=cx + r {
                if (by - cy).abs() != r && (bx - cx).abs() != r {
                    continue;
                }
                if bx < 0 || by < 0 || bx >= self.nx as i64 || by >= self.ny as i64 {
                    continue;
                }
                any_bin = true;
                out.extend_from_slice(&self.bins[by as usize * self.nx + bx as usize]);
            }
        }
        any_bin
    }
}

/// Clips `piece` to the Voronoi cell of seed `i`.
fn clip_to_cell(i: usize, seeds: &[Point2], grid: &SeedGrid, piece: &Rect) -> Vec<Point2> {
    let s = seeds[i];
    let mut poly = piece.polygon();
    let center = grid.bin_of(s);
    let mut ring = Vec::new();
    let mut r = 0usize;
    loop {
        let any = grid.ring(center, r, &mut ring);
        for &j in &ring {
            if j == i {
                continue;
            }
            let d = seeds[j] - s;
            let m = (s + seeds[j]) * 0.5;
            poly = clip_halfplane(&poly, d, d.dot(m));
            if poly.is_empty() {
                return poly;
            }
        }
        let reach = poly.iter().map(|&p| p.dist(s)).fold(0.0, f64::max);
        // unvisited seeds are at least r * size away
        if !any || (r as f64) * grid.size > 2.0 * reach {
            return poly;
        }
        r += 1;
    }
}

/// Voronoi cells of `seeds` restricted to the union of `pieces`. A cell that
/// falls apart into disconnected pieces yields several polygons; the one
/// containing the seed comes first.
pub(crate) fn clipped_voronoi(seeds: &[Point2], pieces: &[Rect]) -> Vec<Vec<Vec<Point2>>> {
    let mut lo = pieces[0].lo;
    let mut hi = pieces[0].hi;
    for p in pieces {
        lo.x = lo.x.min(p.lo.x);
        lo.y = lo.y.min(p.lo.y);
        hi.x = hi.x.max(p.hi.x);
        hi.y = hi.y.max(p.hi.y);
    }
    let grid = SeedGrid::new(seeds, lo, hi);
    let scale = (hi.x - lo.x).max(hi.y - lo.y);
    let tol = 1e-12 * scale;
    (0..seeds.len())
        .map(|i| {
            let mut parts: Vec<Vec<Point2>> = pieces
                .iter()
                .map(|piece| clip_to_cell(i, seeds, &grid, piece))
                .filter(|p| {
                    p.len() >= 3 && Polygon::new(p.clone()).area() > 1e-14 * piece_area(pieces)
                })
                .collect();
            let mut merged = true;
            while merged && parts.len() > 1 {
                merged = false;
                'outer: for a in 0..parts.len() {
                    for b in a + 1..parts.len() {
                        if let Some(u) = merge_polygons(&parts[a], &parts[b], tol) {
                            parts[a] = u;
                            parts.remove(b);
                            merged = true;
                            break 'outer;
                        }
                    }
                }
            }
            if let Some(k) = parts
                .iter()
                .position(|p| Polygon::new(p.clone()).contains_strictly(seeds[i], 0.0))
            {
                parts.swap(0, k);
            }
            parts
        })
        .collect()
}

fn piece_area(pieces: &[Rect]) -> f64 {
    pieces.iter().map(Rect::area).sum()
}

/// Moves every seed to the centroid of its cell, `iterations` times. Seeds
/// whose centroid leaves the region stay put.
pub(crate) fn lloyd(mut seeds: Vec<Point2>, pieces: &[Rect], iterations: usize) -> Vec<Point2> {
    for _ in 0..iterations {
        let cells = clipped_voronoi(&seeds, pieces);
        for (seed, parts) in seeds.iter_mut().zip(cells) {
            if let Some(first) = parts.first() {
                let c = Polygon::new(first.clone()).centroid();
                if pieces.iter().any(|r| r.contains(c)) {
                    *seed = c;
                }
            }
        }
    }
    seeds
}

/// Union of two counter-clockwise polygons that share part of their
/// boundary. Returns `None` when they share no boundary segment.
fn merge_polygons(p: &[Point2], q: &[Point2], tol: f64) -> Option<Vec<Point2>> {
    let p = with_points_on_edges(p, q, tol);
    let q = with_points_on_edges(q, &p, tol);
    let same = |a: Point2, b: Point2| a.dist(b) <= tol;
    let directed = |poly: &[Point2]| -> Vec<(Point2, Point2)> {
        (0..poly.len())
            .map(|i| (poly[i], poly[(i + 1) % poly.len()]))
            .collect()
    };
    let mut ep = directed(&p);
    let mut eq = directed(&q);
    let mut removed = false;
    let mut i = 0;
    while i < ep.len() {
        let (a, b) = ep[i];
        if let Some(j) = eq.iter().position(|&(c, d)| same(a, d) && same(b, c)) {
            ep.remove(i);
            eq.remove(j);
            removed = true;
        } else {
            i += 1;
        }
    }
    if !removed {
        return None;
    }
    let mut edges = ep;
    edges.extend(eq);
    let mut out = Vec::with_capacity(edges.len());
    let (start, mut end) = edges.remove(0);
    out.push(start);
    while !edges.is_empty() {
        if same(end, start) {
            return None;
        }
        let k = edges.iter().position(|&(a, _)| same(a, end))?;
        let (a, b) = edges.remove(k);
        out.push(a);
        end = b;
    }
    if !same(end, start) {
        return None;
    }
    Some(out)
}

/// Copies `poly`, adding vertices of `other` that lie inside its edges.
fn with_points_on_edges(poly: &[Point2], other: &[Point2], tol: f64) -> Vec<Point2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + other.len());
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        out.push(a);
        let len = a.dist(b);
        let mut hits: Vec<(f64, Point2)> = other
            .iter()
            .filter_map(|&v| {
                let t = (v - a).dot(b - a) / (len * len);
                (t * len > tol && (1.0 - t) * len > tol && point_segment_distance(v, a, b) <= tol)
                    .then_some((t, v))
            })
            .collect();
        hits.sort_by(|x, y| x.0.total_cmp(&y.0));
        out.extend(hits.into_iter().map(|(_, v)| v));
    }
    out
}
