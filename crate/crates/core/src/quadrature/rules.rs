use alloc::vec::Vec;

use super::gauss::gauss_legendre;
use crate::geometry::{Point2, Polygon};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuadratureRule {
    pub points: Vec<Point2>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(Point2) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    fn append(&mut self, other: QuadratureRule) {
        self.points.extend(other.points);
        self.weights.extend(other.weights);
    }
}

/// How a polygon rule was triangulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolygonRuleKind {
    /// Fan of triangles from the centroid.
    Fan,
    /// Ear-clipping fallback for cells not star-shaped about the centroid.
    EarClipping,
}

/// Gauss–Legendre rule along the segment, exact for degree <= `order`.
pub fn edge_quadrature(a: Point2, b: Point2, order: usize) -> Result<QuadratureRule> {
    let len = a.dist(b);
    if !(len > 0.0) {
        return Err(Error::DegenerateGeometry("zero-length edge"));
    }
    let (nodes, weights) = gauss_legendre(order / 2 + 1);
    Ok(QuadratureRule {
        points: nodes.iter().map(|&s| a.lerp(b, 0.5 * (s + 1.0))).collect(),
        weights: weights.iter().map(|&w| 0.5 * w * len).collect(),
    })
}

/// Collapsed-square (Duffy) rule on a triangle, exact for total degree
/// <= `order`. All weights are positive for a CCW triangle.
pub fn triangle_quadrature(a: Point2, b: Point2, c: Point2, order: usize) -> QuadratureRule {
    let area2 = (b - a).cross(c - a);
    let (nu, wu) = gauss_legendre((order + 3) / 2);
    let (nv, wv) = gauss_legendre(order / 2 + 1);
    let mut rule = QuadratureRule::default();
    for (&su, &swu) in nu.iter().zip(&wu) {
        let u = 0.5 * (su + 1.0);
        for (&sv, &swv) in nv.iter().zip(&wv) {
            let v = 0.5 * (sv + 1.0);
            let p = a + ((b - a) * (1.0 - v) + (c - a) * v) * u;
            rule.points.push(p);
            rule.weights.push(0.25 * swu * swv * area2 * u);
        }
    }
    rule
}

/// Rule on a simple CCW polygon, exact for total degree <= `order`.
pub fn polygon_quadrature(poly: &Polygon, order: usize) -> (QuadratureRule, PolygonRuleKind) {
    let c = poly.centroid();
    let mut rule = QuadratureRule::default();
    if poly.is_star_shaped_wrt(c) {
        for (a, b) in poly.edges() {
            rule.append(triangle_quadrature(c, a, b, order));
        }
        return (rule, PolygonRuleKind::Fan);
    }
    for [a, b, t] in ear_clip(poly) {
        rule.append(triangle_quadrature(a, b, t, order));
    }
    (rule, PolygonRuleKind::EarClipping)
}

fn ear_clip(poly: &Polygon) -> Vec<[Point2; 3]> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut out = Vec::with_capacity(poly.len().saturating_sub(2));
    let v = |i: usize| poly.vertices[i];
    while idx.len() > 3 {
        let n = idx.len();
        let mut clipped = false;
        for i in 0..n {
            let (ia, ib, ic) = (idx[(i + n - 1) % n], idx[i], idx[(i + 1) % n]);
            let (a, b, c) = (v(ia), v(ib), v(ic));
            if (b - a).cross(c - b) <= 0.0 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                if j == ia || j == ib || j == ic {
                    return false;
                }
                let p = v(j);
                (b - a).cross(p - a) >= 0.0
                    && (c - b).cross(p - b) >= 0.0
                    && (a - c).cross(p - c) >= 0.0
            });
            if blocked {
                continue;
            }
            out.push([a, b, c]);
            idx.remove(i);
            clipped = true;
            break;
        }
        if !clipped {
            // collinear leftovers: drop a zero-area ear so the loop ends
            idx.remove(0);
        }
    }
    if idx.len() == 3 {
        out.push([v(idx[0]), v(idx[1]), v(idx[2])]);
    }
    out
}
