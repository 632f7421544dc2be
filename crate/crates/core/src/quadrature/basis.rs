use alloc::vec::Vec;

use crate::geometry::{Point2, Polygon};
use crate::math;

/// Exponents (a, b) of all monomials of total degree <= `degree`, in
/// graded-lexicographic order: 1, x, y, x², xy, y², ...
pub fn monomial_exponents(degree: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity((degree + 1) * (degree + 2) / 2);
    for d in 0..=degree as u32 {
        for j in 0..=d {
            out.push((d - j, j));
        }
    }
    out
}

/// Monomials ((x - x_E)/h_E)^a ((y - y_E)/h_E)^b centred at the cell
/// centroid and scaled by the cell diameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledMonomialBasis {
    pub center: Point2,
    pub scale: f64,
    pub degree: usize,
    exponents: Vec<(u32, u32)>,
}

impl ScaledMonomialBasis {
    pub fn new(center: Point2, scale: f64, degree: usize) -> Self {
        Self {
            center,
            scale,
            degree,
            exponents: monomial_exponents(degree),
        }
    }

    pub fn for_polygon(poly: &Polygon, degree: usize) -> Self {
        Self::new(poly.centroid(), poly.diameter(), degree)
    }

    /// (k + 1)(k + 2) / 2
    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.exponents
    }

    /// Graded-lex index of x^a y^b.
    pub fn index_of(a: u32, b: u32) -> usize {
        let d = (a + b) as usize;
        d * (d + 1) / 2 + b as usize
    }

    pub fn local(&self, p: Point2) -> (f64, f64) {
        (
            (p.x - self.center.x) / self.scale,
            (p.y - self.center.y) / self.scale,
        )
    }

    pub fn eval(&self, p: Point2) -> Vec<f64> {
        let (x, y) = self.local(p);
        self.exponents
            .iter()
            .map(|&(a, b)| math::powi(x, a) * math::powi(y, b))
            .collect()
    }

    /// Gradients in physical coordinates; each carries a factor 1/h_E.
    pub fn eval_grad(&self, p: Point2) -> Vec<[f64; 2]> {
        let (x, y) = self.local(p);
        let inv = 1.0 / self.scale;
        self.exponents
            .iter()
            .map(|&(a, b)| {
                let dx = if a == 0 {
                    0.0
                } else {
                    a as f64 * math::powi(x, a - 1) * math::powi(y, b)
                };
                let dy = if b == 0 {
                    0.0
                } else {
                    b as f64 * math::powi(x, a) * math::powi(y, b - 1)
                };
                [dx * inv, dy * inv]
            })
            .collect()
    }
}
