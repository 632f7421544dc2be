use alloc::vec::Vec;

use super::gauss::gauss_legendre;
use super::{monomial_exponents, ScaledMonomialBasis};
use crate::geometry::Polygon;
use crate::math;
use crate::{Error, Result};

/// ∫_E m_α for every scaled monomial of degree <= `up_to_degree`, in the
/// basis' graded-lex order.
///
/// Uses div((x - x_c) g) = (2 + d) g for g homogeneous of degree d about
/// x_c, which turns each area integral into edge integrals of univariate
/// polynomials, evaluated exactly by Gauss–Legendre.
pub fn polygon_monomial_moments(
    poly: &Polygon,
    basis: &ScaledMonomialBasis,
    up_to_degree: usize,
) -> Result<Vec<f64>> {
    polygon_moments_with(poly, basis.center, basis.scale, up_to_degree)
}

pub fn polygon_moments_with(
    poly: &Polygon,
    center: crate::geometry::Point2,
    scale: f64,
    up_to_degree: usize,
) -> Result<Vec<f64>> {
    if poly.len() < 3 || !(poly.signed_area() > 0.0) {
        return Err(Error::DegenerateGeometry(
            "moments need a counter-clockwise polygon",
        ));
    }
    let exps = monomial_exponents(up_to_degree);
    let mut out = alloc::vec![0.0; exps.len()];
    let (nodes, weights) = gauss_legendre(up_to_degree / 2 + 1);
    for (a, b) in poly.edges() {
        let t = b - a;
        let len = t.norm();
        if len == 0.0 {
            continue;
        }
        // outward normal of a CCW polygon
        let n = crate::geometry::Point2::new(t.y / len, -t.x / len);
        let support = (a - center).dot(n);
        if support == 0.0 {
            continue;
        }
        for (&s, &w) in nodes.iter().zip(&weights) {
            let p = a.lerp(b, 0.5 * (s + 1.0));
            let x = (p.x - center.x) / scale;
            let y = (p.y - center.y) / scale;
            let wl = 0.5 * w * len * support;
            for (k, &(ea, eb)) in exps.iter().enumerate() {
                out[k] += wl * math::powi(x, ea) * math::powi(y, eb);
            }
        }
    }
    for (k, &(ea, eb)) in exps.iter().enumerate() {
        out[k] /= (ea + eb) as f64 + 2.0;
    }
    Ok(out)
}
