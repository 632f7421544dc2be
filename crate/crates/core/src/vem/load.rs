use alloc::vec::Vec;

use super::element::Element;
use super::material::Material;
use super::projector::L2Projections;
use super::VectorField;
use crate::quadrature::polygon_quadrature;

/// F_i = ∫_E ϱ f · Π⁰_1 φ_i, with f integrated at order 2k + 2.
pub fn local_load(
    el: &Element,
    l2: &L2Projections,
    mat: &Material,
    f: VectorField<'_>,
) -> Vec<f64> {
    let (rule, _) = polygon_quadrature(&el.polygon, 2 * el.k() + 2);
    let mut fm = nalgebra::DVector::<f64>::zeros(6);
    for (x, w) in rule.points.iter().zip(&rule.weights) {
        let fx = f(*x);
        let m = el.basis.eval(*x);
        for a in 0..3 {
            for c in 0..2 {
                fm[2 * a + c] += w * mat.density * fx[c] * m[a];
            }
        }
    }
    (l2.pi0_1.transpose() * fm).iter().copied().collect()
}
