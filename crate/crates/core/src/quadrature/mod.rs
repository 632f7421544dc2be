//! Scaled monomial bases, exact polygon moments and quadrature rules.

mod basis;
mod gauss;
mod moments;
mod rules;

pub use basis::{monomial_exponents, ScaledMonomialBasis};
pub use gauss::gauss_legendre;
pub use moments::{polygon_moments_with, polygon_monomial_moments};
pub use rules::{
    edge_quadrature, polygon_quadrature, triangle_quadrature, PolygonRuleKind, QuadratureRule,
};
