use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::geometry::{Domain, Point2};
use crate::math::{cos, sin};
use crate::vem::Material;
use crate::{Error, Result};

/// An exact displacement with its gradient and the load that produces it.
pub trait ExactSolution {
    fn u(&self, p: Point2) -> [f64; 2];
    /// grad[c][d] = ∂_d u_c.
    fn grad(&self, p: Point2) -> [[f64; 2]; 2];
    /// f with div σ(u) = −ϱ f.
    fn f(&self, p: Point2) -> [f64; 2];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SolutionId {
    /// u_1 = u_2 = sin(πx) sin(πy).
    #[default]
    Sine,
    /// u_1 = x(1−x)y(1−y), u_2 = x²(1−x)y(1−y).
    Poly3,
}

impl SolutionId {
    pub fn name(self) -> &'static str {
        match self {
            SolutionId::Sine => "sine",
            SolutionId::Poly3 => "poly3",
        }
    }
}

impl fmt::Display for SolutionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolutionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sine" => Ok(SolutionId::Sine),
            "poly3" => Ok(SolutionId::Poly3),
            _ => Err(Error::InvalidParameter(alloc::format!(
                "unknown solution '{s}' (expected sine or poly3)"
            ))),
        }
    }
}

/// A solution vanishing on the boundary of its domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedSolution {
    pub id: SolutionId,
    pub material: Material,
}

impl ManufacturedSolution {
    pub fn new(id: SolutionId, material: Material, domain: Domain) -> Result<Self> {
        if id == SolutionId::Poly3 && domain != Domain::UnitSquare {
            return Err(Error::InvalidParameter(alloc::format!(
                "solution poly3 only vanishes on the boundary of the unit square, not {}",
                domain.name()
            )));
        }
        Ok(Self { id, material })
    }

    /// div σ(u) = μ Δu + (μ + λ) ∇ div u.
    fn div_stress(&self, p: Point2) -> [f64; 2] {
        let (mu, lambda) = (self.material.mu, self.material.lambda);
        match self.id {
            SolutionId::Sine => {
                let (sx, cx) = (sin(PI * p.x), cos(PI * p.x));
                let (sy, cy) = (sin(PI * p.y), cos(PI * p.y));
                let v =
                    -2.0 * PI * PI * mu * sx * sy + (mu + lambda) * PI * PI * (cx * cy - sx * sy);
                [v, v]
            }
            SolutionId::Poly3 => {
                let (x, y) = (p.x, p.y);
                let (a, da, dda) = (x - x * x, 1.0 - 2.0 * x, -2.0);
                let (b, db, ddb) = (y - y * y, 1.0 - 2.0 * y, -2.0);
                let (c, dc, ddc) = (x * x - x * x * x, 2.0 * x - 3.0 * x * x, 2.0 - 6.0 * x);
                let lap1 = dda * b + a * ddb;
                let lap2 = ddc * b + c * ddb;
                let ddiv_x = dda * b + dc * db;
                let ddiv_y = da * db + c * ddb;
                [
                    mu * lap1 + (mu + lambda) * ddiv_x,
                    mu * lap2 + (mu + lambda) * ddiv_y,
                ]
            }
        }
    }
}

impl ExactSolution for ManufacturedSolution {
    fn u(&self, p: Point2) -> [f64; 2] {
        match self.id {
            SolutionId::Sine => {
                let w = sin(PI * p.x) * sin(PI * p.y);
                [w, w]
            }
            SolutionId::Poly3 => {
                let b = p.y * (1.0 - p.y);
                [p.x * (1.0 - p.x) * b, p.x * p.x * (1.0 - p.x) * b]
            }
        }
    }

    fn grad(&self, p: Point2) -> [[f64; 2]; 2] {
        match self.id {
            SolutionId::Sine => {
                let (sx, cx) = (sin(PI * p.x), cos(PI * p.x));
                let (sy, cy) = (sin(PI * p.y), cos(PI * p.y));
                let g = [PI * cx * sy, PI * sx * cy];
                [g, g]
            }
            SolutionId::Poly3 => {
                let (x, y) = (p.x, p.y);
                let (a, da) = (x - x * x, 1.0 - 2.0 * x);
                let (b, db) = (y - y * y, 1.0 - 2.0 * y);
                let (c, dc) = (x * x - x * x * x, 2.0 * x - 3.0 * x * x);
                [[da * b, a * db], [dc * b, c * db]]
            }
        }
    }

    fn f(&self, p: Point2) -> [f64; 2] {
        let d = self.div_stress(p);
        let rho = self.material.density;
        [-d[0] / rho, -d[1] / rho]
    }
}

/// A vector polynomial of degree <= 2 in raw coordinates, used for patch
/// tests. Coefficients per component follow 1, x, y, x², xy, y².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialSolution {
    pub coeffs: [[f64; 6]; 2],
    pub material: Material,
}

impl PolynomialSolution {
    pub fn degree(&self) -> usize {
        if self
            .coeffs
            .iter()
            .any(|c| c[3] != 0.0 || c[4] != 0.0 || c[5] != 0.0)
        {
            2
        } else {
            1
        }
    }
}

impl ExactSolution for PolynomialSolution {
    fn u(&self, p: Point2) -> [f64; 2] {
        let m = [1.0, p.x, p.y, p.x * p.x, p.x * p.y, p.y * p.y];
        self.coeffs
            .map(|c| c.iter().zip(&m).map(|(a, b)| a * b).sum())
    }

    fn grad(&self, p: Point2) -> [[f64; 2]; 2] {
        self.coeffs.map(|c| {
            [
                c[1] + 2.0 * c[3] * p.x + c[4] * p.y,
                c[2] + c[4] * p.x + 2.0 * c[5] * p.y,
            ]
        })
    }

    fn f(&self, _: Point2) -> [f64; 2] {
        let (mu, lambda) = (self.material.mu, self.material.lambda);
        let [u, v] = self.coeffs;
        let lap = [2.0 * (u[3] + u[5]), 2.0 * (v[3] + v[5])];
        // div u = u_x + v_y
        let ddiv = [2.0 * u[3] + v[4], u[4] + 2.0 * v[5]];
        let rho = self.material.density;
        [
            -(mu * lap[0] + (mu + lambda) * ddiv[0]) / rho,
            -(mu * lap[1] + (mu + lambda) * ddiv[1]) / rho,
        ]
    }
}
