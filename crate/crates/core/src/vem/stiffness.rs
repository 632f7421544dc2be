use alloc::format;

use nalgebra::DMatrix;

use super::element::{Degree, Element};
use super::material::Material;
use super::projector::{energy_projector, l2_projectors, EnergyProjection, L2Projections};
use super::stab::StabKind;
use crate::geometry::Polygon;
use crate::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-11;
const KERNEL_TOL: f64 = 1e-9;

/// K_E = Π*ᵀ G Π* + (I − Π)ᵀ S (I − Π), symmetrized, with its rigid kernel
/// verified.
pub fn local_stiffness(proj: &EnergyProjection, s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = proj.pi_dof.nrows();
    let consistency = proj.pi_star.transpose() * &proj.g * &proj.pi_star;
    let r = DMatrix::identity(n, n) - &proj.pi_dof;
    let k = consistency + r.transpose() * s * &r;
    let scale = k.amax();
    if !scale.is_finite() || scale == 0.0 {
        return Err(Error::Local("local stiffness is zero or not finite".into()));
    }
    let asym = (&k - k.transpose()).amax();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::Local(format!(
            "local stiffness asymmetric by {:e} relative",
            asym / scale
        )));
    }
    let k = (&k + k.transpose()) * 0.5;
    let kernel = rigid_kernel_dimension(&k);
    if kernel != 3 {
        return Err(Error::Local(format!(
            "local stiffness has a {kernel}-dimensional kernel instead of 3"
        )));
    }
    Ok(k)
}

/// Number of eigenvalues of D^{-1/2} K D^{-1/2} below `1e-9 · λ_max`, with D
/// the diagonal of K. The Jacobi scaling keeps cells with tiny edges from
/// masquerading as extra zero modes.
pub fn rigid_kernel_dimension(k: &DMatrix<f64>) -> usize {
    let d: nalgebra::DVector<f64> = k.diagonal().map(|v| {
        if v > 0.0 {
            1.0 / crate::math::sqrt(v)
        } else {
            0.0
        }
    });
    let scaled = DMatrix::from_fn(k.nrows(), k.ncols(), |i, j| d[i] * k[(i, j)] * d[j]);
    let eig = scaled.symmetric_eigenvalues();
    let max = eig.iter().cloned().fold(0.0_f64, f64::max);
    let zero_diag = d.iter().filter(|v| **v == 0.0).count();
    zero_diag.max(eig.iter().filter(|&&v| v < KERNEL_TOL * max).count())
}

/// Everything computed per cell.
#[derive(Debug, Clone)]
pub struct LocalOperators {
    pub element: Element,
    pub projection: EnergyProjection,
    pub l2: L2Projections,
    pub stabilization: DMatrix<f64>,
    pub stiffness: DMatrix<f64>,
}

impl LocalOperators {
    pub fn new(
        polygon: Polygon,
        degree: Degree,
        material: &Material,
        stab: StabKind,
    ) -> Result<Self> {
        let element = Element::new(polygon, degree)?;
        let projection = energy_projector(&element, material)?;
        let l2 = l2_projectors(&element, &projection)?;
        let stabilization = stab.matrix(&element);
        let stiffness = local_stiffness(&projection, &stabilization)?;
        Ok(Self {
            element,
            projection,
            l2,
            stabilization,
            stiffness,
        })
    }
}
