use alloc::format;

use crate::{Error, Result};

/// Isotropic material with its Lamé pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub young: f64,
    pub poisson: f64,
    pub mu: f64,
    pub lambda: f64,
    pub density: f64,
}

impl Material {
    pub fn new(young: f64, poisson: f64, density: f64) -> Result<Self> {
        if !(density > 0.0) || !density.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "density {density} must be positive"
            )));
        }
        let (mu, lambda) = lame_from_young_poisson(young, poisson)?;
        Ok(Self {
            young,
            poisson,
            mu,
            lambda,
            density,
        })
    }
}

/// μ = E / (2(1 + ν)), λ = Eν / ((1 + ν)(1 − 2ν)).
pub fn lame_from_young_poisson(young: f64, poisson: f64) -> Result<(f64, f64)> {
    if !(young > 0.0) || !young.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Young modulus {young} must be positive"
        )));
    }
    if !(poisson > -1.0 && poisson < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "Poisson ratio {poisson} must lie in (-1, 1/2)"
        )));
    }
    let mu = young / (2.0 * (1.0 + poisson));
    let lambda = young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
    Ok((mu, lambda))
}
