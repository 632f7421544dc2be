use alloc::format;
use alloc::vec::Vec;

use super::errors::error_norms;
use super::manufactured::{ManufacturedSolution, SolutionId};
use super::rates::fill_rates;
use crate::geometry::{generate_mesh, mesh_metrics, split_edges_small, Domain, Mesh, MeshKind};
use crate::solver::{self, Discretization, GlobalDofMap, LinearSolver, Solution};
use crate::study::ExactSolution;
use crate::vem::{Degree, Material, StabKind};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub domain: Domain,
    pub kind: MeshKind,
    /// Split every edge at this fraction of its length when set.
    pub edge_fraction: Option<f64>,
    pub degree: Degree,
    pub levels: Vec<usize>,
    pub material: Material,
    pub stab: StabKind,
    pub solution: SolutionId,
    pub seed: u64,
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::InvalidParameter("no levels given".into()));
        }
        if self.levels[0] == 0 || self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "levels {:?} must be positive and strictly increasing",
                self.levels
            )));
        }
        if let Some(f) = self.edge_fraction {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "edge fraction {f} must lie in (0, 1)"
                )));
            }
        }
        if self.domain == Domain::LShape && self.kind == MeshKind::GluedVoronoi {
            return Err(Error::UnsupportedMesh {
                domain: self.domain.name(),
                kind: self.kind.name(),
            });
        }
        ManufacturedSolution::new(self.solution, self.material, self.domain).map(|_| ())
    }

    pub fn discretization(&self) -> Discretization {
        Discretization {
            degree: self.degree,
            material: self.material,
            stab: self.stab,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub level: usize,
    /// Largest cell diameter.
    pub h: f64,
    /// Global DOFs, boundary ones included.
    pub ndof: usize,
    pub err_l2: f64,
    pub err_h1: f64,
    pub rate_l2: Option<f64>,
    pub rate_h1: Option<f64>,
}

pub fn study_mesh(
    domain: Domain,
    kind: MeshKind,
    level: usize,
    seed: u64,
    edge_fraction: Option<f64>,
) -> Result<Mesh> {
    let mesh = generate_mesh(domain, kind, level, seed)?;
    match edge_fraction {
        Some(f) => split_edges_small(&mesh, f),
        None => Ok(mesh),
    }
}

#[derive(Debug, Clone)]
pub struct LevelResult {
    pub mesh: Mesh,
    pub map: GlobalDofMap,
    pub solution: Solution,
    pub row: StudyRow,
}

/// Mesh, solve and measure one level of a study.
pub fn solve_level(
    config: &StudyConfig,
    level: usize,
    lin: &dyn LinearSolver,
) -> Result<LevelResult> {
    let run = || -> Result<LevelResult> {
        let exact = ManufacturedSolution::new(config.solution, config.material, config.domain)?;
        let mesh = study_mesh(
            config.domain,
            config.kind,
            level,
            config.seed,
            config.edge_fraction,
        )?;
        let zero = |_| [0.0, 0.0];
        let (map, solution) =
            solver::solve_problem(&mesh, &config.discretization(), &|p| exact.f(p), &zero, lin)?;
        let (err_l2, err_h1) = error_norms(&mesh, &map, &config.material, &exact, &solution.dofs)?;
        let row = StudyRow {
            level,
            h: mesh_metrics(&mesh).h,
            ndof: map.num_dofs(),
            err_l2,
            err_h1,
            rate_l2: None,
            rate_h1: None,
        };
        Ok(LevelResult {
            mesh,
            map,
            solution,
            row,
        })
    };
    run().map_err(|e| e.at_level(level))
}

/// Runs every level in order; `progress` sees each row as it completes.
pub fn run_study(
    config: &StudyConfig,
    lin: &dyn LinearSolver,
    mut progress: impl FnMut(&StudyRow),
) -> Result<Vec<StudyRow>> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.levels.len());
    for &level in &config.levels {
        let row = solve_level(config, level, lin)?.row;
        progress(&row);
        rows.push(row);
    }
    fill_rates(&mut rows);
    Ok(rows)
}
