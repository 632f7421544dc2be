//! Run configuration: built-in defaults, then a flat `key = value` file,
//! then command-line flags. Every source goes through [`RunConfig::set`], so
//! the echo printed by [`RunConfig::to_text`] reads back to the same values.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use polyvem_core::geometry::{Domain, MeshKind, DEFAULT_EDGE_FRACTION};
use polyvem_core::study::{SolutionId, StudyConfig};
use polyvem_core::vem::{Degree, Material, StabKind};

use crate::AppError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub domain: Domain,
    pub mesh: MeshKind,
    pub small_edges: bool,
    pub edge_fraction: f64,
    pub k: Degree,
    pub nu: f64,
    pub young: f64,
    pub rho: f64,
    pub stab: StabKind,
    pub solution: SolutionId,
    pub levels: Vec<usize>,
    pub level: usize,
    pub seed: u64,
    pub cells: usize,
    pub out: Option<PathBuf>,
    pub samples: Option<PathBuf>,
    pub input: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            domain: Domain::UnitSquare,
            mesh: MeshKind::Squares,
            small_edges: false,
            edge_fraction: DEFAULT_EDGE_FRACTION,
            k: Degree::ONE,
            nu: 0.35,
            young: 1.0,
            rho: 1.0,
            stab: StabKind::default(),
            solution: SolutionId::default(),
            levels: vec![8, 16, 32, 64],
            level: 8,
            seed: 2024,
            cells: 200,
            out: None,
            samples: None,
            input: None,
        }
    }
}

pub const KEYS: [&str; 17] = [
    "domain",
    "mesh",
    "small-edges",
    "edge-fraction",
    "k",
    "nu",
    "young",
    "rho",
    "stab",
    "solution",
    "levels",
    "level",
    "seed",
    "cells",
    "out",
    "samples",
    "input",
];

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("'{value}' is not a valid value for {key}"))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        match key {
            "domain" => self.domain = value.parse().map_err(|e| format!("{e}"))?,
            "mesh" => self.mesh = value.parse().map_err(|e| format!("{e}"))?,
            "small-edges" => {
                self.small_edges = match value {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err(format!("small-edges expects true or false, got '{value}'")),
                }
            }
            "edge-fraction" => self.edge_fraction = number(key, value)?,
            "k" => self.k = Degree::new(number(key, value)?).map_err(|e| format!("{e}"))?,
            "nu" => self.nu = number(key, value)?,
            "young" => self.young = number(key, value)?,
            "rho" => self.rho = number(key, value)?,
            "stab" => self.stab = value.parse().map_err(|e| format!("{e}"))?,
            "solution" => self.solution = value.parse().map_err(|e| format!("{e}"))?,
            "levels" => {
                self.levels = value
                    .split(',')
                    .map(|t| number::<usize>(key, t.trim()))
                    .collect::<Result<_, _>>()?
            }
            "level" => self.level = number(key, value)?,
            "seed" => self.seed = number(key, value)?,
            "cells" => self.cells = number(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "samples" => self.samples = Some(PathBuf::from(value)),
            "input" => self.input = Some(PathBuf::from(value)),
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), AppError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| AppError::Parse {
                origin: origin.to_string(),
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected 'key = value', found '{line}'")))?;
            self.set(key.trim(), value).map_err(err)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), AppError> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        self.apply_text(&text, &path.display().to_string())
    }

    /// The resolved configuration in the file format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("domain", &self.domain.name());
        put("mesh", &self.mesh.name());
        put("small-edges", &self.small_edges);
        put("edge-fraction", &self.edge_fraction);
        put("k", &self.k.get());
        put("nu", &self.nu);
        put("young", &self.young);
        put("rho", &self.rho);
        put("stab", &self.stab.name());
        put("solution", &self.solution.name());
        let levels: Vec<String> = self.levels.iter().map(ToString::to_string).collect();
        put("levels", &levels.join(","));
        put("level", &self.level);
        put("seed", &self.seed);
        put("cells", &self.cells);
        for (k, v) in [
            ("out", &self.out),
            ("samples", &self.samples),
            ("input", &self.input),
        ] {
            if let Some(p) = v {
                put(k, &p.display());
            }
        }
        s
    }

    pub fn material(&self) -> Result<Material, AppError> {
        Ok(Material::new(self.young, self.nu, self.rho)?)
    }

    pub fn study(&self) -> Result<StudyConfig, AppError> {
        let config = StudyConfig {
            domain: self.domain,
            kind: self.mesh,
            edge_fraction: self.small_edges.then_some(self.edge_fraction),
            degree: self.k,
            levels: self.levels.clone(),
            material: self.material()?,
            stab: self.stab,
            solution: self.solution,
            seed: self.seed,
        };
        config.validate()?;
        Ok(config)
    }

    /// Same as [`RunConfig::study`] with the single `level`.
    pub fn single_level(&self) -> Result<StudyConfig, AppError> {
        let mut one = self.clone();
        one.levels = vec![self.level];
        one.study()
    }
}
