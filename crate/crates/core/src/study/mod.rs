//! Manufactured solutions, projected error norms, convergence rates and the
//! study driver.

mod driver;
mod errors;
mod manufactured;
mod patch;
mod rates;

pub use driver::{run_study, solve_level, study_mesh, LevelResult, StudyConfig, StudyRow};
pub use errors::{error_norms, for_each_projected_cell, projected_samples};
pub use manufactured::{ExactSolution, ManufacturedSolution, PolynomialSolution, SolutionId};
pub use patch::{patch_test, PatchResult};
pub use rates::{fill_rates, rate, study_csv, terminal_rate, CSV_HEADER};

#[cfg(test)]
mod tests;
