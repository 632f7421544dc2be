//! Sparse Cholesky with a preconditioned-CG fallback.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use polyvem_core::solver::{
    relative_residual, ConjugateGradient, CsrMatrix, LinearSolver, SolveReport,
};
use polyvem_core::{Error, Result};

use crate::io::sym_coord_string;

const REFINEMENT_STEPS: usize = 5;
const REFINEMENT_TARGET: f64 = 1e-14;

/// Solves SPD systems by sparse Cholesky. When the factorization fails the
/// system is written to `dump_dir` in `%%sym-coord` form and the fallback
/// runs; if that fails too the error names the dump file.
#[derive(Debug, Clone)]
pub struct DirectSolver {
    pub fallback: ConjugateGradient,
    pub dump_dir: Option<PathBuf>,
}

impl Default for DirectSolver {
    fn default() -> Self {
        Self {
            fallback: ConjugateGradient::default(),
            dump_dir: Some(std::env::temp_dir()),
        }
    }
}

static DUMP_COUNTER: AtomicUsize = AtomicUsize::new(0);

impl DirectSolver {
    fn dump(&self, a: &CsrMatrix, b: &[f64]) -> Option<PathBuf> {
        let dir = self.dump_dir.as_ref()?;
        let id = DUMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let path = dir.join(format!("polyvem-system-{}-{id}.txt", std::process::id()));
        std::fs::write(&path, sym_coord_string(a, b)).ok()?;
        Some(path)
    }
}

fn cholesky(a: &CsrMatrix, b: &[f64]) -> std::result::Result<Vec<f64>, String> {
    let n = a.nrows();
    let triplets: Vec<Triplet<usize, usize, f64>> = a
        .triplets()
        .filter(|(i, j, _)| i >= j)
        .map(|(i, j, v)| Triplet::new(i, j, v))
        .collect();
    let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
        .map_err(|e| format!("{e:?}"))?;
    let llt = mat.sp_cholesky(Side::Lower).map_err(|e| format!("{e:?}"))?;
    let x = llt.solve(Mat::from_fn(n, 1, |i, _| b[i]));
    let mut xs: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    let mut best = relative_residual(a, &xs, b);
    for _ in 0..REFINEMENT_STEPS {
        if best <= REFINEMENT_TARGET {
            break;
        }
        let r = a.residual(&xs, b);
        let corr = llt.solve(Mat::from_fn(n, 1, |i, _| r[i]));
        let next: Vec<f64> = (0..n).map(|i| xs[i] + corr[(i, 0)]).collect();
        let res = relative_residual(a, &next, b);
        if res.is_nan() || res >= best {
            break;
        }
        (xs, best) = (next, res);
    }
    if xs.iter().any(|v| !v.is_finite()) {
        return Err("factorization produced non-finite values".into());
    }
    Ok(xs)
}

impl LinearSolver for DirectSolver {
    fn solve(&self, a: &CsrMatrix, b: &[f64]) -> Result<(Vec<f64>, SolveReport)> {
        let failure = match cholesky(a, b) {
            Ok(x) => {
                let residual = relative_residual(a, &x, b);
                return Ok((
                    x,
                    SolveReport {
                        method: "cholesky",
                        iterations: 0,
                        residual,
                    },
                ));
            }
            Err(msg) => msg,
        };
        let dump = self.dump(a, b);
        match self.fallback.solve(a, b) {
            Ok((x, mut report)) => {
                report.method = "pcg after cholesky failure";
                Ok((x, report))
            }
            Err(e) => Err(Error::Solver(format!(
                "cholesky failed ({failure}); fallback: {e}; system saved to {}",
                dump.map(|p| p.display().to_string())
                    .unwrap_or_else(|| "<not saved>".into())
            ))),
        }
    }
}
