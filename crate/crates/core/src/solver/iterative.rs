use alloc::format;
use alloc::vec::Vec;

use super::csr::CsrMatrix;
use crate::{math, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: &'static str,
    pub iterations: usize,
    /// Relative residual ‖A x − b‖ / ‖b‖ of the returned solution.
    pub residual: f64,
}

/// A solver for symmetric positive definite systems.
pub trait LinearSolver {
    fn solve(&self, a: &CsrMatrix, b: &[f64]) -> Result<(Vec<f64>, SolveReport)>;
}

/// Conjugate gradients with a Jacobi preconditioner.
#[derive(Debug, Clone, Copy)]
pub struct ConjugateGradient {
    pub rel_tol: f64,
    /// The iteration cap is `max_iter_factor · n`.
    pub max_iter_factor: usize,
}

impl Default for ConjugateGradient {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter_factor: 20,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl LinearSolver for ConjugateGradient {
    fn solve(&self, a: &CsrMatrix, b: &[f64]) -> Result<(Vec<f64>, SolveReport)> {
        let n = b.len();
        let inv_diag: Vec<f64> = a
            .diagonal()
            .iter()
            .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
            .collect();
        let mut x = alloc::vec![0.0; n];
        let mut r = b.to_vec();
        let bnorm = math::sqrt(dot(b, b));
        if bnorm == 0.0 {
            return Ok((
                x,
                SolveReport {
                    method: "pcg",
                    iterations: 0,
                    residual: 0.0,
                },
            ));
        }
        let cap = self.max_iter_factor * n.max(1);
        let mut it = 0;
        // Convergence is confirmed on the true residual b − Ax; the
        // iteration restarts from it when the recurrence disagrees.
        while it < cap {
            let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
            let mut p = z.clone();
            let mut rz = dot(&r, &z);
            while it < cap {
                it += 1;
                let ap = a.mul_vec(&p);
                let pap = dot(&p, &ap);
                if !(pap > 0.0) {
                    return Err(Error::Solver(format!(
                        "pcg breakdown at iteration {it}: pᵀAp = {pap:e}"
                    )));
                }
                let alpha = rz / pap;
                for i in 0..n {
                    x[i] += alpha * p[i];
                    r[i] -= alpha * ap[i];
                }
                if math::sqrt(dot(&r, &r)) / bnorm <= self.rel_tol {
                    break;
                }
                for i in 0..n {
                    z[i] = r[i] * inv_diag[i];
                }
                let rz_new = dot(&r, &z);
                let beta = rz_new / rz;
                rz = rz_new;
                for i in 0..n {
                    p[i] = z[i] + beta * p[i];
                }
            }
            r = a.residual(&x, b);
            let rel = math::sqrt(dot(&r, &r)) / bnorm;
            if rel <= self.rel_tol {
                return Ok((
                    x,
                    SolveReport {
                        method: "pcg",
                        iterations: it,
                        residual: rel,
                    },
                ));
            }
        }
        Err(Error::Solver(format!(
            "pcg did not reach {:e} within {cap} iterations",
            self.rel_tol
        )))
    }
}
