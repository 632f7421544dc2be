use alloc::vec::Vec;

use super::assemble::SparseSystem;
use super::csr::CsrMatrix;
use super::dofmap::GlobalDofMap;
use crate::vem::VectorField;

/// The system on free DOFs after symmetric elimination of boundary values.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// Global index of each reduced unknown.
    pub free: Vec<usize>,
    /// Global vector holding the boundary values, zero elsewhere.
    pub lifted: Vec<f64>,
}

impl ReducedSystem {
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        let mut out = self.lifted.clone();
        for (&g, v) in self.free.iter().zip(x) {
            out[g] = *v;
        }
        out
    }
}

/// b_free ← b_free − A[free, bdry] g, keeping only free rows and columns.
pub fn apply_dirichlet(
    system: &SparseSystem,
    map: &GlobalDofMap,
    g: VectorField<'_>,
) -> ReducedSystem {
    let n = map.num_dofs();
    let mut lifted = alloc::vec![0.0; n];
    for (node, p) in map.node_points.iter().enumerate() {
        if map.boundary[2 * node] {
            let v = g(*p);
            lifted[2 * node] = v[0];
            lifted[2 * node + 1] = v[1];
        }
    }
    let mut reduced_index = alloc::vec![usize::MAX; n];
    let free: Vec<usize> = (0..n).filter(|&d| !map.boundary[d]).collect();
    for (r, &d) in free.iter().enumerate() {
        reduced_index[d] = r;
    }
    let mut triplets = Vec::new();
    let mut rhs = Vec::with_capacity(free.len());
    for (r, &d) in free.iter().enumerate() {
        let mut b = system.rhs[d];
        for (j, v) in system.matrix.row(d) {
            if map.boundary[j] {
                b -= v * lifted[j];
            } else {
                triplets.push((r, reduced_index[j], v));
            }
        }
        rhs.push(b);
    }
    ReducedSystem {
        matrix: CsrMatrix::from_triplets(free.len(), free.len(), &triplets),
        rhs,
        free,
        lifted,
    }
}
