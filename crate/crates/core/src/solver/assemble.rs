use alloc::vec::Vec;

use super::csr::CsrMatrix;
use super::dofmap::GlobalDofMap;
use crate::geometry::Mesh;
use crate::vem::{local_load, LocalOperators, Material, StabKind, VectorField};
use crate::Result;

/// Assembled a_h and F_h before boundary conditions.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
}

/// Scatters every cell's stiffness and load in cell order, so the result is
/// bitwise reproducible.
pub fn assemble(
    mesh: &Mesh,
    map: &GlobalDofMap,
    material: &Material,
    stab: StabKind,
    f: VectorField<'_>,
) -> Result<SparseSystem> {
    let n = map.num_dofs();
    let mut triplets = Vec::new();
    let mut rhs = alloc::vec![0.0; n];
    for c in 0..mesh.num_cells() {
        let ops = LocalOperators::new(mesh.polygon(c), map.degree, material, stab)
            .map_err(|e| e.in_cell(c))?;
        let load = local_load(&ops.element, &ops.l2, material, f);
        let dofs = &map.cell_dofs[c];
        for (i, &gi) in dofs.iter().enumerate() {
            rhs[gi] += load[i];
            for (j, &gj) in dofs.iter().enumerate() {
                let v = ops.stiffness[(i, j)];
                if v != 0.0 {
                    triplets.push((gi, gj, v));
                }
            }
        }
    }
    Ok(SparseSystem {
        matrix: CsrMatrix::from_triplets(n, n, &triplets),
        rhs,
    })
}
