use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::*;
use crate::geometry::{generate_mesh, Domain, MeshKind, Point2};
use crate::vem::{LocalOperators, Material};

fn disc(k: Degree, stab: StabKind) -> Discretization {
    Discretization {
        degree: k,
        material: Material::new(1.0, 0.35, 1.0).unwrap(),
        stab,
    }
}

fn zero(_: Point2) -> [f64; 2] {
    [0.0, 0.0]
}

#[test]
fn single_cell_matches_local_stiffness() {
    let mesh = generate_mesh(Domain::UnitSquare, MeshKind::Squares, 1, 0).unwrap();
    let d = disc(Degree::TWO, StabKind::Derivative);
    let map = build_dof_map(&mesh, d.degree);
    let sys = assemble(&mesh, &map, &d.material, d.stab, &zero).unwrap();
    let ops = LocalOperators::new(mesh.polygon(0), d.degree, &d.material, d.stab).unwrap();
    let dense = sys.matrix.to_dense();
    let dofs = &map.cell_dofs[0];
    for i in 0..dofs.len() {
        for j in 0..dofs.len() {
            assert_eq!(dense[(dofs[i], dofs[j])], ops.stiffness[(i, j)]);
        }
    }
    assert!(sys.rhs.iter().all(|v| *v == 0.0));
    let reduced = apply_dirichlet(&sys, &map, &|p| [p.x, 0.0]);
    // only the moment node is free
    assert_eq!(reduced.free.len(), 2);
}

#[test]
fn two_cells_match_dense_assembly() {
    let mesh = generate_mesh(Domain::UnitSquare, MeshKind::Triangles, 1, 0).unwrap();
    assert_eq!(mesh.num_cells(), 2);
    for k in [Degree::ONE, Degree::TWO] {
        let d = disc(k, StabKind::Classic);
        let map = build_dof_map(&mesh, k);
        let sys = assemble(&mesh, &map, &d.material, d.stab, &|p| [p.y, 1.0]).unwrap();
        let n = map.num_dofs();
        let mut dense = DMatrix::zeros(n, n);
        for c in 0..2 {
            let ops = LocalOperators::new(mesh.polygon(c), k, &d.material, d.stab).unwrap();
            let g = &map.cell_dofs[c];
            for i in 0..g.len() {
                for j in 0..g.len() {
                    dense[(g[i], g[j])] += ops.stiffness[(i, j)];
                }
            }
        }
        assert!((sys.matrix.to_dense() - dense).amax() < 1e-15);
        assert!(sys.matrix.asymmetry() < 1e-12);
    }
}

#[test]
fn global_rigid_modes_are_in_the_kernel() {
    let mesh = generate_mesh(Domain::UnitSquare, MeshKind::Voronoi, 4, 3).unwrap();
    for k in [Degree::ONE, Degree::TWO] {
        let d = disc(k, StabKind::Derivative);
        let map = build_dof_map(&mesh, k);
        let sys = assemble(&mesh, &map, &d.material, d.stab, &zero).unwrap();
        let mut tx = alloc::vec![0.0; map.num_dofs()];
        let mut rot = tx.clone();
        for (node, p) in map.node_points.iter().enumerate() {
            tx[2 * node] = 1.0;
            rot[2 * node] = -p.y;
            rot[2 * node + 1] = p.x;
        }
        // cell nodes carry means, and the mean of a rotation is its value at the centroid
        let scale = sys.matrix.max_abs();
        for mode in [tx, rot] {
            let r = sys.matrix.mul_vec(&mode);
            assert!(r.iter().all(|v| v.abs() < 1e-10 * scale));
        }
    }
}

#[test]
fn linear_patch_is_exact() {
    let g = |p: Point2| [0.1 + 0.3 * p.x - 0.2 * p.y, -0.4 + 0.5 * p.x + 0.7 * p.y];
    for kind in [
        MeshKind::Voronoi,
        MeshKind::DeformedTrianglesMidpoints,
        MeshKind::DeformedSquares,
    ] {
        let mesh = generate_mesh(Domain::UnitSquare, kind, 5, 1).unwrap();
        for stab in StabKind::ALL {
            let d = disc(Degree::ONE, stab);
            let (map, sol) =
                solve_problem(&mesh, &d, &zero, &g, &ConjugateGradient::default()).unwrap();
            for (node, p) in map.node_points.iter().enumerate() {
                let e = g(*p);
                assert!((sol.dofs[2 * node] - e[0]).abs() < 1e-10);
                assert!((sol.dofs[2 * node + 1] - e[1]).abs() < 1e-10);
            }
            assert!(sol.report.residual <= RESIDUAL_GATE);
        }
    }
}

#[test]
fn reduced_system_is_positive_definite() {
    let mesh = generate_mesh(Domain::UnitSquare, MeshKind::Squares, 3, 0).unwrap();
    for k in [Degree::ONE, Degree::TWO] {
        let d = disc(k, StabKind::Classic);
        let map = build_dof_map(&mesh, k);
        let sys = assemble(&mesh, &map, &d.material, d.stab, &zero).unwrap();
        let red = apply_dirichlet(&sys, &map, &zero);
        assert!(red.matrix.asymmetry() < 1e-12);
        let eig = red.matrix.to_dense().symmetric_eigenvalues();
        assert!(eig.min() > 1e-8 * eig.max());
        assert!(red.rhs.iter().all(|v| *v == 0.0));
    }
}

#[test]
fn all_boundary_gives_empty_system() {
    let mesh = generate_mesh(Domain::UnitSquare, MeshKind::Squares, 1, 0).unwrap();
    let d = disc(Degree::ONE, StabKind::Classic);
    let g = |p: Point2| [p.x, p.y];
    let (map, sol) = solve_problem(&mesh, &d, &zero, &g, &ConjugateGradient::default()).unwrap();
    assert_eq!(sol.report.method, "trivial");
    let expected: Vec<f64> = map.node_points.iter().flat_map(|p| g(*p)).collect();
    assert_eq!(sol.dofs, expected);
}

#[test]
fn local_failure_names_the_cell() {
    let mut mesh = generate_mesh(Domain::UnitSquare, MeshKind::Squares, 2, 0).unwrap();
    mesh.cells[3].vertex_ids.reverse();
    let d = disc(Degree::ONE, StabKind::Classic);
    let map = build_dof_map(&mesh, d.degree);
    match assemble(&mesh, &map, &d.material, d.stab, &zero) {
        Err(crate::Error::Cell { cell, .. }) => assert_eq!(cell, 3),
        other => panic!("unexpected {other:?}"),
    }
}
