use super::*;
use crate::geometry::{Domain, MeshKind};
use crate::solver::{build_dof_map, ConjugateGradient, Discretization};
use crate::vem::{interpolate_local, Degree, Element, Material, StabKind};

fn material() -> Material {
    Material::new(1.0, 0.35, 1.0).unwrap()
}

fn config(kind: MeshKind, k: Degree, levels: &[usize]) -> StudyConfig {
    StudyConfig {
        domain: Domain::UnitSquare,
        kind,
        edge_fraction: None,
        degree: k,
        levels: levels.to_vec(),
        material: material(),
        stab: StabKind::Derivative,
        solution: SolutionId::Sine,
        seed: 7,
    }
}

/// Global DOFs of the interpolant, cell by cell.
fn interpolant(
    mesh: &crate::Mesh,
    k: Degree,
    exact: &dyn ExactSolution,
) -> (crate::solver::GlobalDofMap, alloc::vec::Vec<f64>) {
    let map = build_dof_map(mesh, k);
    let mut dofs = alloc::vec![0.0; map.num_dofs()];
    for c in 0..mesh.num_cells() {
        let el = Element::new(mesh.polygon(c), k).unwrap();
        let local = interpolate_local(&el, &|p| exact.u(p));
        for (i, &g) in map.cell_dofs[c].iter().enumerate() {
            dofs[g] = local[i];
        }
    }
    (map, dofs)
}

#[test]
fn zero_dofs_give_solution_norm() {
    let mesh = study_mesh(Domain::UnitSquare, MeshKind::Squares, 4, 0, None).unwrap();
    let map = build_dof_map(&mesh, Degree::TWO);
    let exact =
        ManufacturedSolution::new(SolutionId::Sine, material(), Domain::UnitSquare).unwrap();
    let (l2, _) = error_norms(
        &mesh,
        &map,
        &material(),
        &exact,
        &alloc::vec![0.0; map.num_dofs()],
    )
    .unwrap();
    // ∫ sin²(πx) sin²(πy) = 1/4 per component
    assert!((l2 - crate::math::sqrt(0.5)).abs() < 1e-6, "{l2}");
}

#[test]
fn interpolated_polynomials_have_no_error() {
    let exact = PolynomialSolution {
        coeffs: [
            [0.1, 0.2, -0.3, 0.4, 0.5, -0.6],
            [0.0, 1.0, 0.3, -0.2, 0.7, 0.25],
        ],
        material: material(),
    };
    let mesh = study_mesh(
        Domain::UnitSquare,
        MeshKind::Voronoi,
        5,
        3,
        Some(1.0 / 50.0),
    )
    .unwrap();
    let (map, dofs) = interpolant(&mesh, Degree::TWO, &exact);
    let (l2, h1) = error_norms(&mesh, &map, &material(), &exact, &dofs).unwrap();
    assert!(l2 < 1e-10 && h1 < 1e-10, "{l2} {h1}");
}

#[test]
fn interpolant_rates_are_optimal() {
    let exact =
        ManufacturedSolution::new(SolutionId::Sine, material(), Domain::UnitSquare).unwrap();
    for k in [Degree::ONE, Degree::TWO] {
        let mut rows = alloc::vec::Vec::new();
        for level in [8, 16, 32] {
            let mesh = study_mesh(Domain::UnitSquare, MeshKind::Voronoi, level, 1, None).unwrap();
            let (map, dofs) = interpolant(&mesh, k, &exact);
            let (err_l2, err_h1) = error_norms(&mesh, &map, &material(), &exact, &dofs).unwrap();
            rows.push(StudyRow {
                level,
                h: 1.0 / level as f64,
                ndof: map.num_dofs(),
                err_l2,
                err_h1,
                rate_l2: None,
                rate_h1: None,
            });
        }
        fill_rates(&mut rows);
        let kk = k.get() as f64;
        let r1 = terminal_rate(&rows, |r| r.rate_h1).unwrap();
        let r0 = terminal_rate(&rows, |r| r.rate_l2).unwrap();
        assert!(
            (r1 - kk).abs() < 0.15 && (r0 - kk - 1.0).abs() < 0.15,
            "k={kk}: {r1} {r0}"
        );
    }
}

#[test]
fn quadratic_patch_on_split_triangles() {
    let exact = PolynomialSolution {
        coeffs: [
            [0.1, 0.2, -0.3, 0.4, 0.5, -0.6],
            [0.0, 1.0, 0.3, -0.2, 0.7, 0.25],
        ],
        material: material(),
    };
    let mesh = study_mesh(
        Domain::UnitSquare,
        MeshKind::Triangles,
        4,
        0,
        Some(1.0 / 50.0),
    )
    .unwrap();
    for stab in StabKind::ALL {
        let disc = Discretization {
            degree: Degree::TWO,
            material: material(),
            stab,
        };
        let r = patch_test(&mesh, &disc, &exact, &ConjugateGradient::default()).unwrap();
        assert!(r.rel_l2 < 1e-9 && r.rel_h1 < 1e-9, "{r:?}");
    }
}

#[test]
fn errors_decrease_and_runs_are_deterministic() {
    let cfg = config(MeshKind::Squares, Degree::ONE, &[4, 8]);
    let lin = ConjugateGradient::default();
    let rows = run_study(&cfg, &lin, |_| {}).unwrap();
    assert!(rows[1].err_l2 < rows[0].err_l2 && rows[1].err_h1 < rows[0].err_h1);
    assert_eq!(rows[0].ndof, 50);
    let again = run_study(&cfg, &lin, |_| {}).unwrap();
    assert_eq!(study_csv(&rows), study_csv(&again));
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = config(MeshKind::Squares, Degree::ONE, &[8, 4]);
    assert!(cfg.validate().is_err());
    cfg.levels = alloc::vec![4, 8];
    cfg.edge_fraction = Some(1.5);
    assert!(cfg.validate().is_err());
    cfg.edge_fraction = None;
    cfg.domain = Domain::LShape;
    cfg.solution = SolutionId::Poly3;
    assert!(cfg.validate().is_err());
    cfg.solution = SolutionId::Sine;
    cfg.kind = MeshKind::GluedVoronoi;
    assert!(matches!(
        cfg.validate(),
        Err(crate::Error::UnsupportedMesh { .. })
    ));
}

#[test]
fn level_failures_carry_context() {
    let cfg = config(MeshKind::Squares, Degree::ONE, &[2]);
    let lin = crate::solver::ConjugateGradient {
        rel_tol: 1e-12,
        max_iter_factor: 0,
    };
    match run_study(&cfg, &lin, |_| {}) {
        Err(crate::Error::Level { level, source }) => {
            assert_eq!(level, 2);
            assert!(source.is_numerical());
        }
        other => panic!("unexpected {other:?}"),
    }
}
