use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geometry::{Point2, Polygon};
use crate::quadrature::{edge_quadrature, polygon_quadrature};

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

fn unit_square() -> Polygon {
    Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)])
}

fn split_polygon(poly: &Polygon, fraction: f64) -> Polygon {
    let mut out = Vec::new();
    for (a, b) in poly.edges() {
        out.push(a);
        out.push(a.lerp(b, fraction));
    }
    Polygon::new(out)
}

fn cells() -> Vec<Polygon> {
    let hexagon = Polygon::new(
        (0..6)
            .map(|i| {
                let t = core::f64::consts::PI / 3.0 * i as f64;
                p(
                    0.3 + 0.1 * crate::math::cos(t),
                    0.2 + 0.1 * crate::math::sin(t),
                )
            })
            .collect(),
    );
    let pentagon = Polygon::new(vec![
        p(0.0, 0.0),
        p(1.2, 0.1),
        p(1.4, 0.9),
        p(0.5, 1.3),
        p(-0.2, 0.7),
    ]);
    // star-shaped but not convex
    let notch = Polygon::new(vec![
        p(0.0, 0.0),
        p(1.0, 0.0),
        p(1.0, 1.0),
        p(0.5, 0.6),
        p(0.0, 1.0),
    ]);
    let tri = Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)]);
    let tiny_edge = Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1e-3), p(0.4, 0.8)]);
    vec![
        unit_square(),
        hexagon.clone(),
        pentagon,
        notch.clone(),
        tri.clone(),
        tiny_edge,
        split_polygon(&tri, 1.0 / 50.0),
        split_polygon(&hexagon, 1.0 / 50.0),
        split_polygon(&notch, 1.0 / 50.0),
    ]
}

fn mat() -> Material {
    Material::new(1.0, 0.35, 1.0).unwrap()
}

fn degrees() -> [Degree; 2] {
    [Degree::ONE, Degree::TWO]
}

fn ops(poly: &Polygon, k: Degree, stab: StabKind) -> LocalOperators {
    LocalOperators::new(poly.clone(), k, &mat(), stab).unwrap()
}

fn random_dofs(n: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
}

/// Jacobian of the interleaved-coefficient vector polynomial at x.
fn jacobian(el: &Element, coeffs: &[f64], x: Point2) -> [[f64; 2]; 2] {
    let grads = el.basis.eval_grad(x);
    let mut j = [[0.0; 2]; 2];
    for (a, g) in grads.iter().enumerate() {
        for c in 0..2 {
            for d in 0..2 {
                j[c][d] += coeffs[2 * a + c] * g[d];
            }
        }
    }
    j
}

fn energy_by_quadrature(el: &Element, m: &Material, pc: &[f64], qc: &[f64]) -> f64 {
    let (rule, _) = polygon_quadrature(&el.polygon, 2 * el.k());
    rule.points
        .iter()
        .zip(&rule.weights)
        .map(|(x, w)| {
            let jp = jacobian(el, pc, *x);
            let jq = jacobian(el, qc, *x);
            let ep = [
                [jp[0][0], 0.5 * (jp[0][1] + jp[1][0])],
                [0.5 * (jp[0][1] + jp[1][0]), jp[1][1]],
            ];
            let eq = [
                [jq[0][0], 0.5 * (jq[0][1] + jq[1][0])],
                [0.5 * (jq[0][1] + jq[1][0]), jq[1][1]],
            ];
            let trp = ep[0][0] + ep[1][1];
            let trq = eq[0][0] + eq[1][1];
            let mut s = m.lambda * trp * trq;
            for i in 0..2 {
                for j in 0..2 {
                    s += 2.0 * m.mu * ep[i][j] * eq[i][j];
                }
            }
            w * s
        })
        .sum()
}

fn unit_coeffs(n: usize, i: usize) -> Vec<f64> {
    let mut c = vec![0.0; n];
    c[i] = 1.0;
    c
}

#[test]
fn projector_reproduces_polynomials() {
    for poly in cells() {
        for k in degrees() {
            let o = ops(&poly, k, StabKind::Derivative);
            let np = o.element.num_poly();
            let recon = &o.projection.pi_star * &o.projection.d;
            assert!(
                (recon - DMatrix::identity(np, np)).amax() < 1e-10,
                "k={k:?} {poly:?}"
            );
            let l2 = &o.l2.pi0_k * &o.projection.d;
            assert!((l2 - DMatrix::identity(np, np)).amax() < 1e-10);
        }
    }
}

#[test]
fn projector_is_idempotent() {
    for poly in cells() {
        for k in degrees() {
            let o = ops(&poly, k, StabKind::Derivative);
            let pd = &o.projection.pi_dof;
            let scale = pd.amax();
            assert!((pd * pd - pd).amax() < 1e-10 * scale);
        }
    }
}

#[test]
fn stiffness_matches_energy_on_polynomials() {
    let m = mat();
    for poly in cells() {
        for k in degrees() {
            for stab in StabKind::ALL {
                let o = ops(&poly, k, stab);
                let el = &o.element;
                let np = el.num_poly();
                let scale = o.stiffness.amax();
                for i in 0..np {
                    for j in 0..np {
                        let (ci, cj) = (unit_coeffs(np, i), unit_coeffs(np, j));
                        let di = DVector::from_vec(polynomial_dofs(el, &ci));
                        let dj = DVector::from_vec(polynomial_dofs(el, &cj));
                        let lhs = di.dot(&(&o.stiffness * &dj));
                        let rhs = energy_by_quadrature(el, &m, &ci, &cj);
                        assert!((lhs - rhs).abs() < 1e-10 * scale.max(1.0), "{lhs} vs {rhs}");
                    }
                }
            }
        }
    }
}

#[test]
fn rigid_modes_span_the_kernel() {
    for poly in cells() {
        for k in degrees() {
            for stab in StabKind::ALL {
                let o = ops(&poly, k, stab);
                let scale = o.stiffness.amax();
                for r in rigid_modes(&o.element) {
                    let kr = &o.stiffness * DVector::from_vec(r);
                    assert!(kr.amax() < 1e-11 * scale);
                }
                assert_eq!(rigid_kernel_dimension(&o.stiffness), 3);
                let eig = o.stiffness.clone().symmetric_eigenvalues();
                let max = eig.max();
                assert!(eig.iter().all(|&v| v >= -1e-11 * max));
            }
        }
    }
}

fn corner_traction_rhs(el: &Element, m: &Material, v: &DVector<f64>, beta: usize) -> f64 {
    // a^E(v, p_β) for k = 1: ∫_{∂E} σ(p_β) n · v with v piecewise linear.
    let np = el.num_poly();
    let coeffs = unit_coeffs(np, beta);
    let mut total = 0.0;
    for i in 0..el.polygon.len() {
        let (a, b) = el.polygon.edge(i);
        let j = (i + 1) % el.polygon.len();
        let len = a.dist(b);
        let n = [(b.y - a.y) / len, -(b.x - a.x) / len];
        let rule = edge_quadrature(a, b, 6).unwrap();
        for (x, w) in rule.points.iter().zip(&rule.weights) {
            let t = x.dist(a) / len;
            let vx = [
                (1.0 - t) * v[2 * i] + t * v[2 * j],
                (1.0 - t) * v[2 * i + 1] + t * v[2 * j + 1],
            ];
            let jac = jacobian(el, &coeffs, *x);
            let e01 = 0.5 * (jac[0][1] + jac[1][0]);
            let tr = jac[0][0] + jac[1][1];
            let s = [
                [2.0 * m.mu * jac[0][0] + m.lambda * tr, 2.0 * m.mu * e01],
                [2.0 * m.mu * e01, 2.0 * m.mu * jac[1][1] + m.lambda * tr],
            ];
            for c in 0..2 {
                total += w * (s[c][0] * n[0] + s[c][1] * n[1]) * vx[c];
            }
        }
    }
    total
}

#[test]
fn projection_residual_is_orthogonal_on_unit_square() {
    let m = mat();
    let el = Element::new(unit_square(), Degree::ONE).unwrap();
    let proj = energy_projector(&el, &m).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let v = random_dofs(el.num_dofs(), &mut rng);
        let piv = &proj.pi_star * &v;
        for beta in 0..el.num_poly() {
            let exact = corner_traction_rhs(&el, &m, &v, beta);
            let projected = (proj.g.row(beta) * &piv)[0];
            assert!((exact - projected).abs() < 1e-10);
        }
    }
}

#[test]
fn constraints_hold_for_random_dofs() {
    let m = mat();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for poly in cells() {
        for k in degrees() {
            let el = Element::new(poly.clone(), k).unwrap();
            let proj = energy_projector(&el, &m).unwrap();
            let v = random_dofs(el.num_dofs(), &mut rng);
            let w = &v - &proj.pi_dof * &v;
            // w is the trace of v − Π v, evaluated from its nodal values
            let (mut avg, mut circ) = ([0.0; 2], 0.0);
            for i in 0..poly.len() {
                let (a, b) = poly.edge(i);
                let len = a.dist(b);
                let t = [(b.x - a.x) / len, (b.y - a.y) / len];
                let nodes = el.layout.edge_nodes(i);
                let (gx, gw) = crate::quadrature::gauss_legendre(3);
                for (s, wq) in gx.iter().zip(&gw) {
                    let phi = super::element::edge_shape(k.get(), 0.5 * (s + 1.0));
                    for c in 0..2 {
                        let val: f64 = nodes
                            .iter()
                            .zip(&phi)
                            .map(|((nd, _), f)| f * w[2 * nd + c])
                            .sum();
                        avg[c] += 0.5 * wq * len * val;
                        circ += 0.5 * wq * len * val * t[c];
                    }
                }
            }
            let tol = 1e-10 * v.norm() * poly.perimeter();
            assert!(avg[0].abs() < tol && avg[1].abs() < tol && circ.abs() < tol);
        }
    }
}

#[test]
fn l2_projection_keeps_cell_mean() {
    let m = mat();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for poly in cells() {
        let el = Element::new(poly, Degree::TWO).unwrap();
        let proj = energy_projector(&el, &m).unwrap();
        let l2 = l2_projectors(&el, &proj).unwrap();
        let v = random_dofs(el.num_dofs(), &mut rng);
        let coeffs = &l2.pi0_k * &v;
        let mn = el.layout.moment_node().unwrap();
        for c in 0..2 {
            let integral: f64 = (0..el.basis.dim())
                .map(|a| el.moments[a] * coeffs[2 * a + c])
                .sum();
            assert!((integral - el.area * v[2 * mn + c]).abs() < 1e-11 * v.amax());
        }
        let mean = l2.pi0_km2.unwrap() * &v;
        assert_eq!(mean[0], v[2 * mn]);
    }
}

#[test]
fn l2_projection_of_constant() {
    for poly in cells() {
        for k in degrees() {
            let o = ops(&poly, k, StabKind::Classic);
            let dofs = interpolate_local(&o.element, &|_| [2.0, -3.0]);
            let c = &o.l2.pi0_1 * DVector::from_vec(dofs);
            assert!((c[0] - 2.0).abs() < 1e-12 && (c[1] + 3.0).abs() < 1e-12);
            assert!(c.rows(2, 4).amax() < 1e-11);
        }
    }
}

#[test]
fn triple_norm_of_constant_on_unit_square() {
    let el = Element::new(unit_square(), Degree::ONE).unwrap();
    let dofs = interpolate_local(&el, &|_| [1.0, 0.0]);
    let expected = crate::math::sqrt(crate::math::sqrt(2.0) * 4.0);
    assert!((triple_norm(&el, &dofs).unwrap() - expected).abs() < 1e-14);
    assert_eq!(triple_norm(&el, &[0.0; 8]).unwrap(), 0.0);
    let doubled: Vec<f64> = dofs.iter().map(|v| -2.0 * v).collect();
    assert!((triple_norm(&el, &doubled).unwrap() - 2.0 * expected).abs() < 1e-13);
}

#[test]
fn edge_projection_of_traces() {
    let (a, b) = (p(0.0, 0.0), p(3.0, 4.0));
    let lin = edge_l2_projector(a, b, &[[1.0, 2.0], [3.0, -2.0]], 1).unwrap();
    assert_eq!(lin.coeffs.len(), 1);
    assert!((lin.coeffs[0][0] - 2.0).abs() < 1e-15 && lin.coeffs[0][1].abs() < 1e-15);
    let con = edge_l2_projector(a, b, &[[4.0, 1.0]; 3], 2).unwrap();
    assert!((con.eval(0.3)[0] - 4.0).abs() < 1e-13 && (con.eval(0.9)[1] - 1.0).abs() < 1e-13);
    // q(t) = α + βt + γt²: Legendre truncation c0 + c1 (2t − 1) with
    // c0 = α + β/2 + γ/3 and c1 = 3 (β + γ)/6.
    let (al, be, ga) = (0.7, -1.3, 2.9);
    let q = |t: f64| al + be * t + ga * t * t;
    let quad = edge_l2_projector(a, b, &[[q(0.0), 0.0], [q(0.5), 0.0], [q(1.0), 0.0]], 2).unwrap();
    let c0 = al + be / 2.0 + ga / 3.0;
    let c1 = (be + ga) / 2.0;
    for &t in &[0.0, 0.25, 1.0] {
        assert!((quad.eval(t)[0] - (c0 + c1 * (2.0 * t - 1.0))).abs() < 1e-12);
    }
    assert!(edge_l2_projector(a, a, &[[0.0; 2]; 2], 1).is_err());
}

#[test]
fn derivative_stab_single_edge() {
    let tri = Polygon::new(vec![p(0.0, 0.0), p(2.0, 0.0), p(0.0, 0.5)]);
    let el = Element::new(tri.clone(), Degree::ONE).unwrap();
    let s = stab_derivative(&el);
    let h = tri.diameter();
    let (l0, l1) = (2.0, crate::math::hypot(2.0, 0.5));
    // vertex 1 touches edges 0 and 1
    assert!((s[(2, 2)] - h * (1.0 / l0 + 1.0 / l1)).abs() < 1e-14);
    assert!((s[(0, 2)] + h / l0).abs() < 1e-14);
    let c = interpolate_local(&el, &|_| [1.0, 1.0]);
    assert!((&s * DVector::from_vec(c)).amax() < 1e-14);
    assert!((&s - s.transpose()).amax() < 1e-13);
}

#[test]
fn classic_stab_touches_boundary_values_only() {
    let layout = DofLayout::new(Degree::TWO, 4);
    let s = stab_classic(&layout);
    assert_eq!(s[(0, 0)], 1.0);
    assert_eq!(s[(15, 15)], 1.0);
    assert_eq!(s[(16, 16)], 0.0);
    assert_eq!(s[(17, 17)], 0.0);
    assert_eq!(s.sum(), 16.0);
}

#[test]
fn vertex_only_classic_stab_is_singular_for_k2() {
    let hexagon = &cells()[1];
    let el = Element::new(hexagon.clone(), Degree::TWO).unwrap();
    let proj = energy_projector(&el, &mat()).unwrap();
    let mut s = DMatrix::zeros(el.num_dofs(), el.num_dofs());
    for i in 0..2 * el.layout.num_vertices {
        s[(i, i)] = 1.0;
    }
    assert!(local_stiffness(&proj, &s).is_err());
}

#[test]
fn stabilizations_vanish_on_polynomials() {
    for poly in cells() {
        for k in degrees() {
            for stab in StabKind::ALL {
                let o = ops(&poly, k, stab);
                let np = o.element.num_poly();
                for i in 0..np {
                    let d = DVector::from_vec(polynomial_dofs(&o.element, &unit_coeffs(np, i)));
                    let r = &d - &o.projection.pi_dof * &d;
                    assert!(r.amax() < 1e-10 * d.amax().max(1.0));
                    assert!((&o.stabilization * &r).amax() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn load_of_constant_force() {
    let m = Material::new(1.0, 0.35, 2.5).unwrap();
    for poly in cells() {
        for k in degrees() {
            let o = LocalOperators::new(poly.clone(), k, &m, StabKind::Derivative).unwrap();
            let f = local_load(&o.element, &o.l2, &m, &|_| [0.7, 0.0]);
            let [tx, ty, _] = rigid_modes(&o.element);
            let fx: f64 = f.iter().zip(&tx).map(|(a, b)| a * b).sum();
            let fy: f64 = f.iter().zip(&ty).map(|(a, b)| a * b).sum();
            assert!((fx - 2.5 * 0.7 * o.element.area).abs() < 1e-12);
            assert!(fy.abs() < 1e-12);
            let zero = local_load(&o.element, &o.l2, &m, &|_| [0.0, 0.0]);
            assert!(zero.iter().all(|v| *v == 0.0));
        }
    }
}

#[test]
fn load_is_adjoint_of_projection() {
    let m = mat();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = |x: Point2| [1.0 + 2.0 * x.x - x.y, 0.5 * x.y - 3.0];
    for poly in cells() {
        for k in degrees() {
            let o = ops(&poly, k, StabKind::Derivative);
            let el = &o.element;
            let load = DVector::from_vec(local_load(el, &o.l2, &m, &f));
            let v = random_dofs(el.num_dofs(), &mut rng);
            let coeffs = &o.l2.pi0_1 * &v;
            let (rule, _) = polygon_quadrature(&el.polygon, 4);
            let direct: f64 = rule
                .points
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| {
                    let mv = el.basis.eval(*x);
                    let fx = f(*x);
                    (0..3)
                        .map(|a| mv[a] * (fx[0] * coeffs[2 * a] + fx[1] * coeffs[2 * a + 1]))
                        .sum::<f64>()
                        * w
                })
                .sum();
            assert!((load.dot(&v) - direct).abs() < 1e-12 * v.amax().max(1.0));
        }
    }
}

#[test]
fn interpolation_reproduces_polynomials() {
    let m = mat();
    for poly in cells() {
        for k in degrees() {
            let el = Element::new(poly.clone(), k).unwrap();
            let proj = energy_projector(&el, &m).unwrap();
            let c = el.basis.center;
            let h = el.diameter;
            let field = |x: Point2| {
                let (s, t) = ((x.x - c.x) / h, (x.y - c.y) / h);
                if k == Degree::ONE {
                    [1.0 + 2.0 * s - t, -0.5 + 3.0 * t]
                } else {
                    [1.0 + s * s - 2.0 * s * t, t * t + 0.5 * s]
                }
            };
            let dofs = DVector::from_vec(interpolate_local(&el, &field));
            let coeffs = &proj.pi_star * &dofs;
            let expected: Vec<f64> = if k == Degree::ONE {
                vec![1.0, -0.5, 2.0, 0.0, -1.0, 3.0]
            } else {
                vec![1.0, 0.0, 0.0, 0.5, 0.0, 0.0, 1.0, 0.0, -2.0, 0.0, 0.0, 1.0]
            };
            for (a, b) in coeffs.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-10, "{coeffs} vs {expected:?}");
            }
        }
    }
}

#[test]
fn interpolation_error_decays_quadratically() {
    let m = mat();
    let pi = core::f64::consts::PI;
    let zeta = |x: Point2| [crate::math::sin(pi * x.x) * crate::math::sin(pi * x.y), 0.0];
    let error = |h: f64| {
        let poly = Polygon::new(vec![
            p(0.3, 0.2),
            p(0.3 + h, 0.2),
            p(0.3 + h, 0.2 + h),
            p(0.3, 0.2 + h),
        ]);
        let el = Element::new(poly, Degree::ONE).unwrap();
        let proj = energy_projector(&el, &m).unwrap();
        let coeffs = &proj.pi_star * DVector::from_vec(interpolate_local(&el, &zeta));
        let (rule, _) = polygon_quadrature(&el.polygon, 8);
        let e2: f64 = rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| {
                let mv = el.basis.eval(*x);
                let u: f64 = (0..3).map(|a| mv[a] * coeffs[2 * a]).sum();
                let v: f64 = (0..3).map(|a| mv[a] * coeffs[2 * a + 1]).sum();
                w * ((zeta(*x)[0] - u).powi(2) + v * v)
            })
            .sum();
        crate::math::sqrt(e2)
    };
    let (e1, e2) = (error(0.1), error(0.05));
    // L² error on a cell of size h decays like h² · |E|^{1/2} = h³
    let rate = crate::math::ln(e1 / e2) / crate::math::ln(2.0);
    assert!((rate - 3.0).abs() < 0.2, "rate {rate}");
}

#[test]
fn local_operators_are_translation_and_scale_invariant() {
    for poly in cells() {
        for k in degrees() {
            let a = ops(&poly, k, StabKind::Derivative);
            let moved = Polygon::new(
                poly.vertices
                    .iter()
                    .map(|v| p(5.0 + 0.01 * v.x, -3.0 + 0.01 * v.y))
                    .collect(),
            );
            let b = ops(&moved, k, StabKind::Derivative);
            let scale = a.stiffness.amax();
            assert!((&a.stiffness - &b.stiffness).amax() < 1e-9 * scale);
            assert!(
                (&a.projection.pi_star - &b.projection.pi_star).amax()
                    < 1e-9 * a.projection.pi_star.amax()
            );
        }
    }
}

#[test]
fn degenerate_cells_are_rejected() {
    let collinear = Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)]);
    assert!(Element::new(collinear, Degree::ONE).is_err());
    let cw = Polygon::new(vec![p(0.0, 0.0), p(0.0, 1.0), p(1.0, 0.0)]);
    assert!(Element::new(cw, Degree::ONE).is_err());
}
