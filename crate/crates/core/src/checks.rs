//! Randomized invariant suites run by the `check` subcommand and the
//! acceptance tests.
//!
//! Each suite draws its cells from one seeded stream, so a failing case can
//! be replayed from the seed alone.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Domain, MeshKind, Point2, Polygon};
use crate::math;
use crate::quadrature::{edge_quadrature, polygon_monomial_moments, polygon_quadrature};
use crate::solver::{Discretization, LinearSolver};
use crate::study::{
    patch_test, study_mesh, ExactSolution, ManufacturedSolution, PolynomialSolution, SolutionId,
};
use crate::vem::{
    interpolate_local, polynomial_dofs, rigid_kernel_dimension, rigid_modes, Degree, DofLayout,
    Element, LocalOperators, Material, StabKind,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    pub cells: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            cells: 200,
            seed: 2024,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    /// Largest measured defect over all cases.
    pub worst: f64,
    pub tol: f64,
    /// First failure, if any.
    pub failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.worst <= self.tol
    }
}

struct Tracker {
    report: SuiteReport,
}

impl Tracker {
    fn new(name: &'static str, tol: f64) -> Self {
        Self {
            report: SuiteReport {
                name,
                cases: 0,
                worst: 0.0,
                tol,
                failure: None,
            },
        }
    }

    fn record(&mut self, case: usize, defect: f64) {
        self.report.cases = self.report.cases.max(case + 1);
        if !(defect <= self.report.worst) {
            self.report.worst = if defect.is_nan() {
                f64::INFINITY
            } else {
                defect
            };
        }
        if !(defect <= self.report.tol) && self.report.failure.is_none() {
            self.report.failure = Some(format!("case {case}: defect {defect:e}"));
        }
    }

    fn fail(&mut self, case: usize, msg: String) {
        self.report.cases = self.report.cases.max(case + 1);
        if self.report.failure.is_none() {
            self.report.failure = Some(format!("case {case}: {msg}"));
        }
    }
}

/// A random star-shaped cell: 3 to 10 vertices at jittered angles and radii
/// around a random centre, scaled by up to three decades. Every other cell
/// has all its edges split at 1/50.
pub fn random_cell(rng: &mut ChaCha8Rng, index: usize) -> Polygon {
    let n = rng.random_range(3..=10);
    let scale = math::pow(10.0, rng.random_range(-3.0..0.0));
    let center = Point2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    let step = 2.0 * PI / n as f64;
    let vertices: Vec<Point2> = (0..n)
        .map(|i| {
            let t = step * (i as f64 + rng.random_range(-0.3..0.3));
            let r = scale * rng.random_range(0.5..1.0);
            Point2::new(center.x + r * math::cos(t), center.y + r * math::sin(t))
        })
        .collect();
    let poly = Polygon::new(vertices);
    if index % 2 == 1 {
        let mut split = Vec::new();
        for (a, b) in poly.edges() {
            split.push(a);
            split.push(a.lerp(b, 1.0 / 50.0));
        }
        Polygon::new(split)
    } else {
        poly
    }
}

fn random_material(rng: &mut ChaCha8Rng) -> Material {
    let nu = [0.0, 0.35, 0.45, 0.49][rng.random_range(0..4)];
    Material::new(rng.random_range(0.5..2.0), nu, 1.0).expect("valid material")
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut c = alloc::vec![0.0; n];
    c[i] = 1.0;
    c
}

/// a^E(p, q) for vector polynomials given by interleaved scaled-monomial
/// coefficients, integrated pointwise.
pub fn energy_by_quadrature(el: &Element, m: &Material, pc: &[f64], qc: &[f64]) -> f64 {
    let (rule, _) = polygon_quadrature(&el.polygon, 2 * el.k());
    let jac = |c: &[f64], x: Point2| {
        let g = el.basis.eval_grad(x);
        let mut j = [[0.0; 2]; 2];
        for (a, ga) in g.iter().enumerate() {
            for comp in 0..2 {
                j[comp][0] += c[2 * a + comp] * ga[0];
                j[comp][1] += c[2 * a + comp] * ga[1];
            }
        }
        j
    };
    let mut total = 0.0;
    for (x, w) in rule.points.iter().zip(&rule.weights) {
        let (jp, jq) = (jac(pc, *x), jac(qc, *x));
        let sp = 0.5 * (jp[0][1] + jp[1][0]);
        let sq = 0.5 * (jq[0][1] + jq[1][0]);
        let (dp, dq) = (jp[0][0] + jp[1][1], jq[0][0] + jq[1][1]);
        total += w
            * (2.0 * m.mu * (jp[0][0] * jq[0][0] + jp[1][1] * jq[1][1] + 2.0 * sp * sq)
                + m.lambda * dp * dq);
    }
    total
}

fn operators(
    poly: &Polygon,
    k: Degree,
    m: &Material,
    stab: StabKind,
) -> core::result::Result<LocalOperators, String> {
    LocalOperators::new(poly.clone(), k, m, stab).map_err(|e| format!("{e}"))
}

fn for_cells(
    cfg: &CheckConfig,
    salt: u64,
    mut body: impl FnMut(usize, &Polygon, Degree, &Material, StabKind),
) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt);
    for i in 0..cfg.cells {
        let poly = random_cell(&mut rng, i);
        let k = if rng.random_bool(0.5) {
            Degree::ONE
        } else {
            Degree::TWO
        };
        let m = random_material(&mut rng);
        let stab = StabKind::ALL[rng.random_range(0..2)];
        body(i, &poly, k, &m, stab);
    }
}

/// Π reproduces [P_k]², Π⁰_k too, and Π is idempotent.
pub fn projector_suite(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tracker::new("projector reproduction and idempotence", 1e-10);
    for_cells(cfg, 1, |i, poly, k, m, stab| {
        match operators(poly, k, m, stab) {
            Ok(o) => {
                let np = o.element.num_poly();
                let eye = nalgebra::DMatrix::<f64>::identity(np, np);
                t.record(i, (&o.projection.pi_star * &o.projection.d - &eye).amax());
                t.record(i, (&o.l2.pi0_k * &o.projection.d - &eye).amax());
                let pd = &o.projection.pi_dof;
                t.record(i, (pd * pd - pd).amax() / pd.amax());
            }
            Err(e) => t.fail(i, e),
        }
    });
    t.report
}

/// ∫_{∂E} (v − Π v) and ∮ (v − Π v)·t vanish for random DOFs.
pub fn constraint_suite(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tracker::new("boundary-average and rot constraints", 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x51);
    for_cells(cfg, 2, |i, poly, k, m, stab| {
        match operators(poly, k, m, stab) {
            Ok(o) => {
                let el = &o.element;
                let v = DVector::from_fn(el.num_dofs(), |_, _| rng.random_range(-1.0..1.0));
                let w = &v - &o.projection.pi_dof * &v;
                let kk = k.get();
                let (mut avg, mut circ) = ([0.0; 2], 0.0);
                for e in 0..poly.len() {
                    let (a, b) = poly.edge(e);
                    let len = a.dist(b);
                    let tan = [(b.x - a.x) / len, (b.y - a.y) / len];
                    let nodes = el.layout.edge_nodes(e);
                    let rule = match edge_quadrature(a, b, 2 * kk) {
                        Ok(r) => r,
                        Err(err) => return t.fail(i, format!("{err}")),
                    };
                    for (x, wq) in rule.points.iter().zip(&rule.weights) {
                        let s = x.dist(a) / len;
                        let phi: Vec<f64> = if kk == 1 {
                            alloc::vec![1.0 - s, s]
                        } else {
                            alloc::vec![
                                (2.0 * s - 1.0) * (s - 1.0),
                                4.0 * s * (1.0 - s),
                                s * (2.0 * s - 1.0)
                            ]
                        };
                        for c in 0..2 {
                            let val: f64 = nodes
                                .iter()
                                .zip(&phi)
                                .map(|((nd, _), f)| f * w[DofLayout::dof(*nd, c)])
                                .sum();
                            avg[c] += wq * val;
                            circ += wq * val * tan[c];
                        }
                    }
                }
                let scale = v.norm() * poly.perimeter();
                t.record(i, avg[0].abs().max(avg[1].abs()).max(circ.abs()) / scale);
            }
            Err(e) => t.fail(i, e),
        }
    });
    t.report
}

/// K_E is symmetric with exactly the rigid modes as kernel.
pub fn kernel_suite(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tracker::new("stiffness symmetry and rigid kernel", 1e-11);
    for_cells(cfg, 3, |i, poly, k, m, stab| {
        match operators(poly, k, m, stab) {
            Ok(o) => {
                let kmat = &o.stiffness;
                let scale = kmat.amax();
                t.record(i, (kmat - kmat.transpose()).amax() / scale);
                for r in rigid_modes(&o.element) {
                    let rv = DVector::from_vec(r);
                    t.record(i, (kmat * &rv).amax() / (scale * rv.amax()));
                }
                let dim = rigid_kernel_dimension(kmat);
                if dim != 3 {
                    t.fail(i, format!("kernel dimension {dim}"));
                }
            }
            Err(e) => t.fail(i, e),
        }
    });
    t.report
}

/// Polygon quadrature against the exact boundary-integral moments.
pub fn quadrature_suite(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tracker::new("quadrature vs moments", 1e-12);
    for_cells(cfg, 4, |i, poly, _, _, _| {
        let basis = crate::quadrature::ScaledMonomialBasis::for_polygon(poly, 4);
        let moments = match polygon_monomial_moments(poly, &basis, 4) {
            Ok(m) => m,
            Err(e) => return t.fail(i, format!("{e}")),
        };
        let (rule, _) = polygon_quadrature(poly, 4);
        let mut quad = alloc::vec![0.0; moments.len()];
        for (x, w) in rule.points.iter().zip(&rule.weights) {
            for (q, m) in quad.iter_mut().zip(basis.eval(*x)) {
                *q += w * m;
            }
        }
        let area = poly.area();
        for (q, m) in quad.iter().zip(&moments) {
            t.record(i, (q - m).abs() / area);
        }
    });
    t.report
}

/// dof(p)ᵀ K_E dof(q) = a^E(p, q) for all vector monomials.
pub fn consistency_suite(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tracker::new("stiffness consistency oracle", 1e-10);
    for_cells(cfg, 5, |i, poly, k, m, stab| {
        match operators(poly, k, m, stab) {
            Ok(o) => {
                let el = &o.element;
                let np = el.num_poly();
                let scale = o.stiffness.amax().max(1.0);
                let dofs: Vec<DVector<f64>> = (0..np)
                    .map(|a| DVector::from_vec(polynomial_dofs(el, &unit(np, a))))
                    .collect();
                for a in 0..np {
                    let ka = &o.stiffness * &dofs[a];
                    for (b, db) in dofs.iter().enumerate() {
                        let exact = energy_by_quadrature(el, m, &unit(np, a), &unit(np, b));
                        t.record(i, (db.dot(&ka) - exact).abs() / scale);
                    }
                }
            }
            Err(e) => t.fail(i, e),
        }
    });
    t.report
}

/// The manufactured loads against central differences of σ(u), step 1e-5.
pub fn manufactured_suite(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tracker::new("manufactured load finite differences", 1e-5);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 6);
    let h = 1e-5;
    for i in 0..cfg.cells {
        let m = random_material(&mut rng);
        let id = if i % 2 == 0 {
            SolutionId::Sine
        } else {
            SolutionId::Poly3
        };
        let s = ManufacturedSolution::new(id, m, Domain::UnitSquare).expect("square supports both");
        let p = Point2::new(rng.random_range(0.05..0.95), rng.random_range(0.05..0.95));
        let stress = |q: Point2| {
            let g = s.grad(q);
            let div = g[0][0] + g[1][1];
            let e01 = 0.5 * (g[0][1] + g[1][0]);
            [
                [2.0 * m.mu * g[0][0] + m.lambda * div, 2.0 * m.mu * e01],
                [2.0 * m.mu * e01, 2.0 * m.mu * g[1][1] + m.lambda * div],
            ]
        };
        let (dx, dy) = (Point2::new(h, 0.0), Point2::new(0.0, h));
        let (sxp, sxm, syp, sym) = (
            stress(p + dx),
            stress(p - dx),
            stress(p + dy),
            stress(p - dy),
        );
        let f = s.f(p);
        let scale = f[0].abs().max(f[1].abs()).max(1.0);
        for c in 0..2 {
            let div = (sxp[c][0] - sxm[c][0] + syp[c][1] - sym[c][1]) / (2.0 * h);
            t.record(i, (f[c] + div / m.density).abs() / scale);
        }
    }
    t.report
}

/// Exact solutions of degree k on every square mesh kind, k = 1, 2, both
/// stabilizations, with and without edge splitting.
pub fn patch_suite(cfg: &CheckConfig, lin: &dyn LinearSolver) -> SuiteReport {
    let mut t = Tracker::new("global patch test", 1e-9);
    let m = Material::new(1.0, 0.35, 1.0).expect("valid material");
    let mut case = 0;
    for kind in MeshKind::ALL {
        for split in [None, Some(1.0 / 50.0)] {
            let mesh = match study_mesh(Domain::UnitSquare, kind, 4, cfg.seed, split) {
                Ok(mesh) => mesh,
                Err(e) => {
                    t.fail(case, format!("{kind}: {e}"));
                    continue;
                }
            };
            for k in [Degree::ONE, Degree::TWO] {
                let mut coeffs = [
                    [0.1, 0.2, -0.3, 0.0, 0.0, 0.0],
                    [-0.2, 0.4, 0.3, 0.0, 0.0, 0.0],
                ];
                if k == Degree::TWO {
                    coeffs[0][3..].copy_from_slice(&[0.4, 0.5, -0.6]);
                    coeffs[1][3..].copy_from_slice(&[-0.2, 0.7, 0.25]);
                }
                let exact = PolynomialSolution {
                    coeffs,
                    material: m,
                };
                for stab in StabKind::ALL {
                    let disc = Discretization {
                        degree: k,
                        material: m,
                        stab,
                    };
                    match patch_test(&mesh, &disc, &exact, lin) {
                        Ok(r) => t.record(case, r.rel_l2.max(r.rel_h1)),
                        Err(e) => t.fail(case, format!("{kind} k={} {stab}: {e}", k.get())),
                    }
                    case += 1;
                }
            }
        }
    }
    t.report
}

/// Interpolating p ∈ [P_k]² and projecting returns p.
pub fn interpolation_suite(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tracker::new("interpolation of polynomials", 1e-10);
    for_cells(cfg, 7, |i, poly, k, m, stab| {
        match operators(poly, k, m, stab) {
            Ok(o) => {
                let el = &o.element;
                let (c, h) = (el.basis.center, el.diameter);
                let field = |x: Point2| {
                    let (s, r) = ((x.x - c.x) / h, (x.y - c.y) / h);
                    if k == Degree::ONE {
                        [1.0 - s + 2.0 * r, 0.5 * s]
                    } else {
                        [s * r - 1.0, s * s + r * r - r]
                    }
                };
                let dofs = DVector::from_vec(interpolate_local(el, &field));
                let coeffs = &o.projection.pi_star * dofs;
                let (rule, _) = polygon_quadrature(&el.polygon, 2 * k.get());
                for x in &rule.points {
                    let mv = el.basis.eval(*x);
                    let f = field(*x);
                    for comp in 0..2 {
                        let v: f64 = (0..mv.len()).map(|a| mv[a] * coeffs[2 * a + comp]).sum();
                        t.record(i, (v - f[comp]).abs());
                    }
                }
            }
            Err(e) => t.fail(i, e),
        }
    });
    t.report
}

pub fn run_checks(cfg: &CheckConfig, lin: &dyn LinearSolver) -> Vec<SuiteReport> {
    alloc::vec![
        projector_suite(cfg),
        constraint_suite(cfg),
        kernel_suite(cfg),
        quadrature_suite(cfg),
        consistency_suite(cfg),
        interpolation_suite(cfg),
        manufactured_suite(cfg),
        patch_suite(cfg, lin),
    ]
}
