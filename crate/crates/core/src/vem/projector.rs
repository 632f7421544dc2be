use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::element::{edge_shape, DofLayout, Element, NodeKind};
use super::material::Material;
use crate::quadrature::edge_quadrature;
use crate::{Error, Result};

const CONSTRAINT_TOL: f64 = 1e-9;

/// Energy projector of a cell, as coefficient matrices acting on local DOFs.
///
/// Vector polynomials are indexed `2 * α + c` for scaled monomial α and
/// component c.
#[derive(Debug, Clone)]
pub struct EnergyProjection {
    /// a^E(p_β, p_γ) on [P_k]^2.
    pub g: DMatrix<f64>,
    /// DOF values of each vector monomial, N_dof × 2 dim P_k.
    pub d: DMatrix<f64>,
    /// Monomial coefficients of Π v, 2 dim P_k × N_dof.
    pub pi_star: DMatrix<f64>,
    /// DOFs of Π v, N_dof × N_dof.
    pub pi_dof: DMatrix<f64>,
}

/// L² projectors computable from the DOFs, as monomial coefficient matrices.
#[derive(Debug, Clone)]
pub struct L2Projections {
    /// Onto [P_k]^2.
    pub pi0_k: DMatrix<f64>,
    /// Onto [P_1]^2.
    pub pi0_1: DMatrix<f64>,
    /// Onto [P_{k-2}]^2, absent for k = 1.
    pub pi0_km2: Option<DMatrix<f64>>,
}

/// Gradient of m_(a,b) as at most two monomial terms per component, with
/// the 1/h factor folded into the coefficient.
fn grad_terms(a: u32, b: u32, h: f64) -> [Option<(f64, u32, u32)>; 2] {
    [
        (a > 0).then(|| (a as f64 / h, a - 1, b)),
        (b > 0).then(|| (b as f64 / h, a, b - 1)),
    ]
}

fn integrate_product(el: &Element, p: Option<(f64, u32, u32)>, q: Option<(f64, u32, u32)>) -> f64 {
    match (p, q) {
        (Some((cp, ap, bp)), Some((cq, aq, bq))) => cp * cq * el.moment(ap + aq, bp + bq),
        _ => 0.0,
    }
}

fn stiffness_on_polynomials(el: &Element, mat: &Material) -> DMatrix<f64> {
    let exps = el.basis.exponents();
    let h = el.diameter;
    let np = el.num_poly();
    let grads: Vec<_> = exps.iter().map(|&(a, b)| grad_terms(a, b, h)).collect();
    DMatrix::from_fn(np, np, |i, j| {
        let (ga, c) = (&grads[i / 2], i % 2);
        let (gb, d) = (&grads[j / 2], j % 2);
        let dot = if c == d {
            integrate_product(el, ga[0], gb[0]) + integrate_product(el, ga[1], gb[1])
        } else {
            0.0
        };
        mat.mu * (dot + integrate_product(el, ga[d], gb[c]))
            + mat.lambda * integrate_product(el, ga[c], gb[d])
    })
}

/// Hessian of m_(a,b) for total degree 2 (zero otherwise).
fn hessian(a: u32, b: u32, h: f64) -> [[f64; 2]; 2] {
    let s = 1.0 / (h * h);
    match (a, b) {
        (2, 0) => [[2.0 * s, 0.0], [0.0, 0.0]],
        (1, 1) => [[0.0, s], [s, 0.0]],
        (0, 2) => [[0.0, 0.0], [0.0, 2.0 * s]],
        _ => [[0.0; 2]; 2],
    }
}

/// Boundary-node weights ∫_e φ_j on each edge, ordered like `edge_nodes`.
fn edge_node_weights(k: usize, len: f64) -> Vec<f64> {
    if k == 1 {
        alloc::vec![0.5 * len, 0.5 * len]
    } else {
        alloc::vec![len / 6.0, 2.0 * len / 3.0, len / 6.0]
    }
}

/// D (N_dof × 2 dim P_k): the DOFs of every vector monomial.
fn dof_matrix(el: &Element) -> DMatrix<f64> {
    let layout = el.layout;
    let np = el.num_poly();
    let mut d = DMatrix::zeros(layout.num_dofs(), np);
    for node in 0..layout.num_nodes() {
        let vals = match layout.node_kind(node) {
            NodeKind::Moment => (0..el.basis.dim())
                .map(|a| el.moments[a] / el.area)
                .collect(),
            _ => el.basis.eval(el.node_point(node)),
        };
        for (a, v) in vals.iter().enumerate() {
            for c in 0..2 {
                d[(DofLayout::dof(node, c), 2 * a + c)] = *v;
            }
        }
    }
    d
}

/// Computes Π^∇_k from
///   a^E(Π v, p) = a^E(v, p)   for all p in [P_k]^2,
///   ∫_{∂E} (v − Π v) = 0,  ∫_E rot(v − Π v) = 0,
/// solved as one bordered system with the three constraints as Lagrange
/// rows. The right-hand side is obtained by integrating by parts.
pub fn energy_projector(el: &Element, mat: &Material) -> Result<EnergyProjection> {
    let k = el.k();
    let layout = el.layout;
    let ndof = layout.num_dofs();
    let np = el.num_poly();
    let h = el.diameter;
    let exps = el.basis.exponents();
    let g = stiffness_on_polynomials(el, mat);

    let mut b = DMatrix::zeros(np, ndof);
    // Constraint rows on polynomials (cp) and on DOFs (cv).
    let mut cp = DMatrix::zeros(3, np);
    let mut cv = DMatrix::zeros(3, ndof);

    for i in 0..layout.num_vertices {
        let (pa, pb) = el.polygon.edge(i);
        let len = pa.dist(pb);
        let t = (pb - pa) * (1.0 / len);
        let n = [t.y, -t.x];
        let nodes = layout.edge_nodes(i);
        for ((node, _), w) in nodes.iter().zip(edge_node_weights(k, len)) {
            cv[(0, DofLayout::dof(*node, 0))] += w;
            cv[(1, DofLayout::dof(*node, 1))] += w;
            cv[(2, DofLayout::dof(*node, 0))] += w * t.x;
            cv[(2, DofLayout::dof(*node, 1))] += w * t.y;
        }
        let rule = edge_quadrature(pa, pb, 2 * k)?;
        for (x, w) in rule.points.iter().zip(&rule.weights) {
            let s = (*x - pa).norm() / len;
            let phi = edge_shape(k, s);
            let vals = el.basis.eval(*x);
            let grads = el.basis.eval_grad(*x);
            for (a, gr) in grads.iter().enumerate() {
                let gn = gr[0] * n[0] + gr[1] * n[1];
                for c in 0..2 {
                    cp[(c, 2 * a + c)] += w * vals[a];
                    // σ(m e_c) n = μ(e_c (∇m·n) + ∇m n_c) + λ ∂_c m n
                    let mut trac = [mat.mu * gr[0] * n[c], mat.mu * gr[1] * n[c]];
                    trac[c] += mat.mu * gn;
                    trac[0] += mat.lambda * gr[c] * n[0];
                    trac[1] += mat.lambda * gr[c] * n[1];
                    for ((node, _), ph) in nodes.iter().zip(&phi) {
                        for (dcomp, tr) in trac.iter().enumerate() {
                            b[(2 * a + c, DofLayout::dof(*node, dcomp))] += w * tr * ph;
                        }
                    }
                }
            }
        }
    }

    for (a, &(ea, eb)) in exps.iter().enumerate() {
        let [gx, gy] = grad_terms(ea, eb, h);
        // rot(m e_1) = −∂_y m, rot(m e_2) = ∂_x m
        if let Some((cf, x, y)) = gy {
            cp[(2, 2 * a)] -= cf * el.moment(x, y);
        }
        if let Some((cf, x, y)) = gx {
            cp[(2, 2 * a + 1)] += cf * el.moment(x, y);
        }
    }

    if let Some(mnode) = layout.moment_node() {
        // −∫_E div σ(p) · v, with div σ(m e_c) = μ Δm e_c + (μ + λ) ∇∂_c m
        for (a, &(ea, eb)) in exps.iter().enumerate() {
            let hs = hessian(ea, eb, h);
            let lap = hs[0][0] + hs[1][1];
            for c in 0..2 {
                for dcomp in 0..2 {
                    let mut div = (mat.mu + mat.lambda) * hs[dcomp][c];
                    if dcomp == c {
                        div += mat.mu * lap;
                    }
                    b[(2 * a + c, DofLayout::dof(mnode, dcomp))] -= el.area * div;
                }
            }
        }
    }

    let scale = [1.0 / el.perimeter, 1.0 / el.perimeter, h / el.area];
    for (r, &s) in scale.iter().enumerate() {
        cp.row_mut(r).scale_mut(s);
        cv.row_mut(r).scale_mut(s);
    }

    let m = np + 3;
    let mut sys = DMatrix::zeros(m, m);
    sys.view_mut((0, 0), (np, np)).copy_from(&g);
    sys.view_mut((np, 0), (3, np)).copy_from(&cp);
    sys.view_mut((0, np), (np, 3)).copy_from(&cp.transpose());
    let mut rhs = DMatrix::zeros(m, ndof);
    rhs.view_mut((0, 0), (np, ndof)).copy_from(&b);
    rhs.view_mut((np, 0), (3, ndof)).copy_from(&cv);

    let sol = sys
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .ok_or_else(|| Error::Local("projector system is singular".into()))?;
    let pi_star = sol.rows(0, np).into_owned();

    let defect = (&cp * &pi_star - &cv).amax();
    let reference = cv.amax().max(1.0);
    if defect > CONSTRAINT_TOL * reference {
        return Err(Error::Local(format!(
            "projector constraints violated by {defect:e}"
        )));
    }

    let d = dof_matrix(el);
    let pi_dof = &d * &pi_star;
    Ok(EnergyProjection {
        g,
        d,
        pi_star,
        pi_dof,
    })
}

/// L² projectors from the enhanced-space moments.
///
/// For k = 2 the moments against m_α are those of Π^∇ v corrected along
/// m̄_α = |E|⁻¹ ∫ m_α, so that the cell mean is the DOF itself.
pub fn l2_projectors(el: &Element, proj: &EnergyProjection) -> Result<L2Projections> {
    let ndof = el.num_dofs();
    let dim = el.basis.dim();
    let mass = el.mass(dim);
    let mean = el.layout.moment_node();
    let bar = nalgebra::DVector::from_fn(dim, |a, _| el.moments[a] / el.area);
    let mut mom = DMatrix::zeros(2 * dim, ndof);
    for c in 0..2 {
        let pc = DMatrix::from_fn(dim, ndof, |g, j| proj.pi_star[(2 * g + c, j)]);
        let mut mc = &mass * &pc;
        if let Some(mn) = mean {
            // |E| · mean − ∫ Π v, where the first row of mc is ∫ m_0 Π v
            let mut gap = -mc.row(0).into_owned();
            gap[DofLayout::dof(mn, c)] += el.area;
            mc += &bar * gap;
        }
        for a in 0..dim {
            mom.row_mut(2 * a + c).copy_from(&mc.row(a));
        }
    }

    // M⁻¹ m̄ = e_0 / |E|, so the correction only moves the constant term
    let mut pi0_k = proj.pi_star.clone();
    if let Some(mn) = mean {
        for c in 0..2 {
            let mut gap =
                -(mass.row(0) * DMatrix::from_fn(dim, ndof, |g, j| proj.pi_star[(2 * g + c, j)]));
            gap[DofLayout::dof(mn, c)] += el.area;
            let mut row = pi0_k.row_mut(c);
            row += gap / el.area;
        }
    }
    let pi0_1 = if dim == 3 {
        pi0_k.clone()
    } else {
        solve_mass(&el.mass(3), &mom.rows(0, 6).into_owned())?
    };
    let pi0_km2 = mean.map(|mn| {
        let mut p = DMatrix::zeros(2, ndof);
        p[(0, DofLayout::dof(mn, 0))] = 1.0;
        p[(1, DofLayout::dof(mn, 1))] = 1.0;
        p
    });
    Ok(L2Projections {
        pi0_k,
        pi0_1,
        pi0_km2,
    })
}

/// Solves the component-wise mass systems for interleaved moment rows.
fn solve_mass(mass: &DMatrix<f64>, mom: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let dim = mass.nrows();
    let lu = mass.clone().lu();
    let mut out = DMatrix::zeros(2 * dim, mom.ncols());
    for c in 0..2 {
        let rows = DMatrix::from_fn(dim, mom.ncols(), |a, j| mom[(2 * a + c, j)]);
        let s = lu
            .solve(&rows)
            .ok_or_else(|| Error::Local("singular monomial mass matrix".into()))?;
        for a in 0..dim {
            out.row_mut(2 * a + c).copy_from(&s.row(a));
        }
    }
    Ok(out)
}
