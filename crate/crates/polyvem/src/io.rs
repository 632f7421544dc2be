//! Plain-text formats.
//!
//! Mesh files:
//!
//! ```text
//! polymesh2d 1
//! <num vertices> <num cells>
//! x y b            one line per vertex, b = 1 on the boundary
//! m i_1 ... i_m    one line per cell, counter-clockwise, 0-based
//! ```
//!
//! `#` starts a comment. Floats are written in shortest round-trip form, so
//! a save/load cycle is exact.

use std::fmt::Write as _;
use std::path::Path;

use polyvem_core::geometry::Point2;
use polyvem_core::solver::{CsrMatrix, GlobalDofMap, GlobalNode};
use polyvem_core::{Cell, Mesh};

use crate::AppError;

pub const MESH_MAGIC: &str = "polymesh2d 1";

pub fn mesh_to_string(mesh: &Mesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{MESH_MAGIC}");
    let _ = writeln!(s, "{} {}", mesh.num_vertices(), mesh.num_cells());
    for (i, v) in mesh.vertices.iter().enumerate() {
        let b = mesh.boundary_vertex_flags.get(i).copied().unwrap_or(false);
        let _ = writeln!(s, "{} {} {}", v.x, v.y, u8::from(b));
    }
    for c in &mesh.cells {
        let _ = write!(s, "{}", c.len());
        for v in &c.vertex_ids {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    s
}

fn parse_error(origin: &str, line: usize, message: impl Into<String>) -> AppError {
    AppError::Parse {
        origin: origin.to_string(),
        line,
        message: message.into(),
    }
}

/// Parses a mesh; `origin` names the source in error messages.
pub fn parse_mesh(text: &str, origin: &str) -> Result<Mesh, AppError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| {
            parse_error(
                origin,
                text.lines().count(),
                format!("unexpected end of file, expected {what}"),
            )
        })
    };

    let (ln, magic) = next("header")?;
    if magic.split_whitespace().collect::<Vec<_>>() != ["polymesh2d", "1"] {
        return Err(parse_error(
            origin,
            ln,
            format!("expected '{MESH_MAGIC}', found '{magic}'"),
        ));
    }
    let (ln, counts) = next("vertex and cell counts")?;
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<Result<_, _>>()
        .map_err(|e| parse_error(origin, ln, format!("bad count: {e}")))?;
    let [nv, nc] = counts[..] else {
        return Err(parse_error(origin, ln, "expected '<vertices> <cells>'"));
    };

    let mut vertices = Vec::with_capacity(nv);
    let mut flags = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = next("a vertex line")?;
        let tok: Vec<&str> = l.split_whitespace().collect();
        if tok.len() != 3 {
            return Err(parse_error(origin, ln, "vertex lines need 'x y b'"));
        }
        let x: f64 = tok[0]
            .parse()
            .map_err(|_| parse_error(origin, ln, format!("bad coordinate '{}'", tok[0])))?;
        let y: f64 = tok[1]
            .parse()
            .map_err(|_| parse_error(origin, ln, format!("bad coordinate '{}'", tok[1])))?;
        if !x.is_finite() || !y.is_finite() {
            return Err(parse_error(origin, ln, "coordinates must be finite"));
        }
        let b = match tok[2] {
            "0" => false,
            "1" => true,
            other => {
                return Err(parse_error(
                    origin,
                    ln,
                    format!("boundary flag must be 0 or 1, found '{other}'"),
                ))
            }
        };
        vertices.push(Point2::new(x, y));
        flags.push(b);
    }

    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (ln, l) = next("a cell line")?;
        let ids: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .map_err(|e| parse_error(origin, ln, format!("bad index: {e}")))?;
        let (&m, rest) = ids
            .split_first()
            .ok_or_else(|| parse_error(origin, ln, "empty cell line"))?;
        if rest.len() != m {
            return Err(parse_error(
                origin,
                ln,
                format!("cell declares {m} vertices but lists {}", rest.len()),
            ));
        }
        if let Some(bad) = rest.iter().find(|&&v| v >= nv) {
            return Err(parse_error(
                origin,
                ln,
                format!("vertex index {bad} out of range (have {nv})"),
            ));
        }
        cells.push(Cell::new(rest.to_vec()));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_error(
            origin,
            ln,
            "trailing content after the last cell",
        ));
    }
    Ok(Mesh::new(vertices, cells, flags))
}

pub fn save_mesh(mesh: &Mesh, path: &Path) -> Result<(), AppError> {
    write_text(path, &mesh_to_string(mesh))
}

pub fn load_mesh(path: &Path) -> Result<Mesh, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    parse_mesh(&text, &path.display().to_string())
}

pub fn write_text(path: &Path, text: &str) -> Result<(), AppError> {
    std::fs::write(path, text).map_err(|e| AppError::io(path, e))
}

/// One line per global node: `node,kind,x,y,u1,u2`. Cell nodes report the
/// cell mean at the centroid.
pub fn solution_csv(map: &GlobalDofMap, dofs: &[f64]) -> String {
    let mut s = String::from("node,kind,x,y,u1,u2\n");
    for (i, (node, p)) in map.nodes.iter().zip(&map.node_points).enumerate() {
        let kind = match node {
            GlobalNode::Vertex(_) => "vertex",
            GlobalNode::Edge(..) => "edge",
            GlobalNode::Cell(_) => "cell",
        };
        let _ = writeln!(
            s,
            "{i},{kind},{},{},{},{}",
            p.x,
            p.y,
            dofs[2 * i],
            dofs[2 * i + 1]
        );
    }
    s
}

/// `x,y,u1,u2` samples of the projected solution.
pub fn samples_csv(samples: &[(Point2, [f64; 2])]) -> String {
    let mut s = String::from("x,y,u1,u2\n");
    for (p, u) in samples {
        let _ = writeln!(s, "{},{},{},{}", p.x, p.y, u[0], u[1]);
    }
    s
}

/// Lower triangle of a symmetric matrix plus its right-hand side:
///
/// ```text
/// %%sym-coord <n> <nnz>
/// i j a_ij        1-based, i >= j
/// %%rhs <n>
/// b_i
/// ```
pub fn sym_coord_string(a: &CsrMatrix, rhs: &[f64]) -> String {
    let lower: Vec<_> = a.triplets().filter(|(i, j, _)| i >= j).collect();
    let mut s = String::new();
    let _ = writeln!(s, "%%sym-coord {} {}", a.nrows(), lower.len());
    for (i, j, v) in lower {
        let _ = writeln!(s, "{} {} {v}", i + 1, j + 1);
    }
    let _ = writeln!(s, "%%rhs {}", rhs.len());
    for v in rhs {
        let _ = writeln!(s, "{v}");
    }
    s
}

pub fn parse_sym_coord(text: &str, origin: &str) -> Result<(CsrMatrix, Vec<f64>), AppError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (ln, head) = lines
        .next()
        .ok_or_else(|| parse_error(origin, 1, "empty file"))?;
    let head: Vec<&str> = head.split_whitespace().collect();
    let (n, nnz) = match head[..] {
        ["%%sym-coord", n, nnz] => (
            n.parse::<usize>()
                .map_err(|_| parse_error(origin, ln, "bad dimension"))?,
            nnz.parse::<usize>()
                .map_err(|_| parse_error(origin, ln, "bad entry count"))?,
        ),
        _ => return Err(parse_error(origin, ln, "expected '%%sym-coord <n> <nnz>'")),
    };
    let mut triplets = Vec::with_capacity(2 * nnz);
    for _ in 0..nnz {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_error(origin, 0, "missing entries"))?;
        let t: Vec<&str> = l.split_whitespace().collect();
        let parsed = (t.len() == 3)
            .then(|| {
                Some((
                    t[0].parse::<usize>().ok()?,
                    t[1].parse::<usize>().ok()?,
                    t[2].parse::<f64>().ok()?,
                ))
            })
            .flatten();
        let (i, j, v) = parsed.ok_or_else(|| parse_error(origin, ln, "expected 'i j value'"))?;
        if i == 0 || j == 0 || i > n || j > i {
            return Err(parse_error(origin, ln, "index outside the lower triangle"));
        }
        triplets.push((i - 1, j - 1, v));
        if i != j {
            triplets.push((j - 1, i - 1, v));
        }
    }
    let (ln, l) = lines
        .next()
        .ok_or_else(|| parse_error(origin, 0, "missing %%rhs section"))?;
    if l != format!("%%rhs {n}") {
        return Err(parse_error(origin, ln, format!("expected '%%rhs {n}'")));
    }
    let rhs = lines
        .take(n)
        .map(|(ln, l)| {
            l.parse::<f64>()
                .map_err(|_| parse_error(origin, ln, "bad rhs value"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if rhs.len() != n {
        return Err(parse_error(origin, 0, "rhs section too short"));
    }
    Ok((CsrMatrix::from_triplets(n, n, &triplets), rhs))
}
