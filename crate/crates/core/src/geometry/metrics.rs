use alloc::vec::Vec;

use super::{point_line_distance, Mesh};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellMetrics {
    /// Cell diameter h_E.
    pub h_e: f64,
    pub area: f64,
    pub perimeter: f64,
    pub min_edge: f64,
    /// Smallest distance from the centroid to an edge line; a lower bound
    /// proxy for the radius of the ball the cell is star-shaped about.
    pub rho_hat: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshMetrics {
    /// Mesh size, the largest cell diameter.
    pub h: f64,
    pub per_cell: Vec<CellMetrics>,
}

impl MeshMetrics {
    pub fn min_edge(&self) -> f64 {
        self.per_cell
            .iter()
            .map(|c| c.min_edge)
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest ratio rho_hat / h_E over the mesh.
    pub fn min_chunkiness(&self) -> f64 {
        self.per_cell
            .iter()
            .map(|c| c.rho_hat / c.h_e)
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn mesh_metrics(mesh: &Mesh) -> MeshMetrics {
    let per_cell: Vec<CellMetrics> = (0..mesh.num_cells())
        .map(|c| {
            let poly = mesh.polygon(c);
            let centroid = poly.centroid();
            let rho_hat = poly
                .edges()
                .map(|(a, b)| point_line_distance(centroid, a, b))
                .fold(f64::INFINITY, f64::min);
            CellMetrics {
                h_e: poly.diameter(),
                area: poly.area(),
                perimeter: poly.perimeter(),
                min_edge: poly.min_edge(),
                rho_hat,
            }
        })
        .collect();
    let h = per_cell.iter().map(|c| c.h_e).fold(0.0, f64::max);
    MeshMetrics { h, per_cell }
}
