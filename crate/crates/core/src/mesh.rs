//! Staggered 1D mesh: scalars live in cells, velocities and fluxes on faces.
//!
//! Face `j` separates cell `j - 1` (left) from cell `j` (right). Face 0 is the
//! left boundary and face `n_cells` the right boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh1D {
    faces: Vec<f64>,
    centers: Vec<f64>,
    widths: Vec<f64>,
}

impl Mesh1D {
    pub fn uniform(x_left: f64, x_right: f64, n_cells: usize) -> Result<Self> {
        if !(x_left.is_finite() && x_right.is_finite()) || x_right <= x_left {
            return Err(Error::config(format!("degenerate domain [{x_left}, {x_right}]")));
        }
        if n_cells < 3 {
            return Err(Error::config(format!("need at least 3 cells, got {n_cells}")));
        }
        let h = (x_right - x_left) / n_cells as f64;
        let faces = (0..=n_cells)
            .map(|j| if j == n_cells { x_right } else { x_left + j as f64 * h })
            .collect();
        Self::from_faces(faces)
    }

    /// Mesh from strictly increasing face positions.
    pub fn from_faces(faces: Vec<f64>) -> Result<Self> {
        if faces.len() < 4 {
            return Err(Error::config("need at least 3 cells"));
        }
        if faces.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::config("face positions must be strictly increasing"));
        }
        let widths = faces.windows(2).map(|w| w[1] - w[0]).collect();
        let centers = faces.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        Ok(Self { faces, centers, widths })
    }

    pub fn n_cells(&self) -> usize {
        self.widths.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn x_left(&self) -> f64 {
        self.faces[0]
    }

    pub fn x_right(&self) -> f64 {
        self.faces[self.faces.len() - 1]
    }

    pub fn faces(&self) -> &[f64] {
        &self.faces
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn width(&self, cell: usize) -> f64 {
        self.widths[cell]
    }

    /// Cells on either side of face `j`; `None` on a boundary.
    pub fn face_cells(&self, face: usize) -> (Option<usize>, Option<usize>) {
        let left = face.checked_sub(1);
        let right = (face < self.n_cells()).then_some(face);
        (left, right)
    }

    /// Distance between the centers of the cells adjacent to interior face `j`.
    pub fn center_distance(&self, face: usize) -> f64 {
        self.centers[face] - self.centers[face - 1]
    }

    pub fn min_width(&self) -> f64 {
        self.widths.iter().copied().fold(f64::INFINITY, f64::min)
    }
}
