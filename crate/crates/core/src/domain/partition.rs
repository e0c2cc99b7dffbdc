use super::check_unit;
use crate::error::{Error, Result};

/// Largest number of cells a partition may hold.
const MAX_CELLS: usize = 1 << 32;

/// Regular grid of cubes tiling `[0, 1]^d`.
///
/// The requested side length `h` is rounded down to `1 / ceil(1/h)` so the
/// cells tile the unit cube exactly. Cells are half-open on the upper side
/// except along the upper boundary, which folds into the last cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CubePartition {
    dim: usize,
    requested_side: f64,
    cells_per_axis: usize,
    total_cells: usize,
}

impl CubePartition {
    pub fn new(dim: usize, side: f64) -> Result<Self> {
        if dim < 1 {
            return Err(Error::param("dim", "must be >= 1"));
        }
        if !(side > 0.0 && side <= 1.0) {
            return Err(Error::param("h", format!("must lie in (0, 1], got {side}")));
        }
        let per_axis = (1.0 / side).ceil();
        if per_axis > MAX_CELLS as f64 {
            return Err(Error::EnumerationTooLarge { size: per_axis as u128, limit: MAX_CELLS as u128 });
        }
        Self::with_cells_per_axis(dim, per_axis as usize).map(|mut p| {
            p.requested_side = side;
            p
        })
    }

    /// A partition with an explicit number of cells along each axis.
    pub fn with_cells_per_axis(dim: usize, cells_per_axis: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::param("dim", "must be >= 1"));
        }
        if cells_per_axis < 1 {
            return Err(Error::param("cells_per_axis", "must be >= 1"));
        }
        let total_cells = u32::try_from(dim)
            .ok()
            .and_then(|d| cells_per_axis.checked_pow(d))
            .filter(|&g| g <= MAX_CELLS)
            .ok_or(Error::EnumerationTooLarge {
                size: (cells_per_axis as u128).saturating_pow(dim.min(64) as u32),
                limit: MAX_CELLS as u128,
            })?;
        Ok(Self {
            dim,
            requested_side: 1.0 / cells_per_axis as f64,
            cells_per_axis,
            total_cells,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells_per_axis
    }

    pub fn num_cells(&self) -> usize {
        self.total_cells
    }

    /// The side length as requested by the caller.
    pub fn requested_side(&self) -> f64 {
        self.requested_side
    }

    /// The effective cell width `1 / cells_per_axis`.
    pub fn width(&self) -> f64 {
        1.0 / self.cells_per_axis as f64
    }

    /// Row-major cell index of `x` (first coordinate most significant).
    pub fn cube_index(&self, x: &[f64]) -> Result<usize> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: x.len() });
        }
        let mut index = 0usize;
        for (axis, &xi) in x.iter().enumerate() {
            check_unit(axis, xi)?;
            index = index * self.cells_per_axis + self.axis_index(xi);
        }
        Ok(index)
    }

    /// Index along one axis; the caller guarantees `xi` in `[0, 1]`.
    pub(crate) fn axis_index(&self, xi: f64) -> usize {
        ((xi * self.cells_per_axis as f64).floor() as usize).min(self.cells_per_axis - 1)
    }

    /// Per-axis indices of a cell, inverse of the row-major combination.
    pub fn axis_indices(&self, cell: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        let mut rest = cell;
        for slot in out.iter_mut().rev() {
            *slot = rest % self.cells_per_axis;
            rest /= self.cells_per_axis;
        }
        out
    }

    pub fn center(&self, cell: usize) -> Vec<f64> {
        let w = self.width();
        self.axis_indices(cell).into_iter().map(|i| (i as f64 + 0.5) * w).collect()
    }
}
