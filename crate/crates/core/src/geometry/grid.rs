use alloc::vec::Vec;

use super::{BoundingBox, GeometryError};

/// Row sums of an attention map must be within this of 1.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

/// Default encoder grid side (a 7×7 feature map, 49 cells).
pub const DEFAULT_GRID_SIZE: usize = 7;

/// Real-valued rectangle in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellRect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl CellRect {
    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    fn overlap_area(&self, b: &BoundingBox) -> f64 {
        let x0 = self.x.max(b.x as f64);
        let x1 = (self.x + self.w).min(b.right() as f64);
        let y0 = self.y.max(b.y as f64);
        let y1 = (self.y + self.h).min(b.bottom() as f64);
        (x1 - x0).max(0.0) * (y1 - y0).max(0.0)
    }
}

/// Pixel rectangle of grid cell `cell_index` (row-major) on a `grid_size ×
/// grid_size` grid laid over a `width × height` image.
///
/// Cell edges are computed as `k · W / g` so neighbouring cells share edges
/// exactly and the cells tile the image.
pub fn cell_rect(cell_index: usize, grid_size: usize, width: u32, height: u32) -> CellRect {
    debug_assert!(grid_size > 0 && cell_index < grid_size * grid_size);
    let row = cell_index / grid_size;
    let col = cell_index % grid_size;
    let edge = |k: usize, extent: u32| k as f64 * extent as f64 / grid_size as f64;
    let (x0, x1) = (edge(col, width), edge(col + 1, width));
    let (y0, y1) = (edge(row, height), edge(row + 1, height));
    CellRect { x: x0, y: y0, w: x1 - x0, h: y1 - y0 }
}

/// Fraction of each grid cell's area that lies inside `bbox`.
pub fn cell_coverage(bbox: &BoundingBox, grid_size: usize, width: u32, height: u32) -> Vec<f64> {
    (0..grid_size * grid_size)
        .map(|c| {
            let rect = cell_rect(c, grid_size, width, height);
            let area = rect.area();
            if area > 0.0 {
                rect.overlap_area(bbox) / area
            } else {
                0.0
            }
        })
        .collect()
}

/// Per-token attention distributions over a `g × g` spatial grid.
///
/// Row `t` belongs to the caption token emitted at step `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionMap {
    grid_size: usize,
    rows: Vec<Vec<f64>>,
}

impl AttentionMap {
    /// Validates shape, sign and row normalization.
    pub fn new(grid_size: usize, rows: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        if grid_size == 0 {
            return Err(GeometryError::ZeroGrid);
        }
        let cells = grid_size * grid_size;
        for (row, weights) in rows.iter().enumerate() {
            if weights.len() != cells {
                return Err(GeometryError::RowLength { row, len: weights.len(), expected: cells });
            }
            if let Some(cell) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
                return Err(GeometryError::BadWeight { row, cell, value: weights[cell] });
            }
            let sum: f64 = weights.iter().sum();
            if !((1.0 - ROW_SUM_TOLERANCE)..=(1.0 + ROW_SUM_TOLERANCE)).contains(&sum) {
                return Err(GeometryError::RowSum { row, sum });
            }
        }
        Ok(Self { grid_size, rows })
    }

    /// Every row equal to `1 / g²`.
    pub fn uniform(grid_size: usize, tokens: usize) -> Self {
        let cells = grid_size * grid_size;
        Self { grid_size, rows: alloc::vec![alloc::vec![1.0 / cells as f64; cells]; tokens] }
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn cells(&self) -> usize {
        self.grid_size * self.grid_size
    }

    /// Number of token rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<f64>> {
        self.rows
    }
}

/// Mean over the listed token rows of the attention mass falling inside
/// `bbox`, with each cell weighted by the fraction of its area the box covers.
pub fn attention_mass_in_box(
    map: &AttentionMap,
    token_indices: &[usize],
    bbox: &BoundingBox,
    width: u32,
    height: u32,
) -> Result<f64, GeometryError> {
    if token_indices.is_empty() {
        return Err(GeometryError::NoTokens);
    }
    if let Some(&index) = token_indices.iter().find(|&&t| t >= map.len()) {
        return Err(GeometryError::TokenOutOfRange { index, rows: map.len() });
    }
    bbox.validate(width, height)?;
    let coverage = cell_coverage(bbox, map.grid_size, width, height);
    Ok(mass_with_coverage(map, token_indices, &coverage))
}

pub(crate) fn mass_with_coverage(map: &AttentionMap, token_indices: &[usize], coverage: &[f64]) -> f64 {
    let total: f64 =
        token_indices.iter().map(|&t| map.rows[t].iter().zip(coverage).map(|(w, c)| w * c).sum::<f64>()).sum();
    (total / token_indices.len() as f64).clamp(0.0, 1.0)
}
