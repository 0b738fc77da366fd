//! Face boxes and the attention grid.

mod bbox;
mod grid;

pub use bbox::{iou, nms, BoundingBox};
pub use grid::{
    attention_mass_in_box, cell_coverage, cell_rect, AttentionMap, CellRect, DEFAULT_GRID_SIZE, ROW_SUM_TOLERANCE,
};

pub(crate) use grid::mass_with_coverage;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("box {0:?} has zero extent")]
    EmptyBox(BoundingBox),
    #[error("box [{}, {}, {}, {}] exceeds image {width}x{height}", bbox.x, bbox.y, bbox.w, bbox.h)]
    OutOfBounds { bbox: BoundingBox, width: u32, height: u32 },
    #[error("grid size must be positive")]
    ZeroGrid,
    #[error("attention row {row} has {len} cells, expected {expected}")]
    RowLength { row: usize, len: usize, expected: usize },
    #[error("attention row {row} cell {cell} has invalid weight {value}")]
    BadWeight { row: usize, cell: usize, value: f64 },
    #[error("attention row {row} sums to {sum}, expected 1")]
    RowSum { row: usize, sum: f64 },
    #[error("no tokens in chunk span")]
    NoTokens,
    #[error("token {index} outside attention map with {rows} rows")]
    TokenOutOfRange { index: usize, rows: usize },
}
