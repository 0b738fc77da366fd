use alloc::vec::Vec;

use super::GeometryError;

/// Axis-aligned pixel box: top-left corner plus extent.
///
/// Serialized as the array `[x, y, w, h]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(from = "[u32; 4]", into = "[u32; 4]"))]
pub struct BoundingBox {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl From<[u32; 4]> for BoundingBox {
    fn from([x, y, w, h]: [u32; 4]) -> Self {
        Self { x, y, w, h }
    }
}

impl From<BoundingBox> for [u32; 4] {
    fn from(b: BoundingBox) -> Self {
        [b.x, b.y, b.w, b.h]
    }
}

impl BoundingBox {
    pub const fn new(x: u32, y: u32, w: u32, h: u32) -> Self {
        Self { x, y, w, h }
    }

    /// The box covering a whole `width × height` image.
    pub const fn full(width: u32, height: u32) -> Self {
        Self::new(0, 0, width, height)
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    pub fn right(&self) -> u64 {
        self.x as u64 + self.w as u64
    }

    pub fn bottom(&self) -> u64 {
        self.y as u64 + self.h as u64
    }

    /// Checks positive extent and containment in a `width × height` image.
    pub fn validate(&self, width: u32, height: u32) -> Result<(), GeometryError> {
        if self.w == 0 || self.h == 0 {
            return Err(GeometryError::EmptyBox(*self));
        }
        if self.right() > width as u64 || self.bottom() > height as u64 {
            return Err(GeometryError::OutOfBounds { bbox: *self, width, height });
        }
        Ok(())
    }

    pub fn intersection_area(&self, other: &BoundingBox) -> u64 {
        let x0 = self.x.max(other.x) as u64;
        let y0 = self.y.max(other.y) as u64;
        let x1 = self.right().min(other.right());
        let y1 = self.bottom().min(other.bottom());
        x1.saturating_sub(x0) * y1.saturating_sub(y0)
    }

    pub fn contains(&self, other: &BoundingBox) -> bool {
        self.x <= other.x && self.y <= other.y && other.right() <= self.right() && other.bottom() <= self.bottom()
    }
}

/// Intersection over union; 0 for disjoint boxes.
pub fn iou(a: &BoundingBox, b: &BoundingBox) -> f64 {
    let inter = a.intersection_area(b);
    if inter == 0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    inter as f64 / union as f64
}

/// Greedy non-maximum suppression.
///
/// Boxes are visited by descending score (earlier input wins ties); a box is
/// kept unless its IoU with an already kept box exceeds `iou_threshold`.
/// Output is in visiting order.
pub fn nms(boxes: &[(BoundingBox, f64)], iou_threshold: f64) -> Vec<(BoundingBox, f64)> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[b].1.total_cmp(&boxes[a].1));

    let mut kept: Vec<(BoundingBox, f64)> = Vec::new();
    for i in order {
        let (candidate, score) = boxes[i];
        if kept.iter().all(|(k, _)| iou(k, &candidate) <= iou_threshold) {
            kept.push((candidate, score));
        }
    }
    kept
}
