//! The JSONL input record and its validation.

use namegraft_core::align::Identity;
use namegraft_core::geometry::{AttentionMap, BoundingBox};
use serde::Serialize;
use serde_json::{Map, Value};

/// One image: its generic caption, recognized faces and (optionally) the
/// captioner's attention map.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageRecord {
    pub image_id: String,
    pub image_width: u32,
    pub image_height: u32,
    pub caption: String,
    pub faces: Vec<Identity>,
    pub attention: Option<AttentionMap>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RecordError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("schema error: {field}")]
    Schema { image_id: Option<String>, field: String },
    #[error("validation error: {detail}")]
    Validation { image_id: Option<String>, detail: String },
}

impl RecordError {
    pub fn image_id(&self) -> Option<&str> {
        match self {
            RecordError::Parse { .. } => None,
            RecordError::Schema { image_id, .. } | RecordError::Validation { image_id, .. } => image_id.as_deref(),
        }
    }

    /// "parse", "schema" or "validation".
    pub fn class(&self) -> &'static str {
        match self {
            RecordError::Parse { .. } => "parse",
            RecordError::Schema { .. } => "schema",
            RecordError::Validation { .. } => "validation",
        }
    }
}

struct Fields<'a> {
    obj: &'a Map<String, Value>,
    image_id: Option<String>,
    prefix: String,
}

impl<'a> Fields<'a> {
    fn schema(&self, field: &str) -> RecordError {
        RecordError::Schema { image_id: self.image_id.clone(), field: format!("{}{field}", self.prefix) }
    }

    fn invalid(&self, detail: impl Into<String>) -> RecordError {
        RecordError::Validation { image_id: self.image_id.clone(), detail: detail.into() }
    }

    fn get(&self, field: &str) -> Option<&'a Value> {
        self.obj.get(field).filter(|v| !v.is_null())
    }

    fn required(&self, field: &str) -> Result<&'a Value, RecordError> {
        self.get(field).ok_or_else(|| self.schema(field))
    }

    fn string(&self, field: &str) -> Result<&'a str, RecordError> {
        self.required(field)?.as_str().ok_or_else(|| self.schema(field))
    }

    fn uint(&self, field: &str) -> Result<u64, RecordError> {
        self.required(field)?.as_u64().ok_or_else(|| self.schema(field))
    }

    fn dimension(&self, field: &str) -> Result<u32, RecordError> {
        let v = self.uint(field)?;
        match u32::try_from(v) {
            Ok(0) => Err(self.invalid(format!("{field} must be positive"))),
            Ok(v) => Ok(v),
            Err(_) => Err(self.invalid(format!("{field} {v} too large"))),
        }
    }
}

/// Parses and validates one JSONL line. `line` is 1-based and only used in
/// error messages.
pub fn parse_record(json_line: &str, line: usize) -> Result<ImageRecord, RecordError> {
    let value: Value =
        serde_json::from_str(json_line).map_err(|e| RecordError::Parse { line, message: e.to_string() })?;
    let obj = value
        .as_object()
        .ok_or_else(|| RecordError::Schema { image_id: None, field: "record (expected a JSON object)".into() })?;
    let mut f = Fields { obj, image_id: None, prefix: String::new() };

    let image_id = f.string("image_id")?.to_string();
    f.image_id = Some(image_id.clone());
    let image_width = f.dimension("image_width")?;
    let image_height = f.dimension("image_height")?;
    let caption = f.string("caption")?.to_string();

    let faces_value = f.required("faces")?.as_array().ok_or_else(|| f.schema("faces"))?;
    let faces = faces_value
        .iter()
        .enumerate()
        .map(|(i, v)| parse_face(v, &format!("faces[{i}]"), f.image_id.clone(), image_width, image_height))
        .collect::<Result<Vec<_>, _>>()?;

    let attention = match (f.get("attention"), f.get("grid_size")) {
        (None, None) => None,
        (None, Some(_)) => return Err(f.invalid("grid_size given without attention")),
        (Some(_), None) => return Err(f.schema("grid_size")),
        (Some(rows), Some(_)) => {
            let grid_size = f.uint("grid_size")? as usize;
            let rows = number_rows(rows).ok_or_else(|| f.schema("attention"))?;
            Some(AttentionMap::new(grid_size, rows).map_err(|e| f.invalid(e.to_string()))?)
        }
    };

    Ok(ImageRecord { image_id, image_width, image_height, caption, faces, attention })
}

fn number_rows(v: &Value) -> Option<Vec<Vec<f64>>> {
    v.as_array()?.iter().map(|row| row.as_array()?.iter().map(Value::as_f64).collect()).collect()
}

/// Parses one `{"name", "box": [x, y, w, h], "confidence"}` object and checks
/// it against the image dimensions.
pub(crate) fn parse_face(
    v: &Value,
    prefix: &str,
    image_id: Option<String>,
    width: u32,
    height: u32,
) -> Result<Identity, RecordError> {
    let obj =
        v.as_object().ok_or_else(|| RecordError::Schema { image_id: image_id.clone(), field: prefix.to_string() })?;
    let f = Fields { obj, image_id, prefix: format!("{prefix}.") };
    let name = f.string("name")?.to_string();
    let coords = f.required("box")?.as_array().ok_or_else(|| f.schema("box"))?;
    if coords.len() != 4 {
        return Err(f.schema("box"));
    }
    let mut xywh = [0u32; 4];
    for (slot, c) in xywh.iter_mut().zip(coords) {
        *slot = c.as_u64().and_then(|c| u32::try_from(c).ok()).ok_or_else(|| f.schema("box"))?;
    }
    let confidence = f.required("confidence")?.as_f64().ok_or_else(|| f.schema("confidence"))?;
    let bbox = BoundingBox::from(xywh);
    bbox.validate(width, height).map_err(|e| f.invalid(format!("{prefix}: {e}")))?;
    Identity::new(name, bbox, confidence).map_err(|e| f.invalid(format!("{prefix}: {e}")))
}

#[derive(Serialize)]
struct WireRecord<'a> {
    image_id: &'a str,
    image_width: u32,
    image_height: u32,
    caption: &'a str,
    faces: &'a [Identity],
    #[serde(skip_serializing_if = "Option::is_none")]
    attention: Option<&'a [Vec<f64>]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid_size: Option<usize>,
}

impl ImageRecord {
    /// Serializes to a single JSON line (no trailing newline).
    pub fn to_json_line(&self) -> String {
        let wire = WireRecord {
            image_id: &self.image_id,
            image_width: self.image_width,
            image_height: self.image_height,
            caption: &self.caption,
            faces: &self.faces,
            attention: self.attention.as_ref().map(AttentionMap::rows),
            grid_size: self.attention.as_ref().map(AttentionMap::grid_size),
        };
        serde_json::to_string(&wire).expect("record serializes")
    }
}
