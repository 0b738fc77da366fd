use alloc::string::String;
use alloc::vec::Vec;

use super::{
    assign_optimal, in_reading_order, shortfall, AlignError, AlignMode, AlignmentResult, Identity, SkipReason,
    Unmatched,
};
use crate::geometry::{cell_coverage, mass_with_coverage, AttentionMap};
use crate::text::{ChunkCount, NpChunk};

/// Score floor: about twice the mass a uniform map puts in one 7×7 cell.
pub const DEFAULT_MIN_SCORE: f64 = 0.04;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignConfig {
    pub min_score: f64,
}

impl Default for AlignConfig {
    fn default() -> Self {
        Self { min_score: DEFAULT_MIN_SCORE }
    }
}

/// Chunk-by-face attention scores.
///
/// Rows follow the chunk order given; columns follow faces in reading order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScoreMatrix {
    pub chunks: Vec<usize>,
    pub faces: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

/// Attention mass each chunk's tokens place inside each face box.
///
/// `token_count` is the caption's token count; the map must have one row per
/// token.
pub fn score_matrix(
    person_chunks: &[NpChunk],
    identities: &[Identity],
    map: Option<&AttentionMap>,
    token_count: usize,
    width: u32,
    height: u32,
) -> Result<ScoreMatrix, AlignError> {
    let map = map.ok_or(AlignError::MissingAttention)?;
    if map.len() != token_count {
        return Err(AlignError::RowMismatch { rows: map.len(), tokens: token_count });
    }
    let faces = in_reading_order(identities);
    let mut coverage = Vec::with_capacity(faces.len());
    for face in &faces {
        face.bbox.validate(width, height)?;
        coverage.push(cell_coverage(&face.bbox, map.grid_size(), width, height));
    }
    let mut values = Vec::with_capacity(person_chunks.len());
    for chunk in person_chunks {
        let tokens: Vec<usize> = chunk.token_indices().collect();
        if tokens.is_empty() {
            return Err(crate::geometry::GeometryError::NoTokens.into());
        }
        if let Some(&index) = tokens.iter().find(|&&t| t >= map.len()) {
            return Err(crate::geometry::GeometryError::TokenOutOfRange { index, rows: map.len() }.into());
        }
        values.push(coverage.iter().map(|cov| mass_with_coverage(map, &tokens, cov)).collect());
    }
    Ok(ScoreMatrix {
        chunks: person_chunks.iter().map(|c| c.id).collect(),
        faces: faces.iter().map(|f| f.name.clone()).collect(),
        values,
    })
}

/// Aligns by maximizing total attention mass over an injective chunk↔face
/// matching.
///
/// A chunk of `n` people contributes `n` slots sharing its score row (plural
/// chunks of unknown size contribute two); it is assigned only when every one
/// of its slots received a face scoring at least `min_score`.
pub fn attention_align(
    person_chunks: &[NpChunk],
    identities: &[Identity],
    map: Option<&AttentionMap>,
    token_count: usize,
    width: u32,
    height: u32,
    config: &AlignConfig,
) -> Result<AlignmentResult, AlignError> {
    let scores = score_matrix(person_chunks, identities, map, token_count, width, height)?;
    let faces = in_reading_order(identities);
    let mut result = AlignmentResult::empty(AlignMode::Attention);

    let mut slot_owner = Vec::new();
    let mut slot_rows = Vec::new();
    for (pos, chunk) in person_chunks.iter().enumerate() {
        let slots = match chunk.count {
            ChunkCount::Exact(n) => (n as usize).max(1),
            ChunkCount::PluralUnknown => {
                result.plural_guesses.push(chunk.id);
                2
            }
        };
        for _ in 0..slots {
            slot_owner.push(pos);
            slot_rows.push(scores.values[pos].clone());
        }
    }

    let optimal = assign_optimal(&slot_rows, config.min_score)?;

    let mut used = alloc::vec![false; faces.len()];
    for (pos, chunk) in person_chunks.iter().enumerate() {
        let slots: Vec<usize> = (0..slot_owner.len()).filter(|&s| slot_owner[s] == pos).collect();
        let mut got: Vec<usize> = slots.iter().filter_map(|&s| optimal.pairs[s]).collect();
        if got.len() == slots.len() {
            // column order is reading order
            got.sort_unstable();
            for &f in &got {
                used[f] = true;
            }
            result.assignments.insert(chunk.id, got.iter().map(|&f| faces[f].name.clone()).collect());
        } else {
            let reason = if slots.iter().any(|s| optimal.dropped.contains(s)) {
                SkipReason::BelowMinScore
            } else {
                shortfall(identities.len())
            };
            result.unmatched_chunks.push(Unmatched { chunk: chunk.id, reason });
        }
    }
    result.unassigned_names = faces.iter().zip(&used).filter(|(_, u)| !**u).map(|(f, _)| f.name.clone()).collect();
    result.scores = Some(scores);
    Ok(result)
}
