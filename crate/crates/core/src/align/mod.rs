//! Binding recognized names to person chunks.
//!
//! Two strategies are available. [`sequential_align`] hands out names in
//! left-to-right face order to chunks in caption order, which is all that is
//! needed when the chunks are interchangeable ("a man and a woman" next to two
//! faces). [`attention_align`] scores every chunk against every face by the
//! attention mass the chunk's tokens place inside the face box and picks the
//! best injective matching.
//!
//! Both are all-or-nothing per chunk: a chunk that needs `n` names and cannot
//! get all of them keeps none, and the names it would have taken are reported
//! as unassigned.

mod assign;
mod attention;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

pub use assign::{assign_optimal, OptimalAssignment, EXHAUSTIVE_LIMIT};
pub use attention::{attention_align, score_matrix, AlignConfig, ScoreMatrix, DEFAULT_MIN_SCORE};

use crate::geometry::{BoundingBox, GeometryError};
use crate::text::{ChunkCount, NpChunk};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlignError {
    #[error("attention mode requires attention map")]
    MissingAttention,
    #[error("attention rows do not match tokens ({rows} rows, {tokens} tokens)")]
    RowMismatch { rows: usize, tokens: usize },
    #[error("assignment size exceeds exhaustive bound ({size} > {EXHAUSTIVE_LIMIT})")]
    TooLarge { size: usize },
    #[error("score row {row} has {len} entries, expected {expected}")]
    RaggedScores { row: usize, len: usize, expected: usize },
    #[error("score at ({row}, {col}) is negative or not finite")]
    InvalidScore { row: usize, col: usize },
    #[error("identity name is empty")]
    EmptyName,
    #[error("identity confidence {0} outside [0, 1]")]
    BadConfidence(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A recognized face: who, where, and how sure the recognizer was.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Identity {
    pub name: String,
    #[cfg_attr(feature = "serde", serde(rename = "box"))]
    pub bbox: BoundingBox,
    pub confidence: f64,
}

impl Identity {
    pub fn new(name: impl Into<String>, bbox: BoundingBox, confidence: f64) -> Result<Self, AlignError> {
        let id = Self { name: name.into(), bbox, confidence };
        id.validate()?;
        Ok(id)
    }

    /// Checks the name and confidence; box bounds need the image and are
    /// checked by the record owner.
    pub fn validate(&self) -> Result<(), AlignError> {
        if self.name.trim().is_empty() {
            return Err(AlignError::EmptyName);
        }
        if !(0.0..=1.0).contains(&self.confidence) {
            return Err(AlignError::BadConfidence(self.confidence));
        }
        Ok(())
    }

    /// Reading order: left edge, then top edge, then the remaining fields so
    /// that the order never depends on input position.
    pub fn reading_order(&self, other: &Identity) -> Ordering {
        (self.bbox.x, self.bbox.y, &self.name, self.bbox.w, self.bbox.h)
            .cmp(&(other.bbox.x, other.bbox.y, &other.name, other.bbox.w, other.bbox.h))
            .then(self.confidence.total_cmp(&other.confidence))
    }
}

/// Identities sorted left to right.
pub fn in_reading_order(identities: &[Identity]) -> Vec<&Identity> {
    let mut sorted: Vec<&Identity> = identities.iter().collect();
    sorted.sort_by(|a, b| a.reading_order(b));
    sorted
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum AlignMode {
    Sequential,
    Attention,
}

impl fmt::Display for AlignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlignMode::Sequential => "sequential",
            AlignMode::Attention => "attention",
        })
    }
}

/// Why a person chunk was left as written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SkipReason {
    #[cfg_attr(feature = "serde", serde(rename = "no identities"))]
    NoIdentities,
    #[cfg_attr(feature = "serde", serde(rename = "insufficient names"))]
    InsufficientNames,
    #[cfg_attr(feature = "serde", serde(rename = "below min score"))]
    BelowMinScore,
    #[cfg_attr(feature = "serde", serde(rename = "possessive"))]
    Possessive,
}

impl SkipReason {
    pub fn as_str(self) -> &'static str {
        match self {
            SkipReason::NoIdentities => "no identities",
            SkipReason::InsufficientNames => "insufficient names",
            SkipReason::BelowMinScore => "below min score",
            SkipReason::Possessive => "possessive",
        }
    }
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Unmatched {
    pub chunk: usize,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AlignmentResult {
    pub mode_used: AlignMode,
    /// Chunk id to names, names in reading order.
    pub assignments: BTreeMap<usize, Vec<String>>,
    pub unassigned_names: Vec<String>,
    pub unmatched_chunks: Vec<Unmatched>,
    /// Plural chunks of unknown size whose quota of two names was a guess.
    pub plural_guesses: Vec<usize>,
    pub scores: Option<ScoreMatrix>,
}

impl AlignmentResult {
    pub fn empty(mode_used: AlignMode) -> Self {
        Self {
            mode_used,
            assignments: BTreeMap::new(),
            unassigned_names: Vec::new(),
            unmatched_chunks: Vec::new(),
            plural_guesses: Vec::new(),
            scores: None,
        }
    }

    pub fn assigned_names(&self) -> impl Iterator<Item = &String> {
        self.assignments.values().flatten()
    }

    pub fn reason_for(&self, chunk: usize) -> Option<SkipReason> {
        self.unmatched_chunks.iter().find(|u| u.chunk == chunk).map(|u| u.reason)
    }

    /// True when at least one chunk went in and none came out assigned.
    pub fn nothing_matched(&self) -> bool {
        self.assignments.is_empty() && !self.unmatched_chunks.is_empty()
    }
}

/// Reason for a chunk that received `got` of the names it needed.
fn shortfall(identities: usize) -> SkipReason {
    if identities == 0 {
        SkipReason::NoIdentities
    } else {
        SkipReason::InsufficientNames
    }
}

/// Assigns names in reading order to chunks in caption order.
///
/// A chunk of `Exact(n)` people takes the next `n` names. A plural chunk of
/// unknown size takes every remaining name (at least two) when it is the last
/// chunk, otherwise exactly two.
pub fn sequential_align(person_chunks: &[NpChunk], identities: &[Identity]) -> AlignmentResult {
    let mut result = AlignmentResult::empty(AlignMode::Sequential);
    let names: Vec<&String> = in_reading_order(identities).into_iter().map(|i| &i.name).collect();
    let mut next = 0;

    for (pos, chunk) in person_chunks.iter().enumerate() {
        let remaining = names.len() - next;
        let last = pos + 1 == person_chunks.len();
        let want = match chunk.count {
            ChunkCount::Exact(n) => (n as usize).max(1),
            ChunkCount::PluralUnknown if last => remaining.max(2),
            ChunkCount::PluralUnknown => {
                result.plural_guesses.push(chunk.id);
                2
            }
        };
        let take = want.min(remaining);
        let taken = &names[next..next + take];
        next += take;
        if take == want {
            result.assignments.insert(chunk.id, taken.iter().map(|n| (*n).clone()).collect());
        } else {
            result.unassigned_names.extend(taken.iter().map(|n| (*n).clone()));
            result.unmatched_chunks.push(Unmatched { chunk: chunk.id, reason: shortfall(identities.len()) });
        }
    }
    result.unassigned_names.extend(names[next..].iter().map(|n| (*n).clone()));
    result
}
