use alloc::string::String;
use alloc::vec::Vec;

use super::tag::{parse_count, PersonLexicon, PosTag, TaggedToken};

/// How many people a chunk denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ChunkCount {
    Exact(u32),
    PluralUnknown,
}

/// A flat noun phrase over the half-open token span `[span_start, span_end)`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NpChunk {
    /// Ordinal of the chunk within its caption.
    pub id: usize,
    pub span_start: usize,
    pub span_end: usize,
    pub head_index: usize,
    pub is_person: bool,
    pub count: ChunkCount,
    pub surface: String,
    /// The chunk is directly followed by a possessive `'s`.
    pub possessive: bool,
}

impl NpChunk {
    pub fn len(&self) -> usize {
        self.span_end - self.span_start
    }

    pub fn is_empty(&self) -> bool {
        self.span_end == self.span_start
    }

    pub fn token_indices(&self) -> core::ops::Range<usize> {
        self.span_start..self.span_end
    }

    pub fn overlaps(&self, other: &NpChunk) -> bool {
        self.span_start < other.span_end && other.span_start < self.span_end
    }
}

/// Length of the longest prefix of `tags` matching `DT? CD? JJ* (NN|NNS|NNP)+`.
///
/// The four parts draw from disjoint tag classes, so the greedy parse is the
/// only parse.
pub fn grammar_prefix_len(tags: &[PosTag]) -> Option<usize> {
    let mut i = 0;
    if tags.first() == Some(&PosTag::DT) {
        i += 1;
    }
    if tags.get(i) == Some(&PosTag::CD) {
        i += 1;
    }
    while tags.get(i) == Some(&PosTag::JJ) {
        i += 1;
    }
    let nouns_from = i;
    while tags.get(i).is_some_and(|t| t.is_noun()) {
        i += 1;
    }
    (i > nouns_from).then_some(i)
}

/// True when the whole tag sequence is one chunk.
pub fn matches_grammar(tags: &[PosTag]) -> bool {
    grammar_prefix_len(tags) == Some(tags.len())
}

fn count_for(span: &[TaggedToken]) -> ChunkCount {
    if let Some(n) = span.iter().filter(|t| t.tag == PosTag::CD).find_map(|t| parse_count(&t.token.text)) {
        return ChunkCount::Exact(n);
    }
    match span.last().map(|t| t.tag) {
        Some(PosTag::NNS) => ChunkCount::PluralUnknown,
        _ => ChunkCount::Exact(1),
    }
}

/// Finds non-overlapping chunks left to right, taking the longest match at each
/// position. Chunks come back unclassified (`is_person == false`).
pub fn chunk_nps(tagged: &[TaggedToken]) -> Vec<NpChunk> {
    let tags: Vec<PosTag> = tagged.iter().map(|t| t.tag).collect();
    let mut chunks = Vec::new();
    let mut at = 0;
    while at < tags.len() {
        let Some(len) = grammar_prefix_len(&tags[at..]) else {
            at += 1;
            continue;
        };
        let end = at + len;
        let span = &tagged[at..end];
        let surface = span.iter().map(|t| t.token.text.as_str()).collect::<Vec<_>>().join(" ");
        chunks.push(NpChunk {
            id: chunks.len(),
            span_start: at,
            span_end: end,
            head_index: end - 1,
            is_person: false,
            count: count_for(span),
            surface,
            possessive: tagged.get(end).is_some_and(|t| t.token.is_possessive()),
        });
        at = end;
    }
    chunks
}

/// Marks a chunk as people-referring when its head noun is in the lexicon, and
/// fills in its referent count.
pub fn classify_person(mut chunk: NpChunk, tagged: &[TaggedToken], people: &PersonLexicon) -> NpChunk {
    let head = &tagged[chunk.head_index].token.text;
    chunk.is_person = people.contains(head);
    chunk.count = count_for(&tagged[chunk.span_start..chunk.span_end]);
    chunk
}
