//! Caption rewriting: aligned chunk spans become name lists.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::align::{AlignmentResult, SkipReason};
use crate::text::{NpChunk, Token};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("nothing to render")]
    NothingToRender,
    #[error("empty name in name list")]
    EmptyName,
    #[error("conflicting spans: chunks {0} and {1} overlap")]
    ConflictingSpans(usize, usize),
    #[error("alignment refers to unknown chunk {0}")]
    UnknownChunk(usize),
    #[error("chunk {id} span [{start}, {end}) outside {tokens} tokens")]
    BadSpan { id: usize, start: usize, end: usize, tokens: usize },
}

/// "A", "A and B", "A, B and C".
pub fn render_name_list<S: AsRef<str>>(names: &[S]) -> Result<String, RewriteError> {
    if names.iter().any(|n| n.as_ref().is_empty()) {
        return Err(RewriteError::EmptyName);
    }
    match names {
        [] => Err(RewriteError::NothingToRender),
        [one] => Ok(one.as_ref().to_string()),
        [init @ .., last] => {
            let head: Vec<&str> = init.iter().map(AsRef::as_ref).collect();
            Ok(alloc::format!("{} and {}", head.join(", "), last.as_ref()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Replacement {
    pub surface: String,
    /// Half-open token span `[start, end)`.
    pub span: [usize; 2],
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Skipped {
    pub surface: String,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RewriteRecord {
    pub original: String,
    pub rewritten: String,
    pub replacements: Vec<Replacement>,
    pub skipped: Vec<Skipped>,
}

/// Joins token texts with single spaces. Punctuation and a possessive `'s`
/// attach to the preceding token.
pub fn detokenize<S: AsRef<str>>(pieces: &[(S, bool)]) -> String {
    let mut out = String::new();
    for (i, (text, attach)) in pieces.iter().enumerate() {
        if i > 0 && !attach {
            out.push(' ');
        }
        out.push_str(text.as_ref());
    }
    out
}

fn attaches(token: &Token) -> bool {
    token.is_punctuation() || token.is_possessive()
}

/// Rewrites a caption, replacing each assigned chunk's whole span with its
/// rendered names. Unassigned chunks stay verbatim and are listed in
/// `skipped` when the alignment gives a reason for them.
pub fn substitute(
    original: &str,
    tokens: &[Token],
    chunks: &[NpChunk],
    alignment: &AlignmentResult,
) -> Result<RewriteRecord, RewriteError> {
    let find = |id: usize| chunks.iter().find(|c| c.id == id).ok_or(RewriteError::UnknownChunk(id));

    let mut replaced: Vec<(&NpChunk, &Vec<String>)> = Vec::new();
    for (&id, names) in &alignment.assignments {
        let chunk = find(id)?;
        if chunk.span_start >= chunk.span_end || chunk.span_end > tokens.len() {
            return Err(RewriteError::BadSpan {
                id,
                start: chunk.span_start,
                end: chunk.span_end,
                tokens: tokens.len(),
            });
        }
        replaced.push((chunk, names));
    }
    replaced.sort_by_key(|(c, _)| c.span_start);
    for pair in replaced.windows(2) {
        if pair[0].0.span_end > pair[1].0.span_start {
            return Err(RewriteError::ConflictingSpans(pair[0].0.id, pair[1].0.id));
        }
    }

    let mut pieces: Vec<(String, bool)> = Vec::with_capacity(tokens.len());
    let mut replacements = Vec::new();
    let mut at = 0;
    for (chunk, names) in &replaced {
        pieces.extend(tokens[at..chunk.span_start].iter().map(|t| (t.text.clone(), attaches(t))));
        pieces.push((render_name_list(names)?, false));
        replacements.push(Replacement {
            surface: chunk.surface.clone(),
            span: [chunk.span_start, chunk.span_end],
            names: (*names).clone(),
        });
        at = chunk.span_end;
    }
    pieces.extend(tokens[at..].iter().map(|t| (t.text.clone(), attaches(t))));

    let mut unmatched = alignment.unmatched_chunks.clone();
    unmatched.sort_by_key(|u| u.chunk);
    let skipped = unmatched
        .iter()
        .map(|u| Ok(Skipped { surface: find(u.chunk)?.surface.clone(), reason: u.reason }))
        .collect::<Result<Vec<_>, RewriteError>>()?;

    Ok(RewriteRecord { original: original.to_string(), rewritten: detokenize(&pieces), replacements, skipped })
}
