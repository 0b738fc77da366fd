use alloc::string::String;
use alloc::vec::Vec;

/// Sentence punctuation peeled off the edges of whitespace-separated words.
pub const EDGE_PUNCTUATION: &[char] = &['.', ',', '!', '?', ';', ':', '\'', '"'];

/// A unit of caption text with its position in the raw string.
///
/// Offsets count Unicode scalar values (not bytes) and are half-open.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Token {
    pub text: String,
    pub index: usize,
    pub char_start: usize,
    pub char_end: usize,
}

impl Token {
    pub fn is_punctuation(&self) -> bool {
        !self.text.is_empty() && self.text.chars().all(|c| EDGE_PUNCTUATION.contains(&c))
    }

    pub fn is_possessive(&self) -> bool {
        is_possessive_marker(&self.text)
    }
}

pub(crate) fn is_possessive_marker(text: &str) -> bool {
    matches!(text, "'s" | "'S")
}

fn is_possessive_pair(a: char, b: char) -> bool {
    a == '\'' && matches!(b, 's' | 'S')
}

fn ends_with_possessive(chars: &[char]) -> bool {
    let n = chars.len();
    n > 2 && is_possessive_pair(chars[n - 2], chars[n - 1])
}

/// Splits a caption into tokens.
///
/// Words are separated by whitespace. Leading and trailing characters from
/// [`EDGE_PUNCTUATION`] become one token each, and a possessive `'s` is split
/// from its word. Empty input yields no tokens.
pub fn tokenize(raw: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut piece: Vec<char> = Vec::new();
    let mut piece_start = 0;
    for (pos, c) in raw.chars().enumerate() {
        if c.is_whitespace() {
            if !piece.is_empty() {
                split_piece(&piece, piece_start, &mut tokens);
                piece.clear();
            }
        } else {
            if piece.is_empty() {
                piece_start = pos;
            }
            piece.push(c);
        }
    }
    if !piece.is_empty() {
        split_piece(&piece, piece_start, &mut tokens);
    }
    tokens
}

fn split_piece(chars: &[char], start: usize, out: &mut Vec<Token>) {
    let mut lo = 0;
    let mut hi = chars.len();

    let mut leading = Vec::new();
    while lo < hi && EDGE_PUNCTUATION.contains(&chars[lo]) {
        // a bare "'s" stays whole
        if hi - lo == 2 && is_possessive_pair(chars[lo], chars[lo + 1]) {
            break;
        }
        leading.push(lo);
        lo += 1;
    }

    let mut trailing = Vec::new();
    while hi > lo && EDGE_PUNCTUATION.contains(&chars[hi - 1]) {
        hi -= 1;
        trailing.push(hi);
    }

    for at in leading {
        push(out, chars, start, at, at + 1);
    }
    if hi > lo {
        if ends_with_possessive(&chars[lo..hi]) {
            push(out, chars, start, lo, hi - 2);
            push(out, chars, start, hi - 2, hi);
        } else {
            push(out, chars, start, lo, hi);
        }
    }
    for at in trailing.into_iter().rev() {
        push(out, chars, start, at, at + 1);
    }
}

fn push(out: &mut Vec<Token>, chars: &[char], base: usize, from: usize, to: usize) {
    out.push(Token {
        text: chars[from..to].iter().collect(),
        index: out.len(),
        char_start: base + from,
        char_end: base + to,
    });
}

/// Returns the characters of `raw` in `[char_start, char_end)`.
pub fn char_slice(raw: &str, char_start: usize, char_end: usize) -> String {
    raw.chars().skip(char_start).take(char_end.saturating_sub(char_start)).collect()
}
