use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::token::{is_possessive_marker, Token};

/// Part-of-speech classes the chunk grammar distinguishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PosTag {
    DT,
    CD,
    JJ,
    NN,
    NNS,
    NNP,
    PUNCT,
    OTHER,
}

impl PosTag {
    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::DT => "DT",
            PosTag::CD => "CD",
            PosTag::JJ => "JJ",
            PosTag::NN => "NN",
            PosTag::NNS => "NNS",
            PosTag::NNP => "NNP",
            PosTag::PUNCT => "PUNCT",
            PosTag::OTHER => "OTHER",
        }
    }

    pub fn is_noun(self) -> bool {
        matches!(self, PosTag::NN | PosTag::NNS | PosTag::NNP)
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown part-of-speech tag {0:?}")]
pub struct UnknownTag(pub String);

impl FromStr for PosTag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "DT" => PosTag::DT,
            "CD" => PosTag::CD,
            "JJ" => PosTag::JJ,
            "NN" => PosTag::NN,
            "NNS" => PosTag::NNS,
            "NNP" => PosTag::NNP,
            "PUNCT" => PosTag::PUNCT,
            "OTHER" => PosTag::OTHER,
            other => return Err(UnknownTag(other.to_string())),
        })
    }
}

/// A token paired with its assigned tag.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TaggedToken {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub token: Token,
    pub tag: PosTag,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("line {line}: expected `word<TAB>TAG`")]
    MissingTab { line: usize },
    #[error("line {line}: {source}")]
    BadTag { line: usize, source: UnknownTag },
    #[error("line {line}: empty entry")]
    Empty { line: usize },
}

fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Word-to-tag lookup table, keyed by lowercase word.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TagLexicon {
    entries: BTreeMap<String, PosTag>,
}

impl TagLexicon {
    /// Parses `word<TAB>TAG` lines; `#` starts a comment line.
    pub fn parse(src: &str) -> Result<Self, LexiconError> {
        let mut entries = BTreeMap::new();
        for (line, text) in content_lines(src) {
            let (word, tag) = text.split_once('\t').ok_or(LexiconError::MissingTab { line })?;
            let word = word.trim();
            if word.is_empty() {
                return Err(LexiconError::Empty { line });
            }
            let tag = tag.trim().parse().map_err(|source| LexiconError::BadTag { line, source })?;
            entries.insert(word.to_lowercase(), tag);
        }
        Ok(Self { entries })
    }

    pub fn get(&self, word: &str) -> Option<PosTag> {
        self.entries.get(&word.to_lowercase()).copied()
    }

    pub fn insert(&mut self, word: &str, tag: PosTag) {
        self.entries.insert(word.to_lowercase(), tag);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Head nouns that refer to people.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PersonLexicon {
    heads: BTreeSet<String>,
}

impl PersonLexicon {
    pub fn parse(src: &str) -> Result<Self, LexiconError> {
        Ok(content_lines(src).map(|(_, w)| w.to_lowercase()).collect())
    }

    pub fn contains(&self, head: &str) -> bool {
        self.heads.contains(&head.to_lowercase())
    }

    pub fn insert(&mut self, head: &str) -> bool {
        self.heads.insert(head.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heads.is_empty()
    }
}

impl FromIterator<String> for PersonLexicon {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        Self { heads: iter.into_iter().collect() }
    }
}

const NUMBER_WORDS: [&str; 20] = [
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
    "twenty",
];

/// Parses a cardinal: number words one through twenty, or a positive digit string.
pub fn parse_count(text: &str) -> Option<u32> {
    if is_digits(text) {
        return text.parse().ok().filter(|&n| n >= 1);
    }
    let lower = text.to_lowercase();
    NUMBER_WORDS.iter().position(|w| *w == lower).map(|i| i as u32 + 1)
}

fn is_digits(text: &str) -> bool {
    !text.is_empty() && text.bytes().all(|b| b.is_ascii_digit())
}

fn has_suffix_rule(lower: &str, suffix: &str) -> bool {
    lower.chars().count() > 4 && lower.ends_with(suffix)
}

/// Tags one token given its position in the caption.
pub fn tag_token(token: &Token, lexicon: &TagLexicon) -> PosTag {
    let text = token.text.as_str();
    if token.is_punctuation() {
        return PosTag::PUNCT;
    }
    if is_possessive_marker(text) {
        return PosTag::OTHER;
    }
    if let Some(tag) = lexicon.get(text) {
        return tag;
    }
    if is_digits(text) || parse_count(text).is_some() {
        return PosTag::CD;
    }
    if token.index > 0 && text.chars().next().is_some_and(char::is_uppercase) {
        return PosTag::NNP;
    }
    let lower = text.to_lowercase();
    // verb and adverb morphology; nouns with these endings belong in the lexicon
    if ["ing", "ed", "ly"].iter().any(|s| has_suffix_rule(&lower, s)) {
        return PosTag::OTHER;
    }
    if lower.chars().count() > 3 && lower.ends_with('s') && !lower.ends_with("ss") {
        return PosTag::NNS;
    }
    PosTag::NN
}

pub fn pos_tag(tokens: &[Token], lexicon: &TagLexicon) -> Vec<TaggedToken> {
    tokens.iter().map(|t| TaggedToken { token: t.clone(), tag: tag_token(t, lexicon) }).collect()
}
