//! Caption tokenization, tagging and noun-phrase chunking.

mod chunk;
mod tag;
mod token;

use alloc::vec::Vec;

pub use chunk::{chunk_nps, classify_person, grammar_prefix_len, matches_grammar, ChunkCount, NpChunk};
pub use tag::{
    parse_count, pos_tag, tag_token, LexiconError, PersonLexicon, PosTag, TagLexicon, TaggedToken, UnknownTag,
};
pub use token::{char_slice, tokenize, Token, EDGE_PUNCTUATION};

/// Default tag lexicon shipped with the crate (`data/tags.tsv`).
pub const BUILTIN_TAGS: &str = include_str!("../../data/tags.tsv");
/// Default person head-noun lexicon (`data/person_heads.txt`).
pub const BUILTIN_PERSON_HEADS: &str = include_str!("../../data/person_heads.txt");

/// The two lexicons the text stage reads. Immutable once built.
#[derive(Debug, Clone, Default)]
pub struct Lexicons {
    pub tags: TagLexicon,
    pub people: PersonLexicon,
}

/// Tokens, tags and classified chunks of one caption.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Analysis {
    pub tokens: Vec<Token>,
    pub tagged: Vec<TaggedToken>,
    pub chunks: Vec<NpChunk>,
}

impl Analysis {
    pub fn person_chunks(&self) -> Vec<NpChunk> {
        self.chunks.iter().filter(|c| c.is_person).cloned().collect()
    }
}

impl Lexicons {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_TAGS, BUILTIN_PERSON_HEADS).expect("shipped lexicons parse")
    }

    pub fn parse(tags: &str, person_heads: &str) -> Result<Self, LexiconError> {
        Ok(Self { tags: TagLexicon::parse(tags)?, people: PersonLexicon::parse(person_heads)? })
    }

    /// Runs tokenize → tag → chunk → classify.
    pub fn analyze(&self, caption: &str) -> Analysis {
        let tokens = tokenize(caption);
        let tagged = pos_tag(&tokens, &self.tags);
        let chunks = chunk_nps(&tagged).into_iter().map(|c| classify_person(c, &tagged, &self.people)).collect();
        Analysis { tokens, tagged, chunks }
    }
}
