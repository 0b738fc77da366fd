//! Per-record orchestration: analyze the caption, filter faces, align, rewrite.

use namegraft_core::align::{
    attention_align, sequential_align, AlignConfig, AlignError, AlignMode, AlignmentResult, Identity, ScoreMatrix,
    SkipReason, Unmatched,
};
use namegraft_core::rewrite::{substitute, Replacement, Skipped};
use namegraft_core::text::{Analysis, Lexicons, NpChunk};
use serde::{Deserialize, Serialize};

use crate::config::{Config, ConfigError, Mode};
use crate::face_client::FaceClient;
use crate::record::{parse_record, ImageRecord};

/// One output JSONL line.
///
/// A failed record carries its original caption unchanged in `caption` and a
/// non-empty `errors` list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    pub image_id: Option<String>,
    pub original: String,
    pub caption: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_used: Option<AlignMode>,
    #[serde(default)]
    pub replacements: Vec<Replacement>,
    #[serde(default)]
    pub skipped: Vec<Skipped>,
    #[serde(default)]
    pub unassigned_names: Vec<String>,
    /// Chunks whose plural size was guessed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub plural_guesses: Vec<String>,
    /// Why attention alignment was abandoned for sequential alignment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores: Option<ScoreMatrix>,
}

impl OutputRecord {
    pub fn failed(image_id: Option<String>, original: String, error: String) -> Self {
        Self {
            line: None,
            image_id,
            caption: original.clone(),
            original,
            mode_used: None,
            replacements: Vec::new(),
            skipped: Vec::new(),
            unassigned_names: Vec::new(),
            plural_guesses: Vec::new(),
            fallback: None,
            errors: vec![error],
            scores: None,
        }
    }

    pub fn is_failed(&self) -> bool {
        !self.errors.is_empty()
    }
}

/// Alignment of one record plus what the caption analysis produced.
#[derive(Debug, Clone)]
pub struct Aligned {
    pub analysis: Analysis,
    pub alignment: AlignmentResult,
    pub fallback: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum RecordFailure {
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error(transparent)]
    Provider(#[from] crate::face_client::ProviderError),
    #[error(transparent)]
    Rewrite(#[from] namegraft_core::rewrite::RewriteError),
}

/// Immutable after construction; shared by reference across worker threads.
#[derive(Debug, Clone)]
pub struct Pipeline {
    config: Config,
    lexicons: Lexicons,
    faces: Option<FaceClient>,
}

impl Pipeline {
    /// Validates the config, loads lexicons and connects the face client when
    /// an endpoint is configured.
    pub fn new(config: Config) -> Result<Self, ConfigError> {
        config.validate()?;
        let lexicons = config.load_lexicons()?;
        let faces = config.face_endpoint.as_ref().map(|e| FaceClient::new(e.clone(), config.timeout()));
        Ok(Self { config, lexicons, faces })
    }

    pub fn with_face_client(mut self, client: FaceClient) -> Self {
        self.faces = Some(client);
        self
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn lexicons(&self) -> &Lexicons {
        &self.lexicons
    }

    /// Faces for a record: from the service when one is configured, else the
    /// record's own, keeping those at or above `min_confidence`.
    fn identities(&self, record: &ImageRecord) -> Result<Vec<Identity>, RecordFailure> {
        let all = match &self.faces {
            Some(client) => client.identify(&record.image_id, record.image_width, record.image_height)?,
            None => record.faces.clone(),
        };
        Ok(all.into_iter().filter(|f| f.confidence >= self.config.min_confidence).collect())
    }

    pub fn align(&self, record: &ImageRecord) -> Result<Aligned, RecordFailure> {
        let faces = self.identities(record)?;
        let analysis = self.lexicons.analyze(&record.caption);
        let (eligible, possessive): (Vec<NpChunk>, Vec<NpChunk>) =
            analysis.person_chunks().into_iter().partition(|c| self.config.replace_possessives || !c.possessive);

        let attention = |chunks: &[NpChunk]| {
            attention_align(
                chunks,
                &faces,
                record.attention.as_ref(),
                analysis.tokens.len(),
                record.image_width,
                record.image_height,
                &AlignConfig { min_score: self.config.min_score },
            )
        };

        let mut fallback = None;
        let mut alignment = match self.config.mode {
            Mode::Sequential => sequential_align(&eligible, &faces),
            Mode::Attention => attention(&eligible)?,
            Mode::Auto if record.attention.is_none() => sequential_align(&eligible, &faces),
            Mode::Auto => match attention(&eligible) {
                Ok(r) if !r.nothing_matched() => r,
                Ok(r) => {
                    fallback = Some("attention alignment matched no chunks".to_string());
                    let mut seq = sequential_align(&eligible, &faces);
                    seq.scores = r.scores;
                    seq
                }
                Err(e) => {
                    fallback = Some(format!("attention alignment failed: {e}"));
                    sequential_align(&eligible, &faces)
                }
            },
        };
        alignment
            .unmatched_chunks
            .extend(possessive.iter().map(|c| Unmatched { chunk: c.id, reason: SkipReason::Possessive }));
        alignment.unmatched_chunks.sort_by_key(|u| u.chunk);
        Ok(Aligned { analysis, alignment, fallback })
    }

    fn try_run(&self, record: &ImageRecord) -> Result<OutputRecord, RecordFailure> {
        let Aligned { analysis, alignment, fallback } = self.align(record)?;
        let rewrite = substitute(&record.caption, &analysis.tokens, &analysis.chunks, &alignment)?;
        let surface = |id: usize| analysis.chunks.iter().find(|c| c.id == id).map(|c| c.surface.clone());
        Ok(OutputRecord {
            line: None,
            image_id: Some(record.image_id.clone()),
            original: rewrite.original,
            caption: rewrite.rewritten,
            mode_used: Some(alignment.mode_used),
            replacements: rewrite.replacements,
            skipped: rewrite.skipped,
            unassigned_names: alignment.unassigned_names,
            plural_guesses: alignment.plural_guesses.iter().filter_map(|&id| surface(id)).collect(),
            fallback,
            errors: Vec::new(),
            scores: if self.config.emit_scores { alignment.scores } else { None },
        })
    }

    /// Never fails: problems are reported in the output's `errors`.
    pub fn run_record(&self, record: &ImageRecord) -> OutputRecord {
        self.try_run(record).unwrap_or_else(|e| {
            log::warn!("record {} failed: {e}", record.image_id);
            OutputRecord::failed(Some(record.image_id.clone()), record.caption.clone(), e.to_string())
        })
    }

    /// Parses and runs one input line (1-based `line`).
    pub fn process_line(&self, text: &str, line: usize) -> OutputRecord {
        let mut out = match parse_record(text, line) {
            Ok(record) => self.run_record(&record),
            Err(e) => {
                log::warn!("line {line}: {e}");
                let image_id = e.image_id().map(str::to_string).or_else(|| peek_image_id(text));
                OutputRecord::failed(image_id, peek_caption(text).unwrap_or_default(), e.to_string())
            }
        };
        out.line = Some(line);
        out
    }
}

fn peek(text: &str, field: &str) -> Option<String> {
    let v: serde_json::Value = serde_json::from_str(text).ok()?;
    v.get(field)?.as_str().map(str::to_string)
}

fn peek_image_id(text: &str) -> Option<String> {
    peek(text, "image_id")
}

fn peek_caption(text: &str) -> Option<String> {
    peek(text, "caption")
}
