use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use namegraft_core::align::DEFAULT_MIN_SCORE;
use namegraft_core::text::{LexiconError, Lexicons, BUILTIN_PERSON_HEADS, BUILTIN_TAGS};
use serde::{Deserialize, Serialize};

/// Environment variable that overrides the face-service endpoint.
pub const ENDPOINT_ENV: &str = "NAMEGRAFT_FACE_ENDPOINT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sequential,
    Attention,
    #[default]
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub mode: Mode,
    pub min_confidence: f64,
    pub min_score: f64,
    pub replace_possessives: bool,
    pub emit_scores: bool,
    /// Tag lexicon file; the shipped lexicon when unset.
    pub tag_lexicon: Option<PathBuf>,
    /// Person head-noun file; the shipped list when unset.
    pub person_lexicon: Option<PathBuf>,
    pub face_endpoint: Option<String>,
    pub timeout_secs: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            mode: Mode::Auto,
            min_confidence: 0.5,
            min_score: DEFAULT_MIN_SCORE,
            replace_possessives: false,
            emit_scores: false,
            tag_lexicon: None,
            person_lexicon: None,
            face_endpoint: None,
            timeout_secs: 10.0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("{field} = {value} is outside [0, 1]")]
    OutOfRange { field: &'static str, value: f64 },
    #[error("timeout_secs must be positive, got {0}")]
    Timeout(f64),
    #[error("lexicon {path}: {source}")]
    Lexicon { path: PathBuf, source: LexiconError },
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse { path: path.into(), source })
    }

    /// Applies `NAMEGRAFT_FACE_ENDPOINT` when set and non-empty.
    pub fn apply_env(&mut self) {
        if let Ok(endpoint) = std::env::var(ENDPOINT_ENV) {
            if !endpoint.trim().is_empty() {
                self.face_endpoint = Some(endpoint);
            }
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (field, value) in [("min_confidence", self.min_confidence), ("min_score", self.min_score)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::OutOfRange { field, value });
            }
        }
        if !(self.timeout_secs.is_finite() && self.timeout_secs > 0.0) {
            return Err(ConfigError::Timeout(self.timeout_secs));
        }
        for path in self.tag_lexicon.iter().chain(&self.person_lexicon) {
            if !path.is_file() {
                return Err(ConfigError::Read {
                    path: path.clone(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "lexicon file not found"),
                });
            }
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }

    /// Reads the configured lexicons, falling back to the shipped ones.
    pub fn load_lexicons(&self) -> Result<Lexicons, ConfigError> {
        let read = |path: &Option<PathBuf>, builtin: &'static str| -> Result<(String, PathBuf), ConfigError> {
            match path {
                Some(p) => fs::read_to_string(p)
                    .map(|t| (t, p.clone()))
                    .map_err(|source| ConfigError::Read { path: p.clone(), source }),
                None => Ok((builtin.to_string(), PathBuf::from("<builtin>"))),
            }
        };
        let (tags_src, tags_path) = read(&self.tag_lexicon, BUILTIN_TAGS)?;
        let (people_src, people_path) = read(&self.person_lexicon, BUILTIN_PERSON_HEADS)?;
        let tags = namegraft_core::text::TagLexicon::parse(&tags_src)
            .map_err(|source| ConfigError::Lexicon { path: tags_path, source })?;
        let people = namegraft_core::text::PersonLexicon::parse(&people_src)
            .map_err(|source| ConfigError::Lexicon { path: people_path, source })?;
        Ok(Lexicons { tags, people })
    }
}
