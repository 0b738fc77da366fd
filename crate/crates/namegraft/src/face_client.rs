//! Blocking client for an external face-identification service.
//!
//! The service answers `POST <endpoint>/identify` with body
//! `{"image_id": "..."}` and returns `{"faces": [{"name", "box", "confidence"}]}`.

use std::thread;
use std::time::Duration;

use namegraft_core::align::Identity;
use serde_json::Value;

use crate::record::parse_face;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);
pub const DEFAULT_RETRIES: u32 = 2;
const DEFAULT_BACKOFF: Duration = Duration::from_millis(250);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProviderErrorKind {
    #[error("request failed: {0}")]
    Transport(String),
    #[error("HTTP status {0}")]
    Status(u16),
    #[error("invalid response body: {0}")]
    InvalidBody(String),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("face service {endpoint} failed for image {image_id} after {attempts} attempt(s): {kind}")]
pub struct ProviderError {
    pub endpoint: String,
    pub image_id: String,
    pub attempts: u32,
    pub kind: ProviderErrorKind,
}

/// Shares one connection pool across threads; cheap to clone.
#[derive(Debug, Clone)]
pub struct FaceClient {
    agent: ureq::Agent,
    endpoint: String,
    retries: u32,
    backoff: Duration,
}

impl FaceClient {
    pub fn new(endpoint: impl Into<String>, timeout: Duration) -> Self {
        let agent =
            ureq::Agent::config_builder().timeout_global(Some(timeout)).http_status_as_error(false).build().into();
        Self {
            agent,
            endpoint: endpoint.into().trim_end_matches('/').to_string(),
            retries: DEFAULT_RETRIES,
            backoff: DEFAULT_BACKOFF,
        }
    }

    /// Base delay before the first retry; doubles on each further retry.
    pub fn with_backoff(mut self, backoff: Duration) -> Self {
        self.backoff = backoff;
        self
    }

    pub fn with_retries(mut self, retries: u32) -> Self {
        self.retries = retries;
        self
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    /// Fetches the faces of one image, validating boxes against its size.
    ///
    /// Transport failures, 5xx and 429 responses are retried; other statuses
    /// and malformed bodies fail at once.
    pub fn identify(&self, image_id: &str, width: u32, height: u32) -> Result<Vec<Identity>, ProviderError> {
        let url = format!("{}/identify", self.endpoint);
        let body = serde_json::json!({ "image_id": image_id });
        let fail = |attempts, kind| ProviderError {
            endpoint: self.endpoint.clone(),
            image_id: image_id.to_string(),
            attempts,
            kind,
        };

        let mut attempt = 0;
        loop {
            attempt += 1;
            let outcome = self.agent.post(&url).send_json(&body);
            let retryable = match outcome {
                Ok(mut resp) => {
                    let status = resp.status().as_u16();
                    if (200..300).contains(&status) {
                        let text = resp
                            .body_mut()
                            .read_to_string()
                            .map_err(|e| fail(attempt, ProviderErrorKind::InvalidBody(e.to_string())))?;
                        return parse_faces(&text, image_id, width, height)
                            .map_err(|msg| fail(attempt, ProviderErrorKind::InvalidBody(msg)));
                    }
                    let kind = ProviderErrorKind::Status(status);
                    if status >= 500 || status == 429 {
                        kind
                    } else {
                        return Err(fail(attempt, kind));
                    }
                }
                Err(e) => ProviderErrorKind::Transport(e.to_string()),
            };
            if attempt > self.retries {
                return Err(fail(attempt, retryable));
            }
            log::debug!("face service attempt {attempt} for {image_id} failed: {retryable}");
            thread::sleep(self.backoff * 2u32.pow(attempt - 1));
        }
    }
}

fn parse_faces(text: &str, image_id: &str, width: u32, height: u32) -> Result<Vec<Identity>, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let faces = value.get("faces").and_then(Value::as_array).ok_or_else(|| "missing \"faces\" array".to_string())?;
    faces
        .iter()
        .enumerate()
        .map(|(i, f)| parse_face(f, &format!("faces[{i}]"), Some(image_id.to_string()), width, height))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())
}
