//! JSONL pipeline, face-service client and command-line front end for the
//! caption rewriting in [`namegraft_core`].
//!
//! Input records carry a generic caption, recognized faces and optionally the
//! captioner's attention map; each produces one output record with person
//! noun phrases replaced by names.

pub mod batch;
pub mod config;
pub mod face_client;
pub mod pipeline;
pub mod record;

pub use batch::{run_batch, run_batch_files, ExitCode, Summary};
pub use config::{Config, Mode};
pub use face_client::{FaceClient, ProviderError};
pub use pipeline::{OutputRecord, Pipeline};
pub use record::{parse_record, ImageRecord, RecordError};
