//! # namegraft-core
//!
//! Allocation-only (`no_std` + `alloc`) building blocks for rewriting generic
//! image captions with the names of recognized people:
//!
//! - [`text`]: tokenization, lexicon-driven part-of-speech tagging, flat
//!   noun-phrase chunking and person classification.
//! - [`geometry`]: bounding boxes, IoU, non-maximum suppression and the
//!   mapping between an encoder's `g × g` attention grid and pixel space.
//! - [`align`]: binding identity names to person chunks, either in reading
//!   order or by maximizing attention mass inside face boxes.
//! - [`rewrite`]: replacing aligned chunk spans with rendered name lists.
//!
//! Everything here is a pure function over immutable inputs. File IO, JSON
//! and the CLI live in the `namegraft` crate.
//!
//! ```
//! use namegraft_core::{align, rewrite, text};
//! use namegraft_core::geometry::BoundingBox;
//!
//! let lexicons = text::Lexicons::builtin();
//! let analysis = lexicons.analyze("a man is delivering a speech");
//! let people = analysis.person_chunks();
//! let faces = [align::Identity::new("Obama", BoundingBox::new(50, 30, 80, 100), 0.97).unwrap()];
//! let result = align::sequential_align(&people, &faces);
//! let record = rewrite::substitute(
//!     "a man is delivering a speech",
//!     &analysis.tokens,
//!     &analysis.chunks,
//!     &result,
//! )
//! .unwrap();
//! assert_eq!(record.rewritten, "Obama is delivering a speech");
//! ```

#![no_std]

extern crate alloc;

pub mod align;
pub mod geometry;
pub mod rewrite;
pub mod text;

pub use align::{AlignMode, AlignmentResult, Identity, SkipReason};
pub use geometry::{AttentionMap, BoundingBox};
pub use rewrite::RewriteRecord;
pub use text::{ChunkCount, Lexicons, NpChunk, PosTag, TaggedToken, Token};
