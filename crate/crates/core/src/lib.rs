//! Generation and evaluation toolkit for parallel English-dialect dialog data.
//!
//! The crate is organized around the stages of the data pipeline:
//!
//! - [`kb`] — the dialect knowledge base: wordbank mappings, morphosyntactic
//!   features, prevalence ratings, and the validity matrix used for
//!   multi-label assignment.
//! - [`dialog`] — the dialog data model, the `Turn N: USER/ASSISTANT` text
//!   format, token-level diff extraction, and dataset persistence.
//! - [`gateway`] — prompt templates, a provider-agnostic completion client
//!   with retries, reply parsers, and a deterministic mock provider.
//! - [`seed`] — seed dialog generation and structural validation.
//! - [`engine`] — the OrthoLex and sequential morphosyntactic transformation
//!   passes with seeded, replayable sampling.
//! - [`qc`] — post-transformation audit, probabilistic reversion,
//!   false-negative application, and gold-label assignment.
//! - [`bench`] — benchmark item construction, evaluation, scoring, baselines,
//!   confusion matrices, and the per-dimension generation judges.
//! - [`pipeline`] — batch orchestration: configuration, stage execution,
//!   manifests, and resumability.

pub mod bench;
pub mod dialect;
pub mod dialog;
pub mod engine;
pub mod error;
pub mod gateway;
pub mod kb;
pub mod pipeline;
pub mod qc;
pub mod seed;

pub use dialect::Dialect;
pub use dialog::{Dialog, Mode, Speaker, TransformationRecord, TransformedDialog, Variant};
pub use error::{Error, Result};
pub use kb::{KnowledgeBase, Rating, ValidityMatrix};
