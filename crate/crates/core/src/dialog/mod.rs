//! Dialog data model, the `Turn N: USER/ASSISTANT` text format,
//! transformation-record diffing, and dataset persistence.

mod dataset;
mod diff;
mod tokens;
mod turn_format;
mod types;

pub use dataset::{
    read_dataset, read_jsonl, write_atomic, write_dataset, write_jsonl, DatasetManifest,
};
pub use diff::{
    apply_edits, apply_records, compose, current_offsets, diff_extract, lcs_edits, rebuild_turns,
    Edit,
};
pub use tokens::{contains_term, tokenize, Token};
pub use turn_format::{parse_turn_format, render_turn_format};
pub use types::{
    Dialog, Mode, RecordDimension, RuleRef, Speaker, TransformationRecord, TransformedDialog, Turn,
    Utterance,
};
