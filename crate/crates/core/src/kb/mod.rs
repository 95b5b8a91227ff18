//! Dialect knowledge base: wordbank mappings, morphosyntactic features,
//! ratings, model-mirror flags, and the validity matrix.

mod fill;
mod load;
mod ratings;
mod types;
mod validity;

pub use fill::{fill_missing_mapping, rate_mapping, verification_accepts, CandidateMapping, FillOutcome};
pub use load::{load_annotations, load_morph_catalog, write_kb_jsonl, AnnotationBatch};
pub use ratings::{rating_to_injection_prob, rating_to_reversion_prob, Rating};
pub use types::{
    Dimension, KnowledgeBase, MorphAnnotation, MorphFeature, RatingSource, WordMapping,
};
pub use validity::{build_validity_matrix, TransformKey, ValidityMatrix};
