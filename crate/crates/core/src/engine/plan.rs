//! Seed derivation and probabilistic rule sampling.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dialect::Dialect;
use crate::dialog::Variant;
use crate::hashing::hash64;
use crate::kb::{rating_to_injection_prob, KnowledgeBase, WordMapping};

/// Stable 64-bit seed for one (dialog, dialect, variant) work item. Distinct
/// across any coordinate change; identical across runs and platforms.
pub fn derive_rng_seed(global_seed: u64, base_id: &str, dialect: Dialect, variant: Variant) -> u64 {
    hash64(&[
        &global_seed.to_le_bytes(),
        base_id.as_bytes(),
        dialect.code().as_bytes(),
        variant.as_str().as_bytes(),
    ])
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A persisted, replayable plan for one morph pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformPlan {
    pub base_id: String,
    pub dialect: Dialect,
    pub variant: Variant,
    pub sampled_features: Vec<String>,
    pub rng_seed: u64,
}

/// Samples the morph features to apply for one dialog. One uniform draw is
/// consumed per annotated feature in catalog order, so for a shared rng the
/// RBT_model pool is always a subset of the RBT_user pool (mirror filtering
/// only zeroes probabilities, never shifts the draw sequence).
pub fn sample_features(
    kb: &KnowledgeBase,
    dialect: Dialect,
    variant: Variant,
    rng: &mut impl Rng,
) -> Vec<String> {
    assert!(
        matches!(variant, Variant::RbtUser | Variant::RbtModel),
        "feature sampling applies to RBT variants only"
    );
    let mut sampled = Vec::new();
    for (feature, annotation) in kb.resolved_annotations(dialect) {
        let mut prob = rating_to_injection_prob(annotation.prevalence);
        if variant == Variant::RbtModel && !annotation.model_mirror {
            prob = 0.0;
        }
        let draw: f64 = rng.random();
        if draw < prob {
            sampled.push(feature.feature_id.clone());
        }
    }
    sampled
}

/// Samples the specific wordbank rows offered to one OrthoLex pass, using the
/// same rating-to-probability mapping as feature sampling. One draw per
/// governing row in stable order.
pub fn sample_mappings<'kb>(
    kb: &'kb KnowledgeBase,
    dialect: Dialect,
    rng: &mut impl Rng,
) -> Vec<&'kb WordMapping> {
    let mut sampled = Vec::new();
    for row in kb.governing_rows(dialect) {
        let prob = rating_to_injection_prob(KnowledgeBase::qc_effective_rating(row));
        let draw: f64 = rng.random();
        if draw < prob {
            sampled.push(row);
        }
    }
    sampled
}
