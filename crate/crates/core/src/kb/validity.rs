//! The transformation-validity matrix used for multi-label assignment.
//!
//! For every transformation key observed anywhere in the knowledge base the
//! matrix records, per dialect, whether that exact edit is attested there
//! (effective rating >= 2). It also records which untransformed source terms
//! are invalid to retain in a dialect because the dialect's mapping is
//! obligatory (rating 4).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dialect::Dialect;

use super::types::{normalize_term, Dimension, KnowledgeBase};

/// Identifies one kind of edit: a wordbank pair, a morph feature, or a
/// deterministic unit conversion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformKey {
    Word {
        source: String,
        target: String,
        dimension: Dimension,
    },
    Morph {
        feature_id: String,
    },
    Unit,
}

impl TransformKey {
    pub fn word(source: &str, target: &str, dimension: Dimension) -> TransformKey {
        TransformKey::Word {
            source: normalize_term(source),
            target: normalize_term(target),
            dimension,
        }
    }

    pub fn morph(feature_id: &str) -> TransformKey {
        TransformKey::Morph {
            feature_id: feature_id.to_string(),
        }
    }

    /// Stable string form used as the serialized map key.
    pub fn as_string(&self) -> String {
        match self {
            TransformKey::Word {
                source,
                target,
                dimension,
            } => {
                let tag = match dimension {
                    Dimension::Lexical => "lex",
                    Dimension::Orthographic => "orth",
                };
                format!("{tag}:{source}>{target}")
            }
            TransformKey::Morph { feature_id } => format!("morph:{feature_id}"),
            TransformKey::Unit => "unit".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityMatrix {
    /// key string -> validity flags in `Dialect::ALL` order.
    entries: BTreeMap<String, [bool; 9]>,
    /// lowercased source term -> "retaining the SAE form is invalid" flags.
    obligatory_sae_violations: BTreeMap<String, [bool; 9]>,
}

impl ValidityMatrix {
    fn dialect_slot(dialect: Dialect) -> usize {
        Dialect::ALL.iter().position(|d| *d == dialect).unwrap()
    }

    /// True when the key is an attested transformation in `dialect`.
    /// Unknown keys are valid nowhere.
    pub fn is_valid(&self, key: &TransformKey, dialect: Dialect) -> bool {
        match key {
            TransformKey::Unit => dialect.uses_metric(),
            _ => self
                .entries
                .get(&key.as_string())
                .map(|flags| flags[Self::dialect_slot(dialect)])
                .unwrap_or(false),
        }
    }

    pub fn contains_key(&self, key: &TransformKey) -> bool {
        matches!(key, TransformKey::Unit) || self.entries.contains_key(&key.as_string())
    }

    /// True when keeping `source_term` untransformed is invalid in `dialect`
    /// (the dialect's mapping for the term is rated 4).
    pub fn retaining_sae_violates(&self, source_term: &str, dialect: Dialect) -> bool {
        self.obligatory_sae_violations
            .get(&normalize_term(source_term))
            .map(|flags| flags[Self::dialect_slot(dialect)])
            .unwrap_or(false)
    }

    /// Source terms with an obligatory mapping in `dialect`.
    pub fn obligatory_sources(&self, dialect: Dialect) -> Vec<&str> {
        let slot = Self::dialect_slot(dialect);
        self.obligatory_sae_violations
            .iter()
            .filter(|(_, flags)| flags[slot])
            .map(|(term, _)| term.as_str())
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.obligatory_sae_violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Canonical serialized form; identical bytes for identical content.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }
}

/// Builds the validity matrix from a fully merged knowledge base. Pure: the
/// same knowledge base always yields a bit-identical matrix.
///
/// A wordbank key is valid in dialect `d` iff the governing row for the same
/// (source, dimension) in `d` has the same target and a QC-effective rating
/// >= 2. A morph key is valid iff the feature's prevalence in `d` is >= 2.
/// Retaining the SAE form violates `d` iff the governing mapping's
/// QC-effective rating is 4.
pub fn build_validity_matrix(kb: &KnowledgeBase) -> ValidityMatrix {
    let mut entries: BTreeMap<String, [bool; 9]> = BTreeMap::new();
    let mut obligatory: BTreeMap<String, [bool; 9]> = BTreeMap::new();

    // Collect every distinct (source, target, dimension) pair in the bank.
    let mut pairs: Vec<(String, String, Dimension)> = kb
        .mappings()
        .iter()
        .map(|m| {
            (
                normalize_term(&m.source_term),
                normalize_term(&m.target_term),
                m.dimension,
            )
        })
        .collect();
    pairs.sort();
    pairs.dedup();

    for (source, target, dimension) in pairs {
        let mut flags = [false; 9];
        for (slot, dialect) in Dialect::ALL.iter().enumerate() {
            if let Some(row) = kb.effective_mapping(&source, *dialect, dimension) {
                let rating = KnowledgeBase::qc_effective_rating(row);
                if normalize_term(&row.target_term) == target && rating.value() >= 2 {
                    flags[slot] = true;
                }
            }
        }
        let key = TransformKey::Word {
            source: source.clone(),
            target,
            dimension,
        };
        // Distinct targets for the same source share one obligation row.
        entries.entry(key.as_string()).or_insert(flags);
        let ob = obligatory.entry(source.clone()).or_insert([false; 9]);
        for (slot, dialect) in Dialect::ALL.iter().enumerate() {
            if let Some(row) = kb.effective_mapping_any(&source, *dialect) {
                if KnowledgeBase::qc_effective_rating(row).value() == 4 {
                    ob[slot] = true;
                }
            }
        }
    }

    for feature in kb.features() {
        let mut flags = [false; 9];
        for (slot, dialect) in Dialect::ALL.iter().enumerate() {
            if let Some(a) = kb.annotation(&feature.feature_id, *dialect) {
                if a.prevalence.value() >= 2 {
                    flags[slot] = true;
                }
            }
        }
        entries.insert(TransformKey::morph(&feature.feature_id).as_string(), flags);
    }

    // Drop all-false obligation rows so empty banks yield empty matrices.
    obligatory.retain(|_, flags| flags.iter().any(|f| *f));

    ValidityMatrix {
        entries,
        obligatory_sae_violations: obligatory,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{Rating, RatingSource, WordMapping};

    fn kb_with(rows: &[(&str, &str, Dialect, Dimension, u8)]) -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        for (s, t, d, dim, r) in rows {
            kb.insert_mapping(WordMapping {
                id: String::new(),
                source_term: s.to_string(),
                target_term: t.to_string(),
                dialect: *d,
                dimension: *dim,
                rating: Rating::new(*r).unwrap(),
                rating_source: RatingSource::Human,
                notes: None,
            })
            .unwrap();
        }
        kb
    }

    #[test]
    fn empty_kb_empty_matrix() {
        let matrix = build_validity_matrix(&KnowledgeBase::new());
        assert!(matrix.is_empty());
    }

    #[test]
    fn rating_one_row_invalid() {
        let kb = kb_with(&[("organize", "organise", Dialect::CA, Dimension::Orthographic, 1)]);
        let matrix = build_validity_matrix(&kb);
        let key = TransformKey::word("organize", "organise", Dimension::Orthographic);
        assert!(!matrix.is_valid(&key, Dialect::CA));
    }

    #[test]
    fn obligatory_only_for_rating_four() {
        let kb = kb_with(&[
            ("color", "colour", Dialect::GB, Dimension::Orthographic, 4),
            ("call", "ring", Dialect::GB, Dimension::Lexical, 3),
        ]);
        let matrix = build_validity_matrix(&kb);
        assert!(matrix.retaining_sae_violates("color", Dialect::GB));
        assert!(!matrix.retaining_sae_violates("call", Dialect::GB));
        assert!(!matrix.retaining_sae_violates("color", Dialect::US));
    }

    #[test]
    fn unit_key_valid_everywhere_but_us() {
        let matrix = build_validity_matrix(&KnowledgeBase::new());
        assert!(matrix.is_valid(&TransformKey::Unit, Dialect::GB));
        assert!(!matrix.is_valid(&TransformKey::Unit, Dialect::US));
    }

    #[test]
    fn rebuild_is_bit_identical() {
        let kb = kb_with(&[
            ("color", "colour", Dialect::GB, Dimension::Orthographic, 4),
            ("color", "colour", Dialect::AU, Dimension::Orthographic, 4),
            ("truck", "lorry", Dialect::GB, Dimension::Lexical, 3),
        ]);
        let a = build_validity_matrix(&kb).to_canonical_json();
        let b = build_validity_matrix(&kb).to_canonical_json();
        assert_eq!(a, b);
    }
}
