//! Knowledge-base record types and queries.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dialect::Dialect;
use crate::error::{Error, Result};

use super::ratings::Rating;

/// Wordbank dimension. Morphosyntactic edits are cataloged separately as
/// features, not wordbank rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Lexical,
    Orthographic,
}

impl Dimension {
    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Lexical => "lexical",
            Dimension::Orthographic => "orthographic",
        }
    }

    pub fn parse(s: &str) -> Result<Dimension> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lexical" => Ok(Dimension::Lexical),
            "orthographic" => Ok(Dimension::Orthographic),
            other => Err(Error::Validation(format!(
                "unknown wordbank dimension `{other}`"
            ))),
        }
    }
}

/// Who produced a rating. Human rows always shadow model-produced rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatingSource {
    Human,
    Llm,
}

/// One wordbank row: a source-dialect term and its dialect form, with the
/// attestation rating for that dialect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordMapping {
    pub id: String,
    pub source_term: String,
    pub target_term: String,
    pub dialect: Dialect,
    pub dimension: Dimension,
    pub rating: Rating,
    pub rating_source: RatingSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl WordMapping {
    pub fn stable_id(
        source_term: &str,
        dialect: Dialect,
        dimension: Dimension,
        rating_source: RatingSource,
    ) -> String {
        let src_tag = match rating_source {
            RatingSource::Human => "h",
            RatingSource::Llm => "m",
        };
        format!(
            "{}:{}:{}:{}",
            dialect.code(),
            dimension.as_str(),
            source_term.to_lowercase(),
            src_tag
        )
    }

    fn validate(&self) -> Result<()> {
        if self.rating.value() >= 2
            && self.source_term.to_lowercase() == self.target_term.to_lowercase()
        {
            return Err(Error::Validation(format!(
                "mapping `{}` has rating {} but source equals target",
                self.id, self.rating
            )));
        }
        if self.source_term.trim().is_empty() || self.target_term.trim().is_empty() {
            return Err(Error::Validation(format!("mapping `{}` has empty term", self.id)));
        }
        Ok(())
    }
}

/// A morphosyntactic transformation rule: catalog entry with regenerated
/// guideline text and a worked example pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphFeature {
    pub feature_id: String,
    pub rule_name: String,
    pub original_example: String,
    pub transformed_example: String,
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub human_comments: Option<String>,
}

impl MorphFeature {
    fn validate(&self) -> Result<()> {
        if self.original_example.trim().is_empty() || self.transformed_example.trim().is_empty() {
            return Err(Error::Validation(format!(
                "feature `{}` has an empty example",
                self.feature_id
            )));
        }
        if self.original_example == self.transformed_example {
            return Err(Error::Validation(format!(
                "feature `{}` has identical original and transformed examples",
                self.feature_id
            )));
        }
        Ok(())
    }
}

/// Per-dialect annotation of a morph feature: prevalence plus whether model
/// output should reproduce the feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphAnnotation {
    pub feature_id: String,
    pub dialect: Dialect,
    pub prevalence: Rating,
    pub model_mirror: bool,
}

/// The merged knowledge base. Immutable once construction finishes; shared
/// read-only across workers.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    mappings: Vec<WordMapping>,
    features: Vec<MorphFeature>,
    annotations: Vec<MorphAnnotation>,
    verification_threshold: f64,
    // (source_lower, dialect, dimension) -> [human idx, llm idx]
    mapping_index: HashMap<(String, Dialect, Dimension), [Option<usize>; 2]>,
    feature_index: HashMap<String, usize>,
    annotation_index: HashMap<(String, Dialect), usize>,
}

impl KnowledgeBase {
    pub fn new() -> KnowledgeBase {
        KnowledgeBase {
            verification_threshold: 1.0,
            ..Default::default()
        }
    }

    pub fn with_verification_threshold(mut self, tau: f64) -> KnowledgeBase {
        self.verification_threshold = tau;
        self
    }

    /// Acceptance threshold (τ) for the binary candidate verification filter.
    pub fn verification_threshold(&self) -> f64 {
        self.verification_threshold
    }

    pub fn mappings(&self) -> &[WordMapping] {
        &self.mappings
    }

    /// Features in catalog order. Rule application follows this order.
    pub fn features(&self) -> &[MorphFeature] {
        &self.features
    }

    pub fn annotations(&self) -> &[MorphAnnotation] {
        &self.annotations
    }

    pub fn insert_mapping(&mut self, mut mapping: WordMapping) -> Result<()> {
        mapping.validate()?;
        if mapping.id.is_empty() {
            mapping.id = WordMapping::stable_id(
                &mapping.source_term,
                mapping.dialect,
                mapping.dimension,
                mapping.rating_source,
            );
        }
        let key = (
            mapping.source_term.to_lowercase(),
            mapping.dialect,
            mapping.dimension,
        );
        let slot = match mapping.rating_source {
            RatingSource::Human => 0,
            RatingSource::Llm => 1,
        };
        let entry = self.mapping_index.entry(key).or_default();
        if entry[slot].is_some() {
            return Err(Error::Validation(format!(
                "duplicate {:?} mapping for ({}, {}, {})",
                mapping.rating_source,
                mapping.source_term,
                mapping.dialect,
                mapping.dimension.as_str()
            )));
        }
        entry[slot] = Some(self.mappings.len());
        self.mappings.push(mapping);
        Ok(())
    }

    pub fn insert_feature(&mut self, feature: MorphFeature) -> Result<()> {
        feature.validate()?;
        if self.feature_index.contains_key(&feature.feature_id) {
            return Err(Error::Validation(format!(
                "duplicate feature id `{}`",
                feature.feature_id
            )));
        }
        self.feature_index
            .insert(feature.feature_id.clone(), self.features.len());
        self.features.push(feature);
        Ok(())
    }

    pub fn insert_annotation(&mut self, row: MorphAnnotation) -> Result<()> {
        let key = (row.feature_id.clone(), row.dialect);
        if self.annotation_index.contains_key(&key) {
            return Err(Error::Validation(format!(
                "duplicate annotation for feature `{}` in {}",
                row.feature_id, row.dialect
            )));
        }
        self.annotation_index.insert(key, self.annotations.len());
        self.annotations.push(row);
        Ok(())
    }

    /// Checks referential integrity: every annotation must name a cataloged
    /// feature. Call once after all inputs are merged.
    pub fn check_integrity(&self) -> Result<()> {
        for row in &self.annotations {
            if !self.feature_index.contains_key(&row.feature_id) {
                return Err(Error::Validation(format!(
                    "annotation references unknown feature `{}`",
                    row.feature_id
                )));
            }
        }
        Ok(())
    }

    pub fn feature(&self, feature_id: &str) -> Option<&MorphFeature> {
        self.feature_index.get(feature_id).map(|&i| &self.features[i])
    }

    pub fn annotation(&self, feature_id: &str, dialect: Dialect) -> Option<&MorphAnnotation> {
        self.annotation_index
            .get(&(feature_id.to_string(), dialect))
            .map(|&i| &self.annotations[i])
    }

    fn rows(
        &self,
        source_lower: &str,
        dialect: Dialect,
        dimension: Dimension,
    ) -> [Option<&WordMapping>; 2] {
        match self
            .mapping_index
            .get(&(source_lower.to_string(), dialect, dimension))
        {
            Some([h, l]) => [h.map(|i| &self.mappings[i]), l.map(|i| &self.mappings[i])],
            None => [None, None],
        }
    }

    /// The governing mapping for a source term: the human row when one
    /// exists, otherwise the model-rated row.
    pub fn effective_mapping(
        &self,
        source_term: &str,
        dialect: Dialect,
        dimension: Dimension,
    ) -> Option<&WordMapping> {
        let [h, l] = self.rows(&source_term.to_lowercase(), dialect, dimension);
        h.or(l)
    }

    /// Governing mapping for a source term across both wordbank dimensions.
    pub fn effective_mapping_any(
        &self,
        source_term: &str,
        dialect: Dialect,
    ) -> Option<&WordMapping> {
        [Dimension::Lexical, Dimension::Orthographic]
            .into_iter()
            .find_map(|dim| self.effective_mapping(source_term, dialect, dim))
    }

    /// Rating used for sampling, validity, and quality control: human rows
    /// as-is; model-rated rows are demoted to 1 unless rated 4.
    pub fn qc_effective_rating(mapping: &WordMapping) -> Rating {
        match mapping.rating_source {
            RatingSource::Human => mapping.rating,
            RatingSource::Llm => {
                if mapping.rating.value() == 4 {
                    mapping.rating
                } else {
                    Rating::ABSENT
                }
            }
        }
    }

    /// Finds the mapping row explaining an observed (source → target) edit,
    /// with human rows taking priority over model rows for the same pair.
    pub fn attribute_pair(
        &self,
        source_span: &str,
        replacement: &str,
        dialect: Dialect,
    ) -> Option<&WordMapping> {
        let source_lower = normalize_term(source_span);
        let target_lower = normalize_term(replacement);
        for dim in [Dimension::Lexical, Dimension::Orthographic] {
            let [h, l] = self.rows(&source_lower, dialect, dim);
            for row in [h, l].into_iter().flatten() {
                if normalize_term(&row.target_term) == target_lower {
                    return Some(row);
                }
            }
        }
        None
    }

    pub fn mapping_by_id(&self, id: &str) -> Option<&WordMapping> {
        self.mappings.iter().find(|m| m.id == id)
    }

    /// Distinct source terms across all dialect wordbanks, sorted. These
    /// double as the seed-word pool.
    pub fn source_terms(&self) -> Vec<String> {
        let mut terms: Vec<String> = self
            .mappings
            .iter()
            .map(|m| m.source_term.to_lowercase())
            .collect();
        terms.sort();
        terms.dedup();
        terms
    }

    /// Governing rows for one dialect, deduplicated by (dimension, source),
    /// in a stable order. This is the per-dialect rule pool.
    pub fn governing_rows(&self, dialect: Dialect) -> Vec<&WordMapping> {
        let mut keys: Vec<(Dimension, String)> = self
            .mappings
            .iter()
            .filter(|m| m.dialect == dialect)
            .map(|m| (m.dimension, m.source_term.to_lowercase()))
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|(dim, src)| self.effective_mapping(&src, dialect, dim))
            .collect()
    }

    pub fn resolved_annotations(&self, dialect: Dialect) -> Vec<(&MorphFeature, &MorphAnnotation)> {
        self.features
            .iter()
            .filter_map(|f| self.annotation(&f.feature_id, dialect).map(|a| (f, a)))
            .collect()
    }
}

/// Lowercases and collapses interior whitespace so that multi-word terms
/// compare reliably.
pub(crate) fn normalize_term(term: &str) -> String {
    term.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mapping(
        source: &str,
        target: &str,
        dialect: Dialect,
        dim: Dimension,
        rating: u8,
        src: RatingSource,
    ) -> WordMapping {
        WordMapping {
            id: String::new(),
            source_term: source.into(),
            target_term: target.into(),
            dialect,
            dimension: dim,
            rating: Rating::new(rating).unwrap(),
            rating_source: src,
            notes: None,
        }
    }

    #[test]
    fn human_shadows_llm() {
        let mut kb = KnowledgeBase::new();
        kb.insert_mapping(mapping(
            "truck",
            "lorry",
            Dialect::GB,
            Dimension::Lexical,
            2,
            RatingSource::Llm,
        ))
        .unwrap();
        kb.insert_mapping(mapping(
            "truck",
            "lorry",
            Dialect::GB,
            Dimension::Lexical,
            3,
            RatingSource::Human,
        ))
        .unwrap();
        let eff = kb
            .effective_mapping("truck", Dialect::GB, Dimension::Lexical)
            .unwrap();
        assert_eq!(eff.rating_source, RatingSource::Human);
        assert_eq!(eff.rating.value(), 3);
    }

    #[test]
    fn duplicate_same_source_rejected() {
        let mut kb = KnowledgeBase::new();
        kb.insert_mapping(mapping(
            "color",
            "colour",
            Dialect::GB,
            Dimension::Orthographic,
            4,
            RatingSource::Human,
        ))
        .unwrap();
        let err = kb.insert_mapping(mapping(
            "color",
            "kolour",
            Dialect::GB,
            Dimension::Orthographic,
            3,
            RatingSource::Human,
        ));
        assert!(err.is_err());
    }

    #[test]
    fn identity_target_requires_rating_one() {
        let mut kb = KnowledgeBase::new();
        assert!(kb
            .insert_mapping(mapping(
                "eggplant",
                "eggplant",
                Dialect::AU,
                Dimension::Lexical,
                3,
                RatingSource::Llm,
            ))
            .is_err());
        assert!(kb
            .insert_mapping(mapping(
                "eggplant",
                "eggplant",
                Dialect::AU,
                Dimension::Lexical,
                1,
                RatingSource::Llm,
            ))
            .is_ok());
    }

    #[test]
    fn llm_rating_demotion() {
        let m = mapping(
            "call",
            "ring",
            Dialect::GB,
            Dimension::Lexical,
            3,
            RatingSource::Llm,
        );
        assert_eq!(KnowledgeBase::qc_effective_rating(&m).value(), 1);
        let m4 = mapping(
            "call",
            "ring",
            Dialect::GB,
            Dimension::Lexical,
            4,
            RatingSource::Llm,
        );
        assert_eq!(KnowledgeBase::qc_effective_rating(&m4).value(), 4);
    }

    #[test]
    fn attribute_pair_case_insensitive() {
        let mut kb = KnowledgeBase::new();
        kb.insert_mapping(mapping(
            "color",
            "colour",
            Dialect::GB,
            Dimension::Orthographic,
            4,
            RatingSource::Human,
        ))
        .unwrap();
        let hit = kb.attribute_pair("Color", "Colour", Dialect::GB).unwrap();
        assert_eq!(hit.source_term, "color");
        assert!(kb.attribute_pair("Color", "Couleur", Dialect::GB).is_none());
    }
}
