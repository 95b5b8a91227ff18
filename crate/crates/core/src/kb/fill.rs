//! Model-backed completion of missing wordbank cells: fill the equivalent
//! term, then rate the candidate pair. Human rows always take priority and
//! are never overwritten.

use std::collections::BTreeMap;

use crate::dialect::Dialect;
use crate::error::{Error, Result};
use crate::gateway::{
    parse_rating_reply, parse_word_reply, render, ExchangeLog, Gateway, TemplateName,
};

use super::ratings::Rating;
use super::types::{Dimension, KnowledgeBase, RatingSource, WordMapping};

/// A filled-in pair awaiting a rating.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateMapping {
    pub source_term: String,
    pub target_term: String,
    pub dialect: Dialect,
    pub dimension: Dimension,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FillOutcome {
    /// The model returned the source term unchanged: recorded as rating 1
    /// (no attested equivalent).
    Identity(WordMapping),
    /// A candidate pair to pass through [`rate_mapping`].
    Candidate(CandidateMapping),
}

/// Binary verification filter: an accept probability of 0 or 1 compared
/// against the configured threshold.
pub fn verification_accepts(accepted: bool, threshold: f64) -> bool {
    let prob = if accepted { 1.0 } else { 0.0 };
    prob >= threshold
}

fn llm_mapping(
    source_term: &str,
    target_term: &str,
    dialect: Dialect,
    dimension: Dimension,
    rating: Rating,
) -> WordMapping {
    WordMapping {
        id: WordMapping::stable_id(source_term, dialect, dimension, RatingSource::Llm),
        source_term: source_term.to_string(),
        target_term: target_term.to_string(),
        dialect,
        dimension,
        rating,
        rating_source: RatingSource::Llm,
        notes: None,
    }
}

/// Asks the provider for the dialect equivalent of a source term that has no
/// human mapping.
pub fn fill_missing_mapping(
    kb: &KnowledgeBase,
    source_term: &str,
    dialect: Dialect,
    dimension: Dimension,
    gateway: &Gateway,
    log: &mut ExchangeLog,
) -> Result<FillOutcome> {
    if let Some(existing) = kb.effective_mapping(source_term, dialect, dimension) {
        if existing.rating_source == RatingSource::Human {
            return Err(Error::Contract(format!(
                "({source_term}, {dialect}) already has a human mapping"
            )));
        }
    }
    let bindings: BTreeMap<&str, String> = [
        ("target_dialect", dialect.adjective().to_string()),
        ("dimension", dimension.as_str().to_string()),
        ("us_word", source_term.to_string()),
    ]
    .into_iter()
    .collect();
    let prompt = render(TemplateName::WordbankFill, false, &bindings)?;
    let reply = gateway.complete(TemplateName::WordbankFill.as_str(), &prompt, log)?;
    let word = parse_word_reply(&reply)?;
    if word.eq_ignore_ascii_case(source_term) {
        Ok(FillOutcome::Identity(llm_mapping(
            source_term,
            &word,
            dialect,
            dimension,
            Rating::ABSENT,
        )))
    } else {
        Ok(FillOutcome::Candidate(CandidateMapping {
            source_term: source_term.to_string(),
            target_term: word,
            dialect,
            dimension,
        }))
    }
}

/// Renders the rating guideline block from the dialect's human rows, used as
/// the reference few-shot table.
fn human_reference_block(kb: &KnowledgeBase, dialect: Dialect, dimension: Dimension) -> String {
    let mut rows: Vec<&WordMapping> = kb
        .mappings()
        .iter()
        .filter(|m| {
            m.dialect == dialect
                && m.dimension == dimension
                && m.rating_source == RatingSource::Human
        })
        .collect();
    rows.sort_by(|a, b| a.source_term.cmp(&b.source_term));
    if rows.is_empty() {
        return "(no human-annotated reference rows)".to_string();
    }
    let mut out = String::from("| US | Transformed | Rating |\n");
    for row in rows {
        out.push_str(&format!(
            "| {} | {} | {} |\n",
            row.source_term, row.target_term, row.rating
        ));
    }
    out.trim_end().to_string()
}

/// Rates a candidate pair on the 1-4 scale. Refused when a human rating for
/// the same source already exists: human values are kept.
pub fn rate_mapping(
    kb: &KnowledgeBase,
    candidate: &CandidateMapping,
    gateway: &Gateway,
    log: &mut ExchangeLog,
) -> Result<WordMapping> {
    if let Some(existing) = kb.effective_mapping(&candidate.source_term, candidate.dialect, candidate.dimension)
    {
        if existing.rating_source == RatingSource::Human {
            return Err(Error::Contract(format!(
                "({}, {}) has a human rating; model rating refused",
                candidate.source_term, candidate.dialect
            )));
        }
    }
    let bindings: BTreeMap<&str, String> = [
        ("target_dialect", candidate.dialect.adjective().to_string()),
        (
            "human_annotated_guideline",
            human_reference_block(kb, candidate.dialect, candidate.dimension),
        ),
        ("us_word", candidate.source_term.clone()),
        ("target_dialect_word", candidate.target_term.clone()),
    ]
    .into_iter()
    .collect();
    let prompt = render(TemplateName::WordbankRate, false, &bindings)?;
    let reply = gateway.complete(TemplateName::WordbankRate.as_str(), &prompt, log)?;
    let rating = parse_rating_reply(&reply)?;
    Ok(llm_mapping(
        &candidate.source_term,
        &candidate.target_term,
        candidate.dialect,
        candidate.dimension,
        rating,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::{MockBehaviors, MockProvider, MockScript, RetryPolicy};
    use std::sync::Arc;

    fn gateway(behaviors: MockBehaviors) -> Gateway {
        Gateway::new(
            Arc::new(MockProvider::new(MockScript {
                behaviors: Some(behaviors),
                ..Default::default()
            })),
            RetryPolicy::immediate(2),
            1,
        )
    }

    fn human_row(kb: &mut KnowledgeBase, source: &str, target: &str, rating: u8) {
        kb.insert_mapping(WordMapping {
            id: String::new(),
            source_term: source.into(),
            target_term: target.into(),
            dialect: Dialect::GB,
            dimension: Dimension::Lexical,
            rating: Rating::new(rating).unwrap(),
            rating_source: RatingSource::Human,
            notes: None,
        })
        .unwrap();
    }

    #[test]
    fn identity_reply_yields_rating_one() {
        let kb = KnowledgeBase::new();
        let gw = gateway(MockBehaviors::default());
        let mut log = ExchangeLog::new();
        let outcome = fill_missing_mapping(
            &kb,
            "eggplant",
            Dialect::AU,
            Dimension::Lexical,
            &gw,
            &mut log,
        )
        .unwrap();
        match outcome {
            FillOutcome::Identity(m) => {
                assert_eq!(m.rating.value(), 1);
                assert_eq!(m.rating_source, RatingSource::Llm);
            }
            other => panic!("expected identity, got {other:?}"),
        }
    }

    #[test]
    fn candidate_then_rating_accepted() {
        let kb = KnowledgeBase::new();
        let mut behaviors = MockBehaviors::default();
        behaviors.fill.insert("truck|British".into(), "lorry".into());
        behaviors.rate.insert("truck>lorry|British".into(), 4);
        let gw = gateway(behaviors);
        let mut log = ExchangeLog::new();
        let outcome =
            fill_missing_mapping(&kb, "truck", Dialect::GB, Dimension::Lexical, &gw, &mut log)
                .unwrap();
        let candidate = match outcome {
            FillOutcome::Candidate(c) => c,
            other => panic!("expected candidate, got {other:?}"),
        };
        assert_eq!(candidate.target_term, "lorry");
        let rated = rate_mapping(&kb, &candidate, &gw, &mut log).unwrap();
        assert_eq!(rated.rating.value(), 4);
        assert_eq!(rated.rating_source, RatingSource::Llm);
        assert_eq!(log.len(), 2);
    }

    #[test]
    fn out_of_range_rating_is_parse_error() {
        let kb = KnowledgeBase::new();
        let mut behaviors = MockBehaviors::default();
        behaviors.rate.insert("truck>lorry|British".into(), 7);
        let gw = gateway(behaviors);
        let mut log = ExchangeLog::new();
        let candidate = CandidateMapping {
            source_term: "truck".into(),
            target_term: "lorry".into(),
            dialect: Dialect::GB,
            dimension: Dimension::Lexical,
        };
        assert!(matches!(
            rate_mapping(&kb, &candidate, &gw, &mut log),
            Err(Error::ReplyParse(_))
        ));
    }

    #[test]
    fn human_rating_refuses_model_rating() {
        let mut kb = KnowledgeBase::new();
        human_row(&mut kb, "truck", "lorry", 3);
        let gw = gateway(MockBehaviors::default());
        let mut log = ExchangeLog::new();
        let candidate = CandidateMapping {
            source_term: "truck".into(),
            target_term: "lorry".into(),
            dialect: Dialect::GB,
            dimension: Dimension::Lexical,
        };
        assert!(matches!(
            rate_mapping(&kb, &candidate, &gw, &mut log),
            Err(Error::Contract(_))
        ));
        // Human value kept.
        assert_eq!(
            kb.effective_mapping("truck", Dialect::GB, Dimension::Lexical)
                .unwrap()
                .rating
                .value(),
            3
        );
    }

    #[test]
    fn verification_threshold_semantics() {
        assert!(verification_accepts(true, 1.0));
        assert!(!verification_accepts(false, 1.0));
        assert!(verification_accepts(false, 0.0));
    }
}
