//! The OrthoLex pass: lexical/orthographic/unit transformation of a source
//! dialog into one target dialect, in either provider-backed or fully
//! deterministic mode.

use std::collections::BTreeMap;

use crate::dialect::Dialect;
use crate::dialog::{
    apply_edits, attribute_edit, compose, lcs_edits, parse_turn_format, records_from_edits,
    render_turn_format, Dialog, Edit, RecordDimension, RuleRef, TransformedDialog, Variant,
};
use crate::error::{Error, Result};
use crate::gateway::{parse_converted, render, ExchangeLog, Gateway, TemplateName};
use crate::kb::{KnowledgeBase, WordMapping};

use super::plan::{derive_rng_seed, rng_from_seed, sample_mappings};
use super::subst::{substitute, SubstRule};
use super::units::convert_units;

/// Engine execution mode. Deterministic mode performs wordbank-only
/// substitution (no morph pass) and exists for tests and offline runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineMode {
    Llm,
    Deterministic,
}

/// Per-dialect general spelling conventions shown in the transformation
/// guidelines block.
pub fn spelling_conventions(dialect: Dialect) -> Vec<&'static str> {
    const BRITISH: &[&str] = &[
        "-our (e.g., colour, flavour, honour)",
        "-re (e.g., centre, theatre, metre)",
        "-ise (e.g., organise, realise)",
        "-yse (e.g., analyse, paralyse)",
        "-ce (e.g., defence, licence, offence)",
        "-ogue (e.g., catalogue, dialogue)",
        "e (e.g., encyclopedia, maneuver) OR ae and oe (e.g., encyclopaedia, manoeuvre) both acceptable",
        "doubled consonant (e.g., travelling, jewellery)",
    ];
    match dialect {
        Dialect::US | Dialect::PH => {
            vec!["Standard American English spelling conventions apply (no orthographic changes)"]
        }
        Dialect::CA => vec![
            "-our (e.g., colour, flavour, honour)",
            "-re (e.g., centre, theatre, metre)",
            "-ize retained (e.g., organize, realize)",
            "-ce (e.g., defence, licence, offence)",
            "-ogue (e.g., catalogue, dialogue)",
            "doubled consonant (e.g., travelling, jewellery)",
        ],
        _ => BRITISH.to_vec(),
    }
}

/// Renders the guidelines block injected into the OrthoLex prompt: general
/// spelling conventions plus the sampled specific rows in tabular form.
pub fn wordbank_guidelines(dialect: Dialect, sampled: &[&WordMapping]) -> String {
    let code = dialect.code();
    let mut out = format!("en-{code} General Orthographic (Spelling) Conventions\n");
    for line in spelling_conventions(dialect) {
        out.push_str(&format!("- {line}\n"));
    }
    out.push_str(&format!(
        "\nen-{code} Specific Lexical & Orthographic Transformations\n\n| Original | Transformed | Category |\n"
    ));
    for row in sampled {
        out.push_str(&format!(
            "| {} | {} | {} |\n",
            row.source_term,
            row.target_term,
            row.dimension.as_str()
        ));
    }
    out.trim_end().to_string()
}

fn subst_rules(sampled: &[&WordMapping]) -> Vec<SubstRule> {
    sampled
        .iter()
        .filter(|m| m.rating.value() >= 2)
        .map(|m| SubstRule {
            source: m.source_term.clone(),
            target: m.target_term.clone(),
            dimension: match m.dimension {
                crate::kb::Dimension::Lexical => RecordDimension::Lexical,
                crate::kb::Dimension::Orthographic => RecordDimension::Orthographic,
            },
            rule_ref: RuleRef::Mapping(m.id.clone()),
        })
        .collect()
}

fn transformed_from_scripts(
    base: &Dialog,
    dialect: Dialect,
    scripts: Vec<((usize, crate::dialog::Speaker), Vec<Edit>)>,
) -> TransformedDialog {
    let mut out = TransformedDialog::passthrough(base, dialect, Variant::OrthoLex);
    let mut records = Vec::new();
    for ((turn_index, speaker), edits) in scripts {
        let base_text = base.utterance(turn_index, speaker).unwrap();
        *out.utterance_mut(turn_index, speaker).unwrap() = apply_edits(base_text, &edits);
        records.extend(records_from_edits(base_text, turn_index, speaker, &edits));
    }
    out.records = records;
    out
}

/// Applies the OrthoLex pass. In provider mode the whole dialog is converted
/// in one call against the sampled guideline block and the reply is diffed;
/// in deterministic mode the sampled rows substitute directly. Both modes
/// finish with the deterministic unit converter and preserve turn structure.
pub fn apply_ortholex(
    base: &Dialog,
    dialect: Dialect,
    kb: &KnowledgeBase,
    gateway: Option<&Gateway>,
    mode: EngineMode,
    global_seed: u64,
    log: &mut ExchangeLog,
) -> Result<TransformedDialog> {
    if dialect == Dialect::US {
        return Err(Error::Contract(
            "OrthoLex transformation targets non-US dialects; US rows are pass-through".into(),
        ));
    }
    let seed = derive_rng_seed(global_seed, &base.id, dialect, Variant::OrthoLex);
    let mut rng = rng_from_seed(seed);
    let sampled = sample_mappings(kb, dialect, &mut rng);

    let mut scripts: Vec<((usize, crate::dialog::Speaker), Vec<Edit>)> = Vec::new();
    match mode {
        EngineMode::Deterministic => {
            let rules = subst_rules(&sampled);
            for (turn_index, speaker, text) in base.utterances() {
                scripts.push(((turn_index, speaker), substitute(text, &rules)));
            }
        }
        EngineMode::Llm => {
            let gateway = gateway.ok_or_else(|| {
                Error::Contract("provider mode requires a configured gateway".into())
            })?;
            let converted = llm_convert(base, dialect, &sampled, gateway, log)?;
            for (turn_index, speaker, text) in base.utterances() {
                let new_text = converted.utterance(turn_index, speaker).unwrap();
                let mut edits = lcs_edits(text, new_text);
                for edit in &mut edits {
                    attribute_edit(edit, kb, dialect, text);
                }
                scripts.push(((turn_index, speaker), edits));
            }
        }
    }

    // Unit conversion runs on the post-substitution text and composes back
    // into base coordinates.
    for ((turn_index, speaker), script) in scripts.iter_mut() {
        let base_text = base.utterance(*turn_index, *speaker).unwrap();
        let current = apply_edits(base_text, script);
        let unit_edits = convert_units(&current, dialect);
        if !unit_edits.is_empty() {
            *script = compose(base_text, script, &current, &unit_edits);
        }
    }

    Ok(transformed_from_scripts(base, dialect, scripts))
}

fn llm_convert(
    base: &Dialog,
    dialect: Dialect,
    sampled: &[&WordMapping],
    gateway: &Gateway,
    log: &mut ExchangeLog,
) -> Result<Dialog> {
    let bindings: BTreeMap<&str, String> = [
        ("target_dialect", dialect.adjective().to_string()),
        ("wordbank_guidelines", wordbank_guidelines(dialect, sampled)),
        ("dialogue", render_turn_format(base)),
    ]
    .into_iter()
    .collect();
    let prompt = render(TemplateName::OrtholexTransform, false, &bindings)?;
    // One retry on malformed replies or structural drift, then the dialog is
    // flagged for exclusion.
    let mut last_err: Option<Error> = None;
    for _ in 0..2 {
        let reply = gateway.complete(TemplateName::OrtholexTransform.as_str(), &prompt, log)?;
        let dialogue_text = match parse_converted(&reply) {
            Ok((d, _)) => d,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        match parse_turn_format(&dialogue_text) {
            Ok(parsed) if parsed.turn_count() == base.turn_count() => return Ok(parsed),
            Ok(parsed) => {
                last_err = Some(Error::Structure(format!(
                    "converted dialog has {} turns, expected {} (flagged)",
                    parsed.turn_count(),
                    base.turn_count()
                )));
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Structure("conversion failed".into())))
}
