//! Core dialog types.

use serde::{Deserialize, Serialize};

use crate::dialect::Dialect;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Speaker {
    User,
    Assistant,
}

impl Speaker {
    pub fn as_str(self) -> &'static str {
        match self {
            Speaker::User => "user",
            Speaker::Assistant => "assistant",
        }
    }
}

/// One message with its speaker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Utterance {
    pub speaker: Speaker,
    pub text: String,
}

impl Utterance {
    pub fn new(speaker: Speaker, text: impl Into<String>) -> Result<Utterance> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(Error::Validation("utterance text is empty".into()));
        }
        Ok(Utterance { speaker, text })
    }
}

/// One conversation turn: a user message and the assistant response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Turn {
    pub user: String,
    pub assistant: String,
}

/// How the seed word relates to the opening user message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Natural,
    Indirect,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Natural => "natural",
            Mode::Indirect => "indirect",
        }
    }
}

/// A source-dialect multi-turn dialog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dialog {
    pub id: String,
    pub seed_word: String,
    pub mode: Mode,
    pub turns: Vec<Turn>,
}

impl Dialog {
    pub fn turn_count(&self) -> usize {
        self.turns.len()
    }

    /// Utterances in order with their (turn index, speaker) coordinates.
    pub fn utterances(&self) -> impl Iterator<Item = (usize, Speaker, &str)> {
        self.turns.iter().enumerate().flat_map(|(i, t)| {
            [
                (i, Speaker::User, t.user.as_str()),
                (i, Speaker::Assistant, t.assistant.as_str()),
            ]
        })
    }

    pub fn utterance(&self, turn_index: usize, speaker: Speaker) -> Option<&str> {
        self.turns.get(turn_index).map(|t| match speaker {
            Speaker::User => t.user.as_str(),
            Speaker::Assistant => t.assistant.as_str(),
        })
    }

    pub fn utterance_mut(&mut self, turn_index: usize, speaker: Speaker) -> Option<&mut String> {
        self.turns.get_mut(turn_index).map(|t| match speaker {
            Speaker::User => &mut t.user,
            Speaker::Assistant => &mut t.assistant,
        })
    }
}

/// Dataset variant produced by the transformation engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    OrthoLex,
    #[serde(rename = "RBT_user")]
    RbtUser,
    #[serde(rename = "RBT_model")]
    RbtModel,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::OrthoLex, Variant::RbtUser, Variant::RbtModel];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::OrthoLex => "OrthoLex",
            Variant::RbtUser => "RBT_user",
            Variant::RbtModel => "RBT_model",
        }
    }

    pub fn parse(s: &str) -> Result<Variant> {
        Variant::ALL
            .iter()
            .copied()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown variant `{s}`")))
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Dimension of one applied edit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordDimension {
    Lexical,
    Orthographic,
    Morphosyntactic,
    Unit,
}

/// What produced an edit: a wordbank mapping, a morph feature, the unit
/// converter, or nothing the knowledge base can account for.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum RuleRef {
    Mapping(String),
    Feature(String),
    Unit,
    Unattributed,
}

impl RuleRef {
    pub fn is_unattributed(&self) -> bool {
        matches!(self, RuleRef::Unattributed)
    }
}

/// One applied edit. `offset` is the byte offset of `source_span` in the
/// base utterance; together the records of a dialog form a consistent
/// base-to-current edit script (non-overlapping, ascending per utterance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformationRecord {
    pub dimension: RecordDimension,
    pub turn_index: usize,
    pub speaker: Speaker,
    pub offset: usize,
    pub source_span: String,
    pub replacement: String,
    pub rule_ref: RuleRef,
}

impl TransformationRecord {
    pub fn source_end(&self) -> usize {
        self.offset + self.source_span.len()
    }
}

/// A dialect-transformed dialog with its full transformation history and
/// gold label set. Field order here is the dataset file field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformedDialog {
    pub base_id: String,
    pub dialect: Dialect,
    pub variant: Variant,
    pub turns: Vec<Turn>,
    pub records: Vec<TransformationRecord>,
    pub gold_labels: Vec<Dialect>,
    pub seed_word: String,
    pub mode: Mode,
}

impl TransformedDialog {
    /// Pass-through constructor: the dialog unchanged, no records, labels
    /// pending assignment.
    pub fn passthrough(base: &Dialog, dialect: Dialect, variant: Variant) -> TransformedDialog {
        TransformedDialog {
            base_id: base.id.clone(),
            dialect,
            variant,
            turns: base.turns.clone(),
            records: Vec::new(),
            gold_labels: vec![dialect],
            seed_word: base.seed_word.clone(),
            mode: base.mode,
        }
    }

    pub fn turn_count(&self) -> usize {
        self.turns.len()
    }

    pub fn utterance(&self, turn_index: usize, speaker: Speaker) -> Option<&str> {
        self.turns.get(turn_index).map(|t| match speaker {
            Speaker::User => t.user.as_str(),
            Speaker::Assistant => t.assistant.as_str(),
        })
    }

    pub fn utterance_mut(&mut self, turn_index: usize, speaker: Speaker) -> Option<&mut String> {
        self.turns.get_mut(turn_index).map(|t| match speaker {
            Speaker::User => &mut t.user,
            Speaker::Assistant => &mut t.assistant,
        })
    }

    /// Records for one utterance, in ascending offset order.
    pub fn records_for(&self, turn_index: usize, speaker: Speaker) -> Vec<&TransformationRecord> {
        let mut records: Vec<&TransformationRecord> = self
            .records
            .iter()
            .filter(|r| r.turn_index == turn_index && r.speaker == speaker)
            .collect();
        records.sort_by_key(|r| r.offset);
        records
    }

    pub fn as_dialog(&self) -> Dialog {
        Dialog {
            id: self.base_id.clone(),
            seed_word: self.seed_word.clone(),
            mode: self.mode,
            turns: self.turns.clone(),
        }
    }
}
