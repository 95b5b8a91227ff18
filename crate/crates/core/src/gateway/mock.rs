//! Deterministic mock provider.
//!
//! A pure function of (prompt bytes, script): exact prompt-hash entries win,
//! then template-specific behaviors synthesize replies from the prompt text
//! itself, then the default reply. Full pipeline runs under the mock are
//! replayable byte for byte.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dialog::{apply_edits, contains_term, RecordDimension, RuleRef};
use crate::engine::{substitute, SubstRule};
use crate::error::{Error, Result};
use crate::hashing::sha256_hex;

use super::client::{Provider, ProviderFailure};

fn default_rate() -> u8 {
    1
}

fn default_answer() -> String {
    "first".to_string()
}

fn default_judge() -> String {
    "1".to_string()
}

/// Behavior switches for prompts without an exact script entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MockBehaviors {
    /// Synthesize seed dialogs from the requested topic and turn count.
    #[serde(default)]
    pub seed: bool,
    /// Apply the wordbank table embedded in transformation prompts.
    #[serde(default)]
    pub ortholex: bool,
    /// Per-rule find/replace pairs applied by the morph behavior, keyed by
    /// rule name.
    #[serde(default)]
    pub morph_rules: BTreeMap<String, (String, String)>,
    /// `"{us_word}|{adjective}"` -> equivalent term for fill prompts.
    #[serde(default)]
    pub fill: BTreeMap<String, String>,
    /// `"{us_word}>{target}|{adjective}"` -> rating for rate prompts.
    #[serde(default)]
    pub rate: BTreeMap<String, u8>,
    #[serde(default = "default_rate")]
    pub rate_default: u8,
    /// `"first"` or a single option letter.
    #[serde(default = "default_answer")]
    pub answer: String,
    /// `"1"`, `"0"`, or `"N/A"`.
    #[serde(default = "default_judge")]
    pub judge: String,
}

impl Default for MockBehaviors {
    fn default() -> Self {
        MockBehaviors {
            seed: true,
            ortholex: true,
            morph_rules: BTreeMap::new(),
            fill: BTreeMap::new(),
            rate: BTreeMap::new(),
            rate_default: default_rate(),
            answer: default_answer(),
            judge: default_judge(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MockScript {
    /// sha256(prompt) -> reply, highest priority.
    #[serde(default)]
    pub exact: BTreeMap<String, String>,
    #[serde(default)]
    pub behaviors: Option<MockBehaviors>,
    #[serde(default)]
    pub default_reply: Option<String>,
}

impl MockScript {
    pub fn load(path: impl AsRef<Path>) -> Result<MockScript> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&content).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// Adds an exact reply for one prompt.
    pub fn stub(&mut self, prompt: &str, reply: impl Into<String>) {
        self.exact.insert(sha256_hex(prompt.as_bytes()), reply.into());
    }
}

pub struct MockProvider {
    script: MockScript,
}

impl MockProvider {
    pub fn new(script: MockScript) -> MockProvider {
        MockProvider { script }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<MockProvider> {
        Ok(MockProvider::new(MockScript::load(path)?))
    }
}

impl Provider for MockProvider {
    fn id(&self) -> &str {
        "mock"
    }

    fn complete(&self, prompt: &str) -> std::result::Result<String, ProviderFailure> {
        if let Some(reply) = self.script.exact.get(&sha256_hex(prompt.as_bytes())) {
            return Ok(reply.clone());
        }
        if let Some(behaviors) = &self.script.behaviors {
            if let Some(reply) = synthesize(prompt, behaviors) {
                return Ok(reply);
            }
        }
        if let Some(reply) = &self.script.default_reply {
            return Ok(reply.clone());
        }
        Err(ProviderFailure::fatal(format!(
            "mock script has no reply for prompt hash {}",
            sha256_hex(prompt.as_bytes())
        )))
    }
}

fn between<'a>(text: &'a str, start: &str, end: &str) -> Option<&'a str> {
    let s = text.find(start)? + start.len();
    let e = text[s..].find(end)? + s;
    Some(&text[s..e])
}

fn synthesize(prompt: &str, behaviors: &MockBehaviors) -> Option<String> {
    if behaviors.seed
        && prompt.starts_with("You are tasked with creating a natural, multi-turn conversation")
    {
        return synthesize_seed(prompt);
    }
    if behaviors.ortholex
        && prompt.starts_with("Convert the multi-turn dialogue from Standard American English")
    {
        return synthesize_ortholex(prompt);
    }
    if prompt.contains("## Dialect Rule") {
        return synthesize_morph(prompt, &behaviors.morph_rules);
    }
    if prompt.starts_with("Task: You are a linguist of ") {
        return synthesize_fill(prompt, &behaviors.fill);
    }
    if prompt.starts_with("Task: Compare the original (US English) word/spelling") {
        return synthesize_rate(prompt, &behaviors.rate, behaviors.rate_default);
    }
    if prompt.contains("Binary Classification Scale") {
        return Some(format!("Reasoning: scripted verdict.\nScore: {}", behaviors.judge));
    }
    if prompt.starts_with("You are an expert linguist specializing in identifying")
        || prompt.contains("select the most appropriate response to complete")
    {
        let letter = match behaviors.answer.as_str() {
            "first" => 'A',
            s => s.chars().next().unwrap_or('A'),
        };
        return Some(format!("ANSWER: ({letter})"));
    }
    None
}

// Carrier sentences sprinkle wordbank terms and morph-feature triggers into
// synthesized seeds so downstream stages have something to transform.
const USER_CARRIERS: &[&str] = &[
    "I like the color of the one near the parking lot.",
    "My apartment is 5 miles from the gas station.",
    "Sarah and I are going to the market to find one.",
    "He hasn't said anything about the truck yet.",
];

const ASSISTANT_CARRIERS: &[&str] = &[
    "The theater nearby sells them, so you could organize a quick trip.",
    "Check the parking lot across the street; it is different from the sign.",
    "She visited the museum yesterday and saw those shoes there.",
    "He was very angry about the takeout from the gas station.",
];

fn synthesize_seed(prompt: &str) -> Option<String> {
    let indirect = prompt.contains("The USER must not directly mention");
    let word = if indirect {
        between(prompt, "about the topic: [", "]")?
    } else {
        between(prompt, "about the topic: (", ")")?
    };
    let turns: usize = between(prompt, "(USA) with ", " turns.")?.trim().parse().ok()?;
    let pick = |pool: &[&str], i: usize, avoid: Option<&str>| -> String {
        let base = (word.len() + i) % pool.len();
        for k in 0..pool.len() {
            let candidate = pool[(base + k) % pool.len()];
            if avoid.map(|w| !contains_term(candidate, w)).unwrap_or(true) {
                return candidate.to_string();
            }
        }
        "It should be easy to find nearby.".to_string()
    };
    let mut out = String::new();
    for t in 1..=turns.max(1) {
        let user = if t == 1 && indirect {
            format!(
                "I am looking for something for an errand. {}",
                pick(USER_CARRIERS, t, Some(word))
            )
        } else if t == 1 {
            format!("I have a question about {word}. {}", pick(USER_CARRIERS, t, None))
        } else {
            format!("Tell me more about the {word}. {}", pick(USER_CARRIERS, t, None))
        };
        let assistant = format!(
            "Here is some advice about the {word}. {}",
            pick(ASSISTANT_CARRIERS, t, None)
        );
        out.push_str(&format!("Turn {t}:\nUSER: {user}\nASSISTANT: {assistant}\n\n"));
    }
    Some(out)
}

fn synthesize_ortholex(prompt: &str) -> Option<String> {
    let dialogue = prompt.split("Original Dialogue to Convert:\n").nth(1)?;
    let mut rules = Vec::new();
    for line in prompt.lines() {
        let line = line.trim();
        if !line.starts_with('|') || line.contains("Original |") {
            continue;
        }
        let cells: Vec<&str> = line.trim_matches('|').split('|').map(str::trim).collect();
        if cells.len() != 3 {
            continue;
        }
        rules.push(SubstRule {
            source: cells[0].to_string(),
            target: cells[1].to_string(),
            dimension: RecordDimension::Lexical,
            rule_ref: RuleRef::Unattributed,
        });
    }
    let converted = if rules.is_empty() {
        dialogue.to_string()
    } else {
        apply_edits(dialogue, &substitute(dialogue, &rules))
    };
    Some(format!(
        "CONVERTED DIALOGUE:\n{converted}\nEXPLANATION OF CHANGES:\n- Applied the provided wordbank table.\n- INTENTIONAL NON-CHANGES (Morphosyntax): grammar left as-is."
    ))
}

fn synthesize_morph(prompt: &str, rules: &BTreeMap<String, (String, String)>) -> Option<String> {
    let rule_name = between(prompt, "Rule: ", "\n")?.trim();
    let marker = "## New dialogue to transform (";
    let tail = prompt.split(marker).nth(1)?;
    let utterance = tail.splitn(2, "): ").nth(1)?;
    let transformed = match rules.get(rule_name) {
        Some((find, replace)) if utterance.contains(find.as_str()) => {
            utterance.replacen(find.as_str(), replace, 1)
        }
        _ => utterance.to_string(),
    };
    Some(format!(
        "CONVERTED DIALOGUE: {transformed}\nEXPLANATION OF CHANGES: rule applied where natural, skipped otherwise."
    ))
}

fn synthesize_fill(prompt: &str, fill: &BTreeMap<String, String>) -> Option<String> {
    let adjective = between(prompt, "a linguist of ", " English.")?;
    let word = between(prompt, "term to translate:\n", "\n")?.trim();
    let key = format!("{word}|{adjective}");
    let reply = fill.get(&key).cloned().unwrap_or_else(|| word.to_string());
    Some(format!("WORD: {reply}"))
}

fn synthesize_rate(prompt: &str, rate: &BTreeMap<String, u8>, default: u8) -> Option<String> {
    let adjective = between(prompt, "transformed (", " English) variant")?;
    let us_word = between(prompt, "\nUS English: ", "\n")?.trim();
    let target = between(prompt, &format!("\n{adjective} English: "), "\n")
        .map(str::trim)
        .or_else(|| {
            prompt
                .lines()
                .find_map(|l| l.strip_prefix(&format!("{adjective} English: ")))
                .map(str::trim)
        })?;
    let key = format!("{us_word}>{target}|{adjective}");
    let rating = rate.get(&key).copied().unwrap_or(default);
    Some(format!("Rating: {rating}"))
}
