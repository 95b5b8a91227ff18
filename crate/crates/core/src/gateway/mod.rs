//! Prompt template registry, provider-agnostic completion client, reply
//! parsers, and the deterministic mock provider.

mod client;
mod http;
mod mock;
mod parse;
mod templates;

pub use client::{
    CompletionExchange, ExchangeLog, Gateway, Provider, ProviderFailure, RetryPolicy,
};
pub use http::HttpProvider;
pub use mock::{MockBehaviors, MockProvider, MockScript};
pub use parse::{
    parse_answer, parse_converted, parse_judge_score, parse_rating_reply, parse_word_reply,
    AnswerOption, JudgeScore,
};
pub use templates::{placeholders, render, TemplateName};

use std::path::Path;

use crate::error::Result;

/// Writes an exchange log as line-delimited audit records.
pub fn write_audit_log(path: impl AsRef<Path>, log: &ExchangeLog) -> Result<()> {
    crate::dialog::write_jsonl(path, log)
}
