//! Parsers for the structured reply grammars used across the pipeline.

use crate::error::{Error, Result};
use crate::kb::Rating;

/// Splits a transformation reply on its `CONVERTED DIALOGUE:` and
/// `EXPLANATION OF CHANGES:` markers. A missing explanation section is
/// tolerated (only the dialogue feeds downstream); a missing dialogue marker
/// is an error.
pub fn parse_converted(reply: &str) -> Result<(String, String)> {
    const DIALOGUE: &str = "CONVERTED DIALOGUE:";
    const EXPLANATION: &str = "EXPLANATION OF CHANGES:";
    let start = reply
        .find(DIALOGUE)
        .ok_or_else(|| Error::ReplyParse("reply lacks CONVERTED DIALOGUE marker".into()))?;
    let after = &reply[start + DIALOGUE.len()..];
    match after.find(EXPLANATION) {
        Some(pos) => Ok((
            after[..pos].trim().to_string(),
            after[pos + EXPLANATION.len()..].trim().to_string(),
        )),
        None => Ok((after.trim().to_string(), String::new())),
    }
}

/// One answer option as offered to the model.
#[derive(Debug, Clone, PartialEq)]
pub struct AnswerOption {
    pub letter: char,
    pub text: String,
}

/// Extracts the first `ANSWER:` line and resolves it to an option index.
/// Accepts a bare letter, `(letter)`, `letter)`, `letter.`, or the full
/// option text (case-insensitive). Returns `None` when the reply is
/// malformed or names something outside the offered options.
pub fn parse_answer(reply: &str, options: &[AnswerOption]) -> Option<usize> {
    let line = reply.lines().find_map(|l| {
        let l = l.trim();
        l.strip_prefix("ANSWER:").map(str::trim)
    })?;
    if line.is_empty() {
        return None;
    }
    let cleaned = line.trim_end_matches('.').trim();
    // Letter forms: "D", "(D)", "D)", "D) Standard American English (USA)".
    let mut chars = cleaned.chars();
    let first = chars.next()?;
    let (letter, rest) = if first == '(' {
        let letter = chars.next()?;
        (Some(letter), chars.as_str().strip_prefix(')').unwrap_or(""))
    } else {
        (Some(first), chars.as_str())
    };
    if let Some(letter) = letter {
        let letter = letter.to_ascii_uppercase();
        let rest_ok = rest.is_empty()
            || rest.starts_with(')')
            || rest.starts_with('.')
            || rest.starts_with(':')
            || rest.starts_with(' ');
        if rest_ok {
            if let Some(idx) = options.iter().position(|o| o.letter == letter) {
                // A trailing full-text mismatch still counts as the letter.
                return Some(idx);
            }
        }
    }
    // Full option text.
    options
        .iter()
        .position(|o| o.text.eq_ignore_ascii_case(cleaned))
}

/// Parses a `WORD: <term>` wordbank-fill reply.
pub fn parse_word_reply(reply: &str) -> Result<String> {
    let line = reply
        .lines()
        .find_map(|l| l.trim().strip_prefix("WORD:"))
        .ok_or_else(|| Error::ReplyParse("reply lacks WORD: line".into()))?;
    let word = line.trim().trim_matches(|c| c == '<' || c == '>').trim();
    if word.is_empty() {
        return Err(Error::ReplyParse("WORD: line is empty".into()));
    }
    Ok(word.to_string())
}

/// Parses a `Rating: <n>` reply; the value must be in 1..=4.
pub fn parse_rating_reply(reply: &str) -> Result<Rating> {
    let line = reply
        .lines()
        .find_map(|l| l.trim().strip_prefix("Rating:"))
        .ok_or_else(|| Error::ReplyParse("reply lacks Rating: line".into()))?;
    let digits: String = line.chars().filter(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() {
        return Err(Error::ReplyParse(format!("no integer in rating line `{line}`")));
    }
    let value: u8 = digits
        .parse()
        .map_err(|_| Error::ReplyParse(format!("rating `{digits}` is not a small integer")))?;
    Rating::new(value).map_err(|e| Error::ReplyParse(e.to_string()))
}

/// Judge verdict for one dimension of one generated response.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JudgeScore {
    Appropriate,
    Inappropriate,
    NotApplicable,
}

/// Parses a `Score: <0, 1, or N/A>` judge reply.
pub fn parse_judge_score(reply: &str) -> Result<JudgeScore> {
    let line = reply
        .lines()
        .find_map(|l| l.trim().strip_prefix("Score:"))
        .ok_or_else(|| Error::ReplyParse("reply lacks Score: line".into()))?;
    match line.trim().trim_matches(|c| c == '<' || c == '>').trim() {
        "1" => Ok(JudgeScore::Appropriate),
        "0" => Ok(JudgeScore::Inappropriate),
        s if s.eq_ignore_ascii_case("N/A") || s.eq_ignore_ascii_case("NA") => {
            Ok(JudgeScore::NotApplicable)
        }
        other => Err(Error::ReplyParse(format!("unrecognized score `{other}`"))),
    }
}
