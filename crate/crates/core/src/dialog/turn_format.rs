//! The `Turn N: USER/ASSISTANT` raw dialog text format.
//!
//! `parse ∘ render` is the identity on dialogs; `render ∘ parse` canonicalizes
//! any well-formed text (idempotent on its own output).

use crate::error::{Error, Result};

use super::types::{Dialog, Mode, Turn};

/// Renders the canonical text form: one `Turn {n}:` block per turn, each
/// followed by a blank line.
pub fn render_turn_format(dialog: &Dialog) -> String {
    render_turns(&dialog.turns)
}

pub fn render_turns(turns: &[Turn]) -> String {
    assert!(!turns.is_empty(), "cannot render a dialog with no turns");
    let mut out = String::new();
    for (i, turn) in turns.iter().enumerate() {
        out.push_str(&format!(
            "Turn {}:\nUSER: {}\nASSISTANT: {}\n\n",
            i + 1,
            turn.user,
            turn.assistant
        ));
    }
    out
}

/// Parses dialog text. Line endings are normalized to LF; text before the
/// first `Turn N:` marker is ignored; multi-line utterances are joined with
/// single spaces. Every turn needs a USER line followed by an ASSISTANT line.
pub fn parse_turn_format(text: &str) -> Result<Dialog> {
    let text = text.replace("\r\n", "\n");
    let mut turns: Vec<Turn> = Vec::new();
    let mut current_user: Option<Vec<String>> = None;
    let mut current_assistant: Option<Vec<String>> = None;
    let mut in_turn = false;

    fn flush(
        turns: &mut Vec<Turn>,
        user: &mut Option<Vec<String>>,
        assistant: &mut Option<Vec<String>>,
    ) -> Result<()> {
        let turn_no = turns.len() + 1;
        match (user.take(), assistant.take()) {
            (Some(u), Some(a)) => {
                let user_text = u.join(" ").trim().to_string();
                let assistant_text = a.join(" ").trim().to_string();
                if user_text.is_empty() || assistant_text.is_empty() {
                    return Err(Error::TurnFormat {
                        turn: turn_no,
                        message: "empty utterance".into(),
                    });
                }
                turns.push(Turn {
                    user: user_text,
                    assistant: assistant_text,
                });
                Ok(())
            }
            (Some(_), None) => Err(Error::TurnFormat {
                turn: turn_no,
                message: "missing ASSISTANT line".into(),
            }),
            (None, Some(_)) => Err(Error::TurnFormat {
                turn: turn_no,
                message: "missing USER line".into(),
            }),
            (None, None) => Err(Error::TurnFormat {
                turn: turn_no,
                message: "empty turn block".into(),
            }),
        }
    }

    for line in text.lines() {
        let trimmed = line.trim();
        if is_turn_marker(trimmed) {
            if in_turn {
                flush(&mut turns, &mut current_user, &mut current_assistant)?;
            }
            in_turn = true;
            continue;
        }
        if !in_turn {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("USER:") {
            if current_user.is_some() {
                return Err(Error::TurnFormat {
                    turn: turns.len() + 1,
                    message: "duplicate USER line in turn".into(),
                });
            }
            current_user = Some(vec![rest.trim().to_string()]);
        } else if let Some(rest) = trimmed.strip_prefix("ASSISTANT:") {
            if current_assistant.is_some() {
                return Err(Error::TurnFormat {
                    turn: turns.len() + 1,
                    message: "duplicate ASSISTANT line in turn".into(),
                });
            }
            current_assistant = Some(vec![rest.trim().to_string()]);
        } else if !trimmed.is_empty() {
            // Continuation of the most recent utterance.
            if let Some(a) = current_assistant.as_mut() {
                a.push(trimmed.to_string());
            } else if let Some(u) = current_user.as_mut() {
                u.push(trimmed.to_string());
            }
            // Stray prose between blocks is ignored.
        }
    }
    if in_turn {
        flush(&mut turns, &mut current_user, &mut current_assistant)?;
    }
    if turns.is_empty() {
        return Err(Error::TurnFormat {
            turn: 0,
            message: "no turn blocks found".into(),
        });
    }
    Ok(Dialog {
        id: String::new(),
        seed_word: String::new(),
        mode: Mode::Natural,
        turns,
    })
}

fn is_turn_marker(line: &str) -> bool {
    let Some(rest) = line.strip_prefix("Turn ") else {
        return false;
    };
    let rest = rest.trim_end_matches(':');
    !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())
}
