//! Word/punctuation tokenizer used by diffing and term matching.
//!
//! Tokens are either words or single punctuation marks; whitespace separates
//! tokens and is never itself a token. Apostrophes, hyphens, and periods
//! joining alphanumerics stay inside the word ("y'all", "family-owned",
//! "3.5"), so morph edits that touch punctuation diff cleanly.

/// One token with its byte offset in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub start: usize,
}

impl Token<'_> {
    pub fn end(&self) -> usize {
        self.start + self.text.len()
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-' | '.')
}

pub fn tokenize(text: &str) -> Vec<Token<'_>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if is_word_char(c) {
            let mut j = i + 1;
            while j < chars.len() {
                let (_, cj) = chars[j];
                if is_word_char(cj) {
                    j += 1;
                } else if is_joiner(cj)
                    && j + 1 < chars.len()
                    && is_word_char(chars[j + 1].1)
                {
                    j += 2;
                } else {
                    break;
                }
            }
            let end = if j < chars.len() { chars[j].0 } else { text.len() };
            tokens.push(Token {
                text: &text[start..end],
                start,
            });
            i = j;
        } else {
            let end = if i + 1 < chars.len() {
                chars[i + 1].0
            } else {
                text.len()
            };
            tokens.push(Token {
                text: &text[start..end],
                start,
            });
            i += 1;
        }
    }
    tokens
}

/// Word-boundary, case-insensitive search for a (possibly multi-word) term.
/// Returns the byte spans of every non-overlapping occurrence. When
/// `allow_plural` is set, the final word also matches with an `s`, `es`, or
/// `'s` suffix.
pub fn find_term(text: &str, term: &str, allow_plural: bool) -> Vec<(usize, usize)> {
    let term_tokens: Vec<String> = tokenize(term)
        .iter()
        .map(|t| t.text.to_lowercase())
        .collect();
    if term_tokens.is_empty() {
        return Vec::new();
    }
    let tokens = tokenize(text);
    let mut hits = Vec::new();
    let mut i = 0;
    while i + term_tokens.len() <= tokens.len() {
        let mut matched = true;
        for (k, want) in term_tokens.iter().enumerate() {
            let got = tokens[i + k].text.to_lowercase();
            let last = k == term_tokens.len() - 1;
            let ok = got == *want
                || (allow_plural
                    && last
                    && (got == format!("{want}s")
                        || got == format!("{want}es")
                        || got == format!("{want}'s")));
            if !ok {
                matched = false;
                break;
            }
        }
        if matched {
            let start = tokens[i].start;
            let end = tokens[i + term_tokens.len() - 1].end();
            hits.push((start, end));
            i += term_tokens.len();
        } else {
            i += 1;
        }
    }
    hits
}

/// Whether `term` occurs in `text` at word boundaries (case-insensitive),
/// with plural inflections of the final word allowed.
pub fn contains_term(text: &str, term: &str) -> bool {
    !find_term(text, term, true).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.text).collect()
    }

    #[test]
    fn words_and_punctuation_split() {
        let tokens = tokenize("He was, like, very angry.");
        assert_eq!(
            texts(&tokens),
            vec!["He", "was", ",", "like", ",", "very", "angry", "."]
        );
    }

    #[test]
    fn joiners_stay_inside_words() {
        let tokens = tokenize("y'all own a family-owned cafe worth 3.5 stars");
        assert_eq!(
            texts(&tokens),
            vec!["y'all", "own", "a", "family-owned", "cafe", "worth", "3.5", "stars"]
        );
    }

    #[test]
    fn trailing_punctuation_not_joined() {
        let tokens = tokenize("angry. Then");
        assert_eq!(texts(&tokens), vec!["angry", ".", "Then"]);
    }

    #[test]
    fn offsets_reconstruct_spans() {
        let text = "I like the color";
        let tokens = tokenize(text);
        for t in &tokens {
            assert_eq!(&text[t.start..t.end()], t.text);
        }
    }

    #[test]
    fn term_matching_word_boundary() {
        assert!(contains_term("Bring an umbrella today", "umbrella"));
        assert!(contains_term("Bring two umbrellas today", "umbrella"));
        assert!(contains_term("The umbrella's handle broke", "umbrella"));
        assert!(!contains_term("The umbrellaologist arrived", "umbrella"));
    }

    #[test]
    fn multi_word_terms() {
        assert!(contains_term("stopped at the gas station nearby", "gas station"));
        assert!(contains_term("two gas stations on the route", "gas station"));
        assert!(!contains_term("the gas ran out at the station", "gas station"));
        let hits = find_term("Parking lot by the parking lots", "parking lot", true);
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0], (0, 11));
    }

    #[test]
    fn matching_is_case_insensitive() {
        assert!(contains_term("COLOR matters", "color"));
        assert!(contains_term("Color matters", "color"));
    }
}
