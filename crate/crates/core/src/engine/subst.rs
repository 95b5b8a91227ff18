//! Case-preserving wordbank substitution.
//!
//! Matching is case-insensitive at word boundaries; multi-word sources are
//! matched longest-first and overlaps resolve left-to-right. Replacements
//! preserve the casing pattern of the matched span (all-caps and
//! initial-capital).

use crate::dialog::{tokenize, Edit, RecordDimension, RuleRef};

/// One substitution rule: replace `source` with `target`.
#[derive(Debug, Clone)]
pub struct SubstRule {
    pub source: String,
    pub target: String,
    pub dimension: RecordDimension,
    pub rule_ref: RuleRef,
}

/// Applies `target`'s characters with the casing pattern of `matched`.
pub fn preserve_case(matched: &str, target: &str) -> String {
    let letters: Vec<char> = matched.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.is_empty() {
        return target.to_string();
    }
    if letters.iter().all(|c| c.is_uppercase()) && letters.len() > 1 {
        return target.to_uppercase();
    }
    if letters[0].is_uppercase() {
        let mut chars = target.chars();
        return match chars.next() {
            Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
            None => String::new(),
        };
    }
    target.to_string()
}

/// Substitutes every rule occurrence in `text`, returning the edits in
/// ascending source-coordinate order. Rules are tried longest-first (token
/// count, then byte length, then source text) at each position; a match
/// consumes its tokens, so overlapping candidates resolve left-to-right.
pub fn substitute(text: &str, rules: &[SubstRule]) -> Vec<Edit> {
    let mut order: Vec<usize> = (0..rules.len()).collect();
    let token_counts: Vec<usize> = rules.iter().map(|r| tokenize(&r.source).len()).collect();
    order.sort_by(|&a, &b| {
        token_counts[b]
            .cmp(&token_counts[a])
            .then(rules[b].source.len().cmp(&rules[a].source.len()))
            .then(rules[a].source.cmp(&rules[b].source))
    });

    let rule_tokens: Vec<Vec<String>> = rules
        .iter()
        .map(|r| tokenize(&r.source).iter().map(|t| t.text.to_lowercase()).collect())
        .collect();

    let tokens = tokenize(text);
    let mut edits = Vec::new();
    let mut i = 0;
    'scan: while i < tokens.len() {
        for &ri in &order {
            let want = &rule_tokens[ri];
            if want.is_empty() || i + want.len() > tokens.len() {
                continue;
            }
            let matches = want
                .iter()
                .enumerate()
                .all(|(k, w)| tokens[i + k].text.to_lowercase() == *w);
            if matches {
                let start = tokens[i].start;
                let end = tokens[i + want.len() - 1].end();
                let matched = &text[start..end];
                edits.push(Edit {
                    start,
                    end,
                    replacement: preserve_case(matched, &rules[ri].target),
                    dimension: rules[ri].dimension,
                    rule_ref: rules[ri].rule_ref.clone(),
                });
                i += want.len();
                continue 'scan;
            }
        }
        i += 1;
    }
    edits.retain(|e| e.replacement != text[e.start..e.end]);
    edits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialog::apply_edits;

    fn rule(source: &str, target: &str) -> SubstRule {
        SubstRule {
            source: source.into(),
            target: target.into(),
            dimension: RecordDimension::Lexical,
            rule_ref: RuleRef::Unattributed,
        }
    }

    #[test]
    fn case_preserved() {
        assert_eq!(preserve_case("color", "colour"), "colour");
        assert_eq!(preserve_case("Color", "colour"), "Colour");
        assert_eq!(preserve_case("COLOR", "colour"), "COLOUR");
    }

    #[test]
    fn longest_match_wins() {
        let rules = vec![rule("gas", "petrol"), rule("gas station", "servo")];
        let edits = substitute("the gas station had gas", &rules);
        assert_eq!(apply_edits("the gas station had gas", &edits), "the servo had petrol");
    }

    #[test]
    fn left_to_right_no_overlap() {
        let rules = vec![rule("a b", "X"), rule("b c", "Y")];
        let edits = substitute("a b c", &rules);
        assert_eq!(apply_edits("a b c", &edits), "X c");
    }

    #[test]
    fn word_boundaries_respected() {
        let rules = vec![rule("color", "colour")];
        let edits = substitute("coloring the colorful color", &rules);
        assert_eq!(
            apply_edits("coloring the colorful color", &edits),
            "coloring the colorful colour"
        );
    }

    #[test]
    fn capitalized_match() {
        let rules = vec![rule("truck", "lorry")];
        let edits = substitute("Truck drivers love the truck", &rules);
        assert_eq!(
            apply_edits("Truck drivers love the truck", &edits),
            "Lorry drivers love the lorry"
        );
    }

    #[test]
    fn identity_rules_produce_no_edits() {
        let rules = vec![rule("color", "color")];
        assert!(substitute("the color", &rules).is_empty());
    }
}
