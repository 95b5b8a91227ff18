//! Prompt template registry.
//!
//! Rendering is pure byte-exact substitution: the same (template, bindings)
//! pair always yields identical bytes, across processes. Every placeholder in
//! a template body must be bound, and bindings may not contain keys the body
//! does not use.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TemplateName {
    SeedNatural,
    SeedIndirect,
    OrtholexTransform,
    MorphTransform,
    WordbankFill,
    WordbankRate,
    Identify,
    ResponseComplete,
    JudgeLexical,
    JudgeOrthographic,
    JudgeMorph,
}

impl TemplateName {
    pub const ALL: [TemplateName; 11] = [
        TemplateName::SeedNatural,
        TemplateName::SeedIndirect,
        TemplateName::OrtholexTransform,
        TemplateName::MorphTransform,
        TemplateName::WordbankFill,
        TemplateName::WordbankRate,
        TemplateName::Identify,
        TemplateName::ResponseComplete,
        TemplateName::JudgeLexical,
        TemplateName::JudgeOrthographic,
        TemplateName::JudgeMorph,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TemplateName::SeedNatural => "seed_natural",
            TemplateName::SeedIndirect => "seed_indirect",
            TemplateName::OrtholexTransform => "ortholex_transform",
            TemplateName::MorphTransform => "morph_transform",
            TemplateName::WordbankFill => "wordbank_fill",
            TemplateName::WordbankRate => "wordbank_rate",
            TemplateName::Identify => "identify",
            TemplateName::ResponseComplete => "response_complete",
            TemplateName::JudgeLexical => "judge_lexical",
            TemplateName::JudgeOrthographic => "judge_orthographic",
            TemplateName::JudgeMorph => "judge_morph",
        }
    }

    pub fn parse(name: &str) -> Result<TemplateName> {
        TemplateName::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == name)
            .ok_or_else(|| Error::Render {
                template: name.to_string(),
                message: "unknown template name".into(),
            })
    }

    /// Whether this template has an OrthoLex variant (the benchmark prompts
    /// drop the mention of "morphosyntactic" when testing OrthoLex data).
    pub fn has_ortholex_variant(self) -> bool {
        matches!(self, TemplateName::Identify | TemplateName::ResponseComplete)
    }

    pub fn body(self, ortholex_variant: bool) -> &'static str {
        match (self, ortholex_variant) {
            (TemplateName::SeedNatural, _) => SEED_NATURAL,
            (TemplateName::SeedIndirect, _) => SEED_INDIRECT,
            (TemplateName::OrtholexTransform, _) => ORTHOLEX_TRANSFORM,
            (TemplateName::MorphTransform, _) => MORPH_TRANSFORM,
            (TemplateName::WordbankFill, _) => WORDBANK_FILL,
            (TemplateName::WordbankRate, _) => WORDBANK_RATE,
            (TemplateName::Identify, false) => IDENTIFY,
            (TemplateName::Identify, true) => IDENTIFY_ORTHOLEX,
            (TemplateName::ResponseComplete, false) => RESPONSE_COMPLETE,
            (TemplateName::ResponseComplete, true) => RESPONSE_COMPLETE_ORTHOLEX,
            (TemplateName::JudgeLexical, _) => JUDGE_LEXICAL,
            (TemplateName::JudgeOrthographic, _) => JUDGE_ORTHOGRAPHIC,
            (TemplateName::JudgeMorph, _) => JUDGE_MORPH,
        }
    }
}

/// Placeholder names occurring in a body, in order of first appearance.
pub fn placeholders(body: &str) -> Vec<&str> {
    let mut names = Vec::new();
    let bytes = body.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'{' {
            if let Some(end) = body[i + 1..].find('}') {
                let name = &body[i + 1..i + 1 + end];
                if !name.is_empty()
                    && name
                        .bytes()
                        .all(|b| b.is_ascii_lowercase() || b == b'_')
                {
                    if !names.contains(&name) {
                        names.push(name);
                    }
                    i += end + 2;
                    continue;
                }
            }
        }
        i += 1;
    }
    names
}

/// Renders a template by substituting `bindings` into its body. Missing or
/// extra bindings are rejected with the offending names listed.
pub fn render(
    name: TemplateName,
    ortholex_variant: bool,
    bindings: &BTreeMap<&str, String>,
) -> Result<String> {
    let body = name.body(ortholex_variant);
    let wanted = placeholders(body);
    let missing: Vec<&str> = wanted
        .iter()
        .copied()
        .filter(|p| !bindings.contains_key(p))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Render {
            template: name.as_str().to_string(),
            message: format!("missing placeholders: {}", missing.join(", ")),
        });
    }
    let extra: Vec<&str> = bindings
        .keys()
        .copied()
        .filter(|k| !wanted.contains(k))
        .collect();
    if !extra.is_empty() {
        return Err(Error::Render {
            template: name.as_str().to_string(),
            message: format!("unknown bindings: {}", extra.join(", ")),
        });
    }
    // Single pass over the body; substituted values are never re-scanned.
    let mut out = String::with_capacity(body.len());
    let mut rest = body;
    while let Some(open) = rest.find('{') {
        let (head, tail) = rest.split_at(open);
        out.push_str(head);
        if let Some(close) = tail.find('}') {
            let key = &tail[1..close];
            if let Some(value) = bindings.get(key) {
                out.push_str(value);
                rest = &tail[close + 1..];
                continue;
            }
        }
        out.push('{');
        rest = &tail[1..];
    }
    out.push_str(rest);
    Ok(out)
}

const SEED_NATURAL: &str = r#"You are tasked with creating a natural, multi-turn conversation between a USER and an ASSISTANT about the topic: ({us_word})

Rules:
- Generate a conversation in Standard American English (USA) with {num_of_turns} turns.
- If the topic ({us_word}) is related to spelling (e.g., words ending in -or), come up with an example that has the corresponding spelling structure.
- Make the conversation feel natural and conversational.
- Each turn = one USER message + one ASSISTANT response.

Format:

Turn 1:
USER: [message]
ASSISTANT: [response]

Turn 2:
USER: [message]
ASSISTANT: [response]
[continue as needed]"#;

const SEED_INDIRECT: &str = r#"You are tasked with creating a natural, multi-turn conversation between a USER and an ASSISTANT about the topic: [{us_word}]

Rules:
- Generate a conversation in Standard American English (USA) with {num_of_turns} turns.
- If the topic ({us_word}) is related to spelling (e.g., words ending in -or), come up with an example that has the corresponding spelling structure.
- The USER must not directly mention the word "{us_word}" in the FIRST turn.
- In the first turn, the USER should approach the topic indirectly through:
  - Describing situations where it's needed
  - Asking about related problems or scenarios
  - Mentioning associated activities
  - Describing its features without naming it
- Make the conversation feel natural and conversational.
- The ASSISTANT can mention "{us_word}" in any turn. The USER can mention it starting from the second turn.
- Each turn = one USER message + one ASSISTANT response.

Format:

Turn 1:
USER: [message]
ASSISTANT: [response]

Turn 2:
USER: [message]
ASSISTANT: [response]
[continue as needed]"#;

const ORTHOLEX_TRANSFORM: &str = r#"Convert the multi-turn dialogue from Standard American English Dialect to {target_dialect} English Dialect.

Instructions:
- Convert the dialogue while maintaining the original meaning, tone, and conversational flow
- Convert all measurements to {target_dialect} standard units
- Ensure the conversion reflects authentic linguistic features of the {target_dialect} English dialect
- Focus on genuine dialectal variations rather than exaggerated stereotypical representations
- After the conversion, provide a detailed explanation of all changes made

CONSTRAINTS:
- Do not change the original morphosyntactic features. (differences in grammar, including how words are formed (morphology) and how they are arranged in sentences (syntax).)
- You are only allowed to make lexical, orthographic, and unit transformations mentioned below.
- Keep the number and segmentation of turns identical to the original.

Dimensions to Consider:
- Lexical Transformation: This dimension refers to the differences in vocabulary or the specific words used to refer to the same concept
- Orthographic Transformation: This dimension involves variations in the spelling of words. The pronunciation and meaning are generally the same, but the written form differs.
- Unit conversions (e.g., standard metric vs imperial system)

{wordbank_guidelines}

FORMAT:
CONVERTED DIALOGUE:
[{target_dialect} English version here with grammar/prepositions/modals unchanged; same number of turns]
[Use the Turn X format with USER/ASSISTANT labels as the original dialogue]

EXPLANATION OF CHANGES:
- List every change you made, grouped by dimension (Orthographic, Lexical).
- Include an "INTENTIONAL NON-CHANGES (Morphosyntax)" section noting items you did not change because it would have altered grammar, prepositions, or modals.

Original Dialogue to Convert:
{dialogue}"#;

const MORPH_TRANSFORM: &str = r#"Previous Dialogue: {prev_dialogue}

You are a linguistic expert specializing in {target_dialect} English dialects.

Your task is to convert the text into an authentic-sounding {target_dialect} English dialect based on the given rule and then explain the specific changes you made.

Instructions:
- Refer to the previous dialogue for context understanding, do not transform the previous dialogue.
- Your primary goal is to maintain a natural flow and preserve the original meaning. Apply the transformation rule listed in the "Dialect Rule" section.
- Pay careful attention to the human comments for specific implementation details.
- After the conversion, provide a detailed explanation of all changes made.
- Consider the previous dialogue context to ensure consistency.
- If the rule cannot be naturally applied, you may skip the transformation. Apply rules for naturalness, not for every applicable candidate.

Format your response as:
CONVERTED DIALOGUE: [Provide the {target_dialect} version here]
EXPLANATION OF CHANGES: [Provide your explanation here]

## Dialect Rule
Rule: {transformation_rule}
Example of original sentence: {original_sentence}
Example of transformed sentence: {transformed_sentence}
Description: {rule_description}
Related Human's Comments: {human_comments}

## New dialogue to transform ({speaker}): {utterance_to_transform}"#;

const WORDBANK_FILL: &str = r#"Task: You are a linguist of {target_dialect} English. You will be given a Standard American {dimension} term. Output the {target_dialect} English equivalent ONLY if it meets these criteria:

Rules:
- It is a commonly used, mainstream {target_dialect} English term (not rare, archaic, or regional)
- It is the standard/primary term used in {target_dialect} English
- If the Standard American English term is used mostly or if no such prevalent {target_dialect} equivalent exists, output the Standard American English {dimension} term unchanged.

The Standard American English {dimension} term to translate:
{us_word}

Format:

WORD: <the {target_dialect} English equivalent or the original US term>"#;

const WORDBANK_RATE: &str = r#"Task: Compare the original (US English) word/spelling with the transformed ({target_dialect} English) variant on a 1-4 scale:

Rules:
- 1: Feature is not used. The transformed word/spelling is never correct in {target_dialect} English.
- 2: Feature exists but is rare. The word/spelling might be understood but is outdated, region-specific, or influenced by other dialects. LLM should understand this term but not generate it.
- 3: Feature exists and is commonly used in colloquial speech. The word/spelling is widespread in informal {target_dialect} English but may coexist with other variants. Both forms are acceptable.
- 4: Feature is required in this locale. Using the US variant would sound unnatural or incorrect. The {target_dialect} variant is the standard and expected form.

You will be given a American English version of a word/spelling and its corresponding {target_dialect} English transformation. Based on the criteria above, provide a rating from 1 to 4.

Reference Dataset:
{human_annotated_guideline}

Words to Evaluate:
US English: {us_word}
{target_dialect} English: {target_dialect_word}

Format:
Rating: <number from 1 to 4>"#;

const IDENTIFY: &str = r#"You are an expert linguist specializing in identifying different English dialects.

Your task is to analyze a {turn}-turn dialogue where the user's and assistant's response is provided in a certain English dialect.

The answer options are as follows:
{options}

Instructions:
- Carefully examine the morphosyntactic, lexical, and orthographic features in the dialogue.
- Based on your analysis, determine the dialect of the conversation.
- Provide your answer in the format specified below.
- Your answer should be one of the options above.
- Do not give explanations.

Required Output Format:
ANSWER: <Your Answer; Choose the correct option.>

Dialogue to Evaluate:
{dialogue}"#;

const IDENTIFY_ORTHOLEX: &str = r#"You are an expert linguist specializing in identifying different English dialects.

Your task is to analyze a {turn}-turn dialogue where the user's and assistant's response is provided in a certain English dialect.

The answer options are as follows:
{options}

Instructions:
- Carefully examine the lexical and orthographic features in the dialogue.
- Based on your analysis, determine the dialect of the conversation.
- Provide your answer in the format specified below.
- Your answer should be one of the options above.
- Do not give explanations.

Required Output Format:
ANSWER: <Your Answer; Choose the correct option.>

Dialogue to Evaluate:
{dialogue}"#;

const RESPONSE_COMPLETE: &str = r#"You are an expert linguist specializing in {target_dialect} English dialect.

Your task is to select the most appropriate response to complete a {turn}-turn dialogue. The dialogue exhibits specific dialectal features: lexical, orthographic, and morphosyntactic features.

You will be provided with:
1. The Conversation History (Conversation history of previous turns).
2. The Current User Turn (The message the Assistant must reply to).
3. A list of Candidate Options for the Assistant's response.

Instructions:
- Analyze the {sentence} of the 'Conversation History' and 'Current User Turn' to identify the specific English dialect being used.
- Evaluate the 'Candidate Options' and select the one that is linguistically consistent with the identified dialect from the conversation history and current user turn.
- Provide your answer in the format specified below.
- Your answer should be one of the options above (provide the corresponding index/label). Choose the most probable option.
- Do not give explanations.

Required Output Format:
ANSWER: <Your Answer; Choose the correct option; Provide the alphabet character of the chosen option.>

Conversation History:
{context_history}

Current User Turn:
{current_user_turn}

Candidate Options:
{possible_options_str}"#;

const RESPONSE_COMPLETE_ORTHOLEX: &str = r#"You are an expert linguist specializing in {target_dialect} English dialect.

Your task is to select the most appropriate response to complete a {turn}-turn dialogue. The dialogue exhibits specific dialectal features: lexical and orthographic features.

You will be provided with:
1. The Conversation History (Conversation history of previous turns).
2. The Current User Turn (The message the Assistant must reply to).
3. A list of Candidate Options for the Assistant's response.

Instructions:
- Analyze the {sentence} of the 'Conversation History' and 'Current User Turn' to identify the specific English dialect being used.
- Evaluate the 'Candidate Options' and select the one that is linguistically consistent with the identified dialect from the conversation history and current user turn.
- Provide your answer in the format specified below.
- Your answer should be one of the options above (provide the corresponding index/label). Choose the most probable option.
- Do not give explanations.

Required Output Format:
ANSWER: <Your Answer; Choose the correct option; Provide the alphabet character of the chosen option.>

Conversation History:
{context_history}

Current User Turn:
{current_user_turn}

Candidate Options:
{possible_options_str}"#;

const JUDGE_LEXICAL: &str = r#"You are an expert linguist specializing in English lexical and vocabulary variations for {target_dialect} English dialect. Your task is to evaluate a text based STRICTLY on its lexical choices (vocabulary) for {target_dialect} English dialect.

Evaluation Guidelines:
{user_provided_guidelines}

Binary Classification Scale:
1 - Appropriate (ALL vocabulary choices are consistent with {target_dialect} English, or the text uses universal/neutral terms that do not violate dialect norms).
0 - Inappropriate (The text contains ONE OR MORE words or idioms that belong to a conflicting dialect).
N/A - Not Applicable (The text contains no words that have variant lexical aspects/vocabularies across dialects).

Instructions:
- The 'Evaluation Guidelines' consist of the human annotation guidelines and their corresponding annotations.
- Use the 'Evaluation Guidelines' as a reference frame to identify acceptable variations (STRICTLY FOLLOW THE GUIDELINES GIVEN).
- SCORE CRITERIA: To receive a score of 1, "ALL" lexical components must be appropriate. If the text uses a term from a conflicting dialect or is inappropriate, the score must be 0. If the input text does not contain any words that differ in vocabulary between dialects, output "N/A".
- Focus ONLY on word/vocabulary choices.
- Ignore spelling and grammatical structure.
- Please detail the factors contributing to this assessment.

Required Output Format:
Reasoning: <Explanation>
Score: <0, 1, or N/A>

Input Text:
{response_to_evaluate}"#;

const JUDGE_ORTHOGRAPHIC: &str = r#"You are an expert linguist specializing in English spelling and orthographic variations for {target_dialect} English dialect. Your task is to evaluate a text based STRICTLY on its spelling choices (orthography) for {target_dialect} English dialect.

Evaluation Guidelines:
{user_provided_guidelines}

Binary Classification Scale:
1 - Appropriate (ALL spelling choices are consistent with {target_dialect} English, or the text uses words whose spelling does not vary across dialects).
0 - Inappropriate (The text contains ONE OR MORE spellings that belong to a conflicting dialect).
N/A - Not Applicable (The text contains no words that have variant spellings across dialects).

Instructions:
- The 'Evaluation Guidelines' consist of the human annotation guidelines and their corresponding annotations.
- Use the 'Evaluation Guidelines' as a reference frame to identify acceptable variations (STRICTLY FOLLOW THE GUIDELINES GIVEN).
- SCORE CRITERIA: To receive a score of 1, "ALL" spellings must be appropriate. If the text uses a spelling from a conflicting dialect or is inappropriate, the score must be 0. If the input text does not contain any words that differ in spelling between dialects, output "N/A".
- Focus ONLY on spelling.
- Ignore vocabulary and grammatical structure.
- Please detail the factors contributing to this assessment.

Required Output Format:
Reasoning: <Explanation>
Score: <0, 1, or N/A>

Input Text:
{response_to_evaluate}"#;

const JUDGE_MORPH: &str = r#"You are an expert linguist specializing in English morphosyntactic and grammatical variations for {target_dialect} English dialect. Your task is to evaluate a text based STRICTLY on its grammatical structure (morphosyntax) for {target_dialect} English dialect.

Evaluation Guidelines:
{user_provided_guidelines}

Binary Classification Scale:
1 - Appropriate (ALL grammatical constructions are consistent with {target_dialect} English, or the text uses constructions that do not vary across dialects).
0 - Inappropriate (The text contains ONE OR MORE grammatical constructions that belong to a conflicting dialect).
N/A - Not Applicable (The text contains no constructions that vary morphosyntactically across dialects).

Instructions:
- The 'Evaluation Guidelines' consist of the human annotation guidelines and their corresponding annotations.
- Use the 'Evaluation Guidelines' as a reference frame to identify acceptable variations (STRICTLY FOLLOW THE GUIDELINES GIVEN).
- SCORE CRITERIA: To receive a score of 1, "ALL" grammatical constructions must be appropriate. If the text uses a construction from a conflicting dialect or is inappropriate, the score must be 0. If the input text does not contain any constructions that differ grammatically between dialects, output "N/A".
- Focus ONLY on grammar and sentence structure.
- Ignore vocabulary and spelling.
- Please detail the factors contributing to this assessment.

Required Output Format:
Reasoning: <Explanation>
Score: <0, 1, or N/A>

Input Text:
{response_to_evaluate}"#;

#[cfg(test)]
mod tests {
    use super::*;

    fn bind(pairs: &[(&'static str, &str)]) -> BTreeMap<&'static str, String> {
        pairs.iter().map(|(k, v)| (*k, v.to_string())).collect()
    }

    #[test]
    fn identify_mentions_turn_count() {
        let rendered = render(
            TemplateName::Identify,
            false,
            &bind(&[("turn", "1"), ("options", "(A) x"), ("dialogue", "Turn 1:")]),
        )
        .unwrap();
        assert!(rendered.contains("analyze a 1-turn dialogue"));
        assert!(rendered.contains("Do not give explanations."));
    }

    #[test]
    fn ortholex_variant_drops_morphosyntactic() {
        let bindings = bind(&[("turn", "2"), ("options", "(A) x"), ("dialogue", "d")]);
        let full = render(TemplateName::Identify, false, &bindings).unwrap();
        let ortho = render(TemplateName::Identify, true, &bindings).unwrap();
        assert!(full.contains("morphosyntactic"));
        assert!(!ortho.contains("morphosyntactic"));
    }

    #[test]
    fn morph_template_allows_skipping() {
        let rendered = render(
            TemplateName::MorphTransform,
            false,
            &bind(&[
                ("prev_dialogue", "(none)"),
                ("target_dialect", "Irish"),
                ("transformation_rule", "r"),
                ("original_sentence", "a"),
                ("transformed_sentence", "b"),
                ("rule_description", "d"),
                ("human_comments", "c"),
                ("speaker", "user"),
                ("utterance_to_transform", "u"),
            ]),
        )
        .unwrap();
        assert!(rendered.contains("If the rule cannot be naturally applied, you may skip"));
    }

    #[test]
    fn missing_placeholder_listed() {
        let err = render(
            TemplateName::Identify,
            false,
            &bind(&[("turn", "1"), ("dialogue", "d")]),
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("options"), "{msg}");
    }

    #[test]
    fn extra_binding_rejected() {
        let err = render(
            TemplateName::Identify,
            false,
            &bind(&[
                ("turn", "1"),
                ("options", "o"),
                ("dialogue", "d"),
                ("bogus", "x"),
            ]),
        )
        .unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn rendering_is_pure() {
        let bindings = bind(&[("turn", "4"), ("options", "(A) q"), ("dialogue", "t")]);
        let a = render(TemplateName::Identify, false, &bindings).unwrap();
        let b = render(TemplateName::Identify, false, &bindings).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn substituted_values_not_rescanned() {
        let rendered = render(
            TemplateName::SeedNatural,
            false,
            &bind(&[("us_word", "{num_of_turns}"), ("num_of_turns", "2")]),
        )
        .unwrap();
        assert!(rendered.contains("topic: ({num_of_turns})"));
    }

    #[test]
    fn every_template_has_placeholders() {
        for name in TemplateName::ALL {
            assert!(
                !placeholders(name.body(false)).is_empty(),
                "{} has no placeholders",
                name.as_str()
            );
        }
    }
}
