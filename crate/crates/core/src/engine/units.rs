//! Deterministic imperial-to-metric conversion for distance, volume, and
//! temperature mentions. Applied for every metric dialect; arithmetic is done
//! here rather than trusted to a model.

use std::sync::OnceLock;

use regex::Regex;

use crate::dialect::Dialect;
use crate::dialog::{Edit, RecordDimension, RuleRef};

struct UnitSpec {
    pattern: &'static str,
    to_litres: Option<f64>,
    to_km: Option<f64>,
    to_m: Option<f64>,
    to_cm: Option<f64>,
}

const DISTANCE_VOLUME: &[UnitSpec] = &[
    UnitSpec { pattern: r"miles?|mi\.", to_litres: None, to_km: Some(1.609344), to_m: None, to_cm: None },
    UnitSpec { pattern: r"yards?", to_litres: None, to_km: None, to_m: Some(0.9144), to_cm: None },
    UnitSpec { pattern: r"feet|foot", to_litres: None, to_km: None, to_m: Some(0.3048), to_cm: None },
    UnitSpec { pattern: r"inch(?:es)?", to_litres: None, to_km: None, to_m: None, to_cm: Some(2.54) },
    UnitSpec { pattern: r"gallons?", to_litres: Some(3.785411784), to_km: None, to_m: None, to_cm: None },
    UnitSpec { pattern: r"quarts?", to_litres: Some(0.946352946), to_km: None, to_m: None, to_cm: None },
    UnitSpec { pattern: r"pints?", to_litres: Some(0.473176473), to_km: None, to_m: None, to_cm: None },
];

fn measurement_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        let alternatives: Vec<&str> = DISTANCE_VOLUME.iter().map(|u| u.pattern).collect();
        Regex::new(&format!(
            r"(?i)\b(\d+(?:\.\d+)?)\s*({})\b",
            alternatives.join("|")
        ))
        .unwrap()
    })
}

fn fahrenheit_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)\b(\d+(?:\.\d+)?)\s*(°\s*F\b|degrees?\s+Fahrenheit\b)").unwrap()
    })
}

fn metric_word_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)\b(\d+(?:\.\d+)?)\s*(kilomet(?:er|re)s?|met(?:er|re)s?|centimet(?:er|re)s?|lit(?:er|re)s?|millilit(?:er|re)s?|°\s*C\b|degrees?\s+Celsius\b)").unwrap()
    })
}

/// Formats a converted value: one decimal place, trailing `.0` dropped.
fn format_value(value: f64) -> String {
    let rounded = (value * 10.0).round() / 10.0;
    if (rounded - rounded.round()).abs() < 1e-9 {
        format!("{}", rounded.round() as i64)
    } else {
        format!("{rounded:.1}")
    }
}

fn unit_word(base_american: &str, base_british: &str, value_text: &str, dialect: Dialect) -> String {
    let word = if dialect.metric_british_spelling() {
        base_british
    } else {
        base_american
    };
    if value_text == "1" {
        word.trim_end_matches('s').to_string()
    } else {
        word.to_string()
    }
}

/// Converts imperial measurements in `text` for a metric dialect. Returns the
/// edits in ascending coordinate order; no-op for US.
pub fn convert_units(text: &str, dialect: Dialect) -> Vec<Edit> {
    if !dialect.uses_metric() {
        return Vec::new();
    }
    let mut edits = Vec::new();
    for caps in measurement_regex().captures_iter(text) {
        let whole = caps.get(0).unwrap();
        let value: f64 = caps[1].parse().unwrap_or(0.0);
        let unit_text = caps[2].to_lowercase();
        let spec = DISTANCE_VOLUME
            .iter()
            .find(|u| Regex::new(&format!(r"(?i)^(?:{})$", u.pattern)).unwrap().is_match(&unit_text));
        let Some(spec) = spec else { continue };
        let (converted, us_word, gb_word) = if let Some(f) = spec.to_km {
            (value * f, "kilometers", "kilometres")
        } else if let Some(f) = spec.to_m {
            (value * f, "meters", "metres")
        } else if let Some(f) = spec.to_cm {
            (value * f, "centimeters", "centimetres")
        } else if let Some(f) = spec.to_litres {
            (value * f, "liters", "litres")
        } else {
            continue;
        };
        let value_text = format_value(converted);
        let unit = unit_word(us_word, gb_word, &value_text, dialect);
        edits.push(Edit {
            start: whole.start(),
            end: whole.end(),
            replacement: format!("{value_text} {unit}"),
            dimension: RecordDimension::Unit,
            rule_ref: RuleRef::Unit,
        });
    }
    for caps in fahrenheit_regex().captures_iter(text) {
        let whole = caps.get(0).unwrap();
        let value: f64 = caps[1].parse().unwrap_or(0.0);
        let celsius = (value - 32.0) * 5.0 / 9.0;
        let value_text = format_value(celsius);
        let unit = if caps[2].starts_with('°') || caps[2].starts_with("\u{00b0}") {
            "°C".to_string()
        } else {
            let degrees = if value_text == "1" { "degree" } else { "degrees" };
            format!("{degrees} Celsius")
        };
        edits.push(Edit {
            start: whole.start(),
            end: whole.end(),
            replacement: format!("{value_text}{}", if unit == "°C" { format!("{unit}") } else { format!(" {unit}") }),
            dimension: RecordDimension::Unit,
            rule_ref: RuleRef::Unit,
        });
    }
    edits.sort_by_key(|e| e.start);
    edits
}

/// Heuristic used when attributing diff regions: does this edit look like an
/// imperial measurement rewritten as a metric one?
pub fn looks_like_unit_conversion(source_span: &str, replacement: &str) -> bool {
    let src = source_span.trim();
    let rep = replacement.trim();
    (measurement_regex().is_match(src) || fahrenheit_regex().is_match(src))
        && metric_word_regex().is_match(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialog::apply_edits;

    #[test]
    fn miles_to_kilometres() {
        let text = "I drove 5 miles today";
        let edits = convert_units(text, Dialect::GB);
        assert_eq!(apply_edits(text, &edits), "I drove 8 kilometres today");
    }

    #[test]
    fn philippine_keeps_american_spelling() {
        let text = "I drove 5 miles today";
        let edits = convert_units(text, Dialect::PH);
        assert_eq!(apply_edits(text, &edits), "I drove 8 kilometers today");
    }

    #[test]
    fn us_untouched() {
        assert!(convert_units("5 miles", Dialect::US).is_empty());
    }

    #[test]
    fn gallons_and_fahrenheit() {
        let text = "2 gallons at 72°F or 72 degrees Fahrenheit";
        let out = apply_edits(text, &convert_units(text, Dialect::AU));
        assert_eq!(out, "7.6 litres at 22.2°C or 22.2 degrees Celsius");
    }

    #[test]
    fn singular_unit() {
        let text = "walk 1 mile";
        let out = apply_edits(text, &convert_units(text, Dialect::IE));
        assert_eq!(out, "walk 1.6 kilometres");
    }

    #[test]
    fn detection_of_conversion_pairs() {
        assert!(looks_like_unit_conversion("5 miles", "8 kilometres"));
        assert!(looks_like_unit_conversion("72°F", "22.2°C"));
        assert!(!looks_like_unit_conversion("color", "colour"));
        assert!(!looks_like_unit_conversion("5 miles", "a long way"));
    }
}
