//! Token-level diff extraction and edit-script bookkeeping.
//!
//! A dialog's transformation records double as an edit script from the base
//! utterance to the current one: per utterance the records are
//! non-overlapping and ordered, with offsets in base-text coordinates.
//! Sequential passes (wordbank, units, one morph rule at a time) produce
//! edits against the then-current text; [`compose`] folds those back into
//! base coordinates so the script stays consistent end to end.

use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;

use super::tokens::tokenize;
use super::types::{
    Dialog, RecordDimension, RuleRef, Speaker, TransformationRecord, TransformedDialog,
};

/// One edit over a single utterance: replace `text[start..end]` with
/// `replacement`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edit {
    pub start: usize,
    pub end: usize,
    pub replacement: String,
    pub dimension: RecordDimension,
    pub rule_ref: RuleRef,
}

impl Edit {
    pub fn delta(&self) -> isize {
        self.replacement.len() as isize - (self.end - self.start) as isize
    }
}

fn unattributed(start: usize, end: usize, replacement: String) -> Edit {
    Edit {
        start,
        end,
        replacement,
        dimension: RecordDimension::Lexical,
        rule_ref: RuleRef::Unattributed,
    }
}

/// Longest-common-subsequence alignment over word/punctuation tokens.
/// Returns the changed regions as edits in `a`-coordinates. Adjacent changed
/// tokens merge into one region (interior whitespace included); pure
/// insertions and deletions span the whole inter-token gap on both sides so
/// whitespace replays exactly.
pub fn lcs_edits(a: &str, b: &str) -> Vec<Edit> {
    let ta = tokenize(a);
    let tb = tokenize(b);
    let n = ta.len();
    let m = tb.len();

    // DP table of LCS lengths over token suffixes.
    let mut table = vec![0u32; (n + 1) * (m + 1)];
    let idx = |i: usize, j: usize| i * (m + 1) + j;
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            table[idx(i, j)] = if ta[i].text == tb[j].text {
                table[idx(i + 1, j + 1)] + 1
            } else {
                table[idx(i + 1, j)].max(table[idx(i, j + 1)])
            };
        }
    }

    let mut edits: Vec<Edit> = Vec::new();
    let mut i = 0;
    let mut j = 0;
    let mut run_a: Option<usize> = None;
    let mut run_b: Option<usize> = None;

    // `ai`/`bj` are the indices of the matched tokens bounding the run on the
    // right (or n/m at the end of the walk).
    let mut flush = |ai: usize,
                     bj: usize,
                     run_a: &mut Option<usize>,
                     run_b: &mut Option<usize>,
                     edits: &mut Vec<Edit>| {
        let (sa, sb) = (run_a.take(), run_b.take());
        match (sa, sb) {
            (None, None) => {}
            (Some(sa), Some(sb)) => {
                // Substitution: token-run bounds on both sides.
                edits.push(unattributed(
                    ta[sa].start,
                    ta[ai - 1].end(),
                    b[tb[sb].start..tb[bj - 1].end()].to_string(),
                ));
            }
            (Some(sa), None) => {
                // Deletion: replace a's inter-anchor gap with b's gap so the
                // surrounding whitespace stays exact.
                let a_start = if sa > 0 { ta[sa - 1].end() } else { 0 };
                let a_end = if ai < n { ta[ai].start } else { a.len() };
                let b_start = if bj > 0 { tb[bj - 1].end() } else { 0 };
                let b_end = if bj < m { tb[bj].start } else { b.len() };
                edits.push(unattributed(a_start, a_end, b[b_start..b_end].to_string()));
            }
            (None, Some(sb)) => {
                // Insertion: b's gap replaces a's gap.
                let a_start = if ai > 0 { ta[ai - 1].end() } else { 0 };
                let a_end = if ai < n { ta[ai].start } else { a.len() };
                let b_start = if sb > 0 { tb[sb - 1].end() } else { 0 };
                let b_end = if bj < m { tb[bj].start } else { b.len() };
                edits.push(unattributed(a_start, a_end, b[b_start..b_end].to_string()));
            }
        }
    };

    while i < n && j < m {
        if ta[i].text == tb[j].text {
            flush(i, j, &mut run_a, &mut run_b, &mut edits);
            i += 1;
            j += 1;
        } else if table[idx(i + 1, j)] >= table[idx(i, j + 1)] {
            if run_a.is_none() {
                run_a = Some(i);
            }
            i += 1;
        } else {
            if run_b.is_none() {
                run_b = Some(j);
            }
            j += 1;
        }
    }
    if i < n && run_a.is_none() {
        run_a = Some(i);
    }
    if j < m && run_b.is_none() {
        run_b = Some(j);
    }
    flush(n, m, &mut run_a, &mut run_b, &mut edits);
    edits.retain(|e| e.replacement != a[e.start..e.end]);
    edits
}

/// Applies an edit script (base coordinates, sorted, non-overlapping) to the
/// base text.
pub fn apply_edits(base: &str, edits: &[Edit]) -> String {
    let mut out = String::with_capacity(base.len());
    let mut cursor = 0;
    for edit in edits {
        out.push_str(&base[cursor..edit.start]);
        out.push_str(&edit.replacement);
        cursor = edit.end;
    }
    out.push_str(&base[cursor..]);
    out
}

/// Image of a clean (non-interior) source position under an edit script.
/// `before_insertions` controls whether an insertion sitting exactly at the
/// position maps before or after its inserted text.
fn map_position(edits: &[Edit], pos: usize, before_insertions: bool) -> usize {
    let mut delta: isize = 0;
    for e in edits {
        let counts = if e.start == e.end {
            if before_insertions { e.end < pos } else { e.end <= pos }
        } else {
            e.end <= pos
        };
        if counts {
            delta += e.delta();
        }
    }
    (pos as isize + delta) as usize
}

/// Folds a step diff (edits in current-text coordinates) into an existing
/// base-coordinate script. Step edits overlapping an earlier replacement
/// merge with it and the merged edit carries the step's attribution; edits
/// that become identities are dropped.
pub fn compose(base: &str, existing: &[Edit], current: &str, step_edits: &[Edit]) -> Vec<Edit> {
    if step_edits.is_empty() {
        return existing.to_vec();
    }
    let next = apply_edits(current, step_edits);

    // Segment map of the current text over the existing script.
    enum Origin {
        Unchanged { base_start: usize },
        Replaced { edit_idx: usize },
    }
    struct Seg {
        cur_start: usize,
        cur_end: usize,
        origin: Origin,
    }
    let mut segs: Vec<Seg> = Vec::new();
    {
        let mut base_cursor = 0;
        let mut cur_cursor = 0;
        for (k, e) in existing.iter().enumerate() {
            if e.start > base_cursor {
                let len = e.start - base_cursor;
                segs.push(Seg {
                    cur_start: cur_cursor,
                    cur_end: cur_cursor + len,
                    origin: Origin::Unchanged {
                        base_start: base_cursor,
                    },
                });
                cur_cursor += len;
            }
            segs.push(Seg {
                cur_start: cur_cursor,
                cur_end: cur_cursor + e.replacement.len(),
                origin: Origin::Replaced { edit_idx: k },
            });
            cur_cursor += e.replacement.len();
            base_cursor = e.end;
        }
        segs.push(Seg {
            cur_start: cur_cursor,
            cur_end: cur_cursor + (base.len() - base_cursor),
            origin: Origin::Unchanged {
                base_start: base_cursor,
            },
        });
    }

    // Maps a current-text position to clean (base, current) anchor bounds.
    // Positions inside a replacement snap outward to its edges; boundary
    // positions prefer unchanged segments.
    let locate = |cur_pos: usize, snap_left: bool| -> (usize, usize) {
        for s in &segs {
            if cur_pos < s.cur_start || cur_pos > s.cur_end {
                continue;
            }
            if cur_pos == s.cur_end && !matches!(s.origin, Origin::Unchanged { .. }) {
                continue;
            }
            match &s.origin {
                Origin::Unchanged { base_start } => {
                    return (base_start + (cur_pos - s.cur_start), cur_pos);
                }
                Origin::Replaced { edit_idx } => {
                    let e = &existing[*edit_idx];
                    return if snap_left {
                        (e.start, s.cur_start)
                    } else {
                        (e.end, s.cur_end)
                    };
                }
            }
        }
        (base.len(), segs.last().map(|s| s.cur_end).unwrap_or(0))
    };

    // Dirty intervals with both base and current anchor bounds, merged on
    // the base axis.
    let mut intervals: Vec<(usize, usize, usize, usize)> = step_edits
        .iter()
        .map(|se| {
            let (b1, c1) = locate(se.start, true);
            let (b2, c2) = locate(se.end, false);
            (b1, b2.max(b1), c1, c2.max(c1))
        })
        .collect();
    intervals.sort();
    let mut merged: Vec<(usize, usize, usize, usize)> = Vec::new();
    for (b1, b2, c1, c2) in intervals {
        match merged.last_mut() {
            Some((_, pb2, _, pc2)) if b1 <= *pb2 => {
                *pb2 = (*pb2).max(b2);
                *pc2 = (*pc2).max(c2);
            }
            _ => merged.push((b1, b2, c1, c2)),
        }
    }

    // Existing edits survive unless their current-text span intersects a
    // dirty interval's current span.
    let cur_span_of = |k: usize| -> (usize, usize) {
        segs.iter()
            .find_map(|s| match s.origin {
                Origin::Replaced { edit_idx } if edit_idx == k => Some((s.cur_start, s.cur_end)),
                _ => None,
            })
            .expect("every existing edit has a segment")
    };
    let mut result: Vec<Edit> = Vec::new();
    for (k, e) in existing.iter().enumerate() {
        let (cs, ce) = cur_span_of(k);
        let consumed = merged.iter().any(|&(_, _, c1, c2)| cs < c2 && c1 < ce);
        if !consumed {
            result.push(e.clone());
        }
    }

    let meta = &step_edits[0];
    for (b1, b2, c1, c2) in merged {
        let n1 = map_position(step_edits, c1, true);
        let n2 = map_position(step_edits, c2, false).max(n1);
        let replacement = next[n1..n2].to_string();
        if replacement == base[b1..b2] {
            continue;
        }
        result.push(Edit {
            start: b1,
            end: b2,
            replacement,
            dimension: meta.dimension,
            rule_ref: meta.rule_ref.clone(),
        });
    }
    result.sort_by(|x, y| (x.start, x.end).cmp(&(y.start, y.end)));
    result
}

fn record_from_edit(
    base_text: &str,
    turn_index: usize,
    speaker: Speaker,
    edit: &Edit,
) -> TransformationRecord {
    TransformationRecord {
        dimension: edit.dimension,
        turn_index,
        speaker,
        offset: edit.start,
        source_span: base_text[edit.start..edit.end].to_string(),
        replacement: edit.replacement.clone(),
        rule_ref: edit.rule_ref.clone(),
    }
}

pub(crate) fn records_from_edits(
    base_text: &str,
    turn_index: usize,
    speaker: Speaker,
    edits: &[Edit],
) -> Vec<TransformationRecord> {
    edits
        .iter()
        .map(|e| record_from_edit(base_text, turn_index, speaker, e))
        .collect()
}

pub(crate) fn edits_from_records(records: &[&TransformationRecord]) -> Vec<Edit> {
    records
        .iter()
        .map(|r| Edit {
            start: r.offset,
            end: r.source_end(),
            replacement: r.replacement.clone(),
            dimension: r.dimension,
            rule_ref: r.rule_ref.clone(),
        })
        .collect()
}

/// Attributes a raw diff edit against the knowledge base: a wordbank pair
/// match wins, then a unit-conversion shape, otherwise the edit stays
/// unattributed.
pub(crate) fn attribute_edit(
    edit: &mut Edit,
    kb: &KnowledgeBase,
    dialect: crate::dialect::Dialect,
    base_text: &str,
) {
    let source_span = &base_text[edit.start..edit.end];
    if let Some(mapping) = kb.attribute_pair(source_span, &edit.replacement, dialect) {
        edit.dimension = match mapping.dimension {
            crate::kb::Dimension::Lexical => RecordDimension::Lexical,
            crate::kb::Dimension::Orthographic => RecordDimension::Orthographic,
        };
        edit.rule_ref = RuleRef::Mapping(mapping.id.clone());
    } else if crate::engine::looks_like_unit_conversion(source_span, &edit.replacement) {
        edit.dimension = RecordDimension::Unit;
        edit.rule_ref = RuleRef::Unit;
    } else {
        edit.dimension = RecordDimension::Lexical;
        edit.rule_ref = RuleRef::Unattributed;
    }
}

/// Extracts transformation records between two structurally identical
/// dialogs. Each contiguous changed region becomes one record; records are
/// tagged with the knowledge-base rule that explains them when one exists.
pub fn diff_extract(
    original: &Dialog,
    transformed: &Dialog,
    kb: &KnowledgeBase,
    dialect: crate::dialect::Dialect,
) -> Result<Vec<TransformationRecord>> {
    if original.turn_count() != transformed.turn_count() {
        return Err(Error::Structure(format!(
            "turn count mismatch: {} vs {}",
            original.turn_count(),
            transformed.turn_count()
        )));
    }
    let mut records = Vec::new();
    for (turn_index, speaker, base_text) in original.utterances() {
        let new_text = transformed.utterance(turn_index, speaker).unwrap();
        let mut edits = lcs_edits(base_text, new_text);
        for edit in &mut edits {
            attribute_edit(edit, kb, dialect, base_text);
        }
        records.extend(records_from_edits(base_text, turn_index, speaker, &edits));
    }
    Ok(records)
}

/// Replays a record list against the base dialog, reproducing the
/// transformed text exactly.
pub fn apply_records(base: &Dialog, records: &[TransformationRecord]) -> Dialog {
    let mut out = base.clone();
    for (turn_index, speaker, base_text) in base.utterances() {
        let mut utterance_records: Vec<&TransformationRecord> = records
            .iter()
            .filter(|r| r.turn_index == turn_index && r.speaker == speaker)
            .collect();
        utterance_records.sort_by_key(|r| r.offset);
        if utterance_records.is_empty() {
            continue;
        }
        let edits = edits_from_records(&utterance_records);
        *out.utterance_mut(turn_index, speaker).unwrap() = apply_edits(base_text, &edits);
    }
    out
}

/// Offsets of each record in the *current* text of its utterance, in the
/// order given (records must be the utterance's full sorted script).
pub fn current_offsets(records: &[&TransformationRecord]) -> Vec<usize> {
    let mut delta: isize = 0;
    let mut out = Vec::with_capacity(records.len());
    for r in records {
        out.push((r.offset as isize + delta) as usize);
        delta += r.replacement.len() as isize - r.source_span.len() as isize;
    }
    out
}

/// Rebuilds a transformed dialog's turns from base turns plus its records.
pub fn rebuild_turns(base: &Dialog, transformed: &mut TransformedDialog) {
    let replayed = apply_records(base, &transformed.records);
    transformed.turns = replayed.turns;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialect::Dialect;
    use crate::dialog::types::{Mode, Turn};
    use crate::kb::{Dimension, KnowledgeBase, Rating, RatingSource, WordMapping};

    fn dialog(turns: &[(&str, &str)]) -> Dialog {
        Dialog {
            id: "d".into(),
            seed_word: "seed".into(),
            mode: Mode::Natural,
            turns: turns
                .iter()
                .map(|(u, a)| Turn {
                    user: u.to_string(),
                    assistant: a.to_string(),
                })
                .collect(),
        }
    }

    fn toy_kb() -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        for (s, t, dim) in [
            ("color", "colour", Dimension::Orthographic),
            ("parking lot", "car park", Dimension::Lexical),
        ] {
            kb.insert_mapping(WordMapping {
                id: String::new(),
                source_term: s.into(),
                target_term: t.into(),
                dialect: Dialect::GB,
                dimension: dim,
                rating: Rating::new(4).unwrap(),
                rating_source: RatingSource::Human,
                notes: None,
            })
            .unwrap();
        }
        kb
    }

    #[test]
    fn single_word_change() {
        // Hand-derived over the four tokens: only `color` differs.
        let records = diff_extract(
            &dialog(&[("I like the color", "ok")]),
            &dialog(&[("I like the colour", "ok")]),
            &toy_kb(),
            Dialect::GB,
        )
        .unwrap();
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert_eq!(r.source_span, "color");
        assert_eq!(r.replacement, "colour");
        assert_eq!(r.offset, 11);
        assert_eq!(r.dimension, RecordDimension::Orthographic);
        assert!(matches!(r.rule_ref, RuleRef::Mapping(_)));
    }

    #[test]
    fn identical_dialogs_no_records() {
        let d = dialog(&[("same text here", "same reply here")]);
        let records = diff_extract(&d, &d, &toy_kb(), Dialect::GB).unwrap();
        assert!(records.is_empty());
    }

    #[test]
    fn multi_token_span_is_one_record() {
        let records = diff_extract(
            &dialog(&[("the full parking lots nearby", "ok")]),
            &dialog(&[("the chockers car parks nearby", "ok")]),
            &toy_kb(),
            Dialect::GB,
        )
        .unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].source_span, "full parking lots");
        assert_eq!(records[0].replacement, "chockers car parks");
    }

    #[test]
    fn turn_count_mismatch_is_structural() {
        let a = dialog(&[("a", "b")]);
        let b = dialog(&[("a", "b"), ("c", "d")]);
        assert!(matches!(
            diff_extract(&a, &b, &toy_kb(), Dialect::GB),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn insertion_replays_exactly() {
        let a = "He was very angry.";
        let b = "He was, like, very angry.";
        let edits = lcs_edits(a, b);
        assert_eq!(edits.len(), 1);
        assert_eq!(apply_edits(a, &edits), b);
    }

    #[test]
    fn deletion_replays_exactly() {
        let a = "He was, like, very angry.";
        let b = "He was very angry.";
        let edits = lcs_edits(a, b);
        assert_eq!(apply_edits(a, &edits), b);
    }

    #[test]
    fn edge_insertions_replay() {
        let a = "middle text";
        assert_eq!(
            apply_edits(a, &lcs_edits(a, "at the middle text")),
            "at the middle text"
        );
        assert_eq!(
            apply_edits(a, &lcs_edits(a, "middle text indeed!")),
            "middle text indeed!"
        );
    }

    #[test]
    fn replay_reproduces_target() {
        let base = dialog(&[("I like the color of the parking lot", "fine")]);
        let target = dialog(&[("I like the colour of the car park", "fine")]);
        let records = diff_extract(&base, &target, &toy_kb(), Dialect::GB).unwrap();
        let replayed = apply_records(&base, &records);
        assert_eq!(replayed.turns, target.turns);
    }

    #[test]
    fn source_spans_verbatim_at_offsets() {
        let base = dialog(&[("paint the color on the parking lot wall", "ok")]);
        let target = dialog(&[("paint the colour on the car park wall", "ok")]);
        let records = diff_extract(&base, &target, &toy_kb(), Dialect::GB).unwrap();
        assert_eq!(records.len(), 2);
        for r in &records {
            let text = base.utterance(r.turn_index, r.speaker).unwrap();
            assert_eq!(&text[r.offset..r.source_end()], r.source_span);
        }
    }

    #[test]
    fn compose_independent_edits() {
        let base = "the color of the truck";
        let e1 = vec![Edit {
            start: 4,
            end: 9,
            replacement: "colour".into(),
            dimension: RecordDimension::Orthographic,
            rule_ref: RuleRef::Unattributed,
        }];
        let cur = apply_edits(base, &e1);
        assert_eq!(cur, "the colour of the truck");
        let step = lcs_edits(&cur, "the colour of the lorry");
        let composed = compose(base, &e1, &cur, &step);
        assert_eq!(composed.len(), 2);
        assert_eq!(apply_edits(base, &composed), "the colour of the lorry");
        assert_eq!(&base[composed[1].start..composed[1].end], "truck");
    }

    #[test]
    fn compose_merges_overlapping_edit() {
        let base = "I like the color today";
        let e1 = vec![Edit {
            start: 11,
            end: 16,
            replacement: "colour".into(),
            dimension: RecordDimension::Orthographic,
            rule_ref: RuleRef::Unattributed,
        }];
        let cur = apply_edits(base, &e1);
        assert_eq!(cur, "I like the colour today");
        // A later pass rewrites the region containing the earlier edit.
        let step = vec![Edit {
            start: 7,
            end: 17,
            replacement: "that shade".into(),
            dimension: RecordDimension::Morphosyntactic,
            rule_ref: RuleRef::Feature("f1".into()),
        }];
        let next = apply_edits(&cur, &step);
        assert_eq!(next, "I like that shade today");
        let composed = compose(base, &e1, &cur, &step);
        assert_eq!(apply_edits(base, &composed), next);
        assert_eq!(composed.len(), 1);
        assert_eq!(composed[0].dimension, RecordDimension::Morphosyntactic);
        assert!(matches!(composed[0].rule_ref, RuleRef::Feature(_)));
    }

    #[test]
    fn compose_identity_edit_dropped() {
        let base = "keep the color";
        let e1 = vec![Edit {
            start: 9,
            end: 14,
            replacement: "colour".into(),
            dimension: RecordDimension::Orthographic,
            rule_ref: RuleRef::Unattributed,
        }];
        let cur = apply_edits(base, &e1);
        // Step restores the original spelling; composed script is empty.
        let step = lcs_edits(&cur, base);
        let composed = compose(base, &e1, &cur, &step);
        assert!(composed.is_empty());
    }

    #[test]
    fn compose_insertion_step_after_existing_edit() {
        let base = "He drove the truck home.";
        let e1 = vec![Edit {
            start: 13,
            end: 18,
            replacement: "lorry".into(),
            dimension: RecordDimension::Lexical,
            rule_ref: RuleRef::Unattributed,
        }];
        let cur = apply_edits(base, &e1);
        assert_eq!(cur, "He drove the lorry home.");
        let step = lcs_edits(&cur, "He drove the lorry, like, home.");
        let composed = compose(base, &e1, &cur, &step);
        assert_eq!(apply_edits(base, &composed), "He drove the lorry, like, home.");
        // The lorry substitution survives as its own record.
        assert!(composed.iter().any(|e| e.replacement == "lorry"));
    }

    #[test]
    fn current_offsets_track_deltas() {
        let base = dialog(&[("color and color again", "x")]);
        let target = dialog(&[("colour and colour again", "x")]);
        let records = diff_extract(&base, &target, &toy_kb(), Dialect::GB).unwrap();
        assert_eq!(records.len(), 2);
        let refs: Vec<&TransformationRecord> = records.iter().collect();
        let offsets = current_offsets(&refs);
        let cur = "colour and colour again";
        for (r, off) in records.iter().zip(offsets) {
            assert_eq!(&cur[off..off + r.replacement.len()], r.replacement);
        }
    }
}
