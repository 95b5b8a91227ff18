//! Ingest of annotation sheets and the line-delimited knowledge-base export.
//!
//! Wordbank and morph-annotation files are UTF-8 delimited text (tab or
//! comma, auto-detected from the header line). Column sets:
//!
//! - wordbank rows: `source_term, target_term, dimension, rating` plus
//!   optional `model_mirror` and `notes`
//! - morph feature catalog: `feature_id, rule_name, original_example,
//!   transformed_example, description` plus optional `human_comments`
//! - per-dialect morph annotations: `feature_id, prevalence, model_mirror`

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::dialect::Dialect;
use crate::error::{Error, Result};

use super::ratings::Rating;
use super::types::{
    Dimension, KnowledgeBase, MorphAnnotation, MorphFeature, RatingSource, WordMapping,
};

/// Rows parsed from one annotation file for one dialect.
#[derive(Debug, Default, Clone)]
pub struct AnnotationBatch {
    pub mappings: Vec<WordMapping>,
    pub annotations: Vec<MorphAnnotation>,
}

impl AnnotationBatch {
    pub fn len(&self) -> usize {
        self.mappings.len() + self.annotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn merge_into(self, kb: &mut KnowledgeBase) -> Result<()> {
        for m in self.mappings {
            kb.insert_mapping(m)?;
        }
        for a in self.annotations {
            kb.insert_annotation(a)?;
        }
        Ok(())
    }
}

fn read_normalized(path: &Path) -> Result<String> {
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(raw.replace("\r\n", "\n"))
}

fn detect_delimiter(content: &str) -> u8 {
    match content.lines().next() {
        Some(header) if header.contains('\t') => b'\t',
        _ => b',',
    }
}

struct Sheet {
    headers: Vec<String>,
    // (1-based line number, fields)
    rows: Vec<(usize, Vec<String>)>,
}

fn read_sheet(path: &Path) -> Result<Option<Sheet>> {
    let content = read_normalized(path)?;
    if content.trim().is_empty() {
        return Ok(None);
    }
    let delim = detect_delimiter(&content);
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delim)
        .flexible(true)
        .from_reader(content.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(rows.len() + 2);
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        rows.push((line, record.iter().map(|f| f.trim().to_string()).collect()));
    }
    Ok(Some(Sheet { headers, rows }))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = match e.position() {
        Some(p) => p.line() as usize,
        None => 0,
    };
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: e.to_string(),
    }
}

impl Sheet {
    fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    fn field<'a>(&self, row: &'a [String], col: usize, name: &str, path: &Path, line: usize) -> Result<&'a str> {
        row.get(col).map(|s| s.as_str()).filter(|s| !s.is_empty()).ok_or_else(|| Error::Parse {
            path: path.display().to_string(),
            line,
            message: format!("missing `{name}` value"),
        })
    }
}

fn parse_rating_field(raw: &str, path: &Path, line: usize) -> Result<Rating> {
    let value: u8 = raw.parse().map_err(|_| Error::Parse {
        path: path.display().to_string(),
        line,
        message: format!("rating `{raw}` is not an integer"),
    })?;
    Rating::new(value).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line,
        message: e.to_string(),
    })
}

fn parse_mirror_field(raw: &str, path: &Path, line: usize) -> Result<bool> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "y" | "yes" | "true" | "1" => Ok(true),
        "n" | "no" | "false" | "0" => Ok(false),
        other => Err(Error::Parse {
            path: path.display().to_string(),
            line,
            message: format!("model_mirror value `{other}` is not Y/N"),
        }),
    }
}

/// Loads one per-dialect annotation file. The file kind is detected from the
/// header: `source_term` columns hold wordbank rows, `prevalence` columns
/// hold morph-feature annotations. Rows parse with `rating_source = human`.
/// An empty file yields an empty batch.
pub fn load_annotations(path: impl AsRef<Path>, dialect: Dialect) -> Result<AnnotationBatch> {
    let path = path.as_ref();
    let Some(sheet) = read_sheet(path)? else {
        return Ok(AnnotationBatch::default());
    };
    let mut batch = AnnotationBatch::default();
    if let (Some(src_col), Some(tgt_col)) = (sheet.column("source_term"), sheet.column("target_term")) {
        let dim_col = sheet.column("dimension").ok_or_else(|| Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "wordbank header lacks `dimension`".into(),
        })?;
        let rating_col = sheet.column("rating").ok_or_else(|| Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "wordbank header lacks `rating`".into(),
        })?;
        let notes_col = sheet.column("notes");
        for (line, row) in &sheet.rows {
            let source_term = sheet.field(row, src_col, "source_term", path, *line)?;
            let target_term = sheet.field(row, tgt_col, "target_term", path, *line)?;
            let dimension = Dimension::parse(sheet.field(row, dim_col, "dimension", path, *line)?)
                .map_err(|e| Error::Parse {
                    path: path.display().to_string(),
                    line: *line,
                    message: e.to_string(),
                })?;
            let rating =
                parse_rating_field(sheet.field(row, rating_col, "rating", path, *line)?, path, *line)?;
            let notes = notes_col
                .and_then(|c| row.get(c))
                .filter(|s| !s.is_empty())
                .cloned();
            batch.mappings.push(WordMapping {
                id: WordMapping::stable_id(source_term, dialect, dimension, RatingSource::Human),
                source_term: source_term.to_string(),
                target_term: target_term.to_string(),
                dialect,
                dimension,
                rating,
                rating_source: RatingSource::Human,
                notes,
            });
        }
    } else if let Some(feat_col) = sheet.column("feature_id") {
        let prev_col = sheet.column("prevalence").ok_or_else(|| Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "annotation header lacks `prevalence`".into(),
        })?;
        let mirror_col = sheet.column("model_mirror").ok_or_else(|| Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "annotation header lacks `model_mirror`".into(),
        })?;
        for (line, row) in &sheet.rows {
            let feature_id = sheet.field(row, feat_col, "feature_id", path, *line)?;
            let prevalence =
                parse_rating_field(sheet.field(row, prev_col, "prevalence", path, *line)?, path, *line)?;
            let model_mirror =
                parse_mirror_field(sheet.field(row, mirror_col, "model_mirror", path, *line)?, path, *line)?;
            batch.annotations.push(MorphAnnotation {
                feature_id: feature_id.to_string(),
                dialect,
                prevalence,
                model_mirror,
            });
        }
    } else {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            message: "header matches neither wordbank nor morph-annotation format".into(),
        });
    }
    Ok(batch)
}

/// Loads the morphosyntactic feature catalog (shared across dialects).
pub fn load_morph_catalog(path: impl AsRef<Path>) -> Result<Vec<MorphFeature>> {
    let path = path.as_ref();
    let Some(sheet) = read_sheet(path)? else {
        return Ok(Vec::new());
    };
    let cols: Vec<usize> = ["feature_id", "rule_name", "original_example", "transformed_example", "description"]
        .iter()
        .map(|name| {
            sheet.column(name).ok_or_else(|| Error::Parse {
                path: path.display().to_string(),
                line: 1,
                message: format!("catalog header lacks `{name}`"),
            })
        })
        .collect::<Result<_>>()?;
    let comments_col = sheet.column("human_comments");
    let mut features = Vec::new();
    for (line, row) in &sheet.rows {
        features.push(MorphFeature {
            feature_id: sheet.field(row, cols[0], "feature_id", path, *line)?.to_string(),
            rule_name: sheet.field(row, cols[1], "rule_name", path, *line)?.to_string(),
            original_example: sheet.field(row, cols[2], "original_example", path, *line)?.to_string(),
            transformed_example: sheet
                .field(row, cols[3], "transformed_example", path, *line)?
                .to_string(),
            description: sheet.field(row, cols[4], "description", path, *line)?.to_string(),
            human_comments: comments_col
                .and_then(|c| row.get(c))
                .filter(|s| !s.is_empty())
                .cloned(),
        });
    }
    Ok(features)
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum KbRecord<'a> {
    Mapping(&'a WordMapping),
    Feature(&'a MorphFeature),
    Annotation(&'a MorphAnnotation),
}

/// Exports the knowledge base as line-delimited records in a stable order,
/// bit-exact across runs for the same content.
pub fn write_kb_jsonl(kb: &KnowledgeBase, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut mappings: Vec<&WordMapping> = kb.mappings().iter().collect();
    mappings.sort_by(|a, b| a.id.cmp(&b.id));
    let mut annotations: Vec<&MorphAnnotation> = kb.annotations().iter().collect();
    annotations.sort_by_key(|a| (a.feature_id.clone(), a.dialect));

    let mut buf = Vec::new();
    for m in mappings {
        serde_json::to_writer(&mut buf, &KbRecord::Mapping(m))
            .map_err(|e| Error::Validation(e.to_string()))?;
        buf.push(b'\n');
    }
    for f in kb.features() {
        serde_json::to_writer(&mut buf, &KbRecord::Feature(f))
            .map_err(|e| Error::Validation(e.to_string()))?;
        buf.push(b'\n');
    }
    for a in annotations {
        serde_json::to_writer(&mut buf, &KbRecord::Annotation(a))
            .map_err(|e| Error::Validation(e.to_string()))?;
        buf.push(b'\n');
    }
    crate::dialog::write_atomic(path, &buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_tab_delimited_wordbank() {
        let f = write_temp(
            "source_term\ttarget_term\tdimension\trating\ncolor\tcolour\torthographic\t4\ncall\tring\tlexical\t3\n",
        );
        let batch = load_annotations(f.path(), Dialect::GB).unwrap();
        assert_eq!(batch.mappings.len(), 2);
        assert_eq!(batch.mappings[0].rating.value(), 4);
        assert_eq!(batch.mappings[0].rating_source, RatingSource::Human);
        assert_eq!(batch.mappings[1].target_term, "ring");
        assert_eq!(batch.mappings[1].rating.value(), 3);
    }

    #[test]
    fn loads_comma_delimited_with_notes() {
        let f = write_temp(
            "source_term,target_term,dimension,rating,notes\nparking lot,car park,lexical,4,\"multi-word, common\"\n",
        );
        let batch = load_annotations(f.path(), Dialect::GB).unwrap();
        assert_eq!(batch.mappings[0].source_term, "parking lot");
        assert_eq!(batch.mappings[0].notes.as_deref(), Some("multi-word, common"));
    }

    #[test]
    fn empty_file_empty_batch() {
        let f = write_temp("");
        let batch = load_annotations(f.path(), Dialect::GB).unwrap();
        assert!(batch.is_empty());
    }

    #[test]
    fn rating_out_of_range_names_line() {
        let f = write_temp("source_term\ttarget_term\tdimension\trating\ncolor\tcolour\torthographic\t9\n");
        let err = load_annotations(f.path(), Dialect::GB).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_row_names_line() {
        let f = write_temp("source_term\ttarget_term\tdimension\trating\ncolor\tcolour\torthographic\t4\ncall\t\n");
        let err = load_annotations(f.path(), Dialect::GB).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn loads_morph_annotations() {
        let f = write_temp("feature_id\tprevalence\tmodel_mirror\n007\t3\tN\n216\t3\tY\n");
        let batch = load_annotations(f.path(), Dialect::AU).unwrap();
        assert_eq!(batch.annotations.len(), 2);
        assert!(!batch.annotations[0].model_mirror);
        assert!(batch.annotations[1].model_mirror);
    }

    #[test]
    fn loads_catalog() {
        let f = write_temp(
            "feature_id\trule_name\toriginal_example\ttransformed_example\tdescription\n007\tMe in coordinate subjects\tSarah and I are going.\tSarah and me are going.\tReplaces subject I with me.\n",
        );
        let features = load_morph_catalog(f.path()).unwrap();
        assert_eq!(features.len(), 1);
        assert_eq!(features[0].feature_id, "007");
    }

    #[test]
    fn row_count_preserved() {
        let f = write_temp(
            "source_term,target_term,dimension,rating\na,b,lexical,2\nc,d,lexical,3\ne,f,orthographic,4\n",
        );
        let batch = load_annotations(f.path(), Dialect::IN).unwrap();
        assert_eq!(batch.len(), 3);
    }
}
