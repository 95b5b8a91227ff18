//! Line-delimited dataset persistence with atomic writes.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::types::TransformedDialog;

/// Writes bytes to `path` atomically (temp file in the same directory, then
/// rename), creating parent directories as needed.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
        f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Serializes items one-per-line in stable field order and writes atomically.
pub fn write_jsonl<T: Serialize>(path: impl AsRef<Path>, items: &[T]) -> Result<()> {
    let mut buf = Vec::new();
    for item in items {
        serde_json::to_writer(&mut buf, item).map_err(|e| Error::Validation(e.to_string()))?;
        buf.push(b'\n');
    }
    write_atomic(path, &buf)
}

/// Reads a line-delimited file; parse failures carry the 1-based line number.
pub fn read_jsonl<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<Vec<T>> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut items = Vec::new();
    for (i, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let item: T = serde_json::from_str(line).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: i + 1,
            message: e.to_string(),
        })?;
        items.push(item);
    }
    Ok(items)
}

pub fn write_dataset(path: impl AsRef<Path>, dialogs: &[TransformedDialog]) -> Result<()> {
    write_jsonl(path, dialogs)
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<Vec<TransformedDialog>> {
    read_jsonl(path)
}

/// Sidecar manifest: record counts per (dialect, variant, turn count).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub counts: BTreeMap<String, usize>,
}

impl DatasetManifest {
    pub fn cell_key(dialect: crate::Dialect, variant: super::types::Variant, turns: usize) -> String {
        format!("{}/{}/t{}", variant.as_str(), dialect.code(), turns)
    }

    pub fn tally(dialogs: &[TransformedDialog]) -> DatasetManifest {
        let mut counts = BTreeMap::new();
        for d in dialogs {
            let key = Self::cell_key(d.dialect, d.variant, d.turn_count());
            *counts.entry(key).or_insert(0) += 1;
        }
        DatasetManifest { counts }
    }

    pub fn merge(&mut self, other: &DatasetManifest) {
        for (k, v) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += v;
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut bytes =
            serde_json::to_vec_pretty(self).map_err(|e| Error::Validation(e.to_string()))?;
        bytes.push(b'\n');
        write_atomic(path, &bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialect::Dialect;
    use crate::dialog::types::{Mode, Turn, Variant};

    fn sample(base_id: &str) -> TransformedDialog {
        TransformedDialog {
            base_id: base_id.into(),
            dialect: Dialect::GB,
            variant: Variant::OrthoLex,
            turns: vec![Turn {
                user: "I like the colour".into(),
                assistant: "So do I".into(),
            }],
            records: Vec::new(),
            gold_labels: vec![Dialect::GB],
            seed_word: "color".into(),
            mode: Mode::Natural,
        }
    }

    #[test]
    fn round_trip_identity() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.jsonl");
        let dialogs = vec![sample("a"), sample("b")];
        write_dataset(&path, &dialogs).unwrap();
        let back = read_dataset(&path).unwrap();
        assert_eq!(back, dialogs);
    }

    #[test]
    fn write_is_byte_stable() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.jsonl");
        let b = dir.path().join("b.jsonl");
        let dialogs = vec![sample("x")];
        write_dataset(&a, &dialogs).unwrap();
        write_dataset(&b, &dialogs).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }

    #[test]
    fn empty_list_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.jsonl");
        write_dataset(&path, &[]).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "");
        assert!(read_dataset(&path).unwrap().is_empty());
    }

    #[test]
    fn truncated_line_reports_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        let mut content = String::new();
        content.push_str(&serde_json::to_string(&sample("ok")).unwrap());
        content.push('\n');
        content.push_str("{\"base_id\": \"trunc");
        fs::write(&path, content).unwrap();
        match read_dataset(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn field_order_is_stable() {
        let json = serde_json::to_string(&sample("k")).unwrap();
        let base = json.find("\"base_id\"").unwrap();
        let dialect = json.find("\"dialect\"").unwrap();
        let variant = json.find("\"variant\"").unwrap();
        let seed = json.find("\"seed_word\"").unwrap();
        assert!(base < dialect && dialect < variant && variant < seed);
    }

    #[test]
    fn manifest_counts_cells() {
        let dialogs = vec![sample("a"), sample("b")];
        let manifest = DatasetManifest::tally(&dialogs);
        assert_eq!(manifest.counts.get("OrthoLex/GB/t1"), Some(&2));
    }
}
