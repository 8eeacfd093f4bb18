//! Corpus loading and text preprocessing.
//!
//! Two on-disk layouts are supported, matching the public sentiment datasets
//! this toolkit is aimed at:
//!
//! * directory corpora: `<root>/<label>/<docid>.txt`, one file per document,
//!   one subdirectory per class;
//! * line corpora: two plain-text files (positive and negative), one document
//!   per non-empty line.
//!
//! Preprocessing is deliberately minimal: lowercase, replace punctuation with
//! spaces, split on whitespace. No stemming, no stop-word removal.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

use crate::error::{Error, Result};

/// One labeled document.
#[derive(Debug, Clone)]
pub struct Document {
    /// Unique id within its corpus (loaders use the relative path or
    /// `<label>:<line>`).
    pub id: String,
    pub raw_text: String,
    /// Preprocessed token sequence; loaders fill this in at load time.
    pub tokens: Vec<String>,
    pub label: String,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        raw_text: impl Into<String>,
        label: impl Into<String>,
    ) -> Self {
        let raw_text = raw_text.into();
        Self {
            id: id.into(),
            tokens: preprocess(&raw_text),
            raw_text,
            label: label.into(),
        }
    }
}

/// A set of labeled documents plus the class bookkeeping the supervised
/// weighting schemes need: an ordered label list and a designated positive
/// class.
#[derive(Debug, Clone)]
pub struct LabeledCorpus {
    documents: Vec<Document>,
    labels: Vec<String>,
    positive_label: String,
    doc_class: Vec<usize>,
    id_index: HashMap<String, usize>,
}

impl LabeledCorpus {
    /// Builds a corpus from parts, validating the structural invariants:
    /// at least two classes, unique document ids, every document label and
    /// the positive label drawn from `labels`.
    pub fn new(
        documents: Vec<Document>,
        labels: Vec<String>,
        positive_label: impl Into<String>,
    ) -> Result<Self> {
        let positive_label = positive_label.into();
        if labels.len() < 2 {
            return Err(Error::Corpus(format!("fewer than 2 classes: {:?}", labels)));
        }
        let mut label_index = HashMap::new();
        for (i, label) in labels.iter().enumerate() {
            if label_index.insert(label.clone(), i).is_some() {
                return Err(Error::Corpus(format!("duplicate label {label:?}")));
            }
        }
        if !label_index.contains_key(&positive_label) {
            return Err(Error::Corpus(format!(
                "positive label {positive_label:?} not among classes {labels:?}"
            )));
        }
        let mut id_index = HashMap::with_capacity(documents.len());
        let mut doc_class = Vec::with_capacity(documents.len());
        for (i, doc) in documents.iter().enumerate() {
            let Some(&class) = label_index.get(&doc.label) else {
                return Err(Error::Corpus(format!(
                    "document {:?} has unknown label {:?}",
                    doc.id, doc.label
                )));
            };
            doc_class.push(class);
            if id_index.insert(doc.id.clone(), i).is_some() {
                return Err(Error::Corpus(format!("duplicate document id {:?}", doc.id)));
            }
        }
        Ok(Self {
            documents,
            labels,
            positive_label,
            doc_class,
            id_index,
        })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Class labels in their fixed order; class indices used throughout the
    /// crate are positions in this slice.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn positive_label(&self) -> &str {
        &self.positive_label
    }

    pub fn positive_index(&self) -> usize {
        self.labels
            .iter()
            .position(|l| *l == self.positive_label)
            .expect("validated at construction")
    }

    /// Class index of document `doc_idx`.
    pub fn class_of(&self, doc_idx: usize) -> usize {
        self.doc_class[doc_idx]
    }

    pub fn index_of_id(&self, id: &str) -> Option<usize> {
        self.id_index.get(id).copied()
    }

    /// Returns a copy with a different designated positive class.
    pub fn with_positive_label(self, positive_label: &str) -> Result<Self> {
        Self::new(self.documents, self.labels, positive_label)
    }
}

/// Lowercases, replaces every punctuation character with a space and splits
/// on whitespace. Punctuation means the ASCII punctuation set plus the
/// Unicode general `P*` categories; replacing (rather than deleting) keeps
/// "so-so" from collapsing into a single token.
pub fn preprocess(raw_text: &str) -> Vec<String> {
    raw_text
        .to_lowercase()
        .chars()
        .map(|ch| if is_punctuation(ch) { ' ' } else { ch })
        .collect::<String>()
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

fn is_punctuation(ch: char) -> bool {
    ch.is_ascii_punctuation() || ch.general_category_group() == GeneralCategoryGroup::Punctuation
}

/// Loads a directory corpus: one subdirectory per class, one text file per
/// document. Documents are ordered lexicographically by path and ids are the
/// `label/filename` relative paths, so the same tree always produces the same
/// corpus. The positive class defaults to the lexicographically last label
/// ("pos" in a pos/neg tree); use [`LabeledCorpus::with_positive_label`] to
/// override.
pub fn load_directory_corpus(root_path: &Path) -> Result<LabeledCorpus> {
    let entries = fs::read_dir(root_path).map_err(|source| Error::Io {
        path: root_path.to_path_buf(),
        source,
    })?;
    let mut class_dirs = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io {
            path: root_path.to_path_buf(),
            source,
        })?;
        if entry.path().is_dir() {
            class_dirs.push(entry.path());
        }
    }
    class_dirs.sort();
    if class_dirs.len() < 2 {
        return Err(Error::Corpus(format!(
            "fewer than 2 class subdirectories under {}",
            root_path.display()
        )));
    }

    let mut labels = Vec::new();
    let mut documents = Vec::new();
    for dir in &class_dirs {
        let label = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .ok_or_else(|| {
                Error::Corpus(format!(
                    "unreadable class directory name under {}",
                    root_path.display()
                ))
            })?;
        let mut files = Vec::new();
        for entry in fs::read_dir(dir).map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })? {
            let entry = entry.map_err(|source| Error::Io {
                path: dir.clone(),
                source,
            })?;
            if entry.path().is_file() {
                files.push(entry.path());
            }
        }
        files.sort();
        for file in files {
            let bytes = fs::read(&file).map_err(|source| Error::Io {
                path: file.clone(),
                source,
            })?;
            // The public datasets contain stray non-UTF-8 bytes; replace them.
            let text = String::from_utf8_lossy(&bytes).into_owned();
            let file_name = file
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            documents.push(Document::new(
                format!("{label}/{file_name}"),
                text,
                label.clone(),
            ));
        }
        labels.push(label);
    }

    let positive = labels.last().expect("at least two labels").clone();
    LabeledCorpus::new(documents, labels, positive)
}

/// Loads a two-file line corpus: one document per non-empty line, labels
/// `"pos"` and `"neg"` assigned per source file, ids `<label>:<line-number>`
/// (1-based, counting every source line so ids stay stable when blank lines
/// are skipped).
pub fn load_line_corpus(pos_path: &Path, neg_path: &Path) -> Result<LabeledCorpus> {
    let mut documents = Vec::new();
    let mut any = [false, false];
    for (slot, (path, label)) in [(pos_path, "pos"), (neg_path, "neg")]
        .into_iter()
        .enumerate()
    {
        let bytes = fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let text = String::from_utf8_lossy(&bytes);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            any[slot] = true;
            documents.push(Document::new(
                format!("{label}:{}", lineno + 1),
                line,
                label,
            ));
        }
    }
    if !any[0] && !any[1] {
        return Err(Error::Corpus(format!(
            "both corpus files are empty: {}, {}",
            pos_path.display(),
            neg_path.display()
        )));
    }
    LabeledCorpus::new(documents, vec!["neg".into(), "pos".into()], "pos")
}
