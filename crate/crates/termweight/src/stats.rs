//! Training-set statistics: the per-term, per-class document-frequency table
//! every supervised weighting scheme and the chi-square selector read from.
//!
//! For a term and a class the four contingency counts are
//!
//! ```text
//!            in class   not in class
//! has term       A           C
//! no term        B           D
//! ```
//!
//! with `A + B + C + D = N`. Only `A` (per-class document frequency) and the
//! class sizes are stored; `B`, `C`, `D` fall out by subtraction.

use std::collections::{BTreeSet, HashMap};
use std::io::{self, Write};

use crate::corpus::LabeledCorpus;
use crate::error::{Error, Result};

/// Per-(term, class) 2x2 document counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contingency {
    /// Documents in the class containing the term.
    pub a: usize,
    /// Documents in the class without the term.
    pub b: usize,
    /// Documents outside the class containing the term.
    pub c: usize,
    /// Documents outside the class without the term.
    pub d: usize,
}

impl Contingency {
    pub fn total(&self) -> usize {
        self.a + self.b + self.c + self.d
    }
}

/// Vocabulary plus document-frequency counts for one training subset.
///
/// Terms are sorted lexicographically so indices are stable across runs and
/// thread counts. The vocabulary contains exactly the terms observed in the
/// subset; immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct VocabStats {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    class_labels: Vec<String>,
    class_sizes: Vec<usize>,
    positive_class: usize,
    /// `df[term][class]`: documents of the class containing the term.
    df: Vec<Vec<usize>>,
    total_df: Vec<usize>,
    n_docs: usize,
}

impl VocabStats {
    /// Counts document frequencies over the documents selected by `subset`
    /// (indices into `corpus.documents()`). Each document contributes at most
    /// one count per term no matter how often the term repeats inside it.
    pub fn build(corpus: &LabeledCorpus, subset: &[usize]) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::Corpus("empty training subset".into()));
        }
        let n_classes = corpus.labels().len();
        let mut class_sizes = vec![0usize; n_classes];
        for &doc_idx in subset {
            if doc_idx >= corpus.len() {
                return Err(Error::Corpus(format!(
                    "document index {doc_idx} out of range ({} documents)",
                    corpus.len()
                )));
            }
            class_sizes[corpus.class_of(doc_idx)] += 1;
        }
        if let Some(empty) = class_sizes.iter().position(|&n| n == 0) {
            return Err(Error::Corpus(format!(
                "class {:?} has no documents in the training subset",
                corpus.labels()[empty]
            )));
        }

        let mut vocab = BTreeSet::new();
        for &doc_idx in subset {
            for token in &corpus.documents()[doc_idx].tokens {
                vocab.insert(token.as_str());
            }
        }
        let terms: Vec<String> = vocab.iter().map(|t| (*t).to_owned()).collect();
        let index: HashMap<String, usize> = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();

        let mut df = vec![vec![0usize; n_classes]; terms.len()];
        let mut seen = BTreeSet::new();
        for &doc_idx in subset {
            let class = corpus.class_of(doc_idx);
            seen.clear();
            for token in &corpus.documents()[doc_idx].tokens {
                if seen.insert(token.as_str()) {
                    df[index[token.as_str()]][class] += 1;
                }
            }
        }
        let total_df = df.iter().map(|row| row.iter().sum()).collect();

        Ok(Self {
            terms,
            index,
            class_labels: corpus.labels().to_vec(),
            class_sizes,
            positive_class: corpus.positive_index(),
            df,
            total_df,
            n_docs: subset.len(),
        })
    }

    /// Statistics over the whole corpus.
    pub fn from_corpus(corpus: &LabeledCorpus) -> Result<Self> {
        let all: Vec<usize> = (0..corpus.len()).collect();
        Self::build(corpus, &all)
    }

    /// Builds a table directly from counts; mainly for fixtures and tools
    /// that already have document frequencies. `term_dfs` maps each term to
    /// its per-class document frequencies.
    pub fn from_counts(
        class_labels: Vec<String>,
        class_sizes: Vec<usize>,
        positive_label: &str,
        term_dfs: Vec<(String, Vec<usize>)>,
    ) -> Result<Self> {
        if class_labels.len() < 2 || class_labels.len() != class_sizes.len() {
            return Err(Error::Corpus(
                "need at least two classes with matching size entries".into(),
            ));
        }
        if class_sizes.contains(&0) {
            return Err(Error::Corpus(
                "every class needs at least one document".into(),
            ));
        }
        let positive_class = class_labels
            .iter()
            .position(|l| l == positive_label)
            .ok_or_else(|| Error::Corpus(format!("positive label {positive_label:?} unknown")))?;
        let n_docs = class_sizes.iter().sum();

        let mut sorted = term_dfs;
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms = Vec::with_capacity(sorted.len());
        let mut df = Vec::with_capacity(sorted.len());
        for (term, counts) in sorted {
            if counts.len() != class_labels.len() {
                return Err(Error::Corpus(format!(
                    "term {term:?} has {} DF entries for {} classes",
                    counts.len(),
                    class_labels.len()
                )));
            }
            if counts.iter().sum::<usize>() == 0 {
                return Err(Error::Corpus(format!("term {term:?} has zero total DF")));
            }
            if counts.iter().zip(&class_sizes).any(|(&c, &size)| c > size) {
                return Err(Error::Corpus(format!(
                    "term {term:?} DF exceeds its class size"
                )));
            }
            terms.push(term);
            df.push(counts);
        }
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t): (usize, &String)| (t.clone(), i))
            .collect();
        let total_df = df.iter().map(|row: &Vec<usize>| row.iter().sum()).collect();
        Ok(Self {
            terms,
            index,
            class_labels,
            class_sizes,
            positive_class,
            df,
            total_df,
            n_docs,
        })
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn require_term(&self, term: &str) -> Result<usize> {
        self.term_index(term)
            .ok_or_else(|| Error::UnknownTerm(term.to_owned()))
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn n_classes(&self) -> usize {
        self.class_labels.len()
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn class_size(&self, class_idx: usize) -> usize {
        self.class_sizes[class_idx]
    }

    /// Index of the designated positive class; `A`/`C` in the class-anchored
    /// schemes refer to this class.
    pub fn positive_class(&self) -> usize {
        self.positive_class
    }

    /// Per-class document frequencies of the term at `term_idx`.
    pub fn class_df(&self, term_idx: usize) -> &[usize] {
        &self.df[term_idx]
    }

    /// Document frequency over the whole subset.
    pub fn total_df(&self, term_idx: usize) -> usize {
        self.total_df[term_idx]
    }

    /// Number of classes in which the term occurs at least once.
    pub fn class_frequency(&self, term_idx: usize) -> usize {
        self.df[term_idx].iter().filter(|&&c| c > 0).count()
    }

    pub fn contingency(&self, term: &str, class_index: usize) -> Result<Contingency> {
        let term_idx = self.require_term(term)?;
        if class_index >= self.n_classes() {
            return Err(Error::ClassIndex {
                index: class_index,
                count: self.n_classes(),
            });
        }
        Ok(self.contingency_by_index(term_idx, class_index))
    }

    pub fn contingency_by_index(&self, term_idx: usize, class_index: usize) -> Contingency {
        let a = self.df[term_idx][class_index];
        let b = self.class_sizes[class_index] - a;
        let c = self.total_df[term_idx] - a;
        let d = self.n_docs - a - b - c;
        Contingency { a, b, c, d }
    }

    /// Debug dump: `term<TAB>df_class0<TAB>df_class1...`, one line per term.
    pub fn dump_tsv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for (i, term) in self.terms.iter().enumerate() {
            write!(out, "{term}")?;
            for count in &self.df[i] {
                write!(out, "\t{count}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// The worked two-term fixture used across the weighting tests: 100 documents
/// split 30/70, df(t1) = (27, 5), df(t2) = (10, 25).
#[cfg(test)]
pub(crate) fn example_stats() -> VocabStats {
    VocabStats::from_counts(
        vec!["cp".into(), "cn".into()],
        vec![30, 70],
        "cp",
        vec![("t1".into(), vec![27, 5]), ("t2".into(), vec![10, 25])],
    )
    .unwrap()
}
