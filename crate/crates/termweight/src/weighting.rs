//! The ten term-weighting schemes.
//!
//! Every scheme factors into a document-local part (TF or sqrt TF) and a
//! per-term collection part computed from training statistics:
//!
//! * `tf`: raw term frequency, collection part 1;
//! * `tf-idf`: `ln(N / DF)`;
//! * `dtf-idf`: smoothed delta IDF, `log2((Np*C + 0.5) / (A*Nn + 0.5))`;
//! * `tf-idf-icf`: IDF times the inverse class frequency factor
//!   `1 + ln(M / CF)`;
//! * `tf-rf`: relevance frequency, `log2(2 + A / max(1, C))`;
//! * `tf-igm`, `stf-igm`: inverse gravity moment `f1 / sum(f_r * r)` over
//!   per-class document frequencies sorted descending, composed as
//!   `1 + lambda * IGM`;
//! * `tf-igm-imp`, `stf-igm-imp`: IGM with a `log10(D_total / f1)` correction
//!   added to the denominator;
//! * `tf-idfc-rf`: `log2((2 + max(A, C)) / max(2, min(A, C))) * sqrt(B + D)`
//!   over a sqrt-TF local part.
//!
//! `A`/`C` are the positive/other-class document frequencies of the term and
//! `Np`/`Nn` the class sizes; see [`crate::stats`] for the full table. The
//! class-anchored schemes (`dtf-idf`, `tf-rf`, `tf-idfc-rf`) read the corpus's
//! designated positive class. No normalization is applied anywhere; callers
//! that want unit vectors can use [`SparseVector::l2_normalize`].

use std::collections::btree_map::{self, BTreeMap};
use std::collections::HashMap;
use std::fmt;

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::selection::FeatureMap;
use crate::stats::VocabStats;

/// The scheme identifiers, in the conventional reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Tf,
    TfIdf,
    DeltaTfIdf,
    TfIdfIcf,
    TfRf,
    TfIgm,
    SqrtTfIgm,
    TfIgmImp,
    SqrtTfIgmImp,
    TfIdfcRf,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 10] = [
        SchemeKind::Tf,
        SchemeKind::TfIdf,
        SchemeKind::DeltaTfIdf,
        SchemeKind::TfIdfIcf,
        SchemeKind::TfRf,
        SchemeKind::TfIgm,
        SchemeKind::SqrtTfIgm,
        SchemeKind::TfIgmImp,
        SchemeKind::SqrtTfIgmImp,
        SchemeKind::TfIdfcRf,
    ];

    /// Canonical name, as used in CLI flags and report files.
    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Tf => "tf",
            SchemeKind::TfIdf => "tf-idf",
            SchemeKind::DeltaTfIdf => "dtf-idf",
            SchemeKind::TfIdfIcf => "tf-idf-icf",
            SchemeKind::TfRf => "tf-rf",
            SchemeKind::TfIgm => "tf-igm",
            SchemeKind::SqrtTfIgm => "stf-igm",
            SchemeKind::TfIgmImp => "tf-igm-imp",
            SchemeKind::SqrtTfIgmImp => "stf-igm-imp",
            SchemeKind::TfIdfcRf => "tf-idfc-rf",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        let normalized = name.trim().to_ascii_lowercase().replace('_', "-");
        match normalized.as_str() {
            "tf" => Ok(SchemeKind::Tf),
            "tf-idf" | "tfidf" => Ok(SchemeKind::TfIdf),
            "dtf-idf" | "delta-tf-idf" => Ok(SchemeKind::DeltaTfIdf),
            "tf-idf-icf" => Ok(SchemeKind::TfIdfIcf),
            "tf-rf" => Ok(SchemeKind::TfRf),
            "tf-igm" => Ok(SchemeKind::TfIgm),
            "stf-igm" | "sqrt-tf-igm" => Ok(SchemeKind::SqrtTfIgm),
            "tf-igm-imp" => Ok(SchemeKind::TfIgmImp),
            "stf-igm-imp" | "sqrt-tf-igm-imp" => Ok(SchemeKind::SqrtTfIgmImp),
            "tf-idfc-rf" => Ok(SchemeKind::TfIdfcRf),
            _ => Err(Error::UnknownScheme(name.to_owned())),
        }
    }

    /// Whether the document-local factor is sqrt(TF) rather than TF.
    pub fn uses_sqrt_tf(&self) -> bool {
        matches!(
            self,
            SchemeKind::SqrtTfIgm | SchemeKind::SqrtTfIgmImp | SchemeKind::TfIdfcRf
        )
    }

    /// Whether the scheme reads the `lambda` parameter.
    pub fn uses_lambda(&self) -> bool {
        matches!(
            self,
            SchemeKind::TfIgm
                | SchemeKind::SqrtTfIgm
                | SchemeKind::TfIgmImp
                | SchemeKind::SqrtTfIgmImp
        )
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A scheme plus its parameters. Only the IGM family reads `lambda`; the
/// default of 7.0 is the conventional setting, with 5.0..=9.0 the usual range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub lambda: f64,
}

impl SchemeSpec {
    pub const DEFAULT_LAMBDA: f64 = 7.0;

    pub fn new(kind: SchemeKind) -> Self {
        Self {
            kind,
            lambda: Self::DEFAULT_LAMBDA,
        }
    }

    pub fn with_lambda(kind: SchemeKind, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::Config(format!(
                "lambda must be a nonnegative finite number, got {lambda}"
            )));
        }
        Ok(Self { kind, lambda })
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())
    }
}

/// Sparse weighted document vector: feature index to nonzero weight.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    entries: BTreeMap<usize, f64>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(usize, f64)]) -> Self {
        let mut v = Self::new();
        for &(i, w) in pairs {
            v.insert(i, w);
        }
        v
    }

    /// Stores a weight; exact zeros are not kept.
    pub fn insert(&mut self, index: usize, weight: f64) {
        if weight != 0.0 {
            self.entries.insert(index, weight);
        } else {
            self.entries.remove(&index);
        }
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries.get(&index).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&i, &w)| (i, w))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.iter().map(|(i, w)| w * dense[i]).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.iter().map(|(_, w)| w * w).sum::<f64>().sqrt()
    }

    pub fn l2_normalize(&mut self) {
        let norm = self.l2_norm();
        if norm > 0.0 {
            for w in self.entries.values_mut() {
                *w /= norm;
            }
        }
    }

    /// Copy with negative weights clipped to zero (i.e. dropped). Multinomial
    /// naive Bayes requires nonnegative features; `dtf-idf` produces signed
    /// weights.
    pub fn clipped_nonnegative(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .filter(|(_, &w)| w > 0.0)
            .map(|(&i, &w)| (i, w))
            .collect();
        Self { entries }
    }

    /// `index:weight` pairs joined by commas, weights to 6 decimal places.
    pub fn dump_entries(&self) -> String {
        self.iter()
            .map(|(i, w)| format!("{i}:{w:.6}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl<'a> IntoIterator for &'a SparseVector {
    type Item = (&'a usize, &'a f64);
    type IntoIter = btree_map::Iter<'a, usize, f64>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// `ln(N / DF)`.
pub fn idf_factor(stats: &VocabStats, term: &str) -> Result<f64> {
    Ok(idf_factor_idx(stats, stats.require_term(term)?))
}

pub(crate) fn idf_factor_idx(stats: &VocabStats, term_idx: usize) -> f64 {
    (stats.n_docs() as f64 / stats.total_df(term_idx) as f64).ln()
}

/// Smoothed delta IDF, `log2((Np*C + 0.5) / (A*Nn + 0.5))`. Negative when the
/// term leans toward the positive class.
pub fn delta_idf_factor(stats: &VocabStats, term: &str) -> Result<f64> {
    Ok(delta_idf_factor_idx(stats, stats.require_term(term)?))
}

pub(crate) fn delta_idf_factor_idx(stats: &VocabStats, term_idx: usize) -> f64 {
    let pos = stats.positive_class();
    let a = stats.class_df(term_idx)[pos] as f64;
    let c = (stats.total_df(term_idx) - stats.class_df(term_idx)[pos]) as f64;
    let n_p = stats.class_size(pos) as f64;
    let n_n = (stats.n_docs() - stats.class_size(pos)) as f64;
    ((n_p * c + 0.5) / (a * n_n + 0.5)).log2()
}

/// `IDF * (1 + ln(M / CF))`.
pub fn idf_icf_factor(stats: &VocabStats, term: &str) -> Result<f64> {
    Ok(idf_icf_factor_idx(stats, stats.require_term(term)?))
}

pub(crate) fn idf_icf_factor_idx(stats: &VocabStats, term_idx: usize) -> f64 {
    let m = stats.n_classes() as f64;
    let cf = stats.class_frequency(term_idx) as f64;
    idf_factor_idx(stats, term_idx) * (1.0 + (m / cf).ln())
}

/// Relevance frequency, `log2(2 + A / max(1, C))`; always at least 1.
pub fn rf_factor(stats: &VocabStats, term: &str) -> Result<f64> {
    Ok(rf_factor_idx(stats, stats.require_term(term)?))
}

pub(crate) fn rf_factor_idx(stats: &VocabStats, term_idx: usize) -> f64 {
    let pos = stats.positive_class();
    let a = stats.class_df(term_idx)[pos];
    let c = stats.total_df(term_idx) - a;
    (2.0 + a as f64 / c.max(1) as f64).log2()
}

/// Per-class DFs sorted descending (ties broken by ascending class index) as
/// `(f_r, class index)` pairs; shared by the IGM pair.
fn sorted_class_dfs(stats: &VocabStats, term_idx: usize) -> Vec<(usize, usize)> {
    let mut ranked: Vec<(usize, usize)> = stats
        .class_df(term_idx)
        .iter()
        .copied()
        .enumerate()
        .map(|(class, df)| (df, class))
        .collect();
    ranked.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    ranked
}

/// Inverse gravity moment: `f1 / sum_r(f_r * r)`, in (0, 1].
pub fn igm_factor(stats: &VocabStats, term: &str) -> Result<f64> {
    Ok(igm_factor_idx(stats, stats.require_term(term)?))
}

pub(crate) fn igm_factor_idx(stats: &VocabStats, term_idx: usize) -> f64 {
    let ranked = sorted_class_dfs(stats, term_idx);
    let gravity: f64 = ranked
        .iter()
        .enumerate()
        .map(|(r, &(df, _))| df as f64 * (r + 1) as f64)
        .sum();
    ranked[0].0 as f64 / gravity
}

/// IGM with the `log10(D_total / f1)` denominator correction, where `D_total`
/// is the size of the class in which the term occurs most.
pub fn igm_imp_factor(stats: &VocabStats, term: &str) -> Result<f64> {
    Ok(igm_imp_factor_idx(stats, stats.require_term(term)?))
}

pub(crate) fn igm_imp_factor_idx(stats: &VocabStats, term_idx: usize) -> f64 {
    let ranked = sorted_class_dfs(stats, term_idx);
    let gravity: f64 = ranked
        .iter()
        .enumerate()
        .map(|(r, &(df, _))| df as f64 * (r + 1) as f64)
        .sum();
    let (f1, top_class) = ranked[0];
    let d_total = stats.class_size(top_class) as f64;
    f1 as f64 / (gravity + (d_total / f1 as f64).log10())
}

/// `log2((2 + max(A, C)) / max(2, min(A, C))) * sqrt(B + D)`; symmetric in
/// `A` and `C`, so insensitive to which class is designated positive.
pub fn idfc_rf_factor(stats: &VocabStats, term: &str) -> Result<f64> {
    Ok(idfc_rf_factor_idx(stats, stats.require_term(term)?))
}

pub(crate) fn idfc_rf_factor_idx(stats: &VocabStats, term_idx: usize) -> f64 {
    let pos = stats.positive_class();
    let a = stats.class_df(term_idx)[pos];
    let c = stats.total_df(term_idx) - a;
    let hi = a.max(c) as f64;
    let lo = a.min(c).max(2) as f64;
    let rest = (stats.n_docs() - stats.total_df(term_idx)) as f64;
    ((2.0 + hi) / lo).log2() * rest.sqrt()
}

/// Document-local factor: sqrt(TF) for the sqrt schemes, TF otherwise.
pub fn local_factor(scheme: &SchemeSpec, tf: u32) -> f64 {
    if scheme.kind.uses_sqrt_tf() {
        (tf as f64).sqrt()
    } else {
        tf as f64
    }
}

/// Collection-level factor of `term` under `scheme`.
pub fn collection_factor(scheme: &SchemeSpec, stats: &VocabStats, term: &str) -> Result<f64> {
    Ok(collection_factor_idx(
        scheme,
        stats,
        stats.require_term(term)?,
    ))
}

pub(crate) fn collection_factor_idx(
    scheme: &SchemeSpec,
    stats: &VocabStats,
    term_idx: usize,
) -> f64 {
    match scheme.kind {
        SchemeKind::Tf => 1.0,
        SchemeKind::TfIdf => idf_factor_idx(stats, term_idx),
        SchemeKind::DeltaTfIdf => delta_idf_factor_idx(stats, term_idx),
        SchemeKind::TfIdfIcf => idf_icf_factor_idx(stats, term_idx),
        SchemeKind::TfRf => rf_factor_idx(stats, term_idx),
        SchemeKind::TfIgm | SchemeKind::SqrtTfIgm => {
            1.0 + scheme.lambda * igm_factor_idx(stats, term_idx)
        }
        SchemeKind::TfIgmImp | SchemeKind::SqrtTfIgmImp => {
            1.0 + scheme.lambda * igm_imp_factor_idx(stats, term_idx)
        }
        SchemeKind::TfIdfcRf => idfc_rf_factor_idx(stats, term_idx),
    }
}

/// Collection factors for the whole vocabulary, indexed by term index.
/// Precompute once per (scheme, stats) when weighting many documents.
pub fn collection_factors(scheme: &SchemeSpec, stats: &VocabStats) -> Vec<f64> {
    (0..stats.n_terms())
        .map(|i| collection_factor_idx(scheme, stats, i))
        .collect()
}

/// In-vocabulary term counts of a document: `(term index, tf)` sorted by term
/// index. Out-of-vocabulary tokens are dropped.
pub(crate) fn term_counts(doc: &Document, stats: &VocabStats) -> Vec<(usize, u32)> {
    let mut counts: HashMap<usize, u32> = HashMap::new();
    for token in &doc.tokens {
        if let Some(idx) = stats.term_index(token) {
            *counts.entry(idx).or_insert(0) += 1;
        }
    }
    let mut pairs: Vec<(usize, u32)> = counts.into_iter().collect();
    pairs.sort_unstable_by_key(|&(idx, _)| idx);
    pairs
}

/// Weights one document. With a `feature_map`, only selected terms are kept
/// and entries use the map's dense indices; otherwise entries are indexed by
/// vocabulary term index. Tokens outside the training vocabulary are dropped.
pub fn weigh_document(
    doc: &Document,
    stats: &VocabStats,
    scheme: &SchemeSpec,
    feature_map: Option<&FeatureMap>,
) -> SparseVector {
    let mut vector = SparseVector::new();
    for (term_idx, tf) in term_counts(doc, stats) {
        let key = match feature_map {
            None => Some(term_idx),
            Some(map) => map.index_of(&stats.terms()[term_idx]),
        };
        if let Some(key) = key {
            let weight = local_factor(scheme, tf) * collection_factor_idx(scheme, stats, term_idx);
            vector.insert(key, weight);
        }
    }
    vector
}
