//! Chi-square feature selection.
//!
//! Each term is scored with the maximum over classes of the standard
//! chi-square statistic of its 2x2 contingency table,
//!
//! ```text
//! chi2(t, c) = N * (A*D - C*B)^2 / ((A+C)(B+D)(A+B)(C+D))
//! ```
//!
//! and the top-k terms by that score are retained. In a two-class corpus the
//! statistic is identical for both classes, so the max is either one. A zero
//! marginal (for example a term present in every document) scores 0: such
//! terms carry no class signal and should never beat an informative one.

use std::collections::HashMap;
use std::io::{self, Write};

use crate::error::Result;
use crate::stats::VocabStats;

/// The retained feature subspace: terms in rank order (score descending, term
/// ascending on ties) with their dense indices.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    terms: Vec<String>,
    scores: Vec<f64>,
    index: HashMap<String, usize>,
}

impl FeatureMap {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Selected terms in rank order; a term's position is its dense index.
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    /// Chi-square score of the term at `rank`.
    pub fn score(&self, rank: usize) -> f64 {
        self.scores[rank]
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    /// Debug dump: `rank<TAB>term<TAB>chi2`, one line per selected term.
    pub fn dump_tsv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for (rank, term) in self.terms.iter().enumerate() {
            writeln!(out, "{rank}\t{term}\t{:.6}", self.scores[rank])?;
        }
        Ok(())
    }
}

/// Chi-square score of one term (max over classes).
pub fn chi2_score(stats: &VocabStats, term: &str) -> Result<f64> {
    Ok(chi2_score_idx(stats, stats.require_term(term)?))
}

pub(crate) fn chi2_score_idx(stats: &VocabStats, term_idx: usize) -> f64 {
    let mut best = 0.0f64;
    for class in 0..stats.n_classes() {
        let con = stats.contingency_by_index(term_idx, class);
        let (a, b, c, d) = (con.a as f64, con.b as f64, con.c as f64, con.d as f64);
        let denom = (a + c) * (b + d) * (a + b) * (c + d);
        if denom == 0.0 {
            continue;
        }
        let n = stats.n_docs() as f64;
        let diff = a * d - c * b;
        let score = n * diff * diff / denom;
        if score > best {
            best = score;
        }
    }
    best
}

/// Ranks the entire vocabulary: `(term index, chi2)` sorted by score
/// descending, term ascending on ties. [`select_top_k`] keeps a prefix of
/// this order, so top-k sets are nested across k.
pub fn ranked_terms(stats: &VocabStats) -> Vec<(usize, f64)> {
    let mut ranked: Vec<(usize, f64)> = (0..stats.n_terms())
        .map(|i| (i, chi2_score_idx(stats, i)))
        .collect();
    // term indices are lexicographic, so comparing indices breaks score ties
    // by term name
    ranked.sort_by(|x, y| {
        y.1.partial_cmp(&x.1)
            .expect("chi2 is finite")
            .then(x.0.cmp(&y.0))
    });
    ranked
}

/// Retains the `min(k, vocabulary size)` best-scoring terms.
pub fn select_top_k(stats: &VocabStats, k: usize) -> FeatureMap {
    let ranked = ranked_terms(stats);
    let keep = k.min(ranked.len());
    let mut terms = Vec::with_capacity(keep);
    let mut scores = Vec::with_capacity(keep);
    let mut index = HashMap::with_capacity(keep);
    for &(term_idx, score) in &ranked[..keep] {
        let term = stats.terms()[term_idx].clone();
        index.insert(term.clone(), terms.len());
        terms.push(term);
        scores.push(score);
    }
    FeatureMap {
        terms,
        scores,
        index,
    }
}
