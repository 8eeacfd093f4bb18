//! Stratified cross-validation, weighted precision/recall/F1 and the
//! experiment grid runner.
//!
//! Per fold, everything downstream of the split (vocabulary, document
//! frequencies, chi-square ranking, collection factors, trained models) is
//! computed from the training partition only; test documents merely get
//! weighted against those statistics and scored. Fold assignment shuffles
//! each class with the crate's pinned [`SplitMix64`]
//! generator and deals documents round-robin, so a `(corpus, seed)` pair
//! yields the same folds on every platform.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use crate::classify::{self, SvmParams};
use crate::corpus::LabeledCorpus;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::selection;
use crate::stats::VocabStats;
use crate::weighting::{self, SchemeSpec, SparseVector};

/// Per-document fold assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    k: usize,
    assignments: Vec<usize>,
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Fold index of each document, parallel to `corpus.documents()`.
    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    /// Document indices landing outside/inside fold `fold`.
    pub fn train_test_indices(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (doc, &assigned) in self.assignments.iter().enumerate() {
            if assigned == fold {
                test.push(doc);
            } else {
                train.push(doc);
            }
        }
        (train, test)
    }
}

/// Stratified k-fold assignment: within each class, documents are shuffled by
/// the seeded generator and dealt round-robin, so per-class fold sizes differ
/// by at most one document.
pub fn stratified_kfold(corpus: &LabeledCorpus, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {k}")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut assignments = vec![0usize; corpus.len()];
    for class in 0..corpus.labels().len() {
        let mut members: Vec<usize> = (0..corpus.len())
            .filter(|&i| corpus.class_of(i) == class)
            .collect();
        if members.len() < k {
            return Err(Error::Corpus(format!(
                "class {:?} has {} documents, fewer than {k} folds",
                corpus.labels()[class],
                members.len()
            )));
        }
        rng.shuffle(&mut members);
        for (position, &doc) in members.iter().enumerate() {
            assignments[doc] = position % k;
        }
    }
    Ok(FoldPlan { k, assignments })
}

/// Counts of (true class, predicted class) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<usize>>,
    class_order: Vec<String>,
}

impl ConfusionMatrix {
    pub fn new(class_order: Vec<String>) -> Self {
        let n = class_order.len();
        Self {
            counts: vec![vec![0; n]; n],
            class_order,
        }
    }

    pub fn record(&mut self, true_class: usize, predicted_class: usize) {
        self.counts[true_class][predicted_class] += 1;
    }

    pub fn count(&self, true_class: usize, predicted_class: usize) -> usize {
        self.counts[true_class][predicted_class]
    }

    pub fn total(&self) -> usize {
        self.counts
            .iter()
            .map(|row| row.iter().sum::<usize>())
            .sum()
    }

    pub fn class_order(&self) -> &[String] {
        &self.class_order
    }

    fn true_positives(&self, class: usize) -> usize {
        self.counts[class][class]
    }

    fn false_positives(&self, class: usize) -> usize {
        (0..self.class_order.len())
            .filter(|&t| t != class)
            .map(|t| self.counts[t][class])
            .sum()
    }

    fn false_negatives(&self, class: usize) -> usize {
        (0..self.class_order.len())
            .filter(|&p| p != class)
            .map(|p| self.counts[class][p])
            .sum()
    }

    /// `(precision, recall)` for one class, each 0 when its denominator is 0.
    pub fn precision_recall(&self, class_index: usize) -> (f64, f64) {
        let tp = self.true_positives(class_index) as f64;
        let fp = self.false_positives(class_index) as f64;
        let fnn = self.false_negatives(class_index) as f64;
        let precision = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
        let recall = if tp + fnn > 0.0 { tp / (tp + fnn) } else { 0.0 };
        (precision, recall)
    }

    /// Class-size-weighted mean of the per-class F1 scores; a class whose
    /// precision and recall are both zero contributes zero.
    pub fn weighted_f1(&self) -> Result<f64> {
        self.weighted_prf().map(|m| m.f1)
    }

    /// Weighted precision, recall and F1 in one pass.
    pub fn weighted_prf(&self) -> Result<CellMetrics> {
        let total = self.total();
        if total == 0 {
            return Err(Error::Config("empty confusion matrix".into()));
        }
        let mut metrics = CellMetrics {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
        };
        for class in 0..self.class_order.len() {
            let support: usize = self.counts[class].iter().sum();
            if support == 0 {
                continue;
            }
            let weight = support as f64 / total as f64;
            let (p, r) = self.precision_recall(class);
            metrics.precision += weight * p;
            metrics.recall += weight * r;
            if p + r > 0.0 {
                metrics.f1 += weight * 2.0 * p * r / (p + r);
            }
        }
        Ok(metrics)
    }
}

/// Which classifier a grid cell runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classifier {
    NaiveBayes,
    Svm,
}

impl Classifier {
    pub const ALL: [Classifier; 2] = [Classifier::NaiveBayes, Classifier::Svm];

    pub fn name(&self) -> &'static str {
        match self {
            Classifier::NaiveBayes => "nb",
            Classifier::Svm => "svm",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "nb" | "naive-bayes" => Ok(Classifier::NaiveBayes),
            "svm" => Ok(Classifier::Svm),
            other => Err(Error::Config(format!("unknown classifier {other:?}"))),
        }
    }
}

impl fmt::Display for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The full grid specification plus training knobs.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub schemes: Vec<SchemeSpec>,
    pub feature_sizes: Vec<usize>,
    pub classifiers: Vec<Classifier>,
    pub folds: usize,
    pub seed: u64,
    pub nb_alpha: f64,
    pub svm: SvmParams,
    /// Worker threads for fold execution; 0 means one per fold up to the
    /// available parallelism. Results are identical for any thread count.
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schemes: Vec::new(),
            feature_sizes: Vec::new(),
            classifiers: vec![Classifier::NaiveBayes, Classifier::Svm],
            folds: 5,
            seed: 42,
            nb_alpha: 1.0,
            svm: SvmParams::default(),
            threads: 0,
        }
    }
}

/// Weighted precision/recall/F1, all in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// One grid cell: per-fold metrics plus their arithmetic mean.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub scheme: SchemeSpec,
    pub feature_size: usize,
    pub classifier: Classifier,
    pub folds: Vec<CellMetrics>,
    pub mean: CellMetrics,
}

/// All grid cells, ordered by (scheme, feature size, classifier) as given in
/// the configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    rows: Vec<ReportRow>,
}

impl EvalReport {
    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    pub fn mean_f1(
        &self,
        scheme: &str,
        feature_size: usize,
        classifier: Classifier,
    ) -> Option<f64> {
        self.rows
            .iter()
            .find(|row| {
                row.scheme.kind.name() == scheme
                    && row.feature_size == feature_size
                    && row.classifier == classifier
            })
            .map(|row| row.mean.f1)
    }

    /// Report CSV: one line per fold plus a `mean` line per cell, percent
    /// scale with four decimals.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("scheme,feature_size,classifier,fold,precision_w,recall_w,f1_w\n");
        let pct = |x: f64| format!("{:.4}", x * 100.0);
        for row in &self.rows {
            for (fold, m) in row.folds.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    row.scheme,
                    row.feature_size,
                    row.classifier,
                    fold,
                    pct(m.precision),
                    pct(m.recall),
                    pct(m.f1)
                ));
            }
            out.push_str(&format!(
                "{},{},{},mean,{},{},{}\n",
                row.scheme,
                row.feature_size,
                row.classifier,
                pct(row.mean.precision),
                pct(row.mean.recall),
                pct(row.mean.f1)
            ));
        }
        out
    }
}

/// Runs the whole grid under stratified k-fold cross-validation.
///
/// Per fold and cell: build `VocabStats` and the chi-square ranking from the
/// training partition, weight both partitions with those statistics, train
/// the classifier and score the test partition. Feature sizes beyond the
/// training vocabulary use the whole vocabulary. A failing cell aborts the
/// run, naming the cell.
pub fn run_experiment(corpus: &LabeledCorpus, config: &ExperimentConfig) -> Result<EvalReport> {
    if config.schemes.is_empty() {
        return Err(Error::Config("no weighting schemes given".into()));
    }
    if config.feature_sizes.is_empty() {
        return Err(Error::Config("no feature sizes given".into()));
    }
    if let Some(&zero) = config.feature_sizes.iter().find(|&&s| s == 0) {
        return Err(Error::Config(format!(
            "feature sizes must be positive, got {zero}"
        )));
    }
    if config.classifiers.is_empty() {
        return Err(Error::Config("no classifiers given".into()));
    }

    let plan = stratified_kfold(corpus, config.folds, config.seed)?;
    let k = plan.k();

    let workers = if config.threads == 0 {
        thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
            .min(k)
    } else {
        config.threads.min(k)
    };

    let next_fold = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<Vec<CellMetrics>>>>> =
        (0..k).map(|_| Mutex::new(None)).collect();

    thread::scope(|scope| {
        for _ in 0..workers.max(1) {
            scope.spawn(|| loop {
                let fold = next_fold.fetch_add(1, Ordering::Relaxed);
                if fold >= k {
                    break;
                }
                let outcome = run_fold(corpus, config, &plan, fold);
                *slots[fold].lock().expect("fold slot poisoned") = Some(outcome);
            });
        }
    });

    let mut per_fold_cells = Vec::with_capacity(k);
    for slot in slots {
        let outcome = slot
            .into_inner()
            .expect("fold slot poisoned")
            .expect("every fold executed");
        per_fold_cells.push(outcome?);
    }

    // reassemble as (scheme, size, classifier) rows over folds
    let mut rows = Vec::new();
    let mut cell = 0;
    for scheme in &config.schemes {
        for &feature_size in &config.feature_sizes {
            for &classifier in &config.classifiers {
                let folds: Vec<CellMetrics> = (0..k).map(|f| per_fold_cells[f][cell]).collect();
                let kf = k as f64;
                let mean = CellMetrics {
                    precision: folds.iter().map(|m| m.precision).sum::<f64>() / kf,
                    recall: folds.iter().map(|m| m.recall).sum::<f64>() / kf,
                    f1: folds.iter().map(|m| m.f1).sum::<f64>() / kf,
                };
                rows.push(ReportRow {
                    scheme: *scheme,
                    feature_size,
                    classifier,
                    folds,
                    mean,
                });
                cell += 1;
            }
        }
    }
    Ok(EvalReport { rows })
}

/// All cells of one fold, ordered (scheme, size, classifier).
fn run_fold(
    corpus: &LabeledCorpus,
    config: &ExperimentConfig,
    plan: &FoldPlan,
    fold: usize,
) -> Result<Vec<CellMetrics>> {
    let (train, test) = plan.train_test_indices(fold);
    let stats = VocabStats::build(corpus, &train)?;

    let ranked = selection::ranked_terms(&stats);
    let mut rank_of = vec![usize::MAX; stats.n_terms()];
    for (rank, &(term_idx, _)) in ranked.iter().enumerate() {
        rank_of[term_idx] = rank;
    }

    let counts_of = |docs: &[usize]| -> Vec<Vec<(usize, u32)>> {
        docs.iter()
            .map(|&d| weighting::term_counts(&corpus.documents()[d], &stats))
            .collect()
    };
    let train_counts = counts_of(&train);
    let test_counts = counts_of(&test);
    let train_classes: Vec<usize> = train.iter().map(|&d| corpus.class_of(d)).collect();
    let test_classes: Vec<usize> = test.iter().map(|&d| corpus.class_of(d)).collect();

    let mut cells = Vec::new();
    for scheme in &config.schemes {
        let factors = weighting::collection_factors(scheme, &stats);
        for &feature_size in &config.feature_sizes {
            let keep = feature_size.min(stats.n_terms());
            let vectors_of = |counts: &[Vec<(usize, u32)>]| -> Vec<SparseVector> {
                counts
                    .iter()
                    .map(|doc| {
                        let mut v = SparseVector::new();
                        for &(term_idx, tf) in doc {
                            let rank = rank_of[term_idx];
                            if rank < keep {
                                v.insert(
                                    rank,
                                    weighting::local_factor(scheme, tf) * factors[term_idx],
                                );
                            }
                        }
                        v
                    })
                    .collect()
            };
            let train_vectors = vectors_of(&train_counts);
            let test_vectors = vectors_of(&test_counts);

            for &classifier in &config.classifiers {
                let metrics = run_cell(
                    corpus,
                    config,
                    classifier,
                    keep,
                    &train_vectors,
                    &train_classes,
                    &test_vectors,
                    &test_classes,
                )
                .map_err(|source| Error::Cell {
                    scheme: scheme.kind.name().to_owned(),
                    feature_size,
                    classifier: classifier.name().to_owned(),
                    fold,
                    source: Box::new(source),
                })?;
                cells.push(metrics);
            }
        }
    }
    Ok(cells)
}

#[allow(clippy::too_many_arguments)]
fn run_cell(
    corpus: &LabeledCorpus,
    config: &ExperimentConfig,
    classifier: Classifier,
    n_features: usize,
    train_vectors: &[SparseVector],
    train_classes: &[usize],
    test_vectors: &[SparseVector],
    test_classes: &[usize],
) -> Result<CellMetrics> {
    let n_classes = corpus.labels().len();
    let mut confusion = ConfusionMatrix::new(corpus.labels().to_vec());
    match classifier {
        Classifier::NaiveBayes => {
            let clipped: Vec<SparseVector> = train_vectors
                .iter()
                .map(SparseVector::clipped_nonnegative)
                .collect();
            let model = classify::nb_train(
                &clipped,
                train_classes,
                n_classes,
                n_features,
                config.nb_alpha,
            )?;
            for (vector, &truth) in test_vectors.iter().zip(test_classes) {
                let prediction = classify::nb_predict(&model, &vector.clipped_nonnegative());
                confusion.record(truth, prediction);
            }
        }
        Classifier::Svm => {
            if n_classes != 2 {
                return Err(Error::Training(format!(
                    "the linear svm handles exactly two classes, corpus has {n_classes}"
                )));
            }
            let positive = corpus.positive_index();
            let negative = 1 - positive;
            let flags: Vec<bool> = train_classes.iter().map(|&c| c == positive).collect();
            let model = classify::svm_train(train_vectors, &flags, n_features, &config.svm)?;
            for (vector, &truth) in test_vectors.iter().zip(test_classes) {
                let prediction = if classify::svm_predict(&model, vector) {
                    positive
                } else {
                    negative
                };
                confusion.record(truth, prediction);
            }
        }
    }
    confusion.weighted_prf()
}
