//! The two classifiers run over weighted vectors: multinomial naive Bayes
//! with additive smoothing, and a linear SVM minimizing the regularized
//! hinge loss by coordinate descent on its dual.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::weighting::SparseVector;

/// Multinomial naive Bayes model over nonnegative feature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    class_log_priors: Vec<f64>,
    /// `[class][feature]` smoothed log likelihoods.
    feature_log_likelihoods: Vec<Vec<f64>>,
    smoothing_alpha: f64,
    n_features: usize,
}

impl NbModel {
    pub fn n_classes(&self) -> usize {
        self.class_log_priors.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn class_log_priors(&self) -> &[f64] {
        &self.class_log_priors
    }

    pub fn feature_log_likelihoods(&self, class: usize) -> &[f64] {
        &self.feature_log_likelihoods[class]
    }

    /// Diagnostic text dump, 6 decimals.
    pub fn dump_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "nb alpha={} n_features={}",
            self.smoothing_alpha, self.n_features
        );
        for (k, prior) in self.class_log_priors.iter().enumerate() {
            let likelihoods = self.feature_log_likelihoods[k]
                .iter()
                .map(|l| format!("{l:.6}"))
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(
                out,
                "class {k} log_prior={prior:.6} log_likelihoods=[{likelihoods}]"
            );
        }
        out
    }
}

/// Trains multinomial naive Bayes.
///
/// `class_of[i]` is the class index of `vectors[i]`. The prior of class `k`
/// is `n_k / N` over vector counts; the likelihood of feature `j` in class
/// `k` is `(S_kj + alpha) / (S_k + alpha * n_features)` where `S_kj` sums the
/// weight of `j` over the class's vectors.
///
/// Weights must be nonnegative: clip signed schemes first (see
/// [`SparseVector::clipped_nonnegative`]).
pub fn nb_train(
    vectors: &[SparseVector],
    class_of: &[usize],
    n_classes: usize,
    n_features: usize,
    alpha: f64,
) -> Result<NbModel> {
    if vectors.len() != class_of.len() {
        return Err(Error::Training(format!(
            "{} vectors but {} labels",
            vectors.len(),
            class_of.len()
        )));
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::Training(format!(
            "smoothing alpha must be positive, got {alpha}"
        )));
    }
    if n_classes < 2 {
        return Err(Error::Training("need at least two classes".into()));
    }
    if n_features == 0 {
        return Err(Error::Training("empty feature space".into()));
    }

    let mut class_counts = vec![0usize; n_classes];
    let mut sums = vec![vec![0.0f64; n_features]; n_classes];
    for (vector, &class) in vectors.iter().zip(class_of) {
        if class >= n_classes {
            return Err(Error::Training(format!("class index {class} out of range")));
        }
        class_counts[class] += 1;
        for (j, w) in vector.iter() {
            if j >= n_features {
                return Err(Error::Training(format!(
                    "feature index {j} out of range ({n_features} features)"
                )));
            }
            if w < 0.0 {
                return Err(Error::Training(format!(
                    "negative feature weight {w} reached the naive Bayes trainer"
                )));
            }
            sums[class][j] += w;
        }
    }
    if let Some(missing) = class_counts.iter().position(|&n| n == 0) {
        return Err(Error::Training(format!(
            "class {missing} has no training vectors"
        )));
    }

    let n_total = vectors.len() as f64;
    let class_log_priors = class_counts
        .iter()
        .map(|&n| (n as f64 / n_total).ln())
        .collect();
    let feature_log_likelihoods = sums
        .into_iter()
        .map(|class_sums| {
            let total: f64 = class_sums.iter().sum();
            let denom = total + alpha * n_features as f64;
            class_sums
                .into_iter()
                .map(|s| ((s + alpha) / denom).ln())
                .collect()
        })
        .collect();

    Ok(NbModel {
        class_log_priors,
        feature_log_likelihoods,
        smoothing_alpha: alpha,
        n_features,
    })
}

/// Log posterior scores (up to the shared evidence term) for each class.
pub fn nb_log_scores(model: &NbModel, vector: &SparseVector) -> Vec<f64> {
    (0..model.n_classes())
        .map(|k| {
            model.class_log_priors[k]
                + vector
                    .iter()
                    .map(|(j, w)| w * model.feature_log_likelihoods[k][j])
                    .sum::<f64>()
        })
        .collect()
}

/// Predicted class index: argmax of the log scores, ties going to the
/// earliest class in model order. An empty vector falls back to the prior.
pub fn nb_predict(model: &NbModel, vector: &SparseVector) -> usize {
    debug_assert!(vector.max_index().is_none_or(|i| i < model.n_features));
    let scores = nb_log_scores(model, vector);
    let mut best = 0;
    for (k, &score) in scores.iter().enumerate().skip(1) {
        if score > scores[best] {
            best = k;
        }
    }
    best
}

/// Linear SVM decision function `w . x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    weights: Vec<f64>,
    bias: f64,
    regularization_c: f64,
}

impl SvmModel {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn n_features(&self) -> usize {
        self.weights.len()
    }

    pub fn decision(&self, vector: &SparseVector) -> f64 {
        vector.dot_dense(&self.weights) + self.bias
    }

    /// Diagnostic text dump, 6 decimals.
    pub fn dump_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "svm c={} bias={:.6} n_features={}",
            self.regularization_c,
            self.bias,
            self.weights.len()
        );
        for (j, w) in self.weights.iter().enumerate() {
            if *w != 0.0 {
                let _ = writeln!(out, "w[{j}]={w:.6}");
            }
        }
        out
    }
}

/// Training parameters; the defaults are fixed for reproducibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    pub c: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            epochs: 20,
            seed: 42,
        }
    }
}

/// Regularized hinge objective `lambda/2 ||w||^2 + mean hinge loss` with
/// `lambda = 1 / (c * n)`; the bias is not regularized.
pub fn svm_objective(model: &SvmModel, vectors: &[SparseVector], positive: &[bool]) -> f64 {
    let n = vectors.len() as f64;
    let lambda = 1.0 / (model.regularization_c * n);
    let norm_sq: f64 = model.weights.iter().map(|w| w * w).sum();
    let hinge: f64 = vectors
        .iter()
        .zip(positive)
        .map(|(x, &pos)| {
            let y = if pos { 1.0 } else { -1.0 };
            (1.0 - y * model.decision(x)).max(0.0)
        })
        .sum::<f64>()
        / n;
    lambda / 2.0 * norm_sq + hinge
}

/// Exact minimizer of the mean hinge loss over the bias alone, weights held
/// fixed. The loss is convex piecewise linear in `b`, so a sweep over its
/// breakpoints in slope order finds the minimum.
fn optimal_bias(scores: &[f64], positive: &[bool]) -> f64 {
    // slope at b -> -inf is -(number of positives); each breakpoint adds +1
    let mut breakpoints: Vec<f64> = scores
        .iter()
        .zip(positive)
        .map(|(&s, &pos)| if pos { 1.0 - s } else { -1.0 - s })
        .collect();
    breakpoints.sort_by(|a, b| a.partial_cmp(b).expect("finite decision scores"));
    let mut slope = -(positive.iter().filter(|&&p| p).count() as i64);
    for &b in &breakpoints {
        slope += 1;
        if slope >= 0 {
            return b;
        }
    }
    *breakpoints.last().expect("at least one training vector")
}

/// Trains a binary linear SVM on the regularized hinge loss.
///
/// The solver is coordinate descent on the L1-loss dual (one dual variable
/// per example, visited in seeded shuffled order each epoch) with the bias
/// carried as a constant feature, followed per epoch by an exact
/// recalibration of the bias against the unregularized objective. The
/// returned model is the epoch iterate with the lowest objective, the zero
/// model included as the first candidate, so the result never scores worse
/// than zero. Deterministic for a fixed seed.
pub fn svm_train(
    vectors: &[SparseVector],
    positive: &[bool],
    n_features: usize,
    params: &SvmParams,
) -> Result<SvmModel> {
    if vectors.is_empty() || vectors.len() != positive.len() {
        return Err(Error::Training(format!(
            "{} vectors but {} labels",
            vectors.len(),
            positive.len()
        )));
    }
    if !params.c.is_finite() || params.c <= 0.0 {
        return Err(Error::Training(format!(
            "c must be positive, got {}",
            params.c
        )));
    }
    if positive.iter().all(|&p| p) || positive.iter().all(|&p| !p) {
        return Err(Error::Training(
            "svm training needs both classes present".into(),
        ));
    }
    if let Some(bad) = vectors
        .iter()
        .find_map(|v| v.max_index().filter(|&i| i >= n_features))
    {
        return Err(Error::Training(format!(
            "feature index {bad} out of range ({n_features} features)"
        )));
    }

    let n = vectors.len();
    let upper = params.c; // per-example dual bound for the L1-loss dual
    let mut rng = SplitMix64::new(params.seed);

    let mut w = vec![0.0f64; n_features];
    let mut bias = 0.0f64;
    let mut alpha = vec![0.0f64; n];
    let labels: Vec<f64> = positive
        .iter()
        .map(|&p| if p { 1.0 } else { -1.0 })
        .collect();
    // diagonal of the Gram matrix, bias feature included
    let qd: Vec<f64> = vectors
        .iter()
        .map(|x| x.iter().map(|(_, v)| v * v).sum::<f64>() + 1.0)
        .collect();

    let zero = SvmModel {
        weights: vec![0.0; n_features],
        bias: 0.0,
        regularization_c: params.c,
    };
    let mut best_objective = svm_objective(&zero, vectors, positive);
    let mut best = zero;

    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..params.epochs {
        rng.shuffle(&mut order);
        for &i in &order {
            let gradient = labels[i] * (vectors[i].dot_dense(&w) + bias) - 1.0;
            let projected = if alpha[i] <= 0.0 {
                gradient.min(0.0)
            } else if alpha[i] >= upper {
                gradient.max(0.0)
            } else {
                gradient
            };
            if projected.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (old - gradient / qd[i]).clamp(0.0, upper);
                let delta = (alpha[i] - old) * labels[i];
                for (j, x) in vectors[i].iter() {
                    w[j] += delta * x;
                }
                bias += delta;
            }
        }

        let scores: Vec<f64> = vectors.iter().map(|x| x.dot_dense(&w)).collect();
        let candidate = SvmModel {
            weights: w.clone(),
            bias: optimal_bias(&scores, positive),
            regularization_c: params.c,
        };
        let objective = svm_objective(&candidate, vectors, positive);
        if objective < best_objective {
            best_objective = objective;
            best = candidate;
        }
    }

    Ok(best)
}

/// True for the positive class: `w . x + b >= 0` (zero counts as positive).
pub fn svm_predict(model: &SvmModel, vector: &SparseVector) -> bool {
    model.decision(vector) >= 0.0
}
