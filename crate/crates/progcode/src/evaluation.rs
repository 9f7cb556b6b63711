//! Balanced sampling, stratified cross-validation, and metrics.
//!
//! The no-leakage rule lives here: vocabulary and feature selection are
//! rebuilt inside every fold from the training folds only
//! ([`training_features`] is the single code path for that), and metrics
//! are computed over the union of held-out predictions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::classifiers::{DataPoint, Dataset, Learner, TrainError};
use crate::corpus::Code;
use crate::features::{
    build_vocabulary, select_features, vectorize, FeatureError, FeatureSet, Vocabulary,
};
use crate::preprocess::{Instance, InstanceId};
use crate::seed;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("class {code} has {available} eligible instances, {requested} requested")]
    InsufficientInstances {
        code: Code,
        available: usize,
        requested: usize,
    },
    #[error("fold count {k} invalid for {n} instances (need 2 <= k <= n)")]
    BadFoldCount { k: usize, n: usize },
    #[error("cannot compute metrics for an empty confusion matrix")]
    EmptyConfusion,
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// Uniform per-class sample without replacement.
///
/// Buckets must already be in canonical order (they are, coming out of
/// the corpus pools), so a fixed seed always draws the same items. Each
/// class draws from its own derived stream, so adding a class never
/// perturbs another class's draw.
pub fn balanced_sample<'a, T>(
    buckets: &'a BTreeMap<Code, Vec<T>>,
    classes: &[Code],
    n_per_class: usize,
    eligible: impl Fn(&T) -> bool,
    sample_seed: u64,
) -> Result<BTreeMap<Code, Vec<&'a T>>, EvalError> {
    let mut out = BTreeMap::new();
    for &class in classes {
        let pool: Vec<&T> = buckets
            .get(&class)
            .map(|v| v.iter().filter(|t| eligible(t)).collect())
            .unwrap_or_default();
        if pool.len() < n_per_class {
            return Err(EvalError::InsufficientInstances {
                code: class,
                available: pool.len(),
                requested: n_per_class,
            });
        }
        let mut rng = seed::rng_for(sample_seed, &[class.ord() as u64]);
        let picked = seed::sample_indices(pool.len(), n_per_class, &mut rng)
            .into_iter()
            .map(|i| pool[i])
            .collect();
        out.insert(class, picked);
    }
    Ok(out)
}

/// A k-fold partition of instance ids, stratified by class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub folds: Vec<Vec<InstanceId>>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn fold_of(&self) -> BTreeMap<&InstanceId, usize> {
        let mut map = BTreeMap::new();
        for (f, ids) in self.folds.iter().enumerate() {
            for id in ids {
                map.insert(id, f);
            }
        }
        map
    }
}

/// Shuffles each class's ids by a class-derived seed and deals them
/// round-robin, which keeps per-class fold counts within one of each
/// other.
pub fn stratified_folds(
    items: &[(InstanceId, Code)],
    k: usize,
    fold_seed: u64,
) -> Result<FoldPlan, EvalError> {
    if k < 2 || k > items.len() {
        return Err(EvalError::BadFoldCount { k, n: items.len() });
    }
    let mut by_class: BTreeMap<Code, Vec<&InstanceId>> = BTreeMap::new();
    for (id, class) in items {
        by_class.entry(*class).or_default().push(id);
    }
    let mut folds: Vec<Vec<InstanceId>> = vec![Vec::new(); k];
    // One cursor across classes: each class still lands in consecutive
    // folds (per-class counts within one), and total fold sizes balance
    // too, so k = n degenerates to leave-one-out.
    let mut cursor = 0usize;
    for (class, mut ids) in by_class {
        ids.sort(); // canonical pre-shuffle order
        let mut rng = seed::rng_for(fold_seed, &[class.ord() as u64]);
        seed::shuffle(&mut ids, &mut rng);
        for id in ids {
            folds[cursor % k].push(id.clone());
            cursor += 1;
        }
    }
    Ok(FoldPlan {
        k,
        folds,
        seed: fold_seed,
    })
}

/// True-by-predicted counts over a fixed class list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub classes: Vec<Code>,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(classes: Vec<Code>) -> Self {
        let n = classes.len();
        ConfusionMatrix {
            classes,
            counts: vec![0; n * n],
        }
    }

    fn index_of(&self, code: Code) -> usize {
        self.classes
            .iter()
            .position(|c| *c == code)
            .expect("code outside the matrix class set")
    }

    pub fn record(&mut self, truth: Code, predicted: Code) {
        let (t, p) = (self.index_of(truth), self.index_of(predicted));
        self.counts[t * self.classes.len() + p] += 1;
    }

    pub fn get(&self, truth: Code, predicted: Code) -> u64 {
        let (t, p) = (self.index_of(truth), self.index_of(predicted));
        self.counts[t * self.classes.len() + p]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        let n = self.classes.len();
        (0..n).map(|i| self.counts[i * n + i]).sum()
    }

    fn row_sum(&self, t: usize) -> u64 {
        let n = self.classes.len();
        self.counts[t * n..(t + 1) * n].iter().sum()
    }

    fn col_sum(&self, p: usize) -> u64 {
        let n = self.classes.len();
        (0..n).map(|t| self.counts[t * n + p]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassPrf {
    pub class: Code,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub accuracy: f64,
    pub micro_f1: f64,
    pub macro_f1: f64,
    pub per_class: Vec<ClassPrf>,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Accuracy, micro-F1 (from pooled TP/FP/FN), macro-F1 (unweighted mean
/// of per-class F1), with the 0/0 = 0 convention throughout.
pub fn metrics(confusion: &ConfusionMatrix) -> Result<Metrics, EvalError> {
    let total = confusion.total();
    if total == 0 || confusion.classes.is_empty() {
        return Err(EvalError::EmptyConfusion);
    }
    let n = confusion.classes.len();
    let mut per_class = Vec::with_capacity(n);
    let mut pooled_tp = 0.0;
    let mut pooled_fp = 0.0;
    let mut pooled_fn = 0.0;
    for (i, &class) in confusion.classes.iter().enumerate() {
        let tp = confusion.counts[i * n + i] as f64;
        let fp = confusion.col_sum(i) as f64 - tp;
        let fnn = confusion.row_sum(i) as f64 - tp;
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fnn);
        let f1 = ratio(2.0 * precision * recall, precision + recall);
        pooled_tp += tp;
        pooled_fp += fp;
        pooled_fn += fnn;
        per_class.push(ClassPrf {
            class,
            precision,
            recall,
            f1,
        });
    }
    let micro_p = ratio(pooled_tp, pooled_tp + pooled_fp);
    let micro_r = ratio(pooled_tp, pooled_tp + pooled_fn);
    let micro_f1 = ratio(2.0 * micro_p * micro_r, micro_p + micro_r);
    let macro_f1 = per_class.iter().map(|c| c.f1).sum::<f64>() / n as f64;
    let accuracy = confusion.trace() as f64 / total as f64;
    Ok(Metrics {
        accuracy,
        micro_f1,
        macro_f1,
        per_class,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredRecord {
    pub id: InstanceId,
    pub truth: Code,
    pub predicted: Code,
    pub fold: usize,
}

/// One cross-validation run: confusion matrix, metrics, per-instance
/// predictions, and the configuration echo for reproducibility.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub algorithm: String,
    pub classes: Vec<Code>,
    pub confusion: ConfusionMatrix,
    pub metrics: Metrics,
    pub records: Vec<PredRecord>,
    pub k_folds: usize,
    pub seed: u64,
    pub config_echo: Vec<(String, String)>,
}

impl EvalReport {
    pub fn correct_ids(&self) -> BTreeSet<InstanceId> {
        self.records
            .iter()
            .filter(|r| r.truth == r.predicted)
            .map(|r| r.id.clone())
            .collect()
    }

    /// Confusion matrix as CSV: header row of predicted classes, one row
    /// per true class.
    pub fn confusion_csv(&self) -> String {
        let mut out = String::from("true\\pred");
        for c in &self.classes {
            out.push(',');
            out.push_str(c.name());
        }
        out.push('\n');
        for &t in &self.classes {
            out.push_str(t.name());
            for &p in &self.classes {
                out.push_str(&format!(",{}", self.confusion.get(t, p)));
            }
            out.push('\n');
        }
        out
    }

    /// Per-instance predictions: `id<TAB>true<TAB>pred<TAB>fold`.
    pub fn predictions_tsv(&self) -> String {
        let mut out = String::from("id\ttrue\tpred\tfold\n");
        for r in &self.records {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.id, r.truth, r.predicted, r.fold
            ));
        }
        out
    }

    pub fn summary_md(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("## {} evaluation\n\n", self.algorithm));
        out.push_str(&format!(
            "- instances: {}\n- folds: {}\n- seed: {}\n",
            self.confusion.total(),
            self.k_folds,
            self.seed
        ));
        out.push_str(&format!(
            "- accuracy: {:.6}\n- micro_f1: {:.6}\n- macro_f1: {:.6}\n\n",
            self.metrics.accuracy, self.metrics.micro_f1, self.metrics.macro_f1
        ));
        out.push_str("### Config\n\n");
        for (k, v) in &self.config_echo {
            out.push_str(&format!("- {k} = {v}\n"));
        }
        out.push_str("\n### Per-class F1\n\n");
        for prf in &self.metrics.per_class {
            out.push_str(&format!(
                "- {}: precision {:.6}, recall {:.6}, f1 {:.6}\n",
                prf.class, prf.precision, prf.recall, prf.f1
            ));
        }
        out
    }
}

/// Vocabulary + feature selection from training instances only. This is
/// the one path cross-validation uses, so leakage checks can recompute
/// it directly.
pub fn training_features(
    train: &[&Instance],
    k_per_class: usize,
) -> Result<(Vocabulary, FeatureSet), FeatureError> {
    let vocab = build_vocabulary(train)?;
    let features = select_features(train, &vocab, k_per_class);
    Ok((vocab, features))
}

/// Runs stratified k-fold cross-validation of one learner over
/// preprocessed instances.
///
/// Per fold: vocabulary and feature set from the training folds only,
/// vectorize both sides, fit, predict the held-out fold. Metrics pool
/// the held-out predictions of all folds.
pub fn cross_validate(
    learner: &dyn Learner,
    instances: &[&Instance],
    k_per_class: usize,
    k_folds: usize,
    run_seed: u64,
    config_echo: &[(String, String)],
) -> Result<EvalReport, EvalError> {
    let items: Vec<(InstanceId, Code)> = instances
        .iter()
        .map(|i| (i.id.clone(), i.label))
        .collect();
    let plan = stratified_folds(&items, k_folds, seed::derive(run_seed, &[0]))?;

    let classes: Vec<Code> = {
        let set: BTreeSet<Code> = instances.iter().map(|i| i.label).collect();
        set.into_iter().collect()
    };
    let mut confusion = ConfusionMatrix::new(classes.clone());
    let mut records = Vec::with_capacity(instances.len());

    for fold in 0..plan.k {
        let test_ids: BTreeSet<&InstanceId> = plan.folds[fold].iter().collect();
        let train: Vec<&Instance> = instances
            .iter()
            .filter(|i| !test_ids.contains(&i.id))
            .copied()
            .collect();
        let test: Vec<&Instance> = instances
            .iter()
            .filter(|i| test_ids.contains(&i.id))
            .copied()
            .collect();

        let (vocab, features) = training_features(&train, k_per_class)?;
        let train_points: Vec<DataPoint> = train
            .iter()
            .map(|i| DataPoint {
                vector: vectorize(i, &vocab, &features),
                label: i.label,
                id: i.id.clone(),
            })
            .collect();
        let dataset = Dataset::new(train_points, vocab.len());
        let model = learner.fit(&dataset, seed::derive(run_seed, &[1, fold as u64]))?;

        for t in test {
            let vector = vectorize(t, &vocab, &features);
            let predicted = model.predict(&t.id, &vector);
            confusion.record(t.label, predicted);
            records.push(PredRecord {
                id: t.id.clone(),
                truth: t.label,
                predicted,
                fold,
            });
        }
    }

    let metrics = metrics(&confusion)?;
    Ok(EvalReport {
        algorithm: learner.name().to_string(),
        classes,
        confusion,
        metrics,
        records,
        k_folds,
        seed: run_seed,
        config_echo: config_echo.to_vec(),
    })
}
