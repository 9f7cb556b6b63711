//! Vocabulary, chi-square feature selection, and tf-idf vectorization.
//!
//! Everything here is built from training folds only; the cross-validation
//! driver rebuilds vocabulary and feature set inside each fold so no test
//! data leaks into document frequencies or selection.
//!
//! Weighting scheme (echoed in every report): `w(t) = tf(t) * idf(t)` with
//! raw-count tf and `idf = ln((N+1)/(df+1)) + 1`, final vector divided by
//! its L2 norm. Ties in selection break lexicographically so runs are
//! byte-reproducible.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::corpus::Code;
use crate::preprocess::Instance;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("cannot build a vocabulary from an empty training set")]
    EmptyTrainingSet,
}

/// Feature-index -> weight map over the selected vocabulary; non-zero
/// entries only, sorted by index; L2 norm 1 unless empty.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    pub fn empty() -> Self {
        SparseVector { entries: Vec::new() }
    }

    /// Builds from (index, weight) pairs; zero weights are dropped and
    /// indices must be unique.
    pub fn from_pairs(mut pairs: Vec<(u32, f64)>) -> Self {
        pairs.retain(|&(_, w)| w != 0.0);
        pairs.sort_unstable_by_key(|&(i, _)| i);
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVector { entries: pairs }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn get(&self, index: u32) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|at| self.entries[at].1)
            .unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, w)| w * w)
            .sum::<f64>()
            .sqrt()
    }

    /// Dot product against a dense weight vector.
    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|&(i, w)| w * dense[i as usize])
            .sum()
    }

    fn normalize(&mut self) {
        let norm = self.l2_norm();
        if norm > 0.0 {
            for e in &mut self.entries {
                e.1 /= norm;
            }
        }
    }
}

/// Term -> (dense feature index, document frequency), plus the training
/// set size. Indices are assigned in lexicographic term order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: BTreeMap<String, (u32, u32)>,
    df_by_index: Vec<u32>,
    n_docs: u32,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> u32 {
        self.n_docs
    }

    pub fn lookup(&self, term: &str) -> Option<(u32, u32)> {
        self.terms.get(term).copied()
    }

    pub fn df(&self, term: &str) -> u32 {
        self.terms.get(term).map(|&(_, df)| df).unwrap_or(0)
    }

    pub fn df_at(&self, index: u32) -> u32 {
        self.df_by_index[index as usize]
    }

    /// Terms in index order (index i is the i-th lexicographic term).
    pub fn term_by_index(&self) -> Vec<&str> {
        self.terms.keys().map(String::as_str).collect()
    }

    pub fn idf(&self, df: u32) -> f64 {
        ((f64::from(self.n_docs) + 1.0) / (f64::from(df) + 1.0)).ln() + 1.0
    }
}

/// Counts document frequencies over the training instances.
pub fn build_vocabulary(instances: &[&Instance]) -> Result<Vocabulary, FeatureError> {
    if instances.is_empty() {
        return Err(FeatureError::EmptyTrainingSet);
    }
    let mut df: BTreeMap<&str, u32> = BTreeMap::new();
    for inst in instances {
        let distinct: BTreeSet<&str> = inst.terms.iter().map(String::as_str).collect();
        for term in distinct {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let mut df_by_index = Vec::with_capacity(df.len());
    let terms = df
        .into_iter()
        .enumerate()
        .map(|(i, (t, d))| {
            df_by_index.push(d);
            (t.to_string(), (i as u32, d))
        })
        .collect();
    Ok(Vocabulary {
        terms,
        df_by_index,
        n_docs: instances.len() as u32,
    })
}

/// The 2x2 chi-square statistic: `N (AD - BC)^2 / ((A+B)(C+D)(A+C)(B+D))`,
/// 0 whenever a marginal is 0.
fn chi2_from_table(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let n = a + b + c + d;
    let with_term = a + b;
    let without_term = c + d;
    let in_class = a + c;
    let out_class = b + d;
    if with_term == 0.0 || without_term == 0.0 || in_class == 0.0 || out_class == 0.0 {
        return 0.0;
    }
    let diff = a * d - b * c;
    n * diff * diff / (with_term * without_term * in_class * out_class)
}

/// Chi-square association between one term and one class, counted over
/// the training instances (document presence, not term frequency).
pub fn chi_square(term: &str, class: Code, instances: &[&Instance]) -> f64 {
    let mut a = 0.0;
    let mut b = 0.0;
    let mut c = 0.0;
    let mut d = 0.0;
    for inst in instances {
        let has = inst.terms.iter().any(|t| t == term);
        let in_class = inst.label == class;
        match (has, in_class) {
            (true, true) => a += 1.0,
            (true, false) => b += 1.0,
            (false, true) => c += 1.0,
            (false, false) => d += 1.0,
        }
    }
    chi2_from_table(a, b, c, d)
}

/// Union over classes of each class's top-k terms by chi-square.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    selected: BTreeSet<u32>,
    k_per_class: usize,
    /// Per class: all vocabulary terms ranked by (score desc, term asc).
    per_class: BTreeMap<Code, Vec<(u32, f64)>>,
}

impl FeatureSet {
    pub fn contains(&self, index: u32) -> bool {
        self.selected.contains(&index)
    }

    pub fn selected(&self) -> &BTreeSet<u32> {
        &self.selected
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn k_per_class(&self) -> usize {
        self.k_per_class
    }

    /// Ranked (term index, chi2) rows for one class, best first.
    pub fn ranking(&self, class: Code) -> Option<&[(u32, f64)]> {
        self.per_class.get(&class).map(Vec::as_slice)
    }

    pub fn classes(&self) -> impl Iterator<Item = Code> + '_ {
        self.per_class.keys().copied()
    }
}

/// Ranks every vocabulary term per class and keeps each class's top
/// `k_per_class` (all of them when fewer exist). Ties break toward the
/// lexicographically smaller term, which is the smaller index.
pub fn select_features(
    instances: &[&Instance],
    vocab: &Vocabulary,
    k_per_class: usize,
) -> FeatureSet {
    let n = instances.len() as f64;
    let classes: BTreeSet<Code> = instances.iter().map(|i| i.label).collect();
    let n_terms = vocab.len();

    // presence counts per (term, class)
    let mut class_index: BTreeMap<Code, usize> = BTreeMap::new();
    for (i, &c) in classes.iter().enumerate() {
        class_index.insert(c, i);
    }
    let mut present = vec![0u32; n_terms * classes.len()];
    let mut class_sizes = vec![0u32; classes.len()];
    for inst in instances {
        let ci = class_index[&inst.label];
        class_sizes[ci] += 1;
        let distinct: BTreeSet<&str> = inst.terms.iter().map(String::as_str).collect();
        for term in distinct {
            if let Some((idx, _)) = vocab.lookup(term) {
                present[idx as usize * classes.len() + ci] += 1;
            }
        }
    }

    let mut per_class = BTreeMap::new();
    let mut selected = BTreeSet::new();
    for (&class, &ci) in &class_index {
        let n_c = f64::from(class_sizes[ci]);
        let mut ranked: Vec<(u32, f64)> = (0..n_terms as u32)
            .map(|idx| {
                let a = f64::from(present[idx as usize * classes.len() + ci]);
                let df = f64::from(vocab.df_at(idx));
                let b = df - a;
                let c = n_c - a;
                let d = n - n_c - b;
                (idx, chi2_from_table(a, b, c, d))
            })
            .collect();
        ranked.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then(x.0.cmp(&y.0)));
        for &(idx, _) in ranked.iter().take(k_per_class) {
            selected.insert(idx);
        }
        per_class.insert(class, ranked);
    }

    FeatureSet {
        selected,
        k_per_class,
        per_class,
    }
}

/// Audit view of a feature selection: `class,term,chi2,selected` rows,
/// classes in declaration order, terms ranked best-first within each.
pub fn feature_report_csv(vocab: &Vocabulary, features: &FeatureSet) -> String {
    let terms = vocab.term_by_index();
    let mut out = String::from("class,term,chi2,selected\n");
    for class in features.classes() {
        let ranked = features.ranking(class).unwrap_or(&[]);
        for &(idx, score) in ranked {
            out.push_str(&format!(
                "{},{},{:.6},{}\n",
                class,
                terms[idx as usize],
                score,
                features.contains(idx)
            ));
        }
    }
    out
}

/// Weights the instance's selected terms with tf-idf and L2-normalizes.
/// Terms outside the vocabulary or the feature set contribute nothing; an
/// instance with no selected terms becomes the zero vector.
pub fn vectorize(instance: &Instance, vocab: &Vocabulary, features: &FeatureSet) -> SparseVector {
    let mut tf: BTreeMap<u32, f64> = BTreeMap::new();
    for term in &instance.terms {
        if let Some((idx, _)) = vocab.lookup(term) {
            if features.contains(idx) {
                *tf.entry(idx).or_insert(0.0) += 1.0;
            }
        }
    }
    let pairs = tf
        .into_iter()
        .map(|(idx, count)| (idx, count * vocab.idf(vocab.df_at(idx))))
        .collect();
    let mut v = SparseVector::from_pairs(pairs);
    v.normalize();
    v
}
