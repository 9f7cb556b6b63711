//! The three classification algorithms behind one train/predict contract.
//!
//! All three consume the same tf-idf vectors. Prediction always returns
//! exactly one class; every tie anywhere (vote counts, score maxima,
//! pairwise win counts) breaks toward the class that comes first in
//! [`Code`] declaration order.

mod forest;
mod nb;
mod svm;

pub use forest::{ForestModel, RandomForest};
pub use nb::{NaiveBayes, NbModel};
pub use svm::{LinearSvm, SvmModel};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::corpus::Code;
use crate::features::SparseVector;
use crate::preprocess::InstanceId;

#[derive(Debug, Error, PartialEq)]
pub enum TrainError {
    #[error("cannot train on an empty dataset")]
    EmptyDataset,
    #[error("cannot train on a single-class dataset")]
    SingleClass,
    #[error("non-finite weight in input vector {id}")]
    NonFiniteInput { id: String },
    #[error("invalid parameter: {0}")]
    BadParams(String),
}

#[derive(Debug, Clone)]
pub struct DataPoint {
    pub vector: SparseVector,
    pub label: Code,
    pub id: InstanceId,
}

/// A vectorized dataset: points, the class set present, and the feature
/// dimensionality (vocabulary size).
#[derive(Debug, Clone)]
pub struct Dataset {
    pub points: Vec<DataPoint>,
    pub classes: Vec<Code>,
    pub dim: usize,
}

impl Dataset {
    pub fn new(points: Vec<DataPoint>, dim: usize) -> Self {
        let classes: BTreeSet<Code> = points.iter().map(|p| p.label).collect();
        Dataset {
            points,
            classes: classes.into_iter().collect(),
            dim,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn class_index(&self, code: Code) -> Option<usize> {
        self.classes.iter().position(|c| *c == code)
    }

    pub(crate) fn validate_for_training(&self) -> Result<(), TrainError> {
        if self.is_empty() {
            return Err(TrainError::EmptyDataset);
        }
        if self.classes.len() < 2 {
            return Err(TrainError::SingleClass);
        }
        for p in &self.points {
            if p.vector.iter().any(|(_, w)| !w.is_finite()) {
                return Err(TrainError::NonFiniteInput {
                    id: p.id.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// A trained model. `predict` is a pure function of the model and the
/// vector; the instance id is passed through for harness stubs and is
/// ignored by the production models.
pub trait Predictor: Send + Sync {
    fn predict(&self, id: &InstanceId, vector: &SparseVector) -> Code;

    fn predict_batch(&self, points: &[DataPoint]) -> Vec<(InstanceId, Code)> {
        points
            .iter()
            .map(|p| (p.id.clone(), self.predict(&p.id, &p.vector)))
            .collect()
    }
}

/// A training algorithm. `seed` varies per cross-validation fold and is
/// mixed with the algorithm's own configured seed.
pub trait Learner: Send + Sync {
    fn name(&self) -> &str;
    fn fit(&self, data: &Dataset, seed: u64) -> Result<Box<dyn Predictor>, TrainError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algorithm {
    NaiveBayes,
    RandomForest,
    Svm,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::NaiveBayes, Algorithm::RandomForest, Algorithm::Svm];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::NaiveBayes => "nb",
            Algorithm::RandomForest => "rf",
            Algorithm::Svm => "svm",
        }
    }

    pub fn parse(s: &str) -> Option<Algorithm> {
        match s {
            "nb" => Some(Algorithm::NaiveBayes),
            "rf" => Some(Algorithm::RandomForest),
            "svm" => Some(Algorithm::Svm),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NbParams {
    /// Additive smoothing.
    pub alpha: f64,
}

impl Default for NbParams {
    fn default() -> Self {
        NbParams { alpha: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeaturesPerSplit {
    /// ceil(sqrt(F)), the usual forest default.
    Sqrt,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RfParams {
    pub n_trees: usize,
    pub features_per_split: FeaturesPerSplit,
    pub bootstrap: bool,
    pub max_depth: Option<u32>,
    pub min_leaf: usize,
    pub seed: u64,
}

impl Default for RfParams {
    fn default() -> Self {
        RfParams {
            n_trees: 100,
            features_per_split: FeaturesPerSplit::Sqrt,
            bootstrap: true,
            max_depth: None,
            min_leaf: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmParams {
    /// Soft-margin cost.
    pub c: f64,
    pub max_epochs: usize,
    /// Relative objective-decrease tolerance for convergence.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            max_epochs: 1000,
            tol: 1e-4,
            seed: 0,
        }
    }
}

/// Bundle of all three algorithms' parameters; the experiment drivers
/// carry one of these and instantiate learners on demand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainParams {
    pub nb: NbParams,
    pub rf: RfParams,
    pub svm: SvmParams,
}

impl TrainParams {
    pub fn learner(&self, algorithm: Algorithm) -> Box<dyn Learner> {
        match algorithm {
            Algorithm::NaiveBayes => Box::new(NaiveBayes {
                params: self.nb.clone(),
            }),
            Algorithm::RandomForest => Box::new(RandomForest {
                params: self.rf.clone(),
            }),
            Algorithm::Svm => Box::new(LinearSvm {
                params: self.svm.clone(),
            }),
        }
    }
}

/// Index of the best score; ties keep the earliest position. With
/// `classes` in declaration order this is the crate-wide tie-break rule.
pub(crate) fn argmax_first(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;
    use crate::preprocess::Variant;

    pub fn point(case: &str, label: Code, pairs: &[(u32, f64)]) -> DataPoint {
        DataPoint {
            vector: SparseVector::from_pairs(pairs.to_vec()),
            label,
            id: InstanceId {
                case_id: case.to_string(),
                line_no: 1,
                code: label,
                variant: Variant::Single,
            },
        }
    }
}
