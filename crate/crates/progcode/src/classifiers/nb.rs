//! Multinomial Naive Bayes with additive smoothing.
//!
//! The event model treats vector weights as (possibly fractional) counts,
//! so the tf-idf vectors shared by all three algorithms feed it directly.
//! Class priors are class frequencies; likelihoods are smoothed per
//! feature with `alpha`.

use crate::corpus::Code;
use crate::features::SparseVector;
use crate::preprocess::InstanceId;

use super::{argmax_first, Dataset, Learner, NbParams, Predictor, TrainError};

pub struct NaiveBayes {
    pub params: NbParams,
}

#[derive(Debug)]
pub struct NbModel {
    classes: Vec<Code>,
    log_prior: Vec<f64>,
    /// [class][feature] log likelihood; dense, finite by smoothing.
    log_likelihood: Vec<Vec<f64>>,
}

impl NaiveBayes {
    pub fn fit_model(&self, data: &Dataset) -> Result<NbModel, TrainError> {
        data.validate_for_training()?;
        if !(self.params.alpha > 0.0) {
            return Err(TrainError::BadParams(format!(
                "nb alpha must be positive, got {}",
                self.params.alpha
            )));
        }
        let alpha = self.params.alpha;
        let n_classes = data.classes.len();
        let dim = data.dim;

        let mut class_counts = vec![0usize; n_classes];
        let mut feature_mass = vec![vec![0.0f64; dim]; n_classes];
        let mut class_mass = vec![0.0f64; n_classes];
        for p in &data.points {
            let ci = data.class_index(p.label).expect("label in class set");
            class_counts[ci] += 1;
            for (idx, w) in p.vector.iter() {
                feature_mass[ci][idx as usize] += w;
                class_mass[ci] += w;
            }
        }

        let n = data.len() as f64;
        let log_prior = class_counts
            .iter()
            .map(|&c| (c as f64 / n).ln())
            .collect();
        let log_likelihood = (0..n_classes)
            .map(|ci| {
                let denom = class_mass[ci] + alpha * dim as f64;
                feature_mass[ci]
                    .iter()
                    .map(|&s| ((s + alpha) / denom).ln())
                    .collect()
            })
            .collect();

        Ok(NbModel {
            classes: data.classes.clone(),
            log_prior,
            log_likelihood,
        })
    }
}

impl Learner for NaiveBayes {
    fn name(&self) -> &str {
        "nb"
    }

    fn fit(&self, data: &Dataset, _seed: u64) -> Result<Box<dyn Predictor>, TrainError> {
        Ok(Box::new(self.fit_model(data)?))
    }
}

impl NbModel {
    fn log_joint(&self, vector: &SparseVector) -> Vec<f64> {
        self.log_prior
            .iter()
            .enumerate()
            .map(|(ci, &lp)| {
                lp + vector
                    .iter()
                    .map(|(idx, w)| w * self.log_likelihood[ci][idx as usize])
                    .sum::<f64>()
            })
            .collect()
    }

    /// Debug text serialization of the model tables. Not a stable format.
    pub fn dump(&self) -> String {
        let mut out = String::from("model: naive-bayes\n");
        for (ci, class) in self.classes.iter().enumerate() {
            out.push_str(&format!(
                "class {class} log_prior {:.6}\n",
                self.log_prior[ci]
            ));
            let row: Vec<String> = self.log_likelihood[ci]
                .iter()
                .map(|v| format!("{v:.4}"))
                .collect();
            out.push_str(&format!("class {class} log_likelihood {}\n", row.join(" ")));
        }
        out
    }

    /// Normalized class posteriors (debug surface; sums to 1).
    pub fn posterior(&self, vector: &SparseVector) -> Vec<(Code, f64)> {
        let scores = self.log_joint(vector);
        let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
        let z: f64 = exps.iter().sum();
        self.classes
            .iter()
            .zip(exps)
            .map(|(&c, e)| (c, e / z))
            .collect()
    }
}

impl Predictor for NbModel {
    fn predict(&self, _id: &InstanceId, vector: &SparseVector) -> Code {
        let scores = self.log_joint(vector);
        self.classes[argmax_first(&scores)]
    }
}
