//! Linear soft-margin SVM, one-vs-one with pairwise-win voting.
//!
//! Each unordered class pair gets a binary classifier minimizing
//! `0.5*||w||^2 + C * sum(max(0, 1 - y*(w.x + b))^2)` by gradient descent
//! with Armijo backtracking. Only improving steps are accepted, so the
//! recorded per-epoch objective is non-increasing by construction, and
//! the whole procedure is deterministic without any random state.

use crate::corpus::Code;
use crate::features::SparseVector;
use crate::preprocess::InstanceId;

use super::{argmax_first, Dataset, Learner, Predictor, SvmParams, TrainError};

pub struct LinearSvm {
    pub params: SvmParams,
}

#[derive(Debug, Clone)]
pub struct PairClassifier {
    /// Index (into the model's class list) voted on non-negative margin.
    pos: usize,
    neg: usize,
    w: Vec<f64>,
    bias: f64,
    /// Objective value at epoch 0 and after each accepted step.
    objective_trace: Vec<f64>,
}

impl PairClassifier {
    pub fn objective_trace(&self) -> &[f64] {
        &self.objective_trace
    }

    pub fn decision(&self, vector: &SparseVector) -> f64 {
        vector.dot_dense(&self.w) + self.bias
    }
}

#[derive(Debug)]
pub struct SvmModel {
    classes: Vec<Code>,
    pairs: Vec<PairClassifier>,
}

impl SvmModel {
    pub fn pairs(&self) -> &[PairClassifier] {
        &self.pairs
    }

    /// Debug text serialization of the pairwise weights. Not a stable
    /// format.
    pub fn dump(&self) -> String {
        let mut out = String::from("model: linear-svm (one-vs-one)\n");
        for pair in &self.pairs {
            out.push_str(&format!(
                "pair {} vs {} bias {:.6} epochs {}\n",
                self.classes[pair.pos],
                self.classes[pair.neg],
                pair.bias,
                pair.objective_trace.len()
            ));
            let nonzero: Vec<String> = pair
                .w
                .iter()
                .enumerate()
                .filter(|(_, w)| **w != 0.0)
                .map(|(i, w)| format!("f{i}:{w:.4}"))
                .collect();
            out.push_str(&format!("  w {}\n", nonzero.join(" ")));
        }
        out
    }
}

fn objective(points: &[(&SparseVector, f64)], w: &[f64], bias: f64, c: f64) -> f64 {
    let reg: f64 = 0.5 * w.iter().map(|x| x * x).sum::<f64>();
    let loss: f64 = points
        .iter()
        .map(|(x, y)| {
            let margin = 1.0 - y * (x.dot_dense(w) + bias);
            if margin > 0.0 {
                margin * margin
            } else {
                0.0
            }
        })
        .sum();
    reg + c * loss
}

fn train_pair(
    points: &[(&SparseVector, f64)],
    dim: usize,
    params: &SvmParams,
) -> (Vec<f64>, f64, Vec<f64>) {
    let c = params.c;
    let mut w = vec![0.0f64; dim];
    let mut bias = 0.0f64;
    let mut obj = objective(points, &w, bias, c);
    let mut trace = vec![obj];
    let mut step = 1.0f64;

    let mut grad_w = vec![0.0f64; dim];
    for _ in 0..params.max_epochs {
        grad_w.copy_from_slice(&w);
        let mut grad_b = 0.0f64;
        for (x, y) in points {
            let margin = 1.0 - y * (x.dot_dense(&w) + bias);
            if margin > 0.0 {
                let coef = -2.0 * c * margin * y;
                for (idx, v) in x.iter() {
                    grad_w[idx as usize] += coef * v;
                }
                grad_b += coef;
            }
        }
        let gnorm2 =
            grad_w.iter().map(|g| g * g).sum::<f64>() + grad_b * grad_b;
        if gnorm2 <= 1e-18 {
            break;
        }

        let mut accepted = false;
        while step >= 1e-18 {
            let trial_w: Vec<f64> = w
                .iter()
                .zip(&grad_w)
                .map(|(wi, gi)| wi - step * gi)
                .collect();
            let trial_b = bias - step * grad_b;
            let trial_obj = objective(points, &trial_w, trial_b, c);
            if trial_obj <= obj - 1e-4 * step * gnorm2 {
                w = trial_w;
                bias = trial_b;
                let prev = obj;
                obj = trial_obj;
                trace.push(obj);
                accepted = true;
                if prev - obj <= params.tol * prev.max(1.0) {
                    return (w, bias, trace);
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        step *= 2.0;
    }
    (w, bias, trace)
}

impl LinearSvm {
    pub fn fit_model(&self, data: &Dataset) -> Result<SvmModel, TrainError> {
        data.validate_for_training()?;
        let p = &self.params;
        if !(p.c > 0.0) || !(p.tol > 0.0) || p.max_epochs == 0 {
            return Err(TrainError::BadParams(
                "svm requires c > 0, tol > 0, max_epochs >= 1".into(),
            ));
        }

        let mut pairs = Vec::new();
        for pos in 0..data.classes.len() {
            for neg in pos + 1..data.classes.len() {
                let subset: Vec<(&SparseVector, f64)> = data
                    .points
                    .iter()
                    .filter_map(|dp| {
                        if dp.label == data.classes[pos] {
                            Some((&dp.vector, 1.0))
                        } else if dp.label == data.classes[neg] {
                            Some((&dp.vector, -1.0))
                        } else {
                            None
                        }
                    })
                    .collect();
                let (w, bias, objective_trace) = train_pair(&subset, data.dim, p);
                pairs.push(PairClassifier {
                    pos,
                    neg,
                    w,
                    bias,
                    objective_trace,
                });
            }
        }

        Ok(SvmModel {
            classes: data.classes.clone(),
            pairs,
        })
    }
}

impl Learner for LinearSvm {
    fn name(&self) -> &str {
        "svm"
    }

    fn fit(&self, data: &Dataset, _seed: u64) -> Result<Box<dyn Predictor>, TrainError> {
        Ok(Box::new(self.fit_model(data)?))
    }
}

impl Predictor for SvmModel {
    fn predict(&self, _id: &InstanceId, vector: &SparseVector) -> Code {
        let mut wins = vec![0.0f64; self.classes.len()];
        for pair in &self.pairs {
            if pair.decision(vector) >= 0.0 {
                wins[pair.pos] += 1.0;
            } else {
                wins[pair.neg] += 1.0;
            }
        }
        self.classes[argmax_first(&wins)]
    }
}
