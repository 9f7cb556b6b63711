//! Random forest of CART-style trees on bootstrap resamples.
//!
//! Split contract, shared with any reference tree that wants to reproduce
//! it exactly: candidate features are drawn without replacement from the
//! tree's seeded stream and evaluated in ascending index order; candidate
//! thresholds are midpoints between consecutive distinct sorted feature
//! values, swept in ascending order; the split minimizing the
//! children's summed Gini impurity wins, with strictly-smaller-wins so
//! ties keep the lowest feature index and threshold. A node splits while
//! it is impure, within the depth budget, and some split leaves both
//! children at least `min_leaf` large.

use rand_chacha::ChaCha8Rng;

use crate::corpus::Code;
use crate::features::SparseVector;
use crate::preprocess::InstanceId;
use crate::seed;

use super::{argmax_first, Dataset, FeaturesPerSplit, Learner, Predictor, RfParams, TrainError};

pub struct RandomForest {
    pub params: RfParams,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        /// Class-count distribution at the leaf; the tree votes its
        /// argmax (earliest class on ties).
        counts: Vec<u32>,
    },
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
}

#[derive(Debug, Clone)]
pub struct Tree {
    nodes: Vec<Node>,
    root: u32,
}

impl Tree {
    fn classify(&self, vector: &SparseVector) -> usize {
        let mut at = self.root as usize;
        loop {
            match &self.nodes[at] {
                Node::Leaf { counts } => {
                    let as_f: Vec<f64> = counts.iter().map(|&c| f64::from(c)).collect();
                    return argmax_first(&as_f);
                }
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if vector.get(*feature) <= *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
            }
        }
    }

}

#[derive(Debug)]
pub struct ForestModel {
    classes: Vec<Code>,
    trees: Vec<Tree>,
}

impl ForestModel {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Debug text serialization of the tree structures. Not a stable
    /// format.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "model: random-forest\nclasses: {}\ntrees: {}\n",
            self.classes
                .iter()
                .map(|c| c.name())
                .collect::<Vec<_>>()
                .join(" "),
            self.trees.len()
        );
        for (t, tree) in self.trees.iter().enumerate() {
            out.push_str(&format!("tree {t} root {}\n", tree.root));
            for (i, node) in tree.nodes.iter().enumerate() {
                match node {
                    Node::Leaf { counts } => {
                        let c: Vec<String> = counts.iter().map(u32::to_string).collect();
                        out.push_str(&format!("  node {i} leaf [{}]\n", c.join(" ")));
                    }
                    Node::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    } => out.push_str(&format!(
                        "  node {i} split f{feature} <= {threshold:.6} -> {left} {right}\n"
                    )),
                }
            }
        }
        out
    }
}

struct TreeBuilder<'a> {
    points: &'a [(SparseVector, usize)],
    n_classes: usize,
    n_features: usize,
    features_per_split: usize,
    min_leaf: usize,
    max_depth: Option<u32>,
    rng: ChaCha8Rng,
    nodes: Vec<Node>,
}

/// `size - sum(counts^2)/size`: the node size times its Gini impurity.
fn gini_sum(counts: &[u32], size: usize) -> f64 {
    let size = size as f64;
    let sq: f64 = counts.iter().map(|&c| f64::from(c) * f64::from(c)).sum();
    size - sq / size
}

impl<'a> TreeBuilder<'a> {
    fn counts_of(&self, members: &[u32]) -> Vec<u32> {
        let mut counts = vec![0u32; self.n_classes];
        for &m in members {
            counts[self.points[m as usize].1] += 1;
        }
        counts
    }

    fn leaf(&mut self, counts: Vec<u32>) -> u32 {
        self.nodes.push(Node::Leaf { counts });
        (self.nodes.len() - 1) as u32
    }

    fn build(&mut self, members: Vec<u32>, depth: u32) -> u32 {
        let counts = self.counts_of(&members);
        let pure = counts.iter().any(|&c| c as usize == members.len());
        let depth_capped = self.max_depth.is_some_and(|d| depth >= d);
        if pure || depth_capped || members.len() < 2 * self.min_leaf {
            return self.leaf(counts);
        }

        let mut candidates =
            seed::sample_indices(self.n_features, self.features_per_split, &mut self.rng);
        candidates.sort_unstable();

        let mut best: Option<(f64, u32, f64)> = None; // (impurity, feature, threshold)
        let mut column: Vec<(f64, usize)> = Vec::with_capacity(members.len());
        for &f in &candidates {
            column.clear();
            for &m in &members {
                let (vector, class) = &self.points[m as usize];
                column.push((vector.get(f as u32), *class));
            }
            column.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).expect("finite values"));
            if column[0].0 == column[column.len() - 1].0 {
                continue;
            }
            let mut left = vec![0u32; self.n_classes];
            let mut right = counts.clone();
            for i in 0..column.len() - 1 {
                left[column[i].1] += 1;
                right[column[i].1] -= 1;
                if column[i].0 == column[i + 1].0 {
                    continue;
                }
                let left_size = i + 1;
                let right_size = column.len() - left_size;
                if left_size < self.min_leaf || right_size < self.min_leaf {
                    continue;
                }
                let impurity = gini_sum(&left, left_size) + gini_sum(&right, right_size);
                let threshold = (column[i].0 + column[i + 1].0) / 2.0;
                if best.map_or(true, |(b_imp, _, _)| impurity < b_imp - 1e-12) {
                    best = Some((impurity, f as u32, threshold));
                }
            }
        }

        let Some((_, feature, threshold)) = best else {
            return self.leaf(counts);
        };

        let (left_members, right_members): (Vec<u32>, Vec<u32>) = members
            .into_iter()
            .partition(|&m| self.points[m as usize].0.get(feature) <= threshold);

        let left = self.build(left_members, depth + 1);
        let right = self.build(right_members, depth + 1);
        self.nodes.push(Node::Split {
            feature,
            threshold,
            left,
            right,
        });
        (self.nodes.len() - 1) as u32
    }
}

impl RandomForest {
    pub fn fit_model(&self, data: &Dataset, seed_in: u64) -> Result<ForestModel, TrainError> {
        data.validate_for_training()?;
        let p = &self.params;
        if p.n_trees == 0 || p.min_leaf == 0 {
            return Err(TrainError::BadParams(
                "rf n_trees and min_leaf must be positive".into(),
            ));
        }
        let n_features = data.dim.max(1);
        let features_per_split = match p.features_per_split {
            FeaturesPerSplit::Sqrt => (n_features as f64).sqrt().ceil() as usize,
            FeaturesPerSplit::Fixed(m) => m,
        }
        .clamp(1, n_features);

        let points: Vec<(SparseVector, usize)> = data
            .points
            .iter()
            .map(|dp| {
                (
                    dp.vector.clone(),
                    data.class_index(dp.label).expect("label in class set"),
                )
            })
            .collect();
        let n = points.len();

        let trees = (0..p.n_trees)
            .map(|t| {
                let mut rng = seed::rng_for(p.seed, &[seed_in, t as u64]);
                let members: Vec<u32> = if p.bootstrap {
                    use rand::Rng;
                    (0..n).map(|_| rng.random_range(0..n) as u32).collect()
                } else {
                    (0..n as u32).collect()
                };
                let mut builder = TreeBuilder {
                    points: &points,
                    n_classes: data.classes.len(),
                    n_features,
                    features_per_split,
                    min_leaf: p.min_leaf,
                    max_depth: p.max_depth,
                    rng,
                    nodes: Vec::new(),
                };
                let root = builder.build(members, 0);
                Tree {
                    nodes: builder.nodes,
                    root,
                }
            })
            .collect();

        Ok(ForestModel {
            classes: data.classes.clone(),
            trees,
        })
    }
}

impl Learner for RandomForest {
    fn name(&self) -> &str {
        "rf"
    }

    fn fit(&self, data: &Dataset, seed_in: u64) -> Result<Box<dyn Predictor>, TrainError> {
        Ok(Box::new(self.fit_model(data, seed_in)?))
    }
}

impl Predictor for ForestModel {
    fn predict(&self, _id: &InstanceId, vector: &SparseVector) -> Code {
        let mut votes = vec![0.0f64; self.classes.len()];
        for tree in &self.trees {
            votes[tree.classify(vector)] += 1.0;
        }
        self.classes[argmax_first(&votes)]
    }
}
