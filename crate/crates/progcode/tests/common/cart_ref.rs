//! Reference CART classifier for the forest degeneration check.
//!
//! Implements the same split contract as the library's trees (ascending
//! feature order, ascending midpoint thresholds, children's summed Gini
//! impurity with strictly-smaller-wins, split while impure and a valid
//! split exists, majority leaves with earliest-index ties) over dense
//! rows, built as linked nodes rather than an arena.

pub enum RefNode {
    Leaf(usize),
    Split {
        feature: usize,
        threshold: f64,
        left: Box<RefNode>,
        right: Box<RefNode>,
    },
}

pub struct RefCart {
    root: RefNode,
}

fn class_counts(rows: &[(Vec<f64>, usize)], members: &[usize], n_classes: usize) -> Vec<u32> {
    let mut counts = vec![0u32; n_classes];
    for &m in members {
        counts[rows[m].1] += 1;
    }
    counts
}

fn majority(counts: &[u32]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate().skip(1) {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

fn impurity_sum(counts: &[u32], size: usize) -> f64 {
    let size = size as f64;
    let sq: f64 = counts.iter().map(|&c| f64::from(c) * f64::from(c)).sum();
    size - sq / size
}

fn grow(
    rows: &[(Vec<f64>, usize)],
    members: Vec<usize>,
    n_classes: usize,
    n_features: usize,
    min_leaf: usize,
) -> RefNode {
    let counts = class_counts(rows, &members, n_classes);
    let pure = counts.iter().any(|&c| c as usize == members.len());
    if pure || members.len() < 2 * min_leaf {
        return RefNode::Leaf(majority(&counts));
    }

    let mut best: Option<(f64, usize, f64)> = None;
    for feature in 0..n_features {
        let mut column: Vec<(f64, usize)> = members
            .iter()
            .map(|&m| (rows[m].0[feature], rows[m].1))
            .collect();
        column.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if column.first().map(|x| x.0) == column.last().map(|x| x.0) {
            continue;
        }
        let mut left = vec![0u32; n_classes];
        let mut right = counts.clone();
        for i in 0..column.len() - 1 {
            left[column[i].1] += 1;
            right[column[i].1] -= 1;
            if column[i].0 == column[i + 1].0 {
                continue;
            }
            let left_size = i + 1;
            let right_size = column.len() - left_size;
            if left_size < min_leaf || right_size < min_leaf {
                continue;
            }
            let score = impurity_sum(&left, left_size) + impurity_sum(&right, right_size);
            if best.map_or(true, |(b, _, _)| score < b - 1e-12) {
                best = Some((score, feature, (column[i].0 + column[i + 1].0) / 2.0));
            }
        }
    }

    let Some((_, feature, threshold)) = best else {
        return RefNode::Leaf(majority(&counts));
    };
    let (left_members, right_members): (Vec<usize>, Vec<usize>) = members
        .into_iter()
        .partition(|&m| rows[m].0[feature] <= threshold);
    RefNode::Split {
        feature,
        threshold,
        left: Box::new(grow(rows, left_members, n_classes, n_features, min_leaf)),
        right: Box::new(grow(rows, right_members, n_classes, n_features, min_leaf)),
    }
}

impl RefCart {
    pub fn train(rows: &[(Vec<f64>, usize)], n_classes: usize, min_leaf: usize) -> RefCart {
        let n_features = rows.first().map(|r| r.0.len()).unwrap_or(0);
        let members: Vec<usize> = (0..rows.len()).collect();
        RefCart {
            root: grow(rows, members, n_classes, n_features, min_leaf),
        }
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let mut node = &self.root;
        loop {
            match node {
                RefNode::Leaf(class) => return *class,
                RefNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if x[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }
}
