//! CART-style binary decision tree with impurity-decrease bookkeeping.

use ndarray::ArrayView1;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::rng::{stream, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Impurity {
    #[default]
    Gini,
    /// Shannon entropy in bits.
    Entropy,
}

impl Impurity {
    pub fn of_counts(self, counts: [usize; 2]) -> f64 {
        let n = (counts[0] + counts[1]) as f64;
        if n == 0.0 {
            return 0.0;
        }
        let p = [counts[0] as f64 / n, counts[1] as f64 / n];
        match self {
            Impurity::Gini => 1.0 - p[0] * p[0] - p[1] * p[1],
            Impurity::Entropy => -p
                .iter()
                .filter(|&&q| q > 0.0)
                .map(|&q| q * q.log2())
                .sum::<f64>(),
        }
    }
}

/// Denominator used for the child weights `p_L`, `p_R` in the impurity decrease.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitWeighting {
    /// `p_L = N_tL / N_t`. The importance sum then telescopes to
    /// `i(root) - sum p(leaf) i(leaf)`.
    #[default]
    NodeFraction,
    /// `p_L = N_tL / N`, with `N` the tree's training-sample count.
    GlobalFraction,
}

/// `i(t) - p_L i(t_L) - p_R i(t_R)`.
///
/// `None` when either child is empty (the split is rejected).
pub fn impurity_decrease(
    impurity: Impurity,
    weighting: SplitWeighting,
    left: [usize; 2],
    right: [usize; 2],
    n_total: usize,
) -> Option<f64> {
    let nl = left[0] + left[1];
    let nr = right[0] + right[1];
    if nl == 0 || nr == 0 {
        return None;
    }
    let parent = [left[0] + right[0], left[1] + right[1]];
    let denom = match weighting {
        SplitWeighting::NodeFraction => (nl + nr) as f64,
        SplitWeighting::GlobalFraction => n_total as f64,
    };
    Some(
        impurity.of_counts(parent)
            - nl as f64 / denom * impurity.of_counts(left)
            - nr as f64 / denom * impurity.of_counts(right),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    #[default]
    All,
    /// `max(1, floor(sqrt(D)))`.
    Sqrt,
    Count(usize),
}

impl MaxFeatures {
    pub fn resolve(self, d: usize) -> usize {
        match self {
            MaxFeatures::All => d,
            MaxFeatures::Sqrt => ((d as f64).sqrt().floor() as usize).max(1),
            MaxFeatures::Count(k) => k.clamp(1, d.max(1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub impurity: Impurity,
    pub max_features: MaxFeatures,
    pub weighting: SplitWeighting,
    pub seed: u64,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: None,
            min_samples_leaf: 1,
            impurity: Impurity::Gini,
            max_features: MaxFeatures::All,
            weighting: SplitWeighting::NodeFraction,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub feature: usize,
    /// Samples with `x[feature] <= threshold` go left.
    pub threshold: f64,
    pub left: usize,
    pub right: usize,
    pub decrease: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    /// Training samples reaching this node, counted with bootstrap multiplicity.
    pub counts: [usize; 2],
    /// `N_t / N`.
    pub weight: f64,
    pub impurity: f64,
    pub depth: usize,
    pub split: Option<Split>,
}

impl TreeNode {
    pub fn n_samples(&self) -> usize {
        self.counts[0] + self.counts[1]
    }

    /// Probability of class 1 at this node.
    pub fn proba(&self) -> f64 {
        self.counts[1] as f64 / self.n_samples() as f64
    }

    pub fn is_leaf(&self) -> bool {
        self.split.is_none()
    }
}

/// Arena-allocated tree; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
    pub n_features: usize,
    pub n_train: usize,
    pub params: TreeParams,
}

struct Builder<'a> {
    data: &'a Dataset,
    params: &'a TreeParams,
    n_total: usize,
    n_try: usize,
    rng: StreamRng,
    nodes: Vec<TreeNode>,
}

fn counts_of(y: &[usize], idx: &[usize]) -> [usize; 2] {
    let ones = idx.iter().filter(|&&i| y[i] == 1).count();
    [idx.len() - ones, ones]
}

struct Candidate {
    feature: usize,
    threshold: f64,
    decrease: f64,
    n_left: usize,
}

impl Builder<'_> {
    /// Best split on one feature: highest decrease, lowest threshold on ties.
    fn best_on_feature(&self, idx: &mut [usize], f: usize, counts: [usize; 2]) -> Option<Candidate> {
        let x = &self.data.x;
        let y = &self.data.y;
        idx.sort_by(|&a, &b| x[[a, f]].total_cmp(&x[[b, f]]).then(a.cmp(&b)));
        let min_leaf = self.params.min_samples_leaf.max(1);
        let n = idx.len();
        let mut left = [0usize; 2];
        let mut best: Option<Candidate> = None;
        for k in 0..n - 1 {
            left[y[idx[k]]] += 1;
            let (v, next) = (x[[idx[k], f]], x[[idx[k + 1], f]]);
            if v == next || k + 1 < min_leaf || n - k - 1 < min_leaf {
                continue;
            }
            let right = [counts[0] - left[0], counts[1] - left[1]];
            let Some(d) = impurity_decrease(self.params.impurity, self.params.weighting, left, right, self.n_total) else {
                continue;
            };
            if best.as_ref().is_none_or(|b| d > b.decrease) {
                let mid = v + (next - v) / 2.0;
                best = Some(Candidate {
                    feature: f,
                    threshold: if mid < next { mid } else { v },
                    decrease: d,
                    n_left: k + 1,
                });
            }
        }
        best
    }

    fn best_among(&self, idx: &mut [usize], features: &[usize], counts: [usize; 2]) -> Option<Candidate> {
        let mut best: Option<Candidate> = None;
        for &f in features {
            if let Some(c) = self.best_on_feature(idx, f, counts) {
                // features arrive in ascending order, so strict improvement keeps the lowest index
                if best.as_ref().is_none_or(|b| c.decrease > b.decrease) {
                    best = Some(c);
                }
            }
        }
        best
    }

    /// Evaluates `n_try` random features; if none of them can split the node,
    /// the remaining features are tried one at a time.
    fn choose_split(&mut self, idx: &mut [usize], counts: [usize; 2]) -> Option<Candidate> {
        let d = self.data.n_features();
        let mut order: Vec<usize> = (0..d).collect();
        if self.n_try < d {
            order.shuffle(&mut self.rng);
        }
        let (first, rest) = order.split_at(self.n_try.min(d));
        let mut batch = first.to_vec();
        batch.sort_unstable();
        let mut best = self.best_among(idx, &batch, counts);
        for &f in rest {
            if best.is_some() {
                break;
            }
            best = self.best_on_feature(idx, f, counts);
        }
        best
    }

    fn build(&mut self, idx: &mut [usize], depth: usize) -> usize {
        let counts = counts_of(&self.data.y, idx);
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            counts,
            weight: idx.len() as f64 / self.n_total as f64,
            impurity: self.params.impurity.of_counts(counts),
            depth,
            split: None,
        });
        let pure = counts[0] == 0 || counts[1] == 0;
        let at_depth = self.params.max_depth.is_some_and(|m| depth >= m);
        if pure || at_depth || idx.len() < 2 * self.params.min_samples_leaf.max(1) {
            return id;
        }
        let Some(c) = self.choose_split(idx, counts) else {
            return id;
        };
        // order idx by the chosen feature so the left block is a prefix
        let x = &self.data.x;
        idx.sort_by(|&a, &b| x[[a, c.feature]].total_cmp(&x[[b, c.feature]]).then(a.cmp(&b)));
        let (l, r) = idx.split_at_mut(c.n_left);
        let left = self.build(l, depth + 1);
        let right = self.build(r, depth + 1);
        self.nodes[id].split = Some(Split {
            feature: c.feature,
            threshold: c.threshold,
            left,
            right,
            // concavity makes this non-negative up to rounding
            decrease: c.decrease.max(0.0),
        });
        id
    }
}

/// Fits a tree on `sample` (row indices into `data`, repeats allowed).
pub fn train_tree_on(data: &Dataset, sample: &[usize], params: &TreeParams, rng: StreamRng) -> Result<DecisionTree> {
    if sample.is_empty() {
        return Err(Error::invalid("tree needs at least one sample"));
    }
    let mut idx = sample.to_vec();
    let mut b = Builder {
        data,
        params,
        n_total: idx.len(),
        n_try: params.max_features.resolve(data.n_features()),
        rng,
        nodes: Vec::new(),
    };
    b.build(&mut idx, 0);
    Ok(DecisionTree {
        nodes: b.nodes,
        n_features: data.n_features(),
        n_train: sample.len(),
        params: params.clone(),
    })
}

pub fn train_tree(data: &Dataset, params: &TreeParams) -> Result<DecisionTree> {
    data.check_trainable()?;
    let all: Vec<usize> = (0..data.n_samples()).collect();
    train_tree_on(data, &all, params, stream(params.seed, &[]))
}

impl DecisionTree {
    pub fn leaf_for(&self, row: ArrayView1<f64>) -> &TreeNode {
        let mut node = &self.nodes[0];
        while let Some(s) = &node.split {
            node = &self.nodes[if row[s.feature] <= s.threshold { s.left } else { s.right }];
        }
        node
    }

    /// Probability of class 1 for one row.
    pub fn predict_row(&self, row: ArrayView1<f64>) -> f64 {
        self.leaf_for(row).proba()
    }

    /// Per-feature sum of `p(t) * delta_i(s_t, t)` over internal nodes.
    pub fn importance_sums(&self) -> Vec<f64> {
        let mut imp = vec![0.0; self.n_features];
        for n in &self.nodes {
            if let Some(s) = &n.split {
                imp[s.feature] += n.weight * s.decrease;
            }
        }
        imp
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.is_leaf())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn decrease_hand_values() {
        let g = impurity_decrease(Impurity::Gini, SplitWeighting::NodeFraction, [4, 0], [0, 4], 8);
        assert_eq!(g, Some(0.5));
        let e = impurity_decrease(Impurity::Entropy, SplitWeighting::GlobalFraction, [4, 0], [0, 4], 8);
        assert_eq!(e, Some(1.0));
        assert_eq!(
            impurity_decrease(Impurity::Gini, SplitWeighting::NodeFraction, [3, 0], [0, 0], 3),
            None
        );
        for w in [SplitWeighting::NodeFraction, SplitWeighting::GlobalFraction] {
            assert_eq!(impurity_decrease(Impurity::Gini, w, [2, 0], [3, 0], 5), Some(0.0));
        }
    }

    #[test]
    fn global_weighting_scales_children_by_n() {
        // node of 4 inside a tree of 8: 0.5 - (2/8)*0 - (2/8)*0
        let g = impurity_decrease(Impurity::Gini, SplitWeighting::GlobalFraction, [2, 0], [0, 2], 8).unwrap();
        assert_eq!(g, 0.5);
        // impure children: 0.5 - (3/8)(4/9) - (1/8)(0)
        let g = impurity_decrease(Impurity::Gini, SplitWeighting::GlobalFraction, [1, 2], [1, 0], 8).unwrap();
        assert!((g - (0.5 - 3.0 / 8.0 * 4.0 / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn separable_one_dimensional() {
        let d = Dataset::unnamed(array![[1.0], [2.0], [3.0], [10.0], [11.0]], vec![0, 0, 0, 1, 1]).unwrap();
        let t = train_tree(&d, &TreeParams::default()).unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(t.nodes[0].split.as_ref().unwrap().threshold, 6.5);
        for (i, row) in d.x.rows().into_iter().enumerate() {
            assert_eq!(t.predict_row(row), d.y[i] as f64);
        }
    }

    #[test]
    fn xor_needs_depth_two() {
        let d = Dataset::unnamed(
            array![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]],
            vec![0, 1, 1, 0],
        )
        .unwrap();
        let t = train_tree(&d, &TreeParams { max_depth: Some(2), ..Default::default() }).unwrap();
        for (i, row) in d.x.rows().into_iter().enumerate() {
            assert_eq!(t.predict_row(row), d.y[i] as f64);
        }
        // zero-gain root split; ties resolved to feature 0
        assert_eq!(t.nodes[0].split.as_ref().unwrap().feature, 0);
    }

    #[test]
    fn constant_features_give_a_stump() {
        let d = Dataset::unnamed(array![[1.0], [1.0], [1.0]], vec![0, 1, 1]).unwrap();
        let t = train_tree(&d, &TreeParams::default()).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert!((t.nodes[0].proba() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn min_samples_leaf_respected() {
        let d = Dataset::unnamed(array![[1.0], [2.0], [3.0], [4.0]], vec![0, 1, 1, 1]).unwrap();
        let t = train_tree(&d, &TreeParams { min_samples_leaf: 2, ..Default::default() }).unwrap();
        assert!(t.leaves().all(|l| l.n_samples() >= 2));
    }
}
