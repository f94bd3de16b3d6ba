//! Binary decision tree with information-gain splits.
//!
//! Greedy top-down construction: at each node every threshold midway
//! between adjacent distinct values of each feature is a candidate, the
//! split maximizing entropy gain wins, and ties go to the lowest feature
//! index then the lowest threshold (by candidate scan order plus strict
//! improvement). A node stops splitting when pure, smaller than
//! 2 * min_leaf, or when no candidate leaves min_leaf instances on each
//! side with positive gain. Leaves keep their class counts.

use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { min_leaf: 2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// (class-0 count, class-1 count) of training instances here.
        counts: [usize; 2],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    /// Root at index 0.
    pub nodes: Vec<Node>,
}

fn entropy(n0: usize, n1: usize) -> f64 {
    let n = (n0 + n1) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let mut h = 0.0;
    for c in [n0, n1] {
        if c > 0 {
            let p = c as f64 / n;
            h -= p * p.log2();
        }
    }
    h
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

fn find_best_split(
    xs: &[Vec<f64>],
    ys: &[u8],
    indices: &[usize],
    min_leaf: usize,
) -> Option<BestSplit> {
    let n = indices.len();
    let n1: usize = indices.iter().filter(|&&i| ys[i] == 1).count();
    let n0 = n - n1;
    let parent = entropy(n0, n1);
    let n_features = xs[indices[0]].len();

    let mut best: Option<BestSplit> = None;
    let mut sorted: Vec<usize> = Vec::with_capacity(n);
    #[allow(clippy::needless_range_loop)] // feature indexes columns, not rows
    for feature in 0..n_features {
        sorted.clear();
        sorted.extend_from_slice(indices);
        sorted.sort_by(|&a, &b| {
            xs[a][feature]
                .partial_cmp(&xs[b][feature])
                .expect("features are finite")
        });
        let mut left0 = 0usize;
        let mut left1 = 0usize;
        for w in 0..n - 1 {
            let i = sorted[w];
            if ys[i] == 1 {
                left1 += 1;
            } else {
                left0 += 1;
            }
            let here = xs[i][feature];
            let next = xs[sorted[w + 1]][feature];
            if here == next {
                continue;
            }
            let left_n = left0 + left1;
            let right_n = n - left_n;
            if left_n < min_leaf || right_n < min_leaf {
                continue;
            }
            let gain = parent
                - (left_n as f64 / n as f64) * entropy(left0, left1)
                - (right_n as f64 / n as f64) * entropy(n0 - left0, n1 - left1);
            // Strict improvement keeps the first (lowest feature index,
            // lowest threshold) candidate on ties.
            if gain > best.as_ref().map_or(0.0, |b| b.gain) {
                best = Some(BestSplit {
                    feature,
                    threshold: (here + next) / 2.0,
                    gain,
                });
            }
        }
    }
    best
}

fn build(
    xs: &[Vec<f64>],
    ys: &[u8],
    indices: Vec<usize>,
    params: &TreeParams,
    nodes: &mut Vec<Node>,
) -> usize {
    let n1 = indices.iter().filter(|&&i| ys[i] == 1).count();
    let n0 = indices.len() - n1;
    let make_leaf = |nodes: &mut Vec<Node>| {
        nodes.push(Node::Leaf { counts: [n0, n1] });
        nodes.len() - 1
    };

    if n0 == 0 || n1 == 0 || indices.len() < 2 * params.min_leaf {
        return make_leaf(nodes);
    }
    let split = match find_best_split(xs, ys, &indices, params.min_leaf) {
        Some(s) if s.gain > 0.0 => s,
        _ => return make_leaf(nodes),
    };

    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
        .into_iter()
        .partition(|&i| xs[i][split.feature] <= split.threshold);

    let slot = nodes.len();
    nodes.push(Node::Leaf { counts: [0, 0] }); // placeholder
    let left = build(xs, ys, left_idx, params, nodes);
    let right = build(xs, ys, right_idx, params, nodes);
    nodes[slot] = Node::Split {
        feature: split.feature,
        threshold: split.threshold,
        left,
        right,
    };
    slot
}

pub fn fit(xs: &[Vec<f64>], ys: &[u8], params: &TreeParams) -> DecisionTree {
    let mut nodes = Vec::new();
    let indices: Vec<usize> = (0..xs.len()).collect();
    build(xs, ys, indices, params, &mut nodes);
    DecisionTree { nodes }
}

impl DecisionTree {
    /// Index of the leaf an instance lands in.
    pub fn leaf_index(&self, x: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { .. } => return at,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    /// Laplace-smoothed class-1 fraction of the instance's leaf.
    pub fn score(&self, x: &[f64]) -> f64 {
        match &self.nodes[self.leaf_index(x)] {
            Node::Leaf { counts } => (counts[1] + 1) as f64 / (counts[0] + counts[1] + 2) as f64,
            Node::Split { .. } => unreachable!("leaf_index returns a leaf"),
        }
    }

    /// Distinct feature indices used by split nodes.
    pub fn used_features(&self) -> BTreeSet<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Split { feature, .. } => Some(*feature),
                Node::Leaf { .. } => None,
            })
            .collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }
}
