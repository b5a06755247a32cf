//! Axis-aligned binary trees over integer features. A sample goes left when
//! `x[feature] <= threshold`.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{plurality, LabeledSample, CLASSES, FEATURES};
use crate::dataset::Features;
use crate::game::Outcome;

const EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
enum Node<L> {
    Leaf(L),
    Split {
        feature: u8,
        threshold: u8,
        left: u32,
        right: u32,
    },
}

#[derive(Clone, Debug)]
pub struct Tree<L> {
    nodes: Vec<Node<L>>,
}

impl<L: Copy> Tree<L> {
    pub fn eval(&self, x: &Features) -> L {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf(v) => return v,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if x[feature as usize] <= threshold {
                        left as usize
                    } else {
                        right as usize
                    }
                }
            }
        }
    }

    #[cfg(test)]
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    #[cfg(test)]
    pub fn depth(&self) -> usize {
        fn walk<L>(nodes: &[Node<L>], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf(_) => 0,
                Node::Split { left, right, .. } => {
                    1 + walk(nodes, left as usize).max(walk(nodes, right as usize))
                }
            }
        }
        walk(&self.nodes, 0)
    }

    fn push(&mut self, n: Node<L>) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn set_children(&mut self, at: usize, l: usize, r: usize) {
        if let Node::Split { left, right, .. } = &mut self.nodes[at] {
            *left = l as u32;
            *right = r as u32;
        }
    }
}

/// Weighted Gini impurity `m * (1 - sum p^2)` of a class histogram.
fn gini_mass(counts: &[usize; CLASSES]) -> f64 {
    let m: usize = counts.iter().sum();
    if m == 0 {
        return 0.0;
    }
    let sq: usize = counts.iter().map(|c| c * c).sum();
    m as f64 - sq as f64 / m as f64
}

struct ClassBuilder<'a, R> {
    samples: &'a [LabeledSample],
    max_depth: usize,
    mtry: usize,
    rng: &'a mut R,
    tree: Tree<Outcome>,
}

/// Gini CART classification tree on `samples[idx]` (`idx` may repeat
/// entries, as a bootstrap draw does). At each node features are visited in
/// random order until `mtry` non-constant ones have been scored.
pub fn fit_class_tree<R: Rng>(
    samples: &[LabeledSample],
    idx: Vec<usize>,
    max_depth: usize,
    mtry: usize,
    rng: &mut R,
) -> Tree<Outcome> {
    let mut b = ClassBuilder {
        samples,
        max_depth,
        mtry,
        rng,
        tree: Tree { nodes: Vec::new() },
    };
    b.grow(idx, 0);
    b.tree
}

impl<R: Rng> ClassBuilder<'_, R> {
    fn grow(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let mut counts = [0usize; CLASSES];
        for &i in &idx {
            counts[self.samples[i].y.index()] += 1;
        }
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let split = if pure || depth >= self.max_depth {
            None
        } else {
            self.best_split(&idx, &counts)
        };
        let Some((feature, threshold)) = split else {
            return self.tree.push(Node::Leaf(plurality(&counts)));
        };
        let at = self.tree.push(Node::Split {
            feature: feature as u8,
            threshold,
            left: 0,
            right: 0,
        });
        let (l, r): (Vec<usize>, Vec<usize>) = idx
            .into_iter()
            .partition(|&i| self.samples[i].x[feature] <= threshold);
        let l = self.grow(l, depth + 1);
        let r = self.grow(r, depth + 1);
        self.tree.set_children(at, l, r);
        at
    }

    fn best_split(&mut self, idx: &[usize], counts: &[usize; CLASSES]) -> Option<(usize, u8)> {
        let mut features: [usize; FEATURES] = std::array::from_fn(|f| f);
        features.shuffle(&mut *self.rng);
        let parent = gini_mass(counts);
        let mut best: Option<(f64, usize, u8)> = None;
        let mut scored = 0;
        for &f in &features {
            if scored >= self.mtry {
                break;
            }
            let mut col: Vec<(u8, usize)> = idx
                .iter()
                .map(|&i| (self.samples[i].x[f], self.samples[i].y.index()))
                .collect();
            col.sort_unstable();
            if col[0].0 == col[col.len() - 1].0 {
                continue;
            }
            scored += 1;
            let mut left = [0usize; CLASSES];
            for j in 0..col.len() - 1 {
                left[col[j].1] += 1;
                if col[j].0 == col[j + 1].0 {
                    continue;
                }
                let right: [usize; CLASSES] = std::array::from_fn(|c| counts[c] - left[c]);
                let score = gini_mass(&left) + gini_mass(&right);
                if score < parent - EPS && best.is_none_or(|(s, _, _)| score < s - EPS) {
                    best = Some((score, f, col[j].0));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }
}

struct RegBuilder<'a> {
    xs: &'a [Features],
    targets: &'a [f64],
    max_depth: usize,
    tree: Tree<f64>,
}

/// Least-squares regression tree of depth at most `max_depth` over all
/// features; leaves hold the mean target of their samples.
pub fn fit_reg_tree(xs: &[Features], targets: &[f64], max_depth: usize) -> Tree<f64> {
    let mut b = RegBuilder {
        xs,
        targets,
        max_depth,
        tree: Tree { nodes: Vec::new() },
    };
    b.grow((0..xs.len()).collect(), 0);
    b.tree
}

impl RegBuilder<'_> {
    fn grow(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let sum: f64 = idx.iter().map(|&i| self.targets[i]).sum();
        let n = idx.len() as f64;
        let split = if depth >= self.max_depth || idx.len() < 2 {
            None
        } else {
            self.best_split(&idx, sum)
        };
        let Some((feature, threshold)) = split else {
            let mean = if idx.is_empty() { 0.0 } else { sum / n };
            return self.tree.push(Node::Leaf(mean));
        };
        let at = self.tree.push(Node::Split {
            feature: feature as u8,
            threshold,
            left: 0,
            right: 0,
        });
        let (l, r): (Vec<usize>, Vec<usize>) = idx
            .into_iter()
            .partition(|&i| self.xs[i][feature] <= threshold);
        let l = self.grow(l, depth + 1);
        let r = self.grow(r, depth + 1);
        self.tree.set_children(at, l, r);
        at
    }

    /// Maximises `sumL^2/nL + sumR^2/nR`, which minimises the summed
    /// squared error of the two children.
    fn best_split(&self, idx: &[usize], sum: f64) -> Option<(usize, u8)> {
        let n = idx.len();
        let base = sum * sum / n as f64;
        let mut best: Option<(f64, usize, u8)> = None;
        for f in 0..FEATURES {
            let mut col: Vec<(u8, usize)> = idx.iter().map(|&i| (self.xs[i][f], i)).collect();
            col.sort_unstable();
            let mut left = 0.0;
            for j in 0..n - 1 {
                left += self.targets[col[j].1];
                if col[j].0 == col[j + 1].0 {
                    continue;
                }
                let nl = (j + 1) as f64;
                let nr = (n - j - 1) as f64;
                let right = sum - left;
                let score = left * left / nl + right * right / nr;
                if score > base + EPS && best.is_none_or(|(s, _, _)| score > s + EPS) {
                    best = Some((score, f, col[j].0));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }
}
