//! Exact k-nearest-neighbour regression over privatized labels.

use super::Regressor;
use crate::domain::{check_unit, Points};
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const LEAF_SIZE: usize = 16;

/// Neighbour candidate, ordered by squared distance then sample index.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    dist2: f64,
    index: usize,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2.total_cmp(&other.dist2).then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: Box<Node>, right: Box<Node> },
}

/// Static kd-tree over a point set. Query results equal a linear scan
/// ranked by `(squared distance, index)`.
#[derive(Debug, Clone)]
pub struct KdTree {
    points: Points,
    order: Vec<usize>,
    root: Node,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl KdTree {
    pub fn new(points: Points) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        let root = Self::build(&points, &mut order, 0);
        Self { points, order, root }
    }

    fn build(points: &Points, order: &mut [usize], offset: usize) -> Node {
        let n = order.len();
        if n <= LEAF_SIZE {
            return Node::Leaf { start: offset, end: offset + n };
        }
        let dim = points.dim();
        let mut axis = 0;
        let mut widest = -1.0;
        for a in 0..dim {
            let (lo, hi) = order.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                let v = points.get(i)[a];
                (lo.min(v), hi.max(v))
            });
            if hi - lo > widest {
                widest = hi - lo;
                axis = a;
            }
        }
        if widest <= 0.0 {
            return Node::Leaf { start: offset, end: offset + n };
        }
        let mid = n / 2;
        order.select_nth_unstable_by(mid, |&i, &j| points.get(i)[axis].total_cmp(&points.get(j)[axis]));
        let value = points.get(order[mid])[axis];
        let (lo, hi) = order.split_at_mut(mid);
        Node::Split {
            axis,
            value,
            left: Box::new(Self::build(points, lo, offset)),
            right: Box::new(Self::build(points, hi, offset + mid)),
        }
    }

    pub fn points(&self) -> &Points {
        &self.points
    }

    /// Indices of the `k` nearest points to `x`, nearest first, ties by
    /// smaller index.
    pub fn nearest(&self, x: &[f64], k: usize) -> Vec<usize> {
        let k = k.min(self.points.len());
        let mut heap = BinaryHeap::with_capacity(k + 1);
        if k > 0 {
            self.search(&self.root, x, k, &mut heap);
        }
        heap.into_sorted_vec().into_iter().map(|c| c.index).collect()
    }

    fn search(&self, node: &Node, x: &[f64], k: usize, heap: &mut BinaryHeap<Candidate>) {
        match node {
            Node::Leaf { start, end } => {
                for &index in &self.order[*start..*end] {
                    let cand = Candidate { dist2: dist2(x, self.points.get(index)), index };
                    if heap.len() < k {
                        heap.push(cand);
                    } else if cand < *heap.peek().expect("heap is full") {
                        heap.pop();
                        heap.push(cand);
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = x[*axis] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.search(near, x, k, heap);
                // equal distance may still win on index, so only strict excess prunes
                let plane2 = diff * diff;
                if heap.len() < k || plane2 <= heap.peek().expect("heap is non-empty").dist2 {
                    self.search(far, x, k, heap);
                }
            }
        }
    }
}

/// Mean of privatized labels over the `k` nearest training features.
#[derive(Debug, Clone)]
pub struct KnnRegressor {
    k: usize,
    tree: KdTree,
    z: Vec<f64>,
}

/// Stores the training set; `k` must lie in `[1, N]`.
pub fn fit_knn_regressor(points: &Points, z: Vec<f64>, k: usize) -> Result<KnnRegressor> {
    if points.is_empty() {
        return Err(Error::param("points", "training set is empty"));
    }
    if points.len() != z.len() {
        return Err(Error::param("z", format!("{} labels for {} points", z.len(), points.len())));
    }
    if k == 0 || k > points.len() {
        return Err(Error::param("k", format!("must lie in [1, {}], got {k}", points.len())));
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("z", "labels must be finite"));
    }
    Ok(KnnRegressor { k, tree: KdTree::new(points.clone()), z })
}

impl KnnRegressor {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[f64] {
        &self.z
    }

    pub fn tree(&self) -> &KdTree {
        &self.tree
    }

    /// Neighbour indices used for `x`, nearest first.
    pub fn neighbors(&self, x: &[f64]) -> Result<Vec<usize>> {
        self.check(x)?;
        Ok(self.tree.nearest(x, self.k))
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        let dim = self.tree.points.dim();
        if x.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: x.len() });
        }
        x.iter().enumerate().try_for_each(|(a, &v)| check_unit(a, v))
    }
}

impl Regressor for KnnRegressor {
    fn dim(&self) -> usize {
        self.tree.points.dim()
    }

    fn predict_value(&self, x: &[f64]) -> Result<f64> {
        let sum: f64 = self.neighbors(x)?.iter().map(|&i| self.z[i]).sum();
        Ok(sum / self.k as f64)
    }
}
