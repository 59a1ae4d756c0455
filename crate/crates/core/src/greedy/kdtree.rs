//! Static k-d tree with point deletion, used for nearest-exposed-neighbor
//! queries during Euclidean greedy matching.

use crate::geometry::{euclidean, Points};

const NONE: usize = usize::MAX;
const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone)]
struct Node {
    start: usize,
    end: usize,
    left: usize,
    right: usize,
    parent: usize,
    alive: usize,
    /// Bounding box, `dim` minima followed by `dim` maxima.
    bbox: Vec<f64>,
}

pub struct KdTree<'a> {
    points: &'a Points,
    order: Vec<usize>,
    nodes: Vec<Node>,
    leaf_of: Vec<usize>,
    alive: Vec<bool>,
}

/// Candidate neighbor ordered by distance, then by a caller-supplied tie key.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor<K> {
    pub dist: f64,
    pub tie: K,
    pub index: usize,
}

impl<'a> KdTree<'a> {
    pub fn new(points: &'a Points) -> Self {
        let n = points.len();
        let mut tree = Self {
            points,
            order: (0..n).collect(),
            nodes: Vec::new(),
            leaf_of: vec![NONE; n],
            alive: vec![true; n],
        };
        if n > 0 {
            tree.build(0, n, NONE);
        }
        tree
    }

    fn build(&mut self, start: usize, end: usize, parent: usize) -> usize {
        let dim = self.points.dim();
        let mut bbox = vec![f64::INFINITY; dim];
        bbox.extend(std::iter::repeat_n(f64::NEG_INFINITY, dim));
        for &p in &self.order[start..end] {
            for (k, &x) in self.points.row(p).iter().enumerate() {
                bbox[k] = bbox[k].min(x);
                bbox[dim + k] = bbox[dim + k].max(x);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            start,
            end,
            left: NONE,
            right: NONE,
            parent,
            alive: end - start,
            bbox,
        });
        if end - start <= LEAF_SIZE {
            for &p in &self.order[start..end] {
                self.leaf_of[p] = id;
            }
            return id;
        }
        let bbox = &self.nodes[id].bbox;
        let axis = (0..dim)
            .max_by(|&a, &b| (bbox[dim + a] - bbox[a]).total_cmp(&(bbox[dim + b] - bbox[b])))
            .unwrap_or(0);
        let mid = start + (end - start) / 2;
        let points = self.points;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            points.row(a)[axis].total_cmp(&points.row(b)[axis]).then(a.cmp(&b))
        });
        let left = self.build(start, mid, id);
        let right = self.build(mid, end, id);
        self.nodes[id].left = left;
        self.nodes[id].right = right;
        id
    }

    pub fn is_alive(&self, p: usize) -> bool {
        self.alive[p]
    }

    pub fn remove(&mut self, p: usize) {
        if !self.alive[p] {
            return;
        }
        self.alive[p] = false;
        let mut node = self.leaf_of[p];
        while node != NONE {
            self.nodes[node].alive -= 1;
            node = self.nodes[node].parent;
        }
    }

    /// Lower bound on the distance from `q` to any point inside the node's
    /// box. Uses the same per-coordinate arithmetic as [`euclidean`], so it
    /// never exceeds the computed distance of a contained point.
    fn box_bound(&self, node: usize, q: &[f64]) -> f64 {
        let dim = q.len();
        let bbox = &self.nodes[node].bbox;
        let mut s = 0.0;
        for (k, &x) in q.iter().enumerate() {
            let d = if x < bbox[k] {
                bbox[k] - x
            } else if x > bbox[dim + k] {
                x - bbox[dim + k]
            } else {
                0.0
            };
            s += d * d;
        }
        s.sqrt()
    }

    /// Nearest alive point to `query` other than itself, minimizing
    /// `(distance, tie(index))`.
    pub fn nearest<K, F>(&self, query: usize, tie: F) -> Option<Neighbor<K>>
    where
        K: PartialOrd + Copy,
        F: Fn(usize) -> K,
    {
        if self.nodes.is_empty() {
            return None;
        }
        let q = self.points.row(query);
        let mut best: Option<Neighbor<K>> = None;
        self.search(0, query, q, &tie, &mut best);
        best
    }

    fn search<K, F>(&self, node: usize, query: usize, q: &[f64], tie: &F, best: &mut Option<Neighbor<K>>)
    where
        K: PartialOrd + Copy,
        F: Fn(usize) -> K,
    {
        let nd = &self.nodes[node];
        if nd.alive == 0 {
            return;
        }
        if let Some(b) = best {
            if self.box_bound(node, q) > b.dist {
                return;
            }
        }
        if nd.left == NONE {
            for &p in &self.order[nd.start..nd.end] {
                if p == query || !self.alive[p] {
                    continue;
                }
                let cand = Neighbor {
                    dist: euclidean(q, self.points.row(p)),
                    tie: tie(p),
                    index: p,
                };
                let better = match best {
                    None => true,
                    Some(b) => cand.dist < b.dist || (cand.dist == b.dist && cand.tie < b.tie),
                };
                if better {
                    *best = Some(cand);
                }
            }
            return;
        }
        let (l, r) = (nd.left, nd.right);
        let (bl, br) = (self.box_bound(l, q), self.box_bound(r, q));
        let (first, second) = if bl <= br { (l, r) } else { (r, l) };
        self.search(first, query, q, tie, best);
        self.search(second, query, q, tie, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_with_removal() {
        let pts = Points::from_rows(&[vec![0.0], vec![1.0], vec![10.0], vec![11.0], vec![1.5]]).unwrap();
        let mut tree = KdTree::new(&pts);
        assert_eq!(tree.nearest(0, |i| i).unwrap().index, 1);
        tree.remove(1);
        assert_eq!(tree.nearest(0, |i| i).unwrap().index, 4);
        tree.remove(4);
        assert_eq!(tree.nearest(0, |i| i).unwrap().index, 2);
        tree.remove(2);
        tree.remove(3);
        assert!(tree.nearest(0, |i| i).is_none());
    }

    #[test]
    fn ties_follow_the_tie_key() {
        let pts = Points::from_rows(&[vec![0.0], vec![-1.0], vec![1.0]]).unwrap();
        let tree = KdTree::new(&pts);
        assert_eq!(tree.nearest(0, |i| i).unwrap().index, 1);
        assert_eq!(tree.nearest(0, std::cmp::Reverse).unwrap().index, 2);
    }

    #[test]
    fn matches_linear_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<Vec<f64>> = (0..300).map(|_| (0..3).map(|_| rng.gen::<f64>()).collect()).collect();
        let pts = Points::from_rows(&rows).unwrap();
        let mut tree = KdTree::new(&pts);
        for p in (0..300).step_by(3) {
            tree.remove(p);
        }
        for q in 0..300 {
            let got = tree.nearest(q, |i| i).unwrap();
            let want = (0..300)
                .filter(|&i| i != q && i % 3 != 0)
                .min_by(|&a, &b| pts.distance(q, a).total_cmp(&pts.distance(q, b)).then(a.cmp(&b)))
                .unwrap();
            assert_eq!(got.index, want);
        }
    }
}
