//! Neighbor-joining guide trees.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::segment_align::DistanceMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    /// Sequence index for leaves.
    pub leaf: Option<usize>,
    pub children: Option<(usize, usize)>,
    /// Length of the edge to the parent.
    pub length: f64,
}

/// A rooted binary tree over `k` sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct GuideTree {
    pub nodes: Vec<Node>,
    pub root: usize,
    pub names: Vec<String>,
}

impl GuideTree {
    pub fn num_leaves(&self) -> usize {
        self.names.len()
    }

    /// Internal nodes in merge order (children before parents), as
    /// `(node, left, right)`.
    pub fn postorder(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![(self.root, false)];
        while let Some((n, expanded)) = stack.pop() {
            if let Some((l, r)) = self.nodes[n].children {
                if expanded {
                    out.push((n, l, r));
                } else {
                    stack.push((n, true));
                    stack.push((r, false));
                    stack.push((l, false));
                }
            }
        }
        out
    }

    /// Sequence indices below `node`, in left-to-right order.
    pub fn leaves_under(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            match (self.nodes[n].leaf, self.nodes[n].children) {
                (Some(l), _) => out.push(l),
                (None, Some((a, b))) => {
                    stack.push(b);
                    stack.push(a);
                }
                (None, None) => {}
            }
        }
        out
    }

    /// Non-trivial splits of the unrooted tree, each given as the sorted side
    /// that excludes leaf 0.
    pub fn bipartitions(&self) -> BTreeSet<Vec<usize>> {
        let k = self.num_leaves();
        let mut out = BTreeSet::new();
        for n in 0..self.nodes.len() {
            if n == self.root {
                continue;
            }
            let mut side = self.leaves_under(n);
            side.sort_unstable();
            if side.binary_search(&0).is_ok() {
                side = (0..k).filter(|x| side.binary_search(x).is_err()).collect();
            }
            if side.len() >= 2 && side.len() <= k - 2 {
                out.insert(side);
            }
        }
        out
    }

    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        self.write_node(self.root, &mut out);
        out.push_str(";\n");
        out
    }

    fn write_node(&self, n: usize, out: &mut String) {
        let node = &self.nodes[n];
        match (node.leaf, node.children) {
            (Some(l), _) => out.push_str(&newick_label(&self.names[l])),
            (None, Some((a, b))) => {
                out.push('(');
                self.write_node(a, out);
                out.push(',');
                self.write_node(b, out);
                out.push(')');
            }
            (None, None) => {}
        }
        if n != self.root {
            let _ = write!(out, ":{:.6}", node.length);
        }
    }
}

fn newick_label(name: &str) -> String {
    if name.chars().any(|c| "()[]':;, \t".contains(c)) {
        format!("'{}'", name.replace('\'', "''"))
    } else {
        name.to_string()
    }
}

/// Saitou-Nei neighbor joining. Active clusters are ordered by their smallest
/// leaf name, and ties in the Q criterion go to the first pair in that order,
/// so the result does not depend on input order. The root sits at the
/// midpoint of the final edge; negative branch estimates are set to 0.
pub fn neighbor_joining(d: &DistanceMatrix, names: &[String]) -> Result<GuideTree> {
    let k = d.len();
    if k < 2 {
        return Err(Error::TooFewSequences { needed: 2, got: k });
    }
    if names.len() != k {
        return Err(Error::InvalidParameter(format!(
            "{} names for a {k}x{k} distance matrix",
            names.len()
        )));
    }
    for i in 0..k {
        for j in 0..k {
            let v = d.get(i, j);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!("distance ({i}, {j}) = {v}")));
            }
        }
    }

    let mut nodes: Vec<Node> = (0..k)
        .map(|l| Node {
            leaf: Some(l),
            children: None,
            length: 0.0,
        })
        .collect();
    // node distances, grown as clusters are created
    let total = 2 * k - 1;
    let mut dist = vec![0.0f64; total * total];
    for i in 0..k {
        for j in 0..k {
            dist[i * total + j] = d.get(i, j);
        }
    }
    // (key, node), kept sorted by key
    let mut active: Vec<(String, usize)> = (0..k).map(|i| (names[i].clone(), i)).collect();
    active.sort();

    while active.len() > 2 {
        let r = active.len();
        let row_sum: Vec<f64> = active
            .iter()
            .map(|&(_, a)| active.iter().map(|&(_, b)| dist[a * total + b]).sum())
            .collect();
        let mut best = (f64::INFINITY, 0, 0);
        for x in 0..r {
            for y in x + 1..r {
                let (a, b) = (active[x].1, active[y].1);
                let q = (r - 2) as f64 * dist[a * total + b] - row_sum[x] - row_sum[y];
                if q < best.0 {
                    best = (q, x, y);
                }
            }
        }
        let (_, x, y) = best;
        let (a, b) = (active[x].1, active[y].1);
        let dab = dist[a * total + b];
        let la = dab / 2.0 + (row_sum[x] - row_sum[y]) / (2.0 * (r - 2) as f64);
        let lb = dab - la;
        nodes[a].length = la.max(0.0);
        nodes[b].length = lb.max(0.0);
        let u = nodes.len();
        nodes.push(Node {
            leaf: None,
            children: Some((a, b)),
            length: 0.0,
        });
        for &(_, c) in &active {
            if c != a && c != b {
                let v = (dist[a * total + c] + dist[b * total + c] - dab) / 2.0;
                dist[u * total + c] = v;
                dist[c * total + u] = v;
            }
        }
        let key = active[x].0.clone();
        active.remove(y);
        active.remove(x);
        let pos = active.partition_point(|(kk, _)| *kk < key);
        active.insert(pos, (key, u));
    }

    let (a, b) = (active[0].1, active[1].1);
    let half = (dist[a * total + b] / 2.0).max(0.0);
    nodes[a].length = half;
    nodes[b].length = half;
    let root = nodes.len();
    nodes.push(Node {
        leaf: None,
        children: Some((a, b)),
        length: 0.0,
    });
    Ok(GuideTree {
        nodes,
        root,
        names: names.to_vec(),
    })
}
