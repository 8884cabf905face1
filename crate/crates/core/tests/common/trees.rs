//! Random additive trees for neighbor-joining checks.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use segmsa::segment_align::DistanceMatrix;

/// Random unrooted binary tree by leaf insertion on a random edge; returns
/// edges `(u, v, length)` with leaves `0..k`.
pub fn random_tree(k: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize, f64)> {
    let len = |rng: &mut ChaCha8Rng| rng.gen_range(0.05..1.0);
    let mut next = k;
    let mut edges = vec![(0, next, len(rng)), (1, next, len(rng)), (2, next, len(rng))];
    next += 1;
    for leaf in 3..k {
        let e = rng.gen_range(0..edges.len());
        let (u, v, w) = edges.swap_remove(e);
        let mid = next;
        next += 1;
        let f = rng.gen_range(0.1..0.9);
        edges.push((u, mid, w * f));
        edges.push((mid, v, w * (1.0 - f)));
        edges.push((leaf, mid, len(rng)));
    }
    edges
}

pub fn tree_distances(k: usize, edges: &[(usize, usize, f64)]) -> DistanceMatrix {
    let nodes = edges.iter().map(|e| e.0.max(e.1)).max().unwrap() + 1;
    let mut adj = vec![Vec::new(); nodes];
    for &(u, v, w) in edges {
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    let mut d = vec![vec![0.0; k]; k];
    for (i, row) in d.iter_mut().enumerate() {
        let mut dist = vec![f64::NAN; nodes];
        dist[i] = 0.0;
        let mut stack = vec![i];
        while let Some(u) = stack.pop() {
            for &(v, w) in &adj[u] {
                if dist[v].is_nan() {
                    dist[v] = dist[u] + w;
                    stack.push(v);
                }
            }
        }
        row.copy_from_slice(&dist[..k]);
    }
    DistanceMatrix::from_fn(k, |i, j| d[i][j])
}

/// Leaf sets cut off by internal edges, as the side without leaf 0.
pub fn true_splits(k: usize, edges: &[(usize, usize, f64)]) -> BTreeSet<Vec<usize>> {
    let nodes = edges.iter().map(|e| e.0.max(e.1)).max().unwrap() + 1;
    let mut out = BTreeSet::new();
    for (skip, &(u, _, _)) in edges.iter().enumerate() {
        let mut adj = vec![Vec::new(); nodes];
        for (e, &(a, b, _)) in edges.iter().enumerate() {
            if e != skip {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut seen = vec![false; nodes];
        seen[u] = true;
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        let side: Vec<usize> = if seen[0] {
            (0..k).filter(|&l| !seen[l]).collect()
        } else {
            (0..k).filter(|&l| seen[l]).collect()
        };
        if side.len() >= 2 && side.len() <= k - 2 {
            out.insert(side);
        }
    }
    out
}
