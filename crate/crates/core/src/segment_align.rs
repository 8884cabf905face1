//! Global alignment over segments (Needleman-Wunsch with per-segment gap
//! scores) and the distance matrix derived from pairwise segment alignments.

use std::fmt::Write as _;

use crate::exec::Exec;
use crate::neighborhoods::SegRef;
use crate::scoring::SegmentScoreTable;
use crate::{Error, Result};

/// Result of the generic NW core: columns as indices into the two inputs.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct NwPath {
    pub columns: Vec<(Option<usize>, Option<usize>)>,
    pub score: f64,
    pub cells: u64,
}

/// Maximizes the column sum. `pair(i, j)` is `None` where a match is
/// forbidden; `gap_a(i)` / `gap_b(j)` are the (usually non-positive) scores of
/// putting `a_i` / `b_j` against a gap. On ties the traceback prefers a match,
/// then a `(gap, b_j)` column, then an `(a_i, gap)` column.
pub(crate) fn nw_core(
    n: usize,
    m: usize,
    pair: impl Fn(usize, usize) -> Option<f64>,
    gap_a: impl Fn(usize) -> f64,
    gap_b: impl Fn(usize) -> f64,
) -> NwPath {
    let w = m + 1;
    let mut h = vec![0.0f64; (n + 1) * w];
    for j in 1..=m {
        h[j] = h[j - 1] + gap_b(j - 1);
    }
    for i in 1..=n {
        h[i * w] = h[(i - 1) * w] + gap_a(i - 1);
        for j in 1..=m {
            let mut v = h[(i - 1) * w + j] + gap_a(i - 1);
            v = v.max(h[i * w + j - 1] + gap_b(j - 1));
            if let Some(p) = pair(i - 1, j - 1) {
                v = v.max(h[(i - 1) * w + j - 1] + p);
            }
            h[i * w + j] = v;
        }
    }

    let mut columns = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = h[i * w + j];
        if i > 0 && j > 0 {
            if let Some(p) = pair(i - 1, j - 1) {
                if h[(i - 1) * w + j - 1] + p == here {
                    columns.push((Some(i - 1), Some(j - 1)));
                    i -= 1;
                    j -= 1;
                    continue;
                }
            }
        }
        if j > 0 && (i == 0 || h[i * w + j - 1] + gap_b(j - 1) == here) {
            columns.push((None, Some(j - 1)));
            j -= 1;
        } else {
            columns.push((Some(i - 1), None));
            i -= 1;
        }
    }
    columns.reverse();
    NwPath {
        columns,
        score: h[n * w + m],
        cells: (n * m) as u64,
    }
}

/// A global segment alignment of two neighbor sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentAlignment {
    pub columns: Vec<(Option<SegRef>, Option<SegRef>)>,
    pub score: f64,
    /// DP cells evaluated.
    pub cells: u64,
}

/// Aligns two lists of neighbor segments. Equal-type pairs score
/// `SCORE(s, t)`, unequal types cannot match, and a segment against a gap
/// scores `-SCORE(s, -)`.
pub fn segment_nw(bi: &[SegRef], bj: &[SegRef], table: &SegmentScoreTable) -> Result<SegmentAlignment> {
    let missing = |what: String| Error::MissingScore(what);
    let type_of = |s: SegRef| {
        table
            .seg_type(s)
            .ok_or_else(|| missing(format!("type of {}", table.label(s))))
    };
    let gap_of = |s: SegRef| {
        table
            .gap(s)
            .map(|g| -g)
            .ok_or_else(|| missing(format!("SCORE({}, -)", table.label(s))))
    };
    let gi = bi.iter().map(|&s| gap_of(s)).collect::<Result<Vec<_>>>()?;
    let gj = bj.iter().map(|&t| gap_of(t)).collect::<Result<Vec<_>>>()?;
    let mut pair = vec![None; bi.len() * bj.len()];
    for (a, &s) in bi.iter().enumerate() {
        let ts = type_of(s)?;
        for (b, &t) in bj.iter().enumerate() {
            if ts == type_of(t)? {
                let v = table
                    .pair(s, t)
                    .ok_or_else(|| missing(format!("SCORE({}, {})", table.label(s), table.label(t))))?;
                pair[a * bj.len() + b] = Some(v);
            }
        }
    }
    let path = nw_core(bi.len(), bj.len(), |a, b| pair[a * bj.len() + b], |a| gi[a], |b| gj[b]);
    Ok(SegmentAlignment {
        columns: path
            .columns
            .into_iter()
            .map(|(a, b)| (a.map(|a| bi[a]), b.map(|b| bj[b])))
            .collect(),
        score: path.score,
        cells: path.cells,
    })
}

/// Segment alignments for every unordered pair of sequences, as `(i, j, alignment)`.
pub fn all_pairwise_segment_alignments(
    nei: &[Vec<SegRef>],
    table: &SegmentScoreTable,
    exec: Exec,
) -> Result<Vec<(usize, usize, SegmentAlignment)>> {
    let k = nei.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    exec.map(&pairs, |&(i, j)| segment_nw(&nei[i], &nei[j], table).map(|a| (i, j, a)))
        .into_iter()
        .collect()
}

/// Symmetric distance matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    k: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(k: usize) -> Self {
        DistanceMatrix {
            k,
            values: vec![0.0; k * k],
        }
    }

    pub fn from_fn(k: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut d = DistanceMatrix::new(k);
        for i in 0..k {
            for j in i + 1..k {
                d.set(i, j, f(i, j));
            }
        }
        d
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.k + j] = v;
        self.values[j * self.k + i] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.k + j]
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    /// Square PHYLIP layout: a count line, then one row per sequence.
    pub fn to_phylip(&self, names: &[String]) -> String {
        let mut out = format!("{}\n", self.k);
        for (i, name) in names.iter().enumerate().take(self.k) {
            let _ = write!(out, "{name:<10}");
            for j in 0..self.k {
                let _ = write!(out, " {:.6}", self.get(i, j));
            }
            out.push('\n');
        }
        out
    }
}

/// Turns similarity scores into distances: `D = 1 - max(G, 0) / M`, with `M`
/// the largest floored score. When `M` is zero every distance is 1 and a
/// diagnostic is returned.
pub fn build_distance_matrix(k: usize, scores: &[(usize, usize, f64)]) -> (DistanceMatrix, Option<String>) {
    let top = scores.iter().map(|&(_, _, g)| g.max(0.0)).fold(0.0, f64::max);
    let mut d = DistanceMatrix::new(k);
    if top <= 0.0 {
        for i in 0..k {
            for j in i + 1..k {
                d.set(i, j, 1.0);
            }
        }
        let note = (k > 1).then(|| "no positive segment alignment score; all distances set to 1".to_string());
        return (d, note);
    }
    for &(i, j, g) in scores {
        d.set(i, j, 1.0 - g.max(0.0) / top);
    }
    (d, None)
}
