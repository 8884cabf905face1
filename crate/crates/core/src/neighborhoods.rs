//! Segment-pair bit scores, divergence levels, the threshold curve, and the
//! neighbor / neighborhood / mutual-neighborhood structures built on them.

use std::collections::BTreeMap;
use std::fmt;

use crate::exec::Exec;
use crate::pairwise::{LocalAligner, LocalAlignment};
use crate::seq::InformativeView;
use crate::{Error, Result};

/// An informative segment: index `idx` into the informative segments of
/// sequence `seq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SegRef {
    pub seq: usize,
    pub idx: usize,
}

impl SegRef {
    pub fn new(seq: usize, idx: usize) -> Self {
        SegRef { seq, idx }
    }
}

impl fmt::Display for SegRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.seq, self.idx)
    }
}

/// What the later stages need to know about a segment without holding on to
/// the views.
#[derive(Debug, Clone, PartialEq)]
pub struct SegInfo {
    pub seg_type: String,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone)]
pub struct PairEntry {
    pub bits: f64,
    /// Local alignment with the lower-numbered sequence's segment as `x`.
    pub alignment: LocalAlignment,
}

/// `SEG(s, t)` and the underlying local alignment for every cross-sequence
/// pair of informative segments of equal type. Stored once per unordered pair.
#[derive(Debug, Clone, Default)]
pub struct SegmentPairScores {
    info: Vec<Vec<SegInfo>>,
    ids: Vec<String>,
    pairs: BTreeMap<(SegRef, SegRef), PairEntry>,
}

fn canonical(s: SegRef, t: SegRef) -> (SegRef, SegRef, bool) {
    if s <= t {
        (s, t, false)
    } else {
        (t, s, true)
    }
}

impl SegmentPairScores {
    pub fn num_sequences(&self) -> usize {
        self.info.len()
    }

    pub fn segments_of(&self, seq: usize) -> &[SegInfo] {
        &self.info[seq]
    }

    pub fn info(&self, s: SegRef) -> &SegInfo {
        &self.info[s.seq][s.idx]
    }

    pub fn seq_id(&self, seq: usize) -> &str {
        &self.ids[seq]
    }

    /// Human-readable segment name, `id:start-end`.
    pub fn label(&self, s: SegRef) -> String {
        let i = self.info(s);
        format!("{}:{}-{}", self.ids[s.seq], i.start, i.start + i.len)
    }

    pub fn all_segments(&self) -> impl Iterator<Item = SegRef> + '_ {
        self.info
            .iter()
            .enumerate()
            .flat_map(|(seq, segs)| (0..segs.len()).map(move |idx| SegRef { seq, idx }))
    }

    pub fn seg(&self, s: SegRef, t: SegRef) -> Option<f64> {
        let (a, b, _) = canonical(s, t);
        self.pairs.get(&(a, b)).map(|e| e.bits)
    }

    /// The stored local alignment oriented with `s` as `x` and `t` as `y`.
    pub fn alignment(&self, s: SegRef, t: SegRef) -> Option<LocalAlignment> {
        let (a, b, swapped) = canonical(s, t);
        let e = self.pairs.get(&(a, b))?;
        Some(if swapped {
            e.alignment.swapped()
        } else {
            e.alignment.clone()
        })
    }

    pub fn pairs(&self) -> impl Iterator<Item = (SegRef, SegRef, f64)> + '_ {
        self.pairs.iter().map(|(&(s, t), e)| (s, t, e.bits))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Aligns every cross-sequence pair of equal-type informative segments with `h`.
pub fn all_segment_pair_scores(views: &[InformativeView<'_>], h: &dyn LocalAligner, exec: Exec) -> SegmentPairScores {
    let info: Vec<Vec<SegInfo>> = views
        .iter()
        .map(|v| {
            v.segments
                .iter()
                .map(|s| SegInfo {
                    seg_type: s.seg_type.clone(),
                    start: s.start,
                    len: s.len(),
                })
                .collect()
        })
        .collect();

    let mut tasks = Vec::new();
    for i in 0..views.len() {
        for j in i + 1..views.len() {
            for (a, sa) in views[i].segments.iter().enumerate() {
                for (b, sb) in views[j].segments.iter().enumerate() {
                    if sa.seg_type == sb.seg_type {
                        tasks.push((SegRef::new(i, a), SegRef::new(j, b)));
                    }
                }
            }
        }
    }
    let aligned = exec.map(&tasks, |&(s, t)| {
        h.align(views[s.seq].residues(s.idx), views[t.seq].residues(t.idx))
    });
    let pairs = tasks
        .into_iter()
        .zip(aligned)
        .map(|(key, alignment)| {
            let bits = alignment.bit_score;
            (key, PairEntry { bits, alignment })
        })
        .collect();
    SegmentPairScores {
        info,
        ids: views.iter().map(|v| v.parent.id.clone()).collect(),
        pairs,
    }
}

/// Bits per aligned column of the best local alignment between two informative
/// sequences, clamped to `[0, 2]`. `None` when either sequence or the
/// alignment is empty.
pub fn divergence(view_i: &InformativeView<'_>, view_j: &InformativeView<'_>, h: &dyn LocalAligner) -> Option<f64> {
    if view_i.concatenated.is_empty() || view_j.concatenated.is_empty() {
        return None;
    }
    let al = h.align(&view_i.concatenated, &view_j.concatenated);
    if al.is_empty() {
        return None;
    }
    Some((al.bit_score / al.pairs.len() as f64).clamp(0.0, 2.0))
}

/// Symmetric matrix of divergence levels.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceMatrix {
    k: usize,
    values: Vec<f64>,
    pub diagnostics: Vec<String>,
}

impl DivergenceMatrix {
    /// Computes all pairs; empty alignments give 0 and a diagnostic.
    pub fn compute(views: &[InformativeView<'_>], h: &dyn LocalAligner, exec: Exec) -> Self {
        let k = views.len();
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        let vals = exec.map(&pairs, |&(i, j)| divergence(&views[i], &views[j], h));
        let mut m = DivergenceMatrix {
            k,
            values: vec![0.0; k * k],
            diagnostics: Vec::new(),
        };
        for (&(i, j), v) in pairs.iter().zip(vals) {
            let v = v.unwrap_or_else(|| {
                m.diagnostics.push(format!(
                    "no local alignment between the informative sequences of '{}' and '{}'; divergence set to 0",
                    views[i].parent.id, views[j].parent.id
                ));
                0.0
            });
            m.set(i, j, v);
        }
        m
    }

    pub fn from_fn(k: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = DivergenceMatrix {
            k,
            values: vec![0.0; k * k],
            diagnostics: Vec::new(),
        };
        for i in 0..k {
            for j in i + 1..k {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
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
}

/// Piecewise-linear map from divergence in `[0, 2]` to a per-residue bit
/// threshold. Linear between breakpoints, constant beyond the outermost ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCurve {
    points: Vec<(f64, f64)>,
}

impl Default for ThresholdCurve {
    /// `clamp(0.5 * d, 0.25, 1.0)`.
    fn default() -> Self {
        ThresholdCurve {
            points: vec![(0.0, 0.25), (0.5, 0.25), (2.0, 1.0)],
        }
    }
}

impl ThresholdCurve {
    /// Breakpoints must have strictly increasing `d`, finite non-negative
    /// values, and be non-decreasing in `c`.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidCurve("no breakpoints".into()));
        }
        for &(d, c) in &points {
            if !d.is_finite() || !c.is_finite() || c < 0.0 {
                return Err(Error::InvalidCurve(format!("bad breakpoint ({d}, {c})")));
            }
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidCurve(format!(
                    "breakpoints not strictly increasing at d = {}",
                    w[1].0
                )));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidCurve(format!(
                    "curve decreases between d = {} and d = {}",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(ThresholdCurve { points })
    }

    /// Parses `d<TAB>c` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::parse(n + 1, "expected two fields: d and c(d)"));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::parse(n + 1, format!("not a number: '{s}'")))
            };
            points.push((num(fields[0])?, num(fields[1])?));
        }
        ThresholdCurve::new(points)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, d: f64) -> Result<f64> {
        if !(0.0..=2.0).contains(&d) {
            return Err(Error::DivergenceOutOfDomain(d));
        }
        let p = &self.points;
        if d <= p[0].0 {
            return Ok(p[0].1);
        }
        for w in p.windows(2) {
            let ((d0, c0), (d1, c1)) = (w[0], w[1]);
            if d <= d1 {
                return Ok(c0 + (c1 - c0) * (d - d0) / (d1 - d0));
            }
        }
        Ok(p[p.len() - 1].1)
    }
}

/// Neighbor relations between informative segments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NeighborIndex {
    /// `Neighbor_j(s)`, keyed by `(s, j)`; only non-empty sets are stored.
    pub neighbors: BTreeMap<(SegRef, usize), Vec<SegRef>>,
    /// `Closest-neighbor_j(s)`, keyed by `(s, j)`.
    pub closest: BTreeMap<(SegRef, usize), SegRef>,
    /// `Neighborhood(s)` for every informative segment, sorted.
    pub neighborhood: BTreeMap<SegRef, Vec<SegRef>>,
    /// Per sequence, the informative-segment indices of its neighbor segments.
    pub nei_segments: Vec<Vec<usize>>,
    /// `Mutual-neighborhood(s, t)` for same-type neighbor segments of distinct
    /// sequences, keyed with `s < t`.
    pub mutual: BTreeMap<(SegRef, SegRef), Vec<SegRef>>,
}

impl NeighborIndex {
    pub fn neighbors_in(&self, s: SegRef, j: usize) -> &[SegRef] {
        self.neighbors.get(&(s, j)).map_or(&[], |v| v.as_slice())
    }

    pub fn neighborhood(&self, s: SegRef) -> &[SegRef] {
        self.neighborhood.get(&s).map_or(&[], |v| v.as_slice())
    }

    pub fn mutual_neighborhood(&self, s: SegRef, t: SegRef) -> &[SegRef] {
        let (a, b, _) = canonical(s, t);
        self.mutual.get(&(a, b)).map_or(&[], |v| v.as_slice())
    }

    pub fn is_neighbor_segment(&self, s: SegRef) -> bool {
        self.nei_segments[s.seq].binary_search(&s.idx).is_ok()
    }

    /// `Closest-mutual-neighbor_l(s, t)`: among segments of `l` that are
    /// neighbor segments and neighbors of both `s` and `t`, the one maximizing
    /// `SEG(s, u) + SEG(t, u)`; ties go to the smaller start.
    pub fn closest_mutual_neighbor(
        &self,
        scores: &SegmentPairScores,
        s: SegRef,
        t: SegRef,
        l: usize,
    ) -> Option<SegRef> {
        let ns = self.neighbors_in(s, l);
        let nt = self.neighbors_in(t, l);
        let mut best: Option<(f64, SegRef)> = None;
        for &u in ns {
            if nt.binary_search(&u).is_err() || !self.is_neighbor_segment(u) {
                continue;
            }
            let v = scores.seg(s, u).unwrap_or(0.0) + scores.seg(t, u).unwrap_or(0.0);
            // `ns` is in start order, so a strict comparison keeps the earliest tie
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, u));
            }
        }
        best.map(|(_, u)| u)
    }

    /// `Mutual-neighborhood(s, t)`: closest mutual neighbors over every third
    /// sequence, sorted.
    pub fn compute_mutual(&self, scores: &SegmentPairScores, s: SegRef, t: SegRef) -> Vec<SegRef> {
        (0..scores.num_sequences())
            .filter(|&l| l != s.seq && l != t.seq)
            .filter_map(|l| self.closest_mutual_neighbor(scores, s, t, l))
            .collect()
    }
}

/// Builds the neighbor structures from stored segment-pair scores.
pub fn build_neighbor_index(
    scores: &SegmentPairScores,
    div: &DivergenceMatrix,
    curve: &ThresholdCurve,
    exec: Exec,
) -> Result<NeighborIndex> {
    let k = scores.num_sequences();
    let mut idx = NeighborIndex {
        nei_segments: vec![Vec::new(); k],
        ..Default::default()
    };
    let mut is_nei: Vec<Vec<bool>> = (0..k).map(|i| vec![false; scores.segments_of(i).len()]).collect();

    for s in scores.all_segments() {
        let si = scores.info(s);
        let mut hood = Vec::new();
        for j in (0..k).filter(|&j| j != s.seq) {
            let bar = curve.eval(div.get(s.seq, j))? * si.len as f64;
            let mut found = Vec::new();
            let mut best: Option<(f64, SegRef)> = None;
            for (b, tj) in scores.segments_of(j).iter().enumerate() {
                if tj.seg_type != si.seg_type {
                    continue;
                }
                let t = SegRef::new(j, b);
                let Some(v) = scores.seg(s, t) else { continue };
                if v >= bar {
                    found.push(t);
                    is_nei[j][b] = true;
                    if best.is_none_or(|(bv, _)| v > bv) {
                        best = Some((v, t));
                    }
                }
            }
            if let Some((_, c)) = best {
                idx.closest.insert((s, j), c);
                hood.push(c);
            }
            if !found.is_empty() {
                idx.neighbors.insert((s, j), found);
            }
        }
        hood.sort();
        idx.neighborhood.insert(s, hood);
    }

    for (i, flags) in is_nei.iter().enumerate() {
        idx.nei_segments[i] = flags.iter().enumerate().filter_map(|(b, &f)| f.then_some(b)).collect();
    }

    let mut pairs = Vec::new();
    for (i, segs_i) in idx.nei_segments.iter().enumerate() {
        for (j, segs_j) in idx.nei_segments.iter().enumerate().skip(i + 1) {
            for &a in segs_i {
                for &b in segs_j {
                    let (s, t) = (SegRef::new(i, a), SegRef::new(j, b));
                    if scores.info(s).seg_type == scores.info(t).seg_type {
                        pairs.push((s, t));
                    }
                }
            }
        }
    }
    let mutual = exec.map(&pairs, |&(s, t)| idx.compute_mutual(scores, s, t));
    idx.mutual = pairs.into_iter().zip(mutual).collect();
    Ok(idx)
}
