//! Progressive segment-level alignment along the guide tree, and assembly of
//! the residue-level MSA by laying out matched segment cores and stitching the
//! remaining residues in between.

use crate::exec::Exec;
use crate::guide_tree::GuideTree;
use crate::msa::Msa;
use crate::neighborhoods::{SegRef, SegmentPairScores};
use crate::pairwise::{global_align_residues, GapPenalties, ResidueAlignment, SubstitutionMatrix};
use crate::residue_profile::{align_residue_profiles, ResidueProfile};
use crate::scoring::SegmentScoreTable;
use crate::segment_align::nw_core;
use crate::seq::{AnnotatedSequence, GAP};
use crate::{Error, Result};

/// Segment-level alignment of several sequences: one row per member, each
/// entry a segment or a gap.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentProfile {
    /// Sequence indices, one per row.
    pub members: Vec<usize>,
    pub rows: Vec<Vec<Option<SegRef>>>,
}

impl SegmentProfile {
    pub fn singleton(member: usize, segments: &[SegRef]) -> Self {
        SegmentProfile {
            members: vec![member],
            rows: vec![segments.iter().map(|&s| Some(s)).collect()],
        }
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    /// Non-gap entries of column `c` as `(row, segment)`.
    pub fn column(&self, c: usize) -> Vec<(usize, SegRef)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| row[c].map(|s| (r, s)))
            .collect()
    }
}

fn column_type<'t>(p: &SegmentProfile, c: usize, table: &'t SegmentScoreTable) -> Result<&'t str> {
    let (_, s) = p
        .column(c)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Invariant(format!("profile column {c} is all gaps")))?;
    table
        .seg_type(s)
        .ok_or_else(|| Error::MissingScore(format!("type of {}", table.label(s))))
}

/// Segment NW between two profiles. Columns of equal type score the mean
/// `SCORE(s, t)` over cross pairs; a column against a gap scores minus the
/// mean `SCORE(s, -)` of its segments. Returns the merged profile and the DP
/// cells evaluated.
pub fn align_profiles(
    p: &SegmentProfile,
    q: &SegmentProfile,
    table: &SegmentScoreTable,
) -> Result<(SegmentProfile, u64)> {
    let gap_mean = |prof: &SegmentProfile, c: usize| -> Result<f64> {
        let col = prof.column(c);
        let mut sum = 0.0;
        for &(_, s) in &col {
            sum += table
                .gap(s)
                .ok_or_else(|| Error::MissingScore(format!("SCORE({}, -)", table.label(s))))?;
        }
        Ok(-sum / col.len() as f64)
    };
    let (n, m) = (p.width(), q.width());
    let gp = (0..n).map(|c| gap_mean(p, c)).collect::<Result<Vec<_>>>()?;
    let gq = (0..m).map(|c| gap_mean(q, c)).collect::<Result<Vec<_>>>()?;
    let tp = (0..n).map(|c| column_type(p, c, table)).collect::<Result<Vec<_>>>()?;
    let tq = (0..m).map(|c| column_type(q, c, table)).collect::<Result<Vec<_>>>()?;
    let mut pair = vec![None; n * m];
    for a in 0..n {
        let ca = p.column(a);
        for b in 0..m {
            if tp[a] != tq[b] {
                continue;
            }
            let cb = q.column(b);
            let mut sum = 0.0;
            for &(_, s) in &ca {
                for &(_, t) in &cb {
                    sum += table
                        .pair(s, t)
                        .ok_or_else(|| Error::MissingScore(format!("SCORE({}, {})", table.label(s), table.label(t))))?;
                }
            }
            pair[a * m + b] = Some(sum / (ca.len() * cb.len()) as f64);
        }
    }
    let path = nw_core(n, m, |a, b| pair[a * m + b], |a| gp[a], |b| gq[b]);

    let mut rows = Vec::with_capacity(p.rows.len() + q.rows.len());
    for r in &p.rows {
        rows.push(path.columns.iter().map(|&(a, _)| a.and_then(|a| r[a])).collect());
    }
    for r in &q.rows {
        rows.push(path.columns.iter().map(|&(_, b)| b.and_then(|b| r[b])).collect());
    }
    let mut members = p.members.clone();
    members.extend(&q.members);
    Ok((SegmentProfile { members, rows }, path.cells))
}

/// Merges the per-sequence neighbor segment lists along the guide tree.
/// Returns the root profile and the DP cells evaluated.
pub fn progressive_segment_msa(
    nei: &[Vec<SegRef>],
    tree: &GuideTree,
    table: &SegmentScoreTable,
) -> Result<(SegmentProfile, u64)> {
    let mut at: Vec<Option<SegmentProfile>> = vec![None; tree.nodes.len()];
    for (n, node) in tree.nodes.iter().enumerate() {
        if let Some(l) = node.leaf {
            at[n] = Some(SegmentProfile::singleton(l, &nei[l]));
        }
    }
    let mut cells = 0;
    for (n, l, r) in tree.postorder() {
        let (a, b) = (take(&mut at, l)?, take(&mut at, r)?);
        let (merged, c) = align_profiles(&a, &b, table)?;
        cells += c;
        at[n] = Some(merged);
    }
    take(&mut at, tree.root).map(|p| (p, cells))
}

fn take<T>(slots: &mut [Option<T>], i: usize) -> Result<T> {
    slots[i]
        .take()
        .ok_or_else(|| Error::Invariant(format!("guide tree node {i} visited twice")))
}

/// Aligns the residues between two matched segment columns of a pair.
pub fn stitch(a: &[u8], b: &[u8], matrix: &SubstitutionMatrix, gaps: GapPenalties) -> ResidueAlignment {
    global_align_residues(a, b, matrix, gaps)
}

/// Progressive residue alignment of one string per sequence along the guide
/// tree. Rows come back in sequence order, together with the DP cells used.
pub fn progressive_residue_msa(
    strings: &[&[u8]],
    tree: &GuideTree,
    matrix: &SubstitutionMatrix,
    gaps: GapPenalties,
) -> Result<(Vec<Vec<u8>>, u64)> {
    let mut at: Vec<Option<ResidueProfile>> = vec![None; tree.nodes.len()];
    for (n, node) in tree.nodes.iter().enumerate() {
        if let Some(l) = node.leaf {
            at[n] = Some(ResidueProfile::singleton(l, strings[l]));
        }
    }
    let mut cells = 0;
    for (n, l, r) in tree.postorder() {
        let (a, b) = (take(&mut at, l)?, take(&mut at, r)?);
        let merged = if a.width() == 0 || b.width() == 0 {
            let w = a.width().max(b.width());
            let mut rows = Vec::with_capacity(a.rows.len() + b.rows.len());
            for p in [&a, &b] {
                for row in &p.rows {
                    rows.push(if row.is_empty() { vec![GAP; w] } else { row.clone() });
                }
            }
            let mut members = a.members;
            members.extend(b.members);
            ResidueProfile { members, rows }
        } else {
            let (m, c) = align_residue_profiles(&a, &b, matrix, gaps);
            cells += c;
            m
        };
        at[n] = Some(merged);
    }
    let root = take(&mut at, tree.root)?;
    let mut rows = vec![Vec::new(); strings.len()];
    for (member, row) in root.members.into_iter().zip(root.rows) {
        rows[member] = row;
    }
    Ok((rows, cells))
}

/// Residue layout of one matched segment column.
#[derive(Debug, Clone)]
struct Core {
    width: usize,
    /// `(sequence, first residue, end residue, gapped row)` for members with a
    /// non-empty core.
    rows: Vec<(usize, usize, usize, Vec<u8>)>,
}

/// Star layout around the member whose segment has the largest total
/// `SEG` to the others. Residues paired in the stored local alignments with
/// that segment share columns; insertions relative to it get their own
/// columns, left-justified.
fn core_layout(entries: &[SegRef], seqs: &[AnnotatedSequence], scores: &SegmentPairScores) -> Result<Core> {
    let total = |s: SegRef| -> f64 {
        entries
            .iter()
            .filter(|&&t| t != s)
            .map(|&t| scores.seg(s, t).unwrap_or(0.0))
            .sum()
    };
    let mut center = entries[0];
    let mut best = total(center);
    for &s in &entries[1..] {
        let v = total(s);
        if v > best || (v == best && s < center) {
            best = v;
            center = s;
        }
    }
    let cstart = scores.info(center).start;
    let clen = scores.info(center).len;

    let mut members = Vec::new();
    for &t in entries.iter().filter(|&&t| t != center) {
        let al = scores.alignment(center, t).ok_or_else(|| {
            Error::Invariant(format!(
                "no stored alignment for matched segments {} and {}",
                scores.label(center),
                scores.label(t)
            ))
        })?;
        if !al.is_empty() {
            members.push((t, al));
        }
    }
    if members.is_empty() {
        return Ok(Core {
            width: 0,
            rows: Vec::new(),
        });
    }
    let cmin = members.iter().map(|(_, a)| a.x_start).min().unwrap_or(0);
    let cmax = members.iter().map(|(_, a)| a.x_end).max().unwrap_or(0);

    // per member: residue (segment-relative) placed on each center position,
    // and insertions after each center position
    let mut ins_w = vec![0usize; clen];
    let mut placed = Vec::with_capacity(members.len());
    for (t, al) in &members {
        let mut on = vec![None; clen];
        let mut ins: Vec<Vec<usize>> = vec![Vec::new(); clen];
        let mut last = None;
        for &(x, y) in &al.pairs {
            match (x, y) {
                (Some(x), Some(y)) => {
                    on[x] = Some(y);
                    last = Some(x);
                }
                (Some(x), None) => last = Some(x),
                (None, Some(y)) => {
                    let p = last.ok_or_else(|| Error::Invariant("local alignment starts with a gap".to_string()))?;
                    ins[p].push(y);
                }
                (None, None) => {}
            }
        }
        for p in 0..clen {
            ins_w[p] = ins_w[p].max(ins[p].len());
        }
        placed.push((*t, al, on, ins));
    }

    let mut offset = vec![0usize; clen];
    let mut width = 0;
    for p in cmin..cmax {
        offset[p] = width;
        width += 1 + ins_w[p];
    }

    let mut rows = Vec::with_capacity(entries.len());
    let cres = &seqs[center.seq].residues;
    let mut crow = vec![GAP; width];
    for p in cmin..cmax {
        crow[offset[p]] = cres[cstart + p];
    }
    rows.push((center.seq, cstart + cmin, cstart + cmax, crow));
    for (t, al, on, ins) in placed {
        let tstart = scores.info(t).start;
        let tres = &seqs[t.seq].residues;
        let mut row = vec![GAP; width];
        for p in cmin..cmax {
            if let Some(y) = on[p] {
                row[offset[p]] = tres[tstart + y];
            }
            for (q, &y) in ins[p].iter().enumerate() {
                row[offset[p] + 1 + q] = tres[tstart + y];
            }
        }
        rows.push((t.seq, tstart + al.y_start, tstart + al.y_end, row));
    }
    rows.sort_by_key(|r| r.0);
    Ok(Core { width, rows })
}

/// Output of [`assemble_msa`].
#[derive(Debug, Clone)]
pub struct Assembly {
    pub msa: Msa,
    /// Matched segment columns laid out as residue cores.
    pub anchors: usize,
    /// DP cells spent aligning the stitch regions.
    pub stitch_cells: u64,
}

/// Lays out the matched segment columns of `root` and aligns everything in
/// between. Columns with at least two segments are anchors. Each sequence's
/// residues outside its anchor cores go to the stitch region next to them:
/// leading residues to the region before its first anchor, residues between
/// two of its anchors to the region after the earlier one, and trailing
/// residues to the region after its last anchor. Each region is aligned by
/// progressive residue NW along `tree`.
#[allow(clippy::too_many_arguments)]
pub fn assemble_msa(
    root: &SegmentProfile,
    seqs: &[AnnotatedSequence],
    scores: &SegmentPairScores,
    tree: &GuideTree,
    matrix: &SubstitutionMatrix,
    gaps: GapPenalties,
    exec: Exec,
) -> Result<Assembly> {
    let k = seqs.len();
    let anchor_cols: Vec<Vec<SegRef>> = (0..root.width())
        .map(|c| root.column(c).into_iter().map(|(_, s)| s).collect::<Vec<_>>())
        .filter(|col| col.len() >= 2)
        .collect();
    let cores = exec
        .map(&anchor_cols, |col| core_layout(col, seqs, scores))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let n_anchors = cores.len();

    // per sequence: (anchor, start, end) of its non-empty cores
    let mut spans: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); k];
    for (a, core) in cores.iter().enumerate() {
        for &(seq, start, end, _) in &core.rows {
            spans[seq].push((a, start, end));
        }
    }

    // region r sits before anchor r; region n_anchors trails
    let mut regions: Vec<Vec<(usize, usize)>> = vec![vec![(0, 0); k]; n_anchors + 1];
    for (seq, sp) in spans.iter().enumerate() {
        let len = seqs[seq].len();
        if sp.is_empty() {
            regions[0][seq] = (0, len);
            continue;
        }
        let mut prev_end = 0;
        let mut target = sp[0].0;
        for &(a, start, end) in sp {
            if start < prev_end {
                return Err(Error::Invariant(format!(
                    "cores of '{}' are out of order",
                    seqs[seq].id
                )));
            }
            regions[target][seq] = (prev_end, start);
            prev_end = end;
            target = a + 1;
        }
        regions[target][seq] = (prev_end, len);
    }

    let aligned = exec.map(&regions, |reg| {
        let strings: Vec<&[u8]> = reg
            .iter()
            .enumerate()
            .map(|(seq, &(s, e))| &seqs[seq].residues[s..e])
            .collect();
        progressive_residue_msa(&strings, tree, matrix, gaps)
    });

    let mut rows = vec![Vec::new(); k];
    let mut stitch_cells = 0;
    for (r, block) in aligned.into_iter().enumerate() {
        let (block, cells) = block?;
        stitch_cells += cells;
        let w = block.iter().map(|b| b.len()).max().unwrap_or(0);
        for (seq, b) in block.into_iter().enumerate() {
            if b.is_empty() {
                rows[seq].extend(std::iter::repeat_n(GAP, w));
            } else {
                rows[seq].extend(b);
            }
        }
        if let Some(core) = cores.get(r) {
            let mut it = core.rows.iter().peekable();
            for (seq, row) in rows.iter_mut().enumerate() {
                match it.peek() {
                    Some(&&(s, _, _, ref cr)) if s == seq => {
                        row.extend_from_slice(cr);
                        it.next();
                    }
                    _ => row.extend(std::iter::repeat_n(GAP, core.width)),
                }
            }
        }
    }

    let msa = Msa {
        ids: seqs.iter().map(|s| s.id.clone()).collect(),
        rows,
    };
    msa.check_against(seqs)?;
    Ok(Assembly {
        msa,
        anchors: n_anchors,
        stitch_cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn seg(seq: usize, idx: usize) -> SegRef {
        SegRef::new(seq, idx)
    }

    #[test]
    fn singleton_profiles_reduce_to_pairwise() {
        let (a, b, c) = (seg(0, 0), seg(0, 1), seg(1, 0));
        let types = BTreeMap::from([(a, "H".into()), (b, "E".into()), (c, "E".into())]);
        let gaps = BTreeMap::from([(a, 1.0), (b, 2.0), (c, 2.0)]);
        let t = SegmentScoreTable::from_parts(types, [((b, c), 5.0)], gaps);
        let (p, _) = align_profiles(
            &SegmentProfile::singleton(0, &[a, b]),
            &SegmentProfile::singleton(1, &[c]),
            &t,
        )
        .unwrap();
        let pw = crate::segment_align::segment_nw(&[a, b], &[c], &t).unwrap();
        let cols: Vec<_> = (0..p.width()).map(|i| (p.rows[0][i], p.rows[1][i])).collect();
        assert_eq!(cols, pw.columns);
    }

    #[test]
    fn stitch_examples() {
        let m = SubstitutionMatrix::blosum62();
        let g = GapPenalties::default();
        let e = stitch(b"", b"", &m, g);
        assert!(e.is_empty());
        let s = stitch(b"GSGS", b"", &m, g);
        assert_eq!((s.top.as_slice(), s.bottom.as_slice()), (&b"GSGS"[..], &b"----"[..]));
        let k = stitch(b"KDEL", b"KDL", &m, g);
        assert_eq!(k.bottom, b"KD-L");
        assert_eq!(
            k.score,
            crate::pairwise::global_align_quadratic(b"KDEL", b"KDL", &m, g).score
        );
    }
}
