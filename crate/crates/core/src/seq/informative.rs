use super::{AnnotatedSequence, Segment};

/// The informative segments of a sequence and their concatenation.
#[derive(Debug, Clone)]
pub struct InformativeView<'a> {
    pub parent: &'a AnnotatedSequence,
    /// Surviving (and possibly merged) segments, in parent order.
    pub segments: Vec<Segment>,
    /// Residues of `segments` concatenated in order.
    pub concatenated: Vec<u8>,
    /// `index_map[p]` is the parent coordinate of `concatenated[p]`.
    pub index_map: Vec<usize>,
}

impl<'a> InformativeView<'a> {
    pub fn residues(&self, idx: usize) -> &'a [u8] {
        self.parent.segment_residues(&self.segments[idx])
    }

    /// The parent sequence with its decomposition replaced by the informative segments.
    pub fn to_annotated(&self) -> AnnotatedSequence {
        AnnotatedSequence {
            id: self.parent.id.clone(),
            residues: self.parent.residues.clone(),
            segments: self.segments.clone(),
        }
    }
}

/// Keeps segments with `weight >= alpha` and `len >= min_len`, then merges
/// consecutive survivors of the same type that are separated by fewer than
/// `merge_gap` residues. A merged segment spans the intervening residues and
/// carries the length-weighted mean weight of its parts.
pub fn classify_informative(
    seq: &AnnotatedSequence,
    alpha: f64,
    min_len: usize,
    merge_gap: usize,
) -> InformativeView<'_> {
    // (segment, sum of weight*len over parts, total part length)
    let mut merged: Vec<(Segment, f64, usize)> = Vec::new();
    for s in seq.segments.iter().filter(|s| s.weight >= alpha && s.len() >= min_len) {
        if let Some((last, wsum, plen)) = merged.last_mut() {
            if last.seg_type == s.seg_type && s.start - last.end < merge_gap {
                *wsum += s.weight * s.len() as f64;
                *plen += s.len();
                last.end = s.end;
                // the mean of parts can round below its smallest part
                last.weight = (*wsum / *plen as f64).max(last.weight.min(s.weight));
                continue;
            }
        }
        merged.push((s.clone(), s.weight * s.len() as f64, s.len()));
    }

    let segments: Vec<Segment> = merged.into_iter().map(|(s, _, _)| s).collect();
    let mut concatenated = Vec::new();
    let mut index_map = Vec::new();
    for s in &segments {
        concatenated.extend_from_slice(&seq.residues[s.start..s.end]);
        index_map.extend(s.start..s.end);
    }
    InformativeView {
        parent: seq,
        segments,
        concatenated,
        index_map,
    }
}
