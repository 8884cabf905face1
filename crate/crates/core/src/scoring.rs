//! Segment-level scores: `SCORE(s, t)` under the three pair schemes and
//! `SCORE(s, -)` under the two gap schemes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::exec::Exec;
use crate::neighborhoods::{NeighborIndex, SegRef, SegmentPairScores};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairScheme {
    Progressive,
    #[default]
    Linear,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GapScheme {
    Zero,
    #[default]
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScoringScheme {
    pub pair: PairScheme,
    pub gap: GapScheme,
}

impl FromStr for PairScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "progressive" => Ok(PairScheme::Progressive),
            "linear" => Ok(PairScheme::Linear),
            "quadratic" => Ok(PairScheme::Quadratic),
            _ => Err(Error::InvalidParameter(format!("unknown pair scheme '{s}'"))),
        }
    }
}

impl FromStr for GapScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zero" => Ok(GapScheme::Zero),
            "max" => Ok(GapScheme::Max),
            _ => Err(Error::InvalidParameter(format!("unknown gap scheme '{s}'"))),
        }
    }
}

/// `SCORE(s, t)`. The consistency schemes add `|MN|^p * sum(SEG(s,u) + SEG(t,u))`
/// over the mutual neighborhood `MN` to the direct score `SEG(s, t)`.
pub fn score_pair(
    s: SegRef,
    t: SegRef,
    scores: &SegmentPairScores,
    index: &NeighborIndex,
    scheme: PairScheme,
) -> Result<f64> {
    let (ts, tt) = (&scores.info(s).seg_type, &scores.info(t).seg_type);
    if ts != tt {
        return Err(Error::TypeMismatch(ts.clone(), tt.clone()));
    }
    let direct = scores
        .seg(s, t)
        .ok_or_else(|| Error::MissingScore(format!("SEG({}, {})", scores.label(s), scores.label(t))))?;
    let power = match scheme {
        PairScheme::Progressive => return Ok(direct),
        PairScheme::Linear => 1,
        PairScheme::Quadratic => 2,
    };
    let mn = index.mutual_neighborhood(s, t);
    let support: f64 = mn
        .iter()
        .map(|&u| scores.seg(s, u).unwrap_or(0.0) + scores.seg(t, u).unwrap_or(0.0))
        .sum();
    Ok(direct + (mn.len() as f64).powi(power) * support)
}

/// `SCORE(s, -)`: zero, or the best `SEG(s, t)` over the neighborhood of `s`.
pub fn score_gap(s: SegRef, scores: &SegmentPairScores, index: &NeighborIndex, scheme: GapScheme) -> f64 {
    match scheme {
        GapScheme::Zero => 0.0,
        GapScheme::Max => index
            .neighborhood(s)
            .iter()
            .filter_map(|&t| scores.seg(s, t))
            .fold(0.0, f64::max),
    }
}

/// Pair and gap scores for all neighbor segments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SegmentScoreTable {
    pair: BTreeMap<(SegRef, SegRef), f64>,
    gap: BTreeMap<SegRef, f64>,
    types: BTreeMap<SegRef, String>,
    labels: BTreeMap<SegRef, String>,
}

impl SegmentScoreTable {
    /// Fills the table for every same-type cross-sequence pair of neighbor
    /// segments.
    pub fn build(scores: &SegmentPairScores, index: &NeighborIndex, scheme: ScoringScheme, exec: Exec) -> Result<Self> {
        let mut table = SegmentScoreTable::default();
        for (seq, segs) in index.nei_segments.iter().enumerate() {
            for &idx in segs {
                let s = SegRef::new(seq, idx);
                table.types.insert(s, scores.info(s).seg_type.clone());
                table.labels.insert(s, scores.label(s));
                table.gap.insert(s, score_gap(s, scores, index, scheme.gap));
            }
        }
        let keys: Vec<(SegRef, SegRef)> = index.mutual.keys().copied().collect();
        let vals = exec.map(&keys, |&(s, t)| score_pair(s, t, scores, index, scheme.pair));
        for (key, v) in keys.into_iter().zip(vals) {
            table.pair.insert(key, v?);
        }
        Ok(table)
    }

    /// A table from explicit values; pairs are stored symmetrically.
    pub fn from_parts(
        types: BTreeMap<SegRef, String>,
        pair: impl IntoIterator<Item = ((SegRef, SegRef), f64)>,
        gap: BTreeMap<SegRef, f64>,
    ) -> Self {
        let labels = types.keys().map(|s| (*s, s.to_string())).collect();
        let pair = pair
            .into_iter()
            .map(|((s, t), v)| (if s <= t { (s, t) } else { (t, s) }, v))
            .collect();
        SegmentScoreTable {
            pair,
            gap,
            types,
            labels,
        }
    }

    pub fn pair(&self, s: SegRef, t: SegRef) -> Option<f64> {
        let key = if s <= t { (s, t) } else { (t, s) };
        self.pair.get(&key).copied()
    }

    pub fn gap(&self, s: SegRef) -> Option<f64> {
        self.gap.get(&s).copied()
    }

    pub fn seg_type(&self, s: SegRef) -> Option<&str> {
        self.types.get(&s).map(|t| t.as_str())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (SegRef, SegRef, f64)> + '_ {
        self.pair.iter().map(|(&(s, t), &v)| (s, t, v))
    }

    pub fn gaps(&self) -> impl Iterator<Item = (SegRef, f64)> + '_ {
        self.gap.iter().map(|(&s, &v)| (s, v))
    }

    pub fn label(&self, s: SegRef) -> String {
        self.labels.get(&s).cloned().unwrap_or_else(|| s.to_string())
    }

    /// `s_id<TAB>t_id<TAB>score` rows; gap scores use `-` as `t_id`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (s, t, v) in self.pairs() {
            let _ = writeln!(out, "{}\t{}\t{v:.6}", self.label(s), self.label(t));
        }
        for (s, v) in self.gaps() {
            let _ = writeln!(out, "{}\t-\t{v:.6}", self.label(s));
        }
        out
    }
}
