//! Residue-level pairwise alignment: Smith-Waterman local alignment with affine
//! gaps, bit-score conversion, and linear-space global alignment.

mod global;
mod hirschberg;
mod local;
mod matrix;

pub use global::{global_align_quadratic, global_align_residues, ResidueAlignment};
pub use local::{LocalAligner, LocalAlignment, SmithWaterman};
pub use matrix::SubstitutionMatrix;

/// One alignment column: an index into each input, or `None` for a gap.
pub type Column = (Option<usize>, Option<usize>);

/// Affine gap costs, given as positive numbers. A gap of length `L` costs
/// `open + extend * L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapPenalties {
    pub open: i32,
    pub extend: i32,
}

impl GapPenalties {
    pub fn new(open: i32, extend: i32) -> Self {
        GapPenalties { open, extend }
    }

    #[inline]
    pub fn cost(&self, len: usize) -> i32 {
        if len == 0 {
            0
        } else {
            self.open + self.extend * len as i32
        }
    }
}

impl Default for GapPenalties {
    fn default() -> Self {
        GapPenalties { open: 11, extend: 1 }
    }
}

/// Karlin-Altschul parameters used to turn raw scores into bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KarlinAltschul {
    pub lambda: f64,
    pub log_k: f64,
}

impl Default for KarlinAltschul {
    /// Ungapped BLOSUM62 values.
    fn default() -> Self {
        KarlinAltschul {
            lambda: 0.3176,
            log_k: 0.134f64.ln(),
        }
    }
}

impl KarlinAltschul {
    pub fn bits(&self, raw_score: i32) -> f64 {
        bits(raw_score, self.lambda, self.log_k)
    }
}

/// `(lambda * raw - ln K) / ln 2`, floored at zero.
pub fn bits(raw_score: i32, lambda: f64, log_k: f64) -> f64 {
    ((lambda * raw_score as f64 - log_k) / std::f64::consts::LN_2).max(0.0)
}

/// Scores an alignment given as columns over `x` and `y`. Consecutive gap
/// columns in the same row form one gap run.
pub fn score_columns(columns: &[Column], x: &[u8], y: &[u8], matrix: &SubstitutionMatrix, gaps: GapPenalties) -> i32 {
    #[derive(PartialEq)]
    enum Run {
        None,
        InX,
        InY,
    }
    let mut score = 0;
    let mut run = Run::None;
    for col in columns {
        match *col {
            (Some(i), Some(j)) => {
                score += matrix.score(x[i], y[j]);
                run = Run::None;
            }
            (Some(_), None) => {
                score -= gaps.extend;
                if run != Run::InY {
                    score -= gaps.open;
                }
                run = Run::InY;
            }
            (None, Some(_)) => {
                score -= gaps.extend;
                if run != Run::InX {
                    score -= gaps.open;
                }
                run = Run::InX;
            }
            (None, None) => {}
        }
    }
    score
}
