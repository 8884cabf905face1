//! Sequences, typed and weighted segment decompositions, and the informative
//! view derived from them.

mod annotation;
mod fasta;
mod informative;

pub use annotation::{parse_segment_annotations, write_segment_annotations};
pub use fasta::{parse_fasta, write_fasta};
pub(crate) use fasta::{push_record, read_records};
pub use informative::{classify_informative, InformativeView};

/// The accepted residue alphabet: the twenty amino acids plus `X` for unknown.
pub const ALPHABET: &[u8; 21] = b"ACDEFGHIKLMNPQRSTVWYX";

/// Gap character used inside alignments. Never part of a sequence.
pub const GAP: u8 = b'-';

#[inline]
pub fn is_residue(b: u8) -> bool {
    matches!(
        b,
        b'A' | b'C'
            | b'D'
            | b'E'
            | b'F'
            | b'G'
            | b'H'
            | b'I'
            | b'K'
            | b'L'
            | b'M'
            | b'N'
            | b'P'
            | b'Q'
            | b'R'
            | b'S'
            | b'T'
            | b'V'
            | b'W'
            | b'Y'
            | b'X'
    )
}

/// A contiguous, typed, weighted span `[start, end)` of a sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub seg_type: String,
    pub weight: f64,
}

impl Segment {
    pub fn new(start: usize, end: usize, seg_type: impl Into<String>, weight: f64) -> Self {
        Segment {
            start,
            end,
            seg_type: seg_type.into(),
            weight,
        }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// A residue string together with its ordered segment decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedSequence {
    pub id: String,
    pub residues: Vec<u8>,
    pub segments: Vec<Segment>,
}

impl AnnotatedSequence {
    /// Builds a sequence without segments, validating the residue alphabet.
    /// Lowercase letters are accepted and uppercased.
    pub fn new(id: impl Into<String>, residues: &[u8]) -> crate::Result<Self> {
        let id = id.into();
        if residues.is_empty() {
            return Err(crate::Error::EmptySequence(id));
        }
        let mut out = Vec::with_capacity(residues.len());
        for &b in residues {
            let u = b.to_ascii_uppercase();
            if !is_residue(u) {
                return Err(crate::Error::IllegalResidue { id, residue: b as char });
            }
            out.push(u);
        }
        Ok(AnnotatedSequence {
            id,
            residues: out,
            segments: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn segment_residues(&self, seg: &Segment) -> &[u8] {
        &self.residues[seg.start..seg.end]
    }

    /// Sorts `segments` by start and checks bounds, weights and overlap.
    pub fn set_segments(&mut self, mut segments: Vec<Segment>) -> crate::Result<()> {
        segments.sort_by_key(|s| (s.start, s.end));
        for s in &segments {
            if s.start >= s.end || s.end > self.residues.len() {
                return Err(crate::Error::SegmentOutOfRange {
                    id: self.id.clone(),
                    start: s.start,
                    end: s.end,
                    len: self.residues.len(),
                });
            }
            if !s.weight.is_finite() || s.weight < 0.0 {
                return Err(crate::Error::NegativeWeight {
                    id: self.id.clone(),
                    weight: s.weight,
                });
            }
        }
        for w in segments.windows(2) {
            if w[1].start < w[0].end {
                return Err(crate::Error::OverlappingSegments {
                    id: self.id.clone(),
                    a_start: w[0].start,
                    a_end: w[0].end,
                    b_start: w[1].start,
                    b_end: w[1].end,
                });
            }
        }
        self.segments = segments;
        Ok(())
    }
}
