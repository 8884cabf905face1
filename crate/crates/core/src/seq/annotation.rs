//! Segment annotation TSV: `seq_id  start  end  type  weight`, 0-based half-open
//! coordinates, `#` comment lines ignored.

use std::collections::HashMap;

use super::{AnnotatedSequence, Segment};
use crate::{Error, Result};

/// Attaches the annotated segments to `sequences`. Every sequence named in the
/// file has its segment list replaced; others keep an empty decomposition.
pub fn parse_segment_annotations(
    input: &[u8],
    mut sequences: Vec<AnnotatedSequence>,
) -> Result<Vec<AnnotatedSequence>> {
    let text = std::str::from_utf8(input).map_err(|e| Error::parse(0, format!("not UTF-8: {e}")))?;
    let index: HashMap<&str, usize> = sequences.iter().enumerate().map(|(i, s)| (s.id.as_str(), i)).collect();
    let mut per_seq: Vec<Vec<Segment>> = vec![Vec::new(); sequences.len()];

    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::parse(
                line_no,
                format!(
                    "expected 5 fields (seq_id start end type weight), found {}",
                    fields.len()
                ),
            ));
        }
        let &i = index
            .get(fields[0])
            .ok_or_else(|| Error::UnknownSequence(fields[0].to_string()))?;
        let start: usize = fields[1]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad start '{}'", fields[1])))?;
        let end: usize = fields[2]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad end '{}'", fields[2])))?;
        let weight: f64 = fields[4]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad weight '{}'", fields[4])))?;
        per_seq[i].push(Segment::new(start, end, fields[3], weight));
    }

    for (seq, segs) in sequences.iter_mut().zip(per_seq) {
        if !segs.is_empty() {
            seq.set_segments(segs)?;
        }
    }
    Ok(sequences)
}

/// Serializes the segments of `sequences` in annotation TSV form.
pub fn write_segment_annotations(sequences: &[AnnotatedSequence]) -> String {
    let mut out = String::new();
    for seq in sequences {
        for s in &seq.segments {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                seq.id, s.start, s.end, s.seg_type, s.weight
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ten() -> Vec<AnnotatedSequence> {
        vec![AnnotatedSequence::new("a", b"ACDEFGHIKL").unwrap()]
    }

    #[test]
    fn single_row() {
        let seqs = parse_segment_annotations(b"# header\na\t0\t5\tH\t8.0\n", ten()).unwrap();
        assert_eq!(seqs[0].segments, vec![Segment::new(0, 5, "H", 8.0)]);
    }

    #[test]
    fn rows_are_sorted() {
        let seqs = parse_segment_annotations(b"a 6 9 E 2\na 0 5 H 8\n", ten()).unwrap();
        assert_eq!(seqs[0].segments[0].start, 0);
        assert_eq!(seqs[0].segments[1].start, 6);
    }

    #[test]
    fn overlap_is_rejected() {
        let err = parse_segment_annotations(b"a 0 5 H 8\na 3 7 E 6\n", ten()).unwrap_err();
        assert!(matches!(err, Error::OverlappingSegments { .. }));
    }

    #[test]
    fn out_of_range_is_rejected() {
        let err = parse_segment_annotations(b"a 0 12 H 8\n", ten()).unwrap_err();
        assert!(matches!(err, Error::SegmentOutOfRange { .. }));
        let err = parse_segment_annotations(b"a 4 4 H 8\n", ten()).unwrap_err();
        assert!(matches!(err, Error::SegmentOutOfRange { .. }));
    }

    #[test]
    fn unknown_id_and_negative_weight() {
        assert!(matches!(
            parse_segment_annotations(b"b 0 5 H 8\n", ten()).unwrap_err(),
            Error::UnknownSequence(_)
        ));
        assert!(matches!(
            parse_segment_annotations(b"a 0 5 H -1\n", ten()).unwrap_err(),
            Error::NegativeWeight { .. }
        ));
    }

    #[test]
    fn malformed_row() {
        assert!(matches!(
            parse_segment_annotations(b"a 0 5 H\n", ten()).unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn serialize_round_trip() {
        let text = "a\t0\t5\tH\t8\na\t6\t9\tE\t2.5\n";
        let seqs = parse_segment_annotations(text.as_bytes(), ten()).unwrap();
        assert_eq!(write_segment_annotations(&seqs), text);
    }
}
