use std::collections::HashSet;

use super::AnnotatedSequence;
use crate::{Error, Result};

pub(crate) const LINE_WIDTH: usize = 60;

/// A raw FASTA record: id, concatenated body with whitespace removed, header line.
pub(crate) struct RawRecord {
    pub id: String,
    pub body: Vec<u8>,
    pub line: usize,
}

/// Splits FASTA text into records. The id is the first whitespace-delimited
/// token of the header; blank lines are skipped.
pub(crate) fn read_records(input: &[u8]) -> Result<Vec<RawRecord>> {
    let text = std::str::from_utf8(input).map_err(|e| Error::parse(0, format!("not UTF-8: {e}")))?;
    let mut records: Vec<RawRecord> = Vec::new();
    for (n, raw_line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw_line.trim_end_matches('\r');
        if let Some(header) = line.strip_prefix('>') {
            let id = header
                .split_whitespace()
                .next()
                .ok_or_else(|| Error::parse(line_no, "header without an id"))?;
            records.push(RawRecord {
                id: id.to_string(),
                body: Vec::new(),
                line: line_no,
            });
        } else if line.trim().is_empty() {
            continue;
        } else {
            let rec = records
                .last_mut()
                .ok_or_else(|| Error::parse(line_no, "sequence data before the first header"))?;
            rec.body.extend(line.bytes().filter(|b| !b.is_ascii_whitespace()));
        }
    }
    let mut seen = HashSet::new();
    for r in &records {
        if !seen.insert(r.id.as_str()) {
            return Err(Error::DuplicateId(r.id.clone()));
        }
    }
    Ok(records)
}

/// Parses FASTA into sequences with no segments attached.
pub fn parse_fasta(input: &[u8]) -> Result<Vec<AnnotatedSequence>> {
    read_records(input)?
        .into_iter()
        .map(|r| AnnotatedSequence::new(r.id, &r.body))
        .collect()
}

/// Writes sequences as FASTA with 60-column lines.
pub fn write_fasta(seqs: &[AnnotatedSequence]) -> String {
    let mut out = String::new();
    for s in seqs {
        push_record(&mut out, &s.id, &s.residues);
    }
    out
}

pub(crate) fn push_record(out: &mut String, id: &str, body: &[u8]) {
    out.push('>');
    out.push_str(id);
    out.push('\n');
    for chunk in body.chunks(LINE_WIDTH) {
        out.push_str(std::str::from_utf8(chunk).expect("ascii"));
        out.push('\n');
    }
}
