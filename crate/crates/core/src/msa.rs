//! Multiple alignments: validation, aligned FASTA and Clustal I/O.

use std::fmt::Write as _;

use crate::seq::{is_residue, push_record, read_records, AnnotatedSequence, GAP};
use crate::{Error, Result};

/// Rows of equal width over residues and `-`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Msa {
    pub ids: Vec<String>,
    pub rows: Vec<Vec<u8>>,
}

impl Msa {
    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn degapped(&self, r: usize) -> Vec<u8> {
        self.rows[r].iter().copied().filter(|&c| c != GAP).collect()
    }

    pub fn row_index(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Rectangular, residues or gaps only, and no all-gap column.
    pub fn check_shape(&self) -> Result<()> {
        if self.ids.len() != self.rows.len() {
            return Err(Error::Invariant(format!(
                "{} ids for {} rows",
                self.ids.len(),
                self.rows.len()
            )));
        }
        let w = self.width();
        for (id, row) in self.ids.iter().zip(&self.rows) {
            if row.len() != w {
                return Err(Error::Invariant(format!(
                    "row '{id}' has width {} instead of {w}",
                    row.len()
                )));
            }
            if let Some(&c) = row.iter().find(|&&c| c != GAP && !is_residue(c)) {
                return Err(Error::Invariant(format!("row '{id}' holds '{}'", c as char)));
            }
        }
        for c in 0..w {
            if self.rows.iter().all(|r| r[c] == GAP) {
                return Err(Error::Invariant(format!("column {c} is all gaps")));
            }
        }
        Ok(())
    }

    /// Shape checks plus: row `i` degaps to `seqs[i]`.
    pub fn check_against(&self, seqs: &[AnnotatedSequence]) -> Result<()> {
        self.check_shape()?;
        if seqs.len() != self.rows.len() {
            return Err(Error::Invariant(format!(
                "{} rows for {} sequences",
                self.rows.len(),
                seqs.len()
            )));
        }
        for (r, s) in seqs.iter().enumerate() {
            if self.ids[r] != s.id || self.degapped(r) != s.residues {
                return Err(Error::Invariant(format!(
                    "row {r} does not reproduce sequence '{}'",
                    s.id
                )));
            }
        }
        Ok(())
    }

    pub fn to_fasta(&self) -> String {
        let mut out = String::new();
        for (id, row) in self.ids.iter().zip(&self.rows) {
            push_record(&mut out, id, row);
        }
        out
    }

    /// Clustal layout in blocks of 60 columns with a conservation line.
    pub fn to_clustal(&self) -> String {
        const BLOCK: usize = 60;
        let name_w = self.ids.iter().map(|s| s.len()).max().unwrap_or(0).max(10) + 6;
        let marks = self.conservation();
        let mut out = String::from("CLUSTAL multiple sequence alignment\n\n");
        let w = self.width();
        let mut start = 0;
        while start < w {
            let end = (start + BLOCK).min(w);
            out.push('\n');
            for (id, row) in self.ids.iter().zip(&self.rows) {
                let _ = writeln!(
                    out,
                    "{id:<name_w$}{}",
                    std::str::from_utf8(&row[start..end]).expect("ascii")
                );
            }
            let _ = writeln!(out, "{:<name_w$}{}", "", &marks[start..end]);
            start = end;
        }
        out
    }

    fn conservation(&self) -> String {
        const STRONG: [&str; 9] = ["STA", "NEQK", "NHQK", "NDEQ", "QHRK", "MILV", "MILF", "HY", "FYW"];
        const WEAK: [&str; 11] = [
            "CSA", "ATV", "SAG", "STNK", "STPA", "SGND", "SNDEQK", "NDEQHK", "NEQHRK", "FVLIM", "HFY",
        ];
        (0..self.width())
            .map(|c| {
                let col: Vec<u8> = self.rows.iter().map(|r| r[c]).collect();
                if col.contains(&GAP) {
                    return ' ';
                }
                let within = |g: &str| col.iter().all(|&x| g.as_bytes().contains(&x));
                if col.iter().all(|&x| x == col[0]) {
                    '*'
                } else if STRONG.iter().any(|g| within(g)) {
                    ':'
                } else if WEAK.iter().any(|g| within(g)) {
                    '.'
                } else {
                    ' '
                }
            })
            .collect()
    }
}

/// Reads aligned FASTA. Residues are uppercased; `-` and `.` are gaps.
pub fn parse_aligned_fasta(input: &[u8]) -> Result<Msa> {
    let records = read_records(input)?;
    let mut msa = Msa {
        ids: Vec::new(),
        rows: Vec::new(),
    };
    let mut width = None;
    for r in records {
        let mut row = Vec::with_capacity(r.body.len());
        for &b in &r.body {
            let u = b.to_ascii_uppercase();
            match u {
                b'-' | b'.' => row.push(GAP),
                _ if is_residue(u) => row.push(u),
                _ => {
                    return Err(Error::IllegalResidue {
                        id: r.id,
                        residue: b as char,
                    })
                }
            }
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::parse(
                    r.line,
                    format!("row '{}' has width {} but earlier rows have {w}", r.id, row.len()),
                ))
            }
            _ => {}
        }
        msa.ids.push(r.id);
        msa.rows.push(row);
    }
    Ok(msa)
}
