//! Alignment accuracy: sum-of-pairs score and column recovery over flagged
//! reference columns.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::msa::Msa;
use crate::pairwise::SubstitutionMatrix;
use crate::seq::GAP;
use crate::{Error, Result};

/// Sum over columns and unordered row pairs: substitution score for two
/// residues, `-gap_penalty` for residue against gap, 0 for two gaps.
pub fn sp_score(msa: &Msa, matrix: &SubstitutionMatrix, gap_penalty: f64) -> f64 {
    let mut total = 0.0;
    for c in 0..msa.width() {
        for a in 0..msa.num_rows() {
            for b in a + 1..msa.num_rows() {
                let (x, y) = (msa.rows[a][c], msa.rows[b][c]);
                total += match (x == GAP, y == GAP) {
                    (false, false) => matrix.score(x, y) as f64,
                    (true, true) => 0.0,
                    _ => -gap_penalty,
                };
            }
        }
    }
    total
}

/// A reference alignment with the indices of its conserved-feature columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceAlignment {
    pub msa: Msa,
    pub flagged: Vec<usize>,
}

impl ReferenceAlignment {
    pub fn new(msa: Msa, flagged: Vec<usize>) -> Result<Self> {
        if let Some(&c) = flagged.iter().find(|&&c| c >= msa.width()) {
            return Err(Error::InvalidParameter(format!(
                "flagged column {c} outside an alignment of width {}",
                msa.width()
            )));
        }
        Ok(ReferenceAlignment { msa, flagged })
    }

    /// Every column flagged.
    pub fn all_columns(msa: Msa) -> Self {
        let flagged = (0..msa.width()).collect();
        ReferenceAlignment { msa, flagged }
    }
}

/// One 0-based column index per line; blank lines and `#` comments skipped.
pub fn parse_flagged_columns(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(
            line.parse()
                .map_err(|_| Error::parse(n + 1, format!("not a column index: '{line}'")))?,
        );
    }
    Ok(out)
}

/// Column recovery percentages; `None` when nothing is flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    /// Flagged columns reproduced exactly as a test column.
    pub columns: Option<f64>,
    /// Residue pairs within flagged columns that the test also aligns.
    pub pairs: Option<f64>,
}

/// `(row id index, residue index)` sets per column, keyed by the row order of
/// `ids`.
fn column_sets(msa: &Msa, order: &[usize]) -> Vec<BTreeSet<(usize, usize)>> {
    let mut pos = vec![0usize; msa.num_rows()];
    let mut cols = vec![BTreeSet::new(); msa.width()];
    for (c, col) in cols.iter_mut().enumerate() {
        for (r, p) in pos.iter_mut().enumerate() {
            if msa.rows[r][c] != GAP {
                col.insert((order[r], *p));
                *p += 1;
            }
        }
    }
    cols
}

/// Compares `test` with the flagged columns of `reference`. Rows are matched
/// by id, so row order does not matter.
pub fn column_correlation(test: &Msa, reference: &ReferenceAlignment) -> Result<Correlation> {
    let rf = &reference.msa;
    if test.num_rows() != rf.num_rows() {
        return Err(Error::MemberMismatch(format!(
            "{} rows against {} in the reference",
            test.num_rows(),
            rf.num_rows()
        )));
    }
    let mut order = Vec::with_capacity(test.num_rows());
    for (r, id) in test.ids.iter().enumerate() {
        let q = rf
            .row_index(id)
            .ok_or_else(|| Error::MemberMismatch(format!("'{id}' is not in the reference")))?;
        if test.degapped(r) != rf.degapped(q) {
            return Err(Error::MemberMismatch(format!(
                "'{id}' has different residues in the two alignments"
            )));
        }
        order.push(q);
    }
    if reference.flagged.is_empty() {
        return Ok(Correlation {
            columns: None,
            pairs: None,
        });
    }
    let identity: Vec<usize> = (0..rf.num_rows()).collect();
    let ref_cols = column_sets(rf, &identity);
    let test_cols = column_sets(test, &order);

    let present: HashSet<&BTreeSet<(usize, usize)>> = test_cols.iter().collect();
    let mut where_in_test: HashMap<(usize, usize), usize> = HashMap::new();
    for (c, col) in test_cols.iter().enumerate() {
        for &cell in col {
            where_in_test.insert(cell, c);
        }
    }

    let mut recovered = 0usize;
    let (mut pairs, mut kept) = (0usize, 0usize);
    for &c in &reference.flagged {
        let col = &ref_cols[c];
        if present.contains(col) {
            recovered += 1;
        }
        let cells: Vec<_> = col.iter().collect();
        for a in 0..cells.len() {
            for b in a + 1..cells.len() {
                pairs += 1;
                if where_in_test[cells[a]] == where_in_test[cells[b]] {
                    kept += 1;
                }
            }
        }
    }
    Ok(Correlation {
        columns: Some(100.0 * recovered as f64 / reference.flagged.len() as f64),
        pairs: (pairs > 0).then(|| 100.0 * kept as f64 / pairs as f64),
    })
}
