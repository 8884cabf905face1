//! Residue-level profile alignment: affine-gap Gotoh over columns scored by
//! the mean substitution score of all residue pairs across the two profiles.

use crate::pairwise::{global_align_residues, GapPenalties, SubstitutionMatrix};
use crate::seq::GAP;

/// Gapped rows of equal width, one per member sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueProfile {
    pub members: Vec<usize>,
    pub rows: Vec<Vec<u8>>,
}

impl ResidueProfile {
    pub fn singleton(member: usize, residues: &[u8]) -> Self {
        ResidueProfile {
            members: vec![member],
            rows: vec![residues.to_vec()],
        }
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    /// Residue counts per matrix letter in column `c`, as `(code, count)`.
    fn column_counts(&self, c: usize, matrix: &SubstitutionMatrix) -> Vec<(usize, f64)> {
        let mut counts = vec![0u32; matrix.size()];
        for row in &self.rows {
            if row[c] != GAP {
                counts[matrix.code(row[c])] += 1;
            }
        }
        counts
            .into_iter()
            .enumerate()
            .filter(|&(_, n)| n > 0)
            .map(|(a, n)| (a, n as f64))
            .collect()
    }
}

const NEG: f64 = f64::NEG_INFINITY;

const FROM_DIAG: u8 = 0;
const FROM_E: u8 = 1;
const FROM_F: u8 = 2;
const E_EXT: u8 = 4;
const F_EXT: u8 = 8;

/// Aligns two profiles and returns the merged profile plus the DP cells
/// evaluated. Two single-row profiles go through the linear-space pairwise
/// aligner.
pub fn align_residue_profiles(
    a: &ResidueProfile,
    b: &ResidueProfile,
    matrix: &SubstitutionMatrix,
    gaps: GapPenalties,
) -> (ResidueProfile, u64) {
    if a.rows.len() == 1 && b.rows.len() == 1 {
        let x: Vec<u8> = a.rows[0].iter().copied().filter(|&c| c != GAP).collect();
        let y: Vec<u8> = b.rows[0].iter().copied().filter(|&c| c != GAP).collect();
        if x.len() == a.width() && y.len() == b.width() {
            let al = global_align_residues(&x, &y, matrix, gaps);
            let merged = ResidueProfile {
                members: vec![a.members[0], b.members[0]],
                rows: vec![al.top, al.bottom],
            };
            return (merged, al.cells);
        }
    }

    let (cols, _) = profile_gotoh(a, b, matrix, gaps);
    let mut rows: Vec<Vec<u8>> = Vec::with_capacity(a.rows.len() + b.rows.len());
    for r in &a.rows {
        rows.push(cols.iter().map(|&(x, _)| x.map_or(GAP, |x| r[x])).collect());
    }
    for r in &b.rows {
        rows.push(cols.iter().map(|&(_, y)| y.map_or(GAP, |y| r[y])).collect());
    }
    let mut members = a.members.clone();
    members.extend(&b.members);
    (ResidueProfile { members, rows }, (a.width() * b.width()) as u64)
}

type Columns = Vec<(Option<usize>, Option<usize>)>;

fn profile_gotoh(
    a: &ResidueProfile,
    b: &ResidueProfile,
    matrix: &SubstitutionMatrix,
    gaps: GapPenalties,
) -> (Columns, f64) {
    let (n, m) = (a.width(), b.width());
    let size = matrix.size();
    // per column of b: sum over its residues of matrix rows, divided by count
    let b_mean: Vec<Vec<f64>> = (0..m)
        .map(|c| {
            let counts = b.column_counts(c, matrix);
            let total: f64 = counts.iter().map(|&(_, k)| k).sum();
            (0..size)
                .map(|x| {
                    counts
                        .iter()
                        .map(|&(y, k)| k * matrix.score_codes(x, y) as f64)
                        .sum::<f64>()
                        / total.max(1.0)
                })
                .collect()
        })
        .collect();
    let a_counts: Vec<(Vec<(usize, f64)>, f64)> = (0..n)
        .map(|c| {
            let counts = a.column_counts(c, matrix);
            let total = counts.iter().map(|&(_, k)| k).sum::<f64>().max(1.0);
            (counts, total)
        })
        .collect();
    let pair = |i: usize, j: usize| {
        let (counts, total) = &a_counts[i];
        counts.iter().map(|&(x, k)| k * b_mean[j][x]).sum::<f64>() / total
    };

    let (open, ext) = (gaps.open as f64, gaps.extend as f64);
    let w = m + 1;
    let mut trace = vec![0u8; (n + 1) * w];
    let mut h = vec![0.0f64; w];
    let mut f = vec![NEG; w];
    for j in 1..=m {
        h[j] = -(open + ext * j as f64);
        trace[j] = FROM_E | if j > 1 { E_EXT } else { 0 };
    }
    for i in 1..=n {
        let mut diag = h[0];
        h[0] = -(open + ext * i as f64);
        trace[i * w] = FROM_F | if i > 1 { F_EXT } else { 0 };
        f[0] = h[0];
        let mut e = NEG;
        for j in 1..=m {
            let mut t = 0u8;
            // E: gap in a (consume b_j), F: gap in b (consume a_i)
            let e_open = h[j - 1] - open - ext;
            let e_ext = e - ext;
            if e_ext > e_open {
                e = e_ext;
                t |= E_EXT;
            } else {
                e = e_open;
            }
            let f_open = h[j] - open - ext;
            let f_ext = f[j] - ext;
            if f_ext > f_open {
                f[j] = f_ext;
                t |= F_EXT;
            } else {
                f[j] = f_open;
            }
            let d = diag + pair(i - 1, j - 1);
            let v = if d >= e && d >= f[j] {
                d
            } else if e >= f[j] {
                t |= FROM_E;
                e
            } else {
                t |= FROM_F;
                f[j]
            };
            diag = h[j];
            h[j] = v;
            trace[i * w + j] = t;
        }
    }

    // 0: in H, 1: in E, 2: in F
    let score = h[m];
    let mut cols: Columns = Vec::with_capacity(n + m);
    let (mut i, mut j, mut state) = (n, m, 0u8);
    while i > 0 || j > 0 {
        let t = trace[i * w + j];
        if state == 0 {
            state = if i == 0 {
                1
            } else if j == 0 {
                2
            } else {
                match t & 3 {
                    FROM_DIAG => {
                        cols.push((Some(i - 1), Some(j - 1)));
                        i -= 1;
                        j -= 1;
                        continue;
                    }
                    FROM_E => 1,
                    _ => 2,
                }
            };
        }
        if state == 1 {
            cols.push((None, Some(j - 1)));
            let extend = t & E_EXT != 0 && j > 1;
            j -= 1;
            state = if extend { 1 } else { 0 };
        } else {
            cols.push((Some(i - 1), None));
            let extend = t & F_EXT != 0 && i > 1;
            i -= 1;
            state = if extend { 2 } else { 0 };
        }
    }
    cols.reverse();
    (cols, score)
}
