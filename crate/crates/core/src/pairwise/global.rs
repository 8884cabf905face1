use super::{hirschberg, score_columns, Column, GapPenalties, SubstitutionMatrix};
use crate::seq::GAP;

/// A global alignment of two residue strings as two gapped rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueAlignment {
    pub top: Vec<u8>,
    pub bottom: Vec<u8>,
    pub score: i32,
    /// Dynamic-programming cells evaluated to produce this alignment.
    pub cells: u64,
}

impl ResidueAlignment {
    pub(crate) fn from_columns(columns: &[Column], x: &[u8], y: &[u8], score: i32, cells: u64) -> Self {
        let mut top = Vec::with_capacity(columns.len());
        let mut bottom = Vec::with_capacity(columns.len());
        for &(a, b) in columns {
            top.push(a.map_or(GAP, |i| x[i]));
            bottom.push(b.map_or(GAP, |j| y[j]));
        }
        ResidueAlignment {
            top,
            bottom,
            score,
            cells,
        }
    }

    pub fn len(&self) -> usize {
        self.top.len()
    }

    pub fn is_empty(&self) -> bool {
        self.top.is_empty()
    }

    /// Column view: `Some(index)` into each input, `None` for gaps.
    pub fn columns(&self) -> Vec<Column> {
        let (mut i, mut j) = (0, 0);
        self.top
            .iter()
            .zip(&self.bottom)
            .map(|(&a, &b)| {
                let ca = (a != GAP).then(|| {
                    i += 1;
                    i - 1
                });
                let cb = (b != GAP).then(|| {
                    j += 1;
                    j - 1
                });
                (ca, cb)
            })
            .collect()
    }
}

/// Optimal global alignment with affine gaps in linear space
/// (Myers-Miller divide and conquer).
pub fn global_align_residues(x: &[u8], y: &[u8], matrix: &SubstitutionMatrix, gaps: GapPenalties) -> ResidueAlignment {
    let (columns, cells) = hirschberg::align(x, y, matrix, gaps);
    let score = score_columns(&columns, x, y, matrix, gaps);
    ResidueAlignment::from_columns(&columns, x, y, score, cells)
}

const NEG: i32 = i32::MIN / 4;

/// Optimal global alignment with affine gaps using full quadratic-space
/// Gotoh matrices. Reference implementation for the linear-space aligner.
pub fn global_align_quadratic(x: &[u8], y: &[u8], matrix: &SubstitutionMatrix, gaps: GapPenalties) -> ResidueAlignment {
    let (open, ext) = (gaps.open, gaps.extend);
    let n = x.len();
    let m = y.len();
    let w = m + 1;
    let idx = |i: usize, j: usize| i * w + j;
    let mut h = vec![NEG; (n + 1) * w];
    let mut e = vec![NEG; (n + 1) * w];
    let mut f = vec![NEG; (n + 1) * w];
    h[0] = 0;
    for j in 1..=m {
        e[idx(0, j)] = -gaps.cost(j);
        h[idx(0, j)] = e[idx(0, j)];
    }
    for i in 1..=n {
        f[idx(i, 0)] = -gaps.cost(i);
        h[idx(i, 0)] = f[idx(i, 0)];
        for j in 1..=m {
            e[idx(i, j)] = (e[idx(i, j - 1)] - ext).max(h[idx(i, j - 1)] - open - ext);
            f[idx(i, j)] = (f[idx(i - 1, j)] - ext).max(h[idx(i - 1, j)] - open - ext);
            let d = h[idx(i - 1, j - 1)] + matrix.score(x[i - 1], y[j - 1]);
            h[idx(i, j)] = d.max(e[idx(i, j)]).max(f[idx(i, j)]);
        }
    }

    #[derive(Clone, Copy, PartialEq)]
    enum State {
        H,
        E,
        F,
    }
    let mut cols = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    let mut state = State::H;
    while i > 0 || j > 0 {
        match state {
            State::H => {
                if i > 0 && j > 0 && h[idx(i, j)] == h[idx(i - 1, j - 1)] + matrix.score(x[i - 1], y[j - 1]) {
                    cols.push((Some(i - 1), Some(j - 1)));
                    i -= 1;
                    j -= 1;
                } else if j > 0 && h[idx(i, j)] == e[idx(i, j)] {
                    state = State::E;
                } else {
                    state = State::F;
                }
            }
            State::E => {
                cols.push((None, Some(j - 1)));
                let extended = j > 1 && e[idx(i, j)] == e[idx(i, j - 1)] - ext;
                j -= 1;
                if !extended {
                    state = State::H;
                }
            }
            State::F => {
                cols.push((Some(i - 1), None));
                let extended = i > 1 && f[idx(i, j)] == f[idx(i - 1, j)] - ext;
                i -= 1;
                if !extended {
                    state = State::H;
                }
            }
        }
    }
    cols.reverse();
    let score = h[idx(n, m)];
    ResidueAlignment::from_columns(&cols, x, y, score, (n as u64 + 1) * (m as u64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(x: &[u8], y: &[u8]) -> ResidueAlignment {
        global_align_residues(x, y, &SubstitutionMatrix::blosum62(), GapPenalties::default())
    }

    #[test]
    fn identity() {
        let a = run(b"ACD", b"ACD");
        assert_eq!(a.top, b"ACD");
        assert_eq!(a.bottom, b"ACD");
        assert_eq!(a.score, 4 + 9 + 6);
    }

    #[test]
    fn empty_side() {
        let a = run(b"ACD", b"");
        assert_eq!(a.top, b"ACD");
        assert_eq!(a.bottom, b"---");
        let a = run(b"", b"");
        assert!(a.is_empty());
    }

    #[test]
    fn single_deletion() {
        let a = run(b"ACDE", b"ADE");
        assert_eq!(a.top, b"ACDE");
        assert_eq!(a.bottom, b"A-DE");
        assert_eq!(a.score, 4 - 12 + 6 + 5);
    }

    #[test]
    fn matches_quadratic_reference() {
        let m = SubstitutionMatrix::blosum62();
        let g = GapPenalties::default();
        let cases: [(&[u8], &[u8]); 5] = [
            (b"HEAGAWGHEE", b"PAWHEAE"),
            (b"MKVLAAGIVGLLLAQ", b"MKVAGIVGAQ"),
            (b"WWWWCCCCCCCCWWWW", b"WWWWWWWW"),
            (b"A", b"WWWWWW"),
            (b"KDEL", b"KDL"),
        ];
        for (x, y) in cases {
            let lin = global_align_residues(x, y, &m, g);
            let quad = global_align_quadratic(x, y, &m, g);
            assert_eq!(lin.score, quad.score, "{:?}", std::str::from_utf8(x));
            assert_eq!(quad.score, score_columns(&quad.columns(), x, y, &m, g));
        }
    }

    #[test]
    fn columns_round_trip() {
        let a = run(b"KDEL", b"KDL");
        let cols = a.columns();
        let rebuilt = ResidueAlignment::from_columns(&cols, b"KDEL", b"KDL", a.score, 0);
        assert_eq!(rebuilt.top, a.top);
        assert_eq!(rebuilt.bottom, a.bottom);
    }
}
