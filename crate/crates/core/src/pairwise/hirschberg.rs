//! Linear-space global alignment with affine gaps, after Myers & Miller (1988).
//! Works on costs (negated scores) so the recurrences read as minimizations.

use super::{Column, GapPenalties, SubstitutionMatrix};

struct Aligner<'a> {
    // codes of `a` followed by codes of `b`
    codes: Vec<u8>,
    b_off: usize,
    matrix: &'a SubstitutionMatrix,
    g: i64,
    h: i64,
    // cc, dd, rr, ss rows of width n + 1, back to back
    rows: Vec<i64>,
    out: Vec<Column>,
    cells: u64,
}

impl Aligner<'_> {
    #[inline]
    fn w(&self, i: usize, j: usize) -> i64 {
        let (a, b) = (self.codes[i], self.codes[self.b_off + j]);
        -(self.matrix.score_codes(a as usize, b as usize) as i64)
    }

    #[inline]
    fn gap(&self, len: usize) -> i64 {
        if len == 0 {
            0
        } else {
            self.g + self.h * len as i64
        }
    }

    fn del(&mut self, a0: usize, len: usize) {
        self.out.extend((a0..a0 + len).map(|i| (Some(i), None)));
    }

    fn ins(&mut self, b0: usize, len: usize) {
        self.out.extend((b0..b0 + len).map(|j| (None, Some(j))));
    }

    /// Aligns `a[a0..a0+m]` with `b[b0..b0+n]`. `tb`/`te` are the opening
    /// costs for a deletion touching the start/end of this subproblem.
    fn diff(&mut self, a0: usize, m: usize, b0: usize, n: usize, tb: i64, te: i64) {
        let (g, h) = (self.g, self.h);
        if n == 0 {
            self.del(a0, m);
            return;
        }
        if m <= 1 {
            if m == 0 {
                self.ins(b0, n);
                return;
            }
            self.cells += n as u64;
            // delete the single residue, or substitute it against one of b
            let mut midc = tb.min(te) + h + self.gap(n);
            let mut midj = 0;
            for j in 1..=n {
                let c = self.gap(j - 1) + self.w(a0, b0 + j - 1) + self.gap(n - j);
                if c < midc {
                    midc = c;
                    midj = j;
                }
            }
            if midj == 0 {
                // keep the deletion adjacent to the side whose opening was charged
                if tb <= te {
                    self.del(a0, 1);
                    self.ins(b0, n);
                } else {
                    self.ins(b0, n);
                    self.del(a0, 1);
                }
            } else {
                self.ins(b0, midj - 1);
                self.out.push((Some(a0), Some(b0 + midj - 1)));
                self.ins(b0 + midj, n - midj);
            }
            return;
        }

        let midi = m / 2;
        self.cells += (m * n) as u64;
        let mut rows = std::mem::take(&mut self.rows);
        let w = rows.len() / 4;
        let (cc, rest) = rows.split_at_mut(w);
        let (dd, rest) = rest.split_at_mut(w);
        let (rr, ss) = rest.split_at_mut(w);
        let matrix = self.matrix;
        let a_codes = &self.codes[a0..a0 + m];
        let b_codes = &self.codes[self.b_off + b0..self.b_off + b0 + n];

        // forward pass over rows 1..=midi
        cc[0] = 0;
        let mut t = g;
        for j in 1..=n {
            t += h;
            cc[j] = t;
            dd[j] = t + g;
        }
        t = tb;
        for &ac in &a_codes[..midi] {
            let arow = matrix.row(ac as usize);
            let mut s = cc[0];
            t += h;
            let mut c = t;
            cc[0] = c;
            let mut e = t + g;
            for (j, &bc) in (1..=n).zip(b_codes) {
                c += g + h;
                e += h;
                if c < e {
                    e = c;
                }
                c = cc[j] + g + h;
                let mut d = dd[j] + h;
                if c < d {
                    d = c;
                }
                c = s - arow[bc as usize] as i64;
                if e < c {
                    c = e;
                }
                if d < c {
                    c = d;
                }
                s = cc[j];
                cc[j] = c;
                dd[j] = d;
            }
        }
        dd[0] = cc[0];

        // reverse pass over rows m-1 down to midi
        rr[n] = 0;
        t = g;
        for j in (0..n).rev() {
            t += h;
            rr[j] = t;
            ss[j] = t + g;
        }
        t = te;
        for &ac in a_codes[midi..].iter().rev() {
            let arow = matrix.row(ac as usize);
            let mut s = rr[n];
            t += h;
            let mut c = t;
            rr[n] = c;
            let mut e = t + g;
            for (j, &bc) in b_codes.iter().enumerate().rev() {
                c += g + h;
                e += h;
                if c < e {
                    e = c;
                }
                c = rr[j] + g + h;
                let mut d = ss[j] + h;
                if c < d {
                    d = c;
                }
                c = s - arow[bc as usize] as i64;
                if e < c {
                    c = e;
                }
                if d < c {
                    c = d;
                }
                s = rr[j];
                rr[j] = c;
                ss[j] = d;
            }
        }
        ss[n] = rr[n];

        // best crossing of row midi
        let mut midc = cc[0] + rr[0];
        let mut midj = 0;
        let mut through_gap = false;
        for j in 0..=n {
            let c = cc[j] + rr[j];
            if c < midc {
                midc = c;
                midj = j;
            }
        }
        for j in (0..=n).rev() {
            let c = dd[j] + ss[j] - g;
            if c < midc {
                midc = c;
                midj = j;
                through_gap = true;
            }
        }

        self.rows = rows;

        if through_gap {
            self.diff(a0, midi - 1, b0, midj, tb, 0);
            self.del(a0 + midi - 1, 2);
            self.diff(a0 + midi + 1, m - midi - 1, b0 + midj, n - midj, 0, te);
        } else {
            self.diff(a0, midi, b0, midj, tb, g);
            self.diff(a0 + midi, m - midi, b0 + midj, n - midj, g, te);
        }
    }
}

thread_local! {
    // codes and rows buffers reused across calls on the same thread
    static SCRATCH: std::cell::RefCell<(Vec<u8>, Vec<i64>)> = std::cell::RefCell::default();
}

/// Returns the optimal global alignment columns and the number of DP cells
/// evaluated.
pub(super) fn align(x: &[u8], y: &[u8], matrix: &SubstitutionMatrix, gaps: GapPenalties) -> (Vec<Column>, u64) {
    let n = y.len();
    let (mut codes, mut rows) = SCRATCH.take();
    codes.clear();
    codes.extend(x.iter().chain(y).map(|&b| matrix.code(b) as u8));
    rows.clear();
    rows.resize(4 * (n + 1), 0);
    let mut al = Aligner {
        codes,
        b_off: x.len(),
        matrix,
        g: gaps.open as i64,
        h: gaps.extend as i64,
        rows,
        out: Vec::with_capacity(x.len() + y.len()),
        cells: 0,
    };
    let g = al.g;
    al.diff(0, x.len(), 0, n, g, g);
    SCRATCH.set((al.codes, al.rows));
    (al.out, al.cells)
}
