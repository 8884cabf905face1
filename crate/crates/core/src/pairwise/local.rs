use super::{Column, GapPenalties, KarlinAltschul, SubstitutionMatrix};

/// A pairwise local alignment. Coordinates are half-open and relative to the
/// two aligned inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalAlignment {
    pub x_start: usize,
    pub x_end: usize,
    pub y_start: usize,
    pub y_end: usize,
    pub pairs: Vec<Column>,
    pub raw_score: i32,
    pub bit_score: f64,
}

impl LocalAlignment {
    pub fn empty(bit_score: f64) -> Self {
        LocalAlignment {
            x_start: 0,
            x_end: 0,
            y_start: 0,
            y_end: 0,
            pairs: Vec::new(),
            raw_score: 0,
            bit_score,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The same alignment with the roles of `x` and `y` exchanged.
    pub fn swapped(&self) -> LocalAlignment {
        LocalAlignment {
            x_start: self.y_start,
            x_end: self.y_end,
            y_start: self.x_start,
            y_end: self.x_end,
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
            raw_score: self.raw_score,
            bit_score: self.bit_score,
        }
    }
}

/// A local alignment heuristic `H`.
pub trait LocalAligner: Send + Sync {
    fn align(&self, x: &[u8], y: &[u8]) -> LocalAlignment;
}

/// Full Smith-Waterman with affine gaps (Gotoh).
#[derive(Debug, Clone, Default)]
pub struct SmithWaterman {
    pub matrix: SubstitutionMatrix,
    pub gaps: GapPenalties,
    pub stats: KarlinAltschul,
}

const NEG: i32 = i32::MIN / 4;

// trace byte layout
const H_STOP: u8 = 0;
const H_DIAG: u8 = 1;
const H_FROM_E: u8 = 2;
const H_FROM_F: u8 = 3;
const E_EXTEND: u8 = 4;
const F_EXTEND: u8 = 8;

impl SmithWaterman {
    pub fn new(matrix: SubstitutionMatrix, gaps: GapPenalties, stats: KarlinAltschul) -> Self {
        SmithWaterman { matrix, gaps, stats }
    }

    /// Best local score only, in linear space.
    pub fn score(&self, x: &[u8], y: &[u8]) -> i32 {
        let (open, ext) = (self.gaps.open, self.gaps.extend);
        let xc = self.matrix.encode(x);
        let yc = self.matrix.encode(y);
        let m = yc.len();
        let mut h = vec![0i32; m + 1];
        let mut f = vec![NEG; m + 1];
        let mut best = 0;
        for &a in &xc {
            let mut diag = 0;
            let mut e = NEG;
            let mut left = 0;
            for j in 1..=m {
                e = (e - ext).max(left - open - ext);
                f[j] = (f[j] - ext).max(h[j] - open - ext);
                let d = diag + self.matrix.score_codes(a as usize, yc[j - 1] as usize);
                let v = d.max(e).max(f[j]).max(0);
                diag = h[j];
                h[j] = v;
                left = v;
                best = best.max(v);
            }
        }
        best
    }
}

impl LocalAligner for SmithWaterman {
    fn align(&self, x: &[u8], y: &[u8]) -> LocalAlignment {
        if x.is_empty() || y.is_empty() {
            return LocalAlignment::empty(self.stats.bits(0));
        }
        SCRATCH.with_borrow_mut(|sc| self.align_with(x, y, sc))
    }
}

/// Buffers reused across calls on the same thread.
#[derive(Default)]
struct Scratch {
    yc: Vec<u8>,
    trace: Vec<u8>,
    hf: Vec<i32>,
}

thread_local! {
    static SCRATCH: std::cell::RefCell<Scratch> = std::cell::RefCell::default();
}

impl SmithWaterman {
    fn align_with(&self, x: &[u8], y: &[u8], sc: &mut Scratch) -> LocalAlignment {
        let (open, ext) = (self.gaps.open, self.gaps.extend);
        let (n, m) = (x.len(), y.len());
        let w = m + 1;
        sc.yc.clear();
        sc.yc.extend(y.iter().map(|&b| self.matrix.code(b) as u8));
        let yc = &sc.yc;
        sc.trace.clear();
        sc.trace.resize((n + 1) * w, 0);
        let trace = &mut sc.trace;
        sc.hf.clear();
        sc.hf.resize(w, 0);
        sc.hf.resize(2 * w, NEG);
        let (h, f) = sc.hf.split_at_mut(w);
        let (mut best, mut bi, mut bj) = (0, 0, 0);

        for i in 1..=n {
            let arow = self.matrix.row(self.matrix.code(x[i - 1]));
            let mut diag = 0;
            let mut e = NEG;
            let mut left = 0;
            let row = &mut trace[i * w..(i + 1) * w];
            for j in 1..=m {
                let mut t = 0u8;
                let e_ext = e - ext;
                let e_open = left - open - ext;
                if e_ext > e_open {
                    e = e_ext;
                    t |= E_EXTEND;
                } else {
                    e = e_open;
                }
                let f_ext = f[j] - ext;
                let f_open = h[j] - open - ext;
                if f_ext > f_open {
                    f[j] = f_ext;
                    t |= F_EXTEND;
                } else {
                    f[j] = f_open;
                }
                let d = diag + arow[yc[j - 1] as usize];
                let v = d.max(e).max(f[j]);
                let v = if v <= 0 {
                    t |= H_STOP;
                    0
                } else if v == d {
                    t |= H_DIAG;
                    v
                } else if v == e {
                    t |= H_FROM_E;
                    v
                } else {
                    t |= H_FROM_F;
                    v
                };
                row[j] = t;
                diag = h[j];
                h[j] = v;
                left = v;
                if v > best {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        }

        if best == 0 {
            return LocalAlignment::empty(self.stats.bits(0));
        }

        #[derive(Clone, Copy)]
        enum State {
            H,
            E,
            F,
        }
        let mut pairs = Vec::new();
        let (mut i, mut j) = (bi, bj);
        let mut state = State::H;
        loop {
            let t = trace[i * w + j];
            match state {
                State::H => match t & 3 {
                    H_DIAG => {
                        pairs.push((Some(i - 1), Some(j - 1)));
                        i -= 1;
                        j -= 1;
                    }
                    H_FROM_E => state = State::E,
                    H_FROM_F => state = State::F,
                    _ => break,
                },
                State::E => {
                    pairs.push((None, Some(j - 1)));
                    if t & E_EXTEND == 0 {
                        state = State::H;
                    }
                    j -= 1;
                }
                State::F => {
                    pairs.push((Some(i - 1), None));
                    if t & F_EXTEND == 0 {
                        state = State::H;
                    }
                    i -= 1;
                }
            }
            if matches!(state, State::H) && (i == 0 || j == 0) {
                break;
            }
        }
        pairs.reverse();
        LocalAlignment {
            x_start: i,
            x_end: bi,
            y_start: j,
            y_end: bj,
            pairs,
            raw_score: best,
            bit_score: self.stats.bits(best),
        }
    }
}
