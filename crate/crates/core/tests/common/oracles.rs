//! Independent reference implementations used by the integration and
//! acceptance tests. None of these call into the code paths they check.

#![allow(dead_code)]

use segmsa::pairwise::SubstitutionMatrix;

/// Gap penalties as plain numbers so the oracles stay independent of the
/// library's own gap type.
#[derive(Clone, Copy)]
pub struct Gaps {
    pub open: i32,
    pub extend: i32,
}

impl Gaps {
    pub fn cost(&self, len: usize) -> i32 {
        if len == 0 {
            return 0;
        }
        self.open + self.extend * len as i32
    }
}

/// Scores two gapped rows by scanning gap runs in each row.
pub fn score_rows(top: &[u8], bottom: &[u8], m: &SubstitutionMatrix, g: Gaps) -> i32 {
    assert_eq!(top.len(), bottom.len());
    let mut score = 0;
    for (a, b) in top.iter().zip(bottom) {
        if *a != b'-' && *b != b'-' {
            score += m.score(*a, *b);
        }
    }
    for row in [top, bottom] {
        let mut k = 0;
        while k < row.len() {
            if row[k] == b'-' {
                let start = k;
                while k < row.len() && row[k] == b'-' {
                    k += 1;
                }
                score -= g.cost(k - start);
            } else {
                k += 1;
            }
        }
    }
    score
}

#[derive(Clone, Copy, PartialEq)]
enum Last {
    Pair,
    UseX,
    UseY,
}

#[allow(clippy::too_many_arguments)]
fn enum_from(
    x: &[u8],
    y: &[u8],
    i: usize,
    j: usize,
    last: Last,
    score: i32,
    m: &SubstitutionMatrix,
    g: Gaps,
    visit: &mut dyn FnMut(usize, usize, i32),
) {
    visit(i, j, score);
    if i < x.len() && j < y.len() {
        enum_from(x, y, i + 1, j + 1, Last::Pair, score + m.score(x[i], y[j]), m, g, visit);
    }
    if i < x.len() {
        let c = g.extend + if last == Last::UseX { 0 } else { g.open };
        enum_from(x, y, i + 1, j, Last::UseX, score - c, m, g, visit);
    }
    if j < y.len() {
        let c = g.extend + if last == Last::UseY { 0 } else { g.open };
        enum_from(x, y, i, j + 1, Last::UseY, score - c, m, g, visit);
    }
}

/// Best global score by enumerating every alignment path.
pub fn enum_global(x: &[u8], y: &[u8], m: &SubstitutionMatrix, g: Gaps) -> i32 {
    let mut best = i32::MIN;
    enum_from(x, y, 0, 0, Last::Pair, 0, m, g, &mut |i, j, s| {
        if i == x.len() && j == y.len() {
            best = best.max(s);
        }
    });
    best
}

/// Best local score by enumerating every path from every start cell.
pub fn enum_local(x: &[u8], y: &[u8], m: &SubstitutionMatrix, g: Gaps) -> i32 {
    let mut best = 0;
    for i0 in 0..=x.len() {
        for j0 in 0..=y.len() {
            enum_from(x, y, i0, j0, Last::Pair, 0, m, g, &mut |_, _, s| {
                best = best.max(s);
            });
        }
    }
    best
}

/// General-gap recurrence that tries every gap length explicitly, with no
/// affine state machine. Returns `(local, global)` best scores.
pub fn explicit_gaps(x: &[u8], y: &[u8], m: &SubstitutionMatrix, g: Gaps, scratch: &mut Scratch) -> (i32, i32) {
    const NEG: i32 = i32::MIN / 4;
    let n = x.len();
    let w = y.len() + 1;
    let cells = (n + 1) * w;
    scratch.local.clear();
    scratch.local.resize(cells, 0);
    scratch.global.clear();
    scratch.global.resize(cells, NEG);
    scratch.gap.clear();
    scratch.gap.extend((0..=n.max(y.len())).map(|l| g.cost(l)));
    scratch.sub.clear();
    for &a in x {
        scratch.sub.extend(y.iter().map(|&b| m.score(a, b)));
    }
    let (loc, glo, gap, sub) = (&mut scratch.local, &mut scratch.global, &scratch.gap, &scratch.sub);
    let mut best = 0;
    for i in 0..=n {
        for j in 0..=y.len() {
            let mut l = 0;
            let mut v = if i == 0 && j == 0 { 0 } else { NEG };
            if i > 0 && j > 0 {
                let s = sub[(i - 1) * y.len() + j - 1];
                l = l.max(loc[(i - 1) * w + j - 1] + s);
                v = v.max(glo[(i - 1) * w + j - 1] + s);
            }
            for k in 1..=i {
                l = l.max(loc[(i - k) * w + j] - gap[k]);
                v = v.max(glo[(i - k) * w + j] - gap[k]);
            }
            for k in 1..=j {
                l = l.max(loc[i * w + j - k] - gap[k]);
                v = v.max(glo[i * w + j - k] - gap[k]);
            }
            loc[i * w + j] = l;
            glo[i * w + j] = v;
            best = best.max(l);
        }
    }
    (best, glo[n * w + y.len()])
}

/// Reusable buffers for [`explicit_gaps`].
#[derive(Default)]
pub struct Scratch {
    local: Vec<i32>,
    global: Vec<i32>,
    gap: Vec<i32>,
    sub: Vec<i32>,
}

pub fn explicit_global(x: &[u8], y: &[u8], m: &SubstitutionMatrix, g: Gaps) -> i32 {
    explicit_gaps(x, y, m, g, &mut Scratch::default()).1
}

pub fn explicit_local(x: &[u8], y: &[u8], m: &SubstitutionMatrix, g: Gaps) -> i32 {
    explicit_gaps(x, y, m, g, &mut Scratch::default()).0
}

/// All strings over `alphabet` with length `0..=max_len`.
pub fn all_strings(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &c in alphabet {
                let mut t: Vec<u8> = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// The same general-gap recurrence as [`explicit_gaps`], grown one column of
/// `y` at a time so a depth-first walk over all `y` shares prefix work.
pub struct ColumnOracle {
    x: Vec<usize>,
    m: SubstitutionMatrix,
    gap: Vec<i32>,
    y: Vec<u8>,
    local: Vec<Vec<i32>>,
    global: Vec<Vec<i32>>,
    best: Vec<i32>,
    // rows released by `pop`, reused by `push`
    spare: Vec<Vec<i32>>,
}

impl ColumnOracle {
    pub fn new(x: &[u8], m: &SubstitutionMatrix, g: Gaps, max_y: usize) -> Self {
        let n = x.len();
        let gap: Vec<i32> = (0..=n.max(max_y)).map(|l| g.cost(l)).collect();
        let global0 = (0..=n).map(|i| if i == 0 { 0 } else { -gap[i] }).collect();
        ColumnOracle {
            x: x.iter().map(|&c| m.code(c)).collect(),
            m: m.clone(),
            gap,
            y: Vec::new(),
            local: vec![vec![0; n + 1]],
            global: vec![global0],
            best: vec![0],
            spare: Vec::new(),
        }
    }

    /// `(local, global)` scores of `x` against the current `y`.
    pub fn scores(&self) -> (i32, i32) {
        (*self.best.last().unwrap(), *self.global.last().unwrap().last().unwrap())
    }

    pub fn push(&mut self, b: u8) {
        let n = self.x.len();
        self.y.push(b);
        let j = self.y.len();
        let mut loc = self.spare.pop().unwrap_or_else(|| vec![0; n + 1]);
        let mut glo = self.spare.pop().unwrap_or_else(|| vec![0; n + 1]);
        let bc = self.m.code(b);
        let mut best = self.best[j - 1];
        for i in 0..=n {
            let mut l = 0;
            let mut v = i32::MIN / 4;
            if i > 0 {
                let s = self.m.score_codes(self.x[i - 1], bc);
                l = l.max(self.local[j - 1][i - 1] + s);
                v = v.max(self.global[j - 1][i - 1] + s);
            }
            for k in 1..=i {
                l = l.max(loc[i - k] - self.gap[k]);
                v = v.max(glo[i - k] - self.gap[k]);
            }
            for k in 1..=j {
                l = l.max(self.local[j - k][i] - self.gap[k]);
                v = v.max(self.global[j - k][i] - self.gap[k]);
            }
            loc[i] = l;
            glo[i] = v;
            best = best.max(l);
        }
        self.local.push(loc);
        self.global.push(glo);
        self.best.push(best);
    }

    pub fn pop(&mut self) {
        self.y.pop();
        self.spare.extend(self.local.pop());
        self.spare.extend(self.global.pop());
        self.best.pop();
    }

    pub fn y(&self) -> &[u8] {
        &self.y
    }
}
