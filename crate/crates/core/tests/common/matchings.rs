//! Exhaustive enumeration of order-preserving matchings between two lists.

/// Best total over all monotone partial matchings of `0..n` with `0..m`.
/// `pair` gives the score of matching two items (`None` when forbidden);
/// unmatched items contribute `gap_a`/`gap_b`.
pub fn best_matching(
    n: usize,
    m: usize,
    pair: &dyn Fn(usize, usize) -> Option<f64>,
    gap_a: &dyn Fn(usize) -> f64,
    gap_b: &dyn Fn(usize) -> f64,
) -> f64 {
    fn go(
        i: usize,
        from: usize,
        n: usize,
        m: usize,
        pair: &dyn Fn(usize, usize) -> Option<f64>,
        gap_a: &dyn Fn(usize) -> f64,
        gap_b: &dyn Fn(usize) -> f64,
    ) -> f64 {
        if i == n {
            return (from..m).map(gap_b).sum();
        }
        let mut best = gap_a(i) + go(i + 1, from, n, m, pair, gap_a, gap_b);
        for j in from..m {
            if let Some(v) = pair(i, j) {
                let skipped: f64 = (from..j).map(gap_b).sum();
                best = best.max(v + skipped + go(i + 1, j + 1, n, m, pair, gap_a, gap_b));
            }
        }
        best
    }
    go(0, 0, n, m, pair, gap_a, gap_b)
}
