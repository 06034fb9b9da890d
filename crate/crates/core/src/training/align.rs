//! Monotone alignments of an English phoneme sequence onto a Japanese
//! sound sequence. Every English phoneme covers a contiguous, non-empty
//! run of Japanese sounds, runs appear in order, and together they cover
//! the whole Japanese sequence.

/// Number of alignments of `e` onto `j` with runs of at most `max_span`
/// sounds (`None` for no limit). Saturates at `u128::MAX`.
pub fn alignment_count<A, B>(e: &[A], j: &[B], max_span: Option<usize>) -> u128 {
    let (m, n) = (e.len(), j.len());
    if m == 0 || n == 0 {
        return u128::from(m == 0 && n == 0);
    }
    if m > n {
        return 0;
    }
    let span = max_span.unwrap_or(n).min(n);
    if span == 0 {
        return 0;
    }
    // ways[t]: alignments of the phonemes seen so far onto j[..t].
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for _ in 0..m {
        let mut next = vec![0u128; n + 1];
        for (t, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for s in 1..=span.min(n - t) {
                next[t + s] = next[t + s].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[n]
}

/// Forward-backward lattice over the alignments of one pair.
///
/// `edges[i][t]` lists, for phoneme `i` starting at sound `t`, the span
/// lengths allowed by `max_span` together with the id of the mapping
/// `(e[i], j[t..t + s])` they realize.
#[derive(Clone, Debug)]
pub struct AlignmentLattice {
    m: usize,
    n: usize,
    edges: Vec<Vec<Vec<(usize, usize)>>>,
}

/// Expected mapping counts and total probability of one pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PairExpectation {
    /// Sum over alignments of the product of mapping probabilities.
    pub total: f64,
    /// Posterior-weighted count per mapping id.
    pub counts: Vec<(usize, f64)>,
}

impl AlignmentLattice {
    /// Builds the lattice, interning each `(phoneme, sounds)` mapping via
    /// `mapping_id`. Returns `None` when the pair has no alignment.
    pub fn new<F>(e: &[String], j: &[String], max_span: Option<usize>, mut mapping_id: F) -> Option<Self>
    where
        F: FnMut(&str, &[String]) -> usize,
    {
        if alignment_count(e, j, max_span) == 0 {
            return None;
        }
        let (m, n) = (e.len(), j.len());
        let span = max_span.unwrap_or(n).min(n);
        let mut edges = vec![vec![Vec::new(); n]; m];
        for (i, row) in edges.iter_mut().enumerate() {
            // Phoneme i needs at least i sounds before it and m - i - 1 after.
            let lo = i;
            let hi = n - (m - i);
            for (t, cell) in row.iter_mut().enumerate().take(hi + 1).skip(lo) {
                let room = n - t - (m - i - 1);
                for s in 1..=span.min(room) {
                    cell.push((s, mapping_id(&e[i], &j[t..t + s])));
                }
            }
        }
        Some(AlignmentLattice { m, n, edges })
    }

    /// Runs forward-backward under `prob` (indexed by mapping id).
    pub fn expectation(&self, prob: &[f64]) -> PairExpectation {
        let (m, n) = (self.m, self.n);
        let mut alpha = vec![vec![0.0f64; n + 1]; m + 1];
        alpha[0][0] = 1.0;
        for i in 0..m {
            for t in 0..n {
                let a = alpha[i][t];
                if a == 0.0 {
                    continue;
                }
                for &(s, id) in &self.edges[i][t] {
                    alpha[i + 1][t + s] += a * prob[id];
                }
            }
        }
        let mut beta = vec![vec![0.0f64; n + 1]; m + 1];
        beta[m][n] = 1.0;
        for i in (0..m).rev() {
            for t in 0..n {
                let mut b = 0.0;
                for &(s, id) in &self.edges[i][t] {
                    b += prob[id] * beta[i + 1][t + s];
                }
                beta[i][t] = b;
            }
        }
        let total = alpha[m][n];
        let mut counts = Vec::new();
        if total > 0.0 {
            for i in 0..m {
                for t in 0..n {
                    let a = alpha[i][t];
                    if a == 0.0 {
                        continue;
                    }
                    for &(s, id) in &self.edges[i][t] {
                        let c = a * prob[id] * beta[i + 1][t + s] / total;
                        if c > 0.0 {
                            counts.push((id, c));
                        }
                    }
                }
            }
        }
        PairExpectation { total, counts }
    }

    /// Mapping ids that occur anywhere in the lattice.
    pub fn mapping_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().flatten().flatten().map(|&(_, id)| id)
    }
}
