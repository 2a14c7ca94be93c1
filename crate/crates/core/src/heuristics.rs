//! Scores guiding the greedy and rollout searches.
//!
//! For a full tableau the score is built from the 2×2 blocks
//! `F_ij = [[T[i][j], T[i][j+n]], [T[i+n][j], T[i+n][j+n]]]`: a rank-2 block
//! contributes 1 and a rank-1 block `1/n` to the column sum of `j` (for
//! `v(T)`) and the row sum of `i` (for `v(T^T)`). Entries are kept as
//! integers scaled by `n` so comparisons are exact.

use crate::f2::BitMatrix;
use crate::tableau::Tableau;

/// Sorted (non-increasing) `v(T)` and `v(T^T)`, scaled by `n`. Ordering is
/// lexicographic on `v(T)` first, then `v(T^T)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GreedyScore {
    pub cols: Vec<u32>,
    pub rows: Vec<u32>,
}

impl GreedyScore {
    /// Score of a tableau locally equivalent to a qubit permutation.
    pub fn minimum(n: usize) -> GreedyScore {
        GreedyScore {
            cols: vec![n as u32; n],
            rows: vec![n as u32; n],
        }
    }
}

/// The block `F_ij` as a 2×2 matrix.
pub fn interaction_block(t: &Tableau, i: usize, j: usize) -> BitMatrix {
    let n = t.n();
    let mut f = BitMatrix::zeros(2, 2);
    f.set(0, 0, t.get(i, j));
    f.set(0, 1, t.get(i, j + n));
    f.set(1, 0, t.get(i + n, j));
    f.set(1, 1, t.get(i + n, j + n));
    f
}

/// Rank of `F_ij` without allocating.
#[inline]
pub fn block_rank(t: &Tableau, i: usize, j: usize) -> u8 {
    let n = t.n();
    let a = t.get(i, j);
    let b = t.get(i, j + n);
    let c = t.get(i + n, j);
    let d = t.get(i + n, j + n);
    if (a & d) ^ (b & c) {
        2
    } else if a | b | c | d {
        1
    } else {
        0
    }
}

#[inline]
fn value(rank: u8, n: usize) -> u32 {
    match rank {
        2 => n as u32,
        1 => 1,
        _ => 0,
    }
}

fn sorted_desc(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// `h_greedy(T)`.
pub fn h_greedy(t: &Tableau) -> GreedyScore {
    ScoreCache::new(t).score()
}

/// Per-block ranks with running row and column sums, for incremental
/// rescoring after a gate that touches few qubits.
#[derive(Clone, Debug)]
pub struct ScoreCache {
    n: usize,
    ranks: Vec<u8>,
    col_sum: Vec<u32>,
    row_sum: Vec<u32>,
}

impl ScoreCache {
    pub fn new(t: &Tableau) -> Self {
        let n = t.n();
        let mut ranks = vec![0u8; n * n];
        let mut col_sum = vec![0u32; n];
        let mut row_sum = vec![0u32; n];
        for i in 0..n {
            for j in 0..n {
                let r = block_rank(t, i, j);
                ranks[i * n + j] = r;
                col_sum[j] += value(r, n);
                row_sum[i] += value(r, n);
            }
        }
        Self {
            n,
            ranks,
            col_sum,
            row_sum,
        }
    }

    pub fn score(&self) -> GreedyScore {
        GreedyScore {
            cols: sorted_desc(self.col_sum.clone()),
            rows: sorted_desc(self.row_sum.clone()),
        }
    }

    /// Score of `after`, which may differ from the cached tableau only in the
    /// columns of the listed qubits.
    pub fn score_changed(&self, after: &Tableau, qubits: &[usize]) -> GreedyScore {
        let n = self.n;
        let mut col_sum = self.col_sum.clone();
        let mut row_sum = self.row_sum.clone();
        for &j in qubits {
            for i in 0..n {
                let old = value(self.ranks[i * n + j], n);
                let new = value(block_rank(after, i, j), n);
                col_sum[j] = col_sum[j] - old + new;
                row_sum[i] = row_sum[i] - old + new;
            }
        }
        GreedyScore {
            cols: sorted_desc(col_sum),
            rows: sorted_desc(row_sum),
        }
    }
}

/// Number of ones in a check-matrix state.
pub fn h_css(m: &BitMatrix) -> usize {
    m.count_ones()
}
