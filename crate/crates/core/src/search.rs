//! Search-state abstraction shared by the greedy and rollout engines, with
//! implementations for full tableaus and CSS elimination states.

use std::fmt::Debug;

use crate::circuit::{Circuit, Gate};
use crate::css::ReductionState;
use crate::error::{Error, Result};
use crate::heuristics::{GreedyScore, ScoreCache};
use crate::pauli::Pauli;
use crate::tableau::{goal_up_to_local, Tableau};

/// Optimization objective; the other metric breaks ties.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Objective {
    #[default]
    Gates,
    Depth,
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gates" => Ok(Objective::Gates),
            "depth" => Ok(Objective::Depth),
            other => Err(Error::parse("objective", format!("unknown objective {other:?}"))),
        }
    }
}

/// Two-qubit gate count and two-qubit depth of a move sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Metrics {
    pub two_qubit: usize,
    pub depth: usize,
}

impl Metrics {
    /// `(primary, secondary)` under the objective.
    pub fn key(&self, objective: Objective) -> (usize, usize) {
        match objective {
            Objective::Gates => (self.two_qubit, self.depth),
            Objective::Depth => (self.depth, self.two_qubit),
        }
    }

    pub fn primary(&self, objective: Objective) -> usize {
        self.key(objective).0
    }

    /// Metrics of a sequence of two-qubit moves on `n` qubits.
    pub fn of_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Metrics {
        let mut frontier = vec![0usize; n];
        let mut count = 0;
        let mut depth = 0;
        for (a, b) in pairs {
            let l = frontier[a].max(frontier[b]) + 1;
            frontier[a] = l;
            frontier[b] = l;
            depth = depth.max(l);
            count += 1;
        }
        Metrics {
            two_qubit: count,
            depth,
        }
    }
}

/// A state of a reduction search. Every move is a single two-qubit gate.
pub trait SearchState: Clone + Send + Sync {
    type Move: Copy + Eq + Debug + Send + Sync;
    type Score: Ord + Clone + Debug + Send;

    fn num_qubits(&self) -> usize;

    fn score(&self) -> Self::Score;

    /// Moves that change the state, in deterministic tie-break order, skipping
    /// those touching masked qubits.
    fn candidates(&self, mask: Option<&[bool]>) -> Vec<Self::Move>;

    fn score_after(&self, mv: Self::Move) -> Self::Score;

    fn apply(&mut self, mv: Self::Move);

    fn qubits(mv: Self::Move) -> (usize, usize);

    fn is_goal(&self) -> bool;

    /// Whether greedy must strictly improve the score at every step.
    fn requires_improvement(&self) -> bool;

    /// Escapes a local minimum, returning the moves applied on the way.
    fn escape(&mut self) -> Result<Vec<Self::Move>> {
        Err(Error::Stuck("no improving move".into()))
    }

    /// Circuit for a state at goal, built from its move history.
    fn finish(&self) -> Result<Circuit>;

    /// Metrics of the moves applied so far.
    fn metrics(&self) -> Metrics;
}

/// Scores `moves` and returns the best `limit` as `(score, move)`, ordered by
/// score and then by position in `moves`. Evaluation may run in parallel; the
/// result does not depend on it.
pub fn rank_moves<S: SearchState>(
    state: &S,
    moves: &[S::Move],
    limit: usize,
) -> Vec<(S::Score, S::Move)> {
    if moves.is_empty() || limit == 0 {
        return Vec::new();
    }
    let scores = evaluate(state, moves);
    if limit == 1 {
        let (i, _) = scores
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
            .expect("non-empty");
        return vec![(scores[i].clone(), moves[i])];
    }
    let mut idx: Vec<usize> = (0..moves.len()).collect();
    idx.sort_by(|&a, &b| scores[a].cmp(&scores[b]).then(a.cmp(&b)));
    idx.truncate(limit);
    idx.into_iter()
        .map(|i| (scores[i].clone(), moves[i]))
        .collect()
}

#[cfg(feature = "parallel")]
fn evaluate<S: SearchState>(state: &S, moves: &[S::Move]) -> Vec<S::Score> {
    use rayon::prelude::*;
    if moves.len() >= 512 {
        moves.par_iter().map(|&m| state.score_after(m)).collect()
    } else {
        moves.iter().map(|&m| state.score_after(m)).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn evaluate<S: SearchState>(state: &S, moves: &[S::Move]) -> Vec<S::Score> {
    moves.iter().map(|&m| state.score_after(m)).collect()
}

/// Full-tableau search over two-qubit transvections.
#[derive(Clone, Debug)]
pub struct TableauState {
    tableau: Tableau,
    cache: ScoreCache,
    history: Vec<Gate>,
}

/// A transvection move `P_i ⊗ P_j` with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transvection {
    pub i: usize,
    pub j: usize,
    pub pi: Pauli,
    pub pj: Pauli,
}

impl Transvection {
    pub fn gate(self) -> Gate {
        Gate::transvection(self.i, self.pi, self.j, self.pj)
    }
}

impl TableauState {
    pub fn new(tableau: Tableau) -> Self {
        let cache = ScoreCache::new(&tableau);
        Self {
            tableau,
            cache,
            history: Vec::new(),
        }
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    pub fn history(&self) -> &[Gate] {
        &self.history
    }

    /// Whether the transvection changes any row.
    fn acts(&self, m: &Transvection) -> bool {
        let n = self.tableau.n();
        let words = self.tableau.column_words(0).len();
        let mut any = 0u64;
        for w in 0..words {
            let mut acc = 0u64;
            for (q, p) in [(m.i, m.pi), (m.j, m.pj)] {
                let (px, pz) = p.bits();
                if pz {
                    acc ^= self.tableau.column_words(q)[w];
                }
                if px {
                    acc ^= self.tableau.column_words(n + q)[w];
                }
            }
            any |= acc;
        }
        any != 0
    }
}

impl SearchState for TableauState {
    type Move = Transvection;
    type Score = GreedyScore;

    fn num_qubits(&self) -> usize {
        self.tableau.n()
    }

    fn score(&self) -> GreedyScore {
        self.cache.score()
    }

    fn candidates(&self, mask: Option<&[bool]>) -> Vec<Transvection> {
        let n = self.tableau.n();
        let free = |q: usize| mask.is_none_or(|m| !m[q]);
        let mut out = Vec::with_capacity(9 * n * n.saturating_sub(1) / 2);
        for i in 0..n {
            if !free(i) {
                continue;
            }
            for j in (i + 1)..n {
                if !free(j) {
                    continue;
                }
                for pi in Pauli::NON_IDENTITY {
                    for pj in Pauli::NON_IDENTITY {
                        let m = Transvection { i, j, pi, pj };
                        if self.acts(&m) {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }

    fn score_after(&self, mv: Transvection) -> GreedyScore {
        let mut t = self.tableau.clone();
        t.apply_unchecked(&mv.gate());
        self.cache.score_changed(&t, &[mv.i, mv.j])
    }

    fn apply(&mut self, mv: Transvection) {
        let g = mv.gate();
        self.tableau.apply_unchecked(&g);
        self.cache = ScoreCache::new(&self.tableau);
        self.history.push(g);
    }

    fn qubits(mv: Transvection) -> (usize, usize) {
        (mv.i, mv.j)
    }

    fn is_goal(&self) -> bool {
        goal_up_to_local(&self.tableau).is_some()
    }

    fn requires_improvement(&self) -> bool {
        false
    }

    fn finish(&self) -> Result<Circuit> {
        let (fix, roles) = goal_up_to_local(&self.tableau)
            .ok_or_else(|| Error::Contract("tableau is not at a goal state".into()))?;
        let mut reduction = self.history.clone();
        reduction.extend(fix);
        let n = self.tableau.n();
        let gates: Vec<Gate> = reduction.iter().rev().map(Gate::inverse).collect();
        Ok(Circuit::from_gates(n, gates)?.with_roles(roles))
    }

    fn metrics(&self) -> Metrics {
        let pairs = self.history.iter().filter_map(|g| match *g {
            Gate::Transvection { i, j, .. } | Gate::Cx(i, j) => Some((i, j)),
            _ => None,
        });
        Metrics::of_pairs(self.tableau.n(), pairs)
    }
}

/// A CNOT move `(control, target)` on the elimination matrix.
pub type Cnot = (usize, usize);

impl ReductionState {
    /// Row additions that strictly lower `h`, applied until none remains.
    fn improve_rows(&mut self) -> bool {
        let k = self.k();
        let rows = k + self.m_x();
        let mut improved = false;
        loop {
            let mut best: Option<(isize, usize, usize)> = None;
            for src in k..rows {
                for dst in 0..rows {
                    if dst == src {
                        continue;
                    }
                    let d = self.row_delta(dst, src);
                    if d < 0 && best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, dst, src));
                    }
                }
            }
            match best {
                Some((_, dst, src)) => {
                    self.add_row(dst, src).expect("checked row roles");
                    improved = true;
                }
                None => return improved,
            }
        }
    }

    /// One rung of the local-minimum ladder. Level 1 applies improving row
    /// additions, level 2 brings the checks to echelon form, level 3 applies
    /// the best improving CNOT pair. `Ok(None)` means the rung did not help;
    /// level 3 fails with [`Error::Stuck`] instead.
    pub fn escape_level(&mut self, level: u8) -> Result<Option<Vec<Cnot>>> {
        match level {
            1 => Ok(self.improve_rows().then(Vec::new)),
            2 => Ok((self.rref_checks() && (self.has_improving_cnot() || self.is_goal()))
                .then(Vec::new)),
            3 => match self.best_pair() {
                Some((a, b)) => {
                    self.apply_cnot_unchecked(a.0, a.1);
                    self.apply_cnot_unchecked(b.0, b.1);
                    Ok(Some(vec![a, b]))
                }
                None => Err(Error::Stuck(format!(
                    "no improving row operation, echelon step or CNOT pair at h = {}",
                    self.h()
                ))),
            },
            _ => Err(Error::Contract(format!("escape level {level} is not in 1..=3"))),
        }
    }

    fn has_improving_cnot(&self) -> bool {
        let n = self.n();
        (0..n).any(|c| !self.column_is_zero(c) && (0..n).any(|t| t != c && self.delta(c, t) < 0))
    }

    /// Best strictly improving pair of CNOTs where the second touches the
    /// first one's target.
    fn best_pair(&self) -> Option<(Cnot, Cnot)> {
        let n = self.n();
        let mut best: Option<(isize, Cnot, Cnot)> = None;
        for c1 in 0..n {
            if self.column_is_zero(c1) {
                continue;
            }
            for t1 in 0..n {
                if t1 == c1 {
                    continue;
                }
                let d1 = self.delta(c1, t1);
                let mut s = self.clone();
                s.apply_cnot_unchecked(c1, t1);
                for x in 0..n {
                    if x == t1 {
                        continue;
                    }
                    for (c2, t2) in [(t1, x), (x, t1)] {
                        if (c2, t2) == (c1, t1) || s.column_is_zero(c2) {
                            continue;
                        }
                        let d = d1 + s.delta(c2, t2);
                        if d < 0 && best.is_none_or(|(bd, _, _)| d < bd) {
                            best = Some((d, (c1, t1), (c2, t2)));
                        }
                    }
                }
            }
        }
        best.map(|(_, a, b)| (a, b))
    }
}

impl SearchState for ReductionState {
    type Move = Cnot;
    type Score = usize;

    fn num_qubits(&self) -> usize {
        self.n()
    }

    fn score(&self) -> usize {
        self.h()
    }

    fn candidates(&self, mask: Option<&[bool]>) -> Vec<Cnot> {
        let n = self.n();
        let free = |q: usize| mask.is_none_or(|m| !m[q]);
        let mut out = Vec::with_capacity(n * n.saturating_sub(1));
        for c in 0..n {
            if !free(c) || self.column_is_zero(c) {
                continue;
            }
            for t in 0..n {
                if t != c && free(t) {
                    out.push((c, t));
                }
            }
        }
        out
    }

    fn score_after(&self, (c, t): Cnot) -> usize {
        (self.h() as isize + self.delta(c, t)) as usize
    }

    fn apply(&mut self, (c, t): Cnot) {
        self.apply_cnot_unchecked(c, t);
    }

    fn qubits(mv: Cnot) -> (usize, usize) {
        mv
    }

    fn is_goal(&self) -> bool {
        self.goal_form().is_some()
    }

    fn requires_improvement(&self) -> bool {
        true
    }

    fn escape(&mut self) -> Result<Vec<Cnot>> {
        for level in 1..=3 {
            if let Some(moves) = self.escape_level(level)? {
                return Ok(moves);
            }
        }
        unreachable!("level 3 either succeeds or errors")
    }

    fn finish(&self) -> Result<Circuit> {
        let roles = self
            .goal_form()
            .ok_or_else(|| Error::Contract("state is not in goal form".into()))?;
        self.encoder(&roles)
    }

    fn metrics(&self) -> Metrics {
        Metrics::of_pairs(self.n(), self.gates().iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_counts() {
        let s = TableauState::new(Tableau::identity(2, 0));
        // On the identity every transvection acts.
        assert_eq!(s.candidates(None).len(), 9);
        let m = crate::f2::BitMatrix::identity(3);
        let r = ReductionState::from_matrix(&m, 0).unwrap();
        assert_eq!(r.candidates(None).len(), 6);
        assert_eq!(r.candidates(Some(&[true, false, false])), vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn metrics_of_pairs() {
        let m = Metrics::of_pairs(4, [(0, 1), (2, 3), (1, 2)]);
        assert_eq!(m, Metrics { two_qubit: 3, depth: 2 });
        assert_eq!(m.key(Objective::Depth), (2, 3));
    }
}
