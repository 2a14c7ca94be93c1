//! Greedy best-first reduction with an optional layered (depth) mode.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::css::ReductionState;
use crate::search::{rank_moves, Metrics, Objective, SearchState};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub objective: Objective,
    pub seed: u64,
    /// Move budget; `None` means `20 n^2`.
    pub max_steps: Option<usize>,
    /// Layer-by-layer move selection. Forced on by the depth objective.
    pub layered: bool,
    /// Let the seed permute the order in which ties are broken.
    pub shuffle_ties: bool,
    /// Full-tableau search: when no single move improves the score, look
    /// for an improving pair of moves before accepting a sideways step.
    pub tableau_fallback: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            objective: Objective::Gates,
            seed: 0,
            max_steps: None,
            layered: false,
            shuffle_ties: false,
            tableau_fallback: false,
        }
    }
}

impl SearchConfig {
    pub fn with_objective(objective: Objective) -> Self {
        Self {
            objective,
            ..Self::default()
        }
    }

    pub fn is_layered(&self) -> bool {
        self.layered || self.objective == Objective::Depth
    }

    pub fn step_limit(&self, n: usize) -> usize {
        self.max_steps.unwrap_or(20 * n * n).max(1)
    }
}

/// A completed greedy run: moves from the start state and the final state.
#[derive(Clone, Debug)]
pub struct GreedyRun<S: SearchState> {
    pub moves: Vec<S::Move>,
    pub state: S,
}

impl<S: SearchState> GreedyRun<S> {
    pub fn metrics(&self) -> Metrics {
        self.state.metrics()
    }
}

/// Moves available from `state`, skipping any that touch a masked qubit.
pub fn candidate_moves<S: SearchState>(state: &S, layered_mask: Option<&[bool]>) -> Vec<S::Move> {
    state.candidates(layered_mask)
}

/// Runs one rung of the CSS local-minimum ladder on a copy of `state`.
/// Returns `None` when the rung made no progress and the next one should be
/// tried.
pub fn escape_local_minimum(state: &ReductionState, level: u8) -> Result<Option<ReductionState>> {
    let mut next = state.clone();
    Ok(next.escape_level(level)?.map(|_| next))
}

/// Best strictly improving two-move sequence, if any.
pub fn improving_pair<S: SearchState>(state: &S) -> Option<(S::Move, S::Move)> {
    let current = state.score();
    let mut best: Option<(S::Score, S::Move, S::Move)> = None;
    for first in state.candidates(None) {
        let mut mid = state.clone();
        mid.apply(first);
        let seconds = mid.candidates(None);
        let Some((sc, second)) = rank_moves(&mid, &seconds, 1).into_iter().next() else {
            continue;
        };
        if sc < current && best.as_ref().is_none_or(|(b, _, _)| sc < *b) {
            best = Some((sc, first, second));
        }
    }
    best.map(|(_, a, b)| (a, b))
}

/// Best move under the current rules, or `None` when the state is at a
/// local minimum (only for problems requiring strict improvement).
pub fn greedy_step<S: SearchState>(state: &S) -> Option<(S::Move, S)> {
    let cands = state.candidates(None);
    let (score, mv) = rank_moves(state, &cands, 1).into_iter().next()?;
    if state.requires_improvement() && score >= state.score() {
        return None;
    }
    let mut next = state.clone();
    next.apply(mv);
    Some((mv, next))
}

/// Runs greedy search from `start` to a goal state.
pub fn greedy_run<S: SearchState>(start: &S, config: &SearchConfig) -> Result<GreedyRun<S>> {
    let n = start.num_qubits();
    let limit = config.step_limit(n);
    let layered = config.is_layered();
    let strict = start.requires_improvement();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut state = start.clone();
    let mut moves: Vec<S::Move> = Vec::new();
    let mut mask = vec![false; n];
    let mut last: Option<S::Move> = None;
    let mut best_seen = state.score();
    let mut stale = 0usize;

    while !state.is_goal() {
        if moves.len() >= limit {
            return Err(Error::StepLimit(limit));
        }
        let current = state.score();
        let pick = |state: &S, mask: Option<&[bool]>, rng: &mut ChaCha8Rng| {
            let mut cands = state.candidates(mask);
            if let Some(l) = last {
                cands.retain(|&m| m != l);
            }
            if config.shuffle_ties {
                cands.shuffle(rng);
            }
            rank_moves(state, &cands, 1).into_iter().next()
        };

        let mut chosen = None;
        if layered && mask.iter().any(|&b| b) {
            if let Some((sc, mv)) = pick(&state, Some(&mask), &mut rng) {
                if sc < current {
                    chosen = Some(mv);
                }
            }
            if chosen.is_none() {
                mask.iter_mut().for_each(|b| *b = false);
            }
        }
        if chosen.is_none() {
            match pick(&state, None, &mut rng) {
                Some((sc, _)) if !strict && config.tableau_fallback && sc >= current => {
                    if let Some((a, b)) = improving_pair(&state) {
                        state.apply(a);
                        moves.push(a);
                        chosen = Some(b);
                    } else if let Some((_, mv)) = pick(&state, None, &mut rng) {
                        chosen = Some(mv);
                    }
                }
                Some((sc, mv)) if !strict || sc < current => chosen = Some(mv),
                _ if strict => {
                    let extra = state.escape()?;
                    moves.extend(extra);
                    mask.iter_mut().for_each(|b| *b = false);
                    last = None;
                    continue;
                }
                _ => return Err(Error::Stuck("no applicable move".into())),
            }
        }
        let mv = chosen.expect("chosen above");
        state.apply(mv);
        moves.push(mv);
        let (a, b) = S::qubits(mv);
        if layered {
            mask[a] = true;
            mask[b] = true;
        }
        if !strict {
            last = Some(mv);
            let sc = state.score();
            if sc < best_seen {
                best_seen = sc;
                stale = 0;
            } else {
                stale += 1;
                if stale > 2 * n {
                    return Err(Error::Stuck(format!(
                        "score did not improve within {} moves",
                        2 * n
                    )));
                }
            }
        }
    }
    Ok(GreedyRun { moves, state })
}

/// Greedy synthesis: runs the search and emits the circuit.
pub fn greedy_synth<S: SearchState>(start: &S, config: &SearchConfig) -> Result<Circuit> {
    greedy_run(start, config)?.state.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::CssCode;
    use crate::css::ReductionState;
    use crate::f2::BitMatrix;
    use crate::pauli::PauliString;
    use crate::search::TableauState;
    use crate::tableau::Tableau;

    fn steane() -> CssCode {
        let h = BitMatrix::from_strs(&["0110110", "1010101", "0001111"]);
        let l = BitMatrix::from_strs(&["1001001"]);
        CssCode::new(h.clone(), h, Some(l.clone()), Some(l)).unwrap()
    }

    #[test]
    fn steane_step_takes_maximal_reduction() {
        let s = ReductionState::encoder_instance(&steane());
        let (mv, next) = greedy_step(&s).unwrap();
        let best = (0..7)
            .flat_map(|c| (0..7).filter(move |&t| t != c).map(move |t| (c, t)))
            .map(|(c, t)| s.delta(c, t))
            .min()
            .unwrap();
        assert_eq!(next.h() as isize - s.h() as isize, best);
        assert_eq!(s.delta(mv.0, mv.1), best);
    }

    #[test]
    fn steane_greedy_is_short() {
        let s = ReductionState::encoder_instance(&steane());
        let run = greedy_run(&s, &SearchConfig::default()).unwrap();
        assert!(run.moves.len() <= 12, "{} moves", run.moves.len());
        let c = run.state.finish().unwrap();
        assert_eq!(c.two_qubit_count(), run.moves.len());
    }

    #[test]
    fn canonical_instance_needs_no_moves() {
        let s = TableauState::new(Tableau::identity(3, 1));
        let run = greedy_run(&s, &SearchConfig::default()).unwrap();
        assert!(run.moves.is_empty());
    }

    #[test]
    fn bell_takes_one_transvection() {
        let p = |s: &str| PauliString::parse(s).unwrap();
        let t = Tableau::from_rows(2, 0, &[p("ZI"), p("IX"), p("XX"), p("ZZ")]).unwrap();
        let run = greedy_run(&TableauState::new(t), &SearchConfig::default()).unwrap();
        assert_eq!(run.moves.len(), 1);
    }
}
