//! Multi-level rollout search on top of greedy completion.
//!
//! At each stage the `t` best moves by heuristic score are each completed by
//! a rollout of one level less (level 0 is plain greedy) and the search moves
//! to the candidate whose completed circuit is best. The best complete
//! circuit seen so far is kept as the incumbent; it starts as the greedy
//! circuit, so the result is never worse than greedy.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::greedy::{greedy_run, SearchConfig};
use crate::search::{rank_moves, SearchState};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RolloutConfig {
    /// Rollout depth `ℓ`; 0 is greedy.
    pub levels: usize,
    /// Candidates per level, outermost first. Missing entries halve the
    /// previous one.
    pub candidates: Vec<usize>,
    pub early_termination: bool,
    pub search: SearchConfig,
    pub time_budget: Option<Duration>,
}

impl Default for RolloutConfig {
    fn default() -> Self {
        Self {
            levels: 1,
            candidates: vec![10],
            early_termination: true,
            search: SearchConfig::default(),
            time_budget: None,
        }
    }
}

impl RolloutConfig {
    /// Candidate count at nesting depth `d` (0 = outermost).
    pub fn candidates_at(&self, d: usize) -> usize {
        let mut t = self.candidates.first().copied().unwrap_or(10);
        for i in 1..=d {
            t = self.candidates.get(i).copied().unwrap_or(t / 2);
        }
        t.max(1)
    }
}

/// Result of a rollout: a state at goal and whether the time budget cut the
/// search short.
#[derive(Clone, Debug)]
pub struct RolloutRun<S> {
    pub state: S,
    pub truncated: bool,
}

struct Ctx<'a> {
    config: &'a RolloutConfig,
    deadline: Option<Instant>,
    truncated: AtomicBool,
}

impl Ctx<'_> {
    fn new(config: &RolloutConfig, deadline: Option<Instant>) -> Ctx<'_> {
        Ctx {
            config,
            deadline,
            truncated: AtomicBool::new(false),
        }
    }

    fn expired(&self) -> bool {
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.truncated.store(true, Ordering::Relaxed);
        }
        self.truncated.load(Ordering::Relaxed)
    }
}

/// Completes every candidate; results stay in shortlist order.
fn complete_all<S: SearchState>(cur: &S, cands: &[S::Move], level: usize, depth: usize, ctx: &Ctx) -> Vec<Option<S>> {
    let one = |&mv: &S::Move| {
        if ctx.expired() {
            return None;
        }
        let mut next = cur.clone();
        next.apply(mv);
        run(&next, level - 1, depth + 1, ctx).ok()
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        cands.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    cands.iter().map(one).collect()
}

/// The `t` best moves from `state` by heuristic score. When the problem
/// requires strict improvement only improving moves are kept.
pub fn shortlist<S: SearchState>(state: &S, t: usize) -> Vec<S::Move> {
    let cands = state.candidates(None);
    let current = state.score();
    rank_moves(state, &cands, t)
        .into_iter()
        .filter(|(sc, _)| !state.requires_improvement() || *sc < current)
        .map(|(_, m)| m)
        .collect()
}

/// Completes `state` with a rollout of the given level and returns the goal
/// state reached.
pub fn rollout_score<S: SearchState>(state: &S, level: usize, config: &RolloutConfig) -> Result<S> {
    let ctx = Ctx::new(config, None);
    let depth = config.levels.saturating_sub(level);
    run(state, level, depth, &ctx)
}

fn run<S: SearchState>(start: &S, level: usize, depth: usize, ctx: &Ctx) -> Result<S> {
    let cfg = ctx.config;
    if level == 0 {
        return Ok(greedy_run(start, &cfg.search)?.state);
    }
    let objective = cfg.search.objective;
    let key = |s: &S| s.metrics().key(objective);
    let limit = cfg.search.step_limit(start.num_qubits());
    let t = ctx.config.candidates_at(depth);

    let mut incumbent: Option<S> = greedy_run(start, &cfg.search).ok().map(|r| r.state);
    let mut cur = start.clone();
    let mut steps = 0;

    while !cur.is_goal() {
        if ctx.expired() || steps >= limit {
            break;
        }
        if let Some(inc) = &incumbent {
            if cur.metrics().primary(objective) >= inc.metrics().primary(objective) {
                break;
            }
        }
        let cands = shortlist(&cur, t);
        if cands.is_empty() {
            if cur.requires_improvement() && cur.escape().is_ok() {
                steps += 1;
                continue;
            }
            break;
        }
        let before = incumbent.as_ref().map(key);
        let mut best: Option<(S::Move, (usize, usize))> = None;
        let done = complete_all(&cur, &cands, level, depth, ctx);
        for (mv, done) in cands.into_iter().zip(done) {
            let Some(done) = done else { continue };
            let k = key(&done);
            if best.is_none_or(|(_, b)| k < b) {
                best = Some((mv, k));
            }
            if incumbent.as_ref().is_none_or(|inc| k < key(inc)) {
                incumbent = Some(done);
            }
        }
        let Some((mv, k)) = best else { break };
        if cfg.early_termination && before.is_some_and(|b| k >= b) {
            break;
        }
        cur.apply(mv);
        steps += 1;
    }
    if cur.is_goal() && incumbent.as_ref().is_none_or(|inc| key(&cur) < key(inc)) {
        incumbent = Some(cur);
    }
    incumbent.ok_or_else(|| Error::Stuck("rollout found no complete circuit".into()))
}

/// Rollout search from `start` honoring the configured time budget.
pub fn rollout_run<S: SearchState>(start: &S, config: &RolloutConfig) -> Result<RolloutRun<S>> {
    let ctx = Ctx::new(config, config.time_budget.map(|b| Instant::now() + b));
    let state = run(start, config.levels, 0, &ctx)?;
    Ok(RolloutRun {
        state,
        truncated: ctx.truncated.into_inner(),
    })
}

pub fn rollout_synth<S: SearchState>(start: &S, config: &RolloutConfig) -> Result<(Circuit, bool)> {
    let r = rollout_run(start, config)?;
    Ok((r.state.finish()?, r.truncated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::CssCode;
    use crate::css::ReductionState;
    use crate::f2::BitMatrix;
    use crate::search::Objective;

    fn steane() -> ReductionState {
        let h = BitMatrix::from_strs(&["0110110", "1010101", "0001111"]);
        let l = BitMatrix::from_strs(&["1001001"]);
        ReductionState::encoder_instance(&CssCode::new(h.clone(), h, Some(l.clone()), Some(l)).unwrap())
    }

    #[test]
    fn candidate_schedule() {
        let c = RolloutConfig {
            candidates: vec![10],
            ..RolloutConfig::default()
        };
        assert_eq!((c.candidates_at(0), c.candidates_at(1), c.candidates_at(2)), (10, 5, 2));
        let c = RolloutConfig {
            candidates: vec![10, 2],
            ..RolloutConfig::default()
        };
        assert_eq!(c.candidates_at(1), 2);
    }

    #[test]
    fn level_one_never_worse_than_greedy() {
        let s = steane();
        for objective in [Objective::Gates, Objective::Depth] {
            let search = SearchConfig::with_objective(objective);
            let g = greedy_run(&s, &search).unwrap().metrics().key(objective);
            for et in [true, false] {
                let cfg = RolloutConfig {
                    levels: 1,
                    candidates: vec![5],
                    early_termination: et,
                    search: search.clone(),
                    time_budget: None,
                };
                let r = rollout_run(&s, &cfg).unwrap();
                assert!(r.state.metrics().key(objective) <= g);
                assert!(!r.truncated);
            }
        }
    }

    #[test]
    fn zero_budget_returns_incumbent() {
        let cfg = RolloutConfig {
            time_budget: Some(Duration::ZERO),
            ..RolloutConfig::default()
        };
        let r = rollout_run(&steane(), &cfg).unwrap();
        assert!(r.truncated);
        assert!(r.state.is_goal());
    }
}
