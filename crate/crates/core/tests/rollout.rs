use std::time::Duration;

use encsynth::code::AnyCode;
use encsynth::codes;
use encsynth::css::ReductionState;
use encsynth::greedy::{greedy_run, greedy_step, greedy_synth, SearchConfig};
use encsynth::rollout::*;
use encsynth::search::{Objective, SearchState, TableauState};
use encsynth::synth::{reference_code, synthesize, Mode};
use encsynth::tableau::complete_tableau;
use encsynth::verify::check_encoder;

fn steane() -> ReductionState {
    ReductionState::encoder_instance(&codes::steane())
}

fn config(levels: usize, t: &[usize], et: bool, objective: Objective) -> RolloutConfig {
    RolloutConfig {
        levels,
        candidates: t.to_vec(),
        early_termination: et,
        search: SearchConfig::with_objective(objective),
        time_budget: None,
    }
}

#[test]
fn level_zero_is_greedy() {
    for objective in [Objective::Gates, Objective::Depth] {
        let cfg = config(0, &[10], true, objective);
        let (c, truncated) = rollout_synth(&steane(), &cfg).unwrap();
        assert!(!truncated);
        assert_eq!(c, greedy_synth(&steane(), &cfg.search).unwrap());
    }
    let t = TableauState::new(complete_tableau(&codes::five_qubit()).unwrap());
    let cfg = config(0, &[10], true, Objective::Gates);
    assert_eq!(rollout_synth(&t, &cfg).unwrap().0, greedy_synth(&t, &cfg.search).unwrap());
}

#[test]
fn level_zero_score_matches_greedy_metrics() {
    let cfg = config(1, &[4], false, Objective::Gates);
    let done = rollout_score(&steane(), 0, &cfg).unwrap();
    let g = greedy_run(&steane(), &cfg.search).unwrap();
    assert_eq!(done.metrics(), g.metrics());
    assert!(done.is_goal());
}

#[test]
fn goal_state_costs_nothing() {
    let code = encsynth::code::StabilizerCode::from_stabilizers(
        3,
        ["IZI", "IIZ"].iter().map(|s| encsynth::pauli::PauliString::parse(s).unwrap()).collect(),
    )
    .unwrap();
    let t = TableauState::new(complete_tableau(&code).unwrap());
    let cfg = config(2, &[4, 2], true, Objective::Gates);
    let (c, _) = rollout_synth(&t, &cfg).unwrap();
    assert_eq!(c.two_qubit_count(), 0);
}

#[test]
fn shortlist_extremes() {
    let s = steane();
    let first = shortlist(&s, 1);
    let (mv, _) = greedy_step(&s).unwrap();
    assert_eq!(first, vec![mv]);
    // Only improving moves qualify on the CSS path, so a huge t returns all of them.
    let current = s.score();
    let improving = s
        .candidates(None)
        .into_iter()
        .filter(|&m| s.score_after(m) < current)
        .count();
    assert_eq!(shortlist(&s, 10_000).len(), improving);
}

#[test]
fn shortlist_is_sorted_by_ones_after_move() {
    let s = steane();
    let ones = |st: &ReductionState| st.matrix().count_ones();
    let picked = shortlist(&s, 5);
    assert_eq!(picked.len(), 5);
    let after: Vec<usize> = picked
        .iter()
        .map(|&m| {
            let mut t = s.clone();
            t.apply(m);
            ones(&t)
        })
        .collect();
    assert!(after.windows(2).all(|w| w[0] <= w[1]));
    // Exhaustive check: no unpicked move leaves fewer ones than the worst pick.
    let worst = *after.last().unwrap();
    let n = s.n();
    let mut better = 0;
    for c in 0..n {
        for t in 0..n {
            if c != t {
                let mut u = s.clone();
                u.apply_cnot(c, t).unwrap();
                if ones(&u) < worst {
                    better += 1;
                }
            }
        }
    }
    assert!(better < 5);
}

#[test]
fn level_one_dominates_greedy_across_library() {
    for name in codes::NAMES.iter().filter(|n| **n != "golay") {
        let code = codes::builtin(name).unwrap();
        for objective in [Objective::Gates, Objective::Depth] {
            let g = synthesize(&code, Mode::Encoder, &config(0, &[1], false, objective), false).unwrap();
            for t in [1, 3] {
                let r = synthesize(&code, Mode::Encoder, &config(1, &[t], false, objective), false).unwrap();
                assert!(
                    r.metrics.primary(objective) <= g.metrics.primary(objective),
                    "{name} {objective:?} t={t}"
                );
            }
        }
    }
}

#[test]
fn two_levels_on_fourtwotwo_verify() {
    let code = codes::builtin("fourtwotwo").unwrap();
    let mut cfg = config(2, &[4, 2], true, Objective::Gates);
    cfg.time_budget = Some(Duration::from_secs(30));
    for force_tableau in [false, true] {
        let s = synthesize(&code, Mode::Encoder, &cfg, force_tableau).unwrap();
        assert!(check_encoder(&s.circuit, &s.reference).unwrap());
    }
}

#[test]
fn zero_budget_still_returns_a_verified_circuit() {
    let code = codes::builtin("qr17").unwrap();
    let mut cfg = config(2, &[8, 4], false, Objective::Gates);
    cfg.time_budget = Some(Duration::ZERO);
    let s = synthesize(&code, Mode::ZeroState, &cfg, false).unwrap();
    assert!(s.truncated);
    let reference = reference_code(&code, Mode::ZeroState).unwrap();
    assert!(check_encoder(&s.circuit, &reference).unwrap());
}

#[test]
fn thread_count_does_not_change_the_result() {
    let run = |threads: usize, code: &AnyCode, force: bool| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let cfg = config(2, &[6, 3], true, Objective::Gates);
        pool.install(|| synthesize(code, Mode::Encoder, &cfg, force).unwrap().circuit)
    };
    for (name, force) in [("steane", false), ("five_qubit", false), ("fourtwotwo", true)] {
        let code = codes::builtin(name).unwrap();
        assert_eq!(run(1, &code, force), run(4, &code, force), "{name}");
    }
}
