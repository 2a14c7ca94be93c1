use encsynth::codes;
use encsynth::css::ReductionState;
use encsynth::f2::BitMatrix;
use encsynth::greedy::*;
use encsynth::search::{Objective, SearchState, TableauState};
use encsynth::synth::{reference_code, Mode};
use encsynth::tableau::complete_tableau;
use encsynth::verify::check_encoder;
use encsynth::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bell_state() -> TableauState {
    let p = |s: &str| encsynth::pauli::PauliString::parse(s).unwrap();
    let bell = encsynth::code::StabilizerCode::from_stabilizers(2, vec![p("XX"), p("ZZ")]).unwrap();
    TableauState::new(complete_tableau(&bell).unwrap())
}

#[test]
fn candidate_counts() {
    assert_eq!(candidate_moves(&bell_state(), None).len(), 9);
    let s = ReductionState::from_matrix(&BitMatrix::from_strs(&["111"]), 0).unwrap();
    assert_eq!(candidate_moves(&s, None).len(), 6);
    let masked = candidate_moves(&s, Some(&[true, false, false]));
    assert_eq!(masked.len(), 2);
    assert!(masked.iter().all(|&(c, t)| c != 0 && t != 0));
}

#[test]
fn bell_reaches_goal_in_one_move() {
    let start = bell_state();
    let moves = candidate_moves(&start, None);
    let reaching: Vec<_> = moves
        .iter()
        .filter(|&&m| {
            let mut s = start.clone();
            s.apply(m);
            s.is_goal()
        })
        .collect();
    assert!(!reaching.is_empty());
    let (_, next) = greedy_step(&start).unwrap();
    assert!(next.is_goal());
}

#[test]
fn level_one_row_addition() {
    let s = ReductionState::from_matrix(&BitMatrix::from_strs(&["1110", "1100"]), 0).unwrap();
    let next = escape_local_minimum(&s, 1).unwrap().expect("row addition helps");
    assert!(next.h() < s.h());
    assert!(next.gates().is_empty());
}

#[test]
fn level_two_on_echelon_state_escalates() {
    let s = ReductionState::from_matrix(&BitMatrix::from_strs(&["100", "010"]), 0).unwrap();
    assert!(escape_local_minimum(&s, 1).unwrap().is_none());
    let after = escape_local_minimum(&s, 2).unwrap();
    // Already in goal form after echelon: counts as progress.
    assert!(after.is_none_or(|a| a.is_goal()));
}

#[test]
fn bad_level_is_rejected() {
    let s = ReductionState::from_matrix(&BitMatrix::from_strs(&["11"]), 0).unwrap();
    assert!(matches!(escape_local_minimum(&s, 4), Err(Error::Contract(_))));
}

fn h_after(s: &ReductionState, gates: &[(usize, usize)]) -> usize {
    let mut s = s.clone();
    for &g in gates {
        s.apply(g);
    }
    s.h()
}

/// Level three agrees with brute force over every ordered CNOT pair on
/// random local minima.
#[test]
fn level_three_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut minima = 0;
    for _ in 0..4000 {
        let n = rng.gen_range(3..=5);
        let rows = rng.gen_range(1..=2);
        let strs: Vec<String> = (0..rows)
            .map(|_| (0..n).map(|_| if rng.gen_bool(0.5) { '1' } else { '0' }).collect())
            .collect();
        let refs: Vec<&str> = strs.iter().map(String::as_str).collect();
        let s = ReductionState::from_matrix(&BitMatrix::from_strs(&refs), 0).unwrap();
        if s.is_goal() || greedy_step(&s).is_some() {
            continue;
        }
        minima += 1;
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|c| (0..n).filter(move |&t| t != c).map(move |t| (c, t)))
            .collect();
        let best = pairs
            .iter()
            .flat_map(|&a| pairs.iter().map(move |&b| (a, b)))
            .map(|(a, b)| h_after(&s, &[a, b]))
            .min()
            .unwrap();
        match escape_local_minimum(&s, 3) {
            Ok(Some(next)) => {
                assert!(best < s.h());
                assert_eq!(next.h(), best, "level three takes the best pair");
                assert_eq!(next.gates().len(), 2);
            }
            Ok(None) => unreachable!(),
            Err(Error::Stuck(_)) => assert!(best >= s.h()),
            Err(e) => panic!("{e}"),
        }
    }
    assert!(minima > 20, "only {minima} local minima sampled");
}

#[test]
fn steane_encoder_is_short_and_valid() {
    let code = codes::steane();
    let run = greedy_run(&ReductionState::encoder_instance(&code), &SearchConfig::default()).unwrap();
    let c = run.state.finish().unwrap();
    assert!(c.two_qubit_count() <= 12);
    assert!(check_encoder(&c, &code.to_stabilizer_code()).unwrap());
}

#[test]
fn canonical_instance_is_empty() {
    let m = BitMatrix::from_strs(&["1000", "0100"]);
    let s = ReductionState::from_matrix(&m, 1).unwrap();
    let run = greedy_run(&s, &SearchConfig::default()).unwrap();
    assert!(run.moves.is_empty());
    assert_eq!(run.state.finish().unwrap().two_qubit_count(), 0);
}

fn configs() -> Vec<SearchConfig> {
    let mut out = Vec::new();
    for objective in [Objective::Gates, Objective::Depth] {
        for seed in 0..5 {
            out.push(SearchConfig {
                objective,
                seed,
                shuffle_ties: true,
                ..SearchConfig::default()
            });
        }
    }
    out
}

/// Every small library code, both objectives, five seeds.
#[test]
fn library_outputs_verify() {
    for name in codes::NAMES {
        let code = codes::builtin(name).unwrap();
        if code.n() > 17 {
            continue;
        }
        let reference = reference_code(&code, Mode::Encoder).unwrap();
        for cfg in configs() {
            let c = match code.as_css() {
                Some(css) => greedy_synth(&ReductionState::encoder_instance(&css), &cfg),
                None => greedy_synth(&TableauState::new(complete_tableau(&reference).unwrap()), &cfg),
            }
            .unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(check_encoder(&c, &reference).unwrap(), "{name} {cfg:?}");
            for layer in c.two_qubit_layers() {
                let mut seen = vec![false; c.n];
                for g in layer {
                    let (a, b) = g.qubits();
                    for q in std::iter::once(a).chain(b) {
                        assert!(!seen[q], "qubit {q} used twice in a layer");
                        seen[q] = true;
                    }
                }
            }
        }
    }
}

#[test]
fn deterministic_and_no_idle_moves() {
    for name in ["five_qubit", "happy_4_2", "steane", "qr17"] {
        let code = codes::builtin(name).unwrap();
        let reference = reference_code(&code, Mode::Encoder).unwrap();
        let cfg = SearchConfig::with_objective(Objective::Depth);
        match code.as_css() {
            Some(css) => {
                let start = ReductionState::encoder_instance(&css);
                let a = greedy_run(&start, &cfg).unwrap();
                let b = greedy_run(&start, &cfg).unwrap();
                assert_eq!(a.state.finish().unwrap(), b.state.finish().unwrap());
                let mut s = start.clone();
                for &(c, t) in a.state.gates() {
                    let before = s.matrix();
                    s.apply_cnot(c, t).unwrap();
                    assert_ne!(before, s.matrix(), "{name}: idle CNOT");
                }
            }
            None => {
                let start = TableauState::new(complete_tableau(&reference).unwrap());
                let a = greedy_run(&start, &cfg).unwrap();
                let b = greedy_run(&start, &cfg).unwrap();
                assert_eq!(a.moves, b.moves);
                let mut s = start.clone();
                for &m in &a.moves {
                    let before = s.tableau().rows();
                    s.apply(m);
                    assert_ne!(before, s.tableau().rows(), "{name}: idle transvection");
                }
            }
        }
    }
}

#[test]
fn tableau_fallback_still_verifies() {
    for name in ["five_qubit", "happy_5_1", "happy_4_2", "happy_3_3"] {
        let reference = reference_code(&codes::builtin(name).unwrap(), Mode::Encoder).unwrap();
        let cfg = SearchConfig {
            tableau_fallback: true,
            ..SearchConfig::default()
        };
        let c = greedy_synth(&TableauState::new(complete_tableau(&reference).unwrap()), &cfg).unwrap();
        assert!(check_encoder(&c, &reference).unwrap());
    }
}
