//! Exact synthesis by bounded model checking: the reduction of a tableau (or
//! CSS matrix) to goal form is unrolled over a fixed horizon, encoded as CNF
//! and handed to a SAT solver.

pub mod cnf;
pub mod encode;
pub mod solver;

use std::time::{Duration, Instant};

pub use cnf::{CnfInstance, VarRole};
pub use encode::{bound_two_qubit_gates, encode, predicted_named_vars, Encoding, Horizon, Problem};
pub use solver::{BuiltinSolver, ExternalSolver, SatOutcome, SatSolver};

use crate::circuit::{Circuit, Gate, LocalClifford};
use crate::css::ReductionState;
use crate::error::{Error, Result};
use crate::search::SearchState;
use crate::tableau::{complete_tableau, is_goal};

/// Selected gates per transition of a model.
pub fn decode_model(enc: &Encoding, model: &[bool]) -> Result<Vec<Vec<Gate>>> {
    if model.len() != enc.cnf.num_vars() + 1 {
        return Err(Error::Decode(format!(
            "model has {} entries for {} variables",
            model.len().saturating_sub(1),
            enc.cnf.num_vars()
        )));
    }
    let n = enc.n;
    let val = |role: VarRole| enc.cnf.lookup(role).is_some_and(|v| model[v as usize]);
    let mut layers = Vec::with_capacity(enc.local_stage.len());
    for (d, &local) in enc.local_stage.iter().enumerate() {
        let mut layer = Vec::new();
        if local {
            for q in 0..n {
                let chosen: Vec<usize> = (0..6).filter(|&c| val(VarRole::Local { d, q, c })).collect();
                let [c] = chosen[..] else {
                    return Err(Error::Decode(format!(
                        "qubit {q} has {} local Cliffords in step {d}",
                        chosen.len()
                    )));
                };
                layer.extend(LocalClifford::all()[c].gates(q));
            }
            layers.push(layer);
            continue;
        }
        let mut used = vec![0usize; n];
        for i in 0..n {
            if val(VarRole::Id { d, i }) {
                used[i] += 1;
            }
            if val(VarRole::H { d, i }) {
                used[i] += 1;
                layer.push(Gate::H(i));
            }
            if val(VarRole::S { d, i }) {
                used[i] += 1;
                layer.push(Gate::S(i));
            }
            for j in 0..n {
                if i != j && val(VarRole::Cx { d, i, j }) {
                    used[i] += 1;
                    used[j] += 1;
                    layer.push(Gate::Cx(i, j));
                }
            }
        }
        if let Some(q) = used.iter().position(|&u| u != 1) {
            return Err(Error::Decode(format!(
                "qubit {q} has {} operations in layer {d}",
                used[q]
            )));
        }
        layers.push(layer);
    }
    Ok(layers)
}

/// Replays a reduction on the problem's start state and emits the encoder.
/// Fails if the replay does not end in goal form.
pub fn encoder_from_reduction(problem: &Problem, layers: &[Vec<Gate>]) -> Result<Circuit> {
    match problem {
        Problem::Tableau(code) => {
            let mut t = complete_tableau(code)?;
            let gates: Vec<Gate> = layers.iter().flatten().copied().collect();
            t.apply_all(&gates)?;
            let roles = is_goal(&t)
                .ok_or_else(|| Error::Decode("decoded circuit does not reach goal form".into()))?;
            let inverse: Vec<Gate> = gates.iter().rev().map(Gate::inverse).collect();
            Ok(Circuit::from_gates(code.n(), inverse)?.with_roles(roles))
        }
        Problem::Css(code, target) => {
            let mut s = match target {
                crate::css::CssTarget::Encoder => ReductionState::encoder_instance(code),
                crate::css::CssTarget::ZeroState => ReductionState::zero_state_instance(code),
                crate::css::CssTarget::PlusState => ReductionState::plus_state_instance(code),
            };
            for g in layers.iter().flatten() {
                match *g {
                    Gate::Cx(c, t) => s.apply_cnot(c, t)?,
                    other => {
                        return Err(Error::Decode(format!("non-CNOT gate {other} in CSS model")))
                    }
                }
            }
            if !s.is_goal() {
                return Err(Error::Decode("decoded circuit does not reach goal form".into()));
            }
            s.finish()
        }
    }
}

/// Result of an exact search.
#[derive(Clone, Debug)]
pub struct ExactOutcome {
    /// Best verified circuit found, if any.
    pub circuit: Option<Circuit>,
    /// Largest horizon proven unsatisfiable.
    pub last_unsat: Option<usize>,
    /// Whether the search ran out of time before proving optimality.
    pub timed_out: bool,
}

fn remaining(deadline: Option<Instant>) -> Option<Option<Duration>> {
    match deadline {
        None => Some(None),
        Some(d) => {
            let now = Instant::now();
            (now < d).then(|| Some(d - now))
        }
    }
}

fn solve_horizon(
    problem: &Problem,
    horizon: Horizon,
    gate_bound: Option<usize>,
    solver: &dyn SatSolver,
    deadline: Option<Instant>,
) -> Result<Option<Option<Circuit>>> {
    let Some(budget) = remaining(deadline) else {
        return Ok(None);
    };
    let mut enc = encode(problem, horizon);
    if let Some(g) = gate_bound {
        bound_two_qubit_gates(&mut enc, g);
    }
    match solver.solve(&enc.cnf, budget)? {
        SatOutcome::Unknown => Ok(None),
        SatOutcome::Unsat => Ok(Some(None)),
        SatOutcome::Sat(model) => {
            if !enc.cnf.satisfied_by(&model) {
                return Err(Error::Solver("solver model violates the formula".into()));
            }
            let layers = decode_model(&enc, &model)?;
            Ok(Some(Some(encoder_from_reduction(problem, &layers)?)))
        }
    }
}

/// Solves for `d = 0, 1, …, d_limit` until the first satisfiable depth.
pub fn synth_depth_optimal(
    problem: &Problem,
    d_limit: usize,
    solver: &dyn SatSolver,
    timeout: Option<Duration>,
) -> Result<ExactOutcome> {
    let deadline = timeout.map(|t| Instant::now() + t);
    let mut last_unsat = None;
    for d in 0..=d_limit {
        match solve_horizon(problem, Horizon::Layers(d), None, solver, deadline)? {
            None => {
                return Ok(ExactOutcome {
                    circuit: None,
                    last_unsat,
                    timed_out: true,
                })
            }
            Some(None) => last_unsat = Some(d),
            Some(Some(c)) => {
                return Ok(ExactOutcome {
                    circuit: Some(c),
                    last_unsat,
                    timed_out: false,
                })
            }
        }
    }
    Ok(ExactOutcome {
        circuit: None,
        last_unsat,
        timed_out: false,
    })
}

/// How two-qubit gates are minimized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateMode {
    /// Optimal depth first, then a decreasing cardinality bound at that depth.
    LayerCardinality,
    /// One CNOT per step; the horizon shrinks from `bound` until UNSAT.
    GateBased,
}

/// Minimizes the two-qubit gate count. `bound` is the depth limit in
/// layer mode and the starting gate budget in gate-based mode.
pub fn synth_gate_optimal(
    problem: &Problem,
    mode: GateMode,
    bound: usize,
    solver: &dyn SatSolver,
    timeout: Option<Duration>,
) -> Result<ExactOutcome> {
    let deadline = timeout.map(|t| Instant::now() + t);
    let (depth, mut best) = match mode {
        GateMode::LayerCardinality => {
            let first = synth_depth_optimal(problem, bound, solver, timeout)?;
            if first.circuit.is_none() {
                return Ok(first);
            }
            (Some(first.last_unsat.map_or(0, |u| u + 1)), first.circuit)
        }
        GateMode::GateBased => (None, None),
    };
    let mut last_unsat = None;
    loop {
        let target = match &best {
            Some(c) if c.two_qubit_count() == 0 => break,
            Some(c) => c.two_qubit_count() - 1,
            None => bound,
        };
        let (h, cap) = match depth {
            Some(d) => (Horizon::Layers(d), Some(target)),
            None => (Horizon::Gates(target), None),
        };
        match solve_horizon(problem, h, cap, solver, deadline)? {
            None => {
                return Ok(ExactOutcome {
                    circuit: best,
                    last_unsat,
                    timed_out: true,
                })
            }
            Some(None) => {
                last_unsat = Some(target);
                break;
            }
            Some(Some(c)) => best = Some(c),
        }
    }
    Ok(ExactOutcome {
        circuit: best,
        last_unsat,
        timed_out: false,
    })
}
