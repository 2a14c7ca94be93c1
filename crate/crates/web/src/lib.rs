//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export returns a JSON string (or an error message) so the page
//! needs no generated type glue beyond `wasm-bindgen` itself.

use encsynth::code::{AnyCode, CssCode};
use encsynth::codes;
use encsynth::css::ReductionState;
use encsynth::greedy::{escape_local_minimum, greedy_step, SearchConfig};
use encsynth::heuristics::{block_rank, h_greedy};
use encsynth::rollout::RolloutConfig;
use encsynth::search::Objective;
use encsynth::synth::{reference_code, synthesize, Mode};
use encsynth::tableau::complete_tableau;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn load(code: &str) -> Result<AnyCode, String> {
    match codes::builtin(code) {
        Some(c) => Ok(c),
        None => AnyCode::parse(code).map_err(|e| e.to_string()),
    }
}

fn parse_mode(mode: &str) -> Result<Mode, String> {
    mode.parse().map_err(|e: encsynth::Error| e.to_string())
}

fn matrix_rows(s: &ReductionState) -> Vec<String> {
    s.matrix().to_text().lines().map(str::to_string).collect()
}

/// Names and sizes of the built-in codes.
#[wasm_bindgen]
pub fn builtin_codes() -> String {
    let list: Vec<Value> = codes::NAMES
        .iter()
        .map(|name| {
            let c = codes::builtin(name).expect("listed code");
            json!({ "name": name, "n": c.n(), "k": c.k(), "css": c.as_css().is_some() })
        })
        .collect();
    Value::Array(list).to_string()
}

/// Greedy column-addition reduction of a CSS code, one CNOT per call.
#[wasm_bindgen]
pub struct Stepper {
    state: ReductionState,
    code: CssCode,
    mode: Mode,
}

#[wasm_bindgen]
impl Stepper {
    /// `code` is a built-in name or code-file text; it must be CSS.
    #[wasm_bindgen(constructor)]
    pub fn new(code: &str, mode: &str) -> Result<Stepper, String> {
        let code = load(code)?.as_css().ok_or("the stepper needs a CSS code")?;
        let mode = parse_mode(mode)?;
        let state = match mode {
            Mode::Encoder => ReductionState::encoder_instance(&code),
            Mode::ZeroState => ReductionState::zero_state_instance(&code),
            Mode::PlusState => ReductionState::plus_state_instance(&code),
        };
        Ok(Stepper { state, code, mode })
    }

    /// Current matrix, score and goal status.
    pub fn snapshot(&self) -> String {
        let roles = self.state.goal_form();
        json!({
            "rows": matrix_rows(&self.state),
            "logical_rows": self.state.k(),
            "score": self.state.h(),
            "gates": self.state.gates(),
            "done": roles.is_some(),
        })
        .to_string()
    }

    /// Applies the best CNOT (escaping local minima when needed) and
    /// returns the new snapshot plus the gates just applied.
    pub fn step(&mut self) -> Result<String, String> {
        if self.state.goal_form().is_some() {
            return Ok(self.with_applied(&[]));
        }
        let before = self.state.gates().len();
        if let Some((_, next)) = greedy_step(&self.state) {
            self.state = next;
        } else {
            let mut escaped = false;
            for level in 1..=3 {
                if let Some(next) = escape_local_minimum(&self.state, level).map_err(|e| e.to_string())? {
                    self.state = next;
                    escaped = true;
                    break;
                }
            }
            if !escaped {
                return Err("stuck in a local minimum".into());
            }
        }
        let applied = self.state.gates()[before..].to_vec();
        Ok(self.with_applied(&applied))
    }

    /// The finished encoder in `.sqc` form, once the goal is reached.
    pub fn circuit(&self) -> Result<String, String> {
        let roles = self.state.goal_form().ok_or("goal not reached yet")?;
        let c = self.state.encoder(&roles).map_err(|e| e.to_string())?;
        let reference = reference_code(&AnyCode::Css(self.code.clone()), self.mode).map_err(|e| e.to_string())?;
        let ok = encsynth::verify::check_encoder(&c, &reference).map_err(|e| e.to_string())?;
        Ok(json!({ "sqc": c.to_sqc(), "two_qubit": c.two_qubit_count(), "depth": c.depth(), "verified": ok })
            .to_string())
    }

    fn with_applied(&self, applied: &[(usize, usize)]) -> String {
        let mut v: Value = serde_json::from_str(&self.snapshot()).expect("own json");
        v["applied"] = json!(applied);
        v.to_string()
    }
}

/// Rollout synthesis with the given settings; returns the circuit and its
/// cost. There is no wall-clock budget: the browser target has no monotonic
/// clock in `std`, so the page caps levels and candidates instead.
#[wasm_bindgen]
pub fn synthesize_circuit(
    code: &str,
    mode: &str,
    objective: &str,
    levels: usize,
    candidates: usize,
) -> Result<String, String> {
    let code = load(code)?;
    let mode = parse_mode(mode)?;
    let objective: Objective = objective.parse().map_err(|e: encsynth::Error| e.to_string())?;
    if levels > 3 || candidates == 0 {
        return Err("levels must be 0..=3 and candidates positive".into());
    }
    let cfg = RolloutConfig {
        levels,
        candidates: vec![candidates],
        early_termination: true,
        search: SearchConfig::with_objective(objective),
        time_budget: None,
    };
    let s = synthesize(&code, mode, &cfg, false).map_err(|e| e.to_string())?;
    // One "h q" / "s q" / "cx c t" string per elementary gate.
    let gates: Vec<String> = s.circuit.decomposed().gates.iter().map(ToString::to_string).collect();
    Ok(json!({
        "n": s.circuit.n,
        "sqc": s.circuit.to_sqc(),
        "gates": gates,
        "two_qubit": s.metrics.two_qubit,
        "depth": s.circuit.depth(),
        "truncated": s.truncated,
    })
    .to_string())
}

/// Ranks of the 2x2 qubit-pair blocks of the code's completed tableau, the
/// quantity the greedy heuristic drives to a permutation pattern.
#[wasm_bindgen]
pub fn block_rank_heatmap(code: &str, mode: &str) -> Result<String, String> {
    let code = load(code)?;
    let reference = reference_code(&code, parse_mode(mode)?).map_err(|e| e.to_string())?;
    let t = complete_tableau(&reference).map_err(|e| e.to_string())?;
    let n = t.n();
    let ranks: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| block_rank(&t, i, j)).collect()).collect();
    let score = h_greedy(&t);
    Ok(json!({ "n": n, "ranks": ranks, "column_weights": score.cols, "row_weights": score.rows }).to_string())
}
