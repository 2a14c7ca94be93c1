//! One-call synthesis: picks the CSS elimination or the full-tableau search,
//! runs greedy or rollout, and verifies the result before returning it.

use std::str::FromStr;

use crate::circuit::Circuit;
use crate::code::{AnyCode, StabilizerCode};
use crate::css::{target_code, CssTarget, ReductionState};
use crate::error::{Error, Result};
use crate::rollout::{rollout_run, RolloutConfig};
use crate::search::{Metrics, SearchState, TableauState};
use crate::tableau::complete_tableau;
use crate::verify::check_encoder;

/// What the circuit prepares.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// General-state encoder.
    #[default]
    Encoder,
    /// Logical `|0…0⟩`.
    ZeroState,
    /// Logical `|+…+⟩`.
    PlusState,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "encoder" => Ok(Mode::Encoder),
            "zero" => Ok(Mode::ZeroState),
            "plus" => Ok(Mode::PlusState),
            other => Err(Error::parse("mode", format!("unknown mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Encoder => "encoder",
            Mode::ZeroState => "zero",
            Mode::PlusState => "plus",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub circuit: Circuit,
    /// The code (or state) the circuit was verified against.
    pub reference: StabilizerCode,
    pub metrics: Metrics,
    pub truncated: bool,
}

/// Reference stabilizer description for a mode. For states, the logical Z
/// (or X) operators join the stabilizers.
pub fn reference_code(code: &AnyCode, mode: Mode) -> Result<StabilizerCode> {
    if let Some(css) = code.as_css() {
        let target = match mode {
            Mode::Encoder => CssTarget::Encoder,
            Mode::ZeroState => CssTarget::ZeroState,
            Mode::PlusState => CssTarget::PlusState,
        };
        return Ok(target_code(&css, target));
    }
    let c = code.to_stabilizer_code();
    let extra = match mode {
        Mode::Encoder => return Ok(c),
        Mode::ZeroState => c.logical_z(),
        Mode::PlusState => c.logical_x(),
    };
    let mut stabs = c.stabilizers().to_vec();
    stabs.extend_from_slice(extra);
    StabilizerCode::with_n(c.n(), vec![], vec![], stabs)
}

fn run<S: SearchState>(start: S, config: &RolloutConfig) -> Result<(Circuit, bool)> {
    let r = rollout_run(&start, config)?;
    Ok((r.state.finish()?, r.truncated))
}

/// Synthesizes and verifies a circuit. `config.levels == 0` is plain greedy.
/// `force_tableau` uses the transvection search even for CSS codes.
pub fn synthesize(
    code: &AnyCode,
    mode: Mode,
    config: &RolloutConfig,
    force_tableau: bool,
) -> Result<Synthesis> {
    let reference = reference_code(code, mode)?;
    let css = if force_tableau { None } else { code.as_css() };
    let (circuit, truncated) = match css {
        Some(css) => {
            let start = match mode {
                Mode::Encoder => ReductionState::encoder_instance(&css),
                Mode::ZeroState => ReductionState::zero_state_instance(&css),
                Mode::PlusState => ReductionState::plus_state_instance(&css),
            };
            run(start, config)?
        }
        None => run(TableauState::new(complete_tableau(&reference)?), config)?,
    };
    if !check_encoder(&circuit, &reference)? {
        return Err(Error::Validation(
            "synthesized circuit failed verification".into(),
        ));
    }
    let metrics = Metrics {
        two_qubit: circuit.two_qubit_count(),
        depth: circuit.depth(),
    };
    Ok(Synthesis {
        circuit,
        reference,
        metrics,
        truncated,
    })
}
