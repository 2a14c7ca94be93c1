mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use encsynth::circuit::Circuit;
use encsynth::code::AnyCode;
use encsynth::codes;
use encsynth::compose::{compose, concatenated_five_wiring, derive_composed_code, BlockSpec, WiringFile, HAPPY_WIRING};
use encsynth::css::CssTarget;
use encsynth::exact::{
    synth_depth_optimal, synth_gate_optimal, BuiltinSolver, CnfInstance, ExternalSolver, GateMode, Problem,
    SatOutcome, SatSolver,
};
use encsynth::greedy::SearchConfig;
use encsynth::rollout::RolloutConfig;
use encsynth::search::Objective;
use encsynth::synth::{reference_code, synthesize, Mode};
use encsynth::verify::{check_encoder, statevector_check, SignMode, MAX_STATEVECTOR_QUBITS};
use encsynth::Error;
use rayon::prelude::*;

use report::{write_atomic, Report};

#[derive(Parser)]
#[command(name = "encsynth", version, about = "Encoding-circuit synthesis for stabilizer codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Greedy or rollout synthesis.
    Synth(SynthArgs),
    /// SAT-based depth- or gate-optimal synthesis.
    Exact(ExactArgs),
    /// Wire block encoders into one circuit.
    Compose(ComposeArgs),
    /// Check a circuit against a code.
    Verify(VerifyArgs),
    /// Run a grid of rollout settings over several codes.
    Sweep(SweepArgs),
    /// Solve a DIMACS CNF file with the built-in solver.
    Solve(SolveArgs),
    /// List built-in codes or print one.
    Codes(CodesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Encoder,
    Zero,
    Plus,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Encoder => Mode::Encoder,
            ModeArg::Zero => Mode::ZeroState,
            ModeArg::Plus => Mode::PlusState,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Gates,
    Depth,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Objective {
        match o {
            ObjectiveArg::Gates => Objective::Gates,
            ObjectiveArg::Depth => Objective::Depth,
        }
    }
}

#[derive(Args)]
struct CodeArgs {
    /// Built-in code name or path to a code file.
    #[arg(long)]
    code: String,
    #[arg(long, value_enum, default_value = "encoder")]
    mode: ModeArg,
}

#[derive(Args)]
struct OutputArgs {
    /// Circuit file (`.sqc`). Without it the circuit goes to stdout and the
    /// report to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report file (key=value lines).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "gates")]
    objective: ObjectiveArg,
    /// Rollout levels; 0 is plain greedy.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=3))]
    rollout_levels: u8,
    /// Candidates per level, outermost first.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    candidates: Vec<usize>,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    early_termination: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Break score ties randomly (seeded) instead of by scan order.
    #[arg(long)]
    shuffle_ties: bool,
    /// Search budget in seconds; the best circuit so far is returned.
    #[arg(long)]
    timeout: Option<f64>,
    /// Use the full-tableau search even for CSS codes.
    #[arg(long)]
    tableau: bool,
}

impl SearchArgs {
    fn config(&self) -> Result<RolloutConfig, Failure> {
        if self.candidates.is_empty() || self.candidates.contains(&0) {
            return Err(Failure::Usage("--candidates needs positive counts".into()));
        }
        let search = SearchConfig {
            objective: self.objective.into(),
            seed: self.seed,
            shuffle_ties: self.shuffle_ties,
            ..SearchConfig::default()
        };
        Ok(RolloutConfig {
            levels: self.rollout_levels as usize,
            candidates: self.candidates.clone(),
            early_termination: self.early_termination,
            search,
            time_budget: seconds(self.timeout)?,
        })
    }
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Depth,
    Gates,
}

#[derive(Clone, Copy, ValueEnum)]
enum GateModeArg {
    /// One CNOT per step, shrinking the step count.
    Gate,
    /// Optimal depth first, then a gate bound at that depth.
    Layer,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum, default_value = "depth")]
    target: Target,
    #[arg(long, value_enum, default_value = "gate")]
    gate_mode: GateModeArg,
    /// Depth limit, or the starting gate budget in gate mode (default: the
    /// greedy count).
    #[arg(long)]
    limit: Option<usize>,
    /// Seconds; the best circuit found so far is kept.
    #[arg(long)]
    timeout: Option<f64>,
    /// Use the full-tableau encoding even for CSS codes.
    #[arg(long)]
    tableau: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum BlockMethod {
    Greedy,
    Exact,
}

#[derive(Args)]
struct ComposeArgs {
    /// Wiring file, or `happy` / `concatenated_five` for the built-in layouts.
    #[arg(long)]
    wiring: String,
    #[arg(long, value_enum, default_value = "greedy")]
    blocks: BlockMethod,
    /// Seconds per exactly synthesized block.
    #[arg(long, default_value_t = 120.0)]
    block_timeout: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Circuit file (`.sqc`).
    #[arg(long)]
    circuit: PathBuf,
    /// Also run the dense statevector check (at most 14 qubits).
    #[arg(long)]
    statevector: bool,
    /// Require +1 stabilizer signs in the statevector check.
    #[arg(long)]
    strict_signs: bool,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Codes to run, comma separated (built-in names or paths).
    #[arg(long, value_delimiter = ',', required = true)]
    code: Vec<String>,
    #[arg(long, value_enum, default_value = "encoder")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "gates")]
    objective: ObjectiveArg,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
    levels: Vec<usize>,
    /// Outermost candidate counts to try.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    candidates: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "true,false")]
    early_termination: Vec<bool>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seconds per instance.
    #[arg(long)]
    timeout: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Directory for one circuit file per instance.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS file, or `-` for stdin.
    file: PathBuf,
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args)]
struct CodesArgs {
    /// Print this code in the code-file format.
    #[arg(long)]
    show: Option<String>,
}

/// Why a command failed; decides the exit status.
#[derive(Debug)]
enum Failure {
    /// Bad arguments or unreadable input: exit 2.
    Usage(String),
    /// Synthesis or verification failed: exit 1.
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Io(_) | Error::Dimension(_) | Error::Index { .. } | Error::Wiring(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Failed(e.to_string()),
        }
    }
}

fn seconds(s: Option<f64>) -> Result<Option<Duration>, Failure> {
    s.map(|v| Duration::try_from_secs_f64(v).map_err(|_| Failure::Usage(format!("invalid timeout {v}"))))
        .transpose()
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_code(spec: &str) -> Result<AnyCode, Failure> {
    if let Some(c) = codes::builtin(spec) {
        return Ok(c);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Failure::Usage(format!(
            "{spec:?} is neither a built-in code ({}) nor a file",
            codes::NAMES.join(", ")
        )));
    }
    AnyCode::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{spec}: {e}")))
}

fn code_label(spec: &str) -> String {
    Path::new(spec)
        .file_stem()
        .map_or_else(|| spec.to_string(), |s| s.to_string_lossy().into_owned())
}

/// Writes the circuit and report where requested. Without `--out` the
/// circuit goes to stdout and the report to stderr.
fn emit(c: &Circuit, report: &Report, out: &OutputArgs) -> Result<(), Failure> {
    let text = report.to_text();
    match &out.out {
        Some(path) => {
            write_atomic(path, &c.to_sqc())?;
            match &out.report {
                Some(r) => write_atomic(r, &text)?,
                None => print!("{text}"),
            }
        }
        None => {
            print!("{}", c.to_sqc());
            match &out.report {
                Some(r) => write_atomic(r, &text)?,
                None => eprint!("{text}"),
            }
        }
    }
    Ok(())
}

fn config_label(cfg: &RolloutConfig) -> String {
    let t: Vec<String> = cfg.candidates.iter().map(ToString::to_string).collect();
    format!(
        "levels={} candidates={} early_termination={} seed={}",
        cfg.levels,
        t.join(","),
        cfg.early_termination,
        cfg.search.seed
    )
}

fn run_synth(a: &SynthArgs) -> Result<(), Failure> {
    let code = load_code(&a.code.code)?;
    let cfg = a.search.config()?;
    let mode: Mode = a.code.mode.into();
    let start = Instant::now();
    let s = synthesize(&code, mode, &cfg, a.search.tableau)?;
    let mut r = Report::new(&code_label(&a.code.code), mode, &code);
    r.set("objective", format!("{:?}", cfg.search.objective).to_lowercase());
    r.set("config", config_label(&cfg));
    r.metrics(&s.circuit, start.elapsed());
    r.set("truncated", s.truncated);
    r.set("verified", true);
    emit(&s.circuit, &r, &a.output)
}

fn solver() -> Box<dyn SatSolver> {
    match ExternalSolver::from_env() {
        Some(s) => Box::new(s),
        None => Box::new(BuiltinSolver),
    }
}

fn run_exact(a: &ExactArgs) -> Result<(), Failure> {
    let code = load_code(&a.code.code)?;
    let mode: Mode = a.code.mode.into();
    let reference = reference_code(&code, mode)?;
    let problem = match code.as_css() {
        Some(css) if !a.tableau => {
            let target = match mode {
                Mode::Encoder => CssTarget::Encoder,
                Mode::ZeroState => CssTarget::ZeroState,
                Mode::PlusState => CssTarget::PlusState,
            };
            Problem::Css(css, target)
        }
        _ => Problem::Tableau(reference.clone()),
    };
    let timeout = seconds(a.timeout)?;
    let solver = solver();
    let start = Instant::now();
    let out = match a.target {
        Target::Depth => synth_depth_optimal(&problem, a.limit.unwrap_or(6), solver.as_ref(), timeout)?,
        Target::Gates => {
            let (mode, bound) = match a.gate_mode {
                GateModeArg::Layer => (GateMode::LayerCardinality, a.limit.unwrap_or(6)),
                GateModeArg::Gate => {
                    let bound = match a.limit {
                        Some(b) => b,
                        None => {
                            let greedy = RolloutConfig {
                                levels: 0,
                                ..RolloutConfig::default()
                            };
                            synthesize(&code, mode, &greedy, a.tableau)?.metrics.two_qubit
                        }
                    };
                    (GateMode::GateBased, bound)
                }
            };
            synth_gate_optimal(&problem, mode, bound, solver.as_ref(), timeout)?
        }
    };
    let Some(c) = out.circuit else {
        let why = if out.timed_out { "timed out" } else { "no circuit within the limit" };
        return Err(Failure::Failed(format!("exact synthesis found no circuit: {why}")));
    };
    if !check_encoder(&c, &reference)? {
        return Err(Failure::Failed("exact circuit failed verification".into()));
    }
    let mut r = Report::new(&code_label(&a.code.code), mode, &code);
    r.set(
        "objective",
        match a.target {
            Target::Depth => "depth",
            Target::Gates => "gates",
        },
    );
    r.set(
        "config",
        format!(
            "exact gate_mode={} limit={} encoding={}",
            match (a.target, a.gate_mode) {
                (Target::Depth, _) => "none",
                (_, GateModeArg::Gate) => "gate",
                (_, GateModeArg::Layer) => "layer",
            },
            a.limit.map_or("auto".into(), |l| l.to_string()),
            if problem.is_css() { "css" } else { "tableau" }
        ),
    );
    r.metrics(&c, start.elapsed());
    r.set("proven_optimal", !out.timed_out);
    r.set("last_unsat", out.last_unsat.map_or("none".into(), |u| u.to_string()));
    r.set("verified", true);
    emit(&c, &r, &a.output)
}

fn run_compose(a: &ComposeArgs) -> Result<(), Failure> {
    let text = match a.wiring.as_str() {
        "happy" => HAPPY_WIRING.to_string(),
        "concatenated_five" => concatenated_five_wiring().to_text(),
        path => read(Path::new(path))?,
    };
    let file = WiringFile::parse(&text)?;
    let timeout = seconds(Some(a.block_timeout))?;
    let start = Instant::now();
    let spec = file.resolve(|name, src| {
        let code = load_code(src).map_err(|f| match f {
            Failure::Usage(m) | Failure::Failed(m) => Error::Wiring(m),
        })?;
        match a.blocks {
            BlockMethod::Greedy => {
                let cfg = RolloutConfig::default();
                let s = synthesize(&code, Mode::Encoder, &cfg, false)?;
                BlockSpec::new(name, s.reference, s.circuit)
            }
            BlockMethod::Exact => {
                let code = code.to_stabilizer_code();
                let greedy = RolloutConfig {
                    levels: 0,
                    ..RolloutConfig::default()
                };
                let bound = synthesize(&AnyCode::Stabilizer(code.clone()), Mode::Encoder, &greedy, true)?
                    .metrics
                    .two_qubit;
                let out = synth_gate_optimal(
                    &Problem::Tableau(code.clone()),
                    GateMode::GateBased,
                    bound,
                    solver().as_ref(),
                    timeout,
                )?;
                let c = out
                    .circuit
                    .ok_or_else(|| Error::Solver(format!("no exact circuit for block {name}")))?;
                BlockSpec::new(name, code, c)
            }
        }
    })?;
    let c = compose(&spec)?;
    let code = derive_composed_code(&spec)?;
    if !check_encoder(&c, &code)? {
        return Err(Failure::Failed("composed circuit failed verification".into()));
    }
    let mut r = Report::new(&code_label(&a.wiring), Mode::Encoder, &AnyCode::Stabilizer(code));
    r.set("objective", "gates");
    let blocks: Vec<String> = spec
        .blocks()
        .map(|(n, b)| format!("{n}:{}", b.circuit.two_qubit_count()))
        .collect();
    r.set(
        "config",
        format!(
            "compose blocks={}",
            match a.blocks {
                BlockMethod::Greedy => "greedy",
                BlockMethod::Exact => "exact",
            }
        ),
    );
    r.set("block_gates", blocks.join(","));
    r.metrics(&c, start.elapsed());
    r.set("verified", true);
    emit(&c, &r, &a.output)
}

fn run_verify(a: &VerifyArgs) -> Result<bool, Failure> {
    let code = load_code(&a.code.code)?;
    let mode: Mode = a.code.mode.into();
    let reference = reference_code(&code, mode)?;
    let c = Circuit::from_sqc(&read(&a.circuit)?).map_err(|e| Failure::Usage(format!("{}: {e}", a.circuit.display())))?;
    if c.n != reference.n() {
        return Err(Failure::Usage(format!(
            "circuit has {} qubits, code has {}",
            c.n,
            reference.n()
        )));
    }
    let start = Instant::now();
    let symbolic = check_encoder(&c, &reference)?;
    let mut r = Report::new(&code_label(&a.code.code), mode, &code);
    r.set("config", "verify");
    r.metrics(&c, start.elapsed());
    r.set("check_encoder", symbolic);
    let mut ok = symbolic;
    if a.statevector {
        if reference.n() > MAX_STATEVECTOR_QUBITS {
            return Err(Failure::Usage(format!(
                "statevector check supports at most {MAX_STATEVECTOR_QUBITS} qubits"
            )));
        }
        let sign = if a.strict_signs { SignMode::Strict } else { SignMode::Free };
        let sv = statevector_check(&c, &reference, a.trials, 1, sign)?;
        r.set("statevector", sv.passed);
        if let Some(f) = &sv.frame {
            r.set("pauli_frame", f.to_string());
        }
        ok &= sv.passed;
    }
    r.set("verified", ok);
    let text = r.to_text();
    match &a.report {
        Some(p) => write_atomic(p, &text)?,
        None => print!("{text}"),
    }
    Ok(ok)
}

fn run_sweep(a: &SweepArgs) -> Result<bool, Failure> {
    if a.candidates.contains(&0) {
        return Err(Failure::Usage("--candidates needs positive counts".into()));
    }
    if let Some(&l) = a.levels.iter().find(|&&l| l > 3) {
        return Err(Failure::Usage(format!("rollout level {l} is above 3")));
    }
    let codes: Vec<(String, AnyCode)> = a
        .code
        .iter()
        .map(|s| load_code(s).map(|c| (code_label(s), c)))
        .collect::<Result<_, _>>()?;
    let mut grid = Vec::new();
    for (ci, _) in codes.iter().enumerate() {
        for &levels in &a.levels {
            // Candidate counts and early termination are irrelevant for greedy.
            let ts: &[usize] = if levels == 0 { &a.candidates[..1] } else { &a.candidates };
            let ets: &[bool] = if levels == 0 { &a.early_termination[..1] } else { &a.early_termination };
            for &t in ts {
                for &et in ets {
                    grid.push((ci, levels, t, et));
                }
            }
        }
    }
    let budget = seconds(a.timeout)?;
    let mode: Mode = a.mode.into();
    let objective: Objective = a.objective.into();
    if let Some(dir) = &a.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    }
    let run_one = |&(ci, levels, t, et): &(usize, usize, usize, bool)| -> Result<(String, bool), String> {
        let (label, code) = &codes[ci];
        let cfg = RolloutConfig {
            levels,
            candidates: vec![t],
            early_termination: et,
            search: SearchConfig {
                objective,
                seed: a.seed,
                ..SearchConfig::default()
            },
            time_budget: budget,
        };
        let start = Instant::now();
        let mut r = Report::new(label, mode, code);
        r.set("objective", format!("{objective:?}").to_lowercase());
        r.set("config", config_label(&cfg));
        match synthesize(code, mode, &cfg, false) {
            Ok(s) => {
                r.metrics(&s.circuit, start.elapsed());
                r.set("truncated", s.truncated);
                r.set("verified", true);
                if let Some(dir) = &a.out_dir {
                    let name = format!("{label}-l{levels}-t{t}-et{}.sqc", u8::from(et));
                    write_atomic(&dir.join(name), &s.circuit.to_sqc()).map_err(|f| format!("{f:?}"))?;
                }
                Ok((r.to_text(), true))
            }
            Err(e) => {
                r.set("error", e.to_string());
                r.set("verified", false);
                Ok((r.to_text(), false))
            }
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let results: Vec<Result<(String, bool), String>> = pool.install(|| grid.par_iter().map(run_one).collect());
    let mut text = String::new();
    let mut all_ok = true;
    for res in results {
        let (block, ok) = res.map_err(Failure::Failed)?;
        all_ok &= ok;
        if !text.is_empty() {
            text.push('\n');
        }
        text.push_str(&block);
    }
    match &a.report {
        Some(p) => write_atomic(p, &text)?,
        None => print!("{text}"),
    }
    Ok(all_ok)
}

/// SAT-competition output; the status code is 10 (SAT), 20 (UNSAT) or 0.
fn run_solve(a: &SolveArgs) -> Result<u8, Failure> {
    let text = if a.file.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Usage(e.to_string()))?
    } else {
        read(&a.file)?
    };
    let cnf = CnfInstance::from_dimacs(&text)?;
    match BuiltinSolver.solve(&cnf, seconds(a.timeout)?)? {
        SatOutcome::Sat(model) => {
            println!("s SATISFIABLE");
            let lits: Vec<String> = (1..=cnf.num_vars())
                .map(|v| if model[v] { v.to_string() } else { format!("-{v}") })
                .collect();
            println!("v {} 0", lits.join(" "));
            Ok(10)
        }
        SatOutcome::Unsat => {
            println!("s UNSATISFIABLE");
            Ok(20)
        }
        SatOutcome::Unknown => {
            println!("s UNKNOWN");
            Ok(0)
        }
    }
}

fn run_codes(a: &CodesArgs) -> Result<(), Failure> {
    match &a.show {
        Some(name) => {
            let code = codes::builtin(name).ok_or_else(|| Failure::Usage(format!("unknown built-in code {name:?}")))?;
            print!("{}", code.to_text());
        }
        None => {
            for name in codes::NAMES {
                let c = codes::builtin(name).expect("listed code");
                let kind = if c.as_css().is_some() { "css" } else { "stabilizer" };
                println!("{name}\tn={}\tk={}\t{kind}", c.n(), c.k());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Synth(a) => run_synth(a).map(|()| 0),
        Cmd::Exact(a) => run_exact(a).map(|()| 0),
        Cmd::Compose(a) => run_compose(a).map(|()| 0),
        Cmd::Verify(a) => run_verify(a).map(|ok| if ok { 0 } else { 1 }),
        Cmd::Sweep(a) => run_sweep(a).map(|ok| if ok { 0 } else { 1 }),
        Cmd::Solve(a) => run_solve(a),
        Cmd::Codes(a) => run_codes(a).map(|()| 0),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
