//! Randomized property checks shared by the property tests and the
//! acceptance run. Each returns a description of the first failure.
#![allow(dead_code)]

use encsynth::circuit::{Gate, LocalClifford};
use encsynth::code::{symplectic_matrix, CssCode};
use encsynth::codes;
use encsynth::css::ReductionState;
use encsynth::f2::BitMatrix;
use encsynth::greedy::{greedy_run, SearchConfig};
use encsynth::heuristics::h_greedy;
use encsynth::pauli::Pauli;
use encsynth::rollout::RolloutConfig;
use encsynth::synth::{synthesize, Mode};
use encsynth::tableau::{goal_up_to_local, is_goal, preprocess, RowUpdate, Tableau};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn random_gate(rng: &mut ChaCha8Rng, n: usize) -> Gate {
    let q = rng.gen_range(0..n);
    if n == 1 {
        return if rng.gen() { Gate::H(q) } else { Gate::S(q) };
    }
    let other = (q + rng.gen_range(1..n)) % n;
    let p = |rng: &mut ChaCha8Rng| [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)];
    match rng.gen_range(0..4) {
        0 => Gate::H(q),
        1 => Gate::S(q),
        2 => Gate::Cx(q, other),
        _ => Gate::transvection(q, p(rng), other, p(rng)),
    }
}

/// A random tableau: the canonical one pushed through a random circuit.
pub fn random_tableau(rng: &mut ChaCha8Rng, n: usize, k: usize, len: usize) -> Tableau {
    let mut t = Tableau::identity(n, k);
    for _ in 0..len {
        t.apply(&random_gate(rng, n)).unwrap();
    }
    t
}

pub fn symplectic_preserved(cases: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let n = rng.gen_range(1..=8);
        let k = rng.gen_range(0..=n);
        let len = rng.gen_range(0..40);
        let t = random_tableau(&mut rng, n, k, len);
        if let Some((a, b)) = t.symplectic_violation() {
            return Err(format!("case {case}: rows {a} and {b} lost their pairing"));
        }
    }
    Ok(())
}

fn apply_x(m: &mut BitMatrix, c: usize, t: usize) {
    m.add_col(c, t);
}

fn apply_z(m: &mut BitMatrix, c: usize, t: usize) {
    m.add_col(t, c);
}

fn mix_rows(rng: &mut ChaCha8Rng, m: &mut BitMatrix) {
    if m.rows() < 2 {
        return;
    }
    for _ in 0..3 * m.rows() {
        let a = rng.gen_range(0..m.rows());
        let b = rng.gen_range(0..m.rows());
        if a != b {
            m.xor_rows(a, b);
        }
    }
}

/// A random CSS code with independent checks, built by scrambling the
/// canonical one with CNOTs and row operations.
pub fn random_css(rng: &mut ChaCha8Rng) -> CssCode {
    let n = rng.gen_range(3..=8);
    let m_x = rng.gen_range(1..n);
    let m_z = rng.gen_range(0..=n - m_x);
    let k = n - m_x - m_z;
    let mut hx = BitMatrix::zeros(m_x, n);
    let mut hz = BitMatrix::zeros(m_z, n);
    let mut lx = BitMatrix::zeros(k, n);
    let mut lz = BitMatrix::zeros(k, n);
    for r in 0..m_x {
        hx.set(r, r, true);
    }
    for r in 0..m_z {
        hz.set(r, m_x + r, true);
    }
    for i in 0..k {
        lx.set(i, m_x + m_z + i, true);
        lz.set(i, m_x + m_z + i, true);
    }
    for _ in 0..4 * n {
        let c = rng.gen_range(0..n);
        let t = (c + rng.gen_range(1..n)) % n;
        apply_x(&mut hx, c, t);
        apply_x(&mut lx, c, t);
        apply_z(&mut hz, c, t);
        apply_z(&mut lz, c, t);
    }
    mix_rows(rng, &mut hx);
    mix_rows(rng, &mut hz);
    for i in 0..k {
        if m_x > 0 && rng.gen() {
            lx.xor_row_with(i, &hx.row(rng.gen_range(0..m_x)));
        }
        if m_z > 0 && rng.gen() {
            lz.xor_row_with(i, &hz.row(rng.gen_range(0..m_z)));
        }
    }
    CssCode::new(hx, hz, Some(lx), Some(lz)).expect("valid random CSS code")
}

fn restrict(m: &BitMatrix, cols: &[usize]) -> BitMatrix {
    m.select_cols(cols)
}

/// When the X side reaches goal form, the Z side pushed through the same
/// CNOTs has the mirrored form: zero on plus columns, invertible on zero
/// columns, and the logical identity on input columns.
pub fn z_side_follows_x_side(codes: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..codes {
        let code = random_css(&mut rng);
        let mut cfg = SearchConfig::default();
        cfg.seed = case as u64;
        cfg.shuffle_ties = true;
        let run = greedy_run(&ReductionState::encoder_instance(&code), &cfg)
            .map_err(|e| format!("case {case}: {e}"))?;
        let roles = run.state.goal_form().ok_or(format!("case {case}: no goal form"))?;
        let (mut hx, mut lx) = (code.h_x().clone(), code.l_x().clone());
        let (mut hz, mut lz) = (code.h_z().clone(), code.l_z().clone());
        for &(c, t) in run.state.gates() {
            apply_x(&mut hx, c, t);
            apply_x(&mut lx, c, t);
            apply_z(&mut hz, c, t);
            apply_z(&mut lz, c, t);
        }
        let (m_x, m_z) = (hx.rows(), hz.rows());
        let fail = |what: &str| Err(format!("case {case}: {what}"));
        // X side, recomputed independently of the search state.
        if !restrict(&hx, &roles.zero).is_zero() || !restrict(&hx, &roles.inputs).is_zero() {
            return fail("H_X leaks outside the plus columns");
        }
        if restrict(&hx, &roles.plus).rank() != m_x || !restrict(&lx, &roles.zero).is_zero() {
            return fail("X side is not in goal form");
        }
        if restrict(&lx, &roles.inputs) != BitMatrix::identity(code.k()) {
            return fail("logical X is not the identity on inputs");
        }
        // Z side.
        if !restrict(&hz, &roles.plus).is_zero() || !restrict(&hz, &roles.inputs).is_zero() {
            return fail("H_Z leaks outside the zero columns");
        }
        if restrict(&hz, &roles.zero).rank() != m_z || roles.zero.len() != m_z {
            return fail("H_Z block on zero columns is singular");
        }
        if !restrict(&lz, &roles.plus).is_zero() {
            return fail("logical Z touches plus columns");
        }
        if restrict(&lz, &roles.inputs) != BitMatrix::identity(code.k()) {
            return fail("logical Z is not the identity on inputs");
        }
    }
    Ok(())
}

/// Preprocessing never raises the greedy score and keeps the code.
pub fn preprocess_monotone(cases: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(0..n);
        let t = random_tableau(&mut rng, n, k, 3 * n);
        let p = preprocess(&t, h_greedy);
        if h_greedy(&p) > h_greedy(&t) {
            return Err(format!("case {case}: score went up"));
        }
        if !p.is_symplectic() {
            return Err(format!("case {case}: preprocessing broke the tableau"));
        }
        let (a, b) = (symplectic_matrix(n, &t.stabilizers()), symplectic_matrix(n, &p.stabilizers()));
        if !a.row_space_equal(&b).unwrap() {
            return Err(format!("case {case}: stabilizer group changed"));
        }
    }
    Ok(())
}

fn swap(q: usize, r: usize) -> [Gate; 3] {
    [Gate::Cx(q, r), Gate::Cx(r, q), Gate::Cx(q, r)]
}

/// Goal form survives qubit relabelling and stabilizer row operations, and
/// a scrambling layer of single-qubit Cliffords is undone by the local fix.
pub fn goal_metamorphic(cases: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let n = rng.gen_range(1..=7);
        let k = rng.gen_range(0..=n);
        let mut t = Tableau::identity(n, k);
        let fail = |what: &str| Err(format!("case {case} (n={n}, k={k}): {what}"));
        let base = is_goal(&t).ok_or("identity tableau is not a goal")?;
        if base.inputs != (0..k).collect::<Vec<_>>() {
            return fail("identity roles");
        }
        let updates = RowUpdate::all(n, k);
        for _ in 0..2 * n {
            if let Some(u) = updates.choose(&mut rng) {
                u.apply(&mut t);
            }
        }
        if is_goal(&t) != Some(base.clone()) {
            return fail("row operations changed the goal roles");
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut moved = t.clone();
        let mut at: Vec<usize> = (0..n).collect();
        // Selection sort by swaps so that qubit q ends on perm[q].
        for q in 0..n {
            let want = perm[q];
            let cur = at[q];
            if cur != want {
                let other = at.iter().position(|&p| p == want).unwrap();
                for g in swap(cur, want) {
                    moved.apply(&g).unwrap();
                }
                at.swap(q, other);
            }
        }
        match is_goal(&moved) {
            Some(r) if r.inputs == base.inputs.iter().map(|&q| perm[q]).collect::<Vec<_>>() => {}
            _ => return fail("relabelled goal lost"),
        }
        let mut scrambled = moved.clone();
        for q in 0..n {
            let c = LocalClifford::all()[rng.gen_range(0..6)];
            for g in c.gates(q) {
                scrambled.apply(&g).unwrap();
            }
        }
        let Some((fix, roles)) = goal_up_to_local(&scrambled) else {
            return fail("local scramble not recognized");
        };
        scrambled.apply_all(&fix).unwrap();
        if is_goal(&scrambled) != Some(roles) {
            return fail("local fix does not reach the goal");
        }
    }
    // CSS goal form ignores the order of check rows.
    for case in 0..cases.min(50) {
        let code = random_css(&mut rng);
        let done = greedy_run(&ReductionState::encoder_instance(&code), &SearchConfig::default())
            .map_err(|e| e.to_string())?
            .state;
        let m = done.matrix();
        let k = done.k();
        let mut rows: Vec<usize> = (k..m.rows()).collect();
        rows.shuffle(&mut rng);
        let order: Vec<usize> = (0..k).chain(rows).collect();
        let permuted = ReductionState::from_matrix(&m.select_rows(&order), k).unwrap();
        if permuted.goal_form() != done.goal_form() {
            return Err(format!("css case {case}: row order changed the goal form"));
        }
    }
    Ok(())
}

/// Synthesis gives identical circuits on one thread and on several.
pub fn thread_determinism() -> Check {
    let cfg = RolloutConfig {
        levels: 1,
        candidates: vec![6],
        ..RolloutConfig::default()
    };
    for name in ["steane", "five_qubit", "happy_4_2", "color3"] {
        let code = codes::builtin(name).unwrap();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| synthesize(&code, Mode::Encoder, &cfg, false).map(|s| s.circuit))
        };
        let (a, b) = (run(1).map_err(|e| e.to_string())?, run(4).map_err(|e| e.to_string())?);
        if a != b {
            return Err(format!("{name}: circuits differ across thread counts"));
        }
    }
    Ok(())
}
