//! Bounded-model-checking encodings of the reduction problem.

use super::cnf::{CnfInstance, VarRole};
use crate::circuit::LocalClifford;
use crate::code::{CssCode, StabilizerCode};
use crate::css::CssTarget;
use crate::f2::BitMatrix;

/// A synthesis problem for the exact engines.
#[derive(Clone, Debug)]
pub enum Problem {
    /// Full tableau (logical X, logical Z and stabilizer rows).
    Tableau(StabilizerCode),
    /// CNOT-only elimination of a CSS target.
    Css(CssCode, CssTarget),
}

impl Problem {
    pub fn n(&self) -> usize {
        match self {
            Problem::Tableau(c) => c.n(),
            Problem::Css(c, _) => c.n(),
        }
    }

    pub fn is_css(&self) -> bool {
        matches!(self, Problem::Css(..))
    }

    /// Rows of the tracked matrix and the number of logical rows on top.
    fn css_matrix(&self) -> Option<(BitMatrix, usize)> {
        match self {
            Problem::Css(c, CssTarget::Encoder) => {
                Some((c.l_x().vstack(c.h_x()).expect("widths"), c.k()))
            }
            Problem::Css(c, CssTarget::ZeroState) => Some((c.h_x().clone(), 0)),
            Problem::Css(c, CssTarget::PlusState) => Some((c.h_z().clone(), 0)),
            Problem::Tableau(_) => None,
        }
    }
}

/// Shape of a time-expanded encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Horizon {
    /// `d` layers of parallel gates.
    Layers(usize),
    /// `g` CNOT steps. In the CSS case a step holds at most one CNOT. In the
    /// full-tableau case it holds exactly one, every step is preceded by a
    /// layer of single-qubit Cliffords, and one more such layer closes the
    /// circuit.
    Gates(usize),
}

/// A CNF instance together with what is needed to decode its models.
#[derive(Clone, Debug)]
pub struct Encoding {
    pub cnf: CnfInstance,
    pub n: usize,
    pub horizon: Horizon,
    pub css: bool,
    /// Number of tableau snapshots (`0..stages`).
    pub stages: usize,
    /// For gate horizons, which transitions are local layers.
    pub local_stage: Vec<bool>,
}

fn pairwise_limit(n: usize) -> usize {
    // Pairwise exactly-one up to n = 8 qubits; a qubit's constraint then has
    // at most 3 + 2 * 7 literals.
    if n <= 8 {
        usize::MAX
    } else {
        0
    }
}

/// Rows of the target tableau as `(x, z)` bit rows, in the order logical X,
/// logical Z, stabilizers.
fn tableau_rows(code: &StabilizerCode) -> Vec<(Vec<bool>, Vec<bool>)> {
    code.logical_x()
        .iter()
        .chain(code.logical_z())
        .chain(code.stabilizers())
        .map(|p| (p.x().to_bools(), p.z().to_bools()))
        .collect()
}

/// Builds the depth-layered (or single-gate) instance.
pub fn encode(problem: &Problem, horizon: Horizon) -> Encoding {
    match problem {
        Problem::Tableau(code) => encode_tableau(code, horizon),
        Problem::Css(..) => {
            let (m, k) = problem.css_matrix().expect("css problem");
            encode_css(&m, k, horizon)
        }
    }
}

/// Layer and step plan: `true` marks a free local layer.
fn plan(horizon: Horizon, css: bool) -> Vec<bool> {
    match horizon {
        Horizon::Layers(d) => vec![false; d],
        Horizon::Gates(g) if css => vec![false; g],
        Horizon::Gates(g) => {
            let mut v = Vec::with_capacity(2 * g + 1);
            for _ in 0..g {
                v.push(true);
                v.push(false);
            }
            v.push(true);
            v
        }
    }
}

fn encode_tableau(code: &StabilizerCode, horizon: Horizon) -> Encoding {
    let n = code.n();
    let k = code.k();
    let rows = tableau_rows(code);
    let nr = rows.len();
    let mut cnf = CnfInstance::new(pairwise_limit(n));
    let steps = plan(horizon, false);
    let stages = steps.len() + 1;
    let single_gate = matches!(horizon, Horizon::Gates(_));

    let mut x = vec![vec![vec![0i32; n]; nr]; stages];
    let mut z = vec![vec![vec![0i32; n]; nr]; stages];
    for d in 0..stages {
        for r in 0..nr {
            for q in 0..n {
                x[d][r][q] = cnf.var(VarRole::X { d, r, q });
                z[d][r][q] = cnf.var(VarRole::Z { d, r, q });
            }
        }
    }
    // Initial tableau.
    for (r, (xr, zr)) in rows.iter().enumerate() {
        for q in 0..n {
            cnf.unit(if xr[q] { x[0][r][q] } else { -x[0][r][q] });
            cnf.unit(if zr[q] { z[0][r][q] } else { -z[0][r][q] });
        }
    }

    for (d, &local) in steps.iter().enumerate() {
        if local {
            for q in 0..n {
                let sel: Vec<i32> = (0..6)
                    .map(|c| cnf.var(VarRole::Local { d, q, c }))
                    .collect();
                cnf.exactly_one(&sel);
                // A local on a qubit the next CNOT skips commutes into the
                // following local layer, so only the final layer and the
                // CNOT's own qubits need non-identity choices.
                if d + 1 < steps.len() {
                    let mut touch: Vec<i32> = Vec::with_capacity(2 * n);
                    for j in (0..n).filter(|&j| j != q) {
                        touch.push(cnf.var(VarRole::Cx { d: d + 1, i: q, j }));
                        touch.push(cnf.var(VarRole::Cx { d: d + 1, i: j, j: q }));
                    }
                    for &v in &sel[1..] {
                        let mut clause = vec![-v];
                        clause.extend(&touch);
                        cnf.add(clause);
                    }
                }
                for (c, lc) in LocalClifford::all().into_iter().enumerate() {
                    let s = sel[c];
                    for r in 0..nr {
                        let (xo, zo) = (x[d][r][q], z[d][r][q]);
                        let (xn, zn) = (x[d + 1][r][q], z[d + 1][r][q]);
                        // New bits as combinations of old (x, z).
                        let (ax, az) = lc.apply(true, false);
                        let (bx, bz) = lc.apply(false, true);
                        for (new, from_x, from_z) in [(xn, ax, bx), (zn, az, bz)] {
                            match (from_x, from_z) {
                                (true, true) => cnf.implies_xor(s, new, xo, zo),
                                (true, false) => cnf.implies_eq(s, new, xo),
                                (false, true) => cnf.implies_eq(s, new, zo),
                                (false, false) => unreachable!("invertible"),
                            }
                        }
                    }
                }
            }
            continue;
        }
        let mut cx = vec![vec![0i32; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    cx[i][j] = cnf.var(VarRole::Cx { d, i, j });
                }
            }
        }
        for i in 0..n {
            let id = cnf.var(VarRole::Id { d, i });
            let mut one = vec![id];
            let (h, s) = if single_gate {
                (None, None)
            } else {
                let h = cnf.var(VarRole::H { d, i });
                let s = cnf.var(VarRole::S { d, i });
                one.extend([h, s]);
                (Some(h), Some(s))
            };
            for j in 0..n {
                if j != i {
                    one.push(cx[i][j]);
                    one.push(cx[j][i]);
                }
            }
            cnf.exactly_one(&one);
            for r in 0..nr {
                let (xo, zo, xn, zn) = (x[d][r][i], z[d][r][i], x[d + 1][r][i], z[d + 1][r][i]);
                cnf.implies_eq(id, xn, xo);
                cnf.implies_eq(id, zn, zo);
                if let (Some(h), Some(s)) = (h, s) {
                    cnf.implies_eq(h, xn, zo);
                    cnf.implies_eq(h, zn, xo);
                    cnf.implies_eq(s, xn, xo);
                    cnf.implies_xor(s, zn, zo, xo);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let c = cx[i][j];
                for r in 0..nr {
                    cnf.implies_eq(c, x[d + 1][r][i], x[d][r][i]);
                    cnf.implies_xor(c, z[d + 1][r][i], z[d][r][i], z[d][r][j]);
                    cnf.implies_xor(c, x[d + 1][r][j], x[d][r][j], x[d][r][i]);
                    cnf.implies_eq(c, z[d + 1][r][j], z[d][r][j]);
                }
            }
        }
        if single_gate {
            let all: Vec<i32> = cx.iter().flatten().copied().filter(|&v| v != 0).collect();
            cnf.exactly_one(&all);
            // With locals on both sides, CX(j, i) is CX(i, j) conjugated by
            // Hadamards; keep one orientation.
            for i in 0..n {
                for j in 0..i {
                    cnf.unit(-cx[i][j]);
                }
            }
        }
    }

    // Goal.
    let last = stages - 1;
    let r_stab = crate::code::symplectic_matrix(n, code.stabilizers()).rank();
    let srows = 2 * k..nr;
    for r in srows.clone() {
        for q in 0..n {
            cnf.unit(-x[last][r][q]);
        }
    }
    let p: Vec<i32> = (0..n).map(|q| cnf.var(VarRole::Pivot { q })).collect();
    for q in 0..n {
        let mut big = vec![-p[q]];
        for r in srows.clone() {
            cnf.add(vec![-z[last][r][q], p[q]]);
            big.push(z[last][r][q]);
        }
        cnf.add(big);
    }
    cnf.exactly_k(&p, r_stab);
    goal_selectors(&mut cnf, n, k, &p, |i, q| {
        (
            x[last][i][q],
            z[last][i][q],
            x[last][k + i][q],
            z[last][k + i][q],
        )
    });

    Encoding {
        cnf,
        n,
        horizon,
        css: false,
        stages,
        local_stage: steps,
    }
}

/// Logical selector constraints shared by both encodings. `bits(i, q)`
/// returns (x of X_i, z of X_i, x of Z_i, z of Z_i) at column `q`.
fn goal_selectors(
    cnf: &mut CnfInstance,
    n: usize,
    k: usize,
    p: &[i32],
    bits: impl Fn(usize, usize) -> (i32, i32, i32, i32),
) {
    let mut lam = vec![vec![0i32; n]; k];
    for (i, row) in lam.iter_mut().enumerate() {
        for (q, v) in row.iter_mut().enumerate() {
            *v = cnf.var(VarRole::Select { i, q });
        }
    }
    for row in &lam {
        cnf.exactly_one(row);
    }
    for q in 0..n {
        let col: Vec<i32> = lam.iter().map(|r| r[q]).collect();
        cnf.at_most_one(&col);
        for i in 0..k {
            let l = lam[i][q];
            cnf.add(vec![-l, -p[q]]);
            let (xx, xz, zx, zz) = bits(i, q);
            cnf.add(vec![-l, xx]);
            cnf.add(vec![-l, -xz]);
            cnf.add(vec![-l, -zx]);
            cnf.add(vec![-l, zz]);
            for b in [xx, xz, zx, zz] {
                cnf.add(vec![p[q], l, -b]);
            }
            cnf.add(vec![-p[q], -xx]);
            cnf.add(vec![-p[q], -zx]);
        }
    }
}

fn encode_css(m: &BitMatrix, k: usize, horizon: Horizon) -> Encoding {
    let n = m.cols();
    let nr = m.rows();
    let mut cnf = CnfInstance::new(pairwise_limit(n));
    let steps = plan(horizon, true);
    let stages = steps.len() + 1;
    let single_gate = matches!(horizon, Horizon::Gates(_));

    let mut v = vec![vec![vec![0i32; n]; nr]; stages];
    for (d, layer) in v.iter_mut().enumerate() {
        for (r, row) in layer.iter_mut().enumerate() {
            for (q, e) in row.iter_mut().enumerate() {
                *e = cnf.var(VarRole::M { d, r, q });
            }
        }
    }
    for r in 0..nr {
        for q in 0..n {
            cnf.unit(if m.get(r, q) { v[0][r][q] } else { -v[0][r][q] });
        }
    }
    for d in 0..steps.len() {
        let mut cx = vec![vec![0i32; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    cx[i][j] = cnf.var(VarRole::Cx { d, i, j });
                }
            }
        }
        for i in 0..n {
            let id = cnf.var(VarRole::Id { d, i });
            let mut one = vec![id];
            for j in 0..n {
                if j != i {
                    one.push(cx[i][j]);
                    one.push(cx[j][i]);
                }
            }
            cnf.exactly_one(&one);
            for r in 0..nr {
                cnf.implies_eq(id, v[d + 1][r][i], v[d][r][i]);
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for r in 0..nr {
                    cnf.implies_eq(cx[i][j], v[d + 1][r][i], v[d][r][i]);
                    cnf.implies_xor(cx[i][j], v[d + 1][r][j], v[d][r][j], v[d][r][i]);
                }
            }
        }
        if single_gate {
            let all: Vec<i32> = cx.iter().flatten().copied().filter(|&x| x != 0).collect();
            cnf.at_most_one(&all);
        }
    }

    let last = stages - 1;
    let checks = m.select_rows(&(k..nr).collect::<Vec<_>>());
    let r_x = checks.rank();
    let p: Vec<i32> = (0..n).map(|q| cnf.var(VarRole::Pivot { q })).collect();
    for q in 0..n {
        let mut big = vec![-p[q]];
        for r in k..nr {
            cnf.add(vec![-v[last][r][q], p[q]]);
            big.push(v[last][r][q]);
        }
        cnf.add(big);
    }
    cnf.exactly_k(&p, r_x);
    let mut lam = vec![vec![0i32; n]; k];
    for (i, row) in lam.iter_mut().enumerate() {
        for (q, e) in row.iter_mut().enumerate() {
            *e = cnf.var(VarRole::Select { i, q });
        }
    }
    for row in &lam {
        cnf.exactly_one(row);
    }
    for q in 0..n {
        let col: Vec<i32> = lam.iter().map(|r| r[q]).collect();
        cnf.at_most_one(&col);
        for i in 0..k {
            let l = lam[i][q];
            cnf.add(vec![-l, -p[q]]);
            cnf.add(vec![-l, v[last][i][q]]);
            cnf.add(vec![p[q], l, -v[last][i][q]]);
        }
    }

    Encoding {
        cnf,
        n,
        horizon,
        css: true,
        stages,
        local_stage: steps,
    }
}

/// Adds `Σ CNOT selectors ≤ g`.
pub fn bound_two_qubit_gates(enc: &mut Encoding, g: usize) {
    let lits: Vec<i32> = (1..=enc.cnf.num_vars() as i32)
        .filter(|&v| matches!(enc.cnf.role(v), VarRole::Cx { .. }))
        .collect();
    enc.cnf.at_most_k(&lits, g);
}

/// Closed-form count of named (non-auxiliary) variables.
pub fn predicted_named_vars(problem: &Problem, horizon: Horizon) -> usize {
    let n = problem.n();
    let css = problem.is_css();
    let (rows, k, per_entry) = match problem {
        Problem::Tableau(c) => (c.n() + c.k(), c.k(), 2),
        Problem::Css(..) => {
            let (m, k) = problem.css_matrix().expect("css");
            (m.rows(), k, 1)
        }
    };
    let steps = plan(horizon, css);
    let stages = steps.len() + 1;
    let gate_layers = steps.iter().filter(|l| !**l).count();
    let local_layers = steps.len() - gate_layers;
    let single = if css || matches!(horizon, Horizon::Gates(_)) { 1 } else { 3 };
    stages * rows * n * per_entry
        + gate_layers * (n * single + n * (n - 1))
        + local_layers * n * 6
        + n
        + k * n
}
