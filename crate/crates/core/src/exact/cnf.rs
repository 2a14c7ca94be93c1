//! CNF instances with a variable registry and the clause gadgets used by the
//! synthesis encodings.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// What a variable stands for. Layers count from the start tableau.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarRole {
    /// X part of tableau entry (row, qubit) at a layer.
    X { d: usize, r: usize, q: usize },
    /// Z part of tableau entry (row, qubit) at a layer.
    Z { d: usize, r: usize, q: usize },
    /// CSS matrix entry.
    M { d: usize, r: usize, q: usize },
    Id { d: usize, i: usize },
    H { d: usize, i: usize },
    S { d: usize, i: usize },
    Cx { d: usize, i: usize, j: usize },
    /// Single-qubit Clifford `c` (index into `LocalClifford::all()`).
    Local { d: usize, q: usize, c: usize },
    Pivot { q: usize },
    Select { i: usize, q: usize },
    /// Tseitin or counter variable.
    Aux,
}

/// A CNF formula over variables `1..=num_vars`.
#[derive(Clone, Debug, Default)]
pub struct CnfInstance {
    roles: Vec<VarRole>,
    registry: HashMap<VarRole, i32>,
    clauses: Vec<Vec<i32>>,
    /// Switch to sequential counters above this many literals.
    pub pairwise_limit: usize,
}

impl CnfInstance {
    pub fn new(pairwise_limit: usize) -> Self {
        Self {
            pairwise_limit,
            ..Self::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.roles.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Role of variable `v` (1-based).
    pub fn role(&self, v: i32) -> VarRole {
        self.roles[(v.unsigned_abs() - 1) as usize]
    }

    /// Registers a named variable. Registering the same role twice returns
    /// the existing id.
    pub fn var(&mut self, role: VarRole) -> i32 {
        if role != VarRole::Aux {
            if let Some(&v) = self.registry.get(&role) {
                return v;
            }
        }
        self.roles.push(role);
        let v = self.roles.len() as i32;
        if role != VarRole::Aux {
            self.registry.insert(role, v);
        }
        v
    }

    pub fn aux(&mut self) -> i32 {
        self.var(VarRole::Aux)
    }

    /// Looks up a registered variable.
    pub fn lookup(&self, role: VarRole) -> Option<i32> {
        self.registry.get(&role).copied()
    }

    pub fn count_role(&self, f: impl Fn(&VarRole) -> bool) -> usize {
        self.roles.iter().filter(|r| f(r)).count()
    }

    pub fn add(&mut self, clause: Vec<i32>) {
        debug_assert!(clause
            .iter()
            .all(|&l| l != 0 && l.unsigned_abs() as usize <= self.roles.len()));
        self.clauses.push(clause);
    }

    pub fn unit(&mut self, l: i32) {
        self.add(vec![l]);
    }

    /// `sel → (a ⇔ b)`.
    pub fn implies_eq(&mut self, sel: i32, a: i32, b: i32) {
        self.add(vec![-sel, -a, b]);
        self.add(vec![-sel, a, -b]);
    }

    /// `sel → (a ⇔ b ⊕ c)`.
    pub fn implies_xor(&mut self, sel: i32, a: i32, b: i32, c: i32) {
        // Forbid every assignment with a ⊕ b ⊕ c = 1.
        for (sa, sb, sc) in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)] {
            let lit = |v: i32, s: i32| if s == 1 { -v } else { v };
            self.add(vec![-sel, lit(a, sa), lit(b, sb), lit(c, sc)]);
        }
    }

    /// At most one literal true.
    pub fn at_most_one(&mut self, lits: &[i32]) {
        if lits.len() <= self.pairwise_limit {
            for i in 0..lits.len() {
                for j in (i + 1)..lits.len() {
                    self.add(vec![-lits[i], -lits[j]]);
                }
            }
        } else {
            self.at_most_k(lits, 1);
        }
    }

    pub fn exactly_one(&mut self, lits: &[i32]) {
        self.add(lits.to_vec());
        self.at_most_one(lits);
    }

    /// Sequential-counter encoding of `Σ lits ≤ k`.
    pub fn at_most_k(&mut self, lits: &[i32], k: usize) {
        let n = lits.len();
        if k >= n {
            return;
        }
        if k == 0 {
            for &l in lits {
                self.add(vec![-l]);
            }
            return;
        }
        // s[i][j]: at least j+1 of the first i+1 literals are true.
        let mut s: Vec<Vec<i32>> = Vec::with_capacity(n);
        for _ in 0..n {
            let row: Vec<i32> = (0..k).map(|_| self.aux()).collect();
            s.push(row);
        }
        self.add(vec![-lits[0], s[0][0]]);
        for j in 1..k {
            self.add(vec![-s[0][j]]);
        }
        for i in 1..n {
            self.add(vec![-lits[i], s[i][0]]);
            self.add(vec![-s[i - 1][0], s[i][0]]);
            for j in 1..k {
                self.add(vec![-lits[i], -s[i - 1][j - 1], s[i][j]]);
                self.add(vec![-s[i - 1][j], s[i][j]]);
            }
            self.add(vec![-lits[i], -s[i - 1][k - 1]]);
        }
    }

    /// `Σ lits ≥ k`, as at most `n - k` false.
    pub fn at_least_k(&mut self, lits: &[i32], k: usize) {
        if k == 0 {
            return;
        }
        if k > lits.len() {
            self.add(vec![]);
            return;
        }
        let neg: Vec<i32> = lits.iter().map(|l| -l).collect();
        self.at_most_k(&neg, lits.len() - k);
    }

    pub fn exactly_k(&mut self, lits: &[i32], k: usize) {
        self.at_most_k(lits, k);
        self.at_least_k(lits, k);
    }

    /// DIMACS text.
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars(), self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(s, "{l} ");
            }
            s.push_str("0\n");
        }
        s
    }

    /// Reads DIMACS CNF. Variables are created as [`VarRole::Aux`]; clauses
    /// may span lines and `c` lines are comments.
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut inst = Self::new(usize::MAX);
        let mut declared: Option<(usize, usize)> = None;
        let mut clause = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let loc = || format!("line {}", lineno + 1);
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                let (Some(&"cnf"), Some(v), Some(c)) = (f.first(), f.get(1), f.get(2)) else {
                    return Err(Error::parse(loc(), "expected `p cnf <vars> <clauses>`"));
                };
                let num = |t: &str| t.parse::<usize>().map_err(|_| Error::parse(loc(), format!("bad count {t:?}")));
                let (v, c) = (num(v)?, num(c)?);
                for _ in 0..v {
                    inst.aux();
                }
                declared = Some((v, c));
                continue;
            }
            let Some((vars, _)) = declared else {
                return Err(Error::parse(loc(), "clause before the problem line"));
            };
            for tok in line.split_whitespace() {
                let l: i32 = tok
                    .parse()
                    .map_err(|_| Error::parse(loc(), format!("bad literal {tok:?}")))?;
                if l == 0 {
                    inst.clauses.push(std::mem::take(&mut clause));
                } else if l.unsigned_abs() as usize > vars {
                    return Err(Error::parse(loc(), format!("literal {l} exceeds {vars} variables")));
                } else {
                    clause.push(l);
                }
            }
        }
        if !clause.is_empty() {
            inst.clauses.push(clause);
        }
        match declared {
            None => Err(Error::parse("end of input", "missing problem line")),
            Some((_, c)) if c != inst.clauses.len() => Err(Error::parse(
                "end of input",
                format!("declared {c} clauses, found {}", inst.clauses.len()),
            )),
            Some(_) => Ok(inst),
        }
    }

    /// Whether the assignment (indexed by variable, entry 0 unused) satisfies
    /// every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = model.get(l.unsigned_abs() as usize).copied().unwrap_or(false);
                v == (l > 0)
            })
        })
    }
}
