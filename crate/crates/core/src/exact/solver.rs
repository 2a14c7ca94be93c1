//! SAT back ends: a built-in CDCL solver and an adapter for external
//! DIMACS solvers.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use super::cnf::CnfInstance;
use crate::error::{Error, Result};

/// Solver verdict. Models are indexed by variable id; entry 0 is unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatOutcome {
    Sat(Vec<bool>),
    Unsat,
    Unknown,
}

pub trait SatSolver {
    fn solve(&self, cnf: &CnfInstance, budget: Option<Duration>) -> Result<SatOutcome>;
}

/// Conflict-driven clause learning with two watched literals, 1-UIP
/// learning, activity-ordered decisions, phase saving and Luby restarts.
#[derive(Clone, Copy, Debug, Default)]
pub struct BuiltinSolver;

impl SatSolver for BuiltinSolver {
    fn solve(&self, cnf: &CnfInstance, budget: Option<Duration>) -> Result<SatOutcome> {
        let deadline = budget.map(|b| Instant::now() + b);
        Ok(Cdcl::new(cnf.num_vars(), cnf.clauses()).run(deadline))
    }
}

/// Runs an executable that reads a DIMACS file given as its only argument
/// and answers in SAT-competition format (`s SATISFIABLE` plus `v` lines).
#[derive(Clone, Debug)]
pub struct ExternalSolver {
    pub path: PathBuf,
}

impl ExternalSolver {
    /// Solver named by the `SOLVER_BIN` environment variable, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os("SOLVER_BIN").map(|p| ExternalSolver { path: p.into() })
    }
}

impl SatSolver for ExternalSolver {
    fn solve(&self, cnf: &CnfInstance, budget: Option<Duration>) -> Result<SatOutcome> {
        let dir = std::env::temp_dir();
        let file = dir.join(format!(
            "encsynth-{}-{}.cnf",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_nanos())
        ));
        std::fs::File::create(&file)?.write_all(cnf.to_dimacs().as_bytes())?;
        let mut child = Command::new(&self.path)
            .arg(&file)
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| Error::Solver(format!("cannot start {}: {e}", self.path.display())))?;
        let start = Instant::now();
        let status = loop {
            if let Some(s) = child.try_wait()? {
                break Some(s);
            }
            if budget.is_some_and(|b| start.elapsed() >= b) {
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            std::thread::sleep(Duration::from_millis(5));
        };
        let out = child.wait_with_output()?;
        let _ = std::fs::remove_file(&file);
        if status.is_none() {
            return Ok(SatOutcome::Unknown);
        }
        parse_solver_output(&String::from_utf8_lossy(&out.stdout), cnf.num_vars())
    }
}

/// Parses SAT-competition output.
pub fn parse_solver_output(text: &str, num_vars: usize) -> Result<SatOutcome> {
    let mut status = None;
    let mut model = vec![false; num_vars + 1];
    for line in text.lines() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(match s.trim() {
                "SATISFIABLE" => SatOutcome::Sat(Vec::new()),
                "UNSATISFIABLE" => SatOutcome::Unsat,
                _ => SatOutcome::Unknown,
            });
        } else if let Some(v) = line.strip_prefix("v ") {
            for tok in v.split_whitespace() {
                let l: i64 = tok
                    .parse()
                    .map_err(|_| Error::Solver(format!("bad literal {tok:?} in model")))?;
                let idx = l.unsigned_abs() as usize;
                if idx > num_vars {
                    return Err(Error::Solver(format!("literal {l} out of range")));
                }
                if idx != 0 {
                    model[idx] = l > 0;
                }
            }
        }
    }
    match status {
        Some(SatOutcome::Sat(_)) => Ok(SatOutcome::Sat(model)),
        Some(s) => Ok(s),
        None => Err(Error::Solver("solver printed no status line".into())),
    }
}

type Lit = u32;

#[inline]
fn lit_of(dimacs: i32) -> Lit {
    let v = dimacs.unsigned_abs() - 1;
    2 * v + u32::from(dimacs < 0)
}

#[inline]
fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

#[inline]
fn neg(l: Lit) -> Lit {
    l ^ 1
}

const UNDEF: u8 = 2;

struct Cdcl {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    assign: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    phase: Vec<bool>,
    seen: Vec<bool>,
    heap: Vec<usize>,
    heap_pos: Vec<Option<usize>>,
    empty: bool,
    units: Vec<Lit>,
}

impl Cdcl {
    fn new(nvars: usize, input: &[Vec<i32>]) -> Self {
        let mut s = Cdcl {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * nvars],
            assign: vec![UNDEF; nvars],
            level: vec![0; nvars],
            reason: vec![None; nvars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; nvars],
            var_inc: 1.0,
            phase: vec![false; nvars],
            seen: vec![false; nvars],
            heap: Vec::new(),
            heap_pos: vec![None; nvars],
            empty: false,
            units: Vec::new(),
        };
        for v in 0..nvars {
            s.heap_insert(v);
        }
        for c in input {
            let mut lits: Vec<Lit> = c.iter().map(|&l| lit_of(l)).collect();
            lits.sort_unstable();
            lits.dedup();
            if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
                continue;
            }
            match lits.len() {
                0 => s.empty = true,
                1 => s.units.push(lits[0]),
                _ => {
                    let idx = s.clauses.len();
                    s.watches[lits[0] as usize].push(idx);
                    s.watches[lits[1] as usize].push(idx);
                    s.clauses.push(lits);
                }
            }
        }
        s
    }

    #[inline]
    fn value(&self, l: Lit) -> u8 {
        let a = self.assign[var(l)];
        if a == UNDEF {
            UNDEF
        } else {
            a ^ (l & 1) as u8
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = var(l);
        self.assign[v] = 1 ^ (l & 1) as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                {
                    let c = &mut self.clauses[ci];
                    if c[0] == false_lit {
                        c.swap(0, 1);
                    }
                }
                let first = self.clauses[ci][0];
                if self.value(first) == 1 {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let len = self.clauses[ci].len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[ci][k];
                    if self.value(l) != 0 {
                        self.clauses[ci].swap(1, k);
                        self.watches[l as usize].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if self.value(first) == 0 {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(ci));
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        if let Some(p) = self.heap_pos[v] {
            self.heap_up(p);
        }
    }

    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level();
        loop {
            let start = usize::from(p.is_some());
            let lits = self.clauses[confl][start..].to_vec();
            for q in lits {
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[var(self.trail[index])] {
                    break;
                }
            }
            let pl = self.trail[index];
            p = Some(pl);
            self.seen[var(pl)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[var(pl)].expect("implied literal has a reason");
        }
        learnt[0] = neg(p.expect("conflict at positive level"));
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[var(learnt[i])] > self.level[var(learnt[max_i])] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[var(learnt[1])];
        }
        for &l in &learnt {
            self.seen[var(l)] = false;
        }
        (learnt, bt)
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for i in (lim..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.assign[v] = UNDEF;
            self.reason[v] = None;
            if self.heap_pos[v].is_none() {
                self.heap_insert(v);
            }
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn pick(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap_pop() {
            if self.assign[v] == UNDEF {
                return Some(2 * v as u32 + u32::from(!self.phase[v]));
            }
        }
        None
    }

    fn run(mut self, deadline: Option<Instant>) -> SatOutcome {
        if self.empty {
            return SatOutcome::Unsat;
        }
        for l in std::mem::take(&mut self.units) {
            match self.value(l) {
                0 => return SatOutcome::Unsat,
                1 => {}
                _ => self.enqueue(l, None),
            }
        }
        let mut conflicts: u64 = 0;
        let mut restart_idx = 1u64;
        let mut restart_at = 100 * luby(restart_idx);
        let mut since_restart = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                conflicts += 1;
                since_restart += 1;
                if self.decision_level() == 0 {
                    return SatOutcome::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.backtrack(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let idx = self.clauses.len();
                    self.watches[learnt[0] as usize].push(idx);
                    self.watches[learnt[1] as usize].push(idx);
                    let first = learnt[0];
                    self.clauses.push(learnt);
                    self.enqueue(first, Some(idx));
                }
                self.var_inc /= 0.95;
                if conflicts % 256 == 0 && deadline.is_some_and(|d| Instant::now() >= d) {
                    return SatOutcome::Unknown;
                }
            } else {
                if since_restart >= restart_at {
                    since_restart = 0;
                    restart_idx += 1;
                    restart_at = 100 * luby(restart_idx);
                    self.backtrack(0);
                    continue;
                }
                match self.pick() {
                    None => {
                        let mut model = vec![false; self.assign.len() + 1];
                        for (v, &a) in self.assign.iter().enumerate() {
                            model[v + 1] = a == 1;
                        }
                        return SatOutcome::Sat(model);
                    }
                    Some(l) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, None);
                    }
                }
            }
        }
    }

    fn heap_less(&self, a: usize, b: usize) -> bool {
        self.activity[a] > self.activity[b] || (self.activity[a] == self.activity[b] && a < b)
    }

    fn heap_insert(&mut self, v: usize) {
        self.heap.push(v);
        let p = self.heap.len() - 1;
        self.heap_pos[v] = Some(p);
        self.heap_up(p);
    }

    fn heap_up(&mut self, mut p: usize) {
        while p > 0 {
            let parent = (p - 1) / 2;
            if self.heap_less(self.heap[p], self.heap[parent]) {
                self.heap_swap(p, parent);
                p = parent;
            } else {
                break;
            }
        }
    }

    fn heap_down(&mut self, mut p: usize) {
        loop {
            let (l, r) = (2 * p + 1, 2 * p + 2);
            let mut best = p;
            if l < self.heap.len() && self.heap_less(self.heap[l], self.heap[best]) {
                best = l;
            }
            if r < self.heap.len() && self.heap_less(self.heap[r], self.heap[best]) {
                best = r;
            }
            if best == p {
                break;
            }
            self.heap_swap(p, best);
            p = best;
        }
    }

    fn heap_swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.heap_pos[self.heap[a]] = Some(a);
        self.heap_pos[self.heap[b]] = Some(b);
    }

    fn heap_pop(&mut self) -> Option<usize> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        let last = self.heap.len() - 1;
        self.heap_swap(0, last);
        self.heap.pop();
        self.heap_pos[top] = None;
        if !self.heap.is_empty() {
            self.heap_down(0);
        }
        Some(top)
    }
}

/// The Luby sequence 1, 1, 2, 1, 1, 2, 4, ...
fn luby(mut i: u64) -> u64 {
    loop {
        let mut k = 1;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if (1u64 << k) - 1 == i {
            return 1 << (k - 1);
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::cnf::VarRole;
    use proptest::prelude::*;

    fn brute(nvars: usize, clauses: &[Vec<i32>]) -> bool {
        (0u32..(1 << nvars)).any(|bits| {
            clauses.iter().all(|c| {
                c.iter()
                    .any(|&l| ((bits >> (l.unsigned_abs() - 1)) & 1 == 1) == (l > 0))
            })
        })
    }

    fn instance(nvars: usize, clauses: &[Vec<i32>]) -> CnfInstance {
        let mut c = CnfInstance::new(8);
        for q in 0..nvars {
            c.var(VarRole::Pivot { q });
        }
        for cl in clauses {
            c.add(cl.clone());
        }
        c
    }

    #[test]
    fn luby_prefix() {
        let v: Vec<u64> = (1..=9).map(luby).collect();
        assert_eq!(v, [1, 1, 2, 1, 1, 2, 4, 1, 1]);
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 4 pigeons, 3 holes.
        let mut c = CnfInstance::new(8);
        let v = |c: &mut CnfInstance, p: usize, h: usize| c.var(VarRole::Select { i: p, q: h });
        for p in 0..4 {
            let lits: Vec<i32> = (0..3).map(|h| v(&mut c, p, h)).collect();
            c.add(lits);
        }
        for h in 0..3 {
            let lits: Vec<i32> = (0..4).map(|p| v(&mut c, p, h)).collect();
            c.at_most_one(&lits);
        }
        assert_eq!(BuiltinSolver.solve(&c, None).unwrap(), SatOutcome::Unsat);
    }

    #[test]
    fn parses_competition_output() {
        let out = "c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n";
        assert_eq!(
            parse_solver_output(out, 3).unwrap(),
            SatOutcome::Sat(vec![false, true, false, true])
        );
        assert_eq!(parse_solver_output("s UNSATISFIABLE\n", 3).unwrap(), SatOutcome::Unsat);
        assert!(parse_solver_output("", 3).is_err());
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(
            clauses in prop::collection::vec(
                prop::collection::vec((1i32..=8, any::<bool>()), 1..4), 1..40)
        ) {
            let clauses: Vec<Vec<i32>> = clauses
                .into_iter()
                .map(|c| c.into_iter().map(|(v, s)| if s { v } else { -v }).collect())
                .collect();
            let inst = instance(8, &clauses);
            let got = BuiltinSolver.solve(&inst, None).unwrap();
            match got {
                SatOutcome::Sat(m) => prop_assert!(inst.satisfied_by(&m)),
                SatOutcome::Unsat => prop_assert!(!brute(8, &clauses)),
                SatOutcome::Unknown => prop_assert!(false),
            }
        }
    }
}
