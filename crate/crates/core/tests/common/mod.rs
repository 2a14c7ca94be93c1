//! Independent reference implementations for integration tests. Nothing here
//! calls into the library's tableau, search or solver code.
#![allow(dead_code)]

use std::collections::HashSet;

/// A sign-free Pauli on up to 16 qubits as (x, z) bitmasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct P {
    pub x: u16,
    pub z: u16,
}

impl P {
    pub fn parse(s: &str) -> P {
        let mut p = P { x: 0, z: 0 };
        for (q, c) in s.chars().enumerate() {
            let b = 1u16 << q;
            match c {
                'X' => p.x |= b,
                'Z' => p.z |= b,
                'Y' => {
                    p.x |= b;
                    p.z |= b;
                }
                _ => {}
            }
        }
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum G {
    H(usize),
    S(usize),
    Cx(usize, usize),
}

pub fn apply(p: &mut P, g: G) {
    match g {
        G::H(q) => {
            let (x, z) = (p.x >> q & 1, p.z >> q & 1);
            p.x = p.x & !(1 << q) | z << q;
            p.z = p.z & !(1 << q) | x << q;
        }
        G::S(q) => p.z ^= p.x & 1 << q,
        G::Cx(c, t) => {
            p.x ^= (p.x >> c & 1) << t;
            p.z ^= (p.z >> t & 1) << c;
        }
    }
}

/// Pauli on at most four qubits packed in a byte: x bits low, z bits high.
fn pack(p: P) -> u8 {
    (p.x as u8 & 0xf) | (p.z as u8 & 0xf) << 4
}

fn unpack(v: u8) -> P {
    P { x: (v & 0xf) as u16, z: (v >> 4) as u16 }
}

type Table = [u8; 256];

fn table_of(gates: &[G]) -> Table {
    let mut t = [0u8; 256];
    for v in 0..256usize {
        let mut p = unpack(v as u8);
        for &g in gates {
            apply(&mut p, g);
        }
        t[v] = pack(p);
    }
    t
}

/// Code with logical pairs on at most four qubits. Rows are packed bytes:
/// logical X rows, logical Z rows, then stabilizer rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct State {
    pub n: usize,
    pub k: usize,
    len: usize,
    rows: [u8; 8],
}

/// Reduced row echelon form in place; returns the rank.
fn rref8(rows: &mut [u8]) -> usize {
    let mut rank = 0;
    for bit in (0..8).rev() {
        let m = 1u8 << bit;
        let Some(i) = (rank..rows.len()).find(|&i| rows[i] & m != 0) else { continue };
        rows.swap(rank, i);
        let piv = rows[rank];
        for (j, r) in rows.iter_mut().enumerate() {
            if j != rank && *r & m != 0 {
                *r ^= piv;
            }
        }
        rank += 1;
    }
    rank
}

fn reduce8(mut v: u8, basis: &[u8]) -> u8 {
    for &b in basis {
        let lead = 1u8 << (7 - b.leading_zeros());
        if v & lead != 0 {
            v ^= b;
        }
    }
    v
}

impl State {
    pub fn new(n: usize, lx: &[&str], lz: &[&str], s: &[&str]) -> State {
        assert!(n <= 4, "oracle handles at most four qubits");
        let mut rows = [0u8; 8];
        let mut len = 0;
        for t in lx.iter().chain(lz).chain(s) {
            rows[len] = pack(P::parse(t));
            len += 1;
        }
        State { n, k: lx.len(), len, rows }
    }

    /// A goal-form state: stabilizers Z on `support`, logical pair `i` as
    /// (X, Z) on column `cols[i]`.
    fn goal(n: usize, support: u8, cols: &[usize]) -> State {
        let mut rows = [0u8; 8];
        let k = cols.len();
        for (i, &c) in cols.iter().enumerate() {
            rows[i] = 1 << c;
            rows[k + i] = 1 << (4 + c);
        }
        let mut len = 2 * k;
        for q in (0..n).filter(|q| support >> q & 1 == 1) {
            rows[len] = 1 << (4 + q);
            len += 1;
        }
        State { n, k, len, rows }
    }

    fn mapped(&self, t: &Table) -> State {
        let mut out = *self;
        for v in &mut out.rows[..self.len] {
            *v = t[*v as usize];
        }
        out
    }

    /// Invariant under stabilizer row operations and multiplying logicals by
    /// stabilizers; the goal predicate is too.
    fn key(&self) -> u64 {
        let k2 = 2 * self.k;
        let mut s = [0u8; 8];
        let m = self.len - k2;
        s[..m].copy_from_slice(&self.rows[k2..self.len]);
        let r = rref8(&mut s[..m]);
        let mut key = 0u64;
        for &v in &self.rows[..k2] {
            key = key << 8 | reduce8(v, &s[..r]) as u64;
        }
        for &v in &s[..r] {
            key = key << 8 | v as u64;
        }
        key
    }

    /// Z-only stabilizers on exactly `rank` columns; each logical pair sits
    /// as (X, Z) on its own non-support column, logicals carry no X on the
    /// support and nothing on other free columns.
    pub fn is_goal(&self) -> bool {
        let k2 = 2 * self.k;
        let mut s = [0u8; 8];
        let m = self.len - k2;
        s[..m].copy_from_slice(&self.rows[k2..self.len]);
        let r = rref8(&mut s[..m]);
        let s = &s[..r];
        if s.iter().any(|&v| v & 0xf != 0) {
            return false;
        }
        let support = s.iter().fold(0u8, |a, &v| a | v >> 4);
        if support.count_ones() as usize != s.len() {
            return false;
        }
        let free = !support & ((1u8 << self.n) - 1);
        let mut used = 0u8;
        for i in 0..self.k {
            let (x, z) = (self.rows[i], self.rows[self.k + i]);
            if (x | z) & support != 0 {
                return false;
            }
            let (xx, xz, zx, zz) = (x & free, x >> 4 & free, z & free, z >> 4 & free);
            if xx.count_ones() != 1 || xx != zz || xz != 0 || zx != 0 || used & xx != 0 {
                return false;
            }
            used |= xx;
        }
        true
    }

    /// Every goal-form state up to stabilizer equivalence: one per choice of
    /// support and of logical column assignment.
    fn all_goals(n: usize, k: usize) -> Vec<State> {
        let mut out = Vec::new();
        for support in 0u8..(1 << n) {
            if support.count_ones() as usize != n - k {
                continue;
            }
            let free: Vec<usize> = (0..n).filter(|q| support >> q & 1 == 0).collect();
            for perm in permutations(k) {
                let cols: Vec<usize> = perm.iter().map(|&i| free[i]).collect();
                out.push(State::goal(n, support, &cols));
            }
        }
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Smallest key over qubit relabellings and logical-pair reorderings. Both
/// commute with the layer set and preserve the goal predicate.
struct Symmetry {
    qubit: Vec<Table>,
    logical: Vec<Vec<usize>>,
}

impl Symmetry {
    fn new(n: usize, k: usize) -> Self {
        let qubit = permutations(n)
            .into_iter()
            .map(|perm| {
                let mut t = [0u8; 256];
                for v in 0..256usize {
                    let mut out = 0u8;
                    for (q, &to) in perm.iter().enumerate() {
                        out |= ((v >> q & 1) as u8) << to | ((v >> (4 + q) & 1) as u8) << (4 + to);
                    }
                    t[v] = out;
                }
                t
            })
            .collect();
        Self { qubit, logical: permutations(k) }
    }

    fn canon(&self, st: &State) -> u64 {
        let k = st.k;
        let mut best = u64::MAX;
        for t in &self.qubit {
            let m = st.mapped(t);
            for lp in &self.logical {
                let mut r = m;
                for (i, &j) in lp.iter().enumerate() {
                    r.rows[i] = m.rows[j];
                    r.rows[k + i] = m.rows[k + j];
                }
                best = best.min(r.key());
            }
        }
        best
    }
}

/// All non-empty layers over {H, S, CX}, each qubit used at most once.
fn layers(n: usize) -> Vec<Vec<G>> {
    fn rec(q: usize, n: usize, used: u16, cur: &mut Vec<G>, out: &mut Vec<Vec<G>>) {
        if q == n {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        if used >> q & 1 == 1 {
            return rec(q + 1, n, used, cur, out);
        }
        rec(q + 1, n, used, cur, out);
        for g in [G::H(q), G::S(q)] {
            cur.push(g);
            rec(q + 1, n, used | 1 << q, cur, out);
            cur.pop();
        }
        for t in (q + 1)..n {
            if used >> t & 1 == 0 {
                for g in [G::Cx(q, t), G::Cx(t, q)] {
                    cur.push(g);
                    rec(q + 1, n, used | 1 << q | 1 << t, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Shortest path between two sets of classes in an undirected class graph,
/// growing whichever side has the smaller frontier. `moves` must be closed
/// under inverses up to the class relation.
fn meet_in_middle(
    starts: &[State],
    goals: &[State],
    moves: &[Table],
    canon: impl Fn(&State) -> u64,
    limit: usize,
) -> Option<usize> {
    use std::collections::HashMap;
    struct Side {
        seen: HashMap<u64, usize>,
        frontier: Vec<State>,
        depth: usize,
    }
    let init = |v: &[State]| {
        let mut seen = HashMap::new();
        let mut frontier = Vec::new();
        for s in v {
            if seen.insert(canon(s), 0).is_none() {
                frontier.push(*s);
            }
        }
        Side { seen, frontier, depth: 0 }
    };
    let (mut a, mut b) = (init(starts), init(goals));
    if a.seen.keys().any(|k| b.seen.contains_key(k)) {
        return Some(0);
    }
    while a.depth + b.depth < limit {
        let (grow, other) = if a.frontier.len() <= b.frontier.len() { (&mut a, &b) } else { (&mut b, &a) };
        if grow.frontier.is_empty() {
            return None;
        }
        let d = grow.depth + 1;
        let mut best = None::<usize>;
        let mut next = Vec::new();
        for st in &grow.frontier {
            for t in moves {
                let s2 = st.mapped(t);
                let key = canon(&s2);
                if let Some(&od) = other.seen.get(&key) {
                    best = Some(best.map_or(d + od, |x: usize| x.min(d + od)));
                }
                if !grow.seen.contains_key(&key) {
                    grow.seen.insert(key, d);
                    next.push(s2);
                }
            }
        }
        grow.frontier = next;
        grow.depth = d;
        if best.is_some() {
            return best;
        }
    }
    None
}

/// Minimal number of layers reaching goal form. Searches over classes under
/// qubit and logical relabelling from both ends.
pub fn bfs_depth(start: &State, limit: usize) -> Option<usize> {
    let tables: Vec<Table> = layers(start.n).iter().map(|l| table_of(l)).collect();
    let sym = Symmetry::new(start.n, start.k);
    let goal = State::all_goals(start.n, start.k)[0];
    meet_in_middle(&[*start], &[goal], &tables, |s| sym.canon(s), limit)
}

/// Minimal CNOT count reaching goal form, single-qubit gates free. States
/// are classes under local Cliffords; a CNOT step may be preceded by any
/// local pair on its own qubits, since other locals commute past it.
pub fn bfs_cnots(start: &State, limit: usize) -> Option<usize> {
    let n = start.n;
    let one: Vec<Vec<G>> = vec![
        vec![],
        vec![G::H(0)],
        vec![G::S(0)],
        vec![G::H(0), G::S(0)],
        vec![G::S(0), G::H(0)],
        vec![G::H(0), G::S(0), G::H(0)],
    ];
    let on = |word: &[G], q: usize| -> Vec<G> {
        word.iter()
            .map(|g| match g {
                G::H(_) => G::H(q),
                G::S(_) => G::S(q),
                other => *other,
            })
            .collect()
    };
    let mut locals: Vec<Vec<G>> = vec![vec![]];
    for q in 0..n {
        locals = locals
            .iter()
            .flat_map(|pre| one.iter().map(move |w| (pre.clone(), w)))
            .map(|(mut pre, w)| {
                pre.extend(on(w, q));
                pre
            })
            .collect();
    }
    let local_tables: Vec<Table> = locals.iter().map(|l| table_of(l)).collect();
    let mut steps: Vec<Table> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for a in &one {
                for b in &one {
                    let mut g = on(a, i);
                    g.extend(on(b, j));
                    g.push(G::Cx(i, j));
                    steps.push(table_of(&g));
                }
            }
        }
    }
    let orbit = |st: &State| local_tables.iter().map(|t| st.mapped(t).key()).min().unwrap();
    let goals = State::all_goals(n, start.k);
    meet_in_middle(&[*start], &goals, &steps, orbit, limit)
}

/// CSS zero-state oracle: minimal CNOT layers turning the row space of
/// `rows` (bit `q` = column `q`) into one supported on exactly `rank`
/// columns.
pub fn bfs_css_depth(n: usize, rows: &[u32], limit: usize) -> Option<usize> {
    fn canon(rows: &[u32]) -> Vec<u32> {
        let mut rows: Vec<u32> = rows.iter().copied().filter(|&r| r != 0).collect();
        let mut out: Vec<u32> = Vec::new();
        for col in (0..32).rev() {
            let Some(i) = rows.iter().position(|&r| r >> col & 1 == 1) else { continue };
            let piv = rows.swap_remove(i);
            for r in rows.iter_mut().chain(out.iter_mut()) {
                if *r >> col & 1 == 1 {
                    *r ^= piv;
                }
            }
            rows.retain(|&r| r != 0);
            out.push(piv);
        }
        out.sort_unstable();
        out
    }
    let goal = |rows: &[u32]| rows.iter().fold(0, |a, r| a | r).count_ones() as usize == rows.len();
    let cnot = |rows: &[u32], c: usize, t: usize| -> Vec<u32> {
        rows.iter().map(|&r| r ^ ((r >> c & 1) << t)).collect()
    };
    let mut layer_moves: Vec<Vec<(usize, usize)>> = Vec::new();
    fn rec(q: usize, n: usize, used: u32, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if q == n {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        if used >> q & 1 == 1 {
            return rec(q + 1, n, used, cur, out);
        }
        rec(q + 1, n, used, cur, out);
        for t in (q + 1)..n {
            if used >> t & 1 == 0 {
                for g in [(q, t), (t, q)] {
                    cur.push(g);
                    rec(q + 1, n, used | 1 << q | 1 << t, cur, out);
                    cur.pop();
                }
            }
        }
    }
    rec(0, n, 0, &mut Vec::new(), &mut layer_moves);
    let start = canon(rows);
    let mut seen = HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    for d in 0..=limit {
        if frontier.iter().any(|r| goal(r)) {
            return Some(d);
        }
        let mut next = Vec::new();
        for st in &frontier {
            for m in &layer_moves {
                let mut r = st.clone();
                for &(c, t) in m {
                    r = cnot(&r, c, t);
                }
                let r = canon(&r);
                if seen.insert(r.clone()) {
                    next.push(r);
                }
            }
        }
        frontier = next;
    }
    None
}
