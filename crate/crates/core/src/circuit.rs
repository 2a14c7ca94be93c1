//! Clifford circuits over {H, S, CX, transvection}, qubit roles, layering and
//! the `.sqc` text format.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::Pauli;

/// A gate in a sign-free Clifford circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gate {
    H(usize),
    S(usize),
    Cx(usize, usize),
    /// Two-qubit symplectic transvection for the Pauli `pi` on qubit `i`
    /// times `pj` on qubit `j`.
    Transvection {
        i: usize,
        pi: Pauli,
        j: usize,
        pj: Pauli,
    },
}

impl Gate {
    pub fn transvection(i: usize, pi: Pauli, j: usize, pj: Pauli) -> Gate {
        Gate::Transvection { i, pi, j, pj }
    }

    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::S(q) => (q, None),
            Gate::Cx(c, t) => (c, Some(t)),
            Gate::Transvection { i, j, .. } => (i, Some(j)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().1.is_some()
    }

    /// Checks qubit ranges and distinctness.
    pub fn validate(&self, n: usize) -> Result<()> {
        let (a, b) = self.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= n {
                return Err(Error::Index { index: q, n });
            }
        }
        if b == Some(a) {
            return Err(Error::Validation(format!("{self} acts twice on qubit {a}")));
        }
        if let Gate::Transvection { pi, pj, .. } = *self {
            if pi == Pauli::I || pj == Pauli::I {
                return Err(Error::Validation(format!(
                    "{self}: transvection Paulis must be X, Y or Z"
                )));
            }
        }
        Ok(())
    }

    /// Inverse gate. Every gate here is self-inverse up to Pauli corrections
    /// (S and S† agree sign-free), so the inverse is the gate itself.
    pub fn inverse(&self) -> Gate {
        *self
    }

    /// Expands a transvection into H, S and a single CX; other gates map to
    /// themselves.
    pub fn decompose(&self) -> Vec<Gate> {
        let Gate::Transvection { i, pi, j, pj } = *self else {
            return vec![*self];
        };
        // Rotate both Paulis to Z, apply the ZZ transvection (S S CZ), undo.
        fn to_z(q: usize, p: Pauli) -> Vec<Gate> {
            match p {
                Pauli::X => vec![Gate::H(q)],
                Pauli::Y => vec![Gate::S(q), Gate::H(q)],
                _ => vec![],
            }
        }
        fn from_z(q: usize, p: Pauli) -> Vec<Gate> {
            match p {
                Pauli::X => vec![Gate::H(q)],
                Pauli::Y => vec![Gate::H(q), Gate::S(q)],
                _ => vec![],
            }
        }
        let mut out = to_z(i, pi);
        out.extend(to_z(j, pj));
        out.extend([Gate::S(i), Gate::S(j), Gate::H(j), Gate::Cx(i, j), Gate::H(j)]);
        out.extend(from_z(i, pi));
        out.extend(from_z(j, pj));
        out
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "h {q}"),
            Gate::S(q) => write!(f, "s {q}"),
            Gate::Cx(c, t) => write!(f, "cx {c} {t}"),
            Gate::Transvection { i, pi, j, pj } => write!(f, "tv {pi}{pj} {i} {j}"),
        }
    }
}

/// Role of a physical qubit in an encoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    /// Carries logical input `i`.
    Input(usize),
    Zero,
    Plus,
}

/// Qubit roles of an encoder. Every ancilla starts in |0⟩; plus-ancillas
/// receive their Hadamard inside the circuit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QubitRoles {
    /// `inputs[i]` is the physical qubit carrying logical qubit `i`.
    pub inputs: Vec<usize>,
    pub zero: Vec<usize>,
    pub plus: Vec<usize>,
}

impl QubitRoles {
    pub fn n(&self) -> usize {
        self.inputs.len() + self.zero.len() + self.plus.len()
    }

    pub fn k(&self) -> usize {
        self.inputs.len()
    }

    /// Zero and plus ancillas, sorted.
    pub fn ancillas(&self) -> Vec<usize> {
        let mut a: Vec<usize> = self.zero.iter().chain(&self.plus).copied().collect();
        a.sort_unstable();
        a
    }

    pub fn role_of(&self, q: usize) -> Option<Role> {
        if let Some(i) = self.inputs.iter().position(|&x| x == q) {
            Some(Role::Input(i))
        } else if self.zero.contains(&q) {
            Some(Role::Zero)
        } else if self.plus.contains(&q) {
            Some(Role::Plus)
        } else {
            None
        }
    }

    /// Checks that the roles partition `0..n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &q in self.inputs.iter().chain(&self.zero).chain(&self.plus) {
            if q >= n {
                return Err(Error::Index { index: q, n });
            }
            if !seen.insert(q) {
                return Err(Error::Contract(format!("qubit {q} has more than one role")));
            }
        }
        if seen.len() != n {
            return Err(Error::Contract(format!(
                "roles cover {} of {n} qubits",
                seen.len()
            )));
        }
        Ok(())
    }

    /// Relabels every qubit `q` to `map[q]`.
    pub fn relabel(&self, map: &[usize]) -> QubitRoles {
        let f = |v: &Vec<usize>| v.iter().map(|&q| map[q]).collect::<Vec<_>>();
        let mut r = QubitRoles {
            inputs: f(&self.inputs),
            zero: f(&self.zero),
            plus: f(&self.plus),
        };
        r.zero.sort_unstable();
        r.plus.sort_unstable();
        r
    }
}

/// A sequence of gates on `n` qubits, optionally annotated with encoder roles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
    pub roles: Option<QubitRoles>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
            roles: None,
        }
    }

    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.validate(n)?;
        }
        Ok(Self {
            n,
            gates,
            roles: None,
        })
    }

    pub fn with_roles(mut self, roles: QubitRoles) -> Self {
        self.roles = Some(roles);
        self
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.validate(self.n)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            g.validate(self.n)?;
        }
        if let Some(r) = &self.roles {
            r.validate(self.n)?;
        }
        Ok(())
    }

    /// Number of two-qubit gates (a transvection counts as one CX).
    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Same circuit with every transvection expanded into H/S/CX.
    pub fn decomposed(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().flat_map(|g| g.decompose()).collect(),
            roles: self.roles.clone(),
        }
    }

    /// Inverse circuit: reversed gate order (each gate is self-inverse).
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            roles: None,
        }
    }

    /// ASAP layer index of every gate. When `two_qubit_only` is set,
    /// single-qubit gates occupy no layer and are reported at the layer of
    /// the most recent gate on their qubit.
    pub fn asap_layers(&self, two_qubit_only: bool) -> Vec<usize> {
        let mut frontier = vec![0usize; self.n];
        let mut out = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let (a, b) = g.qubits();
            if two_qubit_only && b.is_none() {
                out.push(frontier[a]);
                continue;
            }
            let start = b.map_or(frontier[a], |b| frontier[a].max(frontier[b]));
            let layer = start + 1;
            frontier[a] = layer;
            if let Some(b) = b {
                frontier[b] = layer;
            }
            out.push(layer);
        }
        out
    }

    /// Two-qubit depth: ASAP layers counting only two-qubit gates.
    pub fn depth(&self) -> usize {
        self.asap_layers(true).into_iter().max().unwrap_or(0)
    }

    /// Depth counting every gate.
    pub fn total_depth(&self) -> usize {
        self.asap_layers(false).into_iter().max().unwrap_or(0)
    }

    /// Groups gates into ASAP layers of two-qubit gates; single-qubit gates are
    /// dropped.
    pub fn two_qubit_layers(&self) -> Vec<Vec<Gate>> {
        let layers = self.asap_layers(true);
        let mut out: Vec<Vec<Gate>> = vec![Vec::new(); self.depth()];
        for (g, l) in self.gates.iter().zip(layers) {
            if g.is_two_qubit() {
                out[l - 1].push(*g);
            }
        }
        out
    }

    /// Appends `other`, relabelling its qubit `q` to `map[q]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<()> {
        for g in &other.gates {
            let g = match *g {
                Gate::H(q) => Gate::H(map[q]),
                Gate::S(q) => Gate::S(map[q]),
                Gate::Cx(c, t) => Gate::Cx(map[c], map[t]),
                Gate::Transvection { i, pi, j, pj } => Gate::Transvection {
                    i: map[i],
                    pi,
                    j: map[j],
                    pj,
                },
            };
            self.push(g)?;
        }
        Ok(())
    }

    /// Serializes to the `.sqc` format. Transvections are expanded first.
    pub fn to_sqc(&self) -> String {
        let c = self.decomposed();
        let mut s = format!("qubits {}\n", c.n);
        if let Some(r) = &c.roles {
            for &q in &r.inputs {
                s.push_str(&format!("role {q} input\n"));
            }
            for &q in &r.zero {
                s.push_str(&format!("role {q} zero\n"));
            }
            for &q in &r.plus {
                s.push_str(&format!("role {q} plus\n"));
            }
        }
        for g in &c.gates {
            s.push_str(&format!("{g}\n"));
        }
        s
    }

    /// Parses the `.sqc` format. Input role lines are taken in order as
    /// logical qubits 0, 1, ...; `#` starts a comment.
    pub fn from_sqc(text: &str) -> Result<Circuit> {
        let mut n = None;
        let mut roles = QubitRoles::default();
        let mut any_role = false;
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let loc = || format!("line {}", lineno + 1);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| -> Result<usize> {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(loc(), format!("expected a qubit index, found {s:?}")))
            };
            let want = |count: usize| -> Result<()> {
                if parts.len() != count {
                    return Err(Error::parse(
                        loc(),
                        format!("`{}` takes {} arguments", parts[0], count - 1),
                    ));
                }
                Ok(())
            };
            match parts[0] {
                "qubits" => {
                    want(2)?;
                    if n.is_some() {
                        return Err(Error::parse(loc(), "duplicate `qubits` header"));
                    }
                    n = Some(num(parts[1])?);
                    continue;
                }
                _ if n.is_none() => {
                    return Err(Error::parse(loc(), "missing `qubits <n>` header"));
                }
                "role" => {
                    want(3)?;
                    let q = num(parts[1])?;
                    any_role = true;
                    match parts[2] {
                        "input" => roles.inputs.push(q),
                        "zero" => roles.zero.push(q),
                        "plus" => roles.plus.push(q),
                        other => {
                            return Err(Error::parse(loc(), format!("unknown role {other:?}")))
                        }
                    }
                }
                "h" => {
                    want(2)?;
                    gates.push(Gate::H(num(parts[1])?));
                }
                "s" => {
                    want(2)?;
                    gates.push(Gate::S(num(parts[1])?));
                }
                "cx" => {
                    want(3)?;
                    gates.push(Gate::Cx(num(parts[1])?, num(parts[2])?));
                }
                other => return Err(Error::parse(loc(), format!("unknown instruction {other:?}"))),
            }
            let n = n.unwrap_or(0);
            if let Some(g) = gates.last() {
                g.validate(n).map_err(|e| Error::parse(loc(), e.to_string()))?;
            }
        }
        let n = n.ok_or_else(|| Error::parse("line 1", "empty circuit file"))?;
        let mut c = Circuit::from_gates(n, gates)?;
        if any_role {
            roles.zero.sort_unstable();
            roles.plus.sort_unstable();
            roles.validate(n)?;
            c.roles = Some(roles);
        }
        Ok(c)
    }
}

/// One of the six sign-free single-qubit Cliffords, acting on the row vector
/// `(x, z)` of a qubit by right multiplication with a 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalClifford {
    /// Row-major bits `[[m00, m01], [m10, m11]]`.
    m: [[bool; 2]; 2],
}

impl LocalClifford {
    pub const IDENTITY: LocalClifford = LocalClifford {
        m: [[true, false], [false, true]],
    };
    pub const H: LocalClifford = LocalClifford {
        m: [[false, true], [true, false]],
    };
    pub const S: LocalClifford = LocalClifford {
        m: [[true, true], [false, true]],
    };

    /// All six elements, identity first, in a fixed order.
    pub fn all() -> [LocalClifford; 6] {
        let h = Self::H;
        let s = Self::S;
        [
            Self::IDENTITY,
            h,
            s,
            h.then(s),
            s.then(h),
            h.then(s).then(h),
        ]
    }

    /// `self` followed by `next`.
    pub fn then(self, next: LocalClifford) -> LocalClifford {
        let a = self.m;
        let b = next.m;
        let mut m = [[false; 2]; 2];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = (a[r][0] & b[0][c]) ^ (a[r][1] & b[1][c]);
            }
        }
        LocalClifford { m }
    }

    pub fn inverse(self) -> LocalClifford {
        Self::all()
            .into_iter()
            .find(|c| self.then(*c) == Self::IDENTITY)
            .expect("group element has an inverse")
    }

    /// Image of the single-qubit Pauli `(x, z)`.
    pub fn apply(self, x: bool, z: bool) -> (bool, bool) {
        (
            (x & self.m[0][0]) ^ (z & self.m[1][0]),
            (x & self.m[0][1]) ^ (z & self.m[1][1]),
        )
    }

    pub fn apply_pauli(self, p: Pauli) -> Pauli {
        let (x, z) = p.bits();
        let (x, z) = self.apply(x, z);
        Pauli::from_bits(x, z)
    }

    /// Shortest H/S word realizing this element, in time order.
    pub fn gates(self, q: usize) -> Vec<Gate> {
        // Breadth-first over words of length <= 3 covers the whole group.
        let mut words: Vec<Vec<bool>> = vec![vec![]];
        let mut frontier = words.clone();
        for _ in 0..3 {
            let mut next = Vec::new();
            for w in &frontier {
                for is_h in [true, false] {
                    let mut w2 = w.clone();
                    w2.push(is_h);
                    next.push(w2);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let eval = |w: &[bool]| {
            w.iter().fold(Self::IDENTITY, |acc, &is_h| {
                acc.then(if is_h { Self::H } else { Self::S })
            })
        };
        let w = words
            .into_iter()
            .find(|w| eval(w) == self)
            .expect("every element has a word of length <= 3");
        w.into_iter()
            .map(|is_h| if is_h { Gate::H(q) } else { Gate::S(q) })
            .collect()
    }

    /// The unique element with `X -> a` and `Z -> b` when `a`, `b`
    /// anticommute.
    pub fn mapping(a: Pauli, b: Pauli) -> Option<LocalClifford> {
        Self::all()
            .into_iter()
            .find(|c| c.apply_pauli(Pauli::X) == a && c.apply_pauli(Pauli::Z) == b)
    }
}
