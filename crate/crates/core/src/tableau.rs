//! Completed stabilizer tableaus, destabilizer completion, row-operation
//! preprocessing, gate application and goal detection.
//!
//! Row layout is `(X; D; Z; S)`: rows `0..k` are logical X, `k..n`
//! destabilizers, `n..n+k` logical Z and `n+k..2n` stabilizers, so row `r` and
//! row `r + n` form a symplectic pair. Columns `0..n` are X parts and `n..2n`
//! Z parts. Storage is column-major so gates, which act on columns, are
//! word-parallel XORs.

use std::fmt;

use crate::circuit::{Gate, LocalClifford, QubitRoles};
use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVec};
use crate::pauli::{Pauli, PauliString};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    n: usize,
    k: usize,
    /// Row `c` holds tableau column `c` as a bit vector over tableau rows.
    cols: BitMatrix,
}

impl Tableau {
    /// Builds a tableau from `2n` rows in `(X; D; Z; S)` order without
    /// checking the symplectic invariant.
    pub fn from_rows_unchecked(n: usize, k: usize, rows: &[PauliString]) -> Result<Self> {
        if rows.len() != 2 * n || k > n {
            return Err(Error::Dimension(format!(
                "tableau on {n} qubits needs {} rows, got {}",
                2 * n,
                rows.len()
            )));
        }
        let mut cols = BitMatrix::zeros(2 * n, 2 * n);
        for (r, p) in rows.iter().enumerate() {
            if p.n() != n {
                return Err(Error::Dimension(format!(
                    "row {r} acts on {} qubits, expected {n}",
                    p.n()
                )));
            }
            for q in p.x().iter_ones() {
                cols.set(q, r, true);
            }
            for q in p.z().iter_ones() {
                cols.set(n + q, r, true);
            }
        }
        Ok(Self { n, k, cols })
    }

    /// As [`from_rows_unchecked`](Self::from_rows_unchecked), then verifies
    /// the symplectic pairing.
    pub fn from_rows(n: usize, k: usize, rows: &[PauliString]) -> Result<Self> {
        let t = Self::from_rows_unchecked(n, k, rows)?;
        if let Some((a, b)) = t.symplectic_violation() {
            return Err(Error::Validation(format!(
                "rows {a} and {b} violate the symplectic pairing"
            )));
        }
        Ok(t)
    }

    /// The canonical tableau: inputs on qubits `0..k`, |0⟩ ancillas after.
    pub fn identity(n: usize, k: usize) -> Self {
        let mut cols = BitMatrix::zeros(2 * n, 2 * n);
        for c in 0..2 * n {
            cols.set(c, c, true);
        }
        Self { n, k, cols }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Entry at tableau row `r`, column `c`.
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cols.get(c, r)
    }

    /// Packed tableau column `c` (bits over rows).
    #[inline]
    pub fn column_words(&self, c: usize) -> &[u64] {
        self.cols.row_words(c)
    }

    pub fn row(&self, r: usize) -> PauliString {
        let n = self.n;
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for q in 0..n {
            x.set(q, self.get(r, q));
            z.set(q, self.get(r, n + q));
        }
        PauliString::from_parts(x, z).expect("equal lengths")
    }

    pub fn rows(&self) -> Vec<PauliString> {
        (0..2 * self.n).map(|r| self.row(r)).collect()
    }

    pub fn logical_x_row(&self, i: usize) -> usize {
        i
    }

    pub fn destabilizer_row(&self, i: usize) -> usize {
        self.k + i
    }

    pub fn logical_z_row(&self, i: usize) -> usize {
        self.n + i
    }

    pub fn stabilizer_row(&self, i: usize) -> usize {
        self.n + self.k + i
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.n - self.k)
            .map(|i| self.row(self.stabilizer_row(i)))
            .collect()
    }

    /// The encoded code: logicals and stabilizers, destabilizers dropped.
    pub fn code(&self) -> Result<StabilizerCode> {
        let lx = (0..self.k).map(|i| self.row(i)).collect();
        let lz = (0..self.k).map(|i| self.row(self.n + i)).collect();
        StabilizerCode::with_n(self.n, lx, lz, self.stabilizers())
    }

    /// Row `dst` += row `src`.
    pub fn add_row(&mut self, dst: usize, src: usize) {
        for c in 0..2 * self.n {
            if self.cols.get(c, src) {
                self.cols.flip(c, dst);
            }
        }
    }

    /// First pair of rows whose symplectic product is wrong, if any.
    pub fn symplectic_violation(&self) -> Option<(usize, usize)> {
        let rows = self.rows();
        let n = self.n;
        for a in 0..2 * n {
            for b in (a + 1)..2 * n {
                let expected = b == a + n && a < n;
                if rows[a].anticommutes(&rows[b]) != expected {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_symplectic(&self) -> bool {
        self.symplectic_violation().is_none()
    }

    /// Applies a gate as a column operation.
    pub fn apply(&mut self, g: &Gate) -> Result<()> {
        g.validate(self.n)?;
        self.apply_unchecked(g);
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Gate application without range checks; panics on bad indices.
    pub fn apply_unchecked(&mut self, g: &Gate) {
        let n = self.n;
        match *g {
            Gate::H(q) => self.cols.swap_rows(q, n + q),
            Gate::S(q) => self.cols.xor_rows(n + q, q),
            Gate::Cx(c, t) => {
                self.cols.xor_rows(t, c);
                self.cols.xor_rows(n + c, n + t);
            }
            Gate::Transvection { i, pi, j, pj } => {
                // mask[r] = <row r, P>
                let words = self.cols.row_words(0).len();
                let mut mask = vec![0u64; words];
                for (q, p) in [(i, pi), (j, pj)] {
                    let (px, pz) = p.bits();
                    if pz {
                        for (m, w) in mask.iter_mut().zip(self.cols.row_words(q)) {
                            *m ^= w;
                        }
                    }
                    if px {
                        for (m, w) in mask.iter_mut().zip(self.cols.row_words(n + q)) {
                            *m ^= w;
                        }
                    }
                }
                for (q, p) in [(i, pi), (j, pj)] {
                    let (px, pz) = p.bits();
                    if px {
                        for (w, m) in self.cols.row_words_mut(q).iter_mut().zip(&mask) {
                            *w ^= m;
                        }
                    }
                    if pz {
                        for (w, m) in self.cols.row_words_mut(n + q).iter_mut().zip(&mask) {
                            *w ^= m;
                        }
                    }
                }
            }
        }
    }

    /// Applies a single-qubit Clifford to qubit `q`.
    pub fn apply_local(&mut self, q: usize, c: LocalClifford) {
        for g in c.gates(q) {
            self.apply_unchecked(&g);
        }
    }

    /// The pair `(x, z)` of row `r` on qubit `q`.
    #[inline]
    pub fn pauli_at(&self, r: usize, q: usize) -> Pauli {
        Pauli::from_bits(self.get(r, q), self.get(r, self.n + q))
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Tableau n={} k={}", self.n, self.k)?;
        for r in 0..2 * self.n {
            writeln!(f, "  {}", self.row(r))?;
        }
        Ok(())
    }
}

/// Completes a code to a full tableau by constructing destabilizers.
///
/// Destabilizers are built from the last stabilizer to the first: the last
/// gets a weight-one partner, earlier ones take the first kernel vector of
/// the symplectic complement of the later stabilizers that anticommutes with
/// their stabilizer, multiplied by the stabilizers whose destabilizers it
/// anticommutes with. The result is then paired exactly, made to commute with
/// the logicals, and made mutually commuting.
pub fn complete_tableau(code: &StabilizerCode) -> Result<Tableau> {
    let n = code.n();
    let k = code.k();
    let m = n - k;
    let s = code.stabilizers();
    let mut d: Vec<Option<PauliString>> = vec![None; m];
    for i in (0..m).rev() {
        let b = if i == m - 1 {
            weight_one_partner(&s[i]).ok_or_else(|| {
                Error::Validation(format!("stabilizer {i} is the identity"))
            })?
        } else {
            // Complement of span{s_{i+1..}}: kernel of the swapped-half rows.
            let mut swapped = BitMatrix::zeros(m - i - 1, 2 * n);
            for (r, st) in s[i + 1..].iter().enumerate() {
                for q in st.z().iter_ones() {
                    swapped.set(r, q, true);
                }
                for q in st.x().iter_ones() {
                    swapped.set(r, n + q, true);
                }
            }
            let basis = swapped.kernel_basis();
            (0..basis.rows())
                .map(|r| PauliString::from_symplectic(&basis.row(r)).expect("even length"))
                .find(|b| b.anticommutes(&s[i]))
                .ok_or_else(|| {
                    Error::Validation(format!("stabilizer {i} depends on later stabilizers"))
                })?
        };
        let mut di = b.clone();
        for (j, dj) in d.iter().enumerate().skip(i + 1) {
            if dj.as_ref().expect("built").anticommutes(&b) {
                di.mul_assign(&s[j]);
            }
        }
        d[i] = Some(di);
    }
    let mut d: Vec<PauliString> = d.into_iter().map(|x| x.expect("built")).collect();

    // Exact duality with the stabilizers: the pairing matrix is triangular.
    for i in 0..m {
        for l in 0..i {
            if d[i].anticommutes(&s[l]) {
                let dl = d[l].clone();
                d[i].mul_assign(&dl);
            }
        }
    }
    // Commute with the logicals.
    for di in d.iter_mut() {
        for l in 0..k {
            let hits_z = di.anticommutes(&code.logical_z()[l]);
            let hits_x = di.anticommutes(&code.logical_x()[l]);
            if hits_z {
                di.mul_assign(&code.logical_x()[l]);
            }
            if hits_x {
                di.mul_assign(&code.logical_z()[l]);
            }
        }
    }
    // Mutual commutation.
    for i in 0..m {
        for l in 0..i {
            if d[i].anticommutes(&d[l]) {
                d[i].mul_assign(&s[l]);
            }
        }
    }

    let mut rows: Vec<PauliString> = code.logical_x().to_vec();
    rows.extend(d);
    rows.extend(code.logical_z().iter().cloned());
    rows.extend(s.iter().cloned());
    Tableau::from_rows(n, k, &rows)
}

/// Lowest-qubit weight-one Pauli anticommuting with `s`, X before Z before Y.
fn weight_one_partner(s: &PauliString) -> Option<PauliString> {
    (0..s.n()).find_map(|q| {
        [Pauli::X, Pauli::Z, Pauli::Y].into_iter().find_map(|p| {
            let b = PauliString::single(s.n(), q, p);
            b.anticommutes(s).then_some(b)
        })
    })
}

/// One row-operation update of the preprocessing step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowUpdate {
    /// `S_j += S_i` with `D_i += D_j`.
    Stabilizer { i: usize, j: usize },
    /// `X_i += S_j` with `D_j += Z_i`.
    LogicalX { i: usize, j: usize },
    /// `Z_i += S_j` with `D_j += X_i`.
    LogicalZ { i: usize, j: usize },
}

impl RowUpdate {
    /// All updates in scan order.
    pub fn all(n: usize, k: usize) -> Vec<RowUpdate> {
        let m = n - k;
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    out.push(RowUpdate::Stabilizer { i, j });
                }
            }
        }
        for i in 0..k {
            for j in 0..m {
                out.push(RowUpdate::LogicalX { i, j });
            }
        }
        for i in 0..k {
            for j in 0..m {
                out.push(RowUpdate::LogicalZ { i, j });
            }
        }
        out
    }

    pub fn apply(self, t: &mut Tableau) {
        match self {
            RowUpdate::Stabilizer { i, j } => {
                t.add_row(t.stabilizer_row(j), t.stabilizer_row(i));
                t.add_row(t.destabilizer_row(i), t.destabilizer_row(j));
            }
            RowUpdate::LogicalX { i, j } => {
                t.add_row(t.logical_x_row(i), t.stabilizer_row(j));
                t.add_row(t.destabilizer_row(j), t.logical_z_row(i));
            }
            RowUpdate::LogicalZ { i, j } => {
                t.add_row(t.logical_z_row(i), t.stabilizer_row(j));
                t.add_row(t.destabilizer_row(j), t.logical_x_row(i));
            }
        }
    }
}

/// Repeatedly applies the best strictly improving [`RowUpdate`] under `h`.
pub fn preprocess<S: Ord, F: Fn(&Tableau) -> S>(t: &Tableau, h: F) -> Tableau {
    let updates = RowUpdate::all(t.n(), t.k());
    let mut current = t.clone();
    let mut current_score = h(&current);
    loop {
        let mut best: Option<(Tableau, S)> = None;
        for u in &updates {
            let mut cand = current.clone();
            u.apply(&mut cand);
            let sc = h(&cand);
            let bar = best.as_ref().map_or(&current_score, |(_, s)| s);
            if sc < *bar {
                best = Some((cand, sc));
            }
        }
        match best {
            Some((t, s)) => {
                current = t;
                current_score = s;
            }
            None => return current,
        }
    }
}

/// Checks the canonical goal form up to stabilizer row operations and qubit
/// permutation. Returns the roles when it holds: the stabilizer support
/// columns become |0⟩ ancillas and each logical pair's column its input.
pub fn is_goal(t: &Tableau) -> Option<QubitRoles> {
    let n = t.n();
    let k = t.k();
    let srows: Vec<usize> = (0..n - k).map(|i| t.stabilizer_row(i)).collect();
    // Stabilizers are Z-only.
    if srows.iter().any(|&r| (0..n).any(|q| t.get(r, q))) {
        return None;
    }
    let pivots: Vec<usize> = (0..n)
        .filter(|&q| srows.iter().any(|&r| t.get(r, n + q)))
        .collect();
    if pivots.len() != n - k {
        return None;
    }
    let is_pivot = |q: usize| pivots.binary_search(&q).is_ok();
    let mut inputs = Vec::with_capacity(k);
    for i in 0..k {
        let xr = t.logical_x_row(i);
        let zr = t.logical_z_row(i);
        let mut selected = None;
        for q in 0..n {
            let (xp, zp) = (t.pauli_at(xr, q), t.pauli_at(zr, q));
            if is_pivot(q) {
                if !matches!(xp, Pauli::I | Pauli::Z) || !matches!(zp, Pauli::I | Pauli::Z) {
                    return None;
                }
            } else if xp == Pauli::X && zp == Pauli::Z {
                if selected.is_some() {
                    return None;
                }
                selected = Some(q);
            } else if xp != Pauli::I || zp != Pauli::I {
                return None;
            }
        }
        let q = selected?;
        if inputs.contains(&q) {
            return None;
        }
        inputs.push(q);
    }
    Some(QubitRoles {
        inputs,
        zero: pivots,
        plus: Vec::new(),
    })
}

/// Checks the goal form up to one layer of single-qubit Cliffords. Returns
/// the fixing layer (gates to append to the reduction) and the roles reached
/// after it.
pub fn goal_up_to_local(t: &Tableau) -> Option<(Vec<Gate>, QubitRoles)> {
    let n = t.n();
    let k = t.k();
    let srows: Vec<usize> = (0..n - k).map(|i| t.stabilizer_row(i)).collect();
    let mut fix: Vec<Option<LocalClifford>> = vec![None; n];
    let mut dirs: Vec<Option<Pauli>> = vec![None; n];
    for q in 0..n {
        let mut dir = None;
        for &r in &srows {
            let p = t.pauli_at(r, q);
            if p == Pauli::I {
                continue;
            }
            match dir {
                None => dir = Some(p),
                Some(d) if d == p => {}
                _ => return None,
            }
        }
        dirs[q] = dir;
    }
    let support = dirs.iter().filter(|d| d.is_some()).count();
    if support != n - k {
        return None;
    }
    for q in 0..n {
        if let Some(d) = dirs[q] {
            fix[q] = LocalClifford::all()
                .into_iter()
                .find(|c| c.apply_pauli(d) == Pauli::Z);
            // Logical support on this column must lie along the stabilizer direction.
            for i in 0..k {
                for r in [t.logical_x_row(i), t.logical_z_row(i)] {
                    let p = t.pauli_at(r, q);
                    if p != Pauli::I && p != d {
                        return None;
                    }
                }
            }
        }
    }
    let mut taken = vec![false; n];
    for i in 0..k {
        let xr = t.logical_x_row(i);
        let zr = t.logical_z_row(i);
        let mut selected = None;
        for q in (0..n).filter(|&q| dirs[q].is_none()) {
            let (a, b) = (t.pauli_at(xr, q), t.pauli_at(zr, q));
            if a == Pauli::I && b == Pauli::I {
                continue;
            }
            if selected.is_some() || taken[q] || a == Pauli::I || b == Pauli::I || a == b {
                return None;
            }
            selected = Some(q);
            fix[q] = Some(LocalClifford::mapping(a, b)?.inverse());
        }
        taken[selected?] = true;
    }
    let mut gates = Vec::new();
    for (q, c) in fix.iter().enumerate() {
        if let Some(c) = c {
            gates.extend(c.gates(q));
        }
    }
    let mut fixed = t.clone();
    for g in &gates {
        fixed.apply_unchecked(g);
    }
    let roles = is_goal(&fixed)?;
    Some((gates, roles))
}
