//! CNOT-only elimination of stacked CSS check matrices.
//!
//! The state is the matrix `(L_X ; H_X)` under column operations: `CX(c, t)`
//! adds column `c` into column `t`. It is in goal form when, up to row order,
//! it reads `[[B, 0, I_k], [A, 0, 0]]` with `A` invertible on the plus-ancilla
//! columns.

use crate::circuit::{Circuit, Gate, QubitRoles};
use crate::code::{CssCode, StabilizerCode};
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVec};
use crate::pauli::PauliString;

/// Which physical circuit an elimination instance describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CssTarget {
    /// Encoder for the code: reduces `(L_X ; H_X)`.
    Encoder,
    /// Logical |0...0⟩: reduces `H_X` alone.
    ZeroState,
    /// Logical |+...+⟩: reduces `H_Z` alone; engine `CX(c, t)` is physical
    /// `CX(t, c)` and ancilla roles swap.
    PlusState,
}

/// Column-operation state over the stacked matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReductionState {
    n: usize,
    k: usize,
    m_x: usize,
    /// Column-major: row `q` is column `q` of the stacked matrix.
    cols: BitMatrix,
    ones: usize,
    gates: Vec<(usize, usize)>,
    target: CssTarget,
}

impl ReductionState {
    /// State from a stacked matrix with `k` logical rows on top.
    pub fn from_matrix(m: &BitMatrix, k: usize) -> Result<Self> {
        if k > m.rows() {
            return Err(Error::Dimension(format!(
                "{k} logical rows but only {} rows",
                m.rows()
            )));
        }
        let cols = m.transpose();
        Ok(Self {
            n: m.cols(),
            k,
            m_x: m.rows() - k,
            ones: cols.count_ones(),
            cols,
            gates: Vec::new(),
            target: CssTarget::Encoder,
        })
    }

    /// Encoder instance `(L_X ; H_X)`.
    pub fn encoder_instance(code: &CssCode) -> Self {
        let m = code.l_x().vstack(code.h_x()).expect("equal widths");
        Self::from_matrix(&m, code.k()).expect("valid shape")
    }

    /// Logical all-zero preparation: `H_X` alone.
    pub fn zero_state_instance(code: &CssCode) -> Self {
        let mut s = Self::from_matrix(code.h_x(), 0).expect("valid shape");
        s.target = CssTarget::ZeroState;
        s
    }

    /// Logical all-plus preparation: `H_Z` alone.
    pub fn plus_state_instance(code: &CssCode) -> Self {
        let mut s = Self::from_matrix(code.h_z(), 0).expect("valid shape");
        s.target = CssTarget::PlusState;
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m_x(&self) -> usize {
        self.m_x
    }

    pub fn target(&self) -> CssTarget {
        self.target
    }

    /// Engine gates applied so far, as `(control, target)` column additions.
    pub fn gates(&self) -> &[(usize, usize)] {
        &self.gates
    }

    /// The current stacked matrix in row-major form.
    pub fn matrix(&self) -> BitMatrix {
        self.cols.transpose()
    }

    pub fn column(&self, q: usize) -> BitVec {
        self.cols.row(q)
    }

    pub fn column_is_zero(&self, q: usize) -> bool {
        self.cols.row_is_zero(q)
    }

    /// Number of ones, the CSS heuristic.
    pub fn h(&self) -> usize {
        self.ones
    }

    /// Change in `h` if `CX(c, t)` were applied.
    #[inline]
    pub fn delta(&self, c: usize, t: usize) -> isize {
        let a = self.cols.row_words(c);
        let b = self.cols.row_words(t);
        let mut after = 0u32;
        let mut before = 0u32;
        for (x, y) in a.iter().zip(b) {
            after += (x ^ y).count_ones();
            before += y.count_ones();
        }
        after as isize - before as isize
    }

    /// Column `t` += column `c`.
    pub fn apply_cnot(&mut self, c: usize, t: usize) -> Result<()> {
        if c >= self.n {
            return Err(Error::Index { index: c, n: self.n });
        }
        if t >= self.n {
            return Err(Error::Index { index: t, n: self.n });
        }
        if c == t {
            return Err(Error::Validation(format!("CX({c}, {t}) on a single qubit")));
        }
        self.apply_cnot_unchecked(c, t);
        Ok(())
    }

    pub(crate) fn apply_cnot_unchecked(&mut self, c: usize, t: usize) {
        let d = self.delta(c, t);
        self.cols.xor_rows(t, c);
        self.ones = (self.ones as isize + d) as usize;
        self.gates.push((c, t));
    }

    fn row_indices(&self) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
        (0..self.k, self.k..self.k + self.m_x)
    }

    /// Change in `h` if row `src` were added into row `dst`.
    pub fn row_delta(&self, dst: usize, src: usize) -> isize {
        let mut d = 0isize;
        for q in 0..self.n {
            if self.cols.get(q, src) {
                d += if self.cols.get(q, dst) { -1 } else { 1 };
            }
        }
        d
    }

    /// Row `dst` += row `src`. Only check rows may be sources; logical rows
    /// may only receive.
    pub fn add_row(&mut self, dst: usize, src: usize) -> Result<()> {
        let (_, checks) = self.row_indices();
        if !checks.contains(&src) || dst == src || dst >= self.k + self.m_x {
            return Err(Error::Validation(format!(
                "row addition {src} -> {dst} would change the encoded isometry"
            )));
        }
        let d = self.row_delta(dst, src);
        for q in 0..self.n {
            if self.cols.get(q, src) {
                self.cols.flip(q, dst);
            }
        }
        self.ones = (self.ones as isize + d) as usize;
        Ok(())
    }

    /// Replaces the check block by its reduced row echelon form. Returns
    /// whether anything changed.
    pub fn rref_checks(&mut self) -> bool {
        let m = self.matrix();
        let (logical, checks) = self.row_indices();
        let top = m.select_rows(&logical.collect::<Vec<_>>());
        let h = m.select_rows(&checks.collect::<Vec<_>>());
        let (red, _) = h.rref();
        if red == h {
            return false;
        }
        let stacked = top.vstack(&red).expect("equal widths");
        self.cols = stacked.transpose();
        self.ones = self.cols.count_ones();
        true
    }

    /// Goal-form classification, if the state has reached it.
    pub fn goal_form(&self) -> Option<QubitRoles> {
        let n = self.n;
        let k = self.k;
        let check_words = |q: usize| -> bool {
            (self.k..self.k + self.m_x).any(|r| self.cols.get(q, r))
        };
        let mut plus = Vec::new();
        let mut inputs = vec![usize::MAX; k];
        let mut zero = Vec::new();
        for q in 0..n {
            if self.cols.row_is_zero(q) {
                zero.push(q);
            } else if check_words(q) {
                plus.push(q);
            } else {
                // Logical-only column: must be a unit vector on a fresh row.
                let col = self.cols.row(q);
                if col.count_ones() != 1 {
                    return None;
                }
                let r = col.first_one().expect("one bit");
                if inputs[r] != usize::MAX {
                    return None;
                }
                inputs[r] = q;
            }
        }
        if plus.len() != self.m_x || inputs.contains(&usize::MAX) {
            return None;
        }
        if self.m_x > 0 {
            let mut a = BitMatrix::zeros(self.m_x, self.m_x);
            for (j, &q) in plus.iter().enumerate() {
                for r in 0..self.m_x {
                    if self.cols.get(q, k + r) {
                        a.set(r, j, true);
                    }
                }
            }
            if a.rank() != self.m_x {
                return None;
            }
        }
        Some(QubitRoles { inputs, zero, plus })
    }

    /// Physical circuit for the reduction: ancilla preparation followed by
    /// the reversed gate list. Roles must come from [`goal_form`](Self::goal_form).
    pub fn encoder(&self, roles: &QubitRoles) -> Result<Circuit> {
        if self.goal_form().as_ref() != Some(roles) {
            return Err(Error::Contract(
                "roles do not match the goal form of this state".into(),
            ));
        }
        let (roles, flip) = match self.target {
            CssTarget::PlusState => (
                QubitRoles {
                    inputs: Vec::new(),
                    zero: roles.plus.clone(),
                    plus: roles.zero.clone(),
                },
                true,
            ),
            _ => (roles.clone(), false),
        };
        let mut c = Circuit::new(self.n);
        for &q in &roles.plus {
            c.push(Gate::H(q))?;
        }
        for &(a, b) in self.gates.iter().rev() {
            c.push(if flip { Gate::Cx(b, a) } else { Gate::Cx(a, b) })?;
        }
        Ok(c.with_roles(roles))
    }
}

/// Stabilizer description of the state prepared by a CSS target, used as the
/// verification reference.
pub fn target_code(code: &CssCode, target: CssTarget) -> StabilizerCode {
    match target {
        CssTarget::Encoder => code.to_stabilizer_code(),
        CssTarget::ZeroState => {
            let n = code.n();
            let x = |v: BitVec| PauliString::from_parts(v, BitVec::zeros(n)).expect("lengths");
            let z = |v: BitVec| PauliString::from_parts(BitVec::zeros(n), v).expect("lengths");
            let mut stabs: Vec<PauliString> = code.h_x().row_vecs().into_iter().map(x).collect();
            stabs.extend(code.h_z().row_vecs().into_iter().map(z));
            stabs.extend(code.l_z().row_vecs().into_iter().map(z));
            StabilizerCode::with_n(n, vec![], vec![], stabs).expect("valid state")
        }
        CssTarget::PlusState => {
            let n = code.n();
            let x = |v: BitVec| PauliString::from_parts(v, BitVec::zeros(n)).expect("lengths");
            let z = |v: BitVec| PauliString::from_parts(BitVec::zeros(n), v).expect("lengths");
            let mut stabs: Vec<PauliString> = code.h_x().row_vecs().into_iter().map(x).collect();
            stabs.extend(code.l_x().row_vecs().into_iter().map(x));
            stabs.extend(code.h_z().row_vecs().into_iter().map(z));
            StabilizerCode::with_n(n, vec![], vec![], stabs).expect("valid state")
        }
    }
}
