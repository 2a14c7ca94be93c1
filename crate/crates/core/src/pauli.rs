//! Sign-free Pauli strings in symplectic form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::f2::BitVec;

/// Single-qubit Pauli, ignoring phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// The three non-identity Paulis in the order used for move enumeration.
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// 1 iff the two single-qubit Paulis anticommute.
    pub fn anticommutes(self, other: Pauli) -> bool {
        let (a, b) = self.bits();
        let (c, d) = other.bits();
        (a & d) ^ (b & c)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// An n-qubit Pauli operator without phase: qubit q carries X iff `x[q]`,
/// Z iff `z[q]`, Y iff both.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    x: BitVec,
    z: BitVec,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn from_parts(x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::Dimension(format!(
                "x part has length {}, z part has length {}",
                x.len(),
                z.len()
            )));
        }
        Ok(Self { x, z })
    }

    /// Single-qubit Pauli `p` on qubit `q` of an n-qubit register.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(q, p);
        s
    }

    /// Parses `[IXYZ]+`; qubit 0 is the leftmost character.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::parse("index 0", "empty Pauli string"));
        }
        let n = text.chars().count();
        let mut s = Self::identity(n);
        for (i, ch) in text.chars().enumerate() {
            let p = Pauli::from_char(ch).ok_or_else(|| {
                Error::parse(format!("index {i}"), format!("illegal Pauli character {ch:?}"))
            })?;
            s.set(i, p);
        }
        Ok(s)
    }

    /// Builds the string from a symplectic row `(x | z)` of length 2n.
    pub fn from_symplectic(row: &BitVec) -> Result<Self> {
        if row.len() % 2 != 0 {
            return Err(Error::Dimension(format!(
                "symplectic row has odd length {}",
                row.len()
            )));
        }
        let n = row.len() / 2;
        let mut s = Self::identity(n);
        for q in row.iter_ones() {
            if q < n {
                s.x.set(q, true);
            } else {
                s.z.set(q - n, true);
            }
        }
        Ok(s)
    }

    /// The symplectic row `(x | z)`.
    pub fn to_symplectic(&self) -> BitVec {
        let n = self.n();
        let mut row = BitVec::zeros(2 * n);
        for q in self.x.iter_ones() {
            row.set(q, true);
        }
        for q in self.z.iter_ones() {
            row.set(n + q, true);
        }
        row
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn weight(&self) -> usize {
        (0..self.n())
            .filter(|&q| self.x.get(q) || self.z.get(q))
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// True when the string contains only I and Z.
    pub fn is_z_type(&self) -> bool {
        self.x.is_zero()
    }

    /// True when the string contains only I and X.
    pub fn is_x_type(&self) -> bool {
        self.z.is_zero()
    }

    /// Symplectic product: `false` iff the operators commute.
    pub fn symplectic_product(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.anticommutes(other))
    }

    /// Unchecked variant of [`symplectic_product`](Self::symplectic_product);
    /// panics on length mismatch.
    pub fn anticommutes(&self, other: &PauliString) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    /// Sign-free product: XOR of the symplectic rows.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.mul_assign(other);
        Ok(out)
    }

    /// In-place sign-free product; panics on length mismatch.
    pub fn mul_assign(&mut self, other: &PauliString) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Dimension(format!(
                "Pauli strings on {} and {} qubits",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n() {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}
