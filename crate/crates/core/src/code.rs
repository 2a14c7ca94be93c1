//! Stabilizer and CSS code models, logical-operator derivation and the text
//! code-definition format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVec};
use crate::pauli::PauliString;

/// A stabilizer code given by `n - k` independent commuting generators and
/// `k` pairs of logical operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerCode {
    n: usize,
    k: usize,
    logical_x: Vec<PauliString>,
    logical_z: Vec<PauliString>,
    stabilizers: Vec<PauliString>,
}

/// Stacks Pauli strings as symplectic rows `(x | z)`.
pub fn symplectic_matrix(n: usize, rows: &[PauliString]) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows.len(), 2 * n);
    for (r, p) in rows.iter().enumerate() {
        m.set_row(r, &p.to_symplectic());
    }
    m
}

/// Rows with their halves swapped, so that `swapped(A) * B^T` computes
/// symplectic products.
fn swapped_halves(n: usize, rows: &[PauliString]) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows.len(), 2 * n);
    for (r, p) in rows.iter().enumerate() {
        for q in p.z().iter_ones() {
            m.set(r, q, true);
        }
        for q in p.x().iter_ones() {
            m.set(r, n + q, true);
        }
    }
    m
}

impl StabilizerCode {
    /// Builds and validates a code. Errors name the first failing pair.
    pub fn new(
        logical_x: Vec<PauliString>,
        logical_z: Vec<PauliString>,
        stabilizers: Vec<PauliString>,
    ) -> Result<Self> {
        let n = stabilizers
            .first()
            .or(logical_x.first())
            .map(PauliString::n)
            .ok_or_else(|| Error::Validation("code has no operators".into()))?;
        Self::with_n(n, logical_x, logical_z, stabilizers)
    }

    /// As [`new`](Self::new) but with an explicit qubit count, which allows
    /// codes without any operators.
    pub fn with_n(
        n: usize,
        logical_x: Vec<PauliString>,
        logical_z: Vec<PauliString>,
        stabilizers: Vec<PauliString>,
    ) -> Result<Self> {
        let k = logical_x.len();
        let code = Self {
            n,
            k,
            logical_x,
            logical_z,
            stabilizers,
        };
        code.validate()?;
        Ok(code)
    }

    /// Builds a code from stabilizers alone, deriving logicals.
    pub fn from_stabilizers(n: usize, stabilizers: Vec<PauliString>) -> Result<Self> {
        let (lx, lz) = derive_logicals(n, &stabilizers)?;
        Self::with_n(n, lx, lz, stabilizers)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.logical_z.len() != self.k {
            return Err(Error::Validation(format!(
                "{} logical X operators but {} logical Z operators",
                self.k,
                self.logical_z.len()
            )));
        }
        for (name, list) in [
            ("stabilizer", &self.stabilizers),
            ("logical X", &self.logical_x),
            ("logical Z", &self.logical_z),
        ] {
            for (i, p) in list.iter().enumerate() {
                if p.n() != n {
                    return Err(Error::Validation(format!(
                        "{name} {i} acts on {} qubits, expected {n}",
                        p.n()
                    )));
                }
            }
        }
        if self.stabilizers.len() + self.k != n {
            return Err(Error::Validation(format!(
                "{} stabilizers and {} logical pairs do not add up to {n} qubits",
                self.stabilizers.len(),
                self.k
            )));
        }
        let s = &self.stabilizers;
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                if s[i].anticommutes(&s[j]) {
                    return Err(Error::Validation(format!(
                        "stabilizers {i} ({}) and {j} ({}) anticommute",
                        s[i], s[j]
                    )));
                }
            }
        }
        if symplectic_matrix(n, s).rank() != s.len() {
            return Err(Error::Validation("stabilizers are linearly dependent".into()));
        }
        for (name, list) in [("logical X", &self.logical_x), ("logical Z", &self.logical_z)] {
            for (i, l) in list.iter().enumerate() {
                for (j, st) in s.iter().enumerate() {
                    if l.anticommutes(st) {
                        return Err(Error::Validation(format!(
                            "{name} {i} ({l}) anticommutes with stabilizer {j} ({st})"
                        )));
                    }
                }
            }
        }
        for i in 0..self.k {
            for j in 0..self.k {
                let xz = self.logical_x[i].anticommutes(&self.logical_z[j]);
                if xz != (i == j) {
                    return Err(Error::Validation(format!(
                        "logical X {i} and logical Z {j} have symplectic product {}",
                        u8::from(xz)
                    )));
                }
                if i < j && self.logical_x[i].anticommutes(&self.logical_x[j]) {
                    return Err(Error::Validation(format!(
                        "logical X {i} and logical X {j} anticommute"
                    )));
                }
                if i < j && self.logical_z[i].anticommutes(&self.logical_z[j]) {
                    return Err(Error::Validation(format!(
                        "logical Z {i} and logical Z {j} anticommute"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn logical_x(&self) -> &[PauliString] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliString] {
        &self.logical_z
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn stabilizer_matrix(&self) -> BitMatrix {
        symplectic_matrix(self.n, &self.stabilizers)
    }

    /// True when every stabilizer generator is X-type or Z-type.
    pub fn is_css(&self) -> bool {
        self.stabilizers
            .iter()
            .all(|s| s.is_x_type() || s.is_z_type())
    }

    /// The CSS view of this code when all stabilizers and logicals split.
    pub fn to_css(&self) -> Option<CssCode> {
        if !self.is_css()
            || !self.logical_x.iter().all(PauliString::is_x_type)
            || !self.logical_z.iter().all(PauliString::is_z_type)
        {
            return None;
        }
        let n = self.n;
        let mut h_x = BitMatrix::zeros(0, n);
        let mut h_z = BitMatrix::zeros(0, n);
        for s in &self.stabilizers {
            if s.is_identity() {
                continue;
            }
            if s.is_x_type() {
                h_x.push_row(s.x());
            } else {
                h_z.push_row(s.z());
            }
        }
        let mut l_x = BitMatrix::zeros(0, n);
        let mut l_z = BitMatrix::zeros(0, n);
        for l in &self.logical_x {
            l_x.push_row(l.x());
        }
        for l in &self.logical_z {
            l_z.push_row(l.z());
        }
        CssCode::new(h_x, h_z, Some(l_x), Some(l_z)).ok()
    }

    /// Serializes to the code-definition format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n: {}", self.n);
        let _ = writeln!(s, "k: {}", self.k);
        for (name, list) in [
            ("stabilizers", &self.stabilizers),
            ("logical_x", &self.logical_x),
            ("logical_z", &self.logical_z),
        ] {
            let _ = writeln!(s, "{name}:");
            for p in list {
                let _ = writeln!(s, "{p}");
            }
        }
        s
    }
}

/// Symplectic Gram-Schmidt on the normalizer of the stabilizer group modulo
/// the group itself. Returns `(logical_x, logical_z)`.
pub fn derive_logicals(
    n: usize,
    stabilizers: &[PauliString],
) -> Result<(Vec<PauliString>, Vec<PauliString>)> {
    for (i, s) in stabilizers.iter().enumerate() {
        if s.n() != n {
            return Err(Error::Validation(format!(
                "stabilizer {i} acts on {} qubits, expected {n}",
                s.n()
            )));
        }
    }
    for i in 0..stabilizers.len() {
        for j in (i + 1)..stabilizers.len() {
            if stabilizers[i].anticommutes(&stabilizers[j]) {
                return Err(Error::Validation(format!(
                    "stabilizers {i} and {j} anticommute"
                )));
            }
        }
    }
    let s_mat = symplectic_matrix(n, stabilizers);
    if s_mat.rank() != stabilizers.len() {
        return Err(Error::Validation("stabilizers are linearly dependent".into()));
    }
    let normalizer = swapped_halves(n, stabilizers).kernel_basis();
    // Complement of span(S) inside the normalizer.
    let mut span = s_mat.clone();
    let mut pool: Vec<BitVec> = Vec::new();
    for r in 0..normalizer.rows() {
        let v = normalizer.row(r);
        span.push_row(&v);
        if span.rank() == stabilizers.len() + pool.len() + 1 {
            pool.push(v);
        } else {
            span = span.select_rows(&(0..span.rows() - 1).collect::<Vec<_>>());
        }
    }
    let form = |a: &BitVec, b: &BitVec| -> bool {
        let pa = PauliString::from_symplectic(a).expect("even length");
        let pb = PauliString::from_symplectic(b).expect("even length");
        pa.anticommutes(&pb)
    };
    let mut lx = Vec::new();
    let mut lz = Vec::new();
    while let Some(a) = pool.first().cloned() {
        pool.remove(0);
        let pos = pool
            .iter()
            .position(|b| form(&a, b))
            .ok_or_else(|| Error::Validation("degenerate logical space".into()))?;
        let b = pool.remove(pos);
        for w in pool.iter_mut() {
            let wb = form(w, &b);
            let wa = form(w, &a);
            if wb {
                w.xor_assign(&a);
            }
            if wa {
                w.xor_assign(&b);
            }
        }
        lx.push(PauliString::from_symplectic(&a)?);
        lz.push(PauliString::from_symplectic(&b)?);
    }
    Ok((lx, lz))
}

/// A CSS code with check matrices `H_X`, `H_Z` and logical matrices `L_X`,
/// `L_Z` paired so that `L_X L_Z^T = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    n: usize,
    k: usize,
    h_x: BitMatrix,
    h_z: BitMatrix,
    l_x: BitMatrix,
    l_z: BitMatrix,
}

impl CssCode {
    /// Validates the CSS conditions. Linearly dependent check rows are
    /// dropped; missing logicals are derived.
    pub fn new(
        h_x: BitMatrix,
        h_z: BitMatrix,
        l_x: Option<BitMatrix>,
        l_z: Option<BitMatrix>,
    ) -> Result<Self> {
        let n = h_x.cols().max(h_z.cols());
        for (name, m) in [("Hx", &h_x), ("Hz", &h_z)] {
            if m.cols() != n && m.rows() > 0 {
                return Err(Error::Dimension(format!(
                    "{name} has {} columns, expected {n}",
                    m.cols()
                )));
            }
        }
        let fit = |m: BitMatrix| {
            if m.rows() == 0 {
                BitMatrix::zeros(0, n)
            } else {
                m
            }
        };
        let h_x = fit(h_x);
        let h_z = fit(h_z);
        let h_x = h_x.select_rows(&h_x.independent_rows());
        let h_z = h_z.select_rows(&h_z.independent_rows());
        if !h_x.mul(&h_z.transpose())?.is_zero() {
            return Err(Error::Validation("Hx Hz^T is not zero".into()));
        }
        let k = n
            .checked_sub(h_x.rows() + h_z.rows())
            .ok_or_else(|| Error::Validation("more independent checks than qubits".into()))?;
        let (l_x, l_z) = match (l_x, l_z) {
            (Some(a), Some(b)) => (a, b),
            (None, None) => derive_css_logicals(&h_x, &h_z, k)?,
            _ => {
                return Err(Error::Validation(
                    "Lx and Lz must be given together or not at all".into(),
                ))
            }
        };
        let l_x = if l_x.rows() == 0 { BitMatrix::zeros(0, n) } else { l_x };
        let l_z = if l_z.rows() == 0 { BitMatrix::zeros(0, n) } else { l_z };
        if l_x.rows() != k || l_z.rows() != k {
            return Err(Error::Validation(format!(
                "expected {k} logical rows, found Lx {} and Lz {}",
                l_x.rows(),
                l_z.rows()
            )));
        }
        if l_x.cols() != n || l_z.cols() != n {
            return Err(Error::Dimension("logical rows have the wrong width".into()));
        }
        if !h_x.mul(&l_z.transpose())?.is_zero() {
            return Err(Error::Validation("Hx Lz^T is not zero".into()));
        }
        if !h_z.mul(&l_x.transpose())?.is_zero() {
            return Err(Error::Validation("Hz Lx^T is not zero".into()));
        }
        if l_x.mul(&l_z.transpose())? != BitMatrix::identity(k) {
            return Err(Error::Validation("Lx Lz^T is not the identity".into()));
        }
        Ok(Self {
            n,
            k,
            h_x,
            h_z,
            l_x,
            l_z,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h_x(&self) -> &BitMatrix {
        &self.h_x
    }

    pub fn h_z(&self) -> &BitMatrix {
        &self.h_z
    }

    pub fn l_x(&self) -> &BitMatrix {
        &self.l_x
    }

    pub fn l_z(&self) -> &BitMatrix {
        &self.l_z
    }

    /// The same code as generic stabilizer code: X checks first, then Z.
    pub fn to_stabilizer_code(&self) -> StabilizerCode {
        let n = self.n;
        let x_of = |v: BitVec| PauliString::from_parts(v, BitVec::zeros(n)).expect("same length");
        let z_of = |v: BitVec| PauliString::from_parts(BitVec::zeros(n), v).expect("same length");
        let mut stabs: Vec<PauliString> = self.h_x.row_vecs().into_iter().map(x_of).collect();
        stabs.extend(self.h_z.row_vecs().into_iter().map(z_of));
        let lx = self.l_x.row_vecs().into_iter().map(x_of).collect();
        let lz = self.l_z.row_vecs().into_iter().map(z_of).collect();
        StabilizerCode::with_n(n, lx, lz, stabs).expect("CSS invariants imply stabilizer invariants")
    }

    /// The code with X and Z roles exchanged.
    pub fn dual(&self) -> CssCode {
        CssCode {
            n: self.n,
            k: self.k,
            h_x: self.h_z.clone(),
            h_z: self.h_x.clone(),
            l_x: self.l_z.clone(),
            l_z: self.l_x.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (name, m) in [
            ("Hx", &self.h_x),
            ("Hz", &self.h_z),
            ("Lx", &self.l_x),
            ("Lz", &self.l_z),
        ] {
            let _ = writeln!(s, "{name}:");
            s.push_str(&m.to_text());
        }
        s
    }
}

/// Logical X rows span ker(H_Z) modulo row(H_X); Z rows likewise, then
/// paired.
fn derive_css_logicals(h_x: &BitMatrix, h_z: &BitMatrix, k: usize) -> Result<(BitMatrix, BitMatrix)> {
    let complement = |checks: &BitMatrix, other: &BitMatrix| -> BitMatrix {
        let ker = other.kernel_basis();
        let mut span = checks.clone();
        let mut out = BitMatrix::zeros(0, checks.cols());
        for r in 0..ker.rows() {
            let v = ker.row(r);
            let mut trial = span.clone();
            trial.push_row(&v);
            if trial.rank() > span.rank() {
                span = trial;
                out.push_row(&v);
            }
        }
        out
    };
    let l_x = complement(h_x, h_z);
    let l_z = complement(h_z, h_x);
    if l_x.rows() != k || l_z.rows() != k {
        return Err(Error::Validation("could not derive CSS logicals".into()));
    }
    let m = l_x.mul(&l_z.transpose())?;
    let inv = m
        .inverse()
        .ok_or_else(|| Error::Validation("logical pairing is degenerate".into()))?;
    let l_z = inv.transpose().mul(&l_z)?;
    Ok((l_x, l_z))
}

/// A code loaded from a definition file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyCode {
    Stabilizer(StabilizerCode),
    Css(CssCode),
}

impl AnyCode {
    pub fn n(&self) -> usize {
        match self {
            AnyCode::Stabilizer(c) => c.n(),
            AnyCode::Css(c) => c.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            AnyCode::Stabilizer(c) => c.k(),
            AnyCode::Css(c) => c.k(),
        }
    }

    pub fn to_stabilizer_code(&self) -> StabilizerCode {
        match self {
            AnyCode::Stabilizer(c) => c.clone(),
            AnyCode::Css(c) => c.to_stabilizer_code(),
        }
    }

    /// CSS structure, also recovered from stabilizer-form files.
    pub fn as_css(&self) -> Option<CssCode> {
        match self {
            AnyCode::Stabilizer(c) => c.to_css(),
            AnyCode::Css(c) => Some(c.clone()),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            AnyCode::Stabilizer(c) => c.to_text(),
            AnyCode::Css(c) => c.to_text(),
        }
    }

    /// Parses a code-definition file. Stabilizer form uses sections `n:`,
    /// `k:`, `stabilizers:`, `logical_x:`, `logical_z:`; CSS form uses `Hx:`,
    /// `Hz:`, `Lx:`, `Lz:`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<AnyCode> {
        let mut sections: BTreeMap<String, (usize, Vec<(usize, String)>)> = BTreeMap::new();
        let mut current: Option<String> = None;
        let mut scalars: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((key, value)) = line.split_once(':') {
                let key = key.trim().to_string();
                let value = value.trim();
                if !value.is_empty() {
                    scalars.insert(key, (lineno, value.to_string()));
                    current = None;
                } else {
                    if sections.contains_key(&key) {
                        return Err(Error::parse(
                            format!("line {lineno}"),
                            format!("duplicate section {key:?}"),
                        ));
                    }
                    sections.insert(key.clone(), (lineno, Vec::new()));
                    current = Some(key);
                }
                continue;
            }
            let Some(sec) = &current else {
                return Err(Error::parse(
                    format!("line {lineno}"),
                    "data outside of any section",
                ));
            };
            sections
                .get_mut(sec)
                .expect("section registered")
                .1
                .push((lineno, line.to_string()));
        }
        if sections.is_empty() && scalars.is_empty() {
            return Err(Error::parse("line 1", "empty code definition"));
        }
        for key in sections.keys().chain(scalars.keys()) {
            if !matches!(
                key.as_str(),
                "n" | "k" | "name" | "stabilizers" | "logical_x" | "logical_z" | "Hx" | "Hz"
                    | "Lx" | "Lz"
            ) {
                return Err(Error::parse("header", format!("unknown section {key:?}")));
            }
        }
        let scalar = |key: &str| -> Result<Option<usize>> {
            scalars
                .get(key)
                .map(|(lineno, v)| {
                    v.parse::<usize>().map_err(|_| {
                        Error::parse(format!("line {lineno}"), format!("{key} must be a count"))
                    })
                })
                .transpose()
        };
        let is_css = sections.contains_key("Hx") || sections.contains_key("Hz");
        if is_css {
            let matrix = |key: &str| -> Result<Option<BitMatrix>> {
                let Some((_, lines)) = sections.get(key) else {
                    return Ok(None);
                };
                let mut rows = Vec::new();
                for (lineno, l) in lines {
                    rows.push(BitVec::parse(l).map_err(|e| match e {
                        Error::Parse { message, .. } => {
                            Error::parse(format!("line {lineno}"), message)
                        }
                        other => other,
                    })?);
                }
                let width = rows.first().map_or(0, BitVec::len);
                if let Some((i, _)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
                    return Err(Error::parse(
                        format!("line {}", lines[i].0),
                        format!("row width differs from {width}"),
                    ));
                }
                Ok(Some(BitMatrix::from_rows(width, &rows)?))
            };
            let h_x = matrix("Hx")?.unwrap_or_else(|| BitMatrix::zeros(0, 0));
            let h_z = matrix("Hz")?.unwrap_or_else(|| BitMatrix::zeros(0, 0));
            let code = CssCode::new(h_x, h_z, matrix("Lx")?, matrix("Lz")?)?;
            if let Some(n) = scalar("n")? {
                if n != code.n() {
                    return Err(Error::Validation(format!(
                        "declared n = {n} but matrices have {} columns",
                        code.n()
                    )));
                }
            }
            if let Some(k) = scalar("k")? {
                if k != code.k() {
                    return Err(Error::Validation(format!(
                        "declared k = {k} but the checks leave {} logical qubits",
                        code.k()
                    )));
                }
            }
            return Ok(AnyCode::Css(code));
        }
        let paulis = |key: &str| -> Result<Option<Vec<PauliString>>> {
            let Some((_, lines)) = sections.get(key) else {
                return Ok(None);
            };
            lines
                .iter()
                .map(|(lineno, l)| {
                    PauliString::parse(l).map_err(|e| match e {
                        Error::Parse { location, message } => {
                            Error::parse(format!("line {lineno}, {location}"), message)
                        }
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()
                .map(Some)
        };
        let stabs = paulis("stabilizers")?.unwrap_or_default();
        let n = match scalar("n")? {
            Some(n) => n,
            None => stabs
                .first()
                .map(PauliString::n)
                .ok_or_else(|| Error::parse("header", "missing `n:`"))?,
        };
        let code = match (paulis("logical_x")?, paulis("logical_z")?) {
            (Some(lx), Some(lz)) => StabilizerCode::with_n(n, lx, lz, stabs)?,
            (None, None) => StabilizerCode::from_stabilizers(n, stabs)?,
            _ => {
                return Err(Error::Validation(
                    "logical_x and logical_z must be given together".into(),
                ))
            }
        };
        if let Some(k) = scalar("k")? {
            if k != code.k() {
                return Err(Error::Validation(format!(
                    "declared k = {k} but the code has {} logical qubits",
                    code.k()
                )));
            }
        }
        Ok(AnyCode::Stabilizer(code))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        PauliString::parse(s).unwrap()
    }

    fn five_qubit_stabs() -> Vec<PauliString> {
        ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].map(p).to_vec()
    }

    #[test]
    fn derive_logicals_five_qubit() {
        let stabs = five_qubit_stabs();
        let (lx, lz) = derive_logicals(5, &stabs).unwrap();
        assert_eq!((lx.len(), lz.len()), (1, 1));
        assert!(lx[0].anticommutes(&lz[0]));
        for s in &stabs {
            assert!(!lx[0].anticommutes(s) && !lz[0].anticommutes(s));
        }
    }

    #[test]
    fn derive_logicals_trivial_cases() {
        let (lx, lz) = derive_logicals(2, &[p("XX"), p("ZZ")]).unwrap();
        assert!(lx.is_empty() && lz.is_empty());
        let (lx, lz) = derive_logicals(1, &[]).unwrap();
        assert_eq!(lx.len(), 1);
        assert!(lx[0].anticommutes(&lz[0]));
        assert!(derive_logicals(1, &[p("X"), p("Z")]).is_err());
        assert!(derive_logicals(2, &[p("XX"), p("XX")]).is_err());
    }

    #[test]
    fn validation_names_failing_pair() {
        let err = StabilizerCode::new(vec![], vec![], vec![p("X"), p("Z")]).unwrap_err();
        assert!(err.to_string().contains("0") && err.to_string().contains("1"), "{err}");
        let err = StabilizerCode::new(vec![p("XI")], vec![p("XI")], vec![p("ZZ")]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn parse_round_trip_stabilizer_form() {
        let code = StabilizerCode::from_stabilizers(5, five_qubit_stabs()).unwrap();
        let text = code.to_text();
        assert_eq!(AnyCode::parse(&text).unwrap(), AnyCode::Stabilizer(code));
    }

    #[test]
    fn parse_css_and_derive() {
        let text = "# steane\nHx:\n0110110\n1010101\n0001111\nHz:\n0110110\n1010101\n0001111\n";
        let AnyCode::Css(code) = AnyCode::parse(text).unwrap() else {
            panic!("expected css")
        };
        assert_eq!((code.n(), code.k()), (7, 1));
        let round = AnyCode::parse(&code.to_text()).unwrap();
        assert_eq!(round, AnyCode::Css(code.clone()));
        let back = code.to_stabilizer_code().to_css().unwrap();
        assert_eq!(back, code);
    }

    #[test]
    fn dependent_checks_are_dropped() {
        let h = BitMatrix::from_strs(&["1111", "1111"]);
        let code = CssCode::new(h.clone(), h, None, None).unwrap();
        assert_eq!((code.h_x().rows(), code.k()), (1, 2));
    }

    #[test]
    fn parse_errors() {
        assert!(AnyCode::parse("").is_err());
        let err = AnyCode::parse("n: 2\nstabilizers:\nXQ\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(AnyCode::parse("XX\n").is_err());
        assert!(AnyCode::parse("Hx:\n11\n1\n").is_err());
    }
}
