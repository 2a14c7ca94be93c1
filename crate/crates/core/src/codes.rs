//! Built-in code library.

use crate::code::{AnyCode, CssCode, StabilizerCode};
use crate::error::{Error, Result};
use crate::f2::BitMatrix;
use crate::pauli::PauliString;

/// Names accepted by [`builtin`].
pub const NAMES: &[&str] = &[
    "five_qubit",
    "steane",
    "fourtwotwo",
    "color3",
    "qr17",
    "golay",
    "happy_5_1",
    "happy_4_2",
    "happy_3_3",
];

pub fn builtin(name: &str) -> Option<AnyCode> {
    Some(match name {
        "five_qubit" => AnyCode::Stabilizer(five_qubit()),
        "steane" => AnyCode::Css(steane()),
        "fourtwotwo" => AnyCode::Css(fourtwotwo()),
        "color3" => AnyCode::Css(color3()),
        "qr17" => AnyCode::Css(qr17()),
        "golay" => AnyCode::Css(golay()),
        "happy_5_1" => AnyCode::Stabilizer(happy_5_1()),
        "happy_4_2" => AnyCode::Stabilizer(happy_4_2()),
        "happy_3_3" => AnyCode::Stabilizer(happy_3_3()),
        _ => return None,
    })
}

fn paulis(rows: &[&str]) -> Vec<PauliString> {
    rows.iter()
        .map(|r| PauliString::parse(r).expect("built-in Pauli string"))
        .collect()
}

fn stab(lx: &[&str], lz: &[&str], s: &[&str]) -> StabilizerCode {
    let n = lx.first().or(s.first()).map_or(0, |r| r.len());
    StabilizerCode::with_n(n, paulis(lx), paulis(lz), paulis(s)).expect("built-in code")
}

fn css(hx: &[&str], hz: &[&str], lx: &[&str], lz: &[&str]) -> CssCode {
    let m = |r: &[&str]| BitMatrix::from_strs(r);
    CssCode::new(m(hx), m(hz), Some(m(lx)), Some(m(lz))).expect("built-in code")
}

/// The [[5,1,3]] code.
pub fn five_qubit() -> StabilizerCode {
    stab(
        &["XXXXX"],
        &["ZZZZZ"],
        &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"],
    )
}

/// The [[7,1,3]] Steane code in Hamming-code column order.
pub fn steane() -> CssCode {
    let h = ["0110110", "1010101", "0001111"];
    css(&h, &h, &["1001001"], &["1001001"])
}

/// The [[4,2,2]] code.
pub fn fourtwotwo() -> CssCode {
    css(&["1111"], &["1111"], &["1100", "1010"], &["1010", "1100"])
}

/// The d=3 triangular color code (three plaquettes around a shared qubit).
pub fn color3() -> CssCode {
    let h = ["1111000", "0110110", "0011011"];
    CssCode::new(BitMatrix::from_strs(&h), BitMatrix::from_strs(&h), None, None)
        .expect("built-in code")
}

/// A [[17,1,5]] CSS code built from the two quadratic-residue codes of
/// length 17.
pub fn qr17() -> CssCode {
    let hx = [
        "10000000110100101",
        "01000000101110111",
        "00100000100011110",
        "00010000010001111",
        "00001000111100010",
        "00000100011110001",
        "00000010111011101",
        "00000001101001011",
    ];
    let hz = [
        "10000000100111100",
        "01000000010011110",
        "00100000001001111",
        "00010000100011011",
        "00001000110110001",
        "00000100111100100",
        "00000010011110010",
        "00000001001111001",
    ];
    CssCode::new(BitMatrix::from_strs(&hx), BitMatrix::from_strs(&hz), None, None)
        .expect("built-in code")
}

/// The [[23,1,7]] Golay code. Checks are the cyclic shifts of
/// `g(x)(1+x)` with `g = 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11`.
pub fn golay() -> CssCode {
    let g = [0usize, 2, 4, 5, 6, 10, 11];
    let mut word = [false; 23];
    for &e in &g {
        word[e] ^= true;
        word[e + 1] ^= true;
    }
    let mut h = BitMatrix::zeros(11, 23);
    for s in 0..11 {
        for (i, &b) in word.iter().enumerate() {
            if b {
                h.set(s, (i + s) % 23, true);
            }
        }
    }
    CssCode::new(h.clone(), h, None, None).expect("built-in code")
}

/// Five-qubit HaPPY block with the bulk leg as input.
pub fn happy_5_1() -> StabilizerCode {
    stab(
        &["ZZZZZ"],
        &["XXXXX"],
        &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"],
    )
}

/// Two-input, four-output HaPPY block.
pub fn happy_4_2() -> StabilizerCode {
    stab(&["ZIXX", "ZZXI"], &["IZXZ", "ZXIX"], &["XZZX", "ZYYZ"])
}

/// Three-qubit HaPPY unitary block.
pub fn happy_3_3() -> StabilizerCode {
    stab(&["ZZX", "XZZ", "YZY"], &["YYZ", "ZYY", "ZXZ"], &[])
}

/// Bivariate bicycle code with `A` and `B` given as lists of monomials
/// `x^i y^j` over `Z_l x Z_m`.
pub fn bivariate_bicycle(
    l: usize,
    m: usize,
    a: &[(usize, usize)],
    b: &[(usize, usize)],
) -> Result<CssCode> {
    if l == 0 || m == 0 {
        return Err(Error::Validation("empty bicycle group".into()));
    }
    let half = l * m;
    let poly = |terms: &[(usize, usize)]| {
        let mut p = BitMatrix::zeros(half, half);
        for &(dx, dy) in terms {
            for i in 0..l {
                for j in 0..m {
                    let (r, c) = (i * m + j, ((i + dx) % l) * m + (j + dy) % m);
                    p.flip(r, c);
                }
            }
        }
        p
    };
    let (pa, pb) = (poly(a), poly(b));
    let hx = pa.hstack(&pb)?;
    let hz = pb.transpose().hstack(&pa.transpose())?;
    CssCode::new(hx, hz, None, None)
}

/// The [[144,12,12]] gross code.
pub fn gross() -> CssCode {
    bivariate_bicycle(12, 6, &[(3, 0), (0, 1), (0, 2)], &[(0, 3), (1, 0), (2, 0)])
        .expect("valid parameters")
}

/// The [[72,12,6]] bivariate bicycle code.
pub fn bb72() -> CssCode {
    bivariate_bicycle(6, 6, &[(3, 0), (0, 1), (0, 2)], &[(0, 3), (1, 0), (2, 0)])
        .expect("valid parameters")
}
