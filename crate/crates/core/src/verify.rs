//! Independent correctness checks for synthesized circuits.
//!
//! [`check_encoder`] conjugates single-qubit Paulis through the circuit and
//! compares the images with the code. [`statevector_check`] simulates the
//! circuit densely and measures expectation values; it shares no code with
//! the synthesis engines beyond the circuit and code types.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate, QubitRoles};
use crate::code::{symplectic_matrix, StabilizerCode};
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVec};
use crate::pauli::{Pauli, PauliString};

/// Largest qubit count accepted by the dense simulator.
pub const MAX_STATEVECTOR_QUBITS: usize = 14;

/// Equality tolerance on expectation values.
pub const TOLERANCE: f64 = 1e-9;

fn conjugate(p: &mut PauliString, g: &Gate) {
    match *g {
        Gate::H(q) => {
            let (x, z) = (p.x().get(q), p.z().get(q));
            p.set(q, Pauli::from_bits(z, x));
        }
        Gate::S(q) => {
            let (x, z) = (p.x().get(q), p.z().get(q));
            p.set(q, Pauli::from_bits(x, z ^ x));
        }
        Gate::Cx(c, t) => {
            let (xc, zc) = (p.x().get(c), p.z().get(c));
            let (xt, zt) = (p.x().get(t), p.z().get(t));
            p.set(t, Pauli::from_bits(xt ^ xc, zt));
            p.set(c, Pauli::from_bits(xc, zc ^ zt));
        }
        Gate::Transvection { .. } => {
            for h in g.decompose() {
                conjugate(p, &h);
            }
        }
    }
}

/// Sign-free images `U X_q U†` and `U Z_q U†` for every qubit.
pub fn propagate(circuit: &Circuit) -> (Vec<PauliString>, Vec<PauliString>) {
    let n = circuit.n;
    let mut xs: Vec<PauliString> = (0..n)
        .map(|q| PauliString::single(n, q, Pauli::X))
        .collect();
    let mut zs: Vec<PauliString> = (0..n)
        .map(|q| PauliString::single(n, q, Pauli::Z))
        .collect();
    for g in &circuit.gates {
        for p in xs.iter_mut().chain(zs.iter_mut()) {
            conjugate(p, g);
        }
    }
    (xs, zs)
}

/// Image of an arbitrary Pauli string.
pub fn propagate_pauli(circuit: &Circuit, p: &PauliString) -> PauliString {
    let mut p = p.clone();
    for g in &circuit.gates {
        conjugate(&mut p, g);
    }
    p
}

fn roles_of(circuit: &Circuit, code: &StabilizerCode) -> Result<QubitRoles> {
    let roles = circuit
        .roles
        .clone()
        .ok_or_else(|| Error::Contract("circuit has no qubit roles".into()))?;
    roles.validate(circuit.n)?;
    if circuit.n != code.n() || roles.k() != code.k() {
        return Err(Error::Contract(format!(
            "circuit encodes {} into {} qubits but the code is [[{}, {}]]",
            roles.k(),
            circuit.n,
            code.n(),
            code.k()
        )));
    }
    Ok(roles)
}

/// Whether the circuit encodes `code` (sign-free): ancilla Z images generate
/// the stabilizer group and every input X/Z maps to its logical up to a
/// stabilizer.
pub fn check_encoder(circuit: &Circuit, code: &StabilizerCode) -> Result<bool> {
    let roles = roles_of(circuit, code)?;
    let n = code.n();
    let (xs, zs) = propagate(circuit);
    let images: Vec<PauliString> = roles.ancillas().iter().map(|&q| zs[q].clone()).collect();
    let generated = symplectic_matrix(n, &images);
    let stabs = code.stabilizer_matrix();
    if generated.rank() != images.len() || !generated.row_space_equal(&stabs)? {
        return Ok(false);
    }
    for (i, &q) in roles.inputs.iter().enumerate() {
        for (img, logical) in [(&xs[q], &code.logical_x()[i]), (&zs[q], &code.logical_z()[i])] {
            let diff = img.to_symplectic().xor(&logical.to_symplectic());
            if !diff.is_zero() && stabs.solve(&diff).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sign convention for [`statevector_check`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignMode {
    /// Stabilizers must have expectation +1 and logicals must match exactly.
    Strict,
    /// Signs are ignored; the correcting Pauli frame is reported.
    #[default]
    Free,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StatevectorReport {
    pub passed: bool,
    /// Single-qubit Paulis that flip every stabilizer to the +1 eigenspace.
    pub frame: Option<PauliString>,
    pub trials: usize,
}

/// `i^phase X^x Z^z` on at most 64 qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Phased {
    phase: u8,
    x: u64,
    z: u64,
}

impl Phased {
    fn identity() -> Self {
        Phased { phase: 0, x: 0, z: 0 }
    }

    /// The Hermitian Pauli named by the string (`Y = iXZ`).
    fn from_pauli(p: &PauliString) -> Self {
        let mut out = Phased::identity();
        for q in 0..p.n() {
            let (x, z) = (p.x().get(q), p.z().get(q));
            out.x |= (x as u64) << q;
            out.z |= (z as u64) << q;
            if x && z {
                out.phase += 1;
            }
        }
        out.phase %= 4;
        out
    }

    fn mul(self, o: Phased) -> Phased {
        let sign = ((self.z & o.x).count_ones() % 2) as u8 * 2;
        Phased {
            phase: (self.phase + o.phase + sign) % 4,
            x: self.x ^ o.x,
            z: self.z ^ o.z,
        }
    }
}

struct State {
    amp: Vec<Complex64>,
}

impl State {
    fn zero(n: usize) -> Self {
        let mut amp = vec![Complex64::new(0.0, 0.0); 1 << n];
        amp[0] = Complex64::new(1.0, 0.0);
        State { amp }
    }

    fn apply(&mut self, g: &Gate) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match *g {
            Gate::H(q) => {
                let m = 1usize << q;
                for b in 0..self.amp.len() {
                    if b & m == 0 {
                        let (a0, a1) = (self.amp[b], self.amp[b | m]);
                        self.amp[b] = (a0 + a1) * s;
                        self.amp[b | m] = (a0 - a1) * s;
                    }
                }
            }
            Gate::S(q) => {
                let m = 1usize << q;
                for (b, a) in self.amp.iter_mut().enumerate() {
                    if b & m != 0 {
                        *a *= Complex64::i();
                    }
                }
            }
            Gate::Cx(c, t) => {
                let (mc, mt) = (1usize << c, 1usize << t);
                for b in 0..self.amp.len() {
                    if b & mc != 0 && b & mt == 0 {
                        self.amp.swap(b, b | mt);
                    }
                }
            }
            Gate::Transvection { .. } => {
                for h in g.decompose() {
                    self.apply(&h);
                }
            }
        }
    }

    fn expectation(&self, p: Phased) -> Complex64 {
        let ph = [
            Complex64::new(1.0, 0.0),
            Complex64::i(),
            Complex64::new(-1.0, 0.0),
            -Complex64::i(),
        ][p.phase as usize];
        let (x, z) = (p.x as usize, p.z as usize);
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, &a) in self.amp.iter().enumerate() {
            let v = if (z & b).count_ones() % 2 == 1 { -a } else { a };
            acc += self.amp[b ^ x].conj() * v;
        }
        acc * ph
    }
}

fn random_input(n: usize, inputs: &[usize], rng: &mut ChaCha8Rng) -> Vec<Gate> {
    let k = inputs.len();
    let mut gates = Vec::new();
    if k == 0 {
        return gates;
    }
    for _ in 0..(4 * k + 2) {
        match rng.gen_range(0..3) {
            0 => gates.push(Gate::H(inputs[rng.gen_range(0..k)])),
            1 => gates.push(Gate::S(inputs[rng.gen_range(0..k)])),
            _ if k >= 2 => {
                let a = rng.gen_range(0..k);
                let b = (a + rng.gen_range(1..k)) % k;
                gates.push(Gate::Cx(inputs[a], inputs[b]));
            }
            _ => {}
        }
    }
    debug_assert!(gates.iter().all(|g| g.validate(n).is_ok()));
    gates
}

/// Input Paulis whose logical images are compared: all of them for small `k`,
/// otherwise the generators and a random sample of products.
fn probes(k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u8>> {
    if k <= 4 {
        return (0..4usize.pow(k as u32))
            .map(|mut v| {
                (0..k)
                    .map(|_| {
                        let d = (v % 4) as u8;
                        v /= 4;
                        d
                    })
                    .collect()
            })
            .collect();
    }
    let mut out = Vec::new();
    for i in 0..k {
        for d in 1..4 {
            let mut p = vec![0u8; k];
            p[i] = d;
            out.push(p);
        }
    }
    for _ in 0..64 {
        out.push((0..k).map(|_| rng.gen_range(0..4)).collect());
    }
    out
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < TOLERANCE
}

/// Dense-simulation oracle: random stabilizer states on the inputs are
/// encoded and every stabilizer and logical expectation is compared.
pub fn statevector_check(
    circuit: &Circuit,
    code: &StabilizerCode,
    trials: usize,
    seed: u64,
    mode: SignMode,
) -> Result<StatevectorReport> {
    let roles = roles_of(circuit, code)?;
    let n = code.n();
    if n > MAX_STATEVECTOR_QUBITS {
        return Err(Error::Capacity(format!(
            "statevector simulation supports at most {MAX_STATEVECTOR_QUBITS} qubits, got {n}"
        )));
    }
    let k = code.k();
    let stabs: Vec<Phased> = code.stabilizers().iter().map(Phased::from_pauli).collect();
    let lx: Vec<Phased> = code.logical_x().iter().map(Phased::from_pauli).collect();
    let lz: Vec<Phased> = code.logical_z().iter().map(Phased::from_pauli).collect();

    let run_trial = |t: usize| -> (bool, Vec<bool>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut st = State::zero(n);
        for g in random_input(n, &roles.inputs, &mut rng) {
            st.apply(&g);
        }
        let probes = probes(k, &mut rng);
        let before: Vec<Complex64> = probes
            .iter()
            .map(|p| {
                let mut op = Phased::identity();
                for (i, &d) in p.iter().enumerate() {
                    let q = roles.inputs[i];
                    let (x, z) = (d == 1 || d == 2, d == 2 || d == 3);
                    let single = Phased {
                        phase: u8::from(x && z),
                        x: (x as u64) << q,
                        z: (z as u64) << q,
                    };
                    op = op.mul(single);
                }
                st.expectation(op)
            })
            .collect();
        for g in &circuit.gates {
            st.apply(g);
        }
        let mut ok = true;
        let mut flips = Vec::with_capacity(stabs.len());
        for s in &stabs {
            let e = st.expectation(*s);
            let fine = close(e.im, 0.0) && close(e.re.abs(), 1.0);
            ok &= fine;
            flips.push(e.re < 0.0);
            if mode == SignMode::Strict {
                ok &= close(e.re, 1.0);
            }
        }
        for (p, b) in probes.iter().zip(&before) {
            let mut op = Phased::identity();
            for (i, &d) in p.iter().enumerate() {
                op = match d {
                    1 => op.mul(lx[i]),
                    2 => op.mul(Phased { phase: 1, ..Phased::identity() }.mul(lx[i]).mul(lz[i])),
                    3 => op.mul(lz[i]),
                    _ => op,
                };
            }
            let e = st.expectation(op);
            ok &= close(e.im, 0.0);
            ok &= match mode {
                SignMode::Strict => close(e.re, b.re),
                SignMode::Free => close(e.re.abs(), b.re.abs()),
            };
        }
        (ok, flips)
    };

    #[cfg(feature = "parallel")]
    let results: Vec<(bool, Vec<bool>)> = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(run_trial).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<(bool, Vec<bool>)> = (0..trials).map(run_trial).collect();

    let mut passed = results.iter().all(|r| r.0);
    let flips = results.first().map(|r| r.1.clone()).unwrap_or_default();
    passed &= results.iter().all(|r| r.1 == flips);
    let frame = if passed { sign_frame(code, &flips) } else { None };
    Ok(StatevectorReport {
        passed,
        frame,
        trials,
    })
}

/// Single-qubit Paulis anticommuting with exactly the flagged stabilizers.
fn sign_frame(code: &StabilizerCode, flips: &[bool]) -> Option<PauliString> {
    let n = code.n();
    // Rows of the swapped-halves matrix turn symplectic products into dot products.
    let mut m = BitMatrix::zeros(n * 2, code.stabilizers().len());
    for (j, s) in code.stabilizers().iter().enumerate() {
        for q in 0..n {
            m.set(q, j, s.z().get(q));
            m.set(n + q, j, s.x().get(q));
        }
    }
    let rhs = BitVec::from_bools(flips);
    let sol = m.solve(&rhs)?;
    let bools = sol.to_bools();
    PauliString::from_parts(
        BitVec::from_bools(&bools[..n]),
        BitVec::from_bools(&bools[n..]),
    )
    .ok()
}

/// Applies a Pauli frame as single-qubit gates (`X = HSSH`, `Z = SS`).
pub fn frame_gates(frame: &PauliString) -> Vec<Gate> {
    let mut out = Vec::new();
    for q in 0..frame.n() {
        let (x, z) = (frame.x().get(q), frame.z().get(q));
        if z {
            out.extend([Gate::S(q), Gate::S(q)]);
        }
        if x {
            out.extend([Gate::H(q), Gate::S(q), Gate::S(q), Gate::H(q)]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;

    #[test]
    fn empty_and_cx_images() {
        let c = Circuit::new(3);
        let (xs, zs) = propagate(&c);
        assert_eq!(xs[1].to_string(), "IXI");
        assert_eq!(zs[2].to_string(), "IIZ");
        let c = Circuit::from_gates(2, vec![Gate::Cx(0, 1)]).unwrap();
        let (xs, zs) = propagate(&c);
        assert_eq!(xs[0].to_string(), "XX");
        assert_eq!(zs[1].to_string(), "ZZ");
        assert_eq!(zs[0].to_string(), "ZI");
        assert_eq!(xs[1].to_string(), "IX");
    }

    #[test]
    fn phased_products() {
        let x = Phased::from_pauli(&PauliString::parse("X").unwrap());
        let z = Phased::from_pauli(&PauliString::parse("Z").unwrap());
        let y = Phased::from_pauli(&PauliString::parse("Y").unwrap());
        // iXZ = Y
        assert_eq!(Phased { phase: 1, ..Phased::identity() }.mul(x).mul(z), y);
        // ZX = iY
        let zx = z.mul(x);
        assert_eq!((zx.phase, zx.x, zx.z), (2, 1, 1));
    }

    #[test]
    fn bell_state() {
        let c = Circuit::from_gates(2, vec![Gate::H(0), Gate::Cx(0, 1)])
            .unwrap()
            .with_roles(QubitRoles {
                inputs: vec![],
                zero: vec![0, 1],
                plus: vec![],
            });
        let code = StabilizerCode::from_stabilizers(
            2,
            vec![PauliString::parse("XX").unwrap(), PauliString::parse("ZZ").unwrap()],
        )
        .unwrap();
        assert!(check_encoder(&c, &code).unwrap());
        let r = statevector_check(&c, &code, 2, 0, SignMode::Strict).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn capacity_limit() {
        let code = codes::golay().to_stabilizer_code();
        let c = Circuit::new(23).with_roles(QubitRoles {
            inputs: vec![0],
            zero: (1..23).collect(),
            plus: vec![],
        });
        assert!(matches!(
            statevector_check(&c, &code, 1, 0, SignMode::Free),
            Err(Error::Capacity(_))
        ));
    }
}
