//! Gluing block encoders into a global encoder along an explicit wiring.
//!
//! Each block is an encoder whose output legs are its physical qubits and
//! whose input legs are its logical inputs. An edge hands a producer's output
//! qubit to a consumer as one of its inputs, so the two blocks share that
//! physical qubit.
//!
//! Wiring files are line based:
//!
//! ```text
//! # comment
//! block A = happy_5_1
//! block B = codes/my_block.code
//! edge A.0 -> B.1
//! input A.0
//! ```

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::circuit::{Circuit, QubitRoles};
use crate::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::verify::{check_encoder, propagate};

/// A block encoder together with the code it was verified against.
#[derive(Clone, Debug)]
pub struct BlockSpec {
    pub name: String,
    pub code: StabilizerCode,
    /// Must carry roles.
    pub circuit: Circuit,
}

impl BlockSpec {
    /// Checks the circuit against the code before accepting it.
    pub fn new(name: impl Into<String>, code: StabilizerCode, circuit: Circuit) -> Result<Self> {
        let name = name.into();
        if circuit.roles.is_none() {
            return Err(Error::Wiring(format!("block {name}: circuit has no qubit roles")));
        }
        if !check_encoder(&circuit, &code)? {
            return Err(Error::Validation(format!(
                "block {name}: circuit does not encode its code"
            )));
        }
        Ok(Self { name, code, circuit })
    }

    pub fn k_in(&self) -> usize {
        self.code.k()
    }

    pub fn n_out(&self) -> usize {
        self.code.n()
    }

    fn roles(&self) -> &QubitRoles {
        self.circuit.roles.as_ref().expect("checked in new")
    }
}

/// `(instance, leg)`.
pub type Leg = (String, usize);

/// A parsed wiring file. Block sources are unresolved strings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WiringFile {
    /// Instance name and source, in declaration order.
    pub blocks: Vec<(String, String)>,
    /// Producer output leg to consumer input leg.
    pub edges: Vec<(Leg, Leg)>,
    pub inputs: Vec<Leg>,
}

fn parse_leg(text: &str, line: usize) -> Result<Leg> {
    let (inst, leg) = text
        .trim()
        .rsplit_once('.')
        .ok_or_else(|| Error::parse(format!("line {line}"), format!("expected inst.leg, got {text:?}")))?;
    let leg = leg
        .parse()
        .map_err(|_| Error::parse(format!("line {line}"), format!("bad leg index {leg:?}")))?;
    Ok((inst.to_string(), leg))
}

impl WiringFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut w = WiringFile::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (kw, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            match kw {
                "block" => {
                    let (name, src) = rest.split_once('=').ok_or_else(|| {
                        Error::parse(format!("line {line}"), "expected block <name> = <source>")
                    })?;
                    w.blocks.push((name.trim().to_string(), src.trim().to_string()));
                }
                "edge" => {
                    let (a, b) = rest
                        .split_once("->")
                        .ok_or_else(|| Error::parse(format!("line {line}"), "expected a.i -> b.j"))?;
                    w.edges.push((parse_leg(a, line)?, parse_leg(b, line)?));
                }
                "input" => w.inputs.push(parse_leg(rest, line)?),
                other => {
                    return Err(Error::parse(
                        format!("line {line}"),
                        format!("unknown keyword {other:?}"),
                    ))
                }
            }
        }
        Ok(w)
    }

    /// Builds a wiring by resolving each declared source to a block.
    pub fn resolve(
        &self,
        mut block: impl FnMut(&str, &str) -> Result<BlockSpec>,
    ) -> Result<WiringSpec> {
        let blocks = self
            .blocks
            .iter()
            .map(|(name, src)| Ok((name.clone(), block(name, src)?)))
            .collect::<Result<Vec<_>>>()?;
        WiringSpec::new(blocks, self.edges.clone(), self.inputs.clone())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (name, src) in &self.blocks {
            s.push_str(&format!("block {name} = {src}\n"));
        }
        for ((a, i), (b, j)) in &self.edges {
            s.push_str(&format!("edge {a}.{i} -> {b}.{j}\n"));
        }
        for (a, i) in &self.inputs {
            s.push_str(&format!("input {a}.{i}\n"));
        }
        s
    }
}

/// A validated wiring of concrete blocks.
#[derive(Clone, Debug)]
pub struct WiringSpec {
    blocks: Vec<(String, BlockSpec)>,
    /// Indexed form of the edges: `(producer, out, consumer, in)`.
    edges: Vec<(usize, usize, usize, usize)>,
    inputs: Vec<(usize, usize)>,
    order: Vec<usize>,
}

impl WiringSpec {
    /// Validates leg ranges, feeding and acyclicity.
    pub fn new(
        blocks: Vec<(String, BlockSpec)>,
        edges: Vec<(Leg, Leg)>,
        inputs: Vec<Leg>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, (name, _)) in blocks.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Wiring(format!("instance {name} declared twice")));
            }
        }
        let find = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Wiring(format!("unknown instance {name}")))
        };
        let mut fed: BTreeMap<(usize, usize), &'static str> = BTreeMap::new();
        let mut consumed = BTreeMap::new();
        let mut idx_edges = Vec::new();
        for ((a, i), (b, j)) in &edges {
            let (pa, pb) = (find(a)?, find(b)?);
            if *i >= blocks[pa].1.n_out() {
                return Err(Error::Wiring(format!("{a} has no output leg {i}")));
            }
            if *j >= blocks[pb].1.k_in() {
                return Err(Error::Wiring(format!("{b} has no input leg {j}")));
            }
            if pa == pb {
                return Err(Error::Wiring(format!("edge {a}.{i} -> {b}.{j} is a self-loop")));
            }
            if consumed.insert((pa, *i), ()).is_some() {
                return Err(Error::Wiring(format!("output {a}.{i} is consumed twice")));
            }
            if fed.insert((pb, *j), "edge").is_some() {
                return Err(Error::Wiring(format!("input {b}.{j} is fed twice")));
            }
            idx_edges.push((pa, *i, pb, *j));
        }
        let mut idx_inputs = Vec::new();
        for (b, j) in &inputs {
            let pb = find(b)?;
            if *j >= blocks[pb].1.k_in() {
                return Err(Error::Wiring(format!("{b} has no input leg {j}")));
            }
            if let Some(prev) = fed.insert((pb, *j), "input") {
                return Err(Error::Wiring(format!(
                    "input {b}.{j} is fed twice (already by an {prev})"
                )));
            }
            idx_inputs.push((pb, *j));
        }
        for (pb, (name, block)) in blocks.iter().enumerate() {
            for j in 0..block.k_in() {
                if !fed.contains_key(&(pb, j)) {
                    return Err(Error::Wiring(format!("input {name}.{j} is never fed")));
                }
            }
        }
        // Kahn's algorithm; ties go to declaration order.
        let mut indeg = vec![0usize; blocks.len()];
        for &(_, _, b, _) in &idx_edges {
            indeg[b] += 1;
        }
        let mut queue: VecDeque<usize> = (0..blocks.len()).filter(|&b| indeg[b] == 0).collect();
        let mut order = Vec::with_capacity(blocks.len());
        while let Some(b) = queue.pop_front() {
            order.push(b);
            for &(a, _, c, _) in &idx_edges {
                if a == b {
                    indeg[c] -= 1;
                    if indeg[c] == 0 {
                        queue.push_back(c);
                    }
                }
            }
        }
        if order.len() != blocks.len() {
            return Err(Error::Wiring("wiring has a cycle".into()));
        }
        Ok(Self {
            blocks,
            edges: idx_edges,
            inputs: idx_inputs,
            order,
        })
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&str, &BlockSpec)> {
        self.blocks.iter().map(|(n, b)| (n.as_str(), b))
    }

    /// Replaces the circuit of one instance, keeping the wiring.
    pub fn with_block(mut self, name: &str, block: BlockSpec) -> Result<Self> {
        let slot = self
            .blocks
            .iter_mut()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::Wiring(format!("unknown instance {name}")))?;
        if (slot.1.k_in(), slot.1.n_out()) != (block.k_in(), block.n_out()) {
            return Err(Error::Wiring(format!("replacement for {name} has a different shape")));
        }
        slot.1 = block;
        Ok(self)
    }

    pub fn num_outputs(&self) -> usize {
        self.blocks.iter().map(|(_, b)| b.n_out()).sum::<usize>() - self.edges.len()
    }

    pub fn k(&self) -> usize {
        self.inputs.len()
    }
}

/// Composes the block circuits into one encoder. Output qubit `i` is the
/// `i`-th unconsumed output leg in (declaration, leg) order; logical input
/// `i` is the `i`-th declared global input.
pub fn compose(w: &WiringSpec) -> Result<Circuit> {
    let nb = w.blocks.len();
    // Global qubit of each block qubit.
    let mut map: Vec<Vec<Option<usize>>> =
        w.blocks.iter().map(|(_, b)| vec![None; b.n_out()]).collect();
    let mut next = 0usize;
    let mut owner: Vec<(usize, usize)> = Vec::new();
    let mut zero = Vec::new();
    let mut plus = Vec::new();
    let mut steps = Vec::with_capacity(nb);
    for &b in &w.order {
        let block = &w.blocks[b].1;
        let roles = block.roles();
        for &(pa, i, pb, j) in &w.edges {
            if pb == b {
                let q = map[pa][i].expect("producer placed first");
                map[b][roles.inputs[j]] = Some(q);
                owner[q] = (b, roles.inputs[j]);
            }
        }
        for q in 0..block.n_out() {
            if map[b][q].is_none() {
                map[b][q] = Some(next);
                owner.push((b, q));
                next += 1;
            }
        }
        let m: Vec<usize> = map[b].iter().map(|q| q.expect("assigned")).collect();
        zero.extend(roles.zero.iter().map(|&q| m[q]));
        plus.extend(roles.plus.iter().map(|&q| m[q]));
        steps.push((b, m));
    }
    // Renumber by final owner so the output order is stable.
    let mut by_owner: Vec<usize> = (0..next).collect();
    by_owner.sort_by_key(|&q| owner[q]);
    let mut relabel = vec![0; next];
    for (new, &old) in by_owner.iter().enumerate() {
        relabel[old] = new;
    }
    let mut out = Circuit::new(next);
    for (b, m) in steps {
        let m: Vec<usize> = m.iter().map(|&q| relabel[q]).collect();
        out.append_mapped(&w.blocks[b].1.circuit, &m)?;
    }
    let inputs = w
        .inputs
        .iter()
        .map(|&(b, j)| {
            let roles = w.blocks[b].1.roles();
            relabel[map[b][roles.inputs[j]].expect("assigned")]
        })
        .collect();
    let mut roles = QubitRoles {
        inputs,
        zero: zero.iter().map(|&q| relabel[q]).collect(),
        plus: plus.iter().map(|&q| relabel[q]).collect(),
    };
    roles.zero.sort_unstable();
    roles.plus.sort_unstable();
    roles.validate(next)?;
    Ok(out.with_roles(roles))
}

/// The code encoded by a composed circuit: ancilla Z images are the
/// stabilizers and input X/Z images the logicals.
pub fn encoded_code(circuit: &Circuit) -> Result<StabilizerCode> {
    let roles = circuit
        .roles
        .as_ref()
        .ok_or_else(|| Error::Contract("circuit has no qubit roles".into()))?;
    let (xs, zs) = propagate(circuit);
    let lx = roles.inputs.iter().map(|&q| xs[q].clone()).collect();
    let lz = roles.inputs.iter().map(|&q| zs[q].clone()).collect();
    let stabs = roles.ancillas().into_iter().map(|q| zs[q].clone()).collect();
    StabilizerCode::with_n(circuit.n, lx, lz, stabs)
}

/// Code of the composed encoder.
pub fn derive_composed_code(w: &WiringSpec) -> Result<StabilizerCode> {
    encoded_code(&compose(w)?)
}

/// The 12-qubit holographic wiring: a five-qubit block feeds one leg into
/// each of two four-qubit blocks, which each feed one leg into the
/// three-qubit block.
pub const HAPPY_WIRING: &str = "\
block A = happy_5_1
block B1 = happy_4_2
block B2 = happy_4_2
block C = happy_3_3
edge A.0 -> B1.0
edge A.1 -> B2.0
edge B1.0 -> C.0
edge B2.0 -> C.1
input A.0
input B1.1
input B2.1
input C.2
";

/// One five-qubit block whose outputs feed five more: the [[25,1,9]]
/// concatenated code.
pub fn concatenated_five_wiring() -> WiringFile {
    let mut w = WiringFile {
        blocks: vec![("root".into(), "five_qubit".into())],
        inputs: vec![("root".into(), 0)],
        ..WiringFile::default()
    };
    for i in 0..5 {
        let leaf = format!("leaf{i}");
        w.blocks.push((leaf.clone(), "five_qubit".into()));
        w.edges.push((("root".into(), i), (leaf, 0)));
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let w = WiringFile::parse(HAPPY_WIRING).unwrap();
        assert_eq!(w.blocks.len(), 4);
        assert_eq!(w.edges.len(), 4);
        assert_eq!(WiringFile::parse(&w.to_text()).unwrap(), w);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = WiringFile::parse("block A = x\nedge A.0 B.1\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(WiringFile::parse("frobnicate\n").is_err());
        assert!(WiringFile::parse("input A.x\n").is_err());
    }
}
