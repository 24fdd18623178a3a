//! Reduction from FLIP on NAND circuits to local minimization under a permutation
//! group.
//!
//! The circuit is copied `n + 1` times. Copy `C_0` carries the FLIP input `x`,
//! copy `C_j` carries `x ⊕ e_j`. Every gate is represented by four quadrant
//! positions `g_00 … g_11`; a gate state `(a1, a2, b)` labels quadrant
//! `g_{a1 a2}` with `b` and the other three with `¬b`, so the control quadrant
//! `g_11` is 0 exactly when the gate computes NAND correctly.
//!
//! Bits are stored in two views. The *condensed* view has one position per logical
//! bit; the *expanded* view doubles each position `p` into twins `2p`, `2p+1`
//! holding `(v, ¬v)`, which turns bit flips into transpositions. Generators are
//! built as [`SignedPermutation`]s on the condensed view and expanded afterwards.
//!
//! Condensed layout is circuit-major; within a circuit come the inputs, then four
//! quadrants per gate (in quadrant order 00, 01, 10, 11), then the outputs.

use std::fmt;

use crate::bitlex::{is_local_min, BitString, PriorityOrder};
use crate::circuit::{FlipInstance, Source};
use crate::error::{Error, Result};
use crate::perm::{GeneratorSet, Permutation, Word};
use crate::search::{standard_algorithm, LocalMinInstance, SearchOptions, SearchState};

/// Quadrant index `q = 2·a1 + a2`.
pub const CONTROL: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GateState {
    pub a1: bool,
    pub a2: bool,
    pub b: bool,
}

impl GateState {
    pub fn new(a1: bool, a2: bool, b: bool) -> Self {
        GateState { a1, a2, b }
    }

    pub fn is_correct(&self) -> bool {
        self.b == !(self.a1 && self.a2)
    }

    pub fn quadrant(&self) -> usize {
        2 * self.a1 as usize + self.a2 as usize
    }

    /// Labels of `(g_00, g_01, g_10, g_11)`.
    pub fn encode(&self) -> [bool; 4] {
        let q = self.quadrant();
        std::array::from_fn(|i| if i == q { self.b } else { !self.b })
    }

    /// Inverse of [`GateState::encode`]; `None` unless exactly one or three labels
    /// are set.
    pub fn decode(labels: [bool; 4]) -> Option<GateState> {
        let ones = labels.iter().filter(|&&v| v).count();
        let (q, b) = match ones {
            1 => (labels.iter().position(|&v| v)?, true),
            3 => (labels.iter().position(|&v| !v)?, false),
            _ => return None,
        };
        Some(GateState::new(q & 2 != 0, q & 1 != 0, b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PositionKind {
    Input(usize),
    Quadrant { gate: usize, q: usize },
    Output(usize),
}

/// An expanded position: a logical bit of one circuit copy plus its twin slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PositionId {
    pub circuit: usize,
    pub kind: PositionKind,
    pub twin: bool,
}

impl fmt::Display for PositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{} ", self.circuit)?;
        match self.kind {
            PositionKind::Input(i) => write!(f, "input x{}", i + 1)?,
            PositionKind::Quadrant { gate, q } => {
                write!(f, "quad g{} q{}{}", gate + 1, q >> 1, q & 1)?
            }
            PositionKind::Output(k) => write!(f, "output c{}", k + 1)?,
        }
        write!(f, " t{}", self.twin as u8)
    }
}

/// Index arithmetic for the condensed and expanded position spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub gates: usize,
    pub outputs: usize,
}

impl Layout {
    pub fn for_circuit(c: &FlipInstance) -> Self {
        Layout {
            n: c.input_count(),
            gates: c.gate_count(),
            outputs: c.output_count(),
        }
    }

    pub fn circuits(&self) -> usize {
        self.n + 1
    }

    pub fn per_circuit(&self) -> usize {
        self.n + 4 * self.gates + self.outputs
    }

    pub fn condensed_len(&self) -> usize {
        self.circuits() * self.per_circuit()
    }

    pub fn expanded_len(&self) -> usize {
        2 * self.condensed_len()
    }

    pub fn input(&self, j: usize, i: usize) -> usize {
        j * self.per_circuit() + i
    }

    pub fn quad(&self, j: usize, g: usize, q: usize) -> usize {
        j * self.per_circuit() + self.n + 4 * g + q
    }

    pub fn output(&self, j: usize, k: usize) -> usize {
        j * self.per_circuit() + self.n + 4 * self.gates + k
    }

    /// Circuit and kind of a condensed position.
    pub fn locate(&self, p: usize) -> (usize, PositionKind) {
        let (j, local) = (p / self.per_circuit(), p % self.per_circuit());
        let kind = if local < self.n {
            PositionKind::Input(local)
        } else if local < self.n + 4 * self.gates {
            let r = local - self.n;
            PositionKind::Quadrant {
                gate: r / 4,
                q: r % 4,
            }
        } else {
            PositionKind::Output(local - self.n - 4 * self.gates)
        };
        (j, kind)
    }

    pub fn position_id(&self, expanded: usize) -> PositionId {
        let (circuit, kind) = self.locate(expanded / 2);
        PositionId {
            circuit,
            kind,
            twin: expanded % 2 == 1,
        }
    }

    /// Priority of condensed positions: circuits in order; inside a circuit the
    /// control quadrants by gate, the outputs, the other quadrants by gate and
    /// quadrant, then the inputs.
    pub fn condensed_order(&self) -> PriorityOrder {
        let mut by_rank: Vec<usize> = Vec::with_capacity(self.condensed_len());
        for j in 0..self.circuits() {
            by_rank.extend((0..self.gates).map(|g| self.quad(j, g, CONTROL)));
            by_rank.extend((0..self.outputs).map(|k| self.output(j, k)));
            for g in 0..self.gates {
                by_rank.extend((0..CONTROL).map(|q| self.quad(j, g, q)));
            }
            by_rank.extend((0..self.n).map(|i| self.input(j, i)));
        }
        PriorityOrder::from_ranks(by_rank).expect("every position ranked once")
    }
}

pub fn expand(v: &BitString) -> BitString {
    BitString::from_bools(v.as_slice().iter().flat_map(|&b| [b, !b]).collect())
}

pub fn condense(y: &BitString) -> Result<BitString> {
    if !y.len().is_multiple_of(2) {
        return Err(Error::LengthMismatch {
            expected: y.len() + 1,
            found: y.len(),
        });
    }
    (0..y.len() / 2)
        .map(|p| {
            if y.get(2 * p) == y.get(2 * p + 1) {
                Err(Error::TwinViolation { position: p })
            } else {
                Ok(y.get(2 * p))
            }
        })
        .collect::<Result<Vec<bool>>>()
        .map(BitString::from_bools)
}

pub fn expand_order(order: &PriorityOrder) -> PriorityOrder {
    let rank = order
        .ranks()
        .iter()
        .flat_map(|&p| [2 * p, 2 * p + 1])
        .collect();
    PriorityOrder::from_ranks(rank).expect("doubling a bijection")
}

/// A permutation of condensed positions where each position may also be negated:
/// `(v ∘ s)(p) = v(image[p]) ⊕ flip[p]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    image: Vec<usize>,
    flip: Vec<bool>,
}

impl SignedPermutation {
    pub fn identity(len: usize) -> Self {
        SignedPermutation {
            image: (0..len).collect(),
            flip: vec![false; len],
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    fn negate(&mut self, p: usize) {
        self.flip[p] = !self.flip[p];
    }

    fn swap(&mut self, p: usize, q: usize) {
        self.image.swap(p, q);
    }

    pub fn act(&self, v: &BitString) -> BitString {
        BitString::from_bools(
            self.image
                .iter()
                .zip(&self.flip)
                .map(|(&i, &f)| v.get(i) ^ f)
                .collect(),
        )
    }

    /// The permutation of twin positions realizing this map on the expanded view.
    pub fn expand(&self) -> Permutation {
        let image = self
            .image
            .iter()
            .zip(&self.flip)
            .flat_map(|(&i, &f)| [2 * i + f as usize, 2 * i + !f as usize])
            .collect();
        Permutation::from_zero_based(image).expect("signed permutation expands to a bijection")
    }
}

/// First failed condition of well-behavedness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Twin {
        position: usize,
    },
    Gadget {
        circuit: usize,
        gate: usize,
    },
    GateWiring {
        circuit: usize,
        gate: usize,
        slot: usize,
    },
    InputWiring {
        circuit: usize,
        gate: usize,
        slot: usize,
    },
    Output {
        circuit: usize,
        output: usize,
    },
    CrossCircuit {
        circuit: usize,
        input: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Twin { position } => {
                write!(f, "twin pair {} is not complementary", position + 1)
            }
            Violation::Gadget { circuit, gate } => {
                write!(f, "gadget of g{} in C{circuit} encodes no state", gate + 1)
            }
            Violation::GateWiring {
                circuit,
                gate,
                slot,
            } => write!(
                f,
                "input {} of g{} in C{circuit} disagrees with its source gate",
                slot + 1,
                gate + 1
            ),
            Violation::InputWiring {
                circuit,
                gate,
                slot,
            } => write!(
                f,
                "input {} of g{} in C{circuit} disagrees with its input variable",
                slot + 1,
                gate + 1
            ),
            Violation::Output { circuit, output } => {
                write!(
                    f,
                    "output c{} of C{circuit} disagrees with its gate",
                    output + 1
                )
            }
            Violation::CrossCircuit { circuit, input } => write!(
                f,
                "input x{} of C{circuit} does not match C0 shifted by e{circuit}",
                input + 1
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedInstance {
    circuit: FlipInstance,
    layout: Layout,
    signed: Vec<SignedPermutation>,
    gens: GeneratorSet,
    start: BitString,
    order: PriorityOrder,
    condensed_order: PriorityOrder,
}

pub fn pi_name(gate: usize, circuit: usize) -> String {
    format!("pi_{}_{}", gate + 1, circuit)
}

pub fn sigma_name(i: usize) -> String {
    format!("sigma_{}", i + 1)
}

impl ReducedInstance {
    pub fn build(c: &FlipInstance) -> Self {
        let layout = Layout::for_circuit(c);
        let len = layout.condensed_len();
        let mut signed = Vec::new();
        let mut gens = GeneratorSet::new(layout.expanded_len());

        for j in 0..layout.circuits() {
            for g in 0..layout.gates {
                let mut s = SignedPermutation::identity(len);
                for q in 0..4 {
                    s.negate(layout.quad(j, g, q));
                }
                flip_source_readers(c, &layout, &mut s, j, Source::Gate(g));
                if let Some(k) = c.output_index(g) {
                    s.negate(layout.output(j, k));
                }
                gens.push(pi_name(g, j), s.expand()).expect("unique names");
                signed.push(s);
            }
        }
        for i in 0..layout.n {
            let mut s = SignedPermutation::identity(len);
            let ci = i + 1;
            for local in 0..layout.per_circuit() {
                s.swap(local, ci * layout.per_circuit() + local);
            }
            for j in (1..layout.circuits()).filter(|&j| j != ci) {
                s.negate(layout.input(j, i));
                flip_source_readers(c, &layout, &mut s, j, Source::Input(i));
            }
            gens.push(sigma_name(i), s.expand()).expect("unique names");
            signed.push(s);
        }

        let condensed_order = layout.condensed_order();
        let mut inst = ReducedInstance {
            circuit: c.clone(),
            layout,
            signed,
            gens,
            start: BitString::zeros(0),
            order: expand_order(&condensed_order),
            condensed_order,
        };
        let zero_outputs = vec![vec![false; layout.gates]; layout.circuits()];
        inst.start = expand(
            &inst
                .assignment_for(&BitString::zeros(layout.n), &zero_outputs)
                .expect("shapes match"),
        );
        inst
    }

    pub fn circuit(&self) -> &FlipInstance {
        &self.circuit
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn signed_generators(&self) -> &[SignedPermutation] {
        &self.signed
    }

    /// Expanded starting string.
    pub fn start(&self) -> &BitString {
        &self.start
    }

    /// Expanded priority order.
    pub fn order(&self) -> &PriorityOrder {
        &self.order
    }

    pub fn condensed_order(&self) -> &PriorityOrder {
        &self.condensed_order
    }

    pub fn pi_index(&self, gate: usize, circuit: usize) -> usize {
        circuit * self.layout.gates + gate
    }

    pub fn sigma_index(&self, i: usize) -> usize {
        self.layout.circuits() * self.layout.gates + i
    }

    pub fn as_local_min_instance(&self) -> LocalMinInstance {
        LocalMinInstance::new(self.start.clone(), self.order.clone(), self.gens.clone())
            .expect("sizes agree by construction")
    }

    /// Condensed well-behaved assignment with C_0 input `x` and gate outputs
    /// `outputs[j][g]` for every circuit copy.
    pub fn assignment_for(&self, x: &BitString, outputs: &[Vec<bool>]) -> Result<BitString> {
        let l = &self.layout;
        if x.len() != l.n {
            return Err(Error::LengthMismatch {
                expected: l.n,
                found: x.len(),
            });
        }
        if outputs.len() != l.circuits() {
            return Err(Error::LengthMismatch {
                expected: l.circuits(),
                found: outputs.len(),
            });
        }
        let mut v = BitString::zeros(l.condensed_len());
        for (j, b) in outputs.iter().enumerate() {
            if b.len() != l.gates {
                return Err(Error::LengthMismatch {
                    expected: l.gates,
                    found: b.len(),
                });
            }
            let xj = if j == 0 {
                x.clone()
            } else {
                x.xor(&BitString::unit(l.n, j - 1))
            };
            for i in 0..l.n {
                v.set(l.input(j, i), xj.get(i));
            }
            for (g, gate) in self.circuit.gates().iter().enumerate() {
                let [a1, a2] = gate.inputs.map(|s| match s {
                    Source::Input(i) => xj.get(i),
                    Source::Gate(h) => b[h],
                });
                for (q, label) in GateState::new(a1, a2, b[g])
                    .encode()
                    .into_iter()
                    .enumerate()
                {
                    v.set(l.quad(j, g, q), label);
                }
            }
            for (k, &g) in self.circuit.outputs().iter().enumerate() {
                v.set(l.output(j, k), b[g]);
            }
        }
        Ok(v)
    }

    /// Condensed assignment where every copy is evaluated correctly on input `x`.
    pub fn correct_assignment(&self, x: &BitString) -> Result<BitString> {
        let outputs = (0..self.layout.circuits())
            .map(|j| {
                let xj = if j == 0 {
                    x.clone()
                } else {
                    x.xor(&BitString::unit(self.layout.n, j - 1))
                };
                self.circuit.eval(&xj).map(|e| e.gate_values)
            })
            .collect::<Result<Vec<_>>>()?;
        self.assignment_for(x, &outputs)
    }

    pub fn gate_state(&self, v: &BitString, circuit: usize, gate: usize) -> Option<GateState> {
        GateState::decode(std::array::from_fn(|q| {
            v.get(self.layout.quad(circuit, gate, q))
        }))
    }

    /// First violated condition for an expanded assignment, or `None` when it is
    /// well-behaved.
    pub fn check_well_behaved(&self, y: &BitString) -> Result<Option<Violation>> {
        if y.len() != self.layout.expanded_len() {
            return Err(Error::LengthMismatch {
                expected: self.layout.expanded_len(),
                found: y.len(),
            });
        }
        match condense(y) {
            Ok(v) => Ok(self.check_condensed(&v)),
            Err(Error::TwinViolation { position }) => Ok(Some(Violation::Twin { position })),
            Err(e) => Err(e),
        }
    }

    pub fn is_well_behaved(&self, y: &BitString) -> bool {
        matches!(self.check_well_behaved(y), Ok(None))
    }

    fn check_condensed(&self, v: &BitString) -> Option<Violation> {
        let l = &self.layout;
        let mut states = Vec::with_capacity(l.circuits());
        for j in 0..l.circuits() {
            let mut row = Vec::with_capacity(l.gates);
            for gate in 0..l.gates {
                match self.gate_state(v, j, gate) {
                    Some(s) => row.push(s),
                    None => return Some(Violation::Gadget { circuit: j, gate }),
                }
            }
            states.push(row);
        }
        for (j, row) in states.iter().enumerate() {
            for (h, gate) in self.circuit.gates().iter().enumerate() {
                let seen = [row[h].a1, row[h].a2];
                for (slot, src) in gate.inputs.iter().enumerate() {
                    if let Source::Gate(g) = *src {
                        if seen[slot] != row[g].b {
                            return Some(Violation::GateWiring {
                                circuit: j,
                                gate: h,
                                slot,
                            });
                        }
                    }
                }
            }
        }
        for (j, row) in states.iter().enumerate() {
            for (h, gate) in self.circuit.gates().iter().enumerate() {
                let seen = [row[h].a1, row[h].a2];
                for (slot, src) in gate.inputs.iter().enumerate() {
                    if let Source::Input(i) = *src {
                        if seen[slot] != v.get(l.input(j, i)) {
                            return Some(Violation::InputWiring {
                                circuit: j,
                                gate: h,
                                slot,
                            });
                        }
                    }
                }
            }
        }
        for (j, row) in states.iter().enumerate() {
            for (k, &g) in self.circuit.outputs().iter().enumerate() {
                if v.get(l.output(j, k)) != row[g].b {
                    return Some(Violation::Output {
                        circuit: j,
                        output: k,
                    });
                }
            }
        }
        for j in 1..l.circuits() {
            for i in 0..l.n {
                let expected = v.get(l.input(0, i)) ^ (i == j - 1);
                if v.get(l.input(j, i)) != expected {
                    return Some(Violation::CrossCircuit {
                        circuit: j,
                        input: i,
                    });
                }
            }
        }
        None
    }

    /// C_0 input of a well-behaved expanded assignment.
    pub fn extract_flip_input(&self, y: &BitString) -> Result<BitString> {
        if let Some(v) = self.check_well_behaved(y)? {
            return Err(Error::NotWellBehaved(v.to_string()));
        }
        Ok(BitString::from_bools(
            (0..self.layout.n)
                .map(|i| y.get(2 * self.layout.input(0, i)))
                .collect(),
        ))
    }

    pub fn string_for(&self, w: &Word) -> Result<BitString> {
        Ok(self.start.permute(&self.gens.apply_word(w)?))
    }

    pub fn map_solution(&self, w: &Word) -> Result<BitString> {
        self.extract_flip_input(&self.string_for(w)?)
    }

    /// Word over the `σ_i` reaching FLIP input `s` from the start string.
    pub fn embed_flip_solution(&self, s: &BitString) -> Result<Word> {
        if s.len() != self.layout.n {
            return Err(Error::LengthMismatch {
                expected: self.layout.n,
                found: s.len(),
            });
        }
        Ok(Word::from_letters(
            (0..s.len()).filter(|&i| s.get(i)).map(sigma_name),
        ))
    }

    /// Condensed string after applying `w` using the signed generators.
    pub fn condensed_string_for(&self, w: &Word) -> Result<BitString> {
        let mut v = condense(&self.start)?;
        for letter in w.letters() {
            let idx = self
                .gens
                .position(letter)
                .ok_or_else(|| Error::UnknownGenerator(letter.clone()))?;
            v = self.signed[idx].act(&v);
        }
        Ok(v)
    }

    /// Local optimality of `w` evaluated entirely in the condensed view.
    pub fn is_local_min_condensed(&self, w: &Word) -> Result<bool> {
        let v = self.condensed_string_for(w)?;
        Ok(self.signed.iter().all(|s| {
            !self
                .condensed_order
                .compare_unchecked(&s.act(&v), &v)
                .is_lt()
        }))
    }

    /// Local optimality of `w` in the expanded view.
    pub fn is_local_min_expanded(&self, w: &Word) -> Result<bool> {
        is_local_min(
            &self.start,
            &self.order,
            &self.gens,
            &self.gens.apply_word(w)?,
        )
    }

    pub fn search(&self, start: &Word, opts: &SearchOptions) -> Result<SearchState> {
        let inst = self.as_local_min_instance();
        standard_algorithm(&inst.x, &inst.gens, start, opts)
    }

    /// Instance file: the generic local-minimization instance annotated with a
    /// position catalog and the source netlist.
    pub fn to_instance_file(&self) -> String {
        let mut out = String::new();
        for line in self.circuit.to_netlist().lines() {
            out.push_str("netlist ");
            out.push_str(line);
            out.push('\n');
        }
        for p in 0..self.layout.expanded_len() {
            out.push_str(&format!("pos {} {}\n", p + 1, self.layout.position_id(p)));
        }
        out.push_str(&self.as_local_min_instance().to_string());
        out
    }

    /// Parses an instance file that carries a netlist, rebuilds the reduction and
    /// checks that the stored data matches.
    pub fn from_instance_file(text: &str) -> Result<Self> {
        let generic = LocalMinInstance::parse(text)?;
        let netlist: String = text
            .lines()
            .filter_map(|l| l.trim_start().strip_prefix("netlist "))
            .map(|l| format!("{l}\n"))
            .collect();
        if netlist.is_empty() {
            return Err(Error::InvalidInstance(
                "instance file carries no netlist".into(),
            ));
        }
        let inst = ReducedInstance::build(&FlipInstance::parse_netlist(&netlist)?);
        if generic != inst.as_local_min_instance() {
            return Err(Error::InvalidInstance(
                "stored start, order or generators differ from the netlist's reduction".into(),
            ));
        }
        for (lineno, line) in text.lines().enumerate() {
            if let Some(rest) = line.trim_start().strip_prefix("pos ") {
                let (idx, label) = rest.trim().split_once(' ').unwrap_or((rest, ""));
                let idx: usize = idx
                    .parse()
                    .map_err(|_| Error::parse(lineno + 1, format!("bad position index `{idx}`")))?;
                if idx == 0 || idx > inst.layout.expanded_len() {
                    return Err(Error::IndexOutOfRange {
                        index: idx,
                        degree: inst.layout.expanded_len(),
                    });
                }
                if label.trim() != inst.layout.position_id(idx - 1).to_string() {
                    return Err(Error::parse(
                        lineno + 1,
                        format!("position {idx} label mismatch"),
                    ));
                }
            }
        }
        Ok(inst)
    }
}

/// Updates the gadgets of gates in circuit `j` that read `src` when `src` flips.
fn flip_source_readers(
    c: &FlipInstance,
    l: &Layout,
    s: &mut SignedPermutation,
    j: usize,
    src: Source,
) {
    for (h, first, second) in c.readers(src) {
        let q = |a: usize, b: usize| l.quad(j, h, 2 * a + b);
        match (first, second) {
            (true, true) => {
                s.swap(q(0, 0), q(1, 1));
                s.swap(q(0, 1), q(1, 0));
            }
            (true, false) => {
                s.swap(q(0, 0), q(1, 0));
                s.swap(q(0, 1), q(1, 1));
            }
            (false, true) => {
                s.swap(q(0, 0), q(0, 1));
                s.swap(q(1, 0), q(1, 1));
            }
            (false, false) => unreachable!("readers only lists gates reading src"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::random_circuit;
    use crate::search::Status;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn minimal() -> FlipInstance {
        FlipInstance::parse_netlist("inputs 1\ngate 1 NAND x1 x1\noutputs g1\n").unwrap()
    }

    fn two_gate_circuit() -> FlipInstance {
        FlipInstance::parse_netlist("inputs 3\ngate 1 NAND x2 x1\ngate 2 NAND x3 g1\noutputs g2\n")
            .unwrap()
    }

    fn bits(v: u64, len: usize) -> BitString {
        BitString::from_bools((0..len).map(|i| v >> i & 1 == 1).collect())
    }

    /// Every well-behaved expanded assignment, enumerated from inputs and gate
    /// outputs of all copies.
    fn well_behaved_set(inst: &ReducedInstance) -> BTreeSet<BitString> {
        let l = inst.layout();
        let free = l.gates * l.circuits();
        let mut set = BTreeSet::new();
        for xv in 0..1u64 << l.n {
            for ov in 0..1u64 << free {
                let o = bits(ov, free);
                let outputs: Vec<Vec<bool>> = (0..l.circuits())
                    .map(|j| o.as_slice()[j * l.gates..(j + 1) * l.gates].to_vec())
                    .collect();
                set.insert(expand(
                    &inst.assignment_for(&bits(xv, l.n), &outputs).unwrap(),
                ));
            }
        }
        set
    }

    fn random_word(rng: &mut impl Rng, inst: &ReducedInstance, len: usize) -> Word {
        Word::from_letters((0..len).map(|_| inst.generators().names().choose(rng).unwrap().clone()))
    }

    fn c0_quads(inst: &ReducedInstance, v: &BitString, g: usize) -> [bool; 4] {
        std::array::from_fn(|q| v.get(inst.layout().quad(0, g, q)))
    }

    #[test]
    fn gate_state_encoding() {
        let enc = |a, b, c| GateState::new(a, b, c).encode();
        assert_eq!(enc(false, false, false), [false, true, true, true]);
        assert_eq!(enc(true, true, false), [true, true, true, false]);
        for code in 0..8u8 {
            let s = GateState::new(code & 4 != 0, code & 2 != 0, code & 1 != 0);
            let e = s.encode();
            let ones = e.iter().filter(|&&v| v).count();
            assert!(ones == 1 || ones == 3);
            assert_eq!(GateState::decode(e), Some(s));
            assert_eq!(s.is_correct(), !e[CONTROL]);
        }
        assert_eq!(GateState::decode([false; 4]), None);
        assert_eq!(GateState::decode([true, true, false, false]), None);
    }

    #[test]
    fn minimal_circuit_shape() {
        let inst = ReducedInstance::build(&minimal());
        assert_eq!(inst.layout().condensed_len(), 12);
        assert_eq!(inst.layout().expanded_len(), 24);
        assert_eq!(inst.generators().names(), ["pi_1_0", "pi_1_1", "sigma_1"]);
        assert_eq!(inst.start().len(), 24);
        assert!(inst.is_well_behaved(inst.start()));
    }

    #[test]
    fn minimal_circuit_orbit_is_the_well_behaved_set() {
        let inst = ReducedInstance::build(&minimal());
        let orbit = inst
            .generators()
            .orbit_of_string(inst.start(), 1000)
            .unwrap();
        assert_eq!(orbit.len(), 8);
        assert_eq!(orbit, well_behaved_set(&inst));
    }

    #[test]
    fn two_input_orbit_is_the_well_behaved_set() {
        let c = FlipInstance::parse_netlist(
            "inputs 2\ngate 1 NAND x1 x2\ngate 2 NAND g1 x1\noutputs g2\n",
        )
        .unwrap();
        let inst = ReducedInstance::build(&c);
        let orbit = inst
            .generators()
            .orbit_of_string(inst.start(), 10_000)
            .unwrap();
        assert_eq!(orbit.len(), 4 * (1 << 6));
        assert_eq!(orbit, well_behaved_set(&inst));
    }

    #[test]
    fn generators_are_involutions_and_preserve_well_behavedness() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let n = rng.gen_range(1..=4);
            let g = rng.gen_range(1..=8);
            let m = rng.gen_range(1..=g.min(3));
            let inst = ReducedInstance::build(&random_circuit(&mut rng, n, g, m).unwrap());
            assert_eq!(inst.generators().len(), g * (n + 1) + n);
            for (s, p) in inst
                .signed_generators()
                .iter()
                .zip(inst.generators().generators())
            {
                assert!(p.compose(p).unwrap().is_identity());
                assert_eq!(s.expand(), *p);
            }
            for _ in 0..20 {
                let w = {
                    let len = rng.gen_range(0..30);
                    random_word(&mut rng, &inst, len)
                };
                let y = inst.string_for(&w).unwrap();
                assert_eq!(inst.check_well_behaved(&y).unwrap(), None);
                assert_eq!(
                    condense(&y).unwrap(),
                    inst.condensed_string_for(&w).unwrap()
                );
                for p in inst.generators().generators() {
                    assert!(inst.is_well_behaved(&y.permute(p)));
                }
            }
        }
    }

    #[test]
    fn violations_are_reported() {
        let inst = ReducedInstance::build(&two_gate_circuit());
        let mut y = inst.start().clone();
        y.set(5, !y.get(5));
        assert_eq!(
            inst.check_well_behaved(&y).unwrap(),
            Some(Violation::Twin { position: 2 })
        );
        let v = condense(inst.start()).unwrap();
        let l = *inst.layout();
        let broken = |p: usize| {
            let mut v = v.clone();
            v.flip(p);
            inst.check_well_behaved(&expand(&v)).unwrap()
        };
        assert_eq!(
            broken(l.quad(0, 1, 0)),
            Some(Violation::Gadget {
                circuit: 0,
                gate: 1
            })
        );
        assert_eq!(
            broken(l.output(2, 0)),
            Some(Violation::Output {
                circuit: 2,
                output: 0
            })
        );
        assert_eq!(
            broken(l.input(0, 2)),
            Some(Violation::InputWiring {
                circuit: 0,
                gate: 1,
                slot: 0
            })
        );
        // Flip x1 in C3 and update g1, which reads it on its second slot.
        let mut w = v.clone();
        w.flip(l.input(3, 0));
        let s = inst.gate_state(&w, 3, 0).unwrap();
        for (q, label) in GateState::new(s.a1, !s.a2, s.b)
            .encode()
            .into_iter()
            .enumerate()
        {
            w.set(l.quad(3, 0, q), label);
        }
        assert_eq!(
            inst.check_well_behaved(&expand(&w)).unwrap(),
            Some(Violation::CrossCircuit {
                circuit: 3,
                input: 0
            })
        );
        assert!(inst.check_well_behaved(&BitString::zeros(3)).is_err());
        assert!(matches!(
            inst.extract_flip_input(&y),
            Err(Error::NotWellBehaved(_))
        ));
    }

    #[test]
    fn solution_maps() {
        let inst = ReducedInstance::build(&two_gate_circuit());
        assert_eq!(inst.map_solution(&Word::new()).unwrap(), bs("000"));
        for i in 0..3 {
            let s = Word::from_letters([sigma_name(i)]);
            assert_eq!(inst.map_solution(&s).unwrap(), BitString::unit(3, i));
            let ss = Word::from_letters([sigma_name(i), sigma_name(i)]);
            assert_eq!(inst.map_solution(&ss).unwrap(), bs("000"));
        }
        assert!(inst.embed_flip_solution(&bs("000")).unwrap().is_empty());
        assert_eq!(
            inst.embed_flip_solution(&bs("100")).unwrap().to_string(),
            "word sigma_1"
        );
        assert!(inst.embed_flip_solution(&bs("10")).is_err());
    }

    #[test]
    fn embedding_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for n in 1..=4 {
            let c = random_circuit(&mut rng, n, 4, 2).unwrap();
            let inst = ReducedInstance::build(&c);
            for v in 0..1u64 << n {
                let s = bits(v, n);
                let w = inst.embed_flip_solution(&s).unwrap();
                assert!(w.len() <= n);
                assert_eq!(inst.map_solution(&w).unwrap(), s);
            }
        }
    }

    #[test]
    fn start_string_of_two_gate_circuit() {
        let inst = ReducedInstance::build(&two_gate_circuit());
        let y = inst
            .string_for(&inst.embed_flip_solution(&bs("011")).unwrap())
            .unwrap();
        let v = condense(&y).unwrap();
        assert_eq!(inst.extract_flip_input(&y).unwrap(), bs("011"));
        let g1 = inst.gate_state(&v, 0, 0).unwrap();
        assert_eq!(g1, GateState::new(true, false, false));
        assert!(v.get(inst.layout().quad(0, 0, CONTROL)));
        // All gate outputs start at 0, so g2 = NAND(1, 0) is wrong too.
        assert!(v.get(inst.layout().quad(0, 1, CONTROL)));
    }

    #[test]
    fn two_gate_circuit_steps() {
        let inst = ReducedInstance::build(&two_gate_circuit());
        let x = bs("011");
        let mut outputs = vec![vec![false, true]; 4];
        for (j, row) in outputs.iter_mut().enumerate().skip(1) {
            *row = inst
                .circuit()
                .eval(&x.xor(&BitString::unit(3, j - 1)))
                .unwrap()
                .gate_values;
        }
        let v = inst.assignment_for(&x, &outputs).unwrap();
        let t = true;
        let f = false;
        // Step 1: g1 wrong (g10 = 0, rest 1), g2 right (g10 = 1, rest 0).
        assert_eq!(c0_quads(&inst, &v, 0), [t, t, f, t]);
        assert_eq!(c0_quads(&inst, &v, 1), [f, f, t, f]);
        // Step 2: flipping g2 makes its control 1 and its output 0.
        let v = inst.signed_generators()[inst.pi_index(1, 0)].act(&v);
        assert_eq!(c0_quads(&inst, &v, 0), [t, t, f, t]);
        assert_eq!(c0_quads(&inst, &v, 1), [t, t, f, t]);
        assert!(!v.get(inst.layout().output(0, 0)));
        // Step 3: flipping g1 fixes it and moves g2 to g11 = 0.
        let v = inst.signed_generators()[inst.pi_index(0, 0)].act(&v);
        assert_eq!(c0_quads(&inst, &v, 0), [f, f, t, f]);
        assert_eq!(c0_quads(&inst, &v, 1), [t, t, t, f]);
        assert!(!v.get(inst.layout().output(0, 0)));
        assert!(inst.gate_state(&v, 0, 0).unwrap().is_correct());
        assert!(inst.gate_state(&v, 0, 1).unwrap().is_correct());
    }

    #[test]
    fn duplicated_source_uses_diagonal_swap() {
        let c = FlipInstance::parse_netlist(
            "inputs 1\ngate 1 NAND x1 x1\ngate 2 NAND g1 g1\noutputs g2\n",
        )
        .unwrap();
        let inst = ReducedInstance::build(&c);
        let v = inst.correct_assignment(&bs("0")).unwrap();
        let v = inst.signed_generators()[inst.pi_index(0, 0)].act(&v);
        // g1 now outputs 0, so g2 reads (0, 0) and still outputs 0.
        assert_eq!(
            inst.gate_state(&v, 0, 1),
            Some(GateState::new(false, false, false))
        );
        assert!(inst.is_well_behaved(&expand(&v)));
    }

    #[test]
    fn control_positions_stay_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let n = rng.gen_range(1..=3);
            let g = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=g.min(3));
            let inst = ReducedInstance::build(&random_circuit(&mut rng, n, g, m).unwrap());
            let l = *inst.layout();
            for _ in 0..20 {
                let w = {
                    let len = rng.gen_range(0..20);
                    random_word(&mut rng, &inst, len)
                };
                let y = inst.string_for(&w).unwrap();
                let v = condense(&y).unwrap();
                let offending = (0..l.circuits())
                    .flat_map(|j| (0..l.gates).map(move |g| (j, g)))
                    .find(|&(j, g)| v.get(l.quad(j, g, CONTROL)));
                match offending {
                    Some((j, g)) => {
                        let next = y.permute(&inst.generators().generators()[inst.pi_index(g, j)]);
                        assert!(inst.order().compare(&next, &y).unwrap().is_lt());
                        assert!(!inst.is_local_min_expanded(&w).unwrap());
                    }
                    None => {
                        let x = inst.extract_flip_input(&y).unwrap();
                        for j in 0..l.circuits() {
                            let xj = if j == 0 {
                                x.clone()
                            } else {
                                x.xor(&BitString::unit(n, j - 1))
                            };
                            let out = inst.circuit().eval(&xj).unwrap().outputs;
                            for k in 0..l.outputs {
                                assert_eq!(v.get(l.output(j, k)), out.get(k));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn search_endpoints_are_flip_local_minima() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..20 {
            let n = rng.gen_range(1..=3);
            let g = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=g.min(3));
            let inst = ReducedInstance::build(&random_circuit(&mut rng, n, g, m).unwrap());
            let s = inst
                .search(&Word::new(), &SearchOptions::default())
                .unwrap();
            assert_eq!(s.status, Status::LocalOpt);
            let x = inst.map_solution(&s.word).unwrap();
            assert_eq!(inst.circuit().flip_local_check(&x).unwrap(), None);
        }
    }

    #[test]
    fn condensed_and_expanded_views_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..1000 {
            let v = {
                let len = rng.gen_range(0..40);
                BitString::from_bools((0..len).map(|_| rng.gen_bool(0.5)).collect())
            };
            assert_eq!(condense(&expand(&v)).unwrap(), v);
        }
        assert_eq!(expand(&bs("0")), bs("01"));
        assert_eq!(
            condense(&bs("0111")),
            Err(Error::TwinViolation { position: 1 })
        );
        for _ in 0..20 {
            let n = rng.gen_range(1..=3);
            let g = rng.gen_range(1..=5);
            let inst = ReducedInstance::build(&random_circuit(&mut rng, n, g, 1).unwrap());
            for _ in 0..10 {
                let w = {
                    let len = rng.gen_range(0..15);
                    random_word(&mut rng, &inst, len)
                };
                assert_eq!(
                    inst.is_local_min_condensed(&w).unwrap(),
                    inst.is_local_min_expanded(&w).unwrap()
                );
            }
        }
    }

    #[test]
    fn sigma_does_not_commute_with_gate_flips() {
        let inst = ReducedInstance::build(&two_gate_circuit());
        let gens = inst.generators().generators();
        let sigma = &gens[inst.sigma_index(0)];
        assert!(gens[..inst.sigma_index(0)]
            .iter()
            .any(|p| { p.compose(sigma).unwrap() != sigma.compose(p).unwrap() }));
    }

    #[test]
    fn order_layout() {
        let inst = ReducedInstance::build(&minimal());
        let l = *inst.layout();
        let o = inst.condensed_order();
        assert_eq!(o.level_of(l.quad(0, 0, CONTROL)), 0);
        assert_eq!(o.level_of(l.output(0, 0)), 1);
        assert_eq!(o.level_of(l.quad(0, 0, 0)), 2);
        assert_eq!(o.level_of(l.input(0, 0)), 5);
        assert_eq!(o.level_of(l.quad(1, 0, CONTROL)), 6);
        let e = inst.order();
        assert_eq!(e.level_of(2 * l.output(0, 0)), 2);
        assert_eq!(e.level_of(2 * l.output(0, 0) + 1), 3);
    }

    #[test]
    fn instance_file_round_trip() {
        let inst = ReducedInstance::build(&two_gate_circuit());
        let text = inst.to_instance_file();
        assert!(text.contains("pos 1 c0 input x1 t0"));
        assert!(text.contains("sigma_3 = "));
        assert_eq!(ReducedInstance::from_instance_file(&text).unwrap(), inst);
        let generic = LocalMinInstance::parse(&text).unwrap();
        assert_eq!(generic, inst.as_local_min_instance());
        let tampered = text.replacen("start 0", "start 1", 1);
        assert!(ReducedInstance::from_instance_file(&tampered).is_err());
        let no_netlist: String = text
            .lines()
            .filter(|l| !l.starts_with("netlist"))
            .map(|l| format!("{l}\n"))
            .collect();
        assert!(ReducedInstance::from_instance_file(&no_netlist).is_err());
        assert!(LocalMinInstance::parse(&no_netlist).is_ok());
    }
}
