//! NAND circuits as FLIP instances: netlist I/O, evaluation and brute-force local
//! search over single-bit flips of the input.
//!
//! The cost of an input is the output vector read as a binary number with the
//! first output most significant, which is exactly lexicographic order on
//! [`BitString`].

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::index::sample;
use rand::Rng;

use crate::bitlex::BitString;
use crate::error::{Error, Result};
use crate::search::Status;

/// Where a gate reads a value from. Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Input(usize),
    Gate(usize),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Input(i) => write!(f, "x{}", i + 1),
            Source::Gate(g) => write!(f, "g{}", g + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gate {
    pub inputs: [Source; 2],
}

impl Gate {
    pub fn new(a: Source, b: Source) -> Self {
        Gate { inputs: [a, b] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipInstance {
    n: usize,
    gates: Vec<Gate>,
    outputs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub outputs: BitString,
    pub gate_values: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipRun {
    pub input: BitString,
    /// Visited inputs, starting with the initial one.
    pub trace: Vec<BitString>,
    pub status: Status,
}

impl FlipRun {
    pub fn steps(&self) -> usize {
        self.trace.len() - 1
    }
}

impl FlipInstance {
    /// Gates must be listed in topological order: a gate may only read inputs and
    /// earlier gates. Outputs are distinct gate indices.
    pub fn new(n: usize, gates: Vec<Gate>, outputs: Vec<usize>) -> Result<Self> {
        for (g, gate) in gates.iter().enumerate() {
            for src in gate.inputs {
                match src {
                    Source::Input(i) if i >= n => {
                        return Err(Error::InvalidCircuit(format!(
                            "gate g{} reads undefined input x{}",
                            g + 1,
                            i + 1
                        )))
                    }
                    Source::Gate(h) if h >= g => {
                        return Err(Error::InvalidCircuit(format!(
                            "gate g{} reads g{} which does not precede it",
                            g + 1,
                            h + 1
                        )))
                    }
                    _ => {}
                }
            }
        }
        if outputs.is_empty() {
            return Err(Error::InvalidCircuit("circuit has no outputs".into()));
        }
        let mut seen = BTreeSet::new();
        for &o in &outputs {
            if o >= gates.len() {
                return Err(Error::InvalidCircuit(format!(
                    "output g{} is not a gate",
                    o + 1
                )));
            }
            if !seen.insert(o) {
                return Err(Error::InvalidCircuit(format!(
                    "output g{} listed twice",
                    o + 1
                )));
            }
        }
        Ok(FlipInstance { n, gates, outputs })
    }

    pub fn input_count(&self) -> usize {
        self.n
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Position `k` of `g` among the outputs, if it is one.
    pub fn output_index(&self, g: usize) -> Option<usize> {
        self.outputs.iter().position(|&o| o == g)
    }

    /// Gates reading `src`, with which input slots (first, second) they read it on.
    pub fn readers(&self, src: Source) -> Vec<(usize, bool, bool)> {
        self.gates
            .iter()
            .enumerate()
            .filter_map(|(h, gate)| {
                let first = gate.inputs[0] == src;
                let second = gate.inputs[1] == src;
                (first || second).then_some((h, first, second))
            })
            .collect()
    }

    pub fn unused_inputs(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.readers(Source::Input(i)).is_empty())
            .collect()
    }

    pub fn eval(&self, x: &BitString) -> Result<Evaluation> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        let mut values = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let [a, b] = gate.inputs.map(|s| match s {
                Source::Input(i) => x.get(i),
                Source::Gate(h) => values[h],
            });
            values.push(!(a && b));
        }
        let outputs = BitString::from_bools(self.outputs.iter().map(|&o| values[o]).collect());
        Ok(Evaluation {
            outputs,
            gate_values: values,
        })
    }

    fn cost(&self, x: &BitString) -> BitString {
        self.eval(x).expect("length checked by caller").outputs
    }

    /// Smallest `j` (0-based) such that flipping bit `j` lowers the output, or
    /// `None` when `x` is a local minimum.
    pub fn flip_local_check(&self, x: &BitString) -> Result<Option<usize>> {
        let here = self.eval(x)?.outputs;
        Ok((0..self.n).find(|&j| {
            let mut y = x.clone();
            y.flip(j);
            self.cost(&y) < here
        }))
    }

    /// Best-improvement walk over single-bit flips, ties to the smallest index.
    pub fn flip_greedy(&self, x0: &BitString, max_steps: usize) -> Result<FlipRun> {
        let mut cost = self.eval(x0)?.outputs;
        let mut x = x0.clone();
        let mut trace = vec![x.clone()];
        loop {
            let mut best: Option<(BitString, BitString)> = None;
            for j in 0..self.n {
                let mut y = x.clone();
                y.flip(j);
                let c = self.cost(&y);
                let target = best.as_ref().map_or(&cost, |(_, bc)| bc);
                if c < *target {
                    best = Some((y, c));
                }
            }
            let Some((y, c)) = best else {
                return Ok(FlipRun {
                    input: x,
                    trace,
                    status: Status::LocalOpt,
                });
            };
            if trace.len() > max_steps {
                return Ok(FlipRun {
                    input: x,
                    trace,
                    status: Status::StepCap,
                });
            }
            x = y;
            cost = c;
            trace.push(x.clone());
        }
    }

    /// Netlist text: `inputs n`, one `gate <id> NAND <src> <src>` line per gate in
    /// order (ids `1..`), and `outputs g<id> …`. Sources are `x<i>` or `g<id>`.
    pub fn parse_netlist(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut gates = Vec::new();
        let mut outputs: Option<Vec<usize>> = None;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                [] => {}
                ["inputs", k] => {
                    if n.is_some() {
                        return Err(Error::parse(lineno, "duplicate `inputs` line"));
                    }
                    n = Some(
                        k.parse()
                            .map_err(|_| Error::parse(lineno, format!("bad input count `{k}`")))?,
                    );
                }
                ["gate", id, kind, a, b] => {
                    let n = n.ok_or_else(|| Error::parse(lineno, "gate before `inputs`"))?;
                    if !kind.eq_ignore_ascii_case("nand") {
                        return Err(Error::InvalidCircuit(format!(
                            "unsupported gate kind `{kind}`"
                        )));
                    }
                    let id = parse_ref(id, 'g', lineno).or_else(|_| {
                        id.parse::<usize>()
                            .map_err(|_| Error::parse(lineno, format!("bad gate id `{id}`")))
                    })?;
                    if id != gates.len() + 1 {
                        return Err(Error::InvalidCircuit(format!(
                            "gate ids must be 1, 2, ... in order; found {id} at position {}",
                            gates.len() + 1
                        )));
                    }
                    let src = |t: &str| parse_source(t, n, lineno);
                    gates.push(Gate::new(src(a)?, src(b)?));
                }
                ["outputs", rest @ ..] => {
                    if outputs.is_some() {
                        return Err(Error::parse(lineno, "duplicate `outputs` line"));
                    }
                    outputs = Some(
                        rest.iter()
                            .map(|t| parse_ref(t, 'g', lineno).map(|g| g - 1))
                            .collect::<Result<_>>()?,
                    );
                }
                _ => return Err(Error::parse(lineno, format!("unexpected line `{raw}`"))),
            }
        }
        let n = n.ok_or_else(|| Error::parse(0, "missing `inputs` line"))?;
        let outputs = outputs.ok_or_else(|| Error::parse(0, "missing `outputs` line"))?;
        let c = FlipInstance::new(n, gates, outputs)?;
        for i in c.unused_inputs() {
            log::warn!("input x{} does not feed any gate", i + 1);
        }
        Ok(c)
    }

    pub fn to_netlist(&self) -> String {
        self.to_string()
    }
}

fn parse_ref(tok: &str, prefix: char, line: usize) -> Result<usize> {
    tok.strip_prefix(prefix)
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .ok_or_else(|| Error::parse(line, format!("expected `{prefix}<id>`, found `{tok}`")))
}

fn parse_source(tok: &str, n: usize, line: usize) -> Result<Source> {
    if matches!(tok, "0" | "1")
        || tok.eq_ignore_ascii_case("true")
        || tok.eq_ignore_ascii_case("false")
    {
        return Err(Error::InvalidCircuit(format!(
            "constant source `{tok}` at line {line}"
        )));
    }
    if tok.starts_with('x') {
        let i = parse_ref(tok, 'x', line)?;
        if i > n {
            return Err(Error::InvalidCircuit(format!(
                "input {tok} exceeds {n} inputs"
            )));
        }
        Ok(Source::Input(i - 1))
    } else {
        Ok(Source::Gate(parse_ref(tok, 'g', line)? - 1))
    }
}

impl fmt::Display for FlipInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inputs {}", self.n)?;
        for (g, gate) in self.gates.iter().enumerate() {
            writeln!(
                f,
                "gate {} NAND {} {}",
                g + 1,
                gate.inputs[0],
                gate.inputs[1]
            )?;
        }
        write!(f, "outputs")?;
        for o in &self.outputs {
            write!(f, " g{}", o + 1)?;
        }
        writeln!(f)
    }
}

/// Random circuit with `n` inputs, `gates` NAND gates and `m` distinct outputs.
/// Each gate reads two sources drawn uniformly from the inputs and earlier gates.
pub fn random_circuit(
    rng: &mut impl Rng,
    n: usize,
    gates: usize,
    m: usize,
) -> Result<FlipInstance> {
    if m == 0 || m > gates {
        return Err(Error::InvalidCircuit(format!(
            "cannot pick {m} distinct outputs from {gates} gates"
        )));
    }
    let mut list = Vec::with_capacity(gates);
    for g in 0..gates {
        let pool = n + g;
        if pool == 0 {
            return Err(Error::InvalidCircuit("first gate has no sources".into()));
        }
        let mut pick = || {
            let s = rng.gen_range(0..pool);
            if s < n {
                Source::Input(s)
            } else {
                Source::Gate(s - n)
            }
        };
        list.push(Gate::new(pick(), pick()));
    }
    let mut outputs = sample(rng, gates, m).into_vec();
    outputs.sort_unstable();
    FlipInstance::new(n, list, outputs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn two_gate_circuit() -> FlipInstance {
        FlipInstance::parse_netlist("inputs 3\ngate 1 NAND x2 x1\ngate 2 NAND x3 g1\noutputs g2\n")
            .unwrap()
    }

    fn eval_recursive(c: &FlipInstance, x: &BitString, src: Source) -> bool {
        match src {
            Source::Input(i) => x.get(i),
            Source::Gate(g) => {
                let [a, b] = c.gates()[g].inputs;
                !(eval_recursive(c, x, a) && eval_recursive(c, x, b))
            }
        }
    }

    fn all_inputs(n: usize) -> impl Iterator<Item = BitString> {
        (0u32..1 << n).map(move |v| {
            BitString::from_bools((0..n).map(|i| v >> (n - 1 - i) & 1 == 1).collect())
        })
    }

    #[test]
    fn two_gate_circuit_evaluation() {
        let c = two_gate_circuit();
        let e = c.eval(&bs("011")).unwrap();
        assert_eq!(e.gate_values, vec![true, false]);
        assert_eq!(e.outputs, bs("0"));
        assert_eq!(c.flip_local_check(&bs("011")).unwrap(), None);
        assert!(c.eval(&bs("01")).is_err());
    }

    #[test]
    fn not_gate() {
        let c = FlipInstance::parse_netlist("inputs 1\ngate 1 NAND x1 x1\noutputs g1\n").unwrap();
        assert_eq!(c.eval(&bs("0")).unwrap().outputs, bs("1"));
        assert_eq!(c.eval(&bs("1")).unwrap().outputs, bs("0"));
        assert_eq!(c.flip_local_check(&bs("0")).unwrap(), Some(0));
        let run = c.flip_greedy(&bs("0"), 10).unwrap();
        assert_eq!(run.input, bs("1"));
        assert_eq!(run.steps(), 1);
    }

    #[test]
    fn constant_output_has_no_improvement() {
        // g2 = NAND(x1, NOT x1) = 1 always.
        let c = FlipInstance::parse_netlist(
            "inputs 2\ngate 1 NAND x1 x1\ngate 2 NAND x1 g1\noutputs g2\n",
        )
        .unwrap();
        for x in all_inputs(2) {
            assert_eq!(c.flip_local_check(&x).unwrap(), None);
            assert_eq!(c.flip_greedy(&x, 5).unwrap().steps(), 0);
        }
    }

    #[test]
    fn eval_matches_recursive_and_any_topological_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=3);
            let c = random_circuit(&mut rng, n, 8, m).unwrap();
            for x in all_inputs(n) {
                let e = c.eval(&x).unwrap();
                for g in 0..c.gate_count() {
                    assert_eq!(e.gate_values[g], eval_recursive(&c, &x, Source::Gate(g)));
                }
                // Kahn's algorithm with a shuffled ready list.
                let mut values: Vec<Option<bool>> = vec![None; c.gate_count()];
                let mut pending: Vec<usize> = (0..c.gate_count()).collect();
                while !pending.is_empty() {
                    pending.shuffle(&mut rng);
                    let pos = pending
                        .iter()
                        .position(|&g| {
                            c.gates()[g].inputs.iter().all(|s| match s {
                                Source::Gate(h) => values[*h].is_some(),
                                Source::Input(_) => true,
                            })
                        })
                        .unwrap();
                    let g = pending.swap_remove(pos);
                    let [a, b] = c.gates()[g].inputs.map(|s| match s {
                        Source::Input(i) => x.get(i),
                        Source::Gate(h) => values[h].unwrap(),
                    });
                    values[g] = Some(!(a && b));
                }
                let values: Vec<bool> = values.into_iter().map(Option::unwrap).collect();
                assert_eq!(values, e.gate_values);
            }
        }
    }

    #[test]
    fn local_check_matches_exhaustive_neighbors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let n = rng.gen_range(1..=4);
            let g = rng.gen_range(1..=8);
            let m = rng.gen_range(1..=g.min(3));
            let c = random_circuit(&mut rng, n, g, m).unwrap();
            for x in all_inputs(n) {
                let here = c.eval(&x).unwrap().outputs;
                let expected = (0..n).find(|&j| {
                    let mut y = x.clone();
                    y.flip(j);
                    // Compare as binary numbers.
                    let num =
                        |b: &BitString| b.as_slice().iter().fold(0u32, |a, &v| 2 * a + v as u32);
                    num(&c.eval(&y).unwrap().outputs) < num(&here)
                });
                assert_eq!(c.flip_local_check(&x).unwrap(), expected);
            }
        }
    }

    #[test]
    fn greedy_traces_decrease_and_end_at_local_minima() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            let g = rng.gen_range(1..=8);
            let m = rng.gen_range(1..=g.min(3));
            let c = random_circuit(&mut rng, 3, g, m).unwrap();
            for x in all_inputs(3) {
                let run = c.flip_greedy(&x, 1000).unwrap();
                assert_eq!(run.status, Status::LocalOpt);
                assert_eq!(c.flip_local_check(&run.input).unwrap(), None);
                assert!(run.trace.len() <= 1 << m);
                for w in run.trace.windows(2) {
                    assert!(c.eval(&w[1]).unwrap().outputs < c.eval(&w[0]).unwrap().outputs);
                    assert_eq!(w[0].xor(&w[1]).count_ones(), 1);
                }
            }
        }
    }

    #[test]
    fn greedy_step_cap() {
        // Two NOT gates: from 00 the walk needs two moves to reach 11.
        let c = FlipInstance::parse_netlist(
            "inputs 2\ngate 1 NAND x1 x1\ngate 2 NAND x2 x2\noutputs g1 g2\n",
        )
        .unwrap();
        let run = c.flip_greedy(&bs("00"), 1).unwrap();
        assert_eq!(run.status, Status::StepCap);
        assert_eq!(run.trace, vec![bs("00"), bs("10")]);
        let run = c.flip_greedy(&bs("00"), 2).unwrap();
        assert_eq!(run.status, Status::LocalOpt);
        assert_eq!(run.input, bs("11"));
    }

    #[test]
    fn netlist_round_trip_and_errors() {
        let c = two_gate_circuit();
        assert_eq!(FlipInstance::parse_netlist(&c.to_netlist()).unwrap(), c);
        let bad = [
            "inputs 1\ngate 1 NAND x1 1\noutputs g1\n",
            "inputs 1\ngate 1 NAND x1 g1\noutputs g1\n",
            "inputs 1\ngate 1 NAND x1 x2\noutputs g1\n",
            "inputs 1\ngate 1 AND x1 x1\noutputs g1\n",
            "inputs 1\ngate 1 NAND x1 x1\noutputs g1 g1\n",
            "inputs 1\ngate 1 NAND x1 x1\noutputs x1\n",
            "inputs 1\ngate 2 NAND x1 x1\noutputs g2\n",
            "inputs 1\ngate 1 NAND x1 x1\n",
        ];
        for text in bad {
            assert!(FlipInstance::parse_netlist(text).is_err(), "{text}");
        }
        let unused =
            FlipInstance::parse_netlist("inputs 2\ngate 1 NAND x1 x1\noutputs g1\n").unwrap();
        assert_eq!(unused.unused_inputs(), vec![1]);
    }
}
