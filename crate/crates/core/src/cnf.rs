//! A CNF formula whose models are the well-behaved assignments of the FLIP
//! reduction and whose variable symmetries are the reduction's generators.
//!
//! Every logical variable `u` has a twin `ũ` forced to `¬u`. Per circuit copy the
//! logical variables are the inputs `x_1..x_n`, and per gate its output `w` and the
//! four quadrants `g_00..g_11`. Logical variable `k` becomes DIMACS variables
//! `2k+1` (primary) and `2k+2` (twin); internally these are positions `2k`, `2k+1`.
//!
//! Only positive occurrences of primaries or twins appear in consequents, and a
//! value `0` in an antecedent is written with the twin, so every symmetry is a pure
//! variable permutation.

use std::fmt;

use crate::bitlex::{BitString, PrioritizedBitString, PriorityOrder};
use crate::circuit::{FlipInstance, Source};
use crate::error::{Error, Result};
use crate::perm::{GeneratorSet, Permutation, Word};
use crate::reduction::{pi_name, sigma_name, GateState, Layout, ReducedInstance, CONTROL};
use crate::search::{standard_algorithm, SearchOptions, SearchState};

/// DIMACS literal: `±v` with `v ≥ 1`.
pub type Lit = i32;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

fn lit_holds(a: &BitString, lit: Lit) -> bool {
    a.get(lit.unsigned_abs() as usize - 1) == (lit > 0)
}

fn normalize(clause: &[Lit]) -> Vec<Lit> {
    let mut c = clause.to_vec();
    c.sort_unstable_by_key(|l| (l.abs(), *l));
    c.dedup();
    c
}

impl Cnf {
    pub fn new(num_vars: usize) -> Self {
        Cnf {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn push(&mut self, clause: &[Lit]) {
        self.clauses.push(normalize(clause));
    }

    /// 0-based index of the first clause `a` falsifies.
    pub fn first_unsatisfied(&self, a: &BitString) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|&l| lit_holds(a, l)))
    }

    pub fn is_satisfied_by(&self, a: &BitString) -> bool {
        a.len() == self.num_vars && self.first_unsatisfied(a).is_none()
    }

    /// Renames every literal `±v` to `±(p(v))`.
    pub fn rename(&self, p: &Permutation) -> Cnf {
        Cnf {
            num_vars: self.num_vars,
            clauses: self
                .clauses
                .iter()
                .map(|c| {
                    let renamed: Vec<Lit> = c
                        .iter()
                        .map(|&l| {
                            let v = p.apply(l.unsigned_abs() as usize - 1) as Lit + 1;
                            if l > 0 {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect();
                    normalize(&renamed)
                })
                .collect(),
        }
    }

    fn canonical(&self) -> Vec<Vec<Lit>> {
        let mut cs: Vec<Vec<Lit>> = self.clauses.iter().map(|c| normalize(c)).collect();
        cs.sort();
        cs
    }

    /// DIMACS text. `priority` and `start` are stored in `c priority` / `c start`
    /// comment lines when given.
    pub fn to_dimacs(&self, priority: Option<&PriorityOrder>, start: Option<&BitString>) -> String {
        let mut out = String::new();
        if let Some(p) = priority {
            out.push_str(&format!("c priority {p}\n"));
        }
        if let Some(s) = start {
            out.push_str(&format!("c start {s}\n"));
        }
        out.push_str(&format!("p cnf {} {}\n", self.num_vars, self.clauses.len()));
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

/// A parsed DIMACS file with the optional annotations written by
/// [`Cnf::to_dimacs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimacsFile {
    pub cnf: Cnf,
    pub priority: Option<PriorityOrder>,
    pub start: Option<BitString>,
}

pub fn parse_dimacs(text: &str) -> Result<DimacsFile> {
    let bad = |line: usize, msg: String| Error::MalformedDimacs { line, msg };
    let mut header: Option<(usize, usize)> = None;
    let mut priority = None;
    let mut start = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(comment) = line.strip_prefix('c') {
            let comment = comment.trim();
            if let Some(rest) = comment.strip_prefix("priority") {
                priority =
                    Some(PriorityOrder::parse(rest).map_err(|e| bad(lineno, e.to_string()))?);
            } else if let Some(rest) = comment.strip_prefix("start") {
                start = Some(
                    rest.trim()
                        .parse::<BitString>()
                        .map_err(|e| bad(lineno, e.to_string()))?,
                );
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let ["cnf", v, c] = toks.as_slice() else {
                return Err(bad(lineno, "expected `p cnf <vars> <clauses>`".into()));
            };
            let num = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| bad(lineno, format!("bad count `{t}`")))
            };
            if header.is_some() {
                return Err(bad(lineno, "duplicate header".into()));
            }
            header = Some((num(v)?, num(c)?));
            continue;
        }
        let (vars, _) = header.ok_or_else(|| bad(lineno, "clause before header".into()))?;
        for tok in line.split_whitespace() {
            let l: Lit = tok
                .parse()
                .map_err(|_| bad(lineno, format!("bad literal `{tok}`")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() as usize > vars {
                return Err(bad(lineno, format!("literal {l} exceeds {vars} variables")));
            } else {
                current.push(l);
            }
        }
    }
    let (num_vars, count) = header.ok_or_else(|| bad(0, "missing `p cnf` header".into()))?;
    if !current.is_empty() {
        return Err(bad(0, "last clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(bad(
            0,
            format!("header announces {count} clauses, found {}", clauses.len()),
        ));
    }
    for (what, len) in [
        ("priority", priority.as_ref().map(PriorityOrder::len)),
        ("start", start.as_ref().map(BitString::len)),
    ] {
        if let Some(len) = len {
            if len != num_vars {
                return Err(bad(
                    0,
                    format!("{what} covers {len} variables, expected {num_vars}"),
                ));
            }
        }
    }
    Ok(DimacsFile {
        cnf: Cnf { num_vars, clauses },
        priority,
        start,
    })
}

/// Whether renaming by `p` maps the clause multiset to itself.
pub fn check_symmetry(f: &Cnf, p: &Permutation) -> Result<bool> {
    if p.degree() != f.num_vars {
        return Err(Error::DegreeMismatch {
            expected: f.num_vars,
            found: p.degree(),
        });
    }
    Ok(f.rename(p).canonical() == f.canonical())
}

/// All models of `f`, by DPLL with unit propagation. Stops after `limit` models.
pub fn enumerate_models(f: &Cnf, limit: usize) -> Vec<BitString> {
    let mut models = Vec::new();
    let mut assign: Vec<Option<bool>> = vec![None; f.num_vars];
    dpll(f, &mut assign, &mut models, limit);
    models
}

fn dpll(f: &Cnf, assign: &mut Vec<Option<bool>>, models: &mut Vec<BitString>, limit: usize) {
    if models.len() >= limit {
        return;
    }
    let saved = assign.clone();
    if !propagate(f, assign) {
        *assign = saved;
        return;
    }
    match assign.iter().position(Option::is_none) {
        None => models.push(BitString::from_bools(
            assign.iter().map(|v| v.unwrap()).collect(),
        )),
        Some(v) => {
            for value in [false, true] {
                assign[v] = Some(value);
                dpll(f, assign, models, limit);
                assign[v] = None;
            }
        }
    }
    *assign = saved;
}

/// Unit propagation to a fixpoint; `false` on conflict.
fn propagate(f: &Cnf, assign: &mut [Option<bool>]) -> bool {
    loop {
        let mut changed = false;
        for c in &f.clauses {
            let mut unassigned = None;
            let mut open = 0;
            let mut satisfied = false;
            for &l in c {
                match assign[l.unsigned_abs() as usize - 1] {
                    Some(v) if v == (l > 0) => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open += 1;
                        unassigned = Some(l);
                    }
                }
            }
            if satisfied {
                continue;
            }
            match (open, unassigned) {
                (0, _) => return false,
                (1, Some(l)) => {
                    assign[l.unsigned_abs() as usize - 1] = Some(l > 0);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

/// Logical variable numbering for a circuit's formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CnfVars {
    pub n: usize,
    pub gates: usize,
}

impl CnfVars {
    pub fn per_circuit(&self) -> usize {
        self.n + 5 * self.gates
    }

    pub fn circuits(&self) -> usize {
        self.n + 1
    }

    pub fn logical_len(&self) -> usize {
        self.circuits() * self.per_circuit()
    }

    pub fn num_vars(&self) -> usize {
        2 * self.logical_len()
    }

    pub fn input(&self, j: usize, i: usize) -> usize {
        j * self.per_circuit() + i
    }

    pub fn w(&self, j: usize, g: usize) -> usize {
        j * self.per_circuit() + self.n + 5 * g
    }

    pub fn quad(&self, j: usize, g: usize, q: usize) -> usize {
        self.w(j, g) + 1 + q
    }

    pub fn label(&self, k: usize) -> String {
        let (j, local) = (k / self.per_circuit(), k % self.per_circuit());
        if local < self.n {
            format!("x{}^{j}", local + 1)
        } else {
            let (g, r) = ((local - self.n) / 5, (local - self.n) % 5);
            match r {
                0 => format!("w{}^{j}", g + 1),
                _ => format!("g{}_{}{}^{j}", g + 1, (r - 1) >> 1, (r - 1) & 1),
            }
        }
    }
}

/// DIMACS literal of logical variable `k` holding `value`: the primary for 1, the
/// twin for 0.
fn holds(k: usize, value: bool) -> Lit {
    if value {
        2 * k as Lit + 1
    } else {
        2 * k as Lit + 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitFormula {
    circuit: FlipInstance,
    pub vars: CnfVars,
    pub cnf: Cnf,
    pub symmetries: GeneratorSet,
    pub priority: PriorityOrder,
    /// Twin-expanded initial model.
    pub start: BitString,
}

/// Builds the formula, its symmetries, priority and initial model for `c`.
pub fn build_formula(c: &FlipInstance) -> CircuitFormula {
    let vars = CnfVars {
        n: c.input_count(),
        gates: c.gate_count(),
    };
    let mut cnf = Cnf::new(vars.num_vars());
    let source_var = |j: usize, s: Source| match s {
        Source::Input(i) => vars.input(j, i),
        Source::Gate(h) => vars.w(j, h),
    };

    for j in 0..vars.circuits() {
        for (g, gate) in c.gates().iter().enumerate() {
            let [s1, s2] = gate.inputs.map(|s| source_var(j, s));
            for code in 0..8u8 {
                let st = GateState::new(code & 4 != 0, code & 2 != 0, code & 1 != 0);
                let antecedent = [
                    holds(s1, st.a1),
                    holds(s2, st.a2),
                    holds(vars.w(j, g), st.b),
                ];
                for (q, label) in st.encode().into_iter().enumerate() {
                    let mut clause: Vec<Lit> = antecedent.iter().map(|l| -l).collect();
                    clause.push(holds(vars.quad(j, g, q), label));
                    cnf.push(&clause);
                }
            }
        }
    }
    for k in 0..vars.logical_len() {
        let (u, t) = (2 * k as Lit + 1, 2 * k as Lit + 2);
        cnf.push(&[u, t]);
        cnf.push(&[-u, -t]);
    }
    for i1 in 0..vars.circuits() {
        for i2 in i1 + 1..vars.circuits() {
            for i in 0..vars.n {
                let (a, b) = (vars.input(i1, i), vars.input(i2, i));
                let crossed = i1 == i + 1 || i2 == i + 1;
                // a ↔ b (or a ↔ ¬b), stated for the primaries and for the twins.
                for value in [true, false] {
                    let la = holds(a, value);
                    let lb = holds(b, value != crossed);
                    cnf.push(&[-la, lb]);
                    cnf.push(&[la, -lb]);
                }
            }
        }
    }

    let mut symmetries = GeneratorSet::new(vars.num_vars());
    for j in 0..vars.circuits() {
        for g in 0..vars.gates {
            let mut swaps = Vec::new();
            swaps.push((vars.w(j, g), None));
            for q in 0..4 {
                swaps.push((vars.quad(j, g, q), None));
            }
            reader_swaps(c, &vars, j, Source::Gate(g), &mut swaps);
            symmetries
                .push(pi_name(g, j), variable_permutation(&vars, &swaps))
                .expect("unique names");
        }
    }
    for i in 0..vars.n {
        let mut swaps = Vec::new();
        for local in 0..vars.per_circuit() {
            swaps.push((local, Some((i + 1) * vars.per_circuit() + local)));
        }
        for j in (1..vars.circuits()).filter(|&j| j != i + 1) {
            swaps.push((vars.input(j, i), None));
            reader_swaps(c, &vars, j, Source::Input(i), &mut swaps);
        }
        symmetries
            .push(sigma_name(i), variable_permutation(&vars, &swaps))
            .expect("unique names");
    }

    let priority = formula_priority(c, &vars);
    let reduced = ReducedInstance::build(c);
    let start = from_reduction(c, &vars, &reduced, reduced.start())
        .expect("reduction start is well-behaved");
    CircuitFormula {
        circuit: c.clone(),
        vars,
        cnf,
        symmetries,
        priority,
        start,
    }
}

/// Swaps of logical variables: `(k, None)` exchanges `k` with its twin, `(k,
/// Some(l))` exchanges `k` with `l` and their twins.
fn variable_permutation(vars: &CnfVars, swaps: &[(usize, Option<usize>)]) -> Permutation {
    let mut image: Vec<usize> = (0..vars.num_vars()).collect();
    for &(k, other) in swaps {
        match other {
            None => image.swap(2 * k, 2 * k + 1),
            Some(l) => {
                image.swap(2 * k, 2 * l);
                image.swap(2 * k + 1, 2 * l + 1);
            }
        }
    }
    Permutation::from_zero_based(image).expect("swaps of disjoint pairs")
}

fn reader_swaps(
    c: &FlipInstance,
    vars: &CnfVars,
    j: usize,
    src: Source,
    swaps: &mut Vec<(usize, Option<usize>)>,
) {
    for (h, first, second) in c.readers(src) {
        let q = |a: usize, b: usize| vars.quad(j, h, 2 * a + b);
        let pairs = match (first, second) {
            (true, true) => [(q(0, 0), q(1, 1)), (q(0, 1), q(1, 0))],
            (true, false) => [(q(0, 0), q(1, 0)), (q(0, 1), q(1, 1))],
            _ => [(q(0, 0), q(0, 1)), (q(1, 0), q(1, 1))],
        };
        swaps.extend(pairs.map(|(a, b)| (a, Some(b))));
    }
}

/// C_0 controls by gate, C_0 output variables by output index, the controls of the
/// other copies, then per copy the other quadrants, the remaining gate outputs and
/// the inputs. Each twin directly follows its primary.
fn formula_priority(c: &FlipInstance, vars: &CnfVars) -> PriorityOrder {
    let mut logical: Vec<usize> = Vec::with_capacity(vars.logical_len());
    logical.extend((0..vars.gates).map(|g| vars.quad(0, g, CONTROL)));
    logical.extend(c.outputs().iter().map(|&g| vars.w(0, g)));
    for j in 1..vars.circuits() {
        logical.extend((0..vars.gates).map(|g| vars.quad(j, g, CONTROL)));
    }
    for j in 0..vars.circuits() {
        for g in 0..vars.gates {
            logical.extend((0..CONTROL).map(|q| vars.quad(j, g, q)));
        }
        logical.extend(
            (0..vars.gates)
                .filter(|&g| j != 0 || c.output_index(g).is_none())
                .map(|g| vars.w(j, g)),
        );
        logical.extend((0..vars.n).map(|i| vars.input(j, i)));
    }
    let ranks = logical.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
    PriorityOrder::from_ranks(ranks).expect("each variable ranked once")
}

/// CNF assignment corresponding to a well-behaved expanded reduction string.
fn from_reduction(
    c: &FlipInstance,
    vars: &CnfVars,
    reduced: &ReducedInstance,
    y: &BitString,
) -> Result<BitString> {
    if let Some(v) = reduced.check_well_behaved(y)? {
        return Err(Error::NotWellBehaved(v.to_string()));
    }
    let l = reduced.layout();
    let v = crate::reduction::condense(y)?;
    let mut logical = vec![false; vars.logical_len()];
    for j in 0..vars.circuits() {
        for i in 0..vars.n {
            logical[vars.input(j, i)] = v.get(l.input(j, i));
        }
        for g in 0..c.gate_count() {
            for q in 0..4 {
                logical[vars.quad(j, g, q)] = v.get(l.quad(j, g, q));
            }
            logical[vars.w(j, g)] = reduced.gate_state(&v, j, g).expect("well-behaved").b;
        }
    }
    Ok(crate::reduction::expand(&BitString::from_bools(logical)))
}

impl CircuitFormula {
    pub fn circuit(&self) -> &FlipInstance {
        &self.circuit
    }

    /// Expanded reduction string for a CNF assignment with complementary twins: the
    /// output position `c_k` takes the value of the `k`-th output gate's variable.
    pub fn project(&self, a: &BitString) -> Result<BitString> {
        let logical = crate::reduction::condense(a)?;
        let l = Layout::for_circuit(&self.circuit);
        let mut v = BitString::zeros(l.condensed_len());
        for j in 0..self.vars.circuits() {
            for i in 0..self.vars.n {
                v.set(l.input(j, i), logical.get(self.vars.input(j, i)));
            }
            for g in 0..self.vars.gates {
                for q in 0..4 {
                    v.set(l.quad(j, g, q), logical.get(self.vars.quad(j, g, q)));
                }
            }
            for (k, &g) in self.circuit.outputs().iter().enumerate() {
                v.set(l.output(j, k), logical.get(self.vars.w(j, g)));
            }
        }
        Ok(crate::reduction::expand(&v))
    }

    /// C_0 inputs of an assignment.
    pub fn decode_input(&self, a: &BitString) -> BitString {
        BitString::from_bools(
            (0..self.vars.n)
                .map(|i| a.get(2 * self.vars.input(0, i)))
                .collect(),
        )
    }

    pub fn to_dimacs(&self) -> String {
        self.cnf.to_dimacs(Some(&self.priority), Some(&self.start))
    }

    /// Sidecar listing each symmetry as `name = (…)` over 1-based variables.
    pub fn symmetry_file(&self) -> String {
        self.symmetries.to_string()
    }
}

impl fmt::Display for CircuitFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dimacs())
    }
}

/// Greedy descent `β ← β ∘ π_i` over the symmetries, best improvement first, under
/// `priority`. Every step keeps `β` a model because each `π_i` is a symmetry.
pub fn local_min_solution(
    f: &Cnf,
    symmetries: &GeneratorSet,
    priority: &PriorityOrder,
    alpha: &BitString,
    opts: &SearchOptions,
) -> Result<SearchState> {
    if alpha.len() != f.num_vars {
        return Err(Error::LengthMismatch {
            expected: f.num_vars,
            found: alpha.len(),
        });
    }
    if let Some(clause) = f.first_unsatisfied(alpha) {
        return Err(Error::UnsatStart { clause: clause + 1 });
    }
    let x = PrioritizedBitString::new(alpha.clone(), priority.clone())?;
    standard_algorithm(&x, symmetries, &Word::new(), opts)
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

    fn minimal() -> FlipInstance {
        FlipInstance::parse_netlist("inputs 1\ngate 1 NAND x1 x1\noutputs g1\n").unwrap()
    }

    #[test]
    fn minimal_formula_shape() {
        let f = build_formula(&minimal());
        assert_eq!(f.vars.logical_len(), 12);
        assert_eq!(f.cnf.num_vars, 24);
        assert_eq!(f.cnf.clauses.len(), 64 + 24 + 4);
        assert!(f.cnf.is_satisfied_by(&f.start));
        assert_eq!(f.symmetries.names(), ["pi_1_0", "pi_1_1", "sigma_1"]);
        assert_eq!(f.vars.label(6), "x1^1");
        assert_eq!(f.vars.label(11), "g1_11^1");
    }

    #[test]
    fn minimal_models_are_the_well_behaved_set() {
        let c = minimal();
        let f = build_formula(&c);
        let models = enumerate_models(&f.cnf, 1000);
        assert_eq!(models.len(), 8);
        let reduced = ReducedInstance::build(&c);
        let projected: BTreeSet<BitString> = models.iter().map(|m| f.project(m).unwrap()).collect();
        let orbit = reduced
            .generators()
            .orbit_of_string(reduced.start(), 1000)
            .unwrap();
        assert_eq!(projected, orbit);
    }

    #[test]
    fn models_project_to_well_behaved_strings() {
        let c = FlipInstance::parse_netlist(
            "inputs 2\ngate 1 NAND x1 x2\ngate 2 NAND g1 x1\noutputs g2\n",
        )
        .unwrap();
        let f = build_formula(&c);
        let reduced = ReducedInstance::build(&c);
        let models = enumerate_models(&f.cnf, 10_000);
        assert_eq!(models.len(), 4 * (1 << 6));
        for m in &models {
            assert!(reduced.is_well_behaved(&f.project(m).unwrap()));
            for p in f.symmetries.generators() {
                assert!(f.cnf.is_satisfied_by(&m.permute(p)));
            }
        }
    }

    #[test]
    fn generated_symmetries_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let n = rng.gen_range(1..=4);
            let g = rng.gen_range(1..=8);
            let m = rng.gen_range(1..=g.min(3));
            let f = build_formula(&random_circuit(&mut rng, n, g, m).unwrap());
            assert!(f.cnf.is_satisfied_by(&f.start));
            for p in f.symmetries.generators() {
                assert!(check_symmetry(&f.cnf, p).unwrap());
                assert!(p.compose(p).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn broken_symmetries_are_rejected() {
        let f = build_formula(&minimal());
        assert!(check_symmetry(&f.cnf, &Permutation::identity(24)).unwrap());
        // Swapping a primary with an unrelated primary breaks its twin clauses.
        let t = Permutation::transposition(24, 0, 2);
        assert!(!check_symmetry(&f.cnf, &t).unwrap());
        assert!(check_symmetry(&f.cnf, &Permutation::identity(3)).is_err());
    }

    #[test]
    fn local_min_solutions_decode_to_flip_minima() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..30 {
            let n = rng.gen_range(1..=3);
            let g = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=g.min(3));
            let c = random_circuit(&mut rng, n, g, m).unwrap();
            let f = build_formula(&c);
            let s = local_min_solution(
                &f.cnf,
                &f.symmetries,
                &f.priority,
                &f.start,
                &SearchOptions::default(),
            )
            .unwrap();
            assert_eq!(s.status, Status::LocalOpt);
            assert!(f.cnf.is_satisfied_by(&s.string));
            let x = f.decode_input(&s.string);
            assert_eq!(c.flip_local_check(&x).unwrap(), None);
            for j in 0..f.vars.circuits() {
                for g in 0..f.vars.gates {
                    assert!(!s.string.get(2 * f.vars.quad(j, g, CONTROL)));
                }
            }
        }
    }

    #[test]
    fn local_min_from_other_models() {
        let c = minimal();
        let f = build_formula(&c);
        for model in enumerate_models(&f.cnf, 100) {
            let s = local_min_solution(
                &f.cnf,
                &f.symmetries,
                &f.priority,
                &model,
                &SearchOptions::default(),
            )
            .unwrap();
            assert_eq!(
                c.flip_local_check(&f.decode_input(&s.string)).unwrap(),
                None
            );
        }
        let mut bad = f.start.clone();
        bad.flip(0);
        assert!(matches!(
            local_min_solution(
                &f.cnf,
                &f.symmetries,
                &f.priority,
                &bad,
                &SearchOptions::default()
            ),
            Err(Error::UnsatStart { .. })
        ));
    }

    #[test]
    fn local_min_at_start_takes_no_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let c = random_circuit(&mut rng, 2, 3, 1).unwrap();
        let f = build_formula(&c);
        let opts = SearchOptions::default();
        let s = local_min_solution(&f.cnf, &f.symmetries, &f.priority, &f.start, &opts).unwrap();
        let again =
            local_min_solution(&f.cnf, &f.symmetries, &f.priority, &s.string, &opts).unwrap();
        assert_eq!(again.steps, 0);
    }

    #[test]
    fn priority_layout() {
        let c = FlipInstance::parse_netlist(
            "inputs 2\ngate 1 NAND x1 x2\ngate 2 NAND g1 x1\noutputs g2\n",
        )
        .unwrap();
        let f = build_formula(&c);
        let v = f.vars;
        let level = |k: usize| f.priority.level_of(2 * k);
        assert_eq!(level(v.quad(0, 0, CONTROL)), 0);
        assert_eq!(level(v.quad(0, 1, CONTROL)), 2);
        assert_eq!(level(v.w(0, 1)), 4);
        assert_eq!(level(v.quad(1, 0, CONTROL)), 6);
        assert_eq!(f.priority.level_of(2 * v.w(0, 1) + 1), 5);
        assert!(level(v.quad(2, 1, CONTROL)) < level(v.quad(0, 0, 0)));
    }

    #[test]
    fn dimacs_round_trip() {
        assert_eq!(Cnf::new(0).to_dimacs(None, None), "p cnf 0 0\n");
        let f = build_formula(&minimal());
        let text = f.to_dimacs();
        let parsed = parse_dimacs(&text).unwrap();
        assert_eq!(parsed.cnf, f.cnf);
        assert_eq!(parsed.priority.as_ref(), Some(&f.priority));
        assert_eq!(parsed.start.as_ref(), Some(&f.start));
        assert_eq!(
            parsed
                .cnf
                .to_dimacs(parsed.priority.as_ref(), parsed.start.as_ref()),
            text
        );
        let sym = GeneratorSet::parse(&f.symmetry_file(), parsed.cnf.num_vars).unwrap();
        assert_eq!(sym.names(), f.symmetries.names());
        for p in sym.generators() {
            assert!(check_symmetry(&parsed.cnf, p).unwrap());
        }
        for bad in [
            "1 2 0\n",
            "p cnf 2 1\n1 3 0\n",
            "p cnf 2 2\n1 2 0\n",
            "p cnf 2 1\n1 2\n",
            "p cnf 2 1\n1 x 0\n",
            "p dnf 2 1\n1 0\n",
        ] {
            assert!(
                matches!(parse_dimacs(bad), Err(Error::MalformedDimacs { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn sampled_models_stay_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..10 {
            let c = random_circuit(&mut rng, 2, 3, 2).unwrap();
            let f = build_formula(&c);
            let models = enumerate_models(&f.cnf, 64);
            for m in models.choose_multiple(&mut rng, 8) {
                for p in f.symmetries.generators() {
                    assert!(f.cnf.is_satisfied_by(&m.permute(p)));
                }
            }
        }
    }
}
