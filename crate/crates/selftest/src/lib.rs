//! Acceptance checks for `lexperm`.
//!
//! Each criterion runs against a fixed seed, compares the library with the
//! brute-force references in [`oracles`], and must finish inside its time limit.

pub mod oracles;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lexperm::circuit::{random_circuit, FlipInstance};
use lexperm::cnf::{build_formula, check_symmetry, enumerate_models, local_min_solution};
use lexperm::dcr::{
    coloring_to_dcr, dcr_to_globalmin1, decode_coloring, DcrInstance, Graph, DEFAULT_LCM_CAP,
};
use lexperm::one_perm::local_min_one_perm;
use lexperm::reduction::{condense, expand, GateState, ReducedInstance, CONTROL};
use lexperm::{
    is_local_min, BitString, GeneratorSet, Permutation, PrioritizedBitString, PriorityOrder,
    SearchOptions, StabilizerChain, Status, Word,
};

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

macro_rules! tri {
    ($e:expr) => {
        $e.map_err(|e| e.to_string())?
    };
}

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub limit: Duration,
    run: fn() -> Check,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] C{:<2} {} ({:.2}s, limit {}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion {
        id: 1,
        name: "one-permutation local minimum",
        limit: secs(1),
        run: c1_one_perm,
    },
    Criterion {
        id: 2,
        name: "3-coloring = DCR = zero-prefix orbit element",
        limit: secs(30),
        run: c2_dcr_equivalence,
    },
    Criterion {
        id: 3,
        name: "DCR witnesses decode; orbit scan agrees",
        limit: secs(10),
        run: c3_dcr_decode,
    },
    Criterion {
        id: 4,
        name: "gate gadget encoding",
        limit: secs(1),
        run: c4_gadget,
    },
    Criterion {
        id: 5,
        name: "well-behavedness closure, involutions",
        limit: secs(60),
        run: c5_closure,
    },
    Criterion {
        id: 6,
        name: "minimal circuit orbit",
        limit: secs(10),
        run: c6_orbit,
    },
    Criterion {
        id: 7,
        name: "end-to-end FLIP reduction",
        limit: secs(300),
        run: c7_end_to_end,
    },
    Criterion {
        id: 8,
        name: "tightness embedding round trip",
        limit: secs(10),
        run: c8_embedding,
    },
    Criterion {
        id: 9,
        name: "condensed/expanded local optimality",
        limit: secs(60),
        run: c9_views,
    },
    Criterion {
        id: 10,
        name: "CNF models, symmetries, local minima",
        limit: secs(120),
        run: c10_cnf,
    },
    Criterion {
        id: 11,
        name: "stabilizer chain membership",
        limit: secs(60),
        run: c11_membership,
    },
    Criterion {
        id: 12,
        name: "lexicographic compare = integer cost",
        limit: secs(10),
        run: c12_cost,
    },
];

pub fn run_criterion(c: &Criterion) -> Outcome {
    let start = Instant::now();
    let result = (c.run)();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if passed && elapsed > c.limit {
        passed = false;
        detail = format!("over time limit; {detail}");
    }
    Outcome {
        id: c.id,
        name: c.name,
        passed,
        detail,
        elapsed,
        limit: c.limit,
    }
}

/// Runs every criterion on `jobs` worker threads; results come back in id order.
pub fn run_all(jobs: usize) -> Vec<Outcome> {
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..jobs.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(c) = CRITERIA.get(i) else { break };
                let outcome = run_criterion(c);
                results.lock().unwrap().push(outcome);
            });
        }
    });
    let mut out = results.into_inner().unwrap();
    out.sort_by_key(|o| o.id);
    out
}

fn random_perm(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Permutation::from_zero_based(v).unwrap()
}

fn random_bits(rng: &mut impl Rng, n: usize) -> BitString {
    BitString::from_bools((0..n).map(|_| rng.gen_bool(0.5)).collect())
}

fn random_word(rng: &mut impl Rng, gens: &GeneratorSet, len: usize) -> Word {
    Word::from_letters((0..len).map(|_| gens.names().choose(rng).unwrap().clone()))
}

fn bits_of(v: u64, n: usize) -> BitString {
    BitString::from_bools((0..n).map(|i| v >> i & 1 == 1).collect())
}

fn c1_one_perm() -> Check {
    let x: BitString = tri!("00100001".parse::<BitString>());
    let p = tri!(Permutation::parse_cycles("(1 2 5)(3 4)(7 8)", 8));
    let r = tri!(local_min_one_perm(&x, &p));
    ensure!(r.exponent == 1, "cycle example gave k = {}", r.exponent);
    let gens = tri!(GeneratorSet::from_pairs(8, [("p", p.clone())]));
    ensure!(
        tri!(is_local_min(
            &x,
            &PriorityOrder::identity(8),
            &gens,
            &r.witness
        )),
        "cycle example result is not locally minimal"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..500 {
        let n = rng.gen_range(1..=14);
        let p = random_perm(&mut rng, n);
        let x = random_bits(&mut rng, n);
        let r = tri!(local_min_one_perm(&x, &p));
        let gens = tri!(GeneratorSet::from_pairs(n, [("p", p.clone())]));
        let here = x.permute(&r.witness);
        let next = here.permute(&p);
        let identity: Vec<usize> = (0..n).collect();
        ensure!(
            !oracles::lex_less(&identity, &next, &here),
            "trial {trial}: neighbor improves the result"
        );
        ensure!(
            tri!(is_local_min(
                &x,
                &PriorityOrder::identity(n),
                &gens,
                &r.witness
            )),
            "trial {trial}: is_local_min rejects the result"
        );
        if let Some(l) = r.cycle_id {
            let mut y = x.clone();
            for _ in 0..p.order().unwrap() {
                ensure!(
                    y.as_slice()[..l - 1] == x.as_slice()[..l - 1],
                    "trial {trial}: positions before {l} change along the orbit"
                );
                y = y.permute(&p);
            }
        }
    }
    Ok("cycle example k=1; 500/500 random instances locally minimal".into())
}

fn graphs_for_dcr() -> Vec<Graph> {
    let mut graphs = Vec::new();
    for n in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
            .collect();
        for mask in 0u32..1 << pairs.len() {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            graphs.push(Graph::new(n, edges).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pairs: Vec<(usize, usize)> = (1..=5)
        .flat_map(|u| (u + 1..=5).map(move |v| (u, v)))
        .collect();
    for _ in 0..20 {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        graphs.push(Graph::new(5, edges).unwrap());
    }
    graphs
}

fn c2_dcr_equivalence() -> Check {
    let graphs = graphs_for_dcr();
    let mut colorable = 0;
    for (i, g) in graphs.iter().enumerate() {
        let truth = oracles::three_colorable(g);
        let red = tri!(coloring_to_dcr(g));
        let solvable = tri!(red.instance.solve_bruteforce(DEFAULT_LCM_CAP)).is_some();
        let gm = dcr_to_globalmin1(&red.instance);
        let scan = tri!(gm.zero_prefix_witness(DEFAULT_LCM_CAP)).is_some();
        let via_min = tri!(gm.solvable_by_orbit_min(DEFAULT_LCM_CAP));
        ensure!(
            truth == solvable && solvable == scan && scan == via_min,
            "graph {i}: colorable={truth} dcr={solvable} scan={scan} orbit-min={via_min}"
        );
        colorable += truth as usize;
    }
    let k3 = tri!(coloring_to_dcr(&Graph::complete(3)));
    ensure!(
        tri!(k3.instance.solve_bruteforce(DEFAULT_LCM_CAP)).is_some(),
        "K3 unsolvable"
    );
    let k4 = tri!(coloring_to_dcr(&Graph::complete(4)));
    ensure!(
        tri!(k4.instance.solve_bruteforce(DEFAULT_LCM_CAP)).is_none(),
        "K4 solvable"
    );
    Ok(format!(
        "{} graphs agree ({colorable} colorable); K3 sat, K4 unsat",
        graphs.len()
    ))
}

fn c3_dcr_decode() -> Check {
    let mut decoded = 0;
    for (i, g) in graphs_for_dcr().iter().enumerate() {
        let red = tri!(coloring_to_dcr(g));
        if let Some(t) = tri!(red.instance.solve_bruteforce(DEFAULT_LCM_CAP)) {
            let colors = decode_coloring(t, &red.primes);
            ensure!(
                g.edges().all(|(u, v)| colors[u - 1] != colors[v - 1]),
                "graph {i}: witness {t} is not a proper coloring"
            );
            decoded += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..200 {
        let l = rng.gen_range(1..=4);
        let pairs: Vec<(u64, Vec<u64>)> = (0..l)
            .map(|_| {
                let m = rng.gen_range(1..=7u64);
                (m, (0..m).filter(|_| rng.gen_bool(0.5)).collect())
            })
            .collect();
        let inst = tri!(DcrInstance::from_pairs(pairs.clone()));
        let lcm = pairs.iter().fold(1u64, |a, (m, _)| {
            let mut x = a;
            while x % m != 0 {
                x += a;
            }
            x
        });
        let truth = (0..lcm).find(|t| pairs.iter().all(|(m, f)| !f.contains(&(t % m))));
        let solved = tri!(inst.solve_bruteforce(DEFAULT_LCM_CAP));
        let scan = tri!(dcr_to_globalmin1(&inst).zero_prefix_witness(DEFAULT_LCM_CAP));
        ensure!(
            truth == solved && solved == scan,
            "instance {trial}: oracle {truth:?}, solver {solved:?}, orbit scan {scan:?}"
        );
    }
    Ok(format!(
        "{decoded} witnesses proper; 200/200 random instances agree"
    ))
}

fn c4_gadget() -> Check {
    for code in 0..8u8 {
        let s = GateState::new(code & 4 != 0, code & 2 != 0, code & 1 != 0);
        let labels = s.encode();
        let ones = labels.iter().filter(|&&v| v).count();
        ensure!(ones == 1 || ones == 3, "{s:?} encodes to {ones} ones");
        ensure!(
            GateState::decode(labels) == Some(s),
            "{s:?} does not round trip"
        );
        let correct = s.b == !(s.a1 && s.a2);
        ensure!(
            correct == !labels[CONTROL],
            "{s:?}: control label disagrees with correctness"
        );
    }
    Ok("8/8 states".into())
}

fn random_flip_instance(
    rng: &mut impl Rng,
    max_n: usize,
    max_gates: usize,
    max_m: usize,
) -> FlipInstance {
    let n = rng.gen_range(1..=max_n);
    let g = rng.gen_range(1..=max_gates);
    let m = rng.gen_range(1..=g.min(max_m));
    random_circuit(rng, n, g, m).unwrap()
}

fn c5_closure() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0usize;
    for trial in 0..100 {
        let c = random_flip_instance(&mut rng, 4, 8, 3);
        let inst = ReducedInstance::build(&c);
        let gens = inst.generators();
        for (name, p) in gens.iter() {
            ensure!(
                p.pow(2).is_identity(),
                "circuit {trial}: {name} is not an involution"
            );
        }
        ensure!(
            inst.is_well_behaved(inst.start()),
            "circuit {trial}: start is not well-behaved"
        );
        for _ in 0..100 {
            let len = rng.gen_range(1..=20);
            let w = random_word(&mut rng, gens, len);
            let mut y = inst.start().clone();
            for letter in w.letters() {
                y = y.permute(gens.get(letter).unwrap());
                if let Some(v) = tri!(inst.check_well_behaved(&y)) {
                    return Err(format!("circuit {trial}, word {w}: {v}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} reached assignments well-behaved over 100 circuits"
    ))
}

fn c6_orbit() -> Check {
    let c = tri!(FlipInstance::parse_netlist(
        "inputs 1\ngate 1 NAND x1 x1\noutputs g1\n"
    ));
    let inst = ReducedInstance::build(&c);
    let orbit = tri!(inst.generators().orbit_of_string(inst.start(), 1000));
    ensure!(orbit.len() == 8, "orbit has {} elements", orbit.len());
    // Well-behaved set: all inputs x and all gate outputs per copy.
    let mut set = BTreeSet::new();
    for x in 0..2u64 {
        for b in 0..4u64 {
            let outputs = vec![vec![b & 1 == 1], vec![b & 2 != 0]];
            set.insert(expand(&tri!(inst.assignment_for(&bits_of(x, 1), &outputs))));
        }
    }
    ensure!(orbit == set, "orbit differs from the well-behaved set");
    ensure!(
        orbit.iter().all(|y| inst.is_well_behaved(y)),
        "orbit member not well-behaved"
    );
    Ok("orbit = well-behaved set, 8 elements".into())
}

fn c7_end_to_end() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = SearchOptions {
        max_steps: 100_000,
        ..SearchOptions::default()
    };
    let mut total_steps = 0;
    let mut longest = 0;
    for trial in 0..100 {
        let c = random_flip_instance(&mut rng, 4, 8, 3);
        let inst = ReducedInstance::build(&c);
        let s = tri!(inst.search(&Word::new(), &opts));
        ensure!(
            s.status == Status::LocalOpt,
            "circuit {trial}: status {}",
            s.status
        );
        let by_rank = inst.order().ranks();
        for (k, pair) in s.trace.windows(2).enumerate() {
            ensure!(
                oracles::lex_less(by_rank, &pair[1], &pair[0]),
                "circuit {trial}: step {k} does not decrease"
            );
        }
        let x = tri!(inst.map_solution(&s.word));
        ensure!(
            tri!(c.flip_local_check(&x)).is_none() && oracles::is_flip_local_min(&c, &x),
            "circuit {trial}: endpoint input {x} is not a FLIP local minimum"
        );
        total_steps += s.steps;
        longest = longest.max(s.steps);
    }
    Ok(format!(
        "100/100 LocalOpt; {total_steps} steps total, longest {longest}"
    ))
}

fn c8_embedding() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut count = 0;
    for n in 1..=4 {
        for _ in 0..3 {
            let g = rng.gen_range(1..=8);
            let c = tri!(random_circuit(&mut rng, n, g, 1));
            let inst = ReducedInstance::build(&c);
            for v in 0..1u64 << n {
                let s = bits_of(v, n);
                let w = tri!(inst.embed_flip_solution(&s));
                ensure!(w.len() <= n, "n={n}: word for {s} has length {}", w.len());
                let back = tri!(inst.map_solution(&w));
                ensure!(back == s, "n={n}: {s} maps back to {back}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} solutions round trip"))
}

fn c9_views() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut minima = 0;
    for sample in 0..1000 {
        let c = random_flip_instance(&mut rng, 3, 6, 2);
        let inst = ReducedInstance::build(&c);
        // Mix random words with search endpoints so both outcomes are exercised.
        let w = if sample % 4 == 0 {
            tri!(inst.search(&Word::new(), &SearchOptions::default())).word
        } else {
            let len = rng.gen_range(0..=12);
            random_word(&mut rng, inst.generators(), len)
        };
        let condensed = tri!(inst.is_local_min_condensed(&w));
        let expanded = tri!(inst.is_local_min_expanded(&w));
        ensure!(
            condensed == expanded,
            "sample {sample}: condensed {condensed}, expanded {expanded}"
        );
        let y = tri!(inst.string_for(&w));
        ensure!(
            expand(&tri!(condense(&y))) == y,
            "sample {sample}: twin round trip failed"
        );
        minima += condensed as usize;
    }
    Ok(format!("1000/1000 agree ({minima} local minima)"))
}

fn c10_cnf() -> Check {
    let minimal = tri!(FlipInstance::parse_netlist(
        "inputs 1\ngate 1 NAND x1 x1\noutputs g1\n"
    ));
    let f = build_formula(&minimal);
    ensure!(
        f.cnf.is_satisfied_by(&f.start),
        "start assignment does not satisfy F"
    );
    let models = enumerate_models(&f.cnf, 1 << 24);
    let inst = ReducedInstance::build(&minimal);
    let mut projected = BTreeSet::new();
    for m in &models {
        let y = tri!(f.project(m));
        ensure!(inst.is_well_behaved(&y), "model {m} is not well-behaved");
        projected.insert(y);
    }
    let orbit = tri!(inst.generators().orbit_of_string(inst.start(), 1000));
    ensure!(
        models.len() == 8 && projected == orbit,
        "minimal circuit has {} models",
        models.len()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for trial in 0..50 {
        let c = random_flip_instance(&mut rng, 4, 8, 3);
        let f = build_formula(&c);
        ensure!(
            f.cnf.is_satisfied_by(&f.start),
            "circuit {trial}: start unsatisfying"
        );
        for (name, p) in f.symmetries.iter() {
            ensure!(
                tri!(check_symmetry(&f.cnf, p)),
                "circuit {trial}: {name} is not a symmetry"
            );
        }
    }
    for trial in 0..50 {
        let c = random_flip_instance(&mut rng, 3, 6, 3);
        let f = build_formula(&c);
        let s = tri!(local_min_solution(
            &f.cnf,
            &f.symmetries,
            &f.priority,
            &f.start,
            &SearchOptions::default()
        ));
        ensure!(
            s.status == Status::LocalOpt,
            "circuit {trial}: status {}",
            s.status
        );
        ensure!(
            f.cnf.is_satisfied_by(&s.string),
            "circuit {trial}: endpoint is not a model"
        );
        let x = f.decode_input(&s.string);
        ensure!(
            oracles::is_flip_local_min(&c, &x),
            "circuit {trial}: endpoint input {x} is not a FLIP local minimum"
        );
    }
    Ok(
        "alpha satisfies F; 8 models = well-behaved set; 50 symmetry checks; 50/50 local minima"
            .into(),
    )
}

fn c11_membership() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..200 {
        let n = rng.gen_range(1..=7);
        let k = rng.gen_range(1..=3);
        let gens: Vec<Permutation> = (0..k)
            .map(|_| {
                if rng.gen_bool(0.5) && n >= 2 {
                    let a = rng.gen_range(0..n);
                    let b = (a + rng.gen_range(1..n)) % n;
                    Permutation::transposition(n, a, b)
                } else {
                    random_perm(&mut rng, n)
                }
            })
            .collect();
        let images: Vec<Vec<usize>> = gens.iter().map(|p| p.images().to_vec()).collect();
        let closure = oracles::group_closure(n, &images);
        let chain = StabilizerChain::new(n, &gens);
        ensure!(
            chain.order() == Some(closure.len() as u128),
            "set {trial}: order {:?} vs closure {}",
            chain.order(),
            closure.len()
        );
        for p in oracles::all_permutations(n) {
            let member = chain.contains(&Permutation::from_zero_based(p.clone()).unwrap());
            ensure!(
                member == closure.contains(&p),
                "set {trial}: membership of {p:?} disagrees"
            );
        }
    }
    Ok("200/200 generator sets agree on all of S_n".into())
}

fn c12_cost() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..10_000 {
        let n = rng.gen_range(1..=20);
        let mut ranks: Vec<usize> = (0..n).collect();
        ranks.shuffle(&mut rng);
        let order = tri!(PriorityOrder::from_ranks(ranks));
        let a = tri!(PrioritizedBitString::new(
            random_bits(&mut rng, n),
            order.clone()
        ));
        let b = tri!(PrioritizedBitString::new(random_bits(&mut rng, n), order));
        let by_compare = tri!(a.compare(&b.bits));
        let by_cost = tri!(a.cost_integer::<u64>()).cmp(&tri!(b.cost_integer::<u64>()));
        ensure!(
            by_compare == by_cost,
            "pair {trial}: compare {by_compare:?}, cost {by_cost:?}"
        );
    }
    Ok("10000/10000 pairs agree".into())
}
