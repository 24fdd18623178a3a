//! Disjunctive Chinese Remainder (DCR): find `t` with `t mod m_i ∉ S_i` for every
//! constraint. Includes the reduction from graph 3-coloring and the reduction to a
//! global minimum under a single permutation.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use crate::bitlex::{BitString, PrioritizedBitString, PriorityOrder};
use crate::error::{Error, Result};
use crate::one_perm::orbit_min_one_perm;
use crate::perm::Permutation;

pub const DEFAULT_LCM_CAP: u64 = 100_000_000;
pub const DEFAULT_PRIME_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcrConstraint {
    pub modulus: u64,
    pub forbidden: BTreeSet<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DcrInstance {
    constraints: Vec<DcrConstraint>,
}

impl DcrInstance {
    pub fn new(constraints: Vec<DcrConstraint>) -> Result<Self> {
        for c in &constraints {
            if c.modulus == 0 {
                return Err(Error::InvalidInstance("modulus must be positive".into()));
            }
            if let Some(&s) = c.forbidden.iter().next_back() {
                if s >= c.modulus {
                    return Err(Error::InvalidInstance(format!(
                        "forbidden remainder {s} not below modulus {}",
                        c.modulus
                    )));
                }
            }
        }
        Ok(DcrInstance { constraints })
    }

    /// Convenience constructor from `(modulus, forbidden)` pairs.
    pub fn from_pairs<I, F>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, F)>,
        F: IntoIterator<Item = u64>,
    {
        Self::new(
            pairs
                .into_iter()
                .map(|(modulus, f)| DcrConstraint {
                    modulus,
                    forbidden: f.into_iter().collect(),
                })
                .collect(),
        )
    }

    pub fn constraints(&self) -> &[DcrConstraint] {
        &self.constraints
    }

    pub fn lcm(&self) -> Option<u64> {
        self.constraints.iter().try_fold(1u64, |acc, c| {
            let g = acc.gcd(&c.modulus);
            (acc / g).checked_mul(c.modulus)
        })
    }

    pub fn is_solution(&self, t: u64) -> bool {
        self.constraints
            .iter()
            .all(|c| !c.forbidden.contains(&(t % c.modulus)))
    }

    /// Smallest `t` in `[0, lcm)` avoiding every forbidden residue. Solutions are
    /// periodic with period `lcm`, so `None` means the instance is unsolvable.
    pub fn solve_bruteforce(&self, cap: u64) -> Result<Option<u64>> {
        let lcm = match self.lcm() {
            Some(l) if l <= cap => l,
            _ => return Err(Error::LcmCapExceeded { cap }),
        };
        Ok((0..lcm).find(|&t| self.is_solution(t)))
    }

    /// One line per constraint: `m: s1 s2 …`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut constraints = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (m, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(lineno + 1, "expected `m: s1 s2 ...`"))?;
            let num = |t: &str| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::parse(lineno + 1, format!("bad number `{t}`")))
            };
            let modulus = num(m)?;
            let forbidden = rest
                .split_whitespace()
                .map(num)
                .collect::<Result<BTreeSet<u64>>>()?;
            constraints.push(DcrConstraint { modulus, forbidden });
        }
        Self::new(constraints)
    }
}

impl fmt::Display for DcrInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.constraints {
            write!(f, "{}:", c.modulus)?;
            for s in &c.forbidden {
                write!(f, " {s}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Simple undirected graph on vertices `1..=n`; edges stored as `(u, v)` with
/// `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(Error::IndexOutOfRange {
                        index: w,
                        degree: n,
                    });
                }
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop at vertex {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate edge {{{u}, {v}}}"
                )));
            }
        }
        Ok(Graph { n, edges: set })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// DIMACS-style graph: `c` comments, a `p edge n m` header and `e u v` lines.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let toks: Vec<&str> = raw.split_whitespace().collect();
            let num = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| Error::parse(lineno + 1, format!("bad number `{t}`")))
            };
            match toks.as_slice() {
                [] | ["c", ..] => {}
                ["p", _, n, m] => {
                    if header.is_some() {
                        return Err(Error::parse(lineno + 1, "duplicate header"));
                    }
                    header = Some((num(n)?, num(m)?));
                }
                ["e", u, v] => {
                    if header.is_none() {
                        return Err(Error::parse(lineno + 1, "edge before header"));
                    }
                    edges.push((num(u)?, num(v)?));
                }
                _ => return Err(Error::parse(lineno + 1, format!("unexpected line `{raw}`"))),
            }
        }
        let (n, m) = header.ok_or_else(|| Error::parse(0, "missing `p edge n m` header"))?;
        if m != edges.len() {
            return Err(Error::parse(
                0,
                format!("header announces {m} edges, found {}", edges.len()),
            ));
        }
        Graph::new(n, edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p edge {} {}", self.n, self.edges.len())?;
        for (u, v) in &self.edges {
            writeln!(f, "e {u} {v}")?;
        }
        Ok(())
    }
}

/// The first `count` primes greater than 2, by trial division.
pub fn odd_primes(count: usize, cap: u64) -> Result<Vec<u64>> {
    let mut primes = Vec::with_capacity(count);
    let mut candidate = 3u64;
    while primes.len() < count {
        if candidate > cap {
            return Err(Error::PrimeCapExceeded { cap });
        }
        let is_prime = (3..)
            .step_by(2)
            .take_while(|d| d * d <= candidate)
            .all(|d| !candidate.is_multiple_of(d));
        if is_prime {
            primes.push(candidate);
        }
        candidate += 2;
    }
    Ok(primes)
}

/// The unique `c ∈ [0, p·q)` with `c ≡ a (mod p)` and `c ≡ b (mod q)` for coprime
/// `p`, `q`.
pub fn crt_pair(a: u64, p: u64, b: u64, q: u64) -> u64 {
    let eg = (p as i128).extended_gcd(&(q as i128));
    debug_assert_eq!(eg.gcd, 1);
    let m = (p * q) as i128;
    // a + p·k with k ≡ (b - a)·p^-1 (mod q)
    let k = ((b as i128 - a as i128) * eg.x).rem_euclid(q as i128);
    ((a as i128 + p as i128 * k).rem_euclid(m)) as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "r",
            Color::Green => "g",
            Color::Blue => "b",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringReduction {
    pub instance: DcrInstance,
    /// `primes[v-1]` is the prime attached to vertex `v`.
    pub primes: Vec<u64>,
}

/// One constraint per edge `{u, v}` with modulus `p_u·p_v`, forbidding the residues
/// whose pair `(c mod p_u, c mod p_v)` is `(0,0)`, `(1,1)` or has both entries `≥ 2`.
pub fn coloring_to_dcr(g: &Graph) -> Result<ColoringReduction> {
    let primes = odd_primes(g.vertex_count(), DEFAULT_PRIME_CAP)?;
    let constraints = g
        .edges()
        .map(|(u, v)| {
            let (pu, pv) = (primes[u - 1], primes[v - 1]);
            let mut forbidden = BTreeSet::new();
            forbidden.insert(crt_pair(0, pu, 0, pv));
            forbidden.insert(crt_pair(1, pu, 1, pv));
            for a in 2..pu {
                for b in 2..pv {
                    forbidden.insert(crt_pair(a, pu, b, pv));
                }
            }
            DcrConstraint {
                modulus: pu * pv,
                forbidden,
            }
        })
        .collect();
    Ok(ColoringReduction {
        instance: DcrInstance::new(constraints)?,
        primes,
    })
}

pub fn decode_coloring(t: u64, primes: &[u64]) -> Vec<Color> {
    primes
        .iter()
        .map(|&p| match t % p {
            0 => Color::Red,
            1 => Color::Green,
            _ => Color::Blue,
        })
        .collect()
}

/// Single-permutation instance built from a DCR instance.
///
/// Constraint `i` owns a cycle of `m_i` consecutive positions labeled `0..m_i`. The
/// cycle maps label `a` to label `a-1`, so `x ∘ π^t` carries the single 1 of that
/// cycle at label `t mod m_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalMinReduction {
    pub string: BitString,
    pub perm: Permutation,
    pub order: PriorityOrder,
    /// 0-based positions whose labels are forbidden, in priority order.
    pub forbidden: Vec<usize>,
    /// First position of each constraint's cycle.
    pub offsets: Vec<usize>,
}

pub fn dcr_to_globalmin1(inst: &DcrInstance) -> GlobalMinReduction {
    let total: usize = inst.constraints().iter().map(|c| c.modulus as usize).sum();
    let mut image = vec![0usize; total];
    let mut string = BitString::zeros(total);
    let mut offsets = Vec::new();
    let mut forbidden = Vec::new();
    let mut allowed = Vec::new();
    let mut offset = 0;
    for c in inst.constraints() {
        let m = c.modulus as usize;
        offsets.push(offset);
        string.set(offset, true);
        for label in 0..m {
            image[offset + label] = offset + (label + m - 1) % m;
            if c.forbidden.contains(&(label as u64)) {
                forbidden.push(offset + label);
            } else {
                allowed.push(offset + label);
            }
        }
        offset += m;
    }
    let ranks = forbidden.iter().chain(&allowed).copied().collect();
    GlobalMinReduction {
        string,
        perm: Permutation::from_zero_based(image).expect("disjoint cycles"),
        order: PriorityOrder::from_ranks(ranks).expect("F and complement partition"),
        forbidden,
        offsets,
    }
}

impl GlobalMinReduction {
    pub fn zero_on_forbidden(&self, y: &BitString) -> bool {
        self.forbidden.iter().all(|&p| !y.get(p))
    }

    /// Decides DCR through the global minimum of the orbit: solvable iff the
    /// lexicographically least orbit element is zero on the forbidden prefix.
    pub fn solvable_by_orbit_min(&self, cap: u64) -> Result<bool> {
        let x = PrioritizedBitString::new(self.string.clone(), self.order.clone())?;
        let best = orbit_min_one_perm(&x, &self.perm, cap)?;
        Ok(self.zero_on_forbidden(&best.string))
    }

    /// Smallest `t` whose orbit element `x ∘ π^t` is zero on every forbidden
    /// position.
    pub fn zero_prefix_witness(&self, cap: u64) -> Result<Option<u64>> {
        let order = match self.perm.order() {
            Some(o) if o <= cap => o,
            _ => return Err(Error::OrderCapExceeded { cap }),
        };
        let mut y = self.string.clone();
        for t in 0..order {
            if self.zero_on_forbidden(&y) {
                return Ok(Some(t));
            }
            y = y.permute(&self.perm);
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn three_colorable(g: &Graph) -> bool {
        let n = g.vertex_count();
        (0..3usize.pow(n as u32)).any(|mut code| {
            let colors: Vec<usize> = (0..n)
                .map(|_| {
                    let c = code % 3;
                    code /= 3;
                    c
                })
                .collect();
            g.edges().all(|(u, v)| colors[u - 1] != colors[v - 1])
        })
    }

    #[test]
    fn solve_examples() {
        let empty = DcrInstance::from_pairs([(5, vec![]), (7, vec![])]).unwrap();
        assert_eq!(empty.solve_bruteforce(100).unwrap(), Some(0));
        let inst = DcrInstance::from_pairs([(2, vec![0]), (3, vec![1])]).unwrap();
        assert_eq!(inst.solve_bruteforce(100).unwrap(), Some(3));
        assert_eq!(
            inst.solve_bruteforce(5),
            Err(Error::LcmCapExceeded { cap: 5 })
        );
        let k4 = coloring_to_dcr(&Graph::complete(4)).unwrap();
        assert_eq!(k4.instance.lcm(), Some(3 * 5 * 7 * 11));
        assert_eq!(k4.instance.solve_bruteforce(DEFAULT_LCM_CAP).unwrap(), None);
        let k3 = coloring_to_dcr(&Graph::complete(3)).unwrap();
        assert!(k3
            .instance
            .solve_bruteforce(DEFAULT_LCM_CAP)
            .unwrap()
            .is_some());
    }

    #[test]
    fn primes_and_crt() {
        assert_eq!(odd_primes(6, 100).unwrap(), vec![3, 5, 7, 11, 13, 17]);
        assert!(odd_primes(10, 20).is_err());
        for (p, q) in [(3, 5), (5, 7), (7, 11), (11, 13)] {
            for c in 0..p * q {
                assert_eq!(crt_pair(c % p, p, c % q, q), c);
            }
        }
    }

    #[test]
    fn single_edge_forbidden_set() {
        let red = coloring_to_dcr(&Graph::new(2, [(1, 2)]).unwrap()).unwrap();
        let c = &red.instance.constraints()[0];
        assert_eq!(c.modulus, 15);
        // Oracle: enumerate residues and test the pair condition directly.
        let expected: BTreeSet<u64> = (0..15)
            .filter(|c| {
                let (a, b) = (c % 3, c % 5);
                (a, b) == (0, 0) || (a, b) == (1, 1) || (a >= 2 && b >= 2)
            })
            .collect();
        assert_eq!(c.forbidden, expected);
        assert_eq!(c.forbidden, BTreeSet::from([0, 1, 2, 8, 14]));
    }

    #[test]
    fn edgeless_graph() {
        let red = coloring_to_dcr(&Graph::new(3, []).unwrap()).unwrap();
        assert!(red.instance.constraints().is_empty());
        assert_eq!(red.instance.solve_bruteforce(10).unwrap(), Some(0));
    }

    #[test]
    fn decode_examples() {
        let primes = odd_primes(4, 100).unwrap();
        assert!(decode_coloring(0, &primes).iter().all(|&c| c == Color::Red));
        assert!(decode_coloring(1, &primes)
            .iter()
            .all(|&c| c == Color::Green));
        let k3 = Graph::complete(3);
        let red = coloring_to_dcr(&k3).unwrap();
        let t = red
            .instance
            .solve_bruteforce(DEFAULT_LCM_CAP)
            .unwrap()
            .unwrap();
        let colors = decode_coloring(t, &red.primes);
        assert!(k3.edges().all(|(u, v)| colors[u - 1] != colors[v - 1]));
    }

    #[test]
    fn globalmin_examples() {
        let inst = DcrInstance::from_pairs([(3, vec![1])]).unwrap();
        let red = dcr_to_globalmin1(&inst);
        assert_eq!(red.string.to_string(), "100");
        assert_eq!(red.forbidden, vec![1]);
        assert!(red.zero_on_forbidden(&red.string));
        assert_eq!(red.zero_prefix_witness(100).unwrap(), Some(0));
        assert!(red.solvable_by_orbit_min(100).unwrap());

        let inst = DcrInstance::from_pairs([(2, vec![0]), (3, vec![1])]).unwrap();
        let red = dcr_to_globalmin1(&inst);
        assert_eq!(red.order.ranks()[..2], [0, 3]);
        assert_eq!(red.zero_prefix_witness(100).unwrap(), Some(3));
        assert!(red.solvable_by_orbit_min(100).unwrap());

        let empty = DcrInstance::from_pairs([(4, vec![])]).unwrap();
        let red = dcr_to_globalmin1(&empty);
        assert!(red.forbidden.is_empty());
        assert_eq!(red.zero_prefix_witness(100).unwrap(), Some(0));
    }

    #[test]
    fn orbit_carries_the_one_at_label_t() {
        let inst = DcrInstance::from_pairs([(4, vec![]), (3, vec![]), (5, vec![])]).unwrap();
        let red = dcr_to_globalmin1(&inst);
        for t in 0..60u64 {
            let y = red.string.permute(&red.perm.pow(t));
            for (c, &off) in inst.constraints().iter().zip(&red.offsets) {
                let m = c.modulus as usize;
                let ones: Vec<usize> = (0..m).filter(|&a| y.get(off + a)).collect();
                assert_eq!(ones, vec![(t % c.modulus) as usize]);
            }
        }
    }

    #[test]
    fn small_graphs_three_colorability_matches_both_routes() {
        for n in 1..=4usize {
            let pairs: Vec<(usize, usize)> = (1..=n)
                .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
                .collect();
            for mask in 0u32..(1 << pairs.len()) {
                let edges = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e);
                let g = Graph::new(n, edges).unwrap();
                let red = coloring_to_dcr(&g).unwrap();
                let sol = red.instance.solve_bruteforce(DEFAULT_LCM_CAP).unwrap();
                assert_eq!(sol.is_some(), three_colorable(&g));
                let gm = dcr_to_globalmin1(&red.instance);
                assert_eq!(
                    gm.solvable_by_orbit_min(DEFAULT_LCM_CAP).unwrap(),
                    sol.is_some()
                );
                if let Some(t) = sol {
                    let colors = decode_coloring(t, &red.primes);
                    assert!(g.edges().all(|(u, v)| colors[u - 1] != colors[v - 1]));
                }
            }
        }
    }

    #[test]
    fn random_instances_agree_with_orbit_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let l = rng.gen_range(1..=4);
            let inst = DcrInstance::from_pairs((0..l).map(|_| {
                let m = rng.gen_range(1..=7u64);
                let f: Vec<u64> = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
                (m, f)
            }))
            .unwrap();
            let t = inst.solve_bruteforce(DEFAULT_LCM_CAP).unwrap();
            let red = dcr_to_globalmin1(&inst);
            assert_eq!(red.zero_prefix_witness(DEFAULT_LCM_CAP).unwrap(), t);
            assert_eq!(
                red.solvable_by_orbit_min(DEFAULT_LCM_CAP).unwrap(),
                t.is_some()
            );
        }
    }

    #[test]
    fn text_formats() {
        let inst = DcrInstance::parse("# demo\n2: 0\n3: 1\n\n5:\n").unwrap();
        assert_eq!(inst.constraints().len(), 3);
        assert_eq!(DcrInstance::parse(&inst.to_string()).unwrap(), inst);
        assert!(DcrInstance::parse("3: 3").is_err());
        assert!(DcrInstance::parse("x: 1").is_err());

        let g = Graph::parse_dimacs("c k3\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g, Graph::complete(3));
        assert_eq!(Graph::parse_dimacs(&g.to_string()).unwrap(), g);
        assert!(Graph::parse_dimacs("p edge 2 1\ne 1 1\n").is_err());
        assert!(Graph::parse_dimacs("p edge 2 2\ne 1 2\ne 2 1\n").is_err());
        assert!(Graph::parse_dimacs("p edge 2 2\ne 1 2\n").is_err());
    }
}
