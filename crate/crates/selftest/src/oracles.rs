//! Brute-force reference implementations. None of these call into the library's
//! algorithms; they only share its plain data types.

use std::collections::{HashSet, VecDeque};

use lexperm::circuit::{FlipInstance, Source};
use lexperm::dcr::Graph;
use lexperm::BitString;

/// 3-colorability by trying all `3^n` colorings.
pub fn three_colorable(g: &Graph) -> bool {
    let n = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    (0..3usize.pow(n as u32)).any(|mut code| {
        let mut colors = vec![0; n];
        for c in colors.iter_mut() {
            *c = code % 3;
            code /= 3;
        }
        edges.iter().all(|&(u, v)| colors[u - 1] != colors[v - 1])
    })
}

/// All elements of the group generated by `gens` (0-based image vectors), by
/// breadth-first closure under right multiplication.
pub fn group_closure(degree: usize, gens: &[Vec<usize>]) -> HashSet<Vec<usize>> {
    let identity: Vec<usize> = (0..degree).collect();
    let mut seen = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<usize> = g.iter().map(|&i| p[i]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen
}

/// Every permutation of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Circuit value of one source, recursively from the inputs.
pub fn eval_source(c: &FlipInstance, x: &[bool], src: Source) -> bool {
    match src {
        Source::Input(i) => x[i],
        Source::Gate(g) => {
            let [a, b] = c.gates()[g].inputs;
            !(eval_source(c, x, a) && eval_source(c, x, b))
        }
    }
}

/// Output vector as an integer, first output most significant.
pub fn circuit_cost(c: &FlipInstance, x: &[bool]) -> u64 {
    c.outputs().iter().fold(0, |acc, &g| {
        2 * acc + eval_source(c, x, Source::Gate(g)) as u64
    })
}

/// Whether no single bit flip lowers the circuit's output value.
pub fn is_flip_local_min(c: &FlipInstance, x: &BitString) -> bool {
    let x: Vec<bool> = x.as_slice().to_vec();
    let here = circuit_cost(c, &x);
    (0..x.len()).all(|j| {
        let mut y = x.clone();
        y[j] = !y[j];
        circuit_cost(c, &y) >= here
    })
}

/// First-difference comparison of `a` and `b` when positions are read in the
/// order `by_rank`; `true` when `a` is strictly smaller.
pub fn lex_less(by_rank: &[usize], a: &BitString, b: &BitString) -> bool {
    by_rank
        .iter()
        .find(|&&p| a.get(p) != b.get(p))
        .is_some_and(|&p| !a.get(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_and_closure() {
        assert_eq!(all_permutations(4).len(), 24);
        assert_eq!(all_permutations(0).len(), 1);
        let cyc = vec![1, 2, 0];
        assert_eq!(group_closure(3, &[cyc]).len(), 3);
        assert_eq!(
            group_closure(4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]]).len(),
            24
        );
    }

    #[test]
    fn coloring_oracle() {
        assert!(three_colorable(&Graph::complete(3)));
        assert!(!three_colorable(&Graph::complete(4)));
    }
}
