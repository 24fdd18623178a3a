//! Local and global minima of `x ∘ π^t` over the cyclic group of one permutation.
//!
//! The local search works on the cycle structure: a cycle is *interesting* when `x`
//! is not constant on it. Let `l` be the least position lying on an interesting
//! cycle. Every position below `l` sits on a constant cycle and never changes, so
//! the comparison between `x ∘ π^k` and `x ∘ π^(k+1)` is decided at `l` as soon as
//! `x(π^k(l)) = 0` and `x(π^(k+1)(l)) = 1`.

use crate::bitlex::{BitString, PrioritizedBitString};
use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnePermResult {
    pub exponent: u64,
    /// `π^exponent`.
    pub witness: Permutation,
    /// Smallest member (1-based) of the interesting cycle that decided the exponent,
    /// or `None` when every cycle is constant.
    pub cycle_id: Option<usize>,
}

impl OnePermResult {
    pub fn string(&self, x: &BitString) -> BitString {
        x.permute(&self.witness)
    }
}

/// Local minimum of `x ∘ π^k` under the identity priority order.
///
/// Among the boundary pairs `(i, π(i))` with `x_i = 0` and `x_π(i) = 1` on the
/// deciding cycle, the one reached first from `l` is used, so `k` is the smallest
/// exponent with `x(π^k(l)) = 0` and `x(π^(k+1)(l)) = 1`.
pub fn local_min_one_perm(x: &BitString, p: &Permutation) -> Result<OnePermResult> {
    if x.len() != p.degree() {
        return Err(Error::DegreeMismatch {
            expected: p.degree(),
            found: x.len(),
        });
    }
    let interesting = p.cycles().into_iter().find(|cycle| {
        let first = x.get(cycle[0] - 1);
        cycle.iter().any(|&v| x.get(v - 1) != first)
    });
    let Some(cycle) = interesting else {
        return Ok(OnePermResult {
            exponent: 0,
            witness: Permutation::identity(p.degree()),
            cycle_id: None,
        });
    };
    let l = cycle[0] - 1;
    let mut i = l;
    let mut k = 0u64;
    loop {
        let j = p.apply(i);
        if !x.get(i) && x.get(j) {
            break;
        }
        i = j;
        k += 1;
        debug_assert!(
            (k as usize) < cycle.len(),
            "non-constant cycle has a 0→1 boundary"
        );
    }
    Ok(OnePermResult {
        exponent: k,
        witness: p.pow(k),
        cycle_id: Some(l + 1),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitMin {
    pub exponent: u64,
    pub string: BitString,
}

/// Exhaustive global minimum over `0 ≤ t < order(π)`; ties go to the smallest `t`.
pub fn orbit_min_one_perm(x: &PrioritizedBitString, p: &Permutation, cap: u64) -> Result<OrbitMin> {
    if x.len() != p.degree() {
        return Err(Error::DegreeMismatch {
            expected: p.degree(),
            found: x.len(),
        });
    }
    let order = match p.order() {
        Some(o) if o <= cap => o,
        _ => return Err(Error::OrderCapExceeded { cap }),
    };
    let mut best = OrbitMin {
        exponent: 0,
        string: x.bits.clone(),
    };
    let mut current = x.bits.clone();
    for t in 1..order {
        current = current.permute(p);
        if x.order.compare_unchecked(&current, &best.string).is_lt() {
            best = OrbitMin {
                exponent: t,
                string: current.clone(),
            };
        }
    }
    Ok(best)
}
