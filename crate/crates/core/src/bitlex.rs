//! Bitstrings, priority orders over positions and the lexicographic cost.
//!
//! A [`PriorityOrder`] lists positions from most to least significant. Two strings
//! are compared at the first position in that list where they differ; `0` beats `1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{PrimInt, Unsigned};

use crate::error::{Error, Result};
use crate::perm::{GeneratorSet, Permutation};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString {
            bits: vec![false; len],
        }
    }

    /// The unit vector with a single one at 0-based position `i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut s = Self::zeros(len);
        s.bits[i] = true;
        s
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        self.bits[i] = v;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Bitwise complement. Minimizing the complement maximizes the original string.
    pub fn complement(&self) -> Self {
        BitString {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn xor(&self, other: &BitString) -> Self {
        BitString {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// `(x ∘ p)(i) = x(p(i))`. Panics if the degree differs from the length.
    pub fn permute(&self, p: &Permutation) -> Self {
        assert_eq!(self.len(), p.degree(), "string/permutation size mismatch");
        BitString {
            bits: p.images().iter().map(|&j| self.bits[j]).collect(),
        }
    }

    /// `x ∘ (g ∘ p)` evaluated without building the composition.
    pub(crate) fn permute_pair(&self, g: &Permutation, p: &Permutation) -> Self {
        BitString {
            bits: p.images().iter().map(|&j| self.bits[g.apply(j)]).collect(),
        }
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(1, format!("invalid bit `{other}`"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(BitString { bits })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `rank[r]` is the position inspected at importance level `r` (level 0 is most
/// significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PriorityOrder {
    rank: Vec<usize>,
    level: Vec<usize>,
}

impl PriorityOrder {
    pub fn identity(len: usize) -> Self {
        PriorityOrder {
            rank: (0..len).collect(),
            level: (0..len).collect(),
        }
    }

    /// Builds an order from 0-based positions listed most significant first.
    pub fn from_ranks(rank: Vec<usize>) -> Result<Self> {
        let mut level = vec![usize::MAX; rank.len()];
        for (r, &pos) in rank.iter().enumerate() {
            if pos >= rank.len() || level[pos] != usize::MAX {
                return Err(Error::NotABijection);
            }
            level[pos] = r;
        }
        Ok(PriorityOrder { rank, level })
    }

    pub fn from_ranks_one_based(rank: &[usize]) -> Result<Self> {
        let n = rank.len();
        let zero = rank
            .iter()
            .map(|&p| {
                if p == 0 || p > n {
                    Err(Error::IndexOutOfRange {
                        index: p,
                        degree: n,
                    })
                } else {
                    Ok(p - 1)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_ranks(zero)
    }

    /// Whitespace-separated 1-based rank list.
    pub fn parse(text: &str) -> Result<Self> {
        let ranks = text
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::parse(1, format!("bad rank `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_ranks_one_based(&ranks)
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Importance level of a 0-based position.
    pub fn level_of(&self, pos: usize) -> usize {
        self.level[pos]
    }

    pub fn compare(&self, x: &BitString, y: &BitString) -> Result<Ordering> {
        for s in [x, y] {
            if s.len() != self.len() {
                return Err(Error::LengthMismatch {
                    expected: self.len(),
                    found: s.len(),
                });
            }
        }
        Ok(self.compare_unchecked(x, y))
    }

    #[inline]
    pub(crate) fn compare_unchecked(&self, x: &BitString, y: &BitString) -> Ordering {
        for &p in &self.rank {
            match (x.get(p), y.get(p)) {
                (false, true) => return Ordering::Less,
                (true, false) => return Ordering::Greater,
                _ => {}
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for PriorityOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rank.iter().map(|p| (p + 1).to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A bitstring together with the order that defines its cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrioritizedBitString {
    pub bits: BitString,
    pub order: PriorityOrder,
}

impl PrioritizedBitString {
    pub fn new(bits: BitString, order: PriorityOrder) -> Result<Self> {
        if bits.len() != order.len() {
            return Err(Error::LengthMismatch {
                expected: order.len(),
                found: bits.len(),
            });
        }
        Ok(PrioritizedBitString { bits, order })
    }

    pub fn with_identity_order(bits: BitString) -> Self {
        let order = PriorityOrder::identity(bits.len());
        PrioritizedBitString { bits, order }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn compare(&self, other: &BitString) -> Result<Ordering> {
        self.order.compare(&self.bits, other)
    }

    /// `Σ_r bit(rank[r]) · 2^(N-1-r)` in an unsigned integer type. Fails when the
    /// string is longer than the type's bit width.
    pub fn cost_integer<T: PrimInt + Unsigned>(&self) -> Result<T> {
        let width = T::zero().count_zeros() as usize;
        let n = self.len();
        if n > width {
            return Err(Error::WidthExceeded { len: n, width });
        }
        let mut acc = T::zero();
        for (r, &pos) in self.order.ranks().iter().enumerate() {
            if self.bits.get(pos) {
                acc = acc | (T::one() << (n - 1 - r));
            }
        }
        Ok(acc)
    }
}

/// `x ∘ current ⪯ x ∘ current ∘ g` for every generator `g`.
pub fn is_local_min(
    x: &BitString,
    order: &PriorityOrder,
    gens: &GeneratorSet,
    current: &Permutation,
) -> Result<bool> {
    if x.len() != gens.degree() || order.len() != gens.degree() {
        return Err(Error::LengthMismatch {
            expected: gens.degree(),
            found: x.len().max(order.len()),
        });
    }
    if current.degree() != gens.degree() {
        return Err(Error::DegreeMismatch {
            expected: gens.degree(),
            found: current.degree(),
        });
    }
    let here = x.permute(current);
    Ok(gens
        .generators()
        .iter()
        .all(|g| order.compare_unchecked(&here, &here.permute(g)) != Ordering::Greater))
}
