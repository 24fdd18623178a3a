//! Permutations on `{1..N}`, cycle notation, generator sets and words, orbit
//! enumeration of bitstrings and group membership through a stabilizer chain.
//!
//! Positions are 1-based in every textual form and 0-based in memory. Composition
//! follows `(p ∘ q)(i) = p(q(i))` and a permutation acts on a string from the right,
//! `(x ∘ p)(i) = x(p(i))`, so `x ∘ (p ∘ q) = (x ∘ p) ∘ q`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;

use crate::bitlex::BitString;
use crate::error::{Error, Result};

/// Default cap on the number of strings an orbit enumeration may visit.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            image: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its 1-based image list.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let degree = images.len();
        let mut zero = Vec::with_capacity(degree);
        for &v in images {
            if v == 0 || v > degree {
                return Err(Error::IndexOutOfRange { index: v, degree });
            }
            zero.push(v - 1);
        }
        Self::from_zero_based(zero)
    }

    pub fn from_zero_based(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &v in &image {
            if v >= image.len() || seen[v] {
                return Err(Error::NotABijection);
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    /// Transposition of two 0-based points.
    pub fn transposition(degree: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(degree);
        p.image.swap(a, b);
        p
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn images_one_based(&self) -> Vec<usize> {
        self.image.iter().map(|v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`, i.e. `other` is applied first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: other.image.iter().map(|&j| self.image[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }

    pub fn pow(&self, k: u64) -> Permutation {
        let mut result = Self::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            k >>= 1;
        }
        result
    }

    /// Canonical cycle decomposition with 1-based points: every cycle starts at its
    /// smallest member, cycles are sorted by that member and fixed points appear as
    /// 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.image[i];
            }
            out.push(cycle);
        }
        out
    }

    /// Order of the permutation (lcm of the cycle lengths), or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        self.cycles().iter().try_fold(1u64, |acc, c| {
            let len = c.len() as u64;
            let g = acc.gcd(&len);
            (acc / g).checked_mul(len)
        })
    }

    /// Parses cycle notation such as `(1 2 5)(3 4)(7 8)`. Empty text and `()` give
    /// the identity; commas are accepted as separators.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
        let mut image: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        let mut rest = text.trim();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::parse(
                    1,
                    format!("expected `(` in cycle text `{text}`"),
                ));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::parse(1, format!("unclosed cycle in `{text}`")))?;
            let body = &rest[1..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(1, format!("bad point `{tok}`")))?;
                if v == 0 || v > degree {
                    return Err(Error::IndexOutOfRange { index: v, degree });
                }
                if used[v - 1] {
                    return Err(Error::OverlappingCycles { point: v });
                }
                used[v - 1] = true;
                cycle.push(v - 1);
            }
            for (k, &a) in cycle.iter().enumerate() {
                image[a] = cycle[(k + 1) % cycle.len()];
            }
            rest = rest[close + 1..].trim_start();
        }
        Ok(Permutation { image })
    }

    /// Cycle notation without fixed points; the identity prints as `()`.
    pub fn format_cycles(&self) -> String {
        let mut s = String::new();
        for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
            s.push('(');
            let body: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            s.push_str(&body.join(" "));
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_cycles())
    }
}

/// Named generators of a permutation group, all of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    degree: usize,
    names: Vec<String>,
    gens: Vec<Permutation>,
    index: HashMap<String, usize>,
}

impl GeneratorSet {
    pub fn new(degree: usize) -> Self {
        GeneratorSet {
            degree,
            names: Vec::new(),
            gens: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn from_pairs<I, S>(degree: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Permutation)>,
        S: Into<String>,
    {
        let mut set = Self::new(degree);
        for (name, p) in pairs {
            set.push(name, p)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, name: impl Into<String>, p: Permutation) -> Result<()> {
        let name = name.into();
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: p.degree(),
            });
        }
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateGenerator(name));
        }
        self.index.insert(name.clone(), self.gens.len());
        self.names.push(name);
        self.gens.push(p);
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn get(&self, name: &str) -> Option<&Permutation> {
        self.index.get(name).map(|&i| &self.gens[i])
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Permutation)> {
        self.names.iter().map(String::as_str).zip(self.gens.iter())
    }

    /// Product of the word's letters, left to right: `w[0] ∘ w[1] ∘ …`.
    pub fn apply_word(&self, word: &Word) -> Result<Permutation> {
        let mut acc = Permutation::identity(self.degree);
        for letter in word.letters() {
            let g = self
                .get(letter)
                .ok_or_else(|| Error::UnknownGenerator(letter.clone()))?;
            acc = acc.compose_unchecked(g);
        }
        Ok(acc)
    }

    /// Whether `p` lies in the group generated by this set.
    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: p.degree(),
            });
        }
        Ok(StabilizerChain::new(self.degree, &self.gens).contains(p))
    }

    /// Breadth-first closure of `{x ∘ g}` starting at `x`.
    pub fn orbit_of_string(&self, x: &BitString, cap: usize) -> Result<BTreeSet<BitString>> {
        if x.len() != self.degree {
            return Err(Error::LengthMismatch {
                expected: self.degree,
                found: x.len(),
            });
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(x.clone());
        queue.push_back(x.clone());
        while let Some(y) = queue.pop_front() {
            for g in &self.gens {
                let z = y.permute(g);
                if !seen.contains(&z) {
                    if seen.len() >= cap {
                        return Err(Error::OrbitCapExceeded { cap });
                    }
                    seen.insert(z.clone());
                    queue.push_back(z);
                }
            }
        }
        Ok(seen)
    }

    /// Parses generator lines `name = (a b)(c d)`. Blank lines and `#` comments are
    /// skipped.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        let mut set = Self::new(degree);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, cycles) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno + 1, "expected `name = cycles`"))?;
            let p = Permutation::parse_cycles(cycles, degree).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::parse(lineno + 1, msg),
                other => other,
            })?;
            set.push(name.trim(), p)?;
        }
        Ok(set)
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, p) in self.iter() {
            writeln!(f, "{name} = {p}")?;
        }
        Ok(())
    }
}

/// A product of generators, written by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<String>,
}

impl Word {
    pub fn new() -> Self {
        Word::default()
    }

    pub fn from_letters<I, S>(letters: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Word {
            letters: letters.into_iter().map(Into::into).collect(),
        }
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn push(&mut self, letter: impl Into<String>) {
        self.letters.push(letter.into());
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Accepts `word a b c`, a bare list of letters, or `word` alone for the empty
    /// word. Letters may be spread over several lines.
    pub fn parse(text: &str) -> Self {
        let mut letters = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            let mut toks = line.split_whitespace().peekable();
            if toks.peek() == Some(&"word") {
                toks.next();
            }
            letters.extend(toks.map(str::to_string));
        }
        Word { letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("word")?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

struct Level {
    base: usize,
    gens: Vec<Permutation>,
    // orbit point -> (u, u^-1) with u(base) = point
    transversal: BTreeMap<usize, (Permutation, Permutation)>,
}

impl Level {
    fn recompute(&mut self, degree: usize) {
        let id = Permutation::identity(degree);
        self.transversal.clear();
        self.transversal.insert(self.base, (id.clone(), id));
        let mut queue = VecDeque::from([self.base]);
        while let Some(beta) = queue.pop_front() {
            for s in &self.gens {
                let gamma = s.apply(beta);
                if !self.transversal.contains_key(&gamma) {
                    let u = s.compose_unchecked(&self.transversal[&beta].0);
                    let inv = u.inverse();
                    self.transversal.insert(gamma, (u, inv));
                    queue.push_back(gamma);
                }
            }
        }
    }
}

/// Stabilizer chain over the base `1, 2, …, N` built by deterministic
/// Schreier–Sims. Level `i` holds the strong generators fixing points `< i`.
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, gens: &[Permutation]) -> Self {
        let mut levels: Vec<Level> = (0..degree)
            .map(|base| Level {
                base,
                gens: Vec::new(),
                transversal: BTreeMap::new(),
            })
            .collect();
        for g in gens.iter().filter(|g| !g.is_identity()) {
            let first = (0..degree).find(|&i| g.apply(i) != i).unwrap();
            for level in levels.iter_mut().take(first + 1) {
                level.gens.push(g.clone());
            }
        }
        for level in &mut levels {
            level.recompute(degree);
        }
        let mut chain = StabilizerChain { degree, levels };

        let mut i = degree;
        while i > 0 {
            let lvl = i - 1;
            match chain.failing_schreier_generator(lvl) {
                Some((stop, residue)) => {
                    for j in lvl + 1..=stop {
                        chain.levels[j].gens.push(residue.clone());
                        chain.levels[j].recompute(degree);
                    }
                    i = stop + 1;
                }
                None => i -= 1,
            }
        }
        chain
    }

    fn failing_schreier_generator(&self, lvl: usize) -> Option<(usize, Permutation)> {
        let level = &self.levels[lvl];
        for (beta, (u_beta, _)) in &level.transversal {
            for s in &level.gens {
                let gamma = s.apply(*beta);
                let u_gamma_inv = &level.transversal[&gamma].1;
                let h = u_gamma_inv.compose_unchecked(&s.compose_unchecked(u_beta));
                if let Some(hit) = self.sift(h, lvl + 1) {
                    return Some(hit);
                }
            }
        }
        None
    }

    /// Sifts `g` from level `from` downward. Returns the level where sifting stopped
    /// and the residue, or `None` when the residue is the identity.
    fn sift(&self, mut g: Permutation, from: usize) -> Option<(usize, Permutation)> {
        for lvl in from..self.degree {
            if g.is_identity() {
                return None;
            }
            let level = &self.levels[lvl];
            let beta = g.apply(level.base);
            if beta == level.base {
                continue;
            }
            match level.transversal.get(&beta) {
                Some((_, u_inv)) => g = u_inv.compose_unchecked(&g),
                None => return Some((lvl, g)),
            }
        }
        if g.is_identity() {
            None
        } else {
            Some((self.degree, g))
        }
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.degree && self.sift(p.clone(), 0).is_none()
    }

    /// Group order as the product of the basic orbit lengths; `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        self.levels
            .iter()
            .try_fold(1u128, |acc, l| acc.checked_mul(l.transversal.len() as u128))
    }
}
