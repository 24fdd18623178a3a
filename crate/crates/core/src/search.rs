//! The standard algorithm: from a start word, keep moving to the best neighbor
//! `π ∘ g` until no generator improves `x ∘ π`.

use std::fmt;

use crate::bitlex::{is_local_min, BitString, PrioritizedBitString, PriorityOrder};
use crate::error::{Error, Result};
use crate::perm::{GeneratorSet, Permutation, Word};

pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Running,
    LocalOpt,
    StepCap,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Running => "Running",
            Status::LocalOpt => "LocalOpt",
            Status::StepCap => "StepCap",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_steps: usize,
    /// Use neighbors `g ∘ π` instead of `π ∘ g`.
    pub left_action: bool,
    pub record_trace: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_steps: DEFAULT_MAX_STEPS,
            left_action: false,
            record_trace: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchState {
    pub word: Word,
    /// Product of `word`.
    pub current: Permutation,
    /// `x ∘ current`.
    pub string: BitString,
    pub steps: usize,
    pub status: Status,
    /// Strings visited, starting with the one for the start word. Empty when trace
    /// recording is off.
    pub trace: Vec<BitString>,
}

pub fn standard_algorithm(
    x: &PrioritizedBitString,
    gens: &GeneratorSet,
    start: &Word,
    opts: &SearchOptions,
) -> Result<SearchState> {
    if x.len() != gens.degree() {
        return Err(Error::DegreeMismatch {
            expected: gens.degree(),
            found: x.len(),
        });
    }
    let current = gens.apply_word(start)?;
    let string = x.bits.permute(&current);
    let mut state = SearchState {
        word: start.clone(),
        trace: if opts.record_trace {
            vec![string.clone()]
        } else {
            Vec::new()
        },
        current,
        string,
        steps: 0,
        status: Status::Running,
    };
    loop {
        let mut best: Option<(usize, BitString)> = None;
        for (i, g) in gens.generators().iter().enumerate() {
            let candidate = if opts.left_action {
                x.bits.permute_pair(g, &state.current)
            } else {
                state.string.permute(g)
            };
            let incumbent = best.as_ref().map_or(&state.string, |(_, s)| s);
            if x.order.compare_unchecked(&candidate, incumbent).is_lt() {
                best = Some((i, candidate));
            }
        }
        let Some((i, next)) = best else {
            state.status = Status::LocalOpt;
            return Ok(state);
        };
        if state.steps >= opts.max_steps {
            state.status = Status::StepCap;
            return Ok(state);
        }
        let g = &gens.generators()[i];
        let name = gens.names()[i].clone();
        if opts.left_action {
            state.current = g.compose_unchecked(&state.current);
            let mut letters = Vec::with_capacity(state.word.len() + 1);
            letters.push(name);
            letters.extend(state.word.letters().iter().cloned());
            state.word = Word::from_letters(letters);
        } else {
            state.current = state.current.compose_unchecked(g);
            state.word.push(name);
        }
        state.string = next;
        state.steps += 1;
        if opts.record_trace {
            state.trace.push(state.string.clone());
        }
    }
}

/// Local optimality of the word's product under the right action.
pub fn verify_local_opt(x: &PrioritizedBitString, gens: &GeneratorSet, w: &Word) -> Result<bool> {
    let current = gens.apply_word(w)?;
    is_local_min(&x.bits, &x.order, gens, &current)
}

/// Like [`verify_local_opt`] for a permutation given directly; it must first be
/// shown to lie in the generated group.
pub fn verify_local_opt_raw(
    x: &PrioritizedBitString,
    gens: &GeneratorSet,
    p: &Permutation,
) -> Result<bool> {
    if !gens.contains(p)? {
        return Err(Error::NotInGroup);
    }
    is_local_min(&x.bits, &x.order, gens, p)
}

/// `x ∘ π ⪯ x ∘ (g ∘ π)` for every generator `g`.
pub fn is_local_min_left(
    x: &PrioritizedBitString,
    gens: &GeneratorSet,
    p: &Permutation,
) -> Result<bool> {
    if x.len() != gens.degree() || p.degree() != gens.degree() {
        return Err(Error::DegreeMismatch {
            expected: gens.degree(),
            found: if x.len() != gens.degree() {
                x.len()
            } else {
                p.degree()
            },
        });
    }
    let here = x.bits.permute(p);
    Ok(gens.generators().iter().all(|g| {
        !x.order
            .compare_unchecked(&x.bits.permute_pair(g, p), &here)
            .is_lt()
    }))
}

/// A LocalMin instance: string, priority order and generators.
///
/// Text form:
///
/// ```text
/// N <positions> K <generators>
/// start <bits>
/// order <1-based positions, most significant first>
/// <name> = <cycles>
/// ```
///
/// Lines starting with `pos` or `netlist` annotate reduced instances and are
/// skipped here, as are blank lines and `#` comments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalMinInstance {
    pub x: PrioritizedBitString,
    pub gens: GeneratorSet,
}

impl LocalMinInstance {
    pub fn new(bits: BitString, order: PriorityOrder, gens: GeneratorSet) -> Result<Self> {
        if bits.len() != gens.degree() {
            return Err(Error::DegreeMismatch {
                expected: gens.degree(),
                found: bits.len(),
            });
        }
        Ok(LocalMinInstance {
            x: PrioritizedBitString::new(bits, order)?,
            gens,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut start: Option<BitString> = None;
        let mut order: Option<PriorityOrder> = None;
        let mut gen_lines = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            let mut toks = line.split_whitespace();
            match toks.next() {
                None | Some("pos") | Some("netlist") => {}
                Some("N") => {
                    let t: Vec<&str> = toks.collect();
                    let num = |s: &str| {
                        s.parse::<usize>()
                            .map_err(|_| Error::parse(lineno, format!("bad count `{s}`")))
                    };
                    let [n, "K", k] = t.as_slice() else {
                        return Err(Error::parse(
                            lineno,
                            "expected `N <positions> K <generators>`",
                        ));
                    };
                    header = Some((num(n)?, num(k)?));
                }
                Some("start") => {
                    let bits = toks.collect::<String>();
                    start = Some(bits.parse().map_err(|e: Error| match e {
                        Error::Parse { msg, .. } => Error::parse(lineno, msg),
                        other => other,
                    })?);
                }
                Some("order") => {
                    let rest = toks.collect::<Vec<_>>().join(" ");
                    order = Some(PriorityOrder::parse(&rest).map_err(|e| match e {
                        Error::Parse { msg, .. } => Error::parse(lineno, msg),
                        other => other,
                    })?);
                }
                Some(_) if line.contains('=') => {
                    gen_lines.push_str(line);
                    gen_lines.push('\n');
                }
                Some(tok) => return Err(Error::parse(lineno, format!("unexpected `{tok}`"))),
            }
        }
        let (n, k) = header.ok_or_else(|| Error::parse(0, "missing `N ... K ...` header"))?;
        let start = start.ok_or_else(|| Error::parse(0, "missing `start` line"))?;
        let order = order.unwrap_or_else(|| PriorityOrder::identity(n));
        let gens = GeneratorSet::parse(&gen_lines, n)?;
        if gens.len() != k {
            return Err(Error::InvalidInstance(format!(
                "header announces {k} generators, found {}",
                gens.len()
            )));
        }
        if start.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: start.len(),
            });
        }
        Self::new(start, order, gens)
    }
}

impl fmt::Display for LocalMinInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "N {} K {}", self.gens.degree(), self.gens.len())?;
        writeln!(f, "start {}", self.x.bits)?;
        writeln!(f, "order {}", self.x.order)?;
        write!(f, "{}", self.gens)
    }
}
