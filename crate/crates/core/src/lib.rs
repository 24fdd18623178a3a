//! Lexicographic minimization of bitstrings under permutation groups.
//!
//! The crate covers local and global minimization of `x ∘ π` over a group given by
//! generators, the polynomial algorithm for a single permutation, the hardness
//! pipeline 3-coloring → disjunctive Chinese remainder → one-permutation global
//! minimum, the reduction from FLIP (local search on NAND circuits) to local
//! minimization under permutations, and a CNF formula whose symmetry group realizes
//! that reduction.

pub mod bitlex;
pub mod circuit;
pub mod cnf;
pub mod dcr;
pub mod error;
pub mod one_perm;
pub mod perm;
pub mod reduction;
pub mod search;

pub use bitlex::{is_local_min, BitString, PrioritizedBitString, PriorityOrder};
pub use circuit::FlipInstance;
pub use error::{Error, Result};
pub use perm::{GeneratorSet, Permutation, StabilizerChain, Word};
pub use reduction::ReducedInstance;
pub use search::{standard_algorithm, LocalMinInstance, SearchOptions, SearchState, Status};
