//! Computable machinery for trees on the naturals and the metric point spaces
//! they carry.
//!
//! A *tree* here is a set of finite sequences of naturals closed under initial
//! segments. The crate provides:
//!
//! - [`seqcode`]: bit-exact coding of finite sequences by naturals, the Cantor
//!   pairing function, and the extended pairing on `ω ∪ {-1}`;
//! - [`kborder`]: the Kleene-Brouwer ordering, descending-chain search, and
//!   extraction of infinite branches from KB-descending node streams;
//! - [`trees`]: tree representations (finite sets, deterministic automata,
//!   lazy membership oracles) and the combinators: subtree, shift/closure,
//!   sum, product, the tree of attempted binary-tree embeddings, and the
//!   predicate/chain/section/bar/interleave constructors;
//! - [`space`]: the point space `T ∪ [T]` under the exact ultrametric
//!   `1/(first disagreement + 1)`, its presentation, the isometry into Baire
//!   space, and the sum/product isomorphisms;
//! - [`cbmeasure`]: Cantor-Bendixson decomposition, path-count countability
//!   analysis, and exact coin-toss body measure for automaton-presented
//!   binary trees;
//! - [`linorders`]: finite linear orders and the admissible / strongly
//!   admissible partial-map machinery with a brute-force oracle.
//!
//! Everything is exact: distances and measures are rationals, never floats.
//! Questions that are only semi-decidable (equality of branches, membership
//! limits, descending chains in oracle-presented orders) are answered with
//! explicit budgets and certified bounds rather than guesses.
//!
//! The crate is `no_std` (with `alloc`); IO, JSON file formats and the CLI
//! live in the companion crate `omega-trees-cli`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cbmeasure;
pub mod kborder;
pub mod linorders;
pub mod seqcode;
pub mod space;
pub mod trees;

pub use seqcode::{ExtVal, FinSeq, SeqCode};
pub use trees::{Automaton, TreeSpec};
