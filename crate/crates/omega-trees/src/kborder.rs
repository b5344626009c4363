//! The Kleene-Brouwer ordering and its descent machinery.
//!
//! `u ≤_KB v` holds iff `v` is an initial segment of `u`, or `u` and `v`
//! are incompatible and `u` is lexicographically below `v` at the first
//! disagreement. A tree is well-founded exactly when `≤_KB` restricted to
//! it is a well-order, so infinite strictly KB-descending node streams are
//! the finite-side shadow of infinite branches: along such a stream every
//! position is eventually constant, and the limit values form a branch.
//!
//! "Eventually constant" is not finitely decidable, so the extraction here
//! uses a declared stability window: a position counts as settled once its
//! value survives `window` consecutive stream elements, and a stream that
//! ends earlier fails with [`KbError::StreamExhausted`] rather than
//! returning a guess. Likewise [`descending_chain_search`] is a
//! semi-decision: it can exhibit descending chains but never certifies
//! well-foundedness.

use alloc::vec::Vec;
use core::fmt;

use crate::linorders::LinOrder;
use crate::seqcode::{self, FinSeq, SeqCode, SeqError};
use crate::trees::{TreeError, TreeSpec};

/// Comparison outcome under `≤_KB`; `Equal` only on identical sequences.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KbComparison {
    LessEq,
    GreaterEq,
    Equal,
}

/// Errors of the descent machinery.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum KbError {
    /// The operation needs a finite tree.
    NonFiniteTree,
    /// The stream ended before every requested position stabilized.
    StreamExhausted,
    /// The stream element at this index is not strictly KB-below its
    /// predecessor.
    NotDescending {
        at: usize,
    },
    /// The code map reverses `≤_KB` on the witness pair.
    NotOrderPreserving {
        witness: (FinSeq, FinSeq),
    },
    /// The code map is undefined on a visited node.
    MapUndefined(FinSeq),
    /// The code map sends a visited node outside the target tree.
    ImageOutsideTarget(FinSeq),
    /// A visited node is missing from the source tree.
    NotInTree(FinSeq),
    Tree(TreeError),
    Seq(SeqError),
}

impl fmt::Display for KbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KbError::NonFiniteTree => write!(f, "operation requires a finite tree"),
            KbError::StreamExhausted => write!(f, "stream ended before stabilization"),
            KbError::NotDescending { at } => {
                write!(f, "stream is not strictly KB-descending at element {at}")
            }
            KbError::NotOrderPreserving { witness: (u, v) } => {
                write!(f, "map does not preserve KB order on ({u:?}, {v:?})")
            }
            KbError::MapUndefined(u) => write!(f, "code map undefined at {u:?}"),
            KbError::ImageOutsideTarget(u) => {
                write!(f, "image of {u:?} is outside the target tree")
            }
            KbError::NotInTree(u) => write!(f, "{u:?} is not in the source tree"),
            KbError::Tree(e) => write!(f, "{e}"),
            KbError::Seq(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for KbError {}

impl From<TreeError> for KbError {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::NonFiniteTree => KbError::NonFiniteTree,
            other => KbError::Tree(other),
        }
    }
}

impl From<SeqError> for KbError {
    fn from(e: SeqError) -> Self {
        KbError::Seq(e)
    }
}

/// Default stability window for limit extraction.
pub const DEFAULT_STABILITY_WINDOW: usize = 8;

/// Three-way comparison under the Kleene-Brouwer ordering.
pub fn kb_compare(u: &FinSeq, v: &FinSeq) -> KbComparison {
    for i in 0..u.len().min(v.len()) {
        let (a, b) = (u.get(i).unwrap(), v.get(i).unwrap());
        if a < b {
            return KbComparison::LessEq;
        }
        if a > b {
            return KbComparison::GreaterEq;
        }
    }
    // One is an initial segment of the other: the extension sits below.
    match u.len().cmp(&v.len()) {
        core::cmp::Ordering::Greater => KbComparison::LessEq,
        core::cmp::Ordering::Less => KbComparison::GreaterEq,
        core::cmp::Ordering::Equal => KbComparison::Equal,
    }
}

/// `u ≤_KB v`.
pub fn kb_leq(u: &FinSeq, v: &FinSeq) -> bool {
    !matches!(kb_compare(u, v), KbComparison::GreaterEq)
}

/// `u <_KB v`.
pub fn kb_less(u: &FinSeq, v: &FinSeq) -> bool {
    matches!(kb_compare(u, v), KbComparison::LessEq)
}

/// The total order `≤_KB` restricted to the node codes of a finite tree.
pub fn kb_order_of(tree: &TreeSpec) -> Result<LinOrder, KbError> {
    let mut nodes = tree.enumerate_finite()?;
    nodes.sort_by(|a, b| match kb_compare(a, b) {
        KbComparison::LessEq => core::cmp::Ordering::Less,
        KbComparison::GreaterEq => core::cmp::Ordering::Greater,
        KbComparison::Equal => core::cmp::Ordering::Equal,
    });
    let mut codes = Vec::with_capacity(nodes.len());
    for u in &nodes {
        codes.push(seqcode::encode(u)?.value());
    }
    Ok(LinOrder::from_ranked(codes))
}

/// Each node strictly KB-below its predecessor.
pub fn is_kb_descending(nodes: &[FinSeq]) -> bool {
    nodes.windows(2).all(|w| kb_less(&w[1], &w[0]))
}

/// Extracts the first `depth` values of the limit branch of a strictly
/// KB-descending stream. A position is settled when its value survives
/// `window` consecutive elements; the call consumes the stream until all
/// requested positions are settled simultaneously.
pub fn branch_from_kb_descending<I>(
    stream: I,
    depth: usize,
    window: usize,
) -> Result<FinSeq, KbError>
where
    I: IntoIterator<Item = FinSeq>,
{
    if depth == 0 {
        return Ok(FinSeq::empty());
    }
    let window = window.max(1);
    let mut runs: Vec<Option<(u64, usize)>> = alloc::vec![None; depth];
    let mut prev: Option<FinSeq> = None;
    for (idx, u) in stream.into_iter().enumerate() {
        if let Some(p) = &prev {
            if !kb_less(&u, p) {
                return Err(KbError::NotDescending { at: idx });
            }
        }
        for (i, run) in runs.iter_mut().enumerate() {
            match (u.get(i), run.as_mut()) {
                (Some(v), Some((cur, cnt))) if *cur == v => *cnt += 1,
                (Some(v), _) => *run = Some((v, 1)),
                (None, _) => *run = None,
            }
        }
        if runs
            .iter()
            .all(|r| matches!(r, Some((_, cnt)) if *cnt >= window))
        {
            let items = runs.iter().map(|r| r.unwrap().0).collect();
            return Ok(FinSeq::new(items));
        }
        prev = Some(u);
    }
    Err(KbError::StreamExhausted)
}

/// Pushes a branch prefix through a KB-preserving code map and extracts
/// the stabilized limit, a prefix of the induced branch of the target
/// tree.
///
/// The map is validated on the nodes actually visited: the prefix chain of
/// `alpha_prefix` plus the caller-supplied `probe` nodes. On those, images
/// must land in `s` and preserve `≤_KB` in both directions; a violation
/// reports the offending pair. Because only a finite prefix is available,
/// stabilization here means: the final element defines every requested
/// position, and each position's value is constant over the last `window`
/// elements that define it (all of them, when fewer than `window` do).
pub fn kb_induced_map<F>(
    f: F,
    t: &TreeSpec,
    s: &TreeSpec,
    alpha_prefix: &FinSeq,
    depth: usize,
    probe: &[FinSeq],
    window: usize,
) -> Result<FinSeq, KbError>
where
    F: Fn(SeqCode) -> Option<SeqCode>,
{
    let window = window.max(1);
    let chain: Vec<FinSeq> = (0..=alpha_prefix.len())
        .map(|n| alpha_prefix.prefix(n))
        .collect();
    let mut visited = chain.clone();
    visited.extend(probe.iter().cloned());

    let mut images = Vec::with_capacity(visited.len());
    for u in &visited {
        if !t.member(u)? {
            return Err(KbError::NotInTree(u.clone()));
        }
        let code = seqcode::encode(u)?;
        let img_code = f(code).ok_or_else(|| KbError::MapUndefined(u.clone()))?;
        let img = seqcode::decode_code(img_code);
        if !s.member(&img)? {
            return Err(KbError::ImageOutsideTarget(u.clone()));
        }
        images.push(img);
    }
    for i in 0..visited.len() {
        for j in 0..visited.len() {
            if kb_leq(&visited[i], &visited[j]) != kb_leq(&images[i], &images[j]) {
                return Err(KbError::NotOrderPreserving {
                    witness: (visited[i].clone(), visited[j].clone()),
                });
            }
        }
    }

    let image_chain = &images[..chain.len()];
    let last = image_chain.last().expect("chain is nonempty");
    let mut items = Vec::with_capacity(depth);
    for i in 0..depth {
        let v = last.get(i).ok_or(KbError::StreamExhausted)?;
        let defining: Vec<u64> = image_chain.iter().filter_map(|w| w.get(i)).collect();
        let lookback = window.min(defining.len());
        if defining[defining.len() - lookback..]
            .iter()
            .any(|&x| x != v)
        {
            return Err(KbError::StreamExhausted);
        }
        items.push(v);
    }
    Ok(FinSeq::new(items))
}

/// Best-effort search for a strictly `≺`-descending chain witnessing
/// ill-foundedness of a comparator-presented order.
///
/// A strictly descending sequence of distinct naturals always contains a
/// numerically increasing subsequence, so the search looks for chains
/// `x_0 < x_1 < …` (as naturals, within `[0, budget²]`) with
/// `x_{j+1} ≺ x_j`, by dynamic programming over the range. The longest
/// chain found is returned when it has at least one descent step; a
/// well-order presented in its numeric order admits none. The result is
/// evidence, never a certificate of ill-foundedness.
pub fn descending_chain_search<P>(prec: P, budget: u64) -> Option<Vec<u64>>
where
    P: Fn(u64, u64) -> bool,
{
    if budget < 2 {
        return None;
    }
    let n = budget.saturating_mul(budget);
    let count = (n + 1) as usize;
    // len[y] = longest admissible chain ending at y; parent for rebuild.
    let mut len = alloc::vec![1usize; count];
    let mut parent = alloc::vec![usize::MAX; count];
    let cap = budget as usize;
    for y in 0..count {
        for x in 0..y {
            if len[x] < cap && len[x] + 1 > len[y] && prec(y as u64, x as u64) {
                len[y] = len[x] + 1;
                parent[y] = x;
            }
        }
    }
    let (best, &best_len) = len
        .iter()
        .enumerate()
        .max_by_key(|&(y, &l)| (l, count - y))?;
    if best_len < 2 {
        return None;
    }
    let mut chain = Vec::with_capacity(best_len);
    let mut cur = best;
    while cur != usize::MAX {
        chain.push(cur as u64);
        cur = parent[cur];
    }
    chain.reverse();
    Some(chain)
}
