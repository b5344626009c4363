//! Tree representations and combinators.
//!
//! A tree on the naturals is a set of finite sequences closed under initial
//! segments; every tree here contains the empty sequence (the degenerate
//! empty tree is rejected at construction, since the point spaces built on
//! trees are nonempty). Four representations coexist behind one membership
//! interface:
//!
//! - [`TreeSpec::Finite`]: an explicit node set;
//! - [`TreeSpec::Regular`]: the label strings of paths through a
//!   deterministic partial automaton;
//! - [`TreeSpec::Lazy`]: a pure membership oracle together with a declared
//!   per-node label bound, so children can be enumerated (trees on the
//!   naturals branch unboundedly; the bound is a representation constraint
//!   for desk-scale exploration, not a semantic one);
//! - [`TreeSpec::Derived`]: sums, products, subtrees, shift/closures and
//!   the tree of attempted binary-tree embeddings, evaluated by their
//!   defining formulas.
//!
//! Prefix closure is intrinsic for finite and regular trees and is
//! spot-checked on every accepting query path for lazy oracles: a lazy
//! oracle that admits a node but rejects one of its prefixes raises
//! [`TreeError::PrefixClosureViolation`] instead of returning an arbitrary
//! answer.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::seqcode::{self, ExtVal, FinSeq, SeqCode, SeqError};

/// Errors raised by tree construction, membership and exploration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TreeError {
    /// The degenerate empty tree (no nodes at all) was offered.
    EmptyTree,
    /// A finite node set misses a prefix of the witness node.
    NotPrefixClosed(FinSeq),
    /// A lazy oracle accepted the witness node but rejected a prefix of it.
    PrefixClosureViolation(FinSeq),
    /// A membership or branch oracle failed.
    OracleError,
    /// The operation needs a finite tree.
    NonFiniteTree,
    /// Automaton shape violation.
    InvalidAutomaton(String),
    /// Sequence-coding failure inside a constructor formula.
    Seq(SeqError),
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::EmptyTree => write!(f, "the empty tree is rejected"),
            TreeError::NotPrefixClosed(u) => write!(f, "node set not prefix-closed at {u:?}"),
            TreeError::PrefixClosureViolation(u) => {
                write!(f, "lazy oracle violates prefix closure at {u:?}")
            }
            TreeError::OracleError => write!(f, "membership oracle failed"),
            TreeError::NonFiniteTree => write!(f, "operation requires a finite tree"),
            TreeError::InvalidAutomaton(msg) => write!(f, "invalid automaton: {msg}"),
            TreeError::Seq(e) => write!(f, "coding error: {e}"),
        }
    }
}

impl core::error::Error for TreeError {}

impl From<SeqError> for TreeError {
    fn from(e: SeqError) -> Self {
        TreeError::Seq(e)
    }
}

/// A deterministic labeled automaton presenting a regular tree: the tree
/// nodes are the label strings of paths from the initial state along
/// defined transitions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Automaton {
    states: Vec<String>,
    initial: usize,
    edges: BTreeMap<(usize, u64), usize>,
}

impl Automaton {
    /// Builds an automaton, validating that the initial state and all edge
    /// endpoints exist. Determinism is structural: one target per
    /// `(state, label)`.
    pub fn new(
        states: Vec<String>,
        initial: usize,
        edges: BTreeMap<(usize, u64), usize>,
    ) -> Result<Automaton, TreeError> {
        if states.is_empty() {
            return Err(TreeError::InvalidAutomaton("no states".into()));
        }
        if initial >= states.len() {
            return Err(TreeError::InvalidAutomaton(
                "initial state out of range".into(),
            ));
        }
        for (&(from, _), &to) in &edges {
            if from >= states.len() || to >= states.len() {
                return Err(TreeError::InvalidAutomaton(
                    "edge endpoint out of range".into(),
                ));
            }
        }
        Ok(Automaton {
            states,
            initial,
            edges,
        })
    }

    /// The automaton with no states; its tree is empty and is rejected by
    /// [`TreeSpec::regular`].
    pub fn empty() -> Automaton {
        Automaton {
            states: Vec::new(),
            initial: 0,
            edges: BTreeMap::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, u64, usize)> + '_ {
        self.edges.iter().map(|(&(q, a), &r)| (q, a, r))
    }

    pub fn step(&self, state: usize, label: u64) -> Option<usize> {
        self.edges.get(&(state, label)).copied()
    }

    /// Labels defined at a state, in increasing order.
    pub fn labels_from(&self, state: usize) -> Vec<u64> {
        self.edges
            .range((state, 0)..=(state, u64::MAX))
            .map(|(&(_, a), _)| a)
            .collect()
    }

    /// All labels appearing on edges.
    pub fn alphabet(&self) -> BTreeSet<u64> {
        self.edges.keys().map(|&(_, a)| a).collect()
    }

    /// The state reached by reading `u` from the initial state, if the run
    /// survives.
    pub fn state_of(&self, u: &FinSeq) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        let mut q = self.initial;
        for a in u.iter() {
            q = self.step(q, a)?;
        }
        Some(q)
    }

    pub fn member(&self, u: &FinSeq) -> bool {
        self.state_of(u).is_some()
    }
}

/// A pure membership oracle; `None` signals oracle failure.
pub type MemberOracle = Arc<dyn Fn(&FinSeq) -> Option<bool> + Send + Sync>;

/// A per-node label bound: must dominate every label of a child of its
/// argument.
pub type LabelBound = Arc<dyn Fn(&FinSeq) -> u64 + Send + Sync>;

/// A lazy tree: a pure membership oracle plus a per-node label bound.
#[derive(Clone)]
pub struct LazyTree {
    member: MemberOracle,
    bound: LabelBound,
}

/// A derived tree: a combinator applied to operand specs.
#[derive(Clone, Debug)]
pub enum Derived {
    /// `T_u`: nodes of `T` compatible with `u`.
    Subtree { tree: TreeSpec, at: FinSeq },
    /// `S^T`: every entry shifted up by one, then arbitrary blocks of `0`s
    /// appended.
    ShiftClosure(TreeSpec),
    /// `T ⊕ S` with first coordinates tagged through the Cantor pairing:
    /// `(n)⌢u` is a node iff `n = p(0,k)` and `(k)⌢u ∈ T`, or `n = p(1,k)`
    /// and `(k)⌢u ∈ S`.
    Sum(TreeSpec, TreeSpec),
    /// `⊗(T,S)`: zips of a `T`-node and an `S`-node through the extended
    /// pairing, the shorter side padded with `-1`.
    Product(TreeSpec, TreeSpec),
    /// The tree of attempts to embed the complete binary tree into the
    /// operand.
    Att(TreeSpec),
}

/// A tree on the naturals, in one of four representations.
#[derive(Clone)]
pub enum TreeSpec {
    Finite(Arc<BTreeSet<FinSeq>>),
    Regular(Arc<Automaton>),
    Lazy(LazyTree),
    Derived(Arc<Derived>),
}

impl fmt::Debug for TreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeSpec::Finite(nodes) => write!(f, "Finite({} nodes)", nodes.len()),
            TreeSpec::Regular(a) => write!(f, "Regular({} states)", a.state_count()),
            TreeSpec::Lazy(_) => write!(f, "Lazy"),
            TreeSpec::Derived(d) => write!(f, "Derived({d:?})"),
        }
    }
}

/// The fixed enumeration of the complete binary tree used by `att`:
/// length-then-lexicographic, so `s_0 = ()`, `s_1 = (0)`, `s_2 = (1)`,
/// `s_3 = (0,0)`, `s_4 = (0,1)`, `s_5 = (1,0)`, ...
///
/// Implemented by reading the binary digits of `n + 1` below the leading
/// bit.
pub fn nth_binary_string(n: u64) -> FinSeq {
    let m = n + 1;
    let bits = 63 - m.leading_zeros() as u64;
    let items = (0..bits).rev().map(|i| (m >> i) & 1).collect::<Vec<_>>();
    FinSeq::new(items)
}

impl TreeSpec {
    /// A finite tree from an explicit node set. Rejects the empty set and
    /// sets that are not prefix-closed.
    pub fn finite<I>(nodes: I) -> Result<TreeSpec, TreeError>
    where
        I: IntoIterator<Item = FinSeq>,
    {
        let set: BTreeSet<FinSeq> = nodes.into_iter().collect();
        if set.is_empty() {
            return Err(TreeError::EmptyTree);
        }
        for u in &set {
            if let Some(p) = u.parent() {
                if !set.contains(&p) {
                    return Err(TreeError::NotPrefixClosed(u.clone()));
                }
            }
        }
        Ok(TreeSpec::Finite(Arc::new(set)))
    }

    /// A finite tree from arbitrary nodes, closing under initial segments.
    pub fn finite_closed<I>(nodes: I) -> TreeSpec
    where
        I: IntoIterator<Item = FinSeq>,
    {
        let mut set = BTreeSet::new();
        set.insert(FinSeq::empty());
        for u in nodes {
            for n in 0..=u.len() {
                set.insert(u.prefix(n));
            }
        }
        TreeSpec::Finite(Arc::new(set))
    }

    /// A regular tree presented by an automaton. Rejects the empty
    /// automaton.
    pub fn regular(a: Automaton) -> Result<TreeSpec, TreeError> {
        if a.is_empty() {
            return Err(TreeError::EmptyTree);
        }
        Ok(TreeSpec::Regular(Arc::new(a)))
    }

    /// A lazy tree from a membership oracle and a label-bound function.
    pub fn lazy<M, B>(member: M, bound: B) -> TreeSpec
    where
        M: Fn(&FinSeq) -> Option<bool> + Send + Sync + 'static,
        B: Fn(&FinSeq) -> u64 + Send + Sync + 'static,
    {
        TreeSpec::Lazy(LazyTree {
            member: Arc::new(member),
            bound: Arc::new(bound),
        })
    }

    /// The complete binary tree `2^<ω`.
    pub fn binary() -> TreeSpec {
        TreeSpec::lazy(|u| Some(u.iter().all(|k| k <= 1)), |_| 1)
    }

    /// The full tree `ω^<ω`; `bound` only limits enumeration.
    pub fn full(bound: u64) -> TreeSpec {
        TreeSpec::lazy(|_| Some(true), move |_| bound)
    }

    /// `T_u = {v ∈ T : v compatible with u}`.
    pub fn subtree_at(&self, at: FinSeq) -> TreeSpec {
        TreeSpec::Derived(Arc::new(Derived::Subtree {
            tree: self.clone(),
            at,
        }))
    }

    /// The closure tree `S^T`: shifted nodes of `T` with trailing blocks of
    /// zeros. The bodies of `T` and `S^T` carry isometric point spaces; see
    /// `space::rho`.
    pub fn shift_closure(&self) -> TreeSpec {
        TreeSpec::Derived(Arc::new(Derived::ShiftClosure(self.clone())))
    }

    /// The sum `T ⊕ S`.
    pub fn sum(t: &TreeSpec, s: &TreeSpec) -> TreeSpec {
        TreeSpec::Derived(Arc::new(Derived::Sum(t.clone(), s.clone())))
    }

    /// The product `⊗(T,S)`.
    pub fn product(t: &TreeSpec, s: &TreeSpec) -> TreeSpec {
        TreeSpec::Derived(Arc::new(Derived::Product(t.clone(), s.clone())))
    }

    /// The tree of attempted embeddings of the complete binary tree into
    /// `self`: a node `w` lists codes of `self`-nodes, position `n`
    /// standing for the binary string `s_n` of [`nth_binary_string`], such
    /// that incompatibility and proper extension of the patterns are
    /// mirrored by the decoded nodes. An infinite branch of `att(T)` is a
    /// full embedding of `2^<ω` into `T`.
    pub fn att(&self) -> TreeSpec {
        TreeSpec::Derived(Arc::new(Derived::Att(self.clone())))
    }

    /// The tree of sequences whose entries all satisfy `q`.
    pub fn elementwise<Q>(q: Q, bound: u64) -> TreeSpec
    where
        Q: Fn(u64) -> bool + Send + Sync + 'static,
    {
        TreeSpec::lazy(move |u| Some(u.iter().all(&q)), move |_| bound)
    }

    /// The tree of strictly descending tuples of a strict linear order
    /// given as a comparator oracle: `prec(a, b)` decides `a ≺ b`.
    pub fn chain<P>(prec: P, bound: u64) -> TreeSpec
    where
        P: Fn(u64, u64) -> bool + Send + Sync + 'static,
    {
        TreeSpec::lazy(
            move |u| Some((1..u.len()).all(|i| prec(u.get(i).unwrap(), u.get(i - 1).unwrap()))),
            move |_| bound,
        )
    }

    /// The section tree of a predicate `R(n, s)`: `u` is a node iff `u` is
    /// empty or `R(u(0), ⟨u(1),…,u(t)⟩)` holds for every `t < lh(u)`.
    pub fn sections<R>(r: R, bound: u64) -> TreeSpec
    where
        R: Fn(u64, SeqCode) -> bool + Send + Sync + 'static,
    {
        TreeSpec::lazy(
            move |u| {
                if u.is_empty() {
                    return Some(true);
                }
                let head = u.get(0).unwrap();
                for t in 0..u.len() {
                    let tail = FinSeq::new(u.as_slice()[1..=t].to_vec());
                    let code = seqcode::encode(&tail).ok()?;
                    if !r(head, code) {
                        return Some(false);
                    }
                }
                Some(true)
            },
            move |_| bound,
        )
    }

    /// The bar tree of a predicate on codes: `u` is a node iff no proper
    /// prefix of `u` satisfies `R`.
    pub fn bar<R>(r: R, bound: u64) -> TreeSpec
    where
        R: Fn(SeqCode) -> bool + Send + Sync + 'static,
    {
        TreeSpec::lazy(
            move |u| {
                for t in 0..u.len() {
                    let code = seqcode::encode(&u.prefix(t)).ok()?;
                    if r(code) {
                        return Some(false);
                    }
                }
                Some(true)
            },
            move |_| bound,
        )
    }

    /// The interleaved unfolding of a predicate `R(n, a, b)`: below a first
    /// coordinate `n` the entries alternate `u_0, v_0, u_1, v_1, …`, and
    /// the node survives iff `R(n, ⟨u_0,…,u_{t-1}⟩, ⟨v_0,…,v_{t-1}⟩)` holds
    /// for every completed pair count `t`. An odd tail (a `u` without its
    /// `v`) is admitted iff its even-length prefix is.
    pub fn interleave_unfold<R>(r: R, bound: u64) -> TreeSpec
    where
        R: Fn(u64, SeqCode, SeqCode) -> bool + Send + Sync + 'static,
    {
        TreeSpec::lazy(
            move |w| {
                if w.is_empty() {
                    return Some(true);
                }
                let head = w.get(0).unwrap();
                let tail = &w.as_slice()[1..];
                let pairs = tail.len() / 2;
                for t in 0..pairs {
                    let us = (0..t).map(|i| tail[2 * i]).collect::<Vec<_>>();
                    let vs = (0..t).map(|i| tail[2 * i + 1]).collect::<Vec<_>>();
                    let a = seqcode::encode(&FinSeq::new(us)).ok()?;
                    let b = seqcode::encode(&FinSeq::new(vs)).ok()?;
                    if !r(head, a, b) {
                        return Some(false);
                    }
                }
                Some(true)
            },
            move |_| bound,
        )
    }

    /// Membership test, evaluated by the representation's defining
    /// formula.
    pub fn member(&self, u: &FinSeq) -> Result<bool, TreeError> {
        match self {
            TreeSpec::Finite(nodes) => Ok(nodes.contains(u)),
            TreeSpec::Regular(a) => Ok(a.member(u)),
            TreeSpec::Lazy(lazy) => {
                let accepted = (lazy.member)(u).ok_or(TreeError::OracleError)?;
                if accepted {
                    // Spot-check prefix closure along the query path.
                    for n in 0..u.len() {
                        let p = u.prefix(n);
                        if !(lazy.member)(&p).ok_or(TreeError::OracleError)? {
                            return Err(TreeError::PrefixClosureViolation(u.clone()));
                        }
                    }
                }
                Ok(accepted)
            }
            TreeSpec::Derived(d) => d.member(u),
        }
    }

    /// The labels of the children of `u`, in increasing order. `cap`
    /// bounds every intrinsically unbounded enumeration (lazy label
    /// ranges and candidate codes in `att`); finite and regular trees
    /// enumerate exactly. Derived labels (pairing values in sums and
    /// products, codes in `att`) may exceed `cap`.
    pub fn child_labels(&self, u: &FinSeq, cap: u64) -> Result<Vec<u64>, TreeError> {
        match self {
            TreeSpec::Finite(nodes) => {
                let mut out = Vec::new();
                for v in nodes.range(u.clone()..) {
                    if u.is_proper_prefix_of(v) {
                        if v.len() == u.len() + 1 {
                            out.push(v.get(u.len()).unwrap());
                        }
                    } else if !u.is_prefix_of(v) {
                        break;
                    }
                }
                out.sort_unstable();
                out.dedup();
                Ok(out)
            }
            TreeSpec::Regular(a) => match a.state_of(u) {
                Some(q) => Ok(a.labels_from(q)),
                None => Ok(Vec::new()),
            },
            TreeSpec::Lazy(lazy) => {
                let b = (lazy.bound)(u).min(cap);
                let mut out = Vec::new();
                for k in 0..=b {
                    if self.member(&u.child(k))? {
                        out.push(k);
                    }
                }
                Ok(out)
            }
            TreeSpec::Derived(d) => d.child_labels(u, cap),
        }
    }

    /// Breadth-first enumeration of the nodes down to `depth`, children
    /// per [`TreeSpec::child_labels`]. Deterministic.
    pub fn explore(&self, depth: usize, cap: u64) -> Result<Vec<FinSeq>, TreeError> {
        let mut out = alloc::vec![FinSeq::empty()];
        let mut frontier = alloc::vec![FinSeq::empty()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for u in &frontier {
                for k in self.child_labels(u, cap)? {
                    next.push(u.child(k));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        Ok(out)
    }

    /// All nodes of a provably finite tree (explicit sets, and automata
    /// whose reachable part is acyclic). Lazy and derived trees are
    /// rejected: their extent cannot be certified.
    pub fn enumerate_finite(&self) -> Result<Vec<FinSeq>, TreeError> {
        match self {
            TreeSpec::Finite(nodes) => Ok(nodes.iter().cloned().collect()),
            TreeSpec::Regular(a) => {
                // Any reachable cycle makes the tree infinite.
                let mut on_path = alloc::vec![false; a.state_count()];
                let mut done = alloc::vec![false; a.state_count()];
                fn dfs(
                    a: &Automaton,
                    q: usize,
                    on_path: &mut [bool],
                    done: &mut [bool],
                ) -> Result<(), TreeError> {
                    if on_path[q] {
                        return Err(TreeError::NonFiniteTree);
                    }
                    if done[q] {
                        return Ok(());
                    }
                    on_path[q] = true;
                    for label in a.labels_from(q) {
                        dfs(a, a.step(q, label).unwrap(), on_path, done)?;
                    }
                    on_path[q] = false;
                    done[q] = true;
                    Ok(())
                }
                dfs(a, a.initial(), &mut on_path, &mut done)?;
                self.explore(a.state_count(), u64::MAX)
            }
            _ => Err(TreeError::NonFiniteTree),
        }
    }
}

impl Derived {
    fn member(&self, w: &FinSeq) -> Result<bool, TreeError> {
        match self {
            Derived::Subtree { tree, at } => Ok(w.is_compatible(at) && tree.member(w)?),
            Derived::ShiftClosure(t) => {
                let mut core_len = w.len();
                while core_len > 0 && w.get(core_len - 1) == Some(0) {
                    core_len -= 1;
                }
                let core = w.prefix(core_len);
                if core.iter().any(|k| k == 0) {
                    return Ok(false);
                }
                let lowered = FinSeq::new(core.iter().map(|k| k - 1).collect());
                t.member(&lowered)
            }
            Derived::Sum(t, s) => {
                if w.is_empty() {
                    return Ok(true);
                }
                let (tag, k) = seqcode::unpair(w.get(0).unwrap());
                let mut items = alloc::vec![k];
                items.extend(&w.as_slice()[1..]);
                let retagged = FinSeq::new(items);
                match tag {
                    0 => t.member(&retagged),
                    1 => s.member(&retagged),
                    _ => Ok(false),
                }
            }
            Derived::Product(t, s) => {
                if w.is_empty() {
                    return Ok(true);
                }
                match seqcode::split_product_node(w) {
                    Ok((u, v)) => Ok(t.member(&u)? && s.member(&v)?),
                    Err(SeqError::MalformedPadding) => Ok(false),
                    Err(e) => Err(e.into()),
                }
            }
            Derived::Att(t) => {
                let decoded = match att_decode(w) {
                    Some(d) => d,
                    None => return Ok(false),
                };
                for d in &decoded {
                    if !t.member(d)? {
                        return Ok(false);
                    }
                }
                Ok(att_patterns_respected(&decoded))
            }
        }
    }

    fn child_labels(&self, w: &FinSeq, cap: u64) -> Result<Vec<u64>, TreeError> {
        match self {
            Derived::Subtree { tree, at } => {
                if !w.is_compatible(at) {
                    return Ok(Vec::new());
                }
                if w.len() < at.len() {
                    let forced = at.get(w.len()).unwrap();
                    return Ok(if tree.member(&w.child(forced))? {
                        alloc::vec![forced]
                    } else {
                        Vec::new()
                    });
                }
                tree.child_labels(w, cap)
            }
            Derived::ShiftClosure(t) => {
                if !self.member(w)? {
                    return Ok(Vec::new());
                }
                let padded = !w.is_empty() && w.get(w.len() - 1) == Some(0);
                let mut out = alloc::vec![0];
                if !padded {
                    let lowered = FinSeq::new(w.iter().map(|k| k - 1).collect());
                    out.extend(t.child_labels(&lowered, cap)?.into_iter().map(|k| k + 1));
                }
                out.sort_unstable();
                Ok(out)
            }
            Derived::Sum(t, s) => {
                if w.is_empty() {
                    let mut out = Vec::new();
                    for k in t.child_labels(&FinSeq::empty(), cap)? {
                        out.push(seqcode::pair(0, k));
                    }
                    for k in s.child_labels(&FinSeq::empty(), cap)? {
                        out.push(seqcode::pair(1, k));
                    }
                    out.sort_unstable();
                    Ok(out)
                } else {
                    let (tag, k) = seqcode::unpair(w.get(0).unwrap());
                    let mut items = alloc::vec![k];
                    items.extend(&w.as_slice()[1..]);
                    let retagged = FinSeq::new(items);
                    match tag {
                        0 => t.child_labels(&retagged, cap),
                        1 => s.child_labels(&retagged, cap),
                        _ => Ok(Vec::new()),
                    }
                }
            }
            Derived::Product(t, s) => {
                let (u, v) = match seqcode::split_product_node(w) {
                    Ok(parts) => parts,
                    Err(_) => return Ok(Vec::new()),
                };
                let left_closed = u.len() < w.len();
                let right_closed = v.len() < w.len();
                let mut lefts = alloc::vec![ExtVal::NEG_ONE];
                if !left_closed {
                    lefts.extend(t.child_labels(&u, cap)?.into_iter().map(ExtVal::nat));
                }
                let mut rights = alloc::vec![ExtVal::NEG_ONE];
                if !right_closed {
                    rights.extend(s.child_labels(&v, cap)?.into_iter().map(ExtVal::nat));
                }
                let mut out = Vec::new();
                for &a in &lefts {
                    for &b in &rights {
                        if a.is_neg() && b.is_neg() {
                            continue;
                        }
                        out.push(seqcode::pair_ext(a, b).value() as u64);
                    }
                }
                out.sort_unstable();
                out.dedup();
                Ok(out)
            }
            Derived::Att(_) => {
                let mut out = Vec::new();
                for c in 1..=cap {
                    if self.member(&w.child(c))? {
                        out.push(c);
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Decodes an `att` node entrywise; `None` if an entry is not a sequence
/// code.
fn att_decode(w: &FinSeq) -> Option<Vec<FinSeq>> {
    w.iter().map(|c| seqcode::decode(c).ok()).collect()
}

/// The two pattern implications of the attempted-embedding tree, over all
/// index pairs.
fn att_patterns_respected(decoded: &[FinSeq]) -> bool {
    for n in 0..decoded.len() {
        for m in (n + 1)..decoded.len() {
            let sn = nth_binary_string(n as u64);
            let sm = nth_binary_string(m as u64);
            if sn.is_incompatible(&sm) && !decoded[n].is_incompatible(&decoded[m]) {
                return false;
            }
            if sn.is_proper_prefix_of(&sm) && !decoded[n].is_proper_prefix_of(&decoded[m]) {
                return false;
            }
            if sm.is_proper_prefix_of(&sn) && !decoded[m].is_proper_prefix_of(&decoded[n]) {
                return false;
            }
        }
    }
    true
}

/// The map `2^{≤d} → T` induced by an `att(T)` node covering positions
/// `0..2^{d+1}-1`: pattern `s_n` goes to the decoded entry at `n`. Returns
/// `None` if an entry fails to decode.
pub fn att_induced_map(w: &FinSeq) -> Option<Vec<(FinSeq, FinSeq)>> {
    let decoded = att_decode(w)?;
    Some(
        decoded
            .into_iter()
            .enumerate()
            .map(|(n, d)| (nth_binary_string(n as u64), d))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcode::{encode, pair, pair_ext, zip_pad};

    fn seq(items: &[u64]) -> FinSeq {
        FinSeq::from(items)
    }

    fn finite(nodes: &[&[u64]]) -> TreeSpec {
        TreeSpec::finite(nodes.iter().map(|n| FinSeq::from(*n))).unwrap()
    }

    #[test]
    fn nth_binary_string_prefix() {
        let expect: [&[u64]; 7] = [&[], &[0], &[1], &[0, 0], &[0, 1], &[1, 0], &[1, 1]];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(nth_binary_string(i as u64), FinSeq::from(*e));
        }
        // length-then-lex continues: s_7 = (0,0,0)
        assert_eq!(nth_binary_string(7), seq(&[0, 0, 0]));
    }

    #[test]
    fn finite_construction_guards() {
        assert_eq!(
            TreeSpec::finite(core::iter::empty()).unwrap_err(),
            TreeError::EmptyTree
        );
        assert_eq!(
            TreeSpec::finite([seq(&[0])]).unwrap_err(),
            TreeError::NotPrefixClosed(seq(&[0]))
        );
    }

    #[test]
    fn member_examples() {
        let t = finite(&[&[], &[0], &[0, 1]]);
        assert!(t.member(&seq(&[0, 1])).unwrap());
        assert!(!finite(&[&[], &[0]]).member(&seq(&[1])).unwrap());
        assert!(TreeSpec::binary().member(&seq(&[0, 1, 1, 0])).unwrap());
        assert!(!TreeSpec::binary().member(&seq(&[0, 2])).unwrap());
    }

    #[test]
    fn lazy_prefix_closure_is_spot_checked() {
        // Admits (5) but not its prefix (): broken oracle.
        let broken = TreeSpec::lazy(|u| Some(u.len() == 1), |_| 8);
        assert_eq!(
            broken.member(&seq(&[5])),
            Err(TreeError::PrefixClosureViolation(seq(&[5])))
        );
    }

    #[test]
    fn subtree_examples() {
        let t = TreeSpec::binary().subtree_at(seq(&[0]));
        assert!(t.member(&seq(&[0, 1])).unwrap());
        assert!(!t.member(&seq(&[1])).unwrap());
        let u = finite(&[&[], &[0], &[1]]).subtree_at(seq(&[0]));
        assert!(u.member(&FinSeq::empty()).unwrap());
        assert!(u.member(&seq(&[0])).unwrap());
        assert!(!u.member(&seq(&[1])).unwrap());
    }

    #[test]
    fn shift_closure_examples() {
        let t = finite(&[&[], &[0]]).shift_closure();
        assert!(t.member(&seq(&[1])).unwrap());
        assert!(t.member(&seq(&[1, 0, 0])).unwrap());
        assert!(!t.member(&seq(&[2])).unwrap());
        assert!(t.member(&seq(&[0])).unwrap());
        // 0 before a positive entry is outside the closure tree.
        assert!(!t.member(&seq(&[0, 1])).unwrap());
    }

    #[test]
    fn sum_examples() {
        let t = finite(&[&[], &[0]]);
        let s = finite(&[&[], &[1]]);
        let sum = TreeSpec::sum(&t, &s);
        assert!(sum.member(&seq(&[pair(0, 0)])).unwrap());
        assert!(sum.member(&seq(&[pair(1, 1)])).unwrap());
        assert_eq!(pair(1, 1), 4);
        assert!(!sum.member(&seq(&[pair(0, 1)])).unwrap());
        assert!(sum.member(&FinSeq::empty()).unwrap());
    }

    #[test]
    fn product_examples() {
        let t = finite(&[&[], &[1], &[1, 2]]);
        let s = finite(&[&[], &[3], &[4]]);
        let prod = TreeSpec::product(&t, &s);
        assert!(prod.member(&seq(&[24, 5])).unwrap());
        assert_eq!(zip_pad(&seq(&[1, 2]), &seq(&[3])), seq(&[24, 5]));
        assert!(prod.member(&FinSeq::empty()).unwrap());
        let lone = pair_ext(ExtVal::nat(2), ExtVal::nat(3)).value() as u64;
        assert!(!prod.member(&seq(&[lone])).unwrap());
    }

    #[test]
    fn product_brute_force_agreement() {
        let t = finite(&[&[], &[1], &[1, 2], &[0]]);
        let s = finite(&[&[], &[3], &[4], &[4, 0]]);
        let prod = TreeSpec::product(&t, &s);
        let t_nodes = t.enumerate_finite().unwrap();
        let s_nodes = s.enumerate_finite().unwrap();
        let mut brute = BTreeSet::new();
        brute.insert(FinSeq::empty());
        for u in &t_nodes {
            for v in &s_nodes {
                brute.insert(zip_pad(u, v));
            }
        }
        let explored: BTreeSet<FinSeq> = prod.explore(6, u64::MAX).unwrap().into_iter().collect();
        assert_eq!(explored, brute);
    }

    #[test]
    fn sum_brute_force_agreement() {
        let t = finite(&[&[], &[0], &[0, 2]]);
        let s = finite(&[&[], &[1], &[5]]);
        let sum = TreeSpec::sum(&t, &s);
        let mut brute = BTreeSet::new();
        brute.insert(FinSeq::empty());
        for (tree, tag) in [(&t, 0), (&s, 1)] {
            for u in tree.enumerate_finite().unwrap() {
                if u.is_empty() {
                    continue;
                }
                let mut items = alloc::vec![pair(tag, u.get(0).unwrap())];
                items.extend(&u.as_slice()[1..]);
                brute.insert(FinSeq::new(items));
            }
        }
        let explored: BTreeSet<FinSeq> = sum.explore(6, u64::MAX).unwrap().into_iter().collect();
        assert_eq!(explored, brute);
    }

    #[test]
    fn att_examples() {
        let att = TreeSpec::binary().att();
        let idwit = FinSeq::new(
            (0..3)
                .map(|n| encode(&nth_binary_string(n)).unwrap().value())
                .collect(),
        );
        assert!(att.member(&idwit).unwrap());
        assert!(att.member(&FinSeq::empty()).unwrap());

        // A single-branch tree has no incompatible node pair, so no att
        // node reaches length 3; exhaustive over entry codes <= 40.
        let chain0 = TreeSpec::elementwise(|k| k == 0, 0);
        let catt = chain0.att();
        for c0 in 1..=40 {
            for c1 in 1..=40 {
                for c2 in 1..=40 {
                    assert!(!catt.member(&seq(&[c0, c1, c2])).unwrap());
                }
            }
        }
        // Length 2 is reachable: codes of () and (0).
        let w = seq(&[1, encode(&seq(&[0])).unwrap().value()]);
        assert!(catt.member(&w).unwrap());
    }

    #[test]
    fn att_children_enumeration() {
        let att = TreeSpec::binary().att();
        let kids = att.child_labels(&FinSeq::empty(), 40).unwrap();
        // Children of the root are codes of arbitrary binary-tree nodes.
        assert!(kids.contains(&1));
        assert!(kids.contains(&encode(&seq(&[0])).unwrap().value()));
        assert!(!kids.contains(&0));
    }

    #[test]
    fn elementwise_examples() {
        let evens = TreeSpec::elementwise(|k| k.is_multiple_of(2), 8);
        assert!(evens.member(&seq(&[2, 4, 0])).unwrap());
        assert!(!evens.member(&seq(&[2, 3])).unwrap());
        let none = TreeSpec::elementwise(|_| false, 8);
        assert_eq!(none.explore(3, 8).unwrap(), alloc::vec![FinSeq::empty()]);
        let five = TreeSpec::elementwise(|k| k == 5, 8);
        for d in 0..6 {
            let nodes = five.explore(d, 8).unwrap();
            assert_eq!(nodes.len(), d + 1);
            assert!(nodes.iter().all(|u| u.iter().all(|k| k == 5)));
        }
    }

    #[test]
    fn chain_examples() {
        let lt = TreeSpec::chain(|a, b| a < b, 10);
        assert!(lt.member(&seq(&[5, 3, 1])).unwrap());
        assert!(!lt.member(&seq(&[1, 3])).unwrap());
        // A finite strict order has descents no longer than its field.
        let ord = crate::linorders::LinOrder::from_ranked(alloc::vec![0, 1, 2]);
        let fin = TreeSpec::chain(
            move |a, b| ord.contains(a) && ord.contains(b) && ord.lt(a, b).unwrap(),
            4,
        );
        let nodes = fin.explore(5, 4).unwrap();
        assert!(nodes.iter().all(|u| u.len() <= 3));
        assert!(nodes.iter().any(|u| u.len() == 3));
    }

    #[test]
    fn sections_toy_examples() {
        // Documented toy predicate: even heads demand all-zero tails,
        // odd heads demand tail length at most 2.
        let toy = |n: u64, s: SeqCode| {
            let tail = seqcode::decode_code(s);
            if n.is_multiple_of(2) {
                tail.iter().all(|k| k == 0)
            } else {
                tail.len() <= 2
            }
        };
        let t = TreeSpec::sections(toy, 9);
        assert!(t.member(&seq(&[2, 0, 0])).unwrap());
        assert!(!t.member(&seq(&[2, 1])).unwrap());
        assert!(t.member(&seq(&[3, 7, 9])).unwrap());
        assert!(!t.member(&seq(&[3, 7, 9, 1])).unwrap());
        assert!(t.member(&FinSeq::empty()).unwrap());
    }

    #[test]
    fn bar_examples() {
        let len2 = TreeSpec::bar(|s| seqcode::decode_code(s).len() >= 2, 5);
        assert!(len2.member(&seq(&[4, 4])).unwrap());
        assert!(!len2.member(&seq(&[4, 4, 4])).unwrap());
        let never = TreeSpec::bar(|_| false, 5);
        assert!(never.member(&seq(&[9, 9, 9, 9])).unwrap());
        let even_code = TreeSpec::bar(|s| s.value() % 2 == 0, 5);
        // () has code 1 (odd), (0) has code 2 (even): any extension of (0)
        // dies, while (1) (code 5) lives.
        assert!(even_code.member(&seq(&[0])).unwrap());
        assert!(!even_code.member(&seq(&[0, 0])).unwrap());
        assert!(
            even_code.member(&seq(&[1, 0])).unwrap()
                == (encode(&seq(&[1])).unwrap().value() % 2 == 1)
        );
    }

    #[test]
    fn interleave_unfold_examples() {
        let full = TreeSpec::interleave_unfold(|_, _, _| true, 4);
        assert!(full.member(&seq(&[7, 1, 2, 3])).unwrap());
        assert!(full.member(&FinSeq::empty()).unwrap());
        let zeros = TreeSpec::interleave_unfold(
            |_, a, _| seqcode::decode_code(a).iter().all(|k| k == 0),
            4,
        );
        // The t-th condition sees the first t pairs, so constraints lag
        // one level behind the entries.
        assert!(zeros.member(&seq(&[7, 1])).unwrap());
        assert!(zeros.member(&seq(&[7, 1, 2])).unwrap());
        assert!(zeros.member(&seq(&[7, 1, 2, 3])).unwrap());
        assert!(!zeros.member(&seq(&[7, 1, 2, 3, 0])).unwrap());
        assert!(zeros.member(&seq(&[7, 0, 2, 0])).unwrap());
        assert!(zeros.member(&seq(&[7, 0, 2, 9])).unwrap());
        // Odd tail admitted iff the even prefix is.
        assert!(!zeros.member(&seq(&[7, 1, 2, 3, 0, 0])).unwrap());
    }

    #[test]
    fn regular_tree_and_finiteness() {
        let mut edges = BTreeMap::new();
        edges.insert((0usize, 0u64), 1usize);
        let line = Automaton::new(alloc::vec!["a".into(), "b".into()], 0, edges).unwrap();
        let t = TreeSpec::regular(line).unwrap();
        assert_eq!(t.enumerate_finite().unwrap().len(), 2);

        let mut edges = BTreeMap::new();
        edges.insert((0usize, 0u64), 0usize);
        edges.insert((0usize, 1u64), 0usize);
        let bin = Automaton::new(alloc::vec!["q".into()], 0, edges).unwrap();
        let t = TreeSpec::regular(bin).unwrap();
        assert_eq!(t.enumerate_finite(), Err(TreeError::NonFiniteTree));
        assert!(t.member(&seq(&[0, 1, 1, 0])).unwrap());
        assert!(!t.member(&seq(&[2])).unwrap());
    }

    #[test]
    fn prefix_closure_sampled_across_variants() {
        // Narrow-branching specs to depth 8, bushy derived ones to depth 4.
        let deep: Vec<TreeSpec> = alloc::vec![
            TreeSpec::binary(),
            finite(&[&[], &[0], &[0, 0], &[1]]).shift_closure(),
            TreeSpec::bar(|s| seqcode::decode_code(s).len() >= 3, 2),
            TreeSpec::chain(|a, b| a < b, 9),
        ];
        let bushy: Vec<TreeSpec> = alloc::vec![
            TreeSpec::binary().att(),
            TreeSpec::sum(&TreeSpec::binary(), &finite(&[&[], &[2]])),
            TreeSpec::product(&finite(&[&[], &[1], &[1, 2]]), &TreeSpec::binary()),
        ];
        for (tree, depth) in deep
            .iter()
            .map(|t| (t, 8))
            .chain(bushy.iter().map(|t| (t, 4)))
        {
            for u in tree.explore(depth, 12).unwrap() {
                for n in 0..u.len() {
                    assert!(tree.member(&u.prefix(n)).unwrap(), "{tree:?} open at {u:?}");
                }
            }
        }
    }

    #[test]
    fn product_initial_segment_direction() {
        // If one product node is an initial segment of another, the
        // components nest as well. The converse fails: with u = (1),
        // u' = (1,2), v = v' = (4,5) the padding entry <1|-1> differs
        // from <1|2>... the zips diverge at the second entry.
        let u = seq(&[1]);
        let u2 = seq(&[1, 2]);
        let v = seq(&[4, 5]);
        assert!(u.is_prefix_of(&u2));
        assert!(!zip_pad(&u, &v).is_prefix_of(&zip_pad(&u2, &v)));

        let pool: Vec<FinSeq> = alloc::vec![
            FinSeq::empty(),
            seq(&[0]),
            seq(&[1]),
            seq(&[1, 2]),
            seq(&[4, 5]),
            seq(&[4]),
            seq(&[0, 0, 3]),
        ];
        for a in &pool {
            for b in &pool {
                for c in &pool {
                    for d in &pool {
                        let w = zip_pad(a, b);
                        let w2 = zip_pad(c, d);
                        if w.is_prefix_of(&w2) {
                            assert!(a.is_prefix_of(c) && b.is_prefix_of(d));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tree_specs_are_send_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<TreeSpec>();
        assert_send_sync::<Automaton>();
    }
}
