//! Cantor-Bendixson decomposition and coin-toss body measure for regular
//! (automaton-presented) trees.
//!
//! On a finite deterministic automaton all the questions that are
//! undecidable for general trees become graph questions:
//!
//! - a state is *live* when some infinite path starts there (it reaches a
//!   cycle);
//! - a state is *uncountable* when it reaches a strongly connected
//!   component carrying two distinct cycles; exactly then uncountably
//!   many infinite paths start there, and restricting the automaton to
//!   uncountable states presents the perfect kernel of the body, with the
//!   scattered part as complement;
//! - for a binary alphabet, the cone above a node has positive coin-toss
//!   measure exactly when its state reaches a *complete closed component*:
//!   a state set closed under both transitions in which every state has
//!   both. Outside such a component some length-`|Q|` continuation dies
//!   under every state, so the surviving mass contracts by a fixed factor
//!   every `|Q|` levels and the limit is zero — measure positivity is the
//!   absorbing/transient dichotomy of the associated substochastic
//!   iteration.
//!
//! The measure itself is reported as the exact non-increasing sequence
//! `v_d = (#depth-d nodes)/2^d` of upper bounds for the body measure,
//! computed by rational vector iteration; the limit value is asserted only
//! through the graph criterion, never from a truncated sequence.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::seqcode::FinSeq;
use crate::trees::{Automaton, TreeError};

/// Exact rational used for measures.
pub type Measure = Ratio<BigInt>;

/// Errors of the decomposition and measure operations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CbError {
    /// The node is not in the automaton's tree.
    NotAMember(FinSeq),
    /// Measure operations need the alphabet `{0,1}`.
    NonBinaryAlphabet,
    /// The cone has measure zero, so no splitting witness exists.
    NoPositiveMeasure,
    Tree(TreeError),
}

impl fmt::Display for CbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CbError::NotAMember(u) => write!(f, "{u:?} is not a node of the automaton tree"),
            CbError::NonBinaryAlphabet => write!(f, "operation requires alphabet {{0,1}}"),
            CbError::NoPositiveMeasure => write!(f, "cone has measure zero"),
            CbError::Tree(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CbError {}

impl From<TreeError> for CbError {
    fn from(e: TreeError) -> Self {
        CbError::Tree(e)
    }
}

/// Per-state classification flags. `uncountable` implies `live`, and
/// `positive` implies `live`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StateClass {
    pub live: bool,
    pub uncountable: bool,
    pub positive: bool,
}

/// Where the space sitting above a node lands in the Cantor-Bendixson
/// decomposition. The node itself is always an isolated point of the
/// space; the classification describes the branches through it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScatClass {
    /// No branch passes through the node: the cone holds finitely many
    /// nodes, every one of them scattered.
    NodeScattered,
    /// The state is uncountable: branches through the node meet the
    /// perfect kernel.
    BranchKernelCone,
    /// The state is live but countable: every branch through the node is
    /// scattered.
    BranchScatteredCone,
}

/// A report of the exact upper-bound iteration for the body measure.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MeasureReport {
    /// `v_d` for `d = 0..=iterations`, non-increasing.
    pub upper_bounds: Vec<Measure>,
    /// Positivity of the body measure, decided by the graph criterion.
    pub positive: bool,
    pub iterations: u64,
}

fn successors(a: &Automaton, q: usize) -> impl Iterator<Item = usize> + '_ {
    a.labels_from(q)
        .into_iter()
        .map(move |l| a.step(q, l).unwrap())
}

/// `reach[q]` = states reachable from `q` in zero or more steps.
fn reachability(a: &Automaton) -> Vec<BTreeSet<usize>> {
    let n = a.state_count();
    let mut reach = Vec::with_capacity(n);
    for q in 0..n {
        let mut seen = BTreeSet::from([q]);
        let mut stack = alloc::vec![q];
        while let Some(r) = stack.pop() {
            for t in successors(a, r) {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        reach.push(seen);
    }
    reach
}

/// States whose strongly connected component carries at least two distinct
/// cycles (counting parallel edges): more intra-component edges than
/// states.
fn rich_scc_states(a: &Automaton, reach: &[BTreeSet<usize>]) -> BTreeSet<usize> {
    let n = a.state_count();
    let mut rich = BTreeSet::new();
    for q in 0..n {
        let scc: BTreeSet<usize> = reach[q]
            .iter()
            .copied()
            .filter(|&r| reach[r].contains(&q))
            .collect();
        let intra = a
            .edges()
            .filter(|&(from, _, to)| scc.contains(&from) && scc.contains(&to))
            .count();
        if intra > scc.len() {
            rich.insert(q);
        }
    }
    rich
}

/// States from which some infinite path exists.
pub fn live_states(a: &Automaton) -> BTreeSet<usize> {
    let reach = reachability(a);
    let n = a.state_count();
    // A state is on a cycle when it reaches itself in at least one step.
    let on_cycle: BTreeSet<usize> = (0..n)
        .filter(|&q| successors(a, q).any(|t| reach[t].contains(&q)))
        .collect();
    (0..n)
        .filter(|&q| reach[q].iter().any(|r| on_cycle.contains(r)))
        .collect()
}

/// States from which uncountably many infinite paths exist: those reaching
/// a component with two distinct cycles.
pub fn uncountable_states(a: &Automaton) -> BTreeSet<usize> {
    let reach = reachability(a);
    let rich = rich_scc_states(a, &reach);
    (0..a.state_count())
        .filter(|&q| reach[q].iter().any(|r| rich.contains(r)))
        .collect()
}

/// All three flags per state.
pub fn classify_states(a: &Automaton) -> Vec<StateClass> {
    let live = live_states(a);
    let uncountable = uncountable_states(a);
    let positive = complete_closed_reachers(a);
    (0..a.state_count())
        .map(|q| StateClass {
            live: live.contains(&q),
            uncountable: uncountable.contains(&q),
            positive: positive.as_ref().is_some_and(|p| p.contains(&q)),
        })
        .collect()
}

/// The restriction of the automaton to its uncountable states. Its tree
/// presents the perfect kernel of the body; the scattered part of the
/// body is the complement. Returns the empty automaton when the initial
/// state is countable.
pub fn perfect_kernel(a: &Automaton) -> Automaton {
    let keep = uncountable_states(a);
    if !keep.contains(&a.initial()) {
        return Automaton::empty();
    }
    let order: Vec<usize> = keep.iter().copied().collect();
    let index_of = |q: usize| order.iter().position(|&r| r == q).unwrap();
    let states = order.iter().map(|&q| a.state_names()[q].clone()).collect();
    let edges = a
        .edges()
        .filter(|&(from, _, to)| keep.contains(&from) && keep.contains(&to))
        .map(|(from, label, to)| ((index_of(from), label), index_of(to)))
        .collect();
    Automaton::new(states, index_of(a.initial()), edges).expect("kernel restriction is valid")
}

/// Classifies the decomposition above a node.
pub fn scat_member(a: &Automaton, u: &FinSeq) -> Result<ScatClass, CbError> {
    let state = a
        .state_of(u)
        .ok_or_else(|| CbError::NotAMember(u.clone()))?;
    if uncountable_states(a).contains(&state) {
        Ok(ScatClass::BranchKernelCone)
    } else if live_states(a).contains(&state) {
        Ok(ScatClass::BranchScatteredCone)
    } else {
        Ok(ScatClass::NodeScattered)
    }
}

fn require_binary(a: &Automaton) -> Result<(), CbError> {
    if a.alphabet().iter().all(|&l| l <= 1) {
        Ok(())
    } else {
        Err(CbError::NonBinaryAlphabet)
    }
}

/// The largest state set closed under both transitions in which every
/// state has both; `None` when it is empty.
fn complete_closed_component(a: &Automaton) -> Option<BTreeSet<usize>> {
    let mut keep: BTreeSet<usize> = (0..a.state_count()).collect();
    loop {
        let next: BTreeSet<usize> = keep
            .iter()
            .copied()
            .filter(|&q| {
                [0u64, 1]
                    .iter()
                    .all(|&l| a.step(q, l).is_some_and(|t| keep.contains(&t)))
            })
            .collect();
        if next.len() == keep.len() {
            return (!keep.is_empty()).then_some(keep);
        }
        keep = next;
    }
}

/// States reaching the complete closed component, when the alphabet is
/// binary.
fn complete_closed_reachers(a: &Automaton) -> Option<BTreeSet<usize>> {
    require_binary(a).ok()?;
    let core = complete_closed_component(a)?;
    let reach = reachability(a);
    Some(
        (0..a.state_count())
            .filter(|&q| reach[q].iter().any(|r| core.contains(r)))
            .collect(),
    )
}

/// Exact decision of `μ(cone above u) > 0`: the state of `u` reaches a
/// complete closed component.
pub fn positive_measure(a: &Automaton, u: &FinSeq) -> Result<bool, CbError> {
    require_binary(a)?;
    let state = a
        .state_of(u)
        .ok_or_else(|| CbError::NotAMember(u.clone()))?;
    Ok(complete_closed_reachers(a).is_some_and(|p| p.contains(&state)))
}

/// The exact upper-bound iteration `v_d = (#depth-d nodes)/2^d` for the
/// coin-toss measure of the body, from the initial state, plus the
/// positivity decision.
pub fn measure_body(a: &Automaton, max_depth: u64) -> Result<MeasureReport, CbError> {
    require_binary(a)?;
    let n = a.state_count();
    let half = Measure::new(BigInt::one(), BigInt::from(2));
    let mut m: Vec<Measure> = alloc::vec![Measure::one(); n];
    let mut upper_bounds = Vec::with_capacity(max_depth as usize + 1);
    upper_bounds.push(m[a.initial()].clone());
    for _ in 0..max_depth {
        let mut next = alloc::vec![Measure::zero(); n];
        for (q, slot) in next.iter_mut().enumerate() {
            for l in [0u64, 1] {
                if let Some(t) = a.step(q, l) {
                    *slot += &half * &m[t];
                }
            }
        }
        m = next;
        upper_bounds.push(m[a.initial()].clone());
    }
    let positive = positive_measure(a, &FinSeq::empty())?;
    Ok(MeasureReport {
        upper_bounds,
        positive,
        iterations: max_depth,
    })
}

/// Two incompatible proper extensions of `u` carrying positive measure,
/// found by descending a shortest path into the complete closed component
/// (least labels break ties) and splitting there. Deterministic.
pub fn splitting_witness(a: &Automaton, u: &FinSeq) -> Result<(FinSeq, FinSeq), CbError> {
    if !positive_measure(a, u)? {
        return Err(CbError::NoPositiveMeasure);
    }
    let core = complete_closed_component(a).expect("positive measure implies a core");
    // BFS distances toward the core.
    let n = a.state_count();
    let mut dist = alloc::vec![usize::MAX; n];
    let mut frontier: Vec<usize> = core.iter().copied().collect();
    for &q in &frontier {
        dist[q] = 0;
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for q in 0..n {
            if dist[q] == usize::MAX && successors(a, q).any(|t| frontier.contains(&t)) {
                dist[q] = dist[frontier[0]] + 1;
                next.push(q);
            }
        }
        frontier = next;
    }
    let mut x = u.clone();
    let mut state = a.state_of(u).unwrap();
    while dist[state] > 0 {
        let label = a
            .labels_from(state)
            .into_iter()
            .find(|&l| dist[a.step(state, l).unwrap()] == dist[state] - 1)
            .expect("a shortest path step exists");
        x = x.child(label);
        state = a.step(state, label).unwrap();
    }
    Ok((x.child(0), x.child(1)))
}

/// The embedding of the complete binary tree to the given depth, built by
/// iterating [`splitting_witness`]: the image of a pattern's two children
/// is the witness pair at the pattern's image. Images preserve proper
/// extension and incompatibility.
pub fn binary_embedding(a: &Automaton, depth: u64) -> Result<Vec<(FinSeq, FinSeq)>, CbError> {
    let mut map = alloc::vec![(FinSeq::empty(), FinSeq::empty())];
    let mut frontier = alloc::vec![(FinSeq::empty(), FinSeq::empty())];
    if !positive_measure(a, &FinSeq::empty())? {
        return Err(CbError::NoPositiveMeasure);
    }
    for _ in 0..depth {
        let mut next = Vec::new();
        for (pattern, image) in &frontier {
            let (l, r) = splitting_witness(a, image)?;
            next.push((pattern.child(0), l));
            next.push((pattern.child(1), r));
        }
        map.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(map)
}
