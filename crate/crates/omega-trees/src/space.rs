//! The point space carried by a tree: nodes plus infinite branches, under
//! the exact ultrametric `d(x,y) = 1/(least disagreement + 1)`.
//!
//! A node is treated as the infinite sequence that agrees with it and then
//! takes the constant value `-1`, so a node and any extension of it
//! disagree first at the node's length. Every node is an isolated point;
//! the branches form the closed, nowhere dense remainder.
//!
//! Distances are exact rationals of the form `1/(n+1)` or `0`, never
//! floats. Equality of two branch oracles is only semi-decidable, so
//! branch/branch distances are answered as [`DistResult::AtMost`] at a
//! caller-chosen query budget; everything involving at least one node that
//! the budget covers is answered exactly.
//!
//! The module also carries the standard presentation (code `s` goes to the
//! decoded node when that is in the tree, and to the root otherwise), the
//! isometry `rho` onto the body of the shift/closure tree, and the
//! sum/product isomorphisms.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::seqcode::{self, BranchOracle, ExtVal, FinSeq, SeqError};
use crate::trees::{TreeError, TreeSpec};

/// An exact distance value.
pub type Dist = Ratio<u64>;

/// A point of the space: a finite node or an infinite branch given by an
/// index-to-value oracle. Branch prefixes are validated against the tree
/// lazily, as operations scan them.
#[derive(Clone)]
pub enum Point {
    Node(FinSeq),
    Branch(BranchOracle),
}

impl Point {
    pub fn node(items: impl Into<FinSeq>) -> Point {
        Point::Node(items.into())
    }

    pub fn branch<F>(f: F) -> Point
    where
        F: Fn(u64) -> u64 + Send + Sync + 'static,
    {
        Point::Branch(seqcode::branch_fn(f))
    }

    pub fn is_node(&self) -> bool {
        matches!(self, Point::Node(_))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Node(u) => write!(f, "Node{u:?}"),
            Point::Branch(_) => write!(f, "Branch(<oracle>)"),
        }
    }
}

/// An exact distance, or a certified upper bound when the query budget ran
/// out before a disagreement was found.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DistResult {
    Exact(Dist),
    AtMost(Dist),
}

impl DistResult {
    /// The reported rational, exact or bound.
    pub fn value(&self) -> Dist {
        match self {
            DistResult::Exact(d) | DistResult::AtMost(d) => *d,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, DistResult::Exact(_))
    }
}

/// Errors of the point-space operations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SpaceError {
    /// A point failed validation against its tree.
    InvalidPoint,
    /// A branch oracle failed.
    OracleError,
    /// A node/branch classification was not determined within the budget.
    BudgetExceeded,
    Tree(TreeError),
    Seq(SeqError),
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::InvalidPoint => write!(f, "point is not in the space of this tree"),
            SpaceError::OracleError => write!(f, "branch oracle failed"),
            SpaceError::BudgetExceeded => write!(f, "classification exceeded the query budget"),
            SpaceError::Tree(e) => write!(f, "{e}"),
            SpaceError::Seq(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SpaceError {}

impl From<TreeError> for SpaceError {
    fn from(e: TreeError) -> Self {
        SpaceError::Tree(e)
    }
}

impl From<SeqError> for SpaceError {
    fn from(e: SeqError) -> Self {
        SpaceError::Seq(e)
    }
}

/// Incremental, validated reader of a point's values. Branch prefixes are
/// checked for tree membership position by position; nodes read `-1` past
/// their length.
struct PointScan<'a> {
    point: &'a Point,
    tree: &'a TreeSpec,
    prefix: FinSeq,
}

impl<'a> PointScan<'a> {
    fn new(point: &'a Point, tree: &'a TreeSpec) -> PointScan<'a> {
        PointScan {
            point,
            tree,
            prefix: FinSeq::empty(),
        }
    }

    /// The value at position `n`; positions must be visited in increasing
    /// order starting at 0.
    fn next(&mut self, n: u64) -> Result<i64, SpaceError> {
        match self.point {
            Point::Node(u) => Ok(u.get(n as usize).map_or(-1, |v| v as i64)),
            Point::Branch(alpha) => {
                let v = alpha(n).ok_or(SpaceError::OracleError)?;
                self.prefix = self.prefix.child(v);
                if !self.tree.member(&self.prefix)? {
                    return Err(SpaceError::InvalidPoint);
                }
                Ok(v as i64)
            }
        }
    }
}

fn validate_node(tree: &TreeSpec, p: &Point) -> Result<(), SpaceError> {
    if let Point::Node(u) = p {
        if !tree.member(u)? {
            return Err(SpaceError::InvalidPoint);
        }
    }
    Ok(())
}

/// The exact ultrametric, scanned up to `budget` positions when a branch
/// is involved. Node/node distances are always exact; two branches that
/// agree through the budget get the certified bound `1/(budget+1)`.
pub fn dist(tree: &TreeSpec, x: &Point, y: &Point, budget: u64) -> Result<DistResult, SpaceError> {
    validate_node(tree, x)?;
    validate_node(tree, y)?;
    let limit = match (x, y) {
        (Point::Node(u), Point::Node(v)) => u.len().max(v.len()) as u64 + 1,
        _ => budget,
    };
    let mut sx = PointScan::new(x, tree);
    let mut sy = PointScan::new(y, tree);
    for n in 0..limit {
        if sx.next(n)? != sy.next(n)? {
            return Ok(DistResult::Exact(Ratio::new(1, n + 1)));
        }
    }
    match (x, y) {
        (Point::Node(_), Point::Node(_)) => Ok(DistResult::Exact(Ratio::from_integer(0))),
        _ => Ok(DistResult::AtMost(Ratio::new(1, budget + 1))),
    }
}

/// The standard presentation: code `s` goes to the decoded node when `s`
/// is a code of a tree node, and to the root otherwise. Its range is the
/// node set, which is dense in the space.
pub fn presentation(tree: &TreeSpec, s: u64) -> Result<Point, SpaceError> {
    if let Ok(u) = seqcode::decode(s) {
        if tree.member(&u)? {
            return Ok(Point::Node(u));
        }
    }
    Ok(Point::Node(FinSeq::empty()))
}

/// The isometry onto the body of the shift/closure tree: every value is
/// shifted up by one and nodes continue with zeros. The image of a point
/// of the space of `T` is a branch of `S^T`, and distances are preserved
/// exactly.
pub fn rho(tree: &TreeSpec, x: &Point) -> Result<Point, SpaceError> {
    validate_node(tree, x)?;
    match x {
        Point::Node(u) => {
            let items: Vec<u64> = u.iter().map(|v| v + 1).collect();
            Ok(Point::Branch(Arc::new(move |n| {
                Some(items.get(n as usize).copied().unwrap_or(0))
            })))
        }
        Point::Branch(alpha) => {
            let alpha = alpha.clone();
            Ok(Point::Branch(Arc::new(move |n| alpha(n)?.checked_add(1))))
        }
    }
}

/// Inverse of [`rho`]: a branch of `S^T` whose values hit `0` within the
/// budget is the image of the node read off before the first `0` (every
/// later scanned value must also be `0`); otherwise it is classified as
/// the image of a branch, whose values are re-derived on demand.
pub fn rho_inv(tree: &TreeSpec, y: &Point, budget: u64) -> Result<Point, SpaceError> {
    let alpha = match y {
        Point::Branch(alpha) => alpha,
        Point::Node(_) => return Err(SpaceError::InvalidPoint),
    };
    let mut vals = Vec::new();
    for n in 0..budget {
        vals.push(alpha(n).ok_or(SpaceError::OracleError)?);
    }
    if let Some(k) = vals.iter().position(|&v| v == 0) {
        if vals[k..].iter().any(|&v| v != 0) {
            return Err(SpaceError::InvalidPoint);
        }
        let node = FinSeq::new(vals[..k].iter().map(|&v| v - 1).collect());
        if !tree.member(&node)? {
            return Err(SpaceError::InvalidPoint);
        }
        Ok(Point::Node(node))
    } else {
        let alpha = alpha.clone();
        Ok(Point::Branch(Arc::new(move |n| alpha(n)?.checked_sub(1))))
    }
}

fn ext_value_at(p: &Point, n: u64) -> Option<ExtVal> {
    match p {
        Point::Node(u) => Some(u.get(n as usize).map_or(ExtVal::NEG_ONE, ExtVal::nat)),
        Point::Branch(alpha) => alpha(n).map(ExtVal::nat),
    }
}

/// The product isomorphism: identifies nodes with eventually `-1`
/// sequences and zips pointwise through the extended pairing. Two nodes
/// give the node that zips them; anything else gives a branch.
pub fn prod_iso(t: &TreeSpec, s: &TreeSpec, x: &Point, y: &Point) -> Result<Point, SpaceError> {
    validate_node(t, x)?;
    validate_node(s, y)?;
    match (x, y) {
        (Point::Node(u), Point::Node(v)) => Ok(Point::Node(seqcode::zip_pad(u, v))),
        _ => {
            let x = x.clone();
            let y = y.clone();
            Ok(Point::Branch(Arc::new(move |n| {
                let a = ext_value_at(&x, n)?;
                let b = ext_value_at(&y, n)?;
                // At least one side is a branch, so not both are -1.
                Some(seqcode::pair_ext(a, b).value() as u64)
            })))
        }
    }
}

/// Inverse of [`prod_iso`]: unzips a point of the product space into its
/// two components.
///
/// A node unzips exactly. A branch is scanned through the budget: a side
/// whose values hit `-1` is the node read off before the padding (any
/// resumption is an invalid point); a side that stays natural through the
/// budget is committed as a branch whose values are re-derived on demand,
/// since ruling out later padding would need unbounded lookahead. A zero
/// budget leaves a branch unclassified.
pub fn prod_iso_inv(
    t: &TreeSpec,
    s: &TreeSpec,
    z: &Point,
    budget: u64,
) -> Result<(Point, Point), SpaceError> {
    match z {
        Point::Node(w) => {
            let (u, v) = match seqcode::split_product_node(w) {
                Ok(parts) => parts,
                Err(SeqError::MalformedPadding) => return Err(SpaceError::InvalidPoint),
                Err(e) => return Err(e.into()),
            };
            if !t.member(&u)? || !s.member(&v)? {
                return Err(SpaceError::InvalidPoint);
            }
            Ok((Point::Node(u), Point::Node(v)))
        }
        Point::Branch(alpha) => {
            if budget == 0 {
                return Err(SpaceError::BudgetExceeded);
            }
            let mut left = Vec::new();
            let mut right = Vec::new();
            let mut left_end: Option<usize> = None;
            let mut right_end: Option<usize> = None;
            for n in 0..budget {
                let z_n = alpha(n).ok_or(SpaceError::OracleError)?;
                let (a, b) = seqcode::unpair_ext(ExtVal::nat(z_n));
                match (a.as_nat(), left_end) {
                    (Some(v), None) => left.push(v),
                    (Some(_), Some(_)) => return Err(SpaceError::InvalidPoint),
                    (None, None) => left_end = Some(n as usize),
                    (None, Some(_)) => {}
                }
                match (b.as_nat(), right_end) {
                    (Some(v), None) => right.push(v),
                    (Some(_), Some(_)) => return Err(SpaceError::InvalidPoint),
                    (None, None) => right_end = Some(n as usize),
                    (None, Some(_)) => {}
                }
            }
            let x = match left_end {
                Some(_) => {
                    let u = FinSeq::new(left);
                    if !t.member(&u)? {
                        return Err(SpaceError::InvalidPoint);
                    }
                    Point::Node(u)
                }
                None => {
                    let alpha = alpha.clone();
                    Point::Branch(Arc::new(move |n| {
                        seqcode::unpair_ext(ExtVal::nat(alpha(n)?)).0.as_nat()
                    }))
                }
            };
            let y = match right_end {
                Some(_) => {
                    let v = FinSeq::new(right);
                    if !s.member(&v)? {
                        return Err(SpaceError::InvalidPoint);
                    }
                    Point::Node(v)
                }
                None => {
                    let alpha = alpha.clone();
                    Point::Branch(Arc::new(move |n| {
                        seqcode::unpair_ext(ExtVal::nat(alpha(n)?)).1.as_nat()
                    }))
                }
            };
            Ok((x, y))
        }
    }
}

/// Which summand a point comes from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SumSide {
    Left,
    Right,
}

impl SumSide {
    pub fn tag(self) -> u64 {
        match self {
            SumSide::Left => 0,
            SumSide::Right => 1,
        }
    }
}

/// Probe bound for locating the least depth-1 node of the right summand.
const SUM_ROOT_PROBE: u64 = 4096;

/// The sum embedding into the space of `T ⊕ S`: the first coordinate `k`
/// of a point becomes the tag `p(side, k)`.
///
/// The tree of the sum has a single root, so the two summand roots need a
/// convention: the left root goes to the sum's root, and the right root
/// goes to the designated node `(p(1,k0))` where `k0` is the least first
/// coordinate of `S`. Images of the two sides are disjoint (tags differ),
/// though the right root's image coincides with the image of `(k0)` — at
/// most one extra identification, unavoidable since the sum tree has one
/// node fewer than the two summands together.
pub fn sum_iso(t: &TreeSpec, s: &TreeSpec, side: SumSide, x: &Point) -> Result<Point, SpaceError> {
    let summand = match side {
        SumSide::Left => t,
        SumSide::Right => s,
    };
    validate_node(summand, x)?;
    match x {
        Point::Node(u) if u.is_empty() => match side {
            SumSide::Left => Ok(Point::Node(FinSeq::empty())),
            SumSide::Right => {
                for k in 0..=SUM_ROOT_PROBE {
                    if s.member(&FinSeq::empty().child(k))? {
                        return Ok(Point::Node(FinSeq::from([seqcode::pair(1, k)])));
                    }
                }
                Err(SpaceError::InvalidPoint)
            }
        },
        Point::Node(u) => {
            let mut items = alloc::vec![seqcode::pair(side.tag(), u.get(0).unwrap())];
            items.extend(&u.as_slice()[1..]);
            Ok(Point::Node(FinSeq::new(items)))
        }
        Point::Branch(alpha) => {
            let alpha = alpha.clone();
            let tag = side.tag();
            Ok(Point::Branch(Arc::new(move |n| {
                if n == 0 {
                    seqcode::checked_pair(tag, alpha(0)?)
                } else {
                    alpha(n)
                }
            })))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcode::encode;

    fn seq(items: &[u64]) -> FinSeq {
        FinSeq::from(items)
    }

    fn finite(nodes: &[&[u64]]) -> TreeSpec {
        TreeSpec::finite(nodes.iter().map(|n| FinSeq::from(*n))).unwrap()
    }

    fn exact(num: u64, den: u64) -> DistResult {
        DistResult::Exact(Ratio::new(num, den))
    }

    #[test]
    fn dist_examples() {
        let t = finite(&[&[], &[0], &[0, 1]]);
        assert_eq!(
            dist(&t, &Point::node([0, 1]), &Point::node([0]), 10).unwrap(),
            exact(1, 2)
        );
        assert_eq!(
            dist(&t, &Point::node([0]), &Point::node([0]), 10).unwrap(),
            DistResult::Exact(Ratio::from_integer(0))
        );
        let bin = TreeSpec::binary();
        assert_eq!(
            dist(&bin, &Point::branch(|_| 0), &Point::branch(|_| 0), 10).unwrap(),
            DistResult::AtMost(Ratio::new(1, 11))
        );
    }

    #[test]
    fn dist_node_branch_is_certain_within_budget() {
        let bin = TreeSpec::binary();
        let d = dist(&bin, &Point::node([0, 0]), &Point::branch(|_| 0), 10).unwrap();
        // Disagreement exactly where the node runs out.
        assert_eq!(d, exact(1, 3));
    }

    #[test]
    fn dist_rejects_foreign_node() {
        let t = finite(&[&[], &[0]]);
        assert_eq!(
            dist(&t, &Point::node([3]), &Point::node([0]), 4),
            Err(SpaceError::InvalidPoint)
        );
    }

    #[test]
    fn dist_validates_branch_prefixes() {
        let t = finite(&[&[], &[0]]);
        // The constant-1 branch leaves the tree at its first step.
        assert_eq!(
            dist(&t, &Point::branch(|_| 1), &Point::node([0]), 4),
            Err(SpaceError::InvalidPoint)
        );
    }

    #[test]
    fn presentation_examples() {
        let t = finite(&[&[], &[0]]);
        match presentation(&t, 1).unwrap() {
            Point::Node(u) => assert!(u.is_empty()),
            _ => panic!(),
        }
        match presentation(&t, 2).unwrap() {
            Point::Node(u) => assert_eq!(u, seq(&[0])),
            _ => panic!(),
        }
        match presentation(&t, 0).unwrap() {
            Point::Node(u) => assert!(u.is_empty()),
            _ => panic!(),
        }
        // A code of a sequence outside the tree also falls to the root.
        let c = encode(&seq(&[7])).unwrap().value();
        match presentation(&t, c).unwrap() {
            Point::Node(u) => assert!(u.is_empty()),
            _ => panic!(),
        }
    }

    fn branch_prefix(p: &Point, n: u64) -> Vec<u64> {
        match p {
            Point::Branch(alpha) => (0..n).map(|i| alpha(i).unwrap()).collect(),
            Point::Node(_) => panic!("expected branch"),
        }
    }

    #[test]
    fn rho_examples() {
        let t = finite(&[&[], &[1], &[1, 2]]);
        let img = rho(&t, &Point::node([1, 2])).unwrap();
        assert_eq!(branch_prefix(&img, 5), alloc::vec![2, 3, 0, 0, 0]);
        let root = rho(&t, &Point::node([] as [u64; 0])).unwrap();
        assert_eq!(branch_prefix(&root, 3), alloc::vec![0, 0, 0]);
        let five = rho(&TreeSpec::elementwise(|k| k == 5, 6), &Point::branch(|_| 5)).unwrap();
        assert_eq!(branch_prefix(&five, 3), alloc::vec![6, 6, 6]);
    }

    #[test]
    fn rho_images_land_in_shift_closure() {
        let t = finite(&[&[], &[1], &[1, 2]]);
        let st = t.shift_closure();
        for p in [
            Point::node([] as [u64; 0]),
            Point::node([1]),
            Point::node([1, 2]),
        ] {
            let img = rho(&t, &p).unwrap();
            let prefix = FinSeq::new(branch_prefix(&img, 6));
            assert!(st.member(&prefix).unwrap());
        }
    }

    #[test]
    fn rho_inv_examples() {
        let t = finite(&[&[], &[1], &[1, 2]]);
        let y = Point::branch(|n| [2u64, 3].get(n as usize).copied().unwrap_or(0));
        match rho_inv(&t, &y, 10).unwrap() {
            Point::Node(u) => assert_eq!(u, seq(&[1, 2])),
            _ => panic!(),
        }
        match rho_inv(&t, &Point::branch(|_| 0), 10).unwrap() {
            Point::Node(u) => assert!(u.is_empty()),
            _ => panic!(),
        }
        let bad = Point::branch(|n| [1u64, 0, 3].get(n as usize).copied().unwrap_or(0));
        assert_eq!(rho_inv(&t, &bad, 10).unwrap_err(), SpaceError::InvalidPoint);
    }

    #[test]
    fn rho_inv_branch_case() {
        let t = TreeSpec::elementwise(|k| k == 5, 6);
        let y = Point::branch(|_| 6);
        match rho_inv(&t, &y, 8).unwrap() {
            Point::Branch(alpha) => assert_eq!(alpha(3), Some(5)),
            _ => panic!(),
        }
    }

    #[test]
    fn prod_iso_examples() {
        let t = finite(&[&[], &[1], &[1, 2]]);
        let s = finite(&[&[], &[3], &[4]]);
        match prod_iso(&t, &s, &Point::node([1, 2]), &Point::node([3])).unwrap() {
            Point::Node(w) => assert_eq!(w, seq(&[24, 5])),
            _ => panic!(),
        }
        match prod_iso(
            &t,
            &s,
            &Point::node([] as [u64; 0]),
            &Point::node([] as [u64; 0]),
        )
        .unwrap()
        {
            Point::Node(w) => assert!(w.is_empty()),
            _ => panic!(),
        }
        let bin = TreeSpec::binary();
        let root_only = finite(&[&[]]);
        let z = prod_iso(
            &bin,
            &root_only,
            &Point::branch(|_| 0),
            &Point::node([] as [u64; 0]),
        )
        .unwrap();
        assert_eq!(branch_prefix(&z, 4), alloc::vec![0, 0, 0, 0]);
    }

    #[test]
    fn prod_iso_inv_examples() {
        let t = finite(&[&[], &[1], &[1, 2]]);
        let s = finite(&[&[], &[3], &[4]]);
        let (x, y) = prod_iso_inv(&t, &s, &Point::node([24, 5]), 8).unwrap();
        match (x, y) {
            (Point::Node(u), Point::Node(v)) => {
                assert_eq!(u, seq(&[1, 2]));
                assert_eq!(v, seq(&[3]));
            }
            _ => panic!(),
        }
        let (x, y) = prod_iso_inv(&t, &s, &Point::node([] as [u64; 0]), 8).unwrap();
        match (x, y) {
            (Point::Node(u), Point::Node(v)) => {
                assert!(u.is_empty());
                assert!(v.is_empty());
            }
            _ => panic!(),
        }
        // Constant-zero branch over binary x trivial: case where the right
        // side is the root node and the left is a genuine branch.
        let bin = TreeSpec::binary();
        let root_only = finite(&[&[]]);
        let (x, y) = prod_iso_inv(&bin, &root_only, &Point::branch(|_| 0), 8).unwrap();
        match (x, y) {
            (Point::Branch(alpha), Point::Node(v)) => {
                assert_eq!(alpha(5), Some(0));
                assert!(v.is_empty());
            }
            other => panic!("wrong classification: {other:?}"),
        }
    }

    #[test]
    fn prod_iso_inv_budget_zero() {
        let bin = TreeSpec::binary();
        assert_eq!(
            prod_iso_inv(&bin, &bin, &Point::branch(|_| 0), 0).unwrap_err(),
            SpaceError::BudgetExceeded
        );
    }

    #[test]
    fn prod_roundtrip_on_nodes() {
        let t = finite(&[&[], &[1], &[1, 2], &[0]]);
        let s = finite(&[&[], &[3], &[4]]);
        for u in t.enumerate_finite().unwrap() {
            for v in s.enumerate_finite().unwrap() {
                let z = prod_iso(&t, &s, &Point::Node(u.clone()), &Point::Node(v.clone())).unwrap();
                let (x, y) = prod_iso_inv(&t, &s, &z, 8).unwrap();
                match (x, y) {
                    (Point::Node(a), Point::Node(b)) => {
                        assert_eq!(a, u);
                        assert_eq!(b, v);
                    }
                    _ => panic!(),
                }
            }
        }
    }

    #[test]
    fn sum_iso_examples() {
        let t = finite(&[&[], &[0]]);
        let s = finite(&[&[], &[1]]);
        match sum_iso(&t, &s, SumSide::Left, &Point::node([0])).unwrap() {
            Point::Node(w) => assert_eq!(w, seq(&[0])),
            _ => panic!(),
        }
        match sum_iso(&t, &s, SumSide::Right, &Point::node([1])).unwrap() {
            Point::Node(w) => assert_eq!(w, seq(&[4])),
            _ => panic!(),
        }
        let bin = TreeSpec::binary();
        let img = sum_iso(&bin, &t, SumSide::Left, &Point::branch(|n| n % 2)).unwrap();
        assert_eq!(
            branch_prefix(&img, 3),
            alloc::vec![seqcode::pair(0, 0), 1, 0]
        );
        // Root convention.
        match sum_iso(&t, &s, SumSide::Left, &Point::node([] as [u64; 0])).unwrap() {
            Point::Node(w) => assert!(w.is_empty()),
            _ => panic!(),
        }
        match sum_iso(&t, &s, SumSide::Right, &Point::node([] as [u64; 0])).unwrap() {
            Point::Node(w) => assert_eq!(w, seq(&[seqcode::pair(1, 1)])),
            _ => panic!(),
        }
    }

    #[test]
    fn sum_iso_images_are_members_and_sides_disjoint() {
        let t = finite(&[&[], &[0], &[0, 1]]);
        let s = finite(&[&[], &[1], &[2]]);
        let sum = TreeSpec::sum(&t, &s);
        let mut left_images = alloc::collections::BTreeSet::new();
        let mut right_images = alloc::collections::BTreeSet::new();
        for u in t.enumerate_finite().unwrap() {
            match sum_iso(&t, &s, SumSide::Left, &Point::Node(u)).unwrap() {
                Point::Node(w) => {
                    assert!(sum.member(&w).unwrap());
                    left_images.insert(w);
                }
                _ => panic!(),
            }
        }
        for v in s.enumerate_finite().unwrap() {
            match sum_iso(&t, &s, SumSide::Right, &Point::Node(v)).unwrap() {
                Point::Node(w) => {
                    assert!(sum.member(&w).unwrap());
                    right_images.insert(w);
                }
                _ => panic!(),
            }
        }
        assert!(left_images.is_disjoint(&right_images));
    }

    #[test]
    fn presentation_hits_every_node() {
        let t = finite(&[&[], &[0], &[0, 1], &[2]]);
        for u in t.enumerate_finite().unwrap() {
            let code = encode(&u).unwrap().value();
            match presentation(&t, code).unwrap() {
                Point::Node(v) => assert_eq!(v, u),
                _ => panic!(),
            }
        }
    }

    #[test]
    fn node_is_unique_point_in_small_ball() {
        // A node is the unique point within distance < 1/(lh+1) of itself
        // among nodes.
        let t = finite(&[&[], &[0], &[0, 1], &[1], &[0, 0]]);
        let nodes = t.enumerate_finite().unwrap();
        for u in &nodes {
            let r = Ratio::new(1u64, u.len() as u64 + 1);
            for v in &nodes {
                if u != v {
                    let d = dist(&t, &Point::Node(u.clone()), &Point::Node(v.clone()), 16)
                        .unwrap()
                        .value();
                    assert!(d >= r, "ball around {u:?} contains {v:?}");
                }
            }
        }
    }
}
