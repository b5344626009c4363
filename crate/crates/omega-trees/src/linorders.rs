//! Finite linear orders on subsets of the naturals and the admissible /
//! strongly admissible partial-map machinery.
//!
//! A partial map `f` between two linear orders `⊴` (source) and `≼`
//! (target, assumed well-ordered — always true here since orders are
//! finite) is *admissible* when
//!
//! 1. its graph lies in `Field(⊴) × Field(≼)`,
//! 2. its domain is downward closed under `⊴`,
//! 3. it is an order equivalence on its domain, and
//! 4. `f(n) = sup_≼ { suc_≼(f(n')) : n' ⊲ n }` at every domain point,
//!    where `sup_≼ ∅` is the `≼`-least element and the supremum is
//!    undefined as soon as one `suc_≼` is (the target maximum has no
//!    successor).
//!
//! `f` is *strongly admissible* if additionally no single-pair extension of
//! its graph is admissible. For a well-ordered target there is exactly one
//! strongly admissible map: the order embedding of the longest initial
//! segment of the source that fits. [`solve_strongly_admissible`] builds it
//! directly and [`brute_force_strongly_admissible`] recovers it by
//! exhaustive enumeration.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

/// A finite linear order on a subset of the naturals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinOrder {
    /// Field elements listed in increasing order.
    by_rank: Vec<u64>,
    rank: BTreeMap<u64, usize>,
}

/// Errors for order construction and queries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OrderError {
    /// The relation offered is not reflexive/antisymmetric/transitive/total.
    NotALinearOrder,
    /// A queried element is outside the field.
    NotInField(u64),
    /// A pair list maps one argument to two images.
    NotFunctional(u64),
    /// Brute-force enumeration is capped at 5 field elements.
    FieldTooLarge,
}

impl fmt::Display for OrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderError::NotALinearOrder => write!(f, "relation is not a linear order"),
            OrderError::NotInField(n) => write!(f, "{n} is not in the field"),
            OrderError::NotFunctional(n) => write!(f, "{n} has two images"),
            OrderError::FieldTooLarge => write!(f, "field too large for brute force (max 5)"),
        }
    }
}

impl core::error::Error for OrderError {}

impl LinOrder {
    /// Builds an order from its field and the full `≤` relation, checking
    /// reflexivity, antisymmetry, transitivity and totality.
    pub fn from_pairs(field: &[u64], leq_pairs: &[(u64, u64)]) -> Result<LinOrder, OrderError> {
        let fieldset: BTreeSet<u64> = field.iter().copied().collect();
        let pairs: BTreeSet<(u64, u64)> = leq_pairs.iter().copied().collect();
        for &(a, b) in &pairs {
            if !fieldset.contains(&a) || !fieldset.contains(&b) {
                return Err(OrderError::NotALinearOrder);
            }
        }
        for &a in &fieldset {
            if !pairs.contains(&(a, a)) {
                return Err(OrderError::NotALinearOrder);
            }
            for &b in &fieldset {
                let ab = pairs.contains(&(a, b));
                let ba = pairs.contains(&(b, a));
                if !ab && !ba {
                    return Err(OrderError::NotALinearOrder);
                }
                if a != b && ab && ba {
                    return Err(OrderError::NotALinearOrder);
                }
                for &c in &fieldset {
                    if ab && pairs.contains(&(b, c)) && !pairs.contains(&(a, c)) {
                        return Err(OrderError::NotALinearOrder);
                    }
                }
            }
        }
        let mut by_rank: Vec<u64> = fieldset.iter().copied().collect();
        by_rank.sort_by_key(|&a| {
            fieldset
                .iter()
                .filter(|&&b| pairs.contains(&(b, a)))
                .count()
        });
        Ok(LinOrder::from_ranked(by_rank))
    }

    /// Builds an order from its elements listed in increasing order.
    /// Duplicates are rejected.
    pub fn from_ranked(by_rank: Vec<u64>) -> LinOrder {
        let rank = by_rank
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect::<BTreeMap<_, _>>();
        assert_eq!(rank.len(), by_rank.len(), "duplicate field element");
        LinOrder { by_rank, rank }
    }

    pub fn field(&self) -> &[u64] {
        &self.by_rank
    }

    pub fn len(&self) -> usize {
        self.by_rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_rank.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.rank.contains_key(&n)
    }

    pub fn leq(&self, a: u64, b: u64) -> Result<bool, OrderError> {
        let ra = self.rank.get(&a).ok_or(OrderError::NotInField(a))?;
        let rb = self.rank.get(&b).ok_or(OrderError::NotInField(b))?;
        Ok(ra <= rb)
    }

    pub fn lt(&self, a: u64, b: u64) -> Result<bool, OrderError> {
        Ok(self.leq(a, b)? && a != b)
    }

    pub fn least(&self) -> Option<u64> {
        self.by_rank.first().copied()
    }

    pub fn greatest(&self) -> Option<u64> {
        self.by_rank.last().copied()
    }

    /// The immediate successor of `n`, or `None` at the maximum.
    pub fn suc(&self, n: u64) -> Result<Option<u64>, OrderError> {
        let r = *self.rank.get(&n).ok_or(OrderError::NotInField(n))?;
        Ok(self.by_rank.get(r + 1).copied())
    }

    /// The finite order type of the initial segment strictly below `n`.
    pub fn initial_segment_rank(&self, n: u64) -> Result<usize, OrderError> {
        self.rank.get(&n).copied().ok_or(OrderError::NotInField(n))
    }

    /// The full `≤` relation, suitable for serialization.
    pub fn leq_pairs(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for (i, &a) in self.by_rank.iter().enumerate() {
            for &b in &self.by_rank[i..] {
                out.push((a, b));
            }
        }
        out.sort_unstable();
        out
    }
}

/// A finite partial map with a functional graph.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PartialMap {
    graph: BTreeMap<u64, u64>,
}

impl PartialMap {
    pub fn empty() -> PartialMap {
        PartialMap {
            graph: BTreeMap::new(),
        }
    }

    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<PartialMap, OrderError> {
        let mut graph = BTreeMap::new();
        for &(n, m) in pairs {
            if let Some(&old) = graph.get(&n) {
                if old != m {
                    return Err(OrderError::NotFunctional(n));
                }
            }
            graph.insert(n, m);
        }
        Ok(PartialMap { graph })
    }

    pub fn get(&self, n: u64) -> Option<u64> {
        self.graph.get(&n).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = u64> + '_ {
        self.graph.keys().copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.graph.iter().map(|(&n, &m)| (n, m))
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// The map extended by one pair (overwriting nothing; caller checks).
    pub fn with(&self, n: u64, m: u64) -> PartialMap {
        let mut graph = self.graph.clone();
        graph.insert(n, m);
        PartialMap { graph }
    }
}

/// The admissibility condition that failed, by its number in the
/// definition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AdmissibleViolation {
    /// (1) graph containment
    GraphContainment,
    /// (2) domain downward closure
    DomainNotDownwardClosed,
    /// (3) order equivalence on the domain
    OrderEquivalence,
    /// (4) the successor-supremum equation
    SupEquation,
}

/// Checks the four admissibility conditions, reporting the first violated
/// one.
pub fn admissible_violation(
    f: &PartialMap,
    lin: &LinOrder,
    wo: &LinOrder,
) -> Option<AdmissibleViolation> {
    for (n, m) in f.pairs() {
        if !lin.contains(n) || !wo.contains(m) {
            return Some(AdmissibleViolation::GraphContainment);
        }
    }
    for n in f.domain() {
        for &n2 in lin.field() {
            if lin.leq(n2, n).unwrap() && f.get(n2).is_none() {
                return Some(AdmissibleViolation::DomainNotDownwardClosed);
            }
        }
    }
    for n in f.domain() {
        for n2 in f.domain() {
            let src = lin.leq(n2, n).unwrap();
            let dst = wo.leq(f.get(n2).unwrap(), f.get(n).unwrap()).unwrap();
            if src != dst {
                return Some(AdmissibleViolation::OrderEquivalence);
            }
        }
    }
    for n in f.domain() {
        let mut sup: Option<u64> = None;
        for &n2 in lin.field() {
            if lin.lt(n2, n).unwrap() {
                // n2 is in the domain by downward closure, checked above.
                let img = f.get(n2).unwrap();
                match wo.suc(img).unwrap() {
                    None => return Some(AdmissibleViolation::SupEquation),
                    Some(s) => {
                        sup = Some(match sup {
                            None => s,
                            Some(cur) if wo.leq(cur, s).unwrap() => s,
                            Some(cur) => cur,
                        });
                    }
                }
            }
        }
        let expected = sup.or_else(|| wo.least());
        if expected != f.get(n) {
            return Some(AdmissibleViolation::SupEquation);
        }
    }
    None
}

/// `f` satisfies all four admissibility conditions.
pub fn admissible_check(f: &PartialMap, lin: &LinOrder, wo: &LinOrder) -> bool {
    admissible_violation(f, lin, wo).is_none()
}

/// `f` is admissible and no single-pair extension is, exhaustively over
/// `Field(⊴) × Field(≼)` (pairs outside the fields fail condition (1)
/// anyway).
pub fn strongly_admissible_check(f: &PartialMap, lin: &LinOrder, wo: &LinOrder) -> bool {
    if !admissible_check(f, lin, wo) {
        return false;
    }
    for &n in lin.field() {
        if f.get(n).is_some() {
            continue;
        }
        for &m in wo.field() {
            if admissible_check(&f.with(n, m), lin, wo) {
                return false;
            }
        }
    }
    true
}

/// The unique strongly admissible map for a nonempty source and a finite
/// (hence well-ordered) target: the first `min(|lin|, |wo|)` elements of
/// the source, in order, onto the initial segment of the target of that
/// length.
pub fn solve_strongly_admissible(lin: &LinOrder, wo: &LinOrder) -> PartialMap {
    let m = lin.len().min(wo.len());
    let mut graph = BTreeMap::new();
    for i in 0..m {
        graph.insert(lin.field()[i], wo.field()[i]);
    }
    PartialMap { graph }
}

/// Enumerates every partial map between the fields and keeps the strongly
/// admissible ones. Caps the source field at 5 elements.
pub fn brute_force_strongly_admissible(
    lin: &LinOrder,
    wo: &LinOrder,
) -> Result<Vec<PartialMap>, OrderError> {
    if lin.len() > 5 || wo.len() > 5 {
        return Err(OrderError::FieldTooLarge);
    }
    let choices = wo.len() as u64 + 1; // undefined, or one of the images
    let mut found = Vec::new();
    let total = choices.pow(lin.len() as u32);
    for mut code in 0..total {
        let mut graph = BTreeMap::new();
        for &n in lin.field() {
            let c = code % choices;
            code /= choices;
            if c > 0 {
                graph.insert(n, wo.field()[(c - 1) as usize]);
            }
        }
        let f = PartialMap { graph };
        if strongly_admissible_check(&f, lin, wo) {
            found.push(f);
        }
    }
    Ok(found)
}

/// `f` is an isomorphism between `o1` and an initial segment of `o2`:
/// total on `Field(o1)`, order preserving both ways, image an initial
/// segment.
pub fn initial_similarity_check(f: &PartialMap, o1: &LinOrder, o2: &LinOrder) -> bool {
    if f.len() != o1.len() {
        return false;
    }
    for (i, &n) in o1.field().iter().enumerate() {
        match f.get(n) {
            Some(m) if o2.contains(m) && o2.initial_segment_rank(m).unwrap() == i => {}
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(ranked: &[u64]) -> LinOrder {
        LinOrder::from_ranked(ranked.to_vec())
    }

    fn map(pairs: &[(u64, u64)]) -> PartialMap {
        PartialMap::from_pairs(pairs).unwrap()
    }

    #[test]
    fn construction_validates() {
        let ord = LinOrder::from_pairs(&[5, 7], &[(5, 5), (7, 7), (5, 7)]).unwrap();
        assert_eq!(ord.field(), &[5, 7]);
        // missing reflexive pair
        assert!(LinOrder::from_pairs(&[5, 7], &[(5, 7), (7, 7)]).is_err());
        // a cycle
        assert!(LinOrder::from_pairs(&[1, 2], &[(1, 1), (2, 2), (1, 2), (2, 1)]).is_err());
        // not total
        assert!(LinOrder::from_pairs(&[1, 2], &[(1, 1), (2, 2)]).is_err());
    }

    #[test]
    fn suc_and_rank_examples() {
        let ord = order(&[5, 7]);
        assert_eq!(ord.suc(5).unwrap(), Some(7));
        assert_eq!(ord.suc(7).unwrap(), None);
        assert_eq!(order(&[2, 4, 6]).suc(4).unwrap(), Some(6));
        assert_eq!(order(&[2, 4, 6]).initial_segment_rank(6).unwrap(), 2);
        assert_eq!(order(&[2, 4, 6]).initial_segment_rank(2).unwrap(), 0);
        assert_eq!(order(&[1, 3, 5, 7]).initial_segment_rank(5).unwrap(), 2);
        assert!(ord.suc(6).is_err());
    }

    #[test]
    fn admissible_examples() {
        let lin = order(&[0, 1, 2]);
        let wo = order(&[5, 7]);
        assert!(admissible_check(&map(&[(0, 5), (1, 7)]), &lin, &wo));
        assert_eq!(
            admissible_violation(&map(&[(0, 7)]), &lin, &wo),
            Some(AdmissibleViolation::SupEquation)
        );
        assert!(admissible_check(&PartialMap::empty(), &lin, &wo));
    }

    #[test]
    fn strongly_admissible_examples() {
        let lin = order(&[0, 1, 2]);
        let wo = order(&[5, 7]);
        // Extending by 2 needs suc(7), which does not exist.
        assert!(strongly_admissible_check(
            &map(&[(0, 5), (1, 7)]),
            &lin,
            &wo
        ));
        let two = order(&[3, 9]);
        assert!(strongly_admissible_check(
            &map(&[(3, 3), (9, 9)]),
            &two,
            &two
        ));
        assert!(!strongly_admissible_check(&PartialMap::empty(), &lin, &wo));
    }

    #[test]
    fn solver_examples() {
        let lin = order(&[0, 1, 2]);
        let wo = order(&[5, 7]);
        assert_eq!(solve_strongly_admissible(&lin, &wo), map(&[(0, 5), (1, 7)]));
        let two = order(&[3, 9]);
        assert_eq!(
            solve_strongly_admissible(&two, &two),
            map(&[(3, 3), (9, 9)])
        );
        let single = order(&[4]);
        let three = order(&[1, 2, 3]);
        assert_eq!(solve_strongly_admissible(&single, &three), map(&[(4, 1)]));
    }

    #[test]
    fn brute_force_examples() {
        let a = order(&[2]);
        let b = order(&[9]);
        assert_eq!(
            brute_force_strongly_admissible(&a, &b).unwrap(),
            alloc::vec![map(&[(2, 9)])]
        );
        let lin = order(&[0, 1, 2]);
        let wo = order(&[5, 7]);
        assert_eq!(
            brute_force_strongly_admissible(&lin, &wo).unwrap(),
            alloc::vec![map(&[(0, 5), (1, 7)])]
        );
        assert_eq!(
            brute_force_strongly_admissible(&order(&[0, 1, 2, 3, 4, 5]), &wo),
            Err(OrderError::FieldTooLarge)
        );
    }

    #[test]
    fn initial_similarity_examples() {
        let small = order(&[0, 1]);
        let big = order(&[5, 7, 9]);
        assert!(initial_similarity_check(
            &map(&[(0, 0), (1, 1)]),
            &small,
            &small
        ));
        assert!(initial_similarity_check(
            &map(&[(0, 5), (1, 7)]),
            &small,
            &big
        ));
        assert!(!initial_similarity_check(
            &map(&[(0, 5), (1, 9)]),
            &small,
            &big
        ));
        assert!(!initial_similarity_check(&map(&[(0, 5)]), &small, &big));
    }

    #[test]
    fn empty_target_has_empty_solution() {
        let lin = order(&[0]);
        let wo = order(&[]);
        let solved = solve_strongly_admissible(&lin, &wo);
        assert!(solved.is_empty());
        assert!(strongly_admissible_check(&solved, &lin, &wo));
        assert_eq!(
            brute_force_strongly_admissible(&lin, &wo).unwrap(),
            alloc::vec![PartialMap::empty()]
        );
    }
}
