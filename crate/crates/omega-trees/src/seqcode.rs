//! Bit-exact coding of finite sequences of naturals.
//!
//! The code of a sequence is built from the Cantor pairing function
//! `p(a,b) = (a+b)(a+b+1)/2 + b`: the empty sequence gets code `1`, and a
//! sequence `u` of length `n ≥ 1` gets `2 + p(n-1, c_n)` where `c_1 = u(0)`
//! and `c_{k+1} = p(c_k, u(k))`. Under this choice every natural `≥ 1`
//! decodes to exactly one sequence and `0` is not a code.
//!
//! The module also fixes the extended pairing `⟨a|b⟩ = p(a+1, b+1) - 1` on
//! `ω ∪ {-1}`, which is a bijection with `⟨-1|-1⟩ = -1` and is used to zip
//! two sequences of different lengths into one (padding the shorter side
//! with `-1`). Tree products are built on exactly this zip.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// A finite sequence of naturals, possibly empty.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSeq(Vec<u64>);

impl FinSeq {
    pub const fn empty() -> Self {
        FinSeq(Vec::new())
    }

    pub fn new(items: Vec<u64>) -> Self {
        FinSeq(items)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.0.get(i).copied()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    /// The length-`n` initial segment (`n` capped at the length).
    pub fn prefix(&self, n: usize) -> FinSeq {
        FinSeq(self.0[..n.min(self.0.len())].to_vec())
    }

    /// Concatenation `self ⌢ other`.
    pub fn concat(&self, other: &FinSeq) -> FinSeq {
        let mut items = self.0.clone();
        items.extend_from_slice(&other.0);
        FinSeq(items)
    }

    /// `self ⌢ (k)`.
    pub fn child(&self, k: u64) -> FinSeq {
        let mut items = self.0.clone();
        items.push(k);
        FinSeq(items)
    }

    /// The sequence without its last entry; `None` for the empty sequence.
    pub fn parent(&self) -> Option<FinSeq> {
        if self.0.is_empty() {
            None
        } else {
            Some(FinSeq(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// `self ⊑ other`: `other` extends `self` (not necessarily properly).
    pub fn is_prefix_of(&self, other: &FinSeq) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// `self ⊏ other`: proper initial segment.
    pub fn is_proper_prefix_of(&self, other: &FinSeq) -> bool {
        other.0.len() > self.0.len() && self.is_prefix_of(other)
    }

    /// Compatibility: one of the two is an initial segment of the other.
    pub fn is_compatible(&self, other: &FinSeq) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// `self ⊥ other`.
    pub fn is_incompatible(&self, other: &FinSeq) -> bool {
        !self.is_compatible(other)
    }
}

impl From<Vec<u64>> for FinSeq {
    fn from(items: Vec<u64>) -> Self {
        FinSeq(items)
    }
}

impl From<&[u64]> for FinSeq {
    fn from(items: &[u64]) -> Self {
        FinSeq(items.to_vec())
    }
}

impl<const N: usize> From<[u64; N]> for FinSeq {
    fn from(items: [u64; N]) -> Self {
        FinSeq(items.to_vec())
    }
}

impl fmt::Debug for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// The code of a finite sequence: a natural `≥ 1`. `1` codes the empty
/// sequence; `0` is not a code.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SeqCode(u64);

impl SeqCode {
    pub const EMPTY: SeqCode = SeqCode(1);

    pub fn new(value: u64) -> Result<SeqCode, SeqError> {
        if value == 0 {
            Err(SeqError::NotASequenceCode)
        } else {
            Ok(SeqCode(value))
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

/// An element of `ω ∪ {-1}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExtVal(i64);

impl ExtVal {
    pub const NEG_ONE: ExtVal = ExtVal(-1);

    /// Rejects values below `-1`.
    pub fn new(value: i64) -> Option<ExtVal> {
        (value >= -1).then_some(ExtVal(value))
    }

    pub fn nat(value: u64) -> ExtVal {
        ExtVal(value as i64)
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn is_neg(self) -> bool {
        self.0 == -1
    }

    /// The natural value, or `None` for `-1`.
    pub fn as_nat(self) -> Option<u64> {
        (self.0 >= 0).then_some(self.0 as u64)
    }
}

/// Errors of the coding layer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SeqError {
    /// `0` was offered where a sequence code (`≥ 1`) is required.
    NotASequenceCode,
    /// The code of the given sequence does not fit in a machine word.
    CodeOverflow,
    /// A `-1` appears before a natural in an unzipped component.
    MalformedPadding,
    /// A branch oracle failed to produce a value.
    OracleError,
}

impl fmt::Display for SeqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqError::NotASequenceCode => write!(f, "0 is not a sequence code"),
            SeqError::CodeOverflow => write!(f, "sequence code does not fit in 64 bits"),
            SeqError::MalformedPadding => {
                write!(f, "-1 padding appears before a natural entry")
            }
            SeqError::OracleError => write!(f, "branch oracle failed"),
        }
    }
}

impl core::error::Error for SeqError {}

/// An infinite branch given by a pure index-to-value oracle. `None` signals
/// oracle failure and surfaces as [`SeqError::OracleError`]. Oracles must be
/// deterministic and side-effect free.
pub type BranchOracle = Arc<dyn Fn(u64) -> Option<u64> + Send + Sync>;

/// Wraps a total function as a branch oracle.
pub fn branch_fn<F>(f: F) -> BranchOracle
where
    F: Fn(u64) -> u64 + Send + Sync + 'static,
{
    Arc::new(move |n| Some(f(n)))
}

/// Cantor pairing `p(a,b) = (a+b)(a+b+1)/2 + b`, a bijection `ω² → ω`.
///
/// Panics if the result exceeds 64 bits; use [`checked_pair`] at input
/// boundaries.
pub fn pair(a: u64, b: u64) -> u64 {
    checked_pair(a, b).expect("pair value exceeds 64 bits")
}

/// Overflow-checked Cantor pairing.
pub fn checked_pair(a: u64, b: u64) -> Option<u64> {
    let s = (a as u128) + (b as u128);
    let v = s * (s + 1) / 2 + b as u128;
    u64::try_from(v).ok()
}

/// Inverse of [`pair`].
pub fn unpair(p: u64) -> (u64, u64) {
    // w = floor((sqrt(8p+1)-1)/2) is the index of the diagonal holding p.
    let w = ((8 * (p as u128) + 1).isqrt() - 1) / 2;
    let t = (w * (w + 1) / 2) as u64;
    let b = p - t;
    let a = w as u64 - b;
    (a, b)
}

/// The extended pairing `⟨a|b⟩ = p(a+1, b+1) - 1`, a bijection
/// `(ω ∪ {-1})² → ω ∪ {-1}` with `⟨-1|-1⟩ = -1`. All other outputs are
/// naturals.
pub fn pair_ext(a: ExtVal, b: ExtVal) -> ExtVal {
    let p = pair((a.0 + 1) as u64, (b.0 + 1) as u64);
    ExtVal(p as i64 - 1)
}

/// Inverse of [`pair_ext`].
pub fn unpair_ext(e: ExtVal) -> (ExtVal, ExtVal) {
    let (a, b) = unpair((e.0 + 1) as u64);
    (ExtVal(a as i64 - 1), ExtVal(b as i64 - 1))
}

/// Encodes a finite sequence. The empty sequence gets `1`; a sequence of
/// length `n ≥ 1` gets `2 + p(n-1, c_n)` with `c_1 = u(0)`,
/// `c_{k+1} = p(c_k, u(k))`.
pub fn encode(u: &FinSeq) -> Result<SeqCode, SeqError> {
    if u.is_empty() {
        return Ok(SeqCode::EMPTY);
    }
    let mut c = u.0[0];
    for &item in &u.0[1..] {
        c = checked_pair(c, item).ok_or(SeqError::CodeOverflow)?;
    }
    let tagged = checked_pair(u.len() as u64 - 1, c).ok_or(SeqError::CodeOverflow)?;
    tagged
        .checked_add(2)
        .map(SeqCode)
        .ok_or(SeqError::CodeOverflow)
}

/// Decodes a sequence code. Errors on `0`; every natural `≥ 1` decodes.
pub fn decode(s: u64) -> Result<FinSeq, SeqError> {
    if s == 0 {
        return Err(SeqError::NotASequenceCode);
    }
    if s == 1 {
        return Ok(FinSeq::empty());
    }
    let (len_minus_1, mut c) = unpair(s - 2);
    let n = len_minus_1 as usize + 1;
    let mut items = alloc::vec![0u64; n];
    for idx in (1..n).rev() {
        let (prev, val) = unpair(c);
        items[idx] = val;
        c = prev;
    }
    items[0] = c;
    Ok(FinSeq(items))
}

/// Decodes a known-good code.
pub fn decode_code(s: SeqCode) -> FinSeq {
    decode(s.0).expect("SeqCode is at least 1")
}

/// Zips two sequences through [`pair_ext`], padding the shorter one with
/// `-1`. The result has length `max(lh(u), lh(v))` and all entries are
/// naturals (a position never has `-1` on both sides).
pub fn zip_pad(u: &FinSeq, v: &FinSeq) -> FinSeq {
    let n = u.len().max(v.len());
    let items = (0..n)
        .map(|i| {
            let a = u.get(i).map_or(ExtVal::NEG_ONE, ExtVal::nat);
            let b = v.get(i).map_or(ExtVal::NEG_ONE, ExtVal::nat);
            pair_ext(a, b).0 as u64
        })
        .collect();
    FinSeq(items)
}

/// Unzips a product-tree node back into its two components, validating the
/// padding shape: on each side the `-1`s may occur only as a suffix, and at
/// least one side must fill the whole length.
pub fn split_product_node(w: &FinSeq) -> Result<(FinSeq, FinSeq), SeqError> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut left_closed = false;
    let mut right_closed = false;
    for entry in w.iter() {
        let (a, b) = unpair_ext(ExtVal::nat(entry));
        match a.as_nat() {
            Some(x) if !left_closed => left.push(x),
            Some(_) => return Err(SeqError::MalformedPadding),
            None => left_closed = true,
        }
        match b.as_nat() {
            Some(y) if !right_closed => right.push(y),
            Some(_) => return Err(SeqError::MalformedPadding),
            None => right_closed = true,
        }
    }
    Ok((FinSeq(left), FinSeq(right)))
}

/// The code of the length-`n` prefix of a branch.
pub fn prefix_code(alpha: &BranchOracle, n: u64) -> Result<SeqCode, SeqError> {
    let mut items = Vec::with_capacity(n as usize);
    for i in 0..n {
        items.push(alpha(i).ok_or(SeqError::OracleError)?);
    }
    encode(&FinSeq(items))
}

/// The `i`-th diagonal section of a branch: `(α)_i(n) = α(⟨i,n⟩)`, the code
/// being that of the two-entry sequence `(i,n)`.
pub fn diag_section(alpha: &BranchOracle, i: u64, n: u64) -> Result<u64, SeqError> {
    let code = encode(&FinSeq::from([i, n]))?;
    alpha(code.value()).ok_or(SeqError::OracleError)
}
