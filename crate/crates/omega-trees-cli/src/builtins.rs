//! Named lazy tree families and branch oracles, referenced from JSON by
//! name plus parameters.
//!
//! Tree builtins (`bound` caps child enumeration, default 8):
//!
//! - `binary` — the complete binary tree;
//! - `full` — all finite sequences;
//! - `elementwise_even` / `elementwise_odd` / `elementwise_none` —
//!   entrywise predicates; `elementwise_singleton` (`value`) admits only
//!   that entry; `elementwise_leq` (`value`) admits entries up to it;
//! - `chain_usual` / `chain_reverse` — strictly descending tuples of the
//!   usual / reversed order on the naturals; `chain_finite` (`field`,
//!   listed in increasing order) for a finite order;
//! - `sg_toy` (alias `sg_toy_even`) — the documented toy section tree:
//!   even heads demand all-zero tails, odd heads demand tail length at
//!   most 2;
//! - `bar_len_ge` (`k`) / `bar_never` / `bar_code_even` — bar trees over
//!   prefix codes;
//! - `unfold_always` / `unfold_u_zero` — interleaved unfoldings.
//!
//! Branch builtins: `const` (`params: [k]`), `identity`, `mod`
//! (`params: [m]`).

use serde::{Deserialize, Serialize};

use omega_trees::seqcode::decode_code;
use omega_trees::space::Point;
use omega_trees::trees::TreeSpec;

use crate::CliError;

pub const DEFAULT_BOUND: u64 = 8;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuiltinFile {
    pub builtin: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<Vec<u64>>,
}

impl BuiltinFile {
    pub fn named(name: &str) -> BuiltinFile {
        BuiltinFile {
            builtin: name.into(),
            bound: None,
            value: None,
            k: None,
            field: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchFile {
    pub builtin: String,
    #[serde(default)]
    pub params: Vec<u64>,
}

/// The documented toy section predicate.
pub fn sg_toy_predicate(n: u64, s: omega_trees::seqcode::SeqCode) -> bool {
    let tail = decode_code(s);
    if n.is_multiple_of(2) {
        tail.iter().all(|x| x == 0)
    } else {
        tail.len() <= 2
    }
}

pub fn tree(b: &BuiltinFile) -> Result<TreeSpec, CliError> {
    let bound = b.bound.unwrap_or(DEFAULT_BOUND);
    let need_value = || {
        b.value
            .ok_or_else(|| CliError::input(format!("builtin {:?} needs \"value\"", b.builtin)))
    };
    match b.builtin.as_str() {
        "binary" => Ok(TreeSpec::binary()),
        "full" => Ok(TreeSpec::full(bound)),
        "elementwise_even" => Ok(TreeSpec::elementwise(|k| k.is_multiple_of(2), bound)),
        "elementwise_odd" => Ok(TreeSpec::elementwise(|k| k % 2 == 1, bound)),
        "elementwise_none" => Ok(TreeSpec::elementwise(|_| false, bound)),
        "elementwise_singleton" => {
            let v = need_value()?;
            Ok(TreeSpec::elementwise(move |k| k == v, bound.max(v)))
        }
        "elementwise_leq" => {
            let v = need_value()?;
            Ok(TreeSpec::elementwise(move |k| k <= v, bound.max(v)))
        }
        "chain_usual" => Ok(TreeSpec::chain(|a, b| a < b, bound)),
        "chain_reverse" => Ok(TreeSpec::chain(|a, b| a > b, bound)),
        "chain_finite" => {
            let field = b
                .field
                .clone()
                .ok_or_else(|| CliError::input("chain_finite needs \"field\""))?;
            let top = field.iter().copied().max().unwrap_or(0);
            let rank = move |x: u64| field.iter().position(|&y| y == x);
            Ok(TreeSpec::chain(
                move |a, b| match (rank(a), rank(b)) {
                    (Some(ra), Some(rb)) => ra < rb,
                    _ => false,
                },
                bound.max(top),
            ))
        }
        "sg_toy" | "sg_toy_even" => Ok(TreeSpec::sections(sg_toy_predicate, bound)),
        "bar_len_ge" => {
            let k =
                b.k.ok_or_else(|| CliError::input("bar_len_ge needs \"k\""))?;
            Ok(TreeSpec::bar(
                move |s| decode_code(s).len() as u64 >= k,
                bound,
            ))
        }
        "bar_never" => Ok(TreeSpec::bar(|_| false, bound)),
        "bar_code_even" => Ok(TreeSpec::bar(|s| s.value().is_multiple_of(2), bound)),
        "unfold_always" => Ok(TreeSpec::interleave_unfold(|_, _, _| true, bound)),
        "unfold_u_zero" => Ok(TreeSpec::interleave_unfold(
            |_, a, _| decode_code(a).iter().all(|x| x == 0),
            bound,
        )),
        other => Err(CliError::input(format!("unknown tree builtin {other:?}"))),
    }
}

pub fn branch(b: &BranchFile) -> Result<Point, CliError> {
    match b.builtin.as_str() {
        "const" => {
            let k = *b
                .params
                .first()
                .ok_or_else(|| CliError::input("branch const needs params [k]"))?;
            Ok(Point::branch(move |_| k))
        }
        "identity" => Ok(Point::branch(|n| n)),
        "mod" => {
            let m = *b
                .params
                .first()
                .ok_or_else(|| CliError::input("branch mod needs params [m]"))?;
            if m == 0 {
                return Err(CliError::input("branch mod needs m >= 1"));
            }
            Ok(Point::branch(move |n| n % m))
        }
        other => Err(CliError::input(format!("unknown branch builtin {other:?}"))),
    }
}
