//! JSON file formats for trees, automata, points, orders and maps, and
//! their conversion to library values.
//!
//! Tree files take one of four shapes, distinguished by their keys:
//!
//! - `{"finite": [[0],[0,1]]}` — an explicit node set (prefix-closed);
//! - `{"states": [...], "initial": "q", "edges": [{"from": "q", "label": 0,
//!   "to": "r"}]}` — a deterministic automaton;
//! - `{"op": "sum"|"product"|"att"|"subtree"|"shift_closure",
//!   "args": [...], "at": [...]}` — a combinator over operand tree files
//!   (`at` only for `subtree`);
//! - `{"builtin": "...", ...params}` — a named lazy family, see
//!   [`crate::builtins`].
//!
//! Points are `{"node": [...]}` or `{"branch": {"builtin": "...",
//! "params": [...]}}`. Orders are `{"field": [...], "pairs": [[a,b],...]}`
//! listing the full `≤` relation; partial maps are pair lists.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use omega_trees::linorders::{LinOrder, PartialMap};
use omega_trees::seqcode::FinSeq;
use omega_trees::space::{Dist, DistResult, Point};
use omega_trees::trees::{Automaton, TreeSpec};

use crate::builtins;
use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeFile {
    Finite {
        finite: Vec<Vec<u64>>,
    },
    Regular {
        states: Vec<String>,
        initial: String,
        edges: Vec<EdgeFile>,
    },
    Derived {
        op: String,
        args: Vec<TreeFile>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        at: Option<Vec<u64>>,
    },
    Builtin(builtins::BuiltinFile),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeFile {
    pub from: String,
    pub label: u64,
    pub to: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutomatonFile {
    pub states: Vec<String>,
    /// `null` only in outputs presenting the empty automaton (an empty
    /// perfect kernel); inputs must name a state.
    pub initial: Option<String>,
    pub edges: Vec<EdgeFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrderFile {
    pub field: Vec<u64>,
    pub pairs: Vec<(u64, u64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointFile {
    Node { node: Vec<u64> },
    Branch { branch: builtins::BranchFile },
}

pub fn automaton_from_file(f: &AutomatonFile) -> Result<Automaton, CliError> {
    let mut index = BTreeMap::new();
    for (i, name) in f.states.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(CliError::input(format!("duplicate state name {name:?}")));
        }
    }
    let initial_name = f
        .initial
        .as_ref()
        .ok_or_else(|| CliError::input("automaton needs an initial state"))?;
    let initial = *index
        .get(initial_name)
        .ok_or_else(|| CliError::input(format!("unknown initial state {initial_name:?}")))?;
    let mut edges = BTreeMap::new();
    for e in &f.edges {
        let from = *index
            .get(&e.from)
            .ok_or_else(|| CliError::input(format!("unknown state {:?}", e.from)))?;
        let to = *index
            .get(&e.to)
            .ok_or_else(|| CliError::input(format!("unknown state {:?}", e.to)))?;
        if edges.insert((from, e.label), to).is_some() {
            return Err(CliError::input(format!(
                "duplicate edge from {:?} on label {}",
                e.from, e.label
            )));
        }
    }
    Automaton::new(f.states.clone(), initial, edges).map_err(|e| CliError::input(e.to_string()))
}

pub fn automaton_to_file(a: &Automaton) -> AutomatonFile {
    let names = a.state_names();
    AutomatonFile {
        states: names.to_vec(),
        initial: names.get(a.initial()).cloned(),
        edges: a
            .edges()
            .map(|(q, l, r)| EdgeFile {
                from: names[q].clone(),
                label: l,
                to: names[r].clone(),
            })
            .collect(),
    }
}

pub fn tree_from_file(f: &TreeFile) -> Result<TreeSpec, CliError> {
    match f {
        TreeFile::Finite { finite } => {
            TreeSpec::finite(finite.iter().map(|v| FinSeq::new(v.clone())))
                .map_err(|e| CliError::input(e.to_string()))
        }
        TreeFile::Regular {
            states,
            initial,
            edges,
        } => {
            let a = automaton_from_file(&AutomatonFile {
                states: states.clone(),
                initial: Some(initial.clone()),
                edges: edges.clone(),
            })?;
            TreeSpec::regular(a).map_err(|e| CliError::input(e.to_string()))
        }
        TreeFile::Derived { op, args, at } => {
            let operands: Vec<TreeSpec> =
                args.iter().map(tree_from_file).collect::<Result<_, _>>()?;
            match (op.as_str(), operands.as_slice()) {
                ("sum", [t, s]) => Ok(TreeSpec::sum(t, s)),
                ("product", [t, s]) => Ok(TreeSpec::product(t, s)),
                ("att", [t]) => Ok(t.att()),
                ("shift_closure", [t]) => Ok(t.shift_closure()),
                ("subtree", [t]) => {
                    let at = at
                        .as_ref()
                        .ok_or_else(|| CliError::input("subtree needs an \"at\" node"))?;
                    Ok(t.subtree_at(FinSeq::new(at.clone())))
                }
                _ => Err(CliError::input(format!(
                    "unknown combinator {op:?} or wrong operand count"
                ))),
            }
        }
        TreeFile::Builtin(b) => builtins::tree(b),
    }
}

pub fn point_from_file(f: &PointFile) -> Result<Point, CliError> {
    match f {
        PointFile::Node { node } => Ok(Point::Node(FinSeq::new(node.clone()))),
        PointFile::Branch { branch } => builtins::branch(branch),
    }
}

/// Renders a point: nodes verbatim, branches as a prefix of the requested
/// length.
pub fn point_to_json(p: &Point, depth: u64) -> Result<serde_json::Value, CliError> {
    match p {
        Point::Node(u) => Ok(serde_json::json!({ "node": u.as_slice() })),
        Point::Branch(alpha) => {
            let prefix: Option<Vec<u64>> = (0..depth).map(|n| alpha(n)).collect();
            let prefix =
                prefix.ok_or_else(|| CliError::domain("oracle", "branch oracle failed"))?;
            Ok(serde_json::json!({ "branchPrefix": prefix }))
        }
    }
}

pub fn dist_to_json(d: &DistResult) -> serde_json::Value {
    let pair = |r: &Dist| serde_json::json!([*r.numer(), *r.denom()]);
    match d {
        DistResult::Exact(r) => serde_json::json!({ "exact": pair(r) }),
        DistResult::AtMost(r) => serde_json::json!({ "atMost": pair(r) }),
    }
}

/// Exact rationals as `[num, den]`, falling back to decimal strings when
/// a component exceeds 64 bits.
pub fn measure_to_json(m: &omega_trees::cbmeasure::Measure) -> serde_json::Value {
    let to_json = |x: &num_bigint::BigInt| -> serde_json::Value {
        match u64::try_from(x.clone()) {
            Ok(v) => serde_json::json!(v),
            Err(_) => serde_json::json!(x.to_string()),
        }
    };
    serde_json::json!([to_json(m.numer()), to_json(m.denom())])
}

pub fn order_from_file(f: &OrderFile) -> Result<LinOrder, CliError> {
    LinOrder::from_pairs(&f.field, &f.pairs).map_err(|e| CliError::input(e.to_string()))
}

pub fn order_to_file(o: &LinOrder) -> OrderFile {
    OrderFile {
        field: o.field().to_vec(),
        pairs: o.leq_pairs(),
    }
}

pub fn map_from_pairs(pairs: &[(u64, u64)]) -> Result<PartialMap, CliError> {
    PartialMap::from_pairs(pairs).map_err(|e| CliError::input(e.to_string()))
}

pub fn map_to_json(m: &PartialMap) -> serde_json::Value {
    serde_json::json!(m.pairs().collect::<Vec<_>>())
}
