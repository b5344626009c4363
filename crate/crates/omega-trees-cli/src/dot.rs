//! DOT rendering: automata with state classes as colors, and explored
//! trees.

use omega_trees::cbmeasure::StateClass;
use omega_trees::seqcode::FinSeq;
use omega_trees::trees::Automaton;

fn seq_label(u: &FinSeq) -> String {
    if u.is_empty() {
        "()".to_string()
    } else {
        let items: Vec<String> = u.iter().map(|v| v.to_string()).collect();
        format!("({})", items.join(","))
    }
}

/// An automaton with states colored by classification: uncountable states
/// are firebrick, countable live states gold, dead states gray; states
/// with positive-measure cones get a double border.
pub fn automaton_dot(a: &Automaton, classes: &[StateClass]) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for (q, name) in a.state_names().iter().enumerate() {
        let class = classes[q];
        let color = if class.uncountable {
            "firebrick"
        } else if class.live {
            "gold"
        } else {
            "gray80"
        };
        let peripheries = if class.positive { 2 } else { 1 };
        let marker = if q == a.initial() { ", penwidth=2" } else { "" };
        out.push_str(&format!(
            "  \"{name}\" [style=filled, fillcolor={color}, peripheries={peripheries}{marker}];\n"
        ));
    }
    for (q, label, r) in a.edges() {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{label}\"];\n",
            a.state_names()[q],
            a.state_names()[r]
        ));
    }
    out.push_str("}\n");
    out
}

/// An explored node set as a tree drawing.
pub fn tree_dot(nodes: &[FinSeq]) -> String {
    let mut out = String::from("digraph tree {\n  node [shape=box];\n");
    for u in nodes {
        out.push_str(&format!("  \"{}\";\n", seq_label(u)));
    }
    for u in nodes {
        if let Some(parent) = u.parent() {
            let label = u.get(u.len() - 1).unwrap();
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{label}\"];\n",
                seq_label(&parent),
                seq_label(u)
            ));
        }
    }
    out.push_str("}\n");
    out
}
