use std::fmt::Write;

use super::{PosetCategory, Subcategory};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Graphviz rendering of the Hasse diagram. Each highlighted subcategory gets
/// a colour; its objects are filled and its internal edges drawn bold. Objects
/// also carry the labels of every highlight they belong to.
pub fn to_dot(cat: &PosetCategory, highlights: &[(String, Subcategory)]) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=circle];\n");
    for x in 0..cat.len() {
        let tags: Vec<&str> = highlights
            .iter()
            .filter(|(_, s)| s.contains(x))
            .map(|(l, _)| l.as_str())
            .collect();
        let first = highlights.iter().position(|(_, s)| s.contains(x));
        let _ = write!(out, "  \"{}\"", escape(cat.name(x)));
        match first {
            Some(h) => {
                let _ = writeln!(
                    out,
                    " [style=filled, fillcolor=\"{}\", xlabel=\"{}\"];",
                    PALETTE[h % PALETTE.len()],
                    escape(&tags.join(","))
                );
            }
            None => out.push_str(";\n"),
        }
    }
    for &(a, b) in cat.edges() {
        let _ = write!(
            out,
            "  \"{}\" -> \"{}\"",
            escape(cat.name(a)),
            escape(cat.name(b))
        );
        let owner = highlights
            .iter()
            .position(|(_, s)| s.contains(a) && s.contains(b));
        match owner {
            Some(h) => {
                let _ = writeln!(
                    out,
                    " [penwidth=2.5, color=\"{}\"];",
                    PALETTE[h % PALETTE.len()]
                );
            }
            None => out.push_str(";\n"),
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
