use std::fmt::Write as _;

use crate::automaton::Generator;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering. Marked states are double circles, the initial state
/// gets an arrow from an invisible node, and uncontrollable events are
/// drawn dashed.
pub fn export_dot(g: &Generator) -> String {
    let mut out = String::from("digraph G {\n  rankdir=LR;\n");
    if let Some(q) = g.initial() {
        out.push_str("  __init [label=\"\", shape=none, width=0];\n");
        let _ = writeln!(out, "  __init -> {};", quote(g.name(q)));
    }
    for s in g.states() {
        let shape = if g.is_marked(s) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(
            out,
            "  {} [shape={shape}, label={}];",
            quote(g.name(s)),
            quote(g.name(s))
        );
    }
    for (s, e, t) in g.transitions() {
        let style = if g.alphabet().is_controllable(e) {
            "solid"
        } else {
            "dashed"
        };
        let _ = writeln!(
            out,
            "  {} -> {} [style={style}, label={}];",
            quote(g.name(s)),
            quote(g.name(t)),
            quote(g.alphabet().name(e))
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_fixtures::*;

    fn count(text: &str, needle: &str) -> usize {
        text.matches(needle).count()
    }

    #[test]
    fn f1_nodes_and_edges() {
        let d = export_dot(&f1());
        assert_eq!(count(&d, "[shape="), 2);
        assert_eq!(count(&d, "[style="), 2);
        assert_eq!(count(&d, "doublecircle"), 1);
    }

    #[test]
    fn empty_is_header_only() {
        let d = export_dot(&Generator::empty(f1().alphabet().clone()));
        assert_eq!(d, "digraph G {\n  rankdir=LR;\n}\n");
    }

    #[test]
    fn f3_double_circles() {
        let d = export_dot(&f3());
        assert_eq!(count(&d, "[shape="), 3);
        assert_eq!(count(&d, "[style="), 3);
        assert_eq!(count(&d, "doublecircle"), 2);
    }

    #[test]
    fn uncontrollable_dashed() {
        let d = export_dot(&unc_plant());
        assert_eq!(count(&d, "style=dashed"), 1);
    }
}
