//! Graphviz export of the piece adjacency of a decomposition.

use petgraph::dot::Dot;
use petgraph::graph::UnGraph;

use crate::decomposition::DecompositionReport;

/// One node per component of `M_neg` and per piece of its complement, one
/// edge per shared boundary circle.
pub fn adjacency_graph(report: &DecompositionReport) -> UnGraph<String, String> {
    let mut g = UnGraph::new_undirected();
    let m: Vec<_> = report
        .m_neg_components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let class = c.classify().map(|k| k.name()).unwrap_or_else(|_| "?".into());
            g.add_node(format!("M_neg {i}: {class}, χ = {}", c.euler_characteristic()))
        })
        .collect();
    let p: Vec<_> = report
        .pieces
        .iter()
        .enumerate()
        .map(|(i, piece)| g.add_node(format!("piece {i}: {}, {} critical", piece.class.name(), piece.critical.len())))
        .collect();
    for (mi, pi, circle) in report.adjacency() {
        g.add_edge(m[mi], p[pi], format!("circle of {} edges", circle.len()));
    }
    g
}

pub fn decomposition_dot(report: &DecompositionReport) -> String {
    format!("{}", Dot::new(&adjacency_graph(report)))
}
