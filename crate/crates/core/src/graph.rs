//! Bipartite-graph view of an array: one vertex per row and per column, one
//! labelled edge per filled cell.

use crate::array::Pfa;
use crate::group::GroupElement;

#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    pub row_vertices: usize,
    pub col_vertices: usize,
    /// (row, col, entry), 0-based.
    pub edges: Vec<(usize, usize, GroupElement)>,
}

impl BipartiteGraph {
    pub fn from_array(a: &Pfa) -> BipartiteGraph {
        BipartiteGraph {
            row_vertices: a.rows(),
            col_vertices: a.cols(),
            edges: a.filled().map(|(i, j, e)| (i, j, e.clone())).collect(),
        }
    }

    pub fn row_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.row_vertices];
        for &(i, _, _) in &self.edges {
            d[i] += 1;
        }
        d
    }

    pub fn col_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.col_vertices];
        for &(_, j, _) in &self.edges {
            d[j] += 1;
        }
        d
    }

    /// Graphviz body: rows ranked left, columns ranked right, entries as edge
    /// labels. Vertex names are 1-based.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("graph {} {{\n", name));
        out.push_str("  rankdir=LR;\n");
        out.push_str("  subgraph rows { rank=same; ");
        for i in 0..self.row_vertices {
            out.push_str(&format!("r{}; ", i + 1));
        }
        out.push_str("}\n  subgraph cols { rank=same; ");
        for j in 0..self.col_vertices {
            out.push_str(&format!("c{}; ", j + 1));
        }
        out.push_str("}\n");
        for (i, j, e) in &self.edges {
            let label: Vec<String> = e.residues().iter().map(|r| r.to_string()).collect();
            out.push_str(&format!(
                "  r{} -- c{} [label=\"{}\"];\n",
                i + 1,
                j + 1,
                label.join(":")
            ));
        }
        out.push_str("}\n");
        out
    }
}
