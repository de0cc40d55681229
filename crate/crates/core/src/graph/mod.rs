//! Tanner multigraphs and the graph-level tooling built on them.
//!
//! Edges are first-class objects with dense ids, so a protograph may carry
//! parallel edges between the same variable/check pair. Matrix views
//! (alist, biadjacency) are only meaningful for simple graphs.

mod alist;
mod cycles;
mod degree;
mod peg;
mod walk;

pub use alist::{load_alist, store_alist};
pub use cycles::{
    check_len_bound, enumerate_cycles, enumerate_cycles_bounded, girth, max_enum_len, Cycle, CycleBudget,
    Girth, LowAceSearch, RootSet, DEFAULT_MAX_ENUM_LEN, MAX_ENUM_LEN_ENV,
};
pub use degree::{degree_distribution, DegreeDistribution};
pub use peg::peg_construct;
pub use walk::{Dir, Node, Step, Walk};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type EdgeId = usize;

/// An edge between variable node `var` and check node `chk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub var: usize,
    pub chk: usize,
}

/// Bipartite multigraph of variable and check nodes.
///
/// Immutable after construction. Edge ids are the positions in the edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n_var: usize,
    n_chk: usize,
    edges: Vec<Edge>,
    var_adj: Vec<Vec<EdgeId>>,
    chk_adj: Vec<Vec<EdgeId>>,
}

impl TannerGraph {
    /// Builds a graph from `(var, chk)` pairs; edge `i` is the `i`-th pair.
    pub fn new<I>(n_var: usize, n_chk: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut var_adj = vec![Vec::new(); n_var];
        let mut chk_adj = vec![Vec::new(); n_chk];
        let mut list = Vec::new();
        for (id, (var, chk)) in edges.into_iter().enumerate() {
            if var >= n_var {
                return Err(Error::InvalidGraph(format!(
                    "edge {id}: variable index {var} out of range (n_var = {n_var})"
                )));
            }
            if chk >= n_chk {
                return Err(Error::InvalidGraph(format!(
                    "edge {id}: check index {chk} out of range (n_chk = {n_chk})"
                )));
            }
            var_adj[var].push(id);
            chk_adj[chk].push(id);
            list.push(Edge { var, chk });
        }
        Ok(Self {
            n_var,
            n_chk,
            edges: list,
            var_adj,
            chk_adj,
        })
    }

    pub fn n_var(&self) -> usize {
        self.n_var
    }

    pub fn n_chk(&self) -> usize {
        self.n_chk
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn var_edges(&self, var: usize) -> &[EdgeId] {
        &self.var_adj[var]
    }

    pub fn chk_edges(&self, chk: usize) -> &[EdgeId] {
        &self.chk_adj[chk]
    }

    pub fn var_degree(&self, var: usize) -> usize {
        self.var_adj[var].len()
    }

    pub fn chk_degree(&self, chk: usize) -> usize {
        self.chk_adj[chk].len()
    }

    pub fn max_var_degree(&self) -> usize {
        self.var_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The endpoint of `edge` opposite to `node`.
    pub fn other_end(&self, edge: EdgeId, node: Node) -> Node {
        let e = self.edges[edge];
        match node {
            Node::Var(_) => Node::Chk(e.chk),
            Node::Chk(_) => Node::Var(e.var),
        }
    }

    /// True when some variable/check pair is joined by more than one edge.
    pub fn has_parallel_edges(&self) -> bool {
        self.var_adj.iter().any(|adj| {
            let mut chks: Vec<usize> = adj.iter().map(|&e| self.edges[e].chk).collect();
            chks.sort_unstable();
            chks.windows(2).any(|w| w[0] == w[1])
        })
    }

    /// Sorted `(chk, var)` pairs with their edge multiplicity (the entries h_ij).
    pub fn biadjacency(&self) -> Vec<((usize, usize), usize)> {
        let mut pairs: Vec<(usize, usize)> = self.edges.iter().map(|e| (e.chk, e.var)).collect();
        pairs.sort_unstable();
        let mut out: Vec<((usize, usize), usize)> = Vec::new();
        for p in pairs {
            match out.last_mut() {
                Some((q, n)) if *q == p => *n += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Same graph with edge ids reassigned by `perm` (new id `i` is old edge `perm[i]`).
    pub fn relabel_edges(&self, perm: &[EdgeId]) -> Result<Self> {
        if perm.len() != self.edges.len() {
            return Err(Error::InvalidGraph("edge permutation has wrong length".into()));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidGraph("not a permutation of edge ids".into()));
            }
        }
        Self::new(
            self.n_var,
            self.n_chk,
            perm.iter().map(|&p| (self.edges[p].var, self.edges[p].chk)),
        )
    }

    pub fn to_protograph(&self) -> ProtographFile {
        ProtographFile {
            n_var: self.n_var,
            n_chk: self.n_chk,
            edges: self.edges.iter().map(|e| [e.var, e.chk]).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProtographFile = serde_json::from_str(text)?;
        file.into_graph()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_protograph()).expect("protograph serializes")
    }
}

/// Protograph JSON layout: `{n_var, n_chk, edges: [[var, chk], ...]}`.
///
/// Edge order is preserved; the edge id is the array position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtographFile {
    pub n_var: usize,
    pub n_chk: usize,
    pub edges: Vec<[usize; 2]>,
}

impl ProtographFile {
    pub fn into_graph(self) -> Result<TannerGraph> {
        TannerGraph::new(self.n_var, self.n_chk, self.edges.into_iter().map(|[v, c]| (v, c)))
    }
}

/// Three variable nodes with degrees (2, 3, 2) and three check nodes; two
/// 4-cycles and one 6-cycle. Edges e1..e7 are ids 0..6:
/// b1c1, b1c2, b2c1, b2c2, b2c3, b3c2, b3c3.
pub fn example_graph() -> TannerGraph {
    TannerGraph::new(
        3,
        3,
        [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)],
    )
    .expect("valid example graph")
}
