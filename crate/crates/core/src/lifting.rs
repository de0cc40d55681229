//! Cyclic liftings: per-edge shifts, walk shifts and orders, expansion to the
//! lifted Tanner graph, and the block-circulant parity-check view.
//!
//! Convention: edge `e = {b, c}` with shift `d` connects `b^i` to `c^(i+d mod N)`.
//! Traversing an edge variable→check adds its shift, check→variable subtracts it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Cycle, Dir, EdgeId, TannerGraph, Walk};

/// Name recorded in shift files for the direction convention.
pub const CONVENTION: &str = "var-to-chk";

/// Shift in `Z_N` for every edge of a base graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftAssignment {
    lift_degree: u64,
    shifts: Vec<u64>,
}

impl ShiftAssignment {
    pub fn new(lift_degree: u64, shifts: Vec<u64>) -> Result<Self> {
        if lift_degree == 0 {
            return Err(Error::Assignment("lifting degree must be at least 1".into()));
        }
        if let Some((e, &d)) = shifts.iter().enumerate().find(|(_, &d)| d >= lift_degree) {
            return Err(Error::Assignment(format!(
                "edge {e}: shift {d} is not in Z_{lift_degree}"
            )));
        }
        Ok(Self { lift_degree, shifts })
    }

    pub fn zeros(lift_degree: u64, n_edges: usize) -> Result<Self> {
        Self::new(lift_degree, vec![0; n_edges])
    }

    pub fn lift_degree(&self) -> u64 {
        self.lift_degree
    }

    pub fn shift(&self, e: EdgeId) -> u64 {
        self.shifts[e]
    }

    pub fn shifts(&self) -> &[u64] {
        &self.shifts
    }

    pub fn set(&mut self, e: EdgeId, d: u64) -> Result<()> {
        if d >= self.lift_degree {
            return Err(Error::Assignment(format!("shift {d} is not in Z_{}", self.lift_degree)));
        }
        self.shifts[e] = d;
        Ok(())
    }

    /// Errors unless the assignment covers exactly the edges of `g`.
    pub fn check_graph(&self, g: &TannerGraph) -> Result<()> {
        if self.shifts.len() != g.n_edges() {
            return Err(Error::Assignment(format!(
                "assignment has {} shifts but the graph has {} edges",
                self.shifts.len(),
                g.n_edges()
            )));
        }
        Ok(())
    }

    /// Serializable form; includes the matrix view when `g` is simple.
    pub fn to_file(&self, g: &TannerGraph) -> ShiftFile {
        let matrix = if g.has_parallel_edges() {
            None
        } else {
            let mut m = vec![vec![-1i64; g.n_var()]; g.n_chk()];
            for (e, edge) in g.edges().iter().enumerate() {
                m[edge.chk][edge.var] = self.shifts[e] as i64;
            }
            Some(m)
        };
        ShiftFile {
            lift_degree: self.lift_degree,
            convention: CONVENTION.to_string(),
            shifts: self
                .shifts
                .iter()
                .enumerate()
                .map(|(edge, &d)| ShiftEntry { edge, d })
                .collect(),
            matrix,
        }
    }

    pub fn from_file(file: &ShiftFile, g: &TannerGraph) -> Result<Self> {
        if file.convention != CONVENTION {
            return Err(Error::Assignment(format!(
                "unsupported convention `{}` (expected `{CONVENTION}`)",
                file.convention
            )));
        }
        let mut shifts = vec![None; g.n_edges()];
        for entry in &file.shifts {
            let slot = shifts.get_mut(entry.edge).ok_or_else(|| {
                Error::Assignment(format!("edge {} is not in the base graph", entry.edge))
            })?;
            if slot.replace(entry.d).is_some() {
                return Err(Error::Assignment(format!("edge {} listed twice", entry.edge)));
            }
        }
        let shifts = shifts
            .into_iter()
            .enumerate()
            .map(|(e, d)| d.ok_or_else(|| Error::Assignment(format!("edge {e} has no shift"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.lift_degree, shifts)
    }
}

/// Shift file layout: `{N, convention: "var-to-chk", shifts: [{edge, d}], matrix?}`.
///
/// `matrix` is the m×n view with `-1` marking absent entries; it is present
/// only for simple base graphs and is informational on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftFile {
    #[serde(rename = "N")]
    pub lift_degree: u64,
    pub convention: String,
    pub shifts: Vec<ShiftEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftEntry {
    pub edge: EdgeId,
    pub d: u64,
}

/// Permutation shift of a walk: signed sum of edge shifts mod N.
pub fn walk_shift(g: &TannerGraph, walk: &Walk, a: &ShiftAssignment) -> Result<u64> {
    a.check_graph(g)?;
    let n = a.lift_degree as i128;
    let mut acc: i128 = 0;
    for s in walk.steps() {
        if s.edge >= g.n_edges() {
            return Err(Error::InvalidWalk(format!("edge {} not in the base graph", s.edge)));
        }
        let d = a.shifts[s.edge] as i128;
        acc += match s.dir {
            Dir::Up => d,
            Dir::Down => -d,
        };
    }
    Ok(acc.rem_euclid(n) as u64)
}

/// Order `N / gcd(N, d)` of a walk with shift `d`; `gcd(N, 0) = N`.
pub fn walk_order(d: u64, n: u64) -> u64 {
    n / num_integer::gcd(n, d)
}

/// A base graph, its shifts, and the expanded lifted graph.
///
/// Variable copy `b^i` is node `b·N + i`, check copy `c^j` is `c·N + j`, and
/// copy `i` of base edge `e` is lifted edge `e·N + i` joining `b^i` to `c^(i+d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedCode {
    base: TannerGraph,
    assignment: ShiftAssignment,
    expanded: TannerGraph,
}

impl LiftedCode {
    pub fn base(&self) -> &TannerGraph {
        &self.base
    }

    pub fn assignment(&self) -> &ShiftAssignment {
        &self.assignment
    }

    pub fn expanded(&self) -> &TannerGraph {
        &self.expanded
    }

    pub fn lift_degree(&self) -> u64 {
        self.assignment.lift_degree
    }

    /// Copy 0 of every base variable node. Every cycle of the lift is a cyclic
    /// shift of one passing through one of these.
    pub fn copy_zero_vars(&self) -> Vec<usize> {
        let n = self.lift_degree() as usize;
        (0..self.base.n_var()).map(|b| b * n).collect()
    }

    /// `(base node, copy)` of an expanded variable node.
    pub fn var_origin(&self, v: usize) -> (usize, usize) {
        let n = self.lift_degree() as usize;
        (v / n, v % n)
    }

    pub fn edge_origin(&self, e: EdgeId) -> (EdgeId, usize) {
        let n = self.lift_degree() as usize;
        (e / n, e % n)
    }
}

/// Expands `base` by the cyclic lift `a`.
pub fn expand(base: &TannerGraph, a: &ShiftAssignment) -> Result<LiftedCode> {
    a.check_graph(base)?;
    let n = a.lift_degree as usize;
    let edges = base.edges().iter().enumerate().flat_map(|(e, edge)| {
        let d = a.shifts[e] as usize;
        (0..n).map(move |i| (edge.var * n + i, edge.chk * n + (i + d) % n))
    });
    let expanded = TannerGraph::new(base.n_var() * n, base.n_chk() * n, edges)?;
    Ok(LiftedCode {
        base: base.clone(),
        assignment: a.clone(),
        expanded,
    })
}

/// Block-circulant description of a lifted code: entry `(i, j)` is the shift of
/// the circulant in block row `i`, column `j`, or `-1` for an all-zero block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QcMatrix {
    pub lift_degree: u64,
    pub entries: Vec<Vec<i64>>,
}

pub fn export_qc_matrix(code: &LiftedCode) -> Result<QcMatrix> {
    if code.base.has_parallel_edges() {
        return Err(Error::ParallelEdges);
    }
    let mut entries = vec![vec![-1i64; code.base.n_var()]; code.base.n_chk()];
    for (e, edge) in code.base.edges().iter().enumerate() {
        entries[edge.chk][edge.var] = code.assignment.shifts[e] as i64;
    }
    Ok(QcMatrix {
        lift_degree: code.lift_degree(),
        entries,
    })
}

impl QcMatrix {
    /// Text form: `m n N`, then one row of `n` entries per block row.
    pub fn to_text(&self) -> String {
        let m = self.entries.len();
        let n = self.entries.first().map_or(0, Vec::len);
        let mut out = format!("{m} {n} {}\n", self.lift_degree);
        for row in &self.entries {
            let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&r.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let bad = |msg: &str| Error::Config(format!("QC matrix: {msg}"));
        let header: Vec<u64> = lines
            .next()
            .ok_or_else(|| bad("missing header"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad header")))
            .collect::<Result<_>>()?;
        let [m, n, lift] = header[..] else {
            return Err(bad("header must be `m n N`"));
        };
        let mut entries = Vec::with_capacity(m as usize);
        for _ in 0..m {
            let row: Vec<i64> = lines
                .next()
                .ok_or_else(|| bad("missing row"))?
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("bad entry")))
                .collect::<Result<_>>()?;
            if row.len() != n as usize {
                return Err(bad("row has wrong length"));
            }
            if row.iter().any(|&x| x < -1 || x >= lift as i64) {
                return Err(bad("entry outside Z_N and -1"));
            }
            entries.push(row);
        }
        Ok(Self {
            lift_degree: lift,
            entries,
        })
    }

    /// Expanded Tanner graph: block `(i, j)` with shift `d` joins `b_j^k` to `c_i^(k+d)`.
    pub fn to_graph(&self) -> Result<TannerGraph> {
        let n = self.lift_degree as usize;
        let m_blocks = self.entries.len();
        let n_blocks = self.entries.first().map_or(0, Vec::len);
        let mut edges = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                if d < 0 {
                    continue;
                }
                for k in 0..n {
                    edges.push((j * n + k, i * n + (k + d as usize) % n));
                }
            }
        }
        TannerGraph::new(n_blocks * n, m_blocks * n, edges)
    }
}

/// Predicted inverse image of a base cycle: `count` cycles, each of `length` and `ace`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleImage {
    pub count: u64,
    pub length: u64,
    pub ace: u64,
}

/// Inverse image of a base cycle under the lift: `N/k` cycles of length `k·ℓ`
/// and ACE `k·η`, with `k` the order of the cycle's shift.
pub fn predict_cycle_image(g: &TannerGraph, cycle: &Cycle, a: &ShiftAssignment) -> Result<CycleImage> {
    let d = walk_shift(g, cycle.walk(), a)?;
    let k = walk_order(d, a.lift_degree);
    Ok(CycleImage {
        count: a.lift_degree / k,
        length: k * cycle.len() as u64,
        ace: k * cycle.ace(),
    })
}
