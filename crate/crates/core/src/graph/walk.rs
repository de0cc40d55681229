use serde::{Deserialize, Serialize};

use super::{EdgeId, TannerGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Var(usize),
    Chk(usize),
}

/// Traversal direction of an edge: `Up` is variable→check (`+`), `Down` is
/// check→variable (`-`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    Up,
    Down,
}

impl Dir {
    pub fn flip(self) -> Self {
        match self {
            Dir::Up => Dir::Down,
            Dir::Down => Dir::Up,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Dir::Up => 1,
            Dir::Down => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub edge: EdgeId,
    pub dir: Dir,
}

impl Step {
    pub fn up(edge: EdgeId) -> Self {
        Self { edge, dir: Dir::Up }
    }

    pub fn down(edge: EdgeId) -> Self {
        Self { edge, dir: Dir::Down }
    }
}

/// A directed walk starting at a variable node, as a sequence of directed edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    steps: Vec<Step>,
}

impl Walk {
    /// Checks that the steps alternate `+`/`-` and chain through consistent nodes of `g`.
    pub fn new(g: &TannerGraph, steps: Vec<Step>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidWalk("empty walk".into()));
        }
        let mut at: Option<Node> = None;
        for (i, s) in steps.iter().enumerate() {
            if s.edge >= g.n_edges() {
                return Err(Error::InvalidWalk(format!("edge {} not in graph", s.edge)));
            }
            let expected = if i % 2 == 0 { Dir::Up } else { Dir::Down };
            if s.dir != expected {
                return Err(Error::InvalidWalk(format!(
                    "step {i} must be {expected:?} for a walk starting at a variable node"
                )));
            }
            let e = g.edge(s.edge);
            let (from, to) = match s.dir {
                Dir::Up => (Node::Var(e.var), Node::Chk(e.chk)),
                Dir::Down => (Node::Chk(e.chk), Node::Var(e.var)),
            };
            if let Some(prev) = at {
                if prev != from {
                    return Err(Error::InvalidWalk(format!(
                        "step {i} leaves {from:?} but the walk is at {prev:?}"
                    )));
                }
            }
            at = Some(to);
        }
        Ok(Self { steps })
    }

    /// Parses the `e2+ e4- ...` notation with 1-based edge labels.
    pub fn parse(g: &TannerGraph, text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for tok in text.split_whitespace() {
            let tok = tok.trim_start_matches('e');
            let (num, dir) = if let Some(n) = tok.strip_suffix('+') {
                (n, Dir::Up)
            } else if let Some(n) = tok.strip_suffix('-') {
                (n, Dir::Down)
            } else {
                return Err(Error::InvalidWalk(format!("missing direction in `{tok}`")));
            };
            let label: usize = num
                .parse()
                .map_err(|_| Error::InvalidWalk(format!("bad edge label `{num}`")))?;
            if label == 0 {
                return Err(Error::InvalidWalk("edge labels are 1-based".into()));
            }
            steps.push(Step { edge: label - 1, dir });
        }
        Self::new(g, steps)
    }

    pub(crate) fn from_steps_unchecked(steps: Vec<Step>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self, g: &TannerGraph) -> usize {
        g.edge(self.steps[0].edge).var
    }

    pub fn end(&self, g: &TannerGraph) -> Node {
        let last = self.steps[self.steps.len() - 1];
        let e = g.edge(last.edge);
        match last.dir {
            Dir::Up => Node::Chk(e.chk),
            Dir::Down => Node::Var(e.var),
        }
    }

    pub fn is_closed(&self, g: &TannerGraph) -> bool {
        self.end(g) == Node::Var(self.start(g))
    }

    pub fn is_backtrackless(&self) -> bool {
        self.steps.windows(2).all(|w| w[0].edge != w[1].edge)
    }

    pub fn is_tailless(&self) -> bool {
        self.steps.len() < 2 || self.steps[0].edge != self.steps[self.steps.len() - 1].edge
    }

    /// Closed, backtrackless and tailless.
    pub fn is_tbc(&self, g: &TannerGraph) -> bool {
        self.steps.len().is_multiple_of(2) && self.is_closed(g) && self.is_backtrackless() && self.is_tailless()
    }

    /// Variable nodes visited, one per `+` step, with multiplicity.
    pub fn var_visits<'a>(&'a self, g: &'a TannerGraph) -> impl Iterator<Item = usize> + 'a {
        self.steps
            .iter()
            .filter(|s| s.dir == Dir::Up)
            .map(move |s| g.edge(s.edge).var)
    }

    /// Sum of `deg(v) - 2` over the variable visits of the walk.
    pub fn ace(&self, g: &TannerGraph) -> u64 {
        self.var_visits(g)
            .map(|v| g.var_degree(v).saturating_sub(2) as u64)
            .sum()
    }

    /// True when the closed walk passes through no node twice (start = end excepted).
    pub fn is_cycle(&self, g: &TannerGraph) -> bool {
        if !self.is_closed(g) || !self.steps.len().is_multiple_of(2) {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        for s in self.steps.iter() {
            let e = g.edge(s.edge);
            let node = match s.dir {
                Dir::Up => Node::Var(e.var),
                Dir::Down => Node::Chk(e.chk),
            };
            if !seen.insert(node) {
                return false;
            }
        }
        // a 2-step closed walk over the same edge twice is a backtrack, not a cycle
        self.is_backtrackless() && self.is_tailless()
    }

    /// The same closed walk traversed in the opposite direction, from the same start.
    pub fn reversed(&self) -> Self {
        Self {
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| Step { edge: s.edge, dir: s.dir.flip() })
                .collect(),
        }
    }

    /// Rotation of a closed walk by `offset` steps (`offset` must be even).
    pub fn rotated(&self, offset: usize) -> Self {
        let n = self.steps.len();
        Self {
            steps: (0..n).map(|i| self.steps[(i + offset) % n]).collect(),
        }
    }

    /// Lexicographically smallest representation among all even rotations of both
    /// traversal directions.
    pub fn canonical(&self) -> Self {
        let mut best = self.steps.clone();
        let n = self.steps.len();
        for base in [self.clone(), self.reversed()] {
            for off in (0..n).step_by(2) {
                if rotation_less(&base.steps, off, &best) {
                    best = base.rotated(off).steps;
                }
            }
        }
        Self { steps: best }
    }

    /// Whether this representation is already the canonical one.
    pub fn is_canonical(&self) -> bool {
        let n = self.steps.len();
        let rev = self.reversed();
        for off in (0..n).step_by(2) {
            if off != 0 && rotation_less(&self.steps, off, &self.steps) {
                return false;
            }
            if rotation_less(&rev.steps, off, &self.steps) {
                return false;
            }
        }
        true
    }

    /// True when the closed walk is not a repetition of a shorter closed walk.
    pub fn is_primitive(&self) -> bool {
        let n = self.steps.len();
        (2..n)
            .step_by(2)
            .filter(|p| n.is_multiple_of(*p))
            .all(|p| (0..n).any(|i| self.steps[i] != self.steps[(i + p) % n]))
    }

    /// Net traversal count per edge: `+1` per `+` traversal, `-1` per `-`.
    pub fn edge_coefficients(&self) -> Vec<(EdgeId, i64)> {
        let mut coef: Vec<(EdgeId, i64)> = Vec::new();
        for s in &self.steps {
            match coef.iter_mut().find(|(e, _)| *e == s.edge) {
                Some((_, c)) => *c += s.dir.sign(),
                None => coef.push((s.edge, s.dir.sign())),
            }
        }
        coef.sort_unstable_by_key(|&(e, _)| e);
        coef
    }

    /// Distinct edges used, ascending.
    pub fn distinct_edges(&self) -> Vec<EdgeId> {
        let mut v: Vec<EdgeId> = self.steps.iter().map(|s| s.edge).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `|E| - |V| + 1` of the subgraph traced by the walk: 1 for a cycle, ≥ 2 when
    /// the walk is built from several cycles.
    pub fn cyclomatic_number(&self, g: &TannerGraph) -> usize {
        let edges = self.distinct_edges();
        let mut nodes: Vec<Node> = edges
            .iter()
            .flat_map(|&e| {
                let ed = g.edge(e);
                [Node::Var(ed.var), Node::Chk(ed.chk)]
            })
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        edges.len() + 1 - nodes.len()
    }

    /// `e2+ e4- ...` with 1-based labels.
    pub fn notation(&self) -> String {
        self.steps
            .iter()
            .map(|s| {
                format!(
                    "e{}{}",
                    s.edge + 1,
                    if s.dir == Dir::Up { '+' } else { '-' }
                )
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Compares `steps` rotated by `off` against `other` without allocating.
fn rotation_less(steps: &[Step], off: usize, other: &[Step]) -> bool {
    let n = steps.len();
    for i in 0..n {
        let a = steps[(i + off) % n];
        let b = other[i];
        match a.cmp(&b) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}
