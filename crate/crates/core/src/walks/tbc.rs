//! Enumeration of tailless backtrackless closed (TBC) walks by tree growth.
//!
//! From every variable node the search grows all backtrackless walks one
//! layer at a time and records those that come back to the root with a last
//! edge different from the first. Each walk is reported once, in canonical
//! form (smallest representation over even rotations and both directions).
//! Since every traversal of every edge starts some representation, the
//! canonical one begins with the walk's smallest edge id; the search therefore
//! fixes that first edge and never uses smaller ids afterwards.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::problematic::AceLimits;
use crate::error::{Error, Result};
use crate::graph::{check_len_bound, max_enum_len, Dir, EdgeId, Step, TannerGraph, Walk};

/// A primitive TBC walk in canonical form with its ACE.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TbcWalk {
    walk: Walk,
    ace: u64,
}

impl TbcWalk {
    /// Validates `walk` as a TBC walk of `g` and stores its canonical form.
    pub fn new(g: &TannerGraph, walk: Walk) -> Result<Self> {
        if !walk.is_tbc(g) {
            return Err(Error::InvalidWalk(format!("`{}` is not a TBC walk", walk.notation())));
        }
        let ace = walk.ace(g);
        Ok(Self {
            walk: walk.canonical(),
            ace,
        })
    }

    pub fn walk(&self) -> &Walk {
        &self.walk
    }

    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    pub fn ace(&self) -> u64 {
        self.ace
    }

    pub fn to_record(&self) -> WalkRecord {
        WalkRecord {
            edges: self
                .walk
                .steps()
                .iter()
                .map(|s| (s.edge, s.dir.sign() as i8))
                .collect(),
            length: self.len(),
            ace: self.ace,
        }
    }
}

/// One line of a walk dump: `{"edges": [[id, ±1], ...], "length": w, "ace": η}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub edges: Vec<(EdgeId, i8)>,
    pub length: usize,
    pub ace: u64,
}

impl WalkRecord {
    pub fn to_walk(&self, g: &TannerGraph) -> Result<TbcWalk> {
        let steps = self
            .edges
            .iter()
            .map(|&(edge, dir)| match dir {
                1 => Ok(Step::up(edge)),
                -1 => Ok(Step::down(edge)),
                other => Err(Error::InvalidWalk(format!("direction must be ±1, got {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        TbcWalk::new(g, Walk::new(g, steps)?)
    }
}

/// Serializes walks as JSON lines.
pub fn walk_dump(walks: impl IntoIterator<Item = impl std::borrow::Borrow<TbcWalk>>) -> String {
    let mut out = String::new();
    for w in walks {
        out.push_str(&serde_json::to_string(&w.borrow().to_record()).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Knobs for [`enumerate_tbc_walks_with`].
#[derive(Debug, Clone, Default)]
pub struct WalkSearch {
    pub max_len: usize,
    /// Keep only walks that are cycles or built from exactly two cycles
    /// (cyclomatic number ≤ 2). An approximation for dense base graphs.
    pub two_cycle_only: bool,
    /// Cap on DFS node expansions across all roots.
    pub budget: Option<u64>,
    pub(crate) limits: Option<AceLimits>,
}

impl WalkSearch {
    pub fn new(max_len: usize) -> Self {
        Self {
            max_len,
            ..Self::default()
        }
    }

    pub fn two_cycle_only(mut self, on: bool) -> Self {
        self.two_cycle_only = on;
        self
    }

    pub fn budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }
}

/// All primitive TBC walks of length ≤ `max_len`, sorted by (length, ACE, walk).
pub fn enumerate_tbc_walks(g: &TannerGraph, max_len: usize) -> Result<Vec<TbcWalk>> {
    enumerate_tbc_walks_with(g, &WalkSearch::new(max_len))
}

pub fn enumerate_tbc_walks_with(g: &TannerGraph, search: &WalkSearch) -> Result<Vec<TbcWalk>> {
    check_len_bound(search.max_len, max_enum_len())?;
    let spent = AtomicU64::new(0);
    let per_root = (0..g.n_var())
        .into_par_iter()
        .map(|root| {
            let mut found = Vec::new();
            for &first in g.var_edges(root) {
                let mut grow = Grow::new(g, search, root, first, &spent);
                grow.run(&mut found)?;
            }
            Ok(found)
        })
        .collect::<Result<Vec<Vec<TbcWalk>>>>()?;
    let mut all: Vec<TbcWalk> = per_root.into_iter().flatten().collect();
    all.sort_by(|a, b| {
        (a.len(), a.ace)
            .cmp(&(b.len(), b.ace))
            .then_with(|| a.walk.cmp(&b.walk))
    });
    Ok(all)
}

struct Grow<'a> {
    g: &'a TannerGraph,
    search: &'a WalkSearch,
    root: usize,
    first: EdgeId,
    var_dist: Vec<usize>,
    chk_dist: Vec<usize>,
    steps: Vec<Step>,
    // multiplicities for the cyclomatic-number bound
    edge_mult: Vec<u32>,
    var_mult: Vec<u32>,
    chk_mult: Vec<u32>,
    distinct_edges: usize,
    distinct_nodes: usize,
    spent: &'a AtomicU64,
}

impl<'a> Grow<'a> {
    fn new(g: &'a TannerGraph, search: &'a WalkSearch, root: usize, first: EdgeId, spent: &'a AtomicU64) -> Self {
        let mut grow = Self {
            g,
            search,
            root,
            first,
            var_dist: vec![usize::MAX; g.n_var()],
            chk_dist: vec![usize::MAX; g.n_chk()],
            steps: Vec::with_capacity(search.max_len),
            edge_mult: Vec::new(),
            var_mult: Vec::new(),
            chk_mult: Vec::new(),
            distinct_edges: 0,
            distinct_nodes: 0,
            spent,
        };
        if search.two_cycle_only {
            grow.edge_mult = vec![0; g.n_edges()];
            grow.var_mult = vec![0; g.n_var()];
            grow.chk_mult = vec![0; g.n_chk()];
        }
        grow.distances();
        grow
    }

    /// BFS distances to the root using only edges with id ≥ `first`.
    fn distances(&mut self) {
        let g = self.g;
        let mut queue = VecDeque::new();
        self.var_dist[self.root] = 0;
        queue.push_back((true, self.root));
        while let Some((is_var, u)) = queue.pop_front() {
            let d = if is_var { self.var_dist[u] } else { self.chk_dist[u] };
            if d >= self.search.max_len {
                continue;
            }
            let adj = if is_var { g.var_edges(u) } else { g.chk_edges(u) };
            for &e in adj {
                if e < self.first {
                    continue;
                }
                let ed = g.edge(e);
                if is_var {
                    if self.chk_dist[ed.chk] == usize::MAX {
                        self.chk_dist[ed.chk] = d + 1;
                        queue.push_back((false, ed.chk));
                    }
                } else if self.var_dist[ed.var] == usize::MAX {
                    self.var_dist[ed.var] = d + 1;
                    queue.push_back((true, ed.var));
                }
            }
        }
    }

    fn tick(&self) -> Result<()> {
        let n = self.spent.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(b) = self.search.budget {
            if n > b {
                return Err(Error::BudgetExceeded(b));
            }
        }
        Ok(())
    }

    fn run(&mut self, out: &mut Vec<TbcWalk>) -> Result<()> {
        self.enter_var(self.root);
        let first = self.first;
        let r = self.step(Step::up(first), 0, out);
        self.leave_var(self.root);
        r
    }

    fn cyclomatic(&self) -> usize {
        (self.distinct_edges + 1).saturating_sub(self.distinct_nodes)
    }

    fn enter_var(&mut self, v: usize) {
        if self.search.two_cycle_only {
            self.var_mult[v] += 1;
            if self.var_mult[v] == 1 {
                self.distinct_nodes += 1;
            }
        }
    }

    fn leave_var(&mut self, v: usize) {
        if self.search.two_cycle_only {
            self.var_mult[v] -= 1;
            if self.var_mult[v] == 0 {
                self.distinct_nodes -= 1;
            }
        }
    }

    fn push(&mut self, s: Step) {
        self.steps.push(s);
        if self.search.two_cycle_only {
            self.edge_mult[s.edge] += 1;
            if self.edge_mult[s.edge] == 1 {
                self.distinct_edges += 1;
            }
            if s.dir == Dir::Up {
                let c = self.g.edge(s.edge).chk;
                self.chk_mult[c] += 1;
                if self.chk_mult[c] == 1 {
                    self.distinct_nodes += 1;
                }
            }
        }
    }

    fn pop(&mut self) {
        let s = self.steps.pop().expect("nonempty");
        if self.search.two_cycle_only {
            self.edge_mult[s.edge] -= 1;
            if self.edge_mult[s.edge] == 0 {
                self.distinct_edges -= 1;
            }
            if s.dir == Dir::Up {
                let c = self.g.edge(s.edge).chk;
                self.chk_mult[c] -= 1;
                if self.chk_mult[c] == 0 {
                    self.distinct_nodes -= 1;
                }
            }
        }
    }

    /// Takes an `Up` step out of the current variable node; `ace` excludes that node.
    fn step(&mut self, up: Step, ace: u64, out: &mut Vec<TbcWalk>) -> Result<()> {
        let g = self.g;
        let v = g.edge(up.edge).var;
        let ace = ace + g.var_degree(v).saturating_sub(2) as u64;
        let len = self.steps.len();
        let c = g.edge(up.edge).chk;
        if self.chk_dist[c] == usize::MAX || len + 1 + self.chk_dist[c] > self.search.max_len {
            return Ok(());
        }
        if let Some(limits) = &self.search.limits {
            let min_close = (len + 2).max(len + 1 + self.chk_dist[c]);
            if !limits.reachable(ace, min_close, self.search.max_len) {
                return Ok(());
            }
        }
        self.tick()?;
        self.push(up);
        if self.search.two_cycle_only && self.cyclomatic() > 2 {
            self.pop();
            return Ok(());
        }
        let r = self.visit_chk(c, ace, out);
        self.pop();
        r
    }

    fn visit_chk(&mut self, c: usize, ace: u64, out: &mut Vec<TbcWalk>) -> Result<()> {
        let g = self.g;
        let len = self.steps.len();
        let arrived = self.steps[len - 1].edge;
        for &e in g.chk_edges(c) {
            if e < self.first || e == arrived {
                continue;
            }
            let v = g.edge(e).var;
            if self.var_dist[v] == usize::MAX || len + 1 + self.var_dist[v] > self.search.max_len {
                continue;
            }
            self.push(Step::down(e));
            self.enter_var(v);
            let ok = !self.search.two_cycle_only || self.cyclomatic() <= 2;
            let r = if ok { self.at_var(v, ace, out) } else { Ok(()) };
            self.leave_var(v);
            self.pop();
            r?;
        }
        Ok(())
    }

    fn at_var(&mut self, v: usize, ace: u64, out: &mut Vec<TbcWalk>) -> Result<()> {
        let len = self.steps.len();
        let last = self.steps[len - 1].edge;
        if v == self.root && last != self.first {
            self.record(ace, out);
        }
        if len == self.search.max_len {
            return Ok(());
        }
        let g = self.g;
        for &e in g.var_edges(v) {
            if e < self.first || e == last {
                continue;
            }
            self.step(Step::up(e), ace, out)?;
        }
        Ok(())
    }

    fn record(&self, ace: u64, out: &mut Vec<TbcWalk>) {
        if let Some(limits) = &self.search.limits {
            if !limits.admits(self.steps.len(), ace) {
                return;
            }
        }
        let walk = Walk::from_steps_unchecked(self.steps.clone());
        if walk.is_canonical() && walk.is_primitive() {
            out.push(TbcWalk { walk, ace });
        }
    }
}
