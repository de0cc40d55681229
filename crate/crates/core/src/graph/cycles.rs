//! Girth, exhaustive cycle enumeration and pruned low-ACE cycle searches.
//!
//! `enumerate_cycles` is the plain oracle: every cycle up to a length bound,
//! each reported once in canonical form. `LowAceSearch` answers the two
//! questions the design loop actually asks (minimum ACE per cycle length, and
//! "is there a cycle of length 2i with ACE below t") with branch-and-bound
//! pruning on partial ACE and distance back to the root.

use std::collections::VecDeque;

use rayon::prelude::*;

use super::walk::{Step, Walk};
use super::{EdgeId, TannerGraph};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ENUM_LEN: usize = 12;
pub const MAX_ENUM_LEN_ENV: &str = "QCFORGE_MAX_ENUM_LEN";

/// Cycle-enumeration safety bound; `QCFORGE_MAX_ENUM_LEN` overrides the default of 12.
pub fn max_enum_len() -> usize {
    std::env::var(MAX_ENUM_LEN_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ENUM_LEN)
}

pub fn check_len_bound(requested: usize, bound: usize) -> Result<()> {
    if requested > bound {
        return Err(Error::BoundExceeded { requested, bound });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

/// A cycle in canonical form together with its ACE.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    walk: Walk,
    ace: u64,
}

impl Cycle {
    pub(crate) fn from_steps(g: &TannerGraph, steps: Vec<Step>) -> Self {
        let walk = Walk::from_steps_unchecked(steps).canonical();
        let ace = walk.ace(g);
        Self { walk, ace }
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
}

/// Length of the shortest cycle. Parallel edges give girth 2.
pub fn girth(g: &TannerGraph) -> Girth {
    let n = g.n_var() + g.n_chk();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let node_of = |g: &TannerGraph, e: EdgeId, from: usize| -> usize {
        let ed = g.edge(e);
        if from < g.n_var() {
            g.n_var() + ed.chk
        } else {
            ed.var
        }
    };
    for root in 0..g.n_var() {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            let adj = if u < g.n_var() {
                g.var_edges(u)
            } else {
                g.chk_edges(u - g.n_var())
            };
            for &e in adj {
                if e == parent[u] {
                    continue;
                }
                let w = node_of(g, e, u);
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = e;
                    queue.push_back(w);
                } else {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// All cycles of length ≤ `max_len`, each once, sorted by (length, canonical form).
///
/// Fails when `max_len` exceeds [`max_enum_len`].
pub fn enumerate_cycles(g: &TannerGraph, max_len: usize) -> Result<Vec<Cycle>> {
    enumerate_cycles_bounded(g, max_len, max_enum_len())
}

pub fn enumerate_cycles_bounded(g: &TannerGraph, max_len: usize, bound: usize) -> Result<Vec<Cycle>> {
    check_len_bound(max_len, bound)?;
    let mut all: Vec<Cycle> = (0..g.n_var())
        .into_par_iter()
        .map(|root| {
            let mut dfs = Dfs::new(g, max_len, root, RootRule::MinVar, None);
            let mut found = Vec::new();
            dfs.run(&mut |steps: &[Step], _| {
                // each cycle is met twice from its minimum variable node; keep one direction
                if steps[0].edge < steps[steps.len() - 1].edge {
                    found.push(Cycle::from_steps(g, steps.to_vec()));
                }
                Visit::Continue
            })
            .map(|_| found)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.walk.cmp(&b.walk)));
    Ok(all)
}

/// Which root variables a search starts from.
#[derive(Debug, Clone)]
pub enum RootSet {
    /// Every variable node, each cycle explored only from its smallest variable.
    MinRoot,
    /// Only these variables; every variable may be visited. Complete whenever
    /// every cycle is mapped by a graph automorphism onto one through a root
    /// (as for copy 0 of each base node in a cyclic lift).
    Roots(Vec<usize>),
}

/// Optional cap on DFS node expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleBudget(pub u64);

/// Pruned search for low-ACE cycles.
#[derive(Debug, Clone)]
pub struct LowAceSearch<'g> {
    g: &'g TannerGraph,
    max_len: usize,
    roots: RootSet,
    budget: Option<CycleBudget>,
}

impl<'g> LowAceSearch<'g> {
    pub fn new(g: &'g TannerGraph, max_len: usize) -> Self {
        Self {
            g,
            max_len,
            roots: RootSet::MinRoot,
            budget: None,
        }
    }

    pub fn roots(mut self, roots: RootSet) -> Self {
        self.roots = roots;
        self
    }

    pub fn budget(mut self, budget: Option<CycleBudget>) -> Self {
        self.budget = budget;
        self
    }

    fn root_list(&self) -> (Vec<usize>, RootRule) {
        match &self.roots {
            RootSet::MinRoot => ((0..self.g.n_var()).collect(), RootRule::MinVar),
            RootSet::Roots(r) => (r.clone(), RootRule::Any),
        }
    }

    /// Minimum ACE over cycles of each length 2, 4, .., `max_len`; `None` where
    /// no cycle of that length exists.
    pub fn min_ace(&self) -> Result<Vec<Option<u64>>> {
        let slots = self.max_len / 2;
        let mut bounds = vec![u64::MAX; slots];
        let (roots, rule) = self.root_list();
        let mut spent = 0u64;
        for root in roots {
            let mut dfs = Dfs::new(self.g, self.max_len, root, rule, self.remaining(spent));
            dfs.bounds = Some(bounds.clone());
            dfs.run(&mut |_, _| Visit::Tighten)?;
            spent += dfs.expanded;
            bounds = dfs.bounds.take().expect("bounds kept");
        }
        Ok(bounds
            .into_iter()
            .map(|b| if b == u64::MAX { None } else { Some(b) })
            .collect())
    }

    /// Cycles of length `2(i+1)` with ACE strictly below `bounds[i]` (`None` = +∞).
    /// Stops after `limit` cycles.
    pub fn violations(&self, bounds: &[Option<u64>], limit: usize) -> Result<Vec<Cycle>> {
        let slots = self.max_len / 2;
        let mut b: Vec<u64> = bounds.iter().map(|x| x.unwrap_or(u64::MAX)).collect();
        b.resize(slots, 0);
        let (roots, rule) = self.root_list();
        let mut found = Vec::new();
        let mut spent = 0u64;
        for root in roots {
            let mut dfs = Dfs::new(self.g, self.max_len, root, rule, self.remaining(spent));
            dfs.bounds = Some(b.clone());
            dfs.fixed_bounds = true;
            dfs.run(&mut |steps: &[Step], _| {
                found.push(Cycle::from_steps(self.g, steps.to_vec()));
                if found.len() >= limit {
                    Visit::Stop
                } else {
                    Visit::Continue
                }
            })?;
            spent += dfs.expanded;
            if found.len() >= limit {
                break;
            }
        }
        found.sort();
        found.dedup();
        Ok(found)
    }

    fn remaining(&self, spent: u64) -> Option<u64> {
        self.budget.map(|CycleBudget(b)| b.saturating_sub(spent))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RootRule {
    MinVar,
    Any,
}

enum Visit {
    Continue,
    /// Lower the bound of this length to the found ACE (minimum search).
    Tighten,
    Stop,
}

/// Depth-first growth of simple paths from `root`, reporting closures back to it.
struct Dfs<'g> {
    g: &'g TannerGraph,
    max_len: usize,
    root: usize,
    rule: RootRule,
    var_seen: Vec<bool>,
    chk_seen: Vec<bool>,
    var_dist: Vec<usize>,
    chk_dist: Vec<usize>,
    steps: Vec<Step>,
    /// Per-length ACE bounds; a closure is reported only if its ACE is below.
    bounds: Option<Vec<u64>>,
    fixed_bounds: bool,
    suffix_max: Vec<u64>,
    budget: Option<u64>,
    expanded: u64,
    stopped: bool,
}

impl<'g> Dfs<'g> {
    fn new(g: &'g TannerGraph, max_len: usize, root: usize, rule: RootRule, budget: Option<u64>) -> Self {
        let mut dfs = Self {
            g,
            max_len,
            root,
            rule,
            var_seen: vec![false; g.n_var()],
            chk_seen: vec![false; g.n_chk()],
            var_dist: vec![usize::MAX; g.n_var()],
            chk_dist: vec![usize::MAX; g.n_chk()],
            steps: Vec::with_capacity(max_len),
            bounds: None,
            fixed_bounds: false,
            suffix_max: Vec::new(),
            budget,
            expanded: 0,
            stopped: false,
        };
        dfs.distances();
        dfs
    }

    fn allowed_var(&self, v: usize) -> bool {
        match self.rule {
            RootRule::MinVar => v >= self.root,
            RootRule::Any => true,
        }
    }

    /// BFS distances to the root over the nodes the search may use.
    fn distances(&mut self) {
        let g = self.g;
        let mut queue = VecDeque::new();
        self.var_dist[self.root] = 0;
        queue.push_back((true, self.root));
        let limit = self.max_len;
        while let Some((is_var, u)) = queue.pop_front() {
            let d = if is_var { self.var_dist[u] } else { self.chk_dist[u] };
            if d >= limit {
                continue;
            }
            if is_var {
                for &e in g.var_edges(u) {
                    let c = g.edge(e).chk;
                    if self.chk_dist[c] == usize::MAX {
                        self.chk_dist[c] = d + 1;
                        queue.push_back((false, c));
                    }
                }
            } else {
                for &e in g.chk_edges(u) {
                    let v = g.edge(e).var;
                    if self.allowed_var(v) && self.var_dist[v] == usize::MAX {
                        self.var_dist[v] = d + 1;
                        queue.push_back((true, v));
                    }
                }
            }
        }
    }

    fn refresh_suffix(&mut self) {
        if let Some(b) = &self.bounds {
            let mut s = vec![0u64; b.len() + 1];
            for i in (0..b.len()).rev() {
                s[i] = s[i + 1].max(b[i]);
            }
            self.suffix_max = s;
        }
    }

    /// Can a cycle closing at length ≥ `min_close` with ACE ≥ `ace` still beat a bound?
    fn promising(&self, ace: u64, min_close: usize) -> bool {
        if self.bounds.is_none() {
            return true;
        }
        let slot = min_close.max(2).div_ceil(2) - 1;
        slot < self.suffix_max.len() - 1 && ace < self.suffix_max[slot]
    }

    fn run(&mut self, report: &mut dyn FnMut(&[Step], u64) -> Visit) -> Result<()> {
        self.refresh_suffix();
        let ace = self.g.var_degree(self.root).saturating_sub(2) as u64;
        self.var_seen[self.root] = true;
        let r = self.visit_var(self.root, ace, report);
        self.var_seen[self.root] = false;
        r
    }

    fn tick(&mut self) -> Result<()> {
        self.expanded += 1;
        if let Some(b) = self.budget {
            if self.expanded > b {
                return Err(Error::BudgetExceeded(b));
            }
        }
        Ok(())
    }

    fn visit_var(&mut self, v: usize, ace: u64, report: &mut dyn FnMut(&[Step], u64) -> Visit) -> Result<()> {
        self.tick()?;
        let g = self.g;
        let len = self.steps.len();
        for &e in g.var_edges(v) {
            if self.stopped {
                break;
            }
            let c = g.edge(e).chk;
            if self.chk_seen[c] || self.chk_dist[c] == usize::MAX {
                continue;
            }
            if len + 1 + self.chk_dist[c] > self.max_len {
                continue;
            }
            if !self.promising(ace, len + 1 + self.chk_dist[c]) {
                continue;
            }
            self.chk_seen[c] = true;
            self.steps.push(Step::up(e));
            let r = self.visit_chk(c, ace, report);
            self.steps.pop();
            self.chk_seen[c] = false;
            r?;
        }
        Ok(())
    }

    fn visit_chk(&mut self, c: usize, ace: u64, report: &mut dyn FnMut(&[Step], u64) -> Visit) -> Result<()> {
        self.tick()?;
        let g = self.g;
        let len = self.steps.len();
        let arrived = self.steps[len - 1].edge;
        for &e in g.chk_edges(c) {
            if self.stopped {
                break;
            }
            if e == arrived {
                continue;
            }
            let v = g.edge(e).var;
            if v == self.root {
                let total = len + 1;
                let slot = total / 2 - 1;
                let hit = match &self.bounds {
                    None => true,
                    Some(b) => ace < b[slot],
                };
                if hit {
                    self.steps.push(Step::down(e));
                    let verdict = report(&self.steps, ace);
                    self.steps.pop();
                    match verdict {
                        Visit::Continue => {}
                        Visit::Tighten => {
                            if let Some(b) = &mut self.bounds {
                                if !self.fixed_bounds {
                                    b[slot] = ace;
                                }
                            }
                            self.refresh_suffix();
                        }
                        Visit::Stop => self.stopped = true,
                    }
                }
                continue;
            }
            if self.var_seen[v] || !self.allowed_var(v) || self.var_dist[v] == usize::MAX {
                continue;
            }
            if len + 1 + self.var_dist[v] > self.max_len {
                continue;
            }
            let next_ace = ace + g.var_degree(v).saturating_sub(2) as u64;
            if !self.promising(next_ace, len + 1 + self.var_dist[v]) {
                continue;
            }
            self.var_seen[v] = true;
            self.steps.push(Step::down(e));
            let r = self.visit_var(v, next_ace, report);
            self.steps.pop();
            self.var_seen[v] = false;
            r?;
        }
        Ok(())
    }
}
