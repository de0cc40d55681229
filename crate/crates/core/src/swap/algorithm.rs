use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::DesignReport;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, TannerGraph};
use crate::lifting::{expand, walk_order, ShiftAssignment};
use crate::walks::{lifted_spectrum, Ace, AceSpectrum, ProblematicWalkSet, TbcWalk};

/// How candidate edges of a walk are ranked before trying shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionPolicy {
    /// Edges in more problematic walks first, ties by edge id.
    #[default]
    Participation,
    /// Plain edge-id order.
    EdgeOrder,
    /// Edges in fewer problematic walks first, ties by edge id.
    LeastParticipation,
    /// Seeded shuffle per walk.
    Random,
}

impl std::str::FromStr for SelectionPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "participation" => Ok(Self::Participation),
            "edge-order" => Ok(Self::EdgeOrder),
            "least-participation" => Ok(Self::LeastParticipation),
            "random" => Ok(Self::Random),
            other => Err(Error::Config(format!("unknown selection policy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Algorithm1Config {
    pub policy: SelectionPolicy,
    /// Largest number of edges swapped together for one walk in the first phase.
    pub max_swap_edges: usize,
    /// Record an unfixable walk and keep going instead of stopping.
    pub continue_on_failure: bool,
    /// Cap on search steps when recomputing the lifted spectrum.
    pub spectrum_budget: Option<u64>,
}

impl Default for Algorithm1Config {
    fn default() -> Self {
        Self {
            policy: SelectionPolicy::Participation,
            max_swap_edges: 2,
            continue_on_failure: false,
            spectrum_budget: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Candidates are the walk's edges not in any processed walk.
    One,
    /// Candidates are the walk's edges that were never swapped.
    Two,
}

/// Bookkeeping of one run: processed and swapped edges, current shifts, and
/// which processed walks use each edge.
#[derive(Debug, Clone)]
pub struct SwapState {
    processed: Vec<bool>,
    swapped: Vec<bool>,
    assignment: ShiftAssignment,
    processed_walks: Vec<usize>,
    walks_by_edge: Vec<Vec<usize>>,
}

impl SwapState {
    pub fn new(n_edges: usize, lift_degree: u64) -> Result<Self> {
        Ok(Self {
            processed: vec![false; n_edges],
            swapped: vec![false; n_edges],
            assignment: ShiftAssignment::zeros(lift_degree, n_edges)?,
            processed_walks: Vec::new(),
            walks_by_edge: vec![Vec::new(); n_edges],
        })
    }

    pub fn processed_set(&self) -> Vec<EdgeId> {
        flagged(&self.processed)
    }

    pub fn swapped_set(&self) -> Vec<EdgeId> {
        flagged(&self.swapped)
    }

    /// Shifts of the swapped edges.
    pub fn shift_set(&self) -> BTreeMap<EdgeId, u64> {
        self.swapped_set()
            .into_iter()
            .map(|e| (e, self.assignment.shift(e)))
            .collect()
    }

    pub fn assignment(&self) -> &ShiftAssignment {
        &self.assignment
    }

    /// Indices (into the walk set) of processed walks, in processing order.
    pub fn processed_walks(&self) -> &[usize] {
        &self.processed_walks
    }

    pub fn is_processed(&self, e: EdgeId) -> bool {
        self.processed[e]
    }

    pub fn is_swapped(&self, e: EdgeId) -> bool {
        self.swapped[e]
    }

    fn mark_processed(&mut self, index: usize, walk: &TbcWalk) {
        for e in walk.walk().distinct_edges() {
            self.processed[e] = true;
            self.walks_by_edge[e].push(index);
        }
        self.processed_walks.push(index);
    }
}

fn flagged(v: &[bool]) -> Vec<EdgeId> {
    v.iter().enumerate().filter(|(_, &f)| f).map(|(e, _)| e).collect()
}

/// Candidate edges of `walk` for the given phase, best first.
pub fn select_edges(
    walk: &TbcWalk,
    state: &SwapState,
    participation: &[usize],
    policy: SelectionPolicy,
    phase: Phase,
) -> Vec<EdgeId> {
    let mut cands: Vec<EdgeId> = walk
        .walk()
        .distinct_edges()
        .into_iter()
        .filter(|&e| match phase {
            Phase::One => !state.processed[e],
            Phase::Two => !state.swapped[e],
        })
        .collect();
    match policy {
        SelectionPolicy::Participation => {
            cands.sort_by_key(|&e| (std::cmp::Reverse(participation.get(e).copied().unwrap_or(0)), e))
        }
        SelectionPolicy::LeastParticipation => cands.sort_by_key(|&e| (participation.get(e).copied().unwrap_or(0), e)),
        SelectionPolicy::EdgeOrder | SelectionPolicy::Random => cands.sort_unstable(),
    }
    cands
}

/// Whether a walk of length `w` and ACE `ace` with shift `d` in `Z_n` has a
/// lifted image compatible with `target`: `w·O > 2d_max` or `O·ace ≥ η_{w·O}`.
pub fn walk_condition_holds(w: usize, ace: u64, d: u64, n: u64, target: &AceSpectrum) -> bool {
    let order = walk_order(d, n);
    let Some(len) = (w as u64).checked_mul(order) else {
        return true;
    };
    if len > target.max_len() as u64 {
        return true;
    }
    match order.checked_mul(ace) {
        Some(a) => Ace::Finite(a) >= target.at_len(len as usize),
        None => true,
    }
}

/// A walk reduced to what the shift search needs.
struct Compiled {
    len: usize,
    ace: u64,
    coeffs: Vec<(EdgeId, i64)>,
}

impl Compiled {
    fn new(w: &TbcWalk) -> Self {
        Self {
            len: w.len(),
            ace: w.ace(),
            coeffs: w.walk().edge_coefficients(),
        }
    }

    fn shift(&self, shifts: &[u64], n: u64) -> u64 {
        let n = n as i128;
        let acc: i128 = self
            .coeffs
            .iter()
            .map(|&(e, c)| c as i128 * shifts[e] as i128)
            .sum();
        acc.rem_euclid(n) as u64
    }

    fn coeff(&self, e: EdgeId) -> i64 {
        self.coeffs.iter().find(|&&(x, _)| x == e).map_or(0, |&(_, c)| c)
    }

    fn holds(&self, shifts: &[u64], n: u64, target: &AceSpectrum) -> bool {
        walk_condition_holds(self.len, self.ace, self.shift(shifts, n), n, target)
    }
}

/// Runs the edge-swapping algorithm over `walks` in order.
///
/// A walk whose lifted image already meets the target is marked processed
/// without swapping. Otherwise the first phase tries one, then two (up to
/// `max_swap_edges`) unprocessed edges with nonzero shifts drawn in a seeded
/// random order. Only when every edge of the walk is already processed does
/// the second phase try a single never-swapped edge, re-checking each
/// processed walk through that edge. Edges never swapped keep shift 0.
pub fn algorithm1(
    g: &TannerGraph,
    target: &AceSpectrum,
    n: u64,
    walks: &ProblematicWalkSet,
    config: &Algorithm1Config,
    seed: u64,
) -> Result<DesignReport> {
    if n == 0 {
        return Err(Error::Config("lifting degree must be at least 1".into()));
    }
    if target.at_len(2) != Ace::Inf {
        return Err(Error::Spectrum("the length-2 target component must be inf".into()));
    }
    if walks.lift_degree() != n || walks.target() != target || walks.n_edges() != g.n_edges() {
        return Err(Error::Inconsistent(
            "problematic walks were computed for a different graph, target or lifting degree".into(),
        ));
    }
    let mut state = SwapState::new(g.n_edges(), n)?;
    let participation = walks.participation();
    let compiled: Vec<Compiled> = walks.walks().iter().map(|p| Compiled::new(&p.walk)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unsatisfiable = Vec::new();
    let mut phase2_swaps = 0;
    let cap = config.max_swap_edges.max(1);

    for (idx, pw) in walks.walks().iter().enumerate() {
        let cw = &compiled[idx];
        let mut shifts = state.assignment.shifts().to_vec();
        if cw.holds(&shifts, n, target) {
            state.mark_processed(idx, &pw.walk);
            continue;
        }
        let mut values: Vec<u64> = (1..n).collect();
        values.shuffle(&mut rng);

        let mut cands = select_edges(&pw.walk, &state, &participation, config.policy, Phase::One);
        if config.policy == SelectionPolicy::Random {
            cands.shuffle(&mut rng);
        }
        let fixed = if !cands.is_empty() {
            phase_one(cw, &cands, &values, cap, &mut shifts, n, target)
        } else {
            let mut cands = select_edges(&pw.walk, &state, &participation, config.policy, Phase::Two);
            if config.policy == SelectionPolicy::Random {
                cands.shuffle(&mut rng);
            }
            let others = |e: EdgeId| state.walks_by_edge[e].iter().map(|&i| &compiled[i]).collect::<Vec<_>>();
            let mut hit = None;
            'edges: for e in cands {
                let affected = others(e);
                for &d in &values {
                    shifts[e] = d;
                    if cw.holds(&shifts, n, target) && affected.iter().all(|w| w.holds(&shifts, n, target)) {
                        hit = Some(e);
                        break 'edges;
                    }
                }
                shifts[e] = state.assignment.shift(e);
            }
            if hit.is_some() {
                phase2_swaps += 1;
            }
            hit.map(|e| vec![e])
        };

        match fixed {
            Some(edges) => {
                for e in edges {
                    state.assignment.set(e, shifts[e])?;
                    state.swapped[e] = true;
                }
                state.mark_processed(idx, &pw.walk);
            }
            None => {
                unsatisfiable.push(pw.walk.to_record());
                if !config.continue_on_failure {
                    break;
                }
            }
        }
    }

    let code = expand(g, &state.assignment)?;
    let achieved = lifted_spectrum(&code, target.depth(), config.spectrum_budget)?;
    Ok(DesignReport {
        success: unsatisfiable.is_empty(),
        lift_degree: n,
        d_max: target.depth(),
        target: target.clone(),
        achieved,
        shifts: state.assignment.to_file(g),
        swapped_edges: state.swapped_set(),
        problematic_walks: walks.len(),
        phase2_swaps,
        unsatisfiable,
        seed,
        policy: config.policy,
        history: Vec::new(),
    })
}

/// Smallest edge subset (by size, then candidate order) with nonzero shifts
/// fixing the walk. Writes the chosen shifts into `shifts`.
fn phase_one(
    cw: &Compiled,
    cands: &[EdgeId],
    values: &[u64],
    cap: usize,
    shifts: &mut [u64],
    n: u64,
    target: &AceSpectrum,
) -> Option<Vec<EdgeId>> {
    if values.is_empty() {
        return None;
    }
    // contribution of everything except the chosen edges, which are reset to 0
    for size in 1..=cap.min(cands.len()) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let edges: Vec<EdgeId> = combo.iter().map(|&i| cands[i]).collect();
            let saved: Vec<u64> = edges.iter().map(|&e| shifts[e]).collect();
            for &e in &edges {
                shifts[e] = 0;
            }
            let base = cw.shift(shifts, n) as i128;
            let coeffs: Vec<i128> = edges.iter().map(|&e| cw.coeff(e) as i128).collect();
            if let Some(picks) = search_values(cw, base, &coeffs, values, n, target) {
                for (&e, d) in edges.iter().zip(picks) {
                    shifts[e] = d;
                }
                return Some(edges);
            }
            for (&e, s) in edges.iter().zip(saved) {
                shifts[e] = s;
            }
            if !next_combination(&mut combo, cands.len()) {
                break;
            }
        }
    }
    None
}

/// Odometer over `values^k`, first tuple meeting the walk condition.
fn search_values(
    cw: &Compiled,
    base: i128,
    coeffs: &[i128],
    values: &[u64],
    n: u64,
    target: &AceSpectrum,
) -> Option<Vec<u64>> {
    let k = coeffs.len();
    let mut idx = vec![0usize; k];
    loop {
        let acc: i128 = base
            + coeffs
                .iter()
                .zip(&idx)
                .map(|(&c, &i)| c * values[i] as i128)
                .sum::<i128>();
        let d = acc.rem_euclid(n as i128) as u64;
        if walk_condition_holds(cw.len, cw.ace, d, n, target) {
            return Some(idx.iter().map(|&i| values[i]).collect());
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < values.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
