//! Problematic TBC walks: base walks whose lifted images could be cycles that
//! break a target ACE spectrum for some order dividing N.

use std::collections::BTreeSet;

use serde::Serialize;

use super::spectrum::{Ace, AceSpectrum};
use super::tbc::{enumerate_tbc_walks_with, TbcWalk, WalkRecord, WalkSearch};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, TannerGraph};

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n.is_multiple_of(k) {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Pairs `(k, k·w)` with `k | n`, `k·w ≤ 2·depth` and `k·ace < η_{kw}`.
pub fn violating_pairs(w: usize, ace: u64, target: &AceSpectrum, n: u64) -> Vec<(u64, usize)> {
    if w == 0 {
        return Vec::new();
    }
    divisors(n)
        .into_iter()
        .filter_map(|k| {
            let kw = (k as usize).checked_mul(w)?;
            if kw > target.max_len() {
                return None;
            }
            let lifted = Ace::Finite(k.checked_mul(ace)?);
            (lifted < target.at_len(kw)).then_some((k, kw))
        })
        .collect()
}

/// Per-length ACE ceilings below which a walk is problematic, used to prune the
/// walk search.
#[derive(Debug, Clone)]
pub(crate) struct AceLimits {
    /// `allowed[w/2]`: largest ACE a length-`w` walk may have and still be
    /// problematic (`Inf`: any), `None` when no walk of that length is.
    allowed: Vec<Option<Ace>>,
    /// `suffix[w/2]`: maximum of `allowed` over lengths ≥ w.
    suffix: Vec<Option<Ace>>,
}

impl AceLimits {
    pub(crate) fn new(target: &AceSpectrum, n: u64) -> Self {
        let max_len = target.max_len();
        let mut allowed = vec![None; max_len / 2 + 1];
        for w in (2..=max_len).step_by(2) {
            let mut best: Option<Ace> = None;
            for k in divisors(n) {
                let kw = k as usize * w;
                if kw > max_len {
                    break;
                }
                let cap = match target.at_len(kw) {
                    Ace::Inf => Some(Ace::Inf),
                    Ace::Finite(0) => None,
                    Ace::Finite(eta) => Some(Ace::Finite((eta - 1) / k)),
                };
                best = best.max(cap);
            }
            allowed[w / 2] = best;
        }
        let mut suffix = allowed.clone();
        for i in (0..suffix.len().saturating_sub(1)).rev() {
            suffix[i] = suffix[i].max(suffix[i + 1]);
        }
        Self { allowed, suffix }
    }

    pub(crate) fn admits(&self, len: usize, ace: u64) -> bool {
        matches!(self.allowed.get(len / 2), Some(Some(cap)) if Ace::Finite(ace) <= *cap)
    }

    /// Whether some closure of length in `[min_len, max_len]` could still be
    /// problematic with ACE at least `ace`.
    pub(crate) fn reachable(&self, ace: u64, min_len: usize, max_len: usize) -> bool {
        if min_len > max_len {
            return false;
        }
        let i = min_len.div_ceil(2);
        matches!(self.suffix.get(i), Some(Some(cap)) if Ace::Finite(ace) <= *cap)
    }

    pub(crate) fn max_len(&self) -> usize {
        self.allowed
            .iter()
            .rposition(Option::is_some)
            .map_or(0, |i| 2 * i)
    }
}

/// A problematic walk together with every `(k, k·w)` pair it could violate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblematicWalk {
    pub walk: TbcWalk,
    pub violations: Vec<(u64, usize)>,
}

/// Problematic walks for a fixed (graph, target, N), ordered by length then ACE.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblematicWalkSet {
    lift_degree: u64,
    target: AceSpectrum,
    walks: Vec<ProblematicWalk>,
    n_edges: usize,
}

impl ProblematicWalkSet {
    pub fn lift_degree(&self) -> u64 {
        self.lift_degree
    }

    pub fn target(&self) -> &AceSpectrum {
        &self.target
    }

    pub fn walks(&self) -> &[ProblematicWalk] {
        &self.walks
    }

    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    /// Number of problematic walks each edge belongs to.
    pub fn participation(&self) -> Vec<usize> {
        let mut count = vec![0; self.n_edges];
        for pw in &self.walks {
            for e in pw.walk.walk().distinct_edges() {
                count[e] += 1;
            }
        }
        count
    }

    pub fn records(&self) -> Vec<ProblematicRecord> {
        self.walks
            .iter()
            .map(|pw| ProblematicRecord {
                walk: pw.walk.to_record(),
                violations: pw.violations.clone(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProblematicRecord {
    #[serde(flatten)]
    pub walk: WalkRecord,
    pub violations: Vec<(u64, usize)>,
}

/// Options for [`find_problematic_walks_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ProblematicSearch {
    pub two_cycle_only: bool,
    pub budget: Option<u64>,
}

pub fn find_problematic_walks(g: &TannerGraph, target: &AceSpectrum, n: u64) -> Result<ProblematicWalkSet> {
    find_problematic_walks_with(g, target, n, ProblematicSearch::default())
}

pub fn find_problematic_walks_with(
    g: &TannerGraph,
    target: &AceSpectrum,
    n: u64,
    opts: ProblematicSearch,
) -> Result<ProblematicWalkSet> {
    if n == 0 {
        return Err(Error::Config("lifting degree must be at least 1".into()));
    }
    let limits = AceLimits::new(target, n);
    let max_len = limits.max_len();
    let mut walks = Vec::new();
    if max_len > 0 {
        let search = WalkSearch {
            max_len,
            two_cycle_only: opts.two_cycle_only,
            budget: opts.budget,
            limits: Some(limits),
        };
        for walk in enumerate_tbc_walks_with(g, &search)? {
            let violations = violating_pairs(walk.len(), walk.ace(), target, n);
            debug_assert!(!violations.is_empty());
            if !violations.is_empty() {
                walks.push(ProblematicWalk { walk, violations });
            }
        }
    }
    Ok(ProblematicWalkSet {
        lift_degree: n,
        target: target.clone(),
        walks,
        n_edges: g.n_edges(),
    })
}

/// Edges appearing in any walk of the set.
pub fn touched_edges(set: &ProblematicWalkSet) -> BTreeSet<EdgeId> {
    set.walks
        .iter()
        .flat_map(|pw| pw.walk.walk().distinct_edges())
        .collect()
}
