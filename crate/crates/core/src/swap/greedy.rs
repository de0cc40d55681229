use rayon::prelude::*;

use super::algorithm::{algorithm1, Algorithm1Config, SelectionPolicy};
use super::{DesignReport, ProbeRecord};
use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::lifting::{expand, ShiftAssignment};
use crate::seed;
use crate::walks::{find_problematic_walks_with, lifted_spectrum, Ace, AceSpectrum, ProblematicSearch};

#[derive(Debug, Clone)]
pub struct GreedyConfig {
    pub lift_degree: u64,
    pub d_max: usize,
    /// Seeded runs of the swapping algorithm per probed target.
    pub attempts: u32,
    pub seed: u64,
    /// Settings for each swap run; its `policy` is overridden per attempt.
    pub algorithm: Algorithm1Config,
    /// Attempt `i` uses `policies[i % len]`.
    pub policies: Vec<SelectionPolicy>,
    pub walks: ProblematicSearch,
}

impl GreedyConfig {
    pub fn new(lift_degree: u64, d_max: usize, attempts: u32, seed: u64) -> Self {
        Self {
            lift_degree,
            d_max,
            attempts,
            seed,
            algorithm: Algorithm1Config::default(),
            policies: vec![SelectionPolicy::Participation, SelectionPolicy::LeastParticipation],
            walks: ProblematicSearch::default(),
        }
    }
}

/// Raises the target one component at a time, from length 4 upwards.
///
/// Each component first tries `inf`; failing that, it binary-searches the
/// largest finite value reachable within the attempt budget, starting from
/// what the current design already has. The component is then frozen. If even
/// the length-2 target cannot be met, the zero-shift lift is returned with
/// `success = false`.
pub fn greedy_optimize(g: &TannerGraph, cfg: &GreedyConfig) -> Result<DesignReport> {
    if cfg.d_max < 2 {
        return Err(Error::Config("depth must be at least 2".into()));
    }
    if cfg.lift_degree == 0 {
        return Err(Error::Config("lifting degree must be at least 1".into()));
    }
    if cfg.policies.is_empty() {
        return Err(Error::Config("no selection policy given".into()));
    }
    if cfg.attempts == 0 {
        return Err(Error::Config("at least one attempt per target is needed".into()));
    }
    let mut history = Vec::new();
    let mut target = AceSpectrum::uniform(cfg.d_max, Ace::Finite(0));
    target.set_len(2, Ace::Inf);

    let Some(mut design) = probe(g, cfg, &target, &mut history)? else {
        let mut report = baseline(g, cfg)?;
        report.history = history;
        return Ok(report);
    };

    let ace_cap = g.max_var_degree().saturating_sub(2) as u64;
    for len in (4..=2 * cfg.d_max).step_by(2) {
        let have = design.achieved.at_len(len);
        if have.is_inf() {
            target.set_len(len, Ace::Inf);
            continue;
        }
        let mut trial = target.clone();
        trial.set_len(len, Ace::Inf);
        if let Some(r) = probe(g, cfg, &trial, &mut history)? {
            design = r;
            target = trial;
            continue;
        }
        let mut lo = have.finite().expect("finite");
        let mut hi = (len as u64 / 2) * ace_cap;
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            trial.set_len(len, Ace::Finite(mid));
            match probe(g, cfg, &trial, &mut history)? {
                Some(r) => {
                    let got = r.achieved.at_len(len);
                    design = r;
                    match got {
                        Ace::Inf => {
                            lo = u64::MAX;
                            break;
                        }
                        Ace::Finite(v) => lo = v.max(mid),
                    }
                }
                None => hi = mid - 1,
            }
        }
        let frozen = if lo == u64::MAX { Ace::Inf } else { Ace::Finite(lo) };
        target.set_len(len, frozen);
    }

    design.target = target;
    design.seed = cfg.seed;
    design.history = history;
    Ok(design)
}

/// Best (lowest attempt index) verified design meeting `target`, if any.
fn probe(g: &TannerGraph, cfg: &GreedyConfig, target: &AceSpectrum, history: &mut Vec<ProbeRecord>) -> Result<Option<DesignReport>> {
    let len = last_raised(target);
    let walks = match find_problematic_walks_with(g, target, cfg.lift_degree, cfg.walks) {
        Ok(w) => w,
        Err(Error::BudgetExceeded(_)) => {
            history.push(ProbeRecord {
                length: len,
                target: target.at_len(len),
                feasible: false,
                attempt: None,
            });
            return Ok(None);
        }
        Err(e) => return Err(e),
    };
    let key = match target.at_len(len) {
        Ace::Inf => u64::MAX,
        Ace::Finite(v) => v,
    };
    let found = (0..cfg.attempts)
        .into_par_iter()
        .find_map_first(|attempt| {
            let s = seed::derive(cfg.seed, &[len as u64, key, attempt as u64]);
            let run = Algorithm1Config {
                policy: cfg.policies[attempt as usize % cfg.policies.len()],
                ..cfg.algorithm.clone()
            };
            match algorithm1(g, target, cfg.lift_degree, &walks, &run, s) {
                Ok(r) if r.success => {
                    if r.achieved.dominates(target) {
                        Some(Ok((attempt, r)))
                    } else {
                        Some(Err(Error::Inconsistent(format!(
                            "swap run reported success but the lift has spectrum {} below target {}",
                            r.achieved, target
                        ))))
                    }
                }
                Ok(_) => None,
                Err(Error::BudgetExceeded(_)) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .transpose()?;
    history.push(ProbeRecord {
        length: len,
        target: target.at_len(len),
        feasible: found.is_some(),
        attempt: found.as_ref().map(|(a, _)| *a),
    });
    Ok(found.map(|(_, r)| r))
}

/// Largest length whose target is nonzero.
fn last_raised(target: &AceSpectrum) -> usize {
    (1..=target.depth())
        .rev()
        .map(|i| 2 * i)
        .find(|&l| target.at_len(l) != Ace::Finite(0))
        .unwrap_or(2)
}

fn baseline(g: &TannerGraph, cfg: &GreedyConfig) -> Result<DesignReport> {
    let a = ShiftAssignment::zeros(cfg.lift_degree, g.n_edges())?;
    let code = expand(g, &a)?;
    let achieved = lifted_spectrum(&code, cfg.d_max, cfg.algorithm.spectrum_budget)?;
    Ok(DesignReport {
        success: false,
        lift_degree: cfg.lift_degree,
        d_max: cfg.d_max,
        target: AceSpectrum::uniform(cfg.d_max, Ace::Finite(0)),
        achieved,
        shifts: a.to_file(g),
        swapped_edges: Vec::new(),
        problematic_walks: 0,
        phase2_swaps: 0,
        unsatisfiable: Vec::new(),
        seed: cfg.seed,
        policy: cfg.policies[0],
        history: Vec::new(),
    })
}
