//! Progressive edge-growth construction of base graphs.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::TannerGraph;
use crate::error::{Error, Result};

/// Builds a simple Tanner graph with the given variable degrees by PEG.
///
/// Variables are connected in order of increasing degree. Each new edge goes
/// to a check node as far as possible from the variable in the current graph
/// (an unreachable one if any), preferring the lowest current check degree.
/// Remaining ties are broken uniformly at random from `seed`.
///
/// Edge ids are variable-major: all edges of variable 0 first, and so on.
pub fn peg_construct(n_var: usize, n_chk: usize, var_degrees: &[usize], seed: u64) -> Result<TannerGraph> {
    if var_degrees.len() != n_var {
        return Err(Error::Infeasible(format!(
            "{} degrees given for {n_var} variable nodes",
            var_degrees.len()
        )));
    }
    if let Some((i, &d)) = var_degrees.iter().enumerate().find(|(_, &d)| d < 2) {
        return Err(Error::Infeasible(format!("variable {i} has degree {d} < 2")));
    }
    if let Some((i, &d)) = var_degrees.iter().enumerate().find(|(_, &d)| d > n_chk) {
        return Err(Error::Infeasible(format!(
            "variable {i} has degree {d} but there are only {n_chk} check nodes"
        )));
    }
    let total: usize = var_degrees.iter().sum();
    if total > n_var * n_chk {
        return Err(Error::Infeasible(format!(
            "{total} edges do not fit in a simple {n_chk}x{n_var} graph"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut var_nbrs: Vec<Vec<usize>> = vec![Vec::new(); n_var];
    let mut chk_nbrs: Vec<Vec<usize>> = vec![Vec::new(); n_chk];

    let mut order: Vec<usize> = (0..n_var).collect();
    order.sort_by_key(|&v| var_degrees[v]);

    for &v in &order {
        for k in 0..var_degrees[v] {
            let candidates = if k == 0 {
                (0..n_chk).collect()
            } else {
                farthest_checks(v, &var_nbrs, &chk_nbrs, n_chk)
            };
            let min_deg = candidates
                .iter()
                .map(|&c| chk_nbrs[c].len())
                .min()
                .expect("a variable of degree < n_chk always has a free check");
            let lightest: Vec<usize> = candidates
                .into_iter()
                .filter(|&c| chk_nbrs[c].len() == min_deg)
                .collect();
            let &c = lightest.choose(&mut rng).expect("nonempty");
            var_nbrs[v].push(c);
            chk_nbrs[c].push(v);
        }
    }

    TannerGraph::new(
        n_var,
        n_chk,
        var_nbrs
            .iter()
            .enumerate()
            .flat_map(|(v, cs)| cs.iter().map(move |&c| (v, c))),
    )
}

/// Checks not adjacent to `v` at maximum distance from it; all unreachable
/// checks when some exist.
fn farthest_checks(v: usize, var_nbrs: &[Vec<usize>], chk_nbrs: &[Vec<usize>], n_chk: usize) -> Vec<usize> {
    let mut chk_reached = vec![false; n_chk];
    let mut var_reached = vec![false; var_nbrs.len()];
    var_reached[v] = true;
    let mut frontier: Vec<usize> = var_nbrs[v].clone();
    for &c in &frontier {
        chk_reached[c] = true;
    }
    let mut reached = frontier.len();
    loop {
        let mut next = Vec::new();
        for &c in &frontier {
            for &u in &chk_nbrs[c] {
                if var_reached[u] {
                    continue;
                }
                var_reached[u] = true;
                for &c2 in &var_nbrs[u] {
                    if !chk_reached[c2] {
                        chk_reached[c2] = true;
                        next.push(c2);
                    }
                }
            }
        }
        if next.is_empty() {
            // the reachable set stopped growing before covering every check
            return (0..n_chk).filter(|&c| !chk_reached[c]).collect();
        }
        if reached + next.len() == n_chk {
            return next;
        }
        reached += next.len();
        frontier = next;
    }
}
