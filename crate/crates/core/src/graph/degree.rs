use serde::{Deserialize, Serialize};

use super::TannerGraph;
use crate::error::{Error, Result};

/// Edge-perspective degree distribution.
///
/// `lambda[i]` is the fraction of edges attached to variable nodes of degree
/// `i + 2`; `rho` likewise for check nodes. Edge counts are stored divided by
/// their common gcd, so two graphs with the same fractions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    var_edges_by_degree: Vec<u64>,
    chk_edges_by_degree: Vec<u64>,
    total_edges: u64,
}

impl DegreeDistribution {
    pub fn lambda(&self) -> Vec<f64> {
        self.fractions(&self.var_edges_by_degree)
    }

    pub fn rho(&self) -> Vec<f64> {
        self.fractions(&self.chk_edges_by_degree)
    }

    /// Fraction of edges on variable nodes of degree `d`, as an exact ratio
    /// `(numerator, denominator)` in lowest terms.
    pub fn lambda_ratio(&self, d: usize) -> (u64, u64) {
        ratio(self.var_edges_by_degree.get(d.wrapping_sub(2)).copied().unwrap_or(0), self.total_edges)
    }

    pub fn rho_ratio(&self, d: usize) -> (u64, u64) {
        ratio(self.chk_edges_by_degree.get(d.wrapping_sub(2)).copied().unwrap_or(0), self.total_edges)
    }

    pub fn max_var_degree(&self) -> usize {
        self.var_edges_by_degree.len() + 1
    }

    pub fn max_chk_degree(&self) -> usize {
        self.chk_edges_by_degree.len() + 1
    }

    fn fractions(&self, counts: &[u64]) -> Vec<f64> {
        counts
            .iter()
            .map(|&c| c as f64 / self.total_edges as f64)
            .collect()
    }
}

fn ratio(num: u64, den: u64) -> (u64, u64) {
    let g = num_integer::gcd(num, den).max(1);
    (num / g, den / g)
}

/// Edge-perspective degree distribution of `g`. Nodes of degree below 2 are rejected.
pub fn degree_distribution(g: &TannerGraph) -> Result<DegreeDistribution> {
    if g.n_edges() == 0 {
        return Err(Error::Degree("graph has no edges".into()));
    }
    let tally = |degrees: Vec<usize>, side: &str| -> Result<Vec<u64>> {
        let max = degrees.iter().copied().max().unwrap_or(2);
        let mut counts = vec![0u64; max.max(2) - 1];
        for (i, d) in degrees.into_iter().enumerate() {
            if d < 2 {
                return Err(Error::Degree(format!("{side} node {i} has degree {d}")));
            }
            counts[d - 2] += d as u64;
        }
        Ok(counts)
    };
    let var = tally((0..g.n_var()).map(|v| g.var_degree(v)).collect(), "variable")?;
    let chk = tally((0..g.n_chk()).map(|c| g.chk_degree(c)).collect(), "check")?;
    let total = g.n_edges() as u64;
    let common = var.iter().chain(&chk).fold(total, |acc, &c| num_integer::gcd(acc, c));
    Ok(DegreeDistribution {
        var_edges_by_degree: var.into_iter().map(|c| c / common).collect(),
        chk_edges_by_degree: chk.into_iter().map(|c| c / common).collect(),
        total_edges: total / common,
    })
}
