//! ACE-constrained cyclic edge swapping and the greedy spectrum optimizer.
//!
//! [`algorithm1`] walks the ordered problematic walks once and assigns nonzero
//! shifts to a few edges of each so the walk's lifted image meets the target.
//! [`greedy_optimize`] raises the target one spectrum component at a time.
//! Every reported spectrum is recomputed from the expanded graph.

mod algorithm;
mod greedy;
mod verify;

pub use algorithm::{algorithm1, select_edges, walk_condition_holds, Algorithm1Config, Phase, SelectionPolicy, SwapState};
pub use greedy::{greedy_optimize, GreedyConfig};
pub use verify::{verify_target, Verification};

use serde::{Deserialize, Serialize};

use crate::graph::EdgeId;
use crate::lifting::ShiftFile;
use crate::walks::{AceSpectrum, WalkRecord};

/// Outcome of a design run. Contains no timing so reruns are byte-identical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignReport {
    pub success: bool,
    #[serde(rename = "N")]
    pub lift_degree: u64,
    pub d_max: usize,
    pub target: AceSpectrum,
    /// Spectrum of the expanded graph, computed independently of the walk set.
    pub achieved: AceSpectrum,
    pub shifts: ShiftFile,
    pub swapped_edges: Vec<EdgeId>,
    pub problematic_walks: usize,
    pub phase2_swaps: usize,
    pub unsatisfiable: Vec<WalkRecord>,
    pub seed: u64,
    pub policy: SelectionPolicy,
    /// Per-component log of the greedy search; empty for a single run.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<ProbeRecord>,
}

/// One target probed by the greedy optimizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub length: usize,
    pub target: crate::walks::Ace,
    pub feasible: bool,
    /// Attempt index that succeeded, if any.
    pub attempt: Option<u32>,
}
