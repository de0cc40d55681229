use crate::error::Result;
use crate::graph::{check_len_bound, max_enum_len, Cycle, CycleBudget, LowAceSearch, RootSet};
use crate::lifting::LiftedCode;
use crate::walks::AceSpectrum;

/// Result of checking a lifted code against a target spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub pass: bool,
    /// Cycles of the expanded graph below the target (empty on pass).
    pub counterexamples: Vec<Cycle>,
}

/// Cap on the counterexamples collected before stopping.
const MAX_COUNTEREXAMPLES: usize = 8;

/// Checks every cycle of length ≤ 2·depth in the expanded graph against `target`.
pub fn verify_target(code: &LiftedCode, target: &AceSpectrum, budget: Option<u64>) -> Result<Verification> {
    check_len_bound(target.max_len(), max_enum_len())?;
    let counterexamples = LowAceSearch::new(code.expanded(), target.max_len())
        .roots(RootSet::Roots(code.copy_zero_vars()))
        .budget(budget.map(CycleBudget))
        .violations(&target.as_bounds(), MAX_COUNTEREXAMPLES)?;
    Ok(Verification {
        pass: counterexamples.is_empty(),
        counterexamples,
    })
}
