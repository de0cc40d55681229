//! Closed walks of a base graph, ACE spectra, and problematic-walk detection.

mod problematic;
mod spectrum;
mod tbc;

pub use problematic::{
    divisors, find_problematic_walks, find_problematic_walks_with, touched_edges, violating_pairs,
    ProblematicRecord, ProblematicSearch, ProblematicWalk, ProblematicWalkSet,
};
pub use spectrum::{ace_spectrum, ace_spectrum_budgeted, lifted_spectrum, Ace, AceSpectrum};
pub use tbc::{enumerate_tbc_walks, enumerate_tbc_walks_with, walk_dump, TbcWalk, WalkRecord, WalkSearch};
