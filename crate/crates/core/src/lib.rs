//! Design of quasi-cyclic LDPC codes by ACE-spectrum constrained cyclic lifting
//! of a protograph, with a belief-propagation simulation harness for checking
//! the designed codes.
//!
//! The pipeline is: build or load a base graph ([`graph`]), enumerate its
//! short tailless backtrackless closed walks and pick out the ones whose lifted
//! images could break a target ACE spectrum ([`walks`]), choose cyclic edge
//! shifts for them ([`swap`]), expand the lift ([`lifting`]) and simulate it
//! over a BPSK/AWGN channel ([`sim`]).

pub mod error;
pub mod graph;
pub mod lifting;
pub mod seed;
pub mod sim;
pub mod swap;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{TannerGraph, Walk};
pub use lifting::{expand, LiftedCode, ShiftAssignment};
pub use walks::{Ace, AceSpectrum};
