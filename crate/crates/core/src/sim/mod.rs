//! BPSK over AWGN with sum-product decoding, for Monte-Carlo FER/BER curves.

mod bp;
mod channel;
mod monte_carlo;

pub use bp::{BpDecoder, Decoded, Workspace, LLR_CLAMP};
pub use channel::{awgn_llr, awgn_llr_with, noise_variance};
pub use monte_carlo::{design_rate, monte_carlo, wilson_interval, PointResult, SimConfig, SimResult, CSV_HEADER};
