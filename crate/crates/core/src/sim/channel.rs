use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// `σ² = 1 / (2·R·10^(Eb/N0 / 10))` for unit-energy BPSK.
pub fn noise_variance(ebn0_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))
}

/// Channel LLRs for `bits` sent as `1 - 2b` over AWGN, seeded.
pub fn awgn_llr(bits: &[u8], ebn0_db: f64, rate: f64, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![0.0; bits.len()];
    awgn_llr_with(bits, ebn0_db, rate, &[], &mut rng, &mut out)?;
    Ok(out)
}

/// Fills `out` with `2y/σ²`; positions flagged in `punctured` get exactly 0 and
/// draw no noise sample.
pub fn awgn_llr_with<R: Rng>(
    bits: &[u8],
    ebn0_db: f64,
    rate: f64,
    punctured: &[bool],
    rng: &mut R,
    out: &mut [f64],
) -> Result<()> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Config(format!("rate {rate} is outside (0, 1]")));
    }
    if out.len() != bits.len() {
        return Err(Error::Dimension {
            expected: bits.len(),
            got: out.len(),
        });
    }
    let sigma2 = noise_variance(ebn0_db, rate);
    let sigma = sigma2.sqrt();
    for (i, (&b, o)) in bits.iter().zip(out.iter_mut()).enumerate() {
        if punctured.get(i).copied().unwrap_or(false) {
            *o = 0.0;
            continue;
        }
        let x = match b {
            0 => 1.0,
            1 => -1.0,
            other => return Err(Error::Config(format!("bit {i} has value {other}"))),
        };
        let n: f64 = rng.sample(StandardNormal);
        *o = 2.0 * (x + sigma * n) / sigma2;
    }
    Ok(())
}
