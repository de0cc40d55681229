use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bp::BpDecoder;
use super::channel::awgn_llr_with;
use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::seed;

pub const CSV_HEADER: &str = "EbN0_dB,frames,frame_errors,bit_errors,avg_iters";

/// Frames decoded per batch before the stopping rule is checked. Fixed so the
/// set of decoded frames never depends on the number of workers.
const BATCH: u64 = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub ebn0_db: Vec<f64>,
    pub max_iterations: usize,
    /// Frame budget per point.
    pub max_frames: u64,
    /// Stop a point after this many frame errors.
    pub max_frame_errors: u64,
    pub seed: u64,
    pub decoder: String,
    #[serde(default)]
    pub punctured: Vec<usize>,
    /// Code rate used for the noise variance; the design rate when absent.
    #[serde(default)]
    pub rate: Option<f64>,
    /// Worker threads; 0 uses the global pool. Results do not depend on it.
    #[serde(default)]
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            ebn0_db: Vec::new(),
            max_iterations: 100,
            max_frames: 10_000,
            max_frame_errors: 100,
            seed: 0,
            decoder: "sum-product-flooding".into(),
            punctured: Vec::new(),
            rate: None,
            workers: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.ebn0_db.is_empty() {
            return Err(Error::Config("no Eb/N0 points given".into()));
        }
        if let Some(x) = self.ebn0_db.iter().find(|x| !x.is_finite()) {
            return Err(Error::Config(format!("Eb/N0 value {x} is not finite")));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max iterations must be at least 1".into()));
        }
        if self.max_frames == 0 {
            return Err(Error::Config("frame budget must be at least 1".into()));
        }
        if self.max_frame_errors == 0 {
            return Err(Error::Config("frame error target must be at least 1".into()));
        }
        if self.decoder != "sum-product-flooding" {
            return Err(Error::Config(format!("unknown decoder `{}`", self.decoder)));
        }
        if let Some(&p) = self.punctured.iter().find(|&&p| p >= n) {
            return Err(Error::Config(format!("punctured position {p} is out of range for n = {n}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub ebn0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub total_iterations: u64,
}

impl PointResult {
    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.frames as f64
    }

    pub fn ber(&self, n: usize) -> f64 {
        self.bit_errors as f64 / (self.frames as f64 * n as f64)
    }

    pub fn avg_iters(&self) -> f64 {
        self.total_iterations as f64 / self.frames as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub config: SimConfig,
    pub n: usize,
    pub rate: f64,
    pub points: Vec<PointResult>,
}

impl SimResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{:.4}\n",
                p.ebn0_db,
                p.frames,
                p.frame_errors,
                p.bit_errors,
                p.avg_iters()
            ));
        }
        out
    }
}

/// Information bits per transmitted bit: `(n - rank H) / (n - punctured)`,
/// with the rank taken over GF(2).
pub fn design_rate(code: &TannerGraph, punctured: usize) -> f64 {
    let n = code.n_var();
    let k = n - gf2_rank(code);
    k as f64 / (n - punctured.min(n)) as f64
}

fn gf2_rank(code: &TannerGraph) -> usize {
    let words = code.n_var().div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..code.n_chk())
        .map(|c| {
            let mut row = vec![0u64; words];
            for &e in code.chk_edges(c) {
                let v = code.edge(e).var;
                row[v / 64] ^= 1 << (v % 64);
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..code.n_var() {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & bit != 0 {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Wilson score interval for `k` successes in `n` trials at normal quantile `z`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let den = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / den;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / den;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, Copy, Default)]
struct Frame {
    error: bool,
    bit_errors: u64,
    iterations: u64,
}

/// Sends the all-zero codeword at each Eb/N0 point until the frame budget or
/// the frame-error target is reached, whichever comes first.
///
/// Frame `f` of point `p` draws its noise from `seed::derive(seed, [p, f])`,
/// and frames are accounted in order, so counts are identical for any worker
/// count.
pub fn monte_carlo(code: &TannerGraph, cfg: &SimConfig) -> Result<SimResult> {
    let n = code.n_var();
    cfg.validate(n)?;
    let rate = match cfg.rate {
        Some(r) => r,
        None => design_rate(code, cfg.punctured.len()),
    };
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Config(format!("rate {rate} is outside (0, 1]")));
    }
    let mut mask = vec![false; n];
    for &p in &cfg.punctured {
        mask[p] = true;
    }
    let decoder = BpDecoder::new(code);
    let run = || -> Result<Vec<PointResult>> {
        cfg.ebn0_db
            .iter()
            .enumerate()
            .map(|(pi, &ebn0)| simulate_point(&decoder, cfg, &mask, rate, pi as u64, ebn0))
            .collect()
    };
    let points = if cfg.workers == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run)?
    };
    Ok(SimResult {
        config: cfg.clone(),
        n,
        rate,
        points,
    })
}

fn simulate_point(
    decoder: &BpDecoder,
    cfg: &SimConfig,
    mask: &[bool],
    rate: f64,
    point: u64,
    ebn0: f64,
) -> Result<PointResult> {
    let n = decoder.n();
    let zeros = vec![0u8; n];
    let mut res = PointResult {
        ebn0_db: ebn0,
        frames: 0,
        frame_errors: 0,
        bit_errors: 0,
        total_iterations: 0,
    };
    let mut next = 0u64;
    while res.frames < cfg.max_frames && res.frame_errors < cfg.max_frame_errors {
        let end = (next + BATCH).min(cfg.max_frames);
        let frames: Vec<Frame> = (next..end)
            .into_par_iter()
            .map_init(
                || (decoder.workspace(), vec![0.0; n]),
                |(ws, llr), f| -> Result<Frame> {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(cfg.seed, &[point, f]));
                    awgn_llr_with(&zeros, ebn0, rate, mask, &mut rng, llr)?;
                    let out = decoder.decode_with(llr, cfg.max_iterations, ws)?;
                    let bit_errors = out.bits.iter().filter(|&&b| b != 0).count() as u64;
                    Ok(Frame {
                        error: bit_errors > 0 || !out.converged,
                        bit_errors,
                        iterations: out.iterations as u64,
                    })
                },
            )
            .collect::<Result<_>>()?;
        for fr in frames {
            res.frames += 1;
            res.frame_errors += u64::from(fr.error);
            res.bit_errors += fr.bit_errors;
            res.total_iterations += fr.iterations;
            if res.frame_errors >= cfg.max_frame_errors {
                break;
            }
        }
        next = end;
    }
    Ok(res)
}
