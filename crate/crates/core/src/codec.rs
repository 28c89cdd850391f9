//! Operational zero-error block codes: an `L_1`-separated base set used
//! symbol-by-symbol over `k` channel uses, a seeded channel simulator, and
//! the matching decoder.
//!
//! Per-symbol decoding is exact: base symbols sit at pairwise `L_1`
//! distance at least 3, a channel use moves a symbol by at most 1, so every
//! legal output has a unique base symbol within distance 1.

use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{l1_distance, Symbol};
use crate::error::{Error, Result};

/// A block code: all `k`-tuples over a canonically ordered base set.
#[derive(Clone, Debug)]
pub struct ZeroErrorCode {
    base_set: Vec<Symbol>,
    block_length: u32,
    d: u32,
    n: u32,
}

impl ZeroErrorCode {
    /// Validates pairwise separation and freezes the canonical order.
    pub fn new(mut base_set: Vec<Symbol>, block_length: u32) -> Result<Self> {
        if block_length == 0 {
            return Err(Error::Parameter("block length must be >= 1".into()));
        }
        let first = base_set
            .first()
            .ok_or_else(|| Error::Parameter("base set must be nonempty".into()))?;
        let (d, n) = (first.dim() as u32, first.levels());
        if base_set.iter().any(|s| s.dim() as u32 != d || s.levels() != n) {
            return Err(Error::Parameter(
                "base symbols must share one channel".into(),
            ));
        }
        base_set.sort();
        base_set.dedup();
        for (i, a) in base_set.iter().enumerate() {
            for b in &base_set[i + 1..] {
                let dist = l1_distance(a, b)?;
                if dist < 3 {
                    return Err(Error::Parameter(format!(
                        "base symbols {:?} and {:?} at L1 distance {dist} < 3",
                        a.coords(),
                        b.coords()
                    )));
                }
            }
        }
        Ok(ZeroErrorCode {
            base_set,
            block_length,
            d,
            n,
        })
    }

    /// Builds the base set from the Lee-code window for the `(d, n)`
    /// channel, so the rate meets the closed-form floor.
    pub fn from_channel(d: u32, n: u32, block_length: u32) -> Result<Self> {
        let base = crate::bounds::lower_bound_witness(d, n)?;
        ZeroErrorCode::new(base, block_length)
    }

    pub fn base_set(&self) -> &[Symbol] {
        &self.base_set
    }

    pub fn block_length(&self) -> u32 {
        self.block_length
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn levels(&self) -> u32 {
        self.n
    }

    /// `|V|^k`, the number of encodable messages.
    pub fn num_messages(&self) -> Result<u128> {
        let mut total: u128 = 1;
        for _ in 0..self.block_length {
            total = total
                .checked_mul(self.base_set.len() as u128)
                .ok_or_else(|| {
                    Error::Capacity("message space exceeds 128 bits".into())
                })?;
        }
        Ok(total)
    }

    /// Bits per channel use: `log2 |V|`.
    pub fn rate(&self) -> f64 {
        (self.base_set.len() as f64).log2()
    }
}

/// Maps a message to its block: base-`|V|` digits of the message, most
/// significant first, looked up in the canonical base order.
pub fn encode(message: u128, code: &ZeroErrorCode) -> Result<Vec<Symbol>> {
    let total = code.num_messages()?;
    if message >= total {
        return Err(Error::Parameter(format!(
            "message {message} outside [0, {total})"
        )));
    }
    let radix = code.base_set.len() as u128;
    let k = code.block_length as usize;
    let mut digits = vec![0usize; k];
    let mut rest = message;
    for slot in digits.iter_mut().rev() {
        *slot = (rest % radix) as usize;
        rest /= radix;
    }
    Ok(digits
        .into_iter()
        .map(|digit| code.base_set[digit].clone())
        .collect())
}

/// One simulated transmission: what went in, what came out, and the seed
/// that reproduces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelTrace {
    pub sent: Vec<Symbol>,
    pub received: Vec<Symbol>,
    pub seed: u64,
}

impl ChannelTrace {
    fn new(sent: Vec<Symbol>, received: Vec<Symbol>, seed: u64) -> Result<Self> {
        for (x, y) in sent.iter().zip(&received) {
            if l1_distance(x, y)? > 1 {
                return Err(Error::Invariant(
                    "channel moved a symbol by more than one step".into(),
                ));
            }
        }
        Ok(ChannelTrace {
            sent,
            received,
            seed,
        })
    }
}

/// Sends a block through the channel: each symbol independently survives
/// or, with probability `error_rate`, steps to a uniformly chosen in-box
/// neighbor at `L_1` distance 1.
///
/// The generator is ChaCha8 keyed by `seed`, so traces reproduce across
/// platforms.
pub fn transmit(sent: &[Symbol], error_rate: f64, seed: u64) -> Result<ChannelTrace> {
    if !(0.0..=1.0).contains(&error_rate) {
        return Err(Error::Parameter(format!(
            "error rate {error_rate} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let received = transmit_with_rng(sent, error_rate, &mut rng);
    ChannelTrace::new(sent.to_vec(), received, seed)
}

fn transmit_with_rng(sent: &[Symbol], error_rate: f64, rng: &mut ChaCha8Rng) -> Vec<Symbol> {
    sent.iter()
        .map(|x| {
            if error_rate > 0.0 && rng.gen_bool(error_rate) {
                let neighbors = unit_neighbors(x);
                if neighbors.is_empty() {
                    x.clone()
                } else {
                    neighbors[rng.gen_range(0..neighbors.len())].clone()
                }
            } else {
                x.clone()
            }
        })
        .collect()
}

/// In-box symbols at `L_1` distance exactly 1, in a fixed order.
fn unit_neighbors(x: &Symbol) -> Vec<Symbol> {
    let n = x.levels();
    let mut out = Vec::with_capacity(2 * x.dim());
    for i in 0..x.dim() {
        let c = x.coords()[i];
        if c > 0 {
            let mut coords = x.coords().to_vec();
            coords[i] = c - 1;
            out.push(Symbol::new(coords, n).expect("stays in box"));
        }
        if c + 1 < n {
            let mut coords = x.coords().to_vec();
            coords[i] = c + 1;
            out.push(Symbol::new(coords, n).expect("stays in box"));
        }
    }
    out
}

/// Recovers the message from a received block: per position, the unique
/// base symbol within `L_1` distance 1.
pub fn decode(received: &[Symbol], code: &ZeroErrorCode) -> Result<u128> {
    if received.len() != code.block_length as usize {
        return Err(Error::Parameter(format!(
            "received block of length {}, expected {}",
            received.len(),
            code.block_length
        )));
    }
    let radix = code.base_set.len() as u128;
    let mut message: u128 = 0;
    for y in received {
        let digit = code
            .base_set
            .iter()
            .position(|v| matches!(l1_distance(v, y), Ok(dist) if dist <= 1))
            .ok_or_else(|| {
                Error::CorruptInput(format!(
                    "no base symbol within distance 1 of {:?}",
                    y.coords()
                ))
            })?;
        message = message * radix + digit as u128;
    }
    Ok(message)
}

/// One line of the trace dump.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRecord {
    pub seed: u64,
    pub message: u64,
    pub sent: Vec<Vec<u32>>,
    pub received: Vec<Vec<u32>>,
    pub decoded: Option<u64>,
    pub ok: bool,
}

impl TraceRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trace serialization cannot fail")
    }
}

/// Outcome of a batch of seeded random trials.
#[derive(Clone, Debug)]
pub struct TrialSummary {
    pub trials: u64,
    pub failures: u64,
    pub traces: Vec<TraceRecord>,
}

/// Derives the per-trial seed from the base seed (splitmix64 step).
pub fn trial_seed(base: u64, trial: u64) -> u64 {
    let mut z = base
        .wrapping_add(trial.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs seeded random encode-transmit-decode trials. Trials are
/// independent, each under its own derived seed, so the outcome does not
/// depend on parallelism.
pub fn run_trials(
    code: &ZeroErrorCode,
    trials: u64,
    error_rate: f64,
    base_seed: u64,
    keep_traces: bool,
) -> Result<TrialSummary> {
    if !(0.0..=1.0).contains(&error_rate) {
        return Err(Error::Parameter(format!(
            "error rate {error_rate} outside [0, 1]"
        )));
    }
    let total = code.num_messages()?;
    let records: Vec<TraceRecord> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(base_seed, trial);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let message = rng.gen_range(0..total);
            let sent = encode(message, code).expect("message drawn in range");
            let received = transmit_with_rng(&sent, error_rate, &mut rng);
            let decoded = decode(&received, code).ok();
            TraceRecord {
                seed,
                message: message.to_u64().unwrap_or(u64::MAX),
                sent: sent.iter().map(|s| s.coords().to_vec()).collect(),
                received: received.iter().map(|s| s.coords().to_vec()).collect(),
                decoded: decoded.and_then(|m| m.to_u64()),
                ok: decoded == Some(message),
            }
        })
        .collect();
    let failures = records.iter().filter(|r| !r.ok).count() as u64;
    Ok(TrialSummary {
        trials,
        failures,
        traces: if keep_traces { records } else { Vec::new() },
    })
}
