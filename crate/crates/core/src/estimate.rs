//! Monte Carlo estimates of the maximum load, for the linear family and for
//! fully random placement.
//!
//! Samples are drawn in fixed batches of [`BATCH`]. Batch `i` reads from
//! ChaCha8 stream `i` of the run's seed, so a run yields the same histogram
//! however the batches are spread over threads.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{next_prime_at_least, HashParams, Modulus};
use crate::load::{max_load_with, KeySet};
use crate::parallel;

/// Recorded in every output that depends on random draws.
pub const GENERATOR: &str = "ChaCha8Rng(seed_from_u64(seed)); stream per batch of 1024 samples";

/// Samples per substream.
pub const BATCH: u64 = 1024;

/// Fully random runs use the upper half of the stream space.
const RANDOM_STREAM_BASE: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub modulus: Modulus,
    pub key_set: KeySet,
    pub workers: usize,
}

impl McConfig {
    pub fn new(modulus: Modulus, key_set: KeySet, samples: u64, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            modulus,
            key_set,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

/// Summary of `samples` observed maximum loads.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(samples)`.
    pub std_error: f64,
    /// `l -> fraction of samples with max load >= l`, for `l` in `1..=max observed`.
    pub tail: BTreeMap<u64, f64>,
    /// `max load -> number of samples`.
    pub counts: BTreeMap<u64, u64>,
    pub samples: u64,
    pub seed: u64,
    pub generator: &'static str,
    /// Warnings and sampling conventions worth carrying into output metadata.
    pub notes: Vec<String>,
}

impl McEstimate {
    fn from_dense(dense: &[u64], seed: u64, notes: Vec<String>) -> Self {
        let counts: BTreeMap<u64, u64> = dense
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(l, &c)| (l as u64, c))
            .collect();
        let n: u64 = counts.values().sum();
        let (mut s1, mut s2) = (0u128, 0u128);
        for (&l, &c) in &counts {
            s1 += l as u128 * c as u128;
            s2 += (l as u128).pow(2) * c as u128;
        }
        let mean = s1 as f64 / n as f64;
        let std_error = if n > 1 {
            // exact integer numerator of the unbiased variance
            let num = n as u128 * s2 - s1 * s1;
            let var = num as f64 / (n as f64 * (n - 1) as f64);
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        let max = counts.keys().next_back().copied().unwrap_or(0);
        let mut tail = BTreeMap::new();
        let mut above = 0u64;
        for l in (1..=max).rev() {
            above += counts.get(&l).copied().unwrap_or(0);
            tail.insert(l, above as f64 / n as f64);
        }
        McEstimate {
            mean,
            std_error,
            tail,
            counts,
            samples: n,
            seed,
            generator: GENERATOR,
            notes,
        }
    }

    /// Empirical `Pr[max load >= l]`.
    pub fn tail_at(&self, l: u64) -> f64 {
        if l == 0 {
            return 1.0;
        }
        self.tail.get(&l).copied().unwrap_or(0.0)
    }
}

fn batch_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn run_batches<F>(samples: u64, workers: usize, width: usize, batch: F) -> Vec<u64>
where
    F: Fn(u64, u64, &mut [u64]) + Sync + Send,
{
    let n_batches = samples.div_ceil(BATCH);
    let parts = parallel::map_ordered(workers, n_batches, |i| {
        let mut dense = vec![0u64; width];
        let len = BATCH.min(samples - i * BATCH);
        batch(i, len, &mut dense);
        dense
    });
    let mut dense = vec![0u64; width];
    for part in parts {
        for (acc, c) in dense.iter_mut().zip(part) {
            *acc += c;
        }
    }
    dense
}

/// Draws `(a, b)` uniformly from `[p]^2`, `a = 0` included, and records the
/// maximum load of `h_{a,b}` on the key set.
pub fn mc_linear_maxload(cfg: &McConfig) -> Result<McEstimate> {
    if cfg.samples == 0 {
        return Err(Error::Domain("samples must be >= 1".into()));
    }
    let keys = cfg.key_set.materialize(&cfg.modulus)?;
    let md = cfg.modulus;
    let (p, m) = (md.p(), md.m());
    let mut notes = vec!["parameters drawn from all of [p]^2 including a = 0".to_string()];
    if (p as u128) < (m as u128).pow(2) {
        notes.push(format!("warning: p={p} < m^2={}", m as u128 * m as u128));
    }
    let dense = run_batches(cfg.samples, cfg.workers, keys.len() + 1, |i, len, dense| {
        let mut rng = batch_rng(cfg.seed, i);
        let mut bins = Vec::with_capacity(m as usize);
        for _ in 0..len {
            // random_range rejects the biased tail, so draws are uniform on [p]
            let a = rng.random_range(0..p);
            let b = rng.random_range(0..p);
            let l = max_load_with(HashParams::new_unchecked(a, b), &md, &keys, &mut bins);
            dense[l as usize] += 1;
        }
    });
    Ok(McEstimate::from_dense(&dense, cfg.seed, notes))
}

/// Throws `balls` balls independently and uniformly into `m` bins per sample.
pub fn mc_fully_random_maxload(m: u64, balls: u64, samples: u64, seed: u64, workers: usize) -> Result<McEstimate> {
    if m == 0 || balls == 0 || samples == 0 {
        return Err(Error::Domain("m, balls and samples must be >= 1".into()));
    }
    let dense = run_batches(samples, workers, balls as usize + 1, |i, len, dense| {
        let mut rng = batch_rng(seed, RANDOM_STREAM_BASE | i);
        let mut bins = vec![0u32; m as usize];
        for _ in 0..len {
            bins.iter_mut().for_each(|b| *b = 0);
            let mut best = 0u32;
            for _ in 0..balls {
                let slot = &mut bins[rng.random_range(0..m) as usize];
                *slot += 1;
                best = best.max(*slot);
            }
            dense[best as usize] += 1;
        }
    });
    Ok(McEstimate::from_dense(&dense, seed, Vec::new()))
}

/// Exact distribution of the maximum load when `balls` balls go independently
/// and uniformly into `m` bins: entry `k` is `Pr[max load = k]`.
///
/// Conditions on the content of one bin at a time, so the cost is roughly
/// `m * balls^3`; meant for calibration at small sizes.
pub fn fully_random_exact_distribution(m: u64, balls: u64) -> Result<Vec<f64>> {
    if m == 0 || balls == 0 {
        return Err(Error::Domain("m and balls must be >= 1".into()));
    }
    if m > 256 || balls > 256 {
        return Err(Error::Domain("exact distribution limited to m, balls <= 256".into()));
    }
    let n = balls as usize;
    let mut at_most = vec![0.0f64; n + 1];
    for (k, slot) in at_most.iter_mut().enumerate() {
        *slot = prob_all_bins_at_most(m as usize, n, k);
    }
    let mut pmf = vec![0.0f64; n + 1];
    pmf[0] = at_most[0];
    for k in 1..=n {
        pmf[k] = (at_most[k] - at_most[k - 1]).max(0.0);
    }
    Ok(pmf)
}

/// `Pr[every bin holds <= cap balls]`.
fn prob_all_bins_at_most(m: usize, n: usize, cap: usize) -> f64 {
    // f[r] = Pr[r balls spread over the bins processed so far all fit]
    let mut f: Vec<f64> = (0..=n).map(|r| if r <= cap { 1.0 } else { 0.0 }).collect();
    for j in 2..=m {
        let q = 1.0 / j as f64;
        let mut next = vec![0.0f64; n + 1];
        for (r, slot) in next.iter_mut().enumerate() {
            // t balls of r land in the new bin ~ Binomial(r, 1/j)
            let mut pmf = (1.0 - q).powi(r as i32);
            let mut acc = 0.0;
            for t in 0..=r.min(cap) {
                acc += pmf * f[r - t];
                pmf *= (r - t) as f64 / (t + 1) as f64 * q / (1.0 - q);
            }
            *slot = acc;
        }
        f = next;
    }
    f[n]
}

pub fn distribution_mean(pmf: &[f64]) -> f64 {
    pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
}

/// One `m` of a scaling study.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub m: u64,
    pub p: u64,
    pub linear: McEstimate,
    pub random: McEstimate,
}

/// For every `m`, takes `p` as the first prime `>= m^2` and estimates the
/// linear family on `[m]` next to `m` fully random balls in `m` bins.
pub fn scaling_study(m_values: &[u64], samples: u64, seed: u64, workers: usize) -> Result<Vec<ScalingRow>> {
    m_values
        .iter()
        .map(|&m| {
            if m < 2 {
                return Err(Error::Domain(format!("scaling needs m >= 2, got {m}")));
            }
            let square = m.checked_mul(m).ok_or(Error::Overflow(m))?;
            let p = next_prime_at_least(square)?;
            let md = Modulus::new(p, m)?;
            let cfg = McConfig::new(md, KeySet::interval(m)?, samples, seed).with_workers(workers);
            Ok(ScalingRow {
                m,
                p,
                linear: mc_linear_maxload(&cfg)?,
                random: mc_fully_random_maxload(m, m, samples, seed, workers)?,
            })
        })
        .collect()
}

/// Least-squares slope of `ln tail(l)` against `ln l` over `ls`, skipping
/// points whose tail is below `min_tail`. `None` with fewer than two points.
pub fn tail_loglog_slope(est: &McEstimate, ls: impl IntoIterator<Item = u64>, min_tail: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = ls
        .into_iter()
        .map(|l| (l, est.tail_at(l)))
        .filter(|&(_, t)| t > 0.0 && t >= min_tail)
        .map(|(l, t)| ((l as f64).ln(), t.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
