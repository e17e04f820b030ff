//! Monte Carlo harness: BLER estimation, SNR-at-target search, gap to the
//! constrained Shannon limit, first-error profiling, heuristic enumeration
//! of automorphism distributions, and Pareto frontier extraction.
//!
//! Trials are independent tasks keyed by `(seed, trial index)`, so results
//! are bit-identical regardless of scheduling; trials run in fixed-size
//! chunks with the stopping rule checked at chunk boundaries.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::channel::{csl_snr_db, transmit, BiAwgn, RngStream};
use crate::complexity::chi_ca;
use crate::decode::{leaf::decode_leaf, AutomorphismDistribution};
use crate::decoder_spec::{Decoder, DecoderSpec};
use crate::llr::{add_llr, soft_xor_vec};
use crate::rm::{plotkin_split, rightmost_composite_addresses, Address, AtomSet, RmCode};
use crate::{Error, Result};

/// Stream index salt separating ensemble sampling from channel noise.
const ENSEMBLE_SEED_SALT: u64 = 0x9e3779b97f4a7c15;

/// Block-error-rate estimate with a 95% Wilson interval.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BlerEstimate {
    pub errors: u64,
    pub trials: u64,
    pub bler: f64,
    pub ci95: (f64, f64),
}

/// Monte Carlo controls. `min_errors` and `max_trials` form the stopping
/// rule; `all_zero` transmits the zero codeword instead of random ones
/// (valid only for ensemble-symmetric setups); per-trial ensemble
/// resampling redraws AE/CA ensembles for every trial instead of fixing
/// them per run.
#[derive(Clone, Copy, Debug)]
pub struct SimOptions {
    pub seed: u64,
    pub max_trials: u64,
    pub min_errors: u64,
    pub all_zero: bool,
    pub resample_ensembles_per_trial: bool,
    pub chunk: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            seed: 0,
            max_trials: 1_000_000,
            min_errors: 100,
            all_zero: false,
            resample_ensembles_per_trial: false,
            chunk: 1024,
        }
    }
}

impl SimOptions {
    fn ensemble_stream(&self, trial: Option<u64>) -> RngStream {
        RngStream::new(self.seed ^ ENSEMBLE_SEED_SALT, trial.unwrap_or(u64::MAX))
    }
}

fn wilson_95(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054f64;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn trial_outcome(
    spec: &DecoderSpec,
    decoder: &Decoder,
    code: RmCode,
    ch: BiAwgn,
    opts: &SimOptions,
    trial: u64,
) -> bool {
    let mut rng = RngStream::new(opts.seed, trial).rng();
    let c = if opts.all_zero {
        BitVec::zeros(code.length())
    } else {
        let msg = BitVec::from_bits(
            (0..code.dimension())
                .map(|_| rng.random_range(0..2u8))
                .collect::<Vec<_>>(),
        );
        code.encode(&msg).expect("message length matches dimension")
    };
    let l = transmit(&c, ch, &mut rng);
    let decoded = if opts.resample_ensembles_per_trial {
        let fresh = Decoder::prepare(code, spec, opts.ensemble_stream(Some(trial)))
            .expect("spec validated before the trial loop");
        fresh.decode(&l)
    } else {
        decoder.decode(&l)
    };
    decoded.expect("decode cannot fail on validated inputs") != c
}

/// Estimates the BLER of a decoder at one SNR point. Deterministic in the
/// seed; trials stop at the first chunk boundary with `min_errors` block
/// errors, or at `max_trials`.
pub fn estimate_bler(
    spec: &DecoderSpec,
    code: RmCode,
    snr_db: f64,
    opts: &SimOptions,
) -> Result<BlerEstimate> {
    let ch = BiAwgn::from_snr_db(snr_db);
    let decoder = Decoder::prepare(code, spec, opts.ensemble_stream(None))?;
    let chunk = opts.chunk.max(1);
    let mut errors = 0u64;
    let mut trials = 0u64;
    while trials < opts.max_trials && errors < opts.min_errors {
        let end = (trials + chunk).min(opts.max_trials);
        errors += (trials..end)
            .into_par_iter()
            .filter(|&t| trial_outcome(spec, &decoder, code, ch, opts, t))
            .count() as u64;
        trials = end;
    }
    Ok(BlerEstimate {
        errors,
        trials,
        bler: errors as f64 / trials as f64,
        ci95: wilson_95(errors, trials),
    })
}

// ---------------------------------------------------------------------------
// First-error profiling
// ---------------------------------------------------------------------------

/// Attribution of block errors to the first failing leaf of the GMC
/// decoding tree, in decoding-traversal order.
#[derive(Clone, Debug, Serialize)]
pub struct FirstErrorProfile {
    pub counts: BTreeMap<Address, u64>,
    pub blocks_in_error: u64,
    pub trials: u64,
}

impl FirstErrorProfile {
    /// Fraction of first errors per leaf; sums to 1 when any block erred.
    pub fn fractions(&self) -> BTreeMap<Address, f64> {
        self.counts
            .iter()
            .map(|(a, &c)| (a.clone(), c as f64 / self.blocks_in_error as f64))
            .collect()
    }

    /// Leaves ranked by descending first-error fraction.
    pub fn ranked(&self) -> Vec<(Address, f64)> {
        let mut v: Vec<(Address, f64)> = self.fractions().into_iter().collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        v
    }
}

/// Walks the decoding tree the way the GMC decoder does (right constituent
/// first), feeding each left branch the genie-corrected decision, and
/// returns the first leaf whose local decision differs from the correct
/// local word.
///
/// A block decodes in error exactly when some leaf errs in this sense, so
/// the attribution needs no separate decoding pass.
fn genie_first_error(code: RmCode, l: &[f64], correct: &BitVec, addr: &Address) -> Option<Address> {
    if AtomSet::TrivialAndFirstOrder.contains(code) {
        return (&decode_leaf(code, l) != correct).then(|| addr.clone());
    }
    let half = l.len() / 2;
    let (left, right) = l.split_at(half);
    let (u_correct, v_correct) = plotkin_split(correct).expect("even length");
    let v_llr = soft_xor_vec(left, right);
    if let Some(hit) =
        genie_first_error(code.right_constituent(), &v_llr, &v_correct, &addr.child(1))
    {
        return Some(hit);
    }
    let u_llr: Vec<f64> = (0..half)
        .map(|i| {
            add_llr(
                left[i],
                if v_correct.get(i) == 1 {
                    -right[i]
                } else {
                    right[i]
                },
            )
        })
        .collect();
    genie_first_error(code.left_constituent(), &u_llr, &u_correct, &addr.child(0))
}

/// First-error profile of the GMC decoder over the standard atom set.
pub fn first_error_profile(
    code: RmCode,
    snr_db: f64,
    trials: u64,
    seed: u64,
) -> Result<FirstErrorProfile> {
    let ch = BiAwgn::from_snr_db(snr_db);
    let chunk = 4096u64;
    let mut counts: BTreeMap<Address, u64> = BTreeMap::new();
    let mut done = 0u64;
    while done < trials {
        let end = (done + chunk).min(trials);
        let partial: Vec<Address> = (done..end)
            .into_par_iter()
            .filter_map(|t| {
                let mut rng = RngStream::new(seed, t).rng();
                let msg = BitVec::from_bits(
                    (0..code.dimension())
                        .map(|_| rng.random_range(0..2u8))
                        .collect::<Vec<_>>(),
                );
                let c = code.encode(&msg).expect("message length matches");
                let l = transmit(&c, ch, &mut rng);
                genie_first_error(code, &l, &c, &Address::root())
            })
            .collect();
        for addr in partial {
            *counts.entry(addr).or_insert(0) += 1;
        }
        done = end;
    }
    let blocks_in_error = counts.values().sum();
    Ok(FirstErrorProfile {
        counts,
        blocks_in_error,
        trials,
    })
}

// ---------------------------------------------------------------------------
// SNR-at-target search and the gap to the constrained Shannon limit
// ---------------------------------------------------------------------------

/// Bracketing and bisection controls for the SNR search.
#[derive(Clone, Copy, Debug)]
pub struct SnrSearch {
    pub low_db: f64,
    pub high_db: f64,
    pub scan_step_db: f64,
    pub resolution_db: f64,
}

impl Default for SnrSearch {
    fn default() -> Self {
        SnrSearch {
            low_db: -10.0,
            high_db: 15.0,
            scan_step_db: 1.0,
            resolution_db: 0.05,
        }
    }
}

/// Finds the SNR (dB) at which the decoder's BLER crosses `target`, by a
/// coarse upward scan followed by bisection to the configured resolution.
/// BLER is assumed monotone decreasing in SNR.
pub fn find_snr_at_bler(
    spec: &DecoderSpec,
    code: RmCode,
    target: f64,
    search: &SnrSearch,
    opts: &SimOptions,
) -> Result<f64> {
    assert!(target > 0.0 && target < 1.0, "target must be in (0,1)");
    let above = |snr_db: f64| -> Result<bool> {
        Ok(estimate_bler(spec, code, snr_db, opts)?.bler >= target)
    };
    if !above(search.low_db)? {
        return Err(Error::BracketNotFound {
            target,
            low: search.low_db,
            high: search.high_db,
        });
    }
    let mut lo = search.low_db;
    let mut hi = None;
    let mut snr = search.low_db + search.scan_step_db;
    while snr <= search.high_db + 1e-9 {
        if above(snr)? {
            lo = snr;
        } else {
            hi = Some(snr);
            break;
        }
        snr += search.scan_step_db;
    }
    let Some(mut hi) = hi else {
        return Err(Error::BracketNotFound {
            target,
            low: search.low_db,
            high: search.high_db,
        });
    };
    while hi - lo > search.resolution_db {
        let mid = 0.5 * (lo + hi);
        if above(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Gap (dB) between the decoder's SNR at the target BLER and the
/// constrained Shannon limit for the code rate.
pub fn gap_to_csl_db(
    spec: &DecoderSpec,
    code: RmCode,
    target: f64,
    search: &SnrSearch,
    opts: &SimOptions,
) -> Result<f64> {
    let snr = find_snr_at_bler(spec, code, target, search, opts)?;
    Ok(snr - csl_snr_db(code.rate())?)
}

// ---------------------------------------------------------------------------
// Heuristic distribution enumeration and Pareto frontiers
// ---------------------------------------------------------------------------

/// Enumerates automorphism distributions supported on the rightmost
/// composite vertices with sizes in `1..=max_size`, under the monotone rule
/// that a vertex gets an ensemble only when all deeper rightmost vertices
/// do. Size-1 entries are dropped from the emitted distributions.
/// `budget`, when given, keeps only distributions whose CA cost stays
/// within it.
pub fn enumerate_heuristic_distributions(
    code: RmCode,
    max_size: usize,
    budget: Option<u64>,
) -> Result<Vec<AutomorphismDistribution>> {
    assert!(max_size >= 1);
    let addrs = rightmost_composite_addresses(code);
    let mut out = Vec::new();
    // The depths with size >= 2 must form a suffix of the rightmost chain.
    for start in (0..=addrs.len()).rev() {
        for sizes in size_patterns(addrs.len() - start, max_size) {
            let pairs = addrs[start..]
                .iter()
                .cloned()
                .zip(sizes.iter().copied())
                .collect::<Vec<_>>();
            let dist = AutomorphismDistribution::new(pairs)?;
            if let Some(b) = budget {
                if chi_ca(code, &dist)? > b {
                    continue;
                }
            }
            out.push(dist);
        }
    }
    Ok(out)
}

fn size_patterns(free: usize, max_size: usize) -> Vec<Vec<usize>> {
    if free == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for s in 2..=max_size {
        for rest in size_patterns(free - 1, max_size) {
            let mut pattern = Vec::with_capacity(free);
            pattern.push(s);
            pattern.extend(rest);
            out.push(pattern);
        }
    }
    out
}

/// One decoder operating point: normalized complexity and gap to the
/// constrained Shannon limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub decoder_spec: String,
    pub ops_per_info_bit: f64,
    pub gap_db: f64,
}

/// Keeps the points not weakly dominated by any other (no other point is
/// at least as cheap and strictly better, or strictly cheaper and at least
/// as good), sorted by complexity.
pub fn pareto_frontier(points: &[SweepPoint]) -> Vec<SweepPoint> {
    let dominated = |p: &SweepPoint| {
        points.iter().any(|q| {
            (q.ops_per_info_bit <= p.ops_per_info_bit && q.gap_db < p.gap_db)
                || (q.ops_per_info_bit < p.ops_per_info_bit && q.gap_db <= p.gap_db)
        })
    };
    let mut out: Vec<SweepPoint> = points.iter().filter(|p| !dominated(p)).cloned().collect();
    out.sort_by(|a, b| {
        a.ops_per_info_bit
            .total_cmp(&b.ops_per_info_bit)
            .then(a.gap_db.total_cmp(&b.gap_db))
            .then(a.decoder_spec.cmp(&b.decoder_spec))
    });
    out
}
