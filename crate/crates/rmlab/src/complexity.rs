//! Closed-form worst-case operation counts for every decoder.
//!
//! Complexity is the number of unary/binary word operations (additions,
//! comparisons, soft XORs, negative log-sigmoids, absolute values,
//! negations, field additions, copies), all weighted evenly. Counts are
//! worst-case: the Wagner flip and every candidate-selection stage are
//! always charged.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::decode::AutomorphismDistribution;
use crate::decoder_spec::DecoderSpec;
use crate::rm::{Address, AtomSet, RmCode};
use crate::{Error, Result};

/// Worst-case operation counts for one decoder on one code.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexityReport {
    pub decoder_spec: String,
    pub code: (i32, u32),
    pub total_ops: u64,
    pub dimension: usize,
    pub ops_per_info_bit: f64,
    /// Operations charged at each decoding-tree vertex (invocation
    /// multiplicities folded in); values sum to `total_ops`.
    pub breakdown: BTreeMap<String, u64>,
    /// True when a selection cost outside the tabulated sizes fell back to
    /// the comparator-count lower bound, making the total optimistic.
    pub uses_selection_bound: bool,
}

/// Wagner decoding of the SPC code `RM(m-1, m)`: hard decisions, parity,
/// parity check, and the conditional flip total `2^{m+2}` operations.
pub fn chi_leaf_spc(m: u32) -> u64 {
    assert!(m >= 1);
    1u64 << (m + 2)
}

/// First-order decoding of `RM(1, m)`: transform (`m 2^m`), peak search
/// (`2^{m+1} - 1`), sign (1), and codeword expansion (`2^m + m`), total
/// `(m+3) 2^m + m`.
pub fn chi_leaf_first_order(m: u32) -> u64 {
    assert!(m >= 1);
    (m as u64 + 3) * (1u64 << m) + m as u64
}

/// Leaf cost for any atom label, mirroring the leaf-decoder dispatch.
///
/// Beyond the SPC and first-order boundaries: the zero code costs nothing,
/// the repetition code costs `2^{m+1} - 1` (sum, sign, copies), and the
/// whole space costs `2^m` comparisons.
fn chi_leaf(code: RmCode) -> u64 {
    let (r, m) = (code.order(), code.log_length());
    if r < 0 {
        0
    } else if r == 0 {
        (1u64 << (m + 1)) - 1
    } else if m == 0 {
        1
    } else if r == 1 {
        chi_leaf_first_order(m)
    } else if r == m as i32 - 1 {
        chi_leaf_spc(m)
    } else {
        debug_assert!(r >= m as i32);
        1u64 << m
    }
}

/// CA decoder cost under an automorphism distribution, with the GMC and AE
/// decoders as the empty and root-only special cases.
///
/// At a composite vertex with local ensemble size `l`, each of the `l`
/// branches pays both constituent decoders plus `2^{m+1}` preparation and
/// recombination operations, and selecting among `l > 1` candidates costs
/// another `l 2^{m+1} - 1`.
pub fn chi_ca(code: RmCode, dist: &AutomorphismDistribution) -> Result<u64> {
    dist.validate_for(code)?;
    Ok(ca_walk(code, dist, &Address::root(), 1, &mut None))
}

pub fn chi_gmc(code: RmCode) -> Result<u64> {
    chi_ca(code, &AutomorphismDistribution::empty())
}

/// AE decoder cost; size 1 is the plain GMC decoder.
pub fn chi_ae(code: RmCode, size: usize) -> Result<u64> {
    if size <= 1 {
        chi_gmc(code)
    } else {
        chi_ca(
            code,
            &AutomorphismDistribution::new([(Address::root(), size)])?,
        )
    }
}

fn record(breakdown: &mut Option<&mut BTreeMap<String, u64>>, addr: &Address, ops: u64) {
    if let Some(map) = breakdown {
        *map.entry(addr.to_string()).or_insert(0) += ops;
    }
}

fn ca_walk(
    code: RmCode,
    dist: &AutomorphismDistribution,
    addr: &Address,
    mult: u64,
    breakdown: &mut Option<&mut BTreeMap<String, u64>>,
) -> u64 {
    if AtomSet::TrivialAndFirstOrder.contains(code) {
        let local = chi_leaf(code);
        record(breakdown, addr, mult * local);
        return local;
    }
    let size = dist.size_at_root() as u64;
    let m = code.log_length();
    let chi_right = ca_walk(
        code.right_constituent(),
        &dist.child(1),
        &addr.child(1),
        mult * size,
        breakdown,
    );
    let chi_left = ca_walk(
        code.left_constituent(),
        &dist.child(0),
        &addr.child(0),
        mult * size,
        breakdown,
    );
    let mut local = size << (m + 1);
    if size > 1 {
        local += (size << (m + 1)) - 1;
    }
    record(breakdown, addr, mult * local);
    size * chi_right + size * chi_left + local
}

/// Cost of selecting the `l_max` smallest of `n` scores with a selection
/// network: zero when nothing is dropped, tabulated counts for the sizes
/// with known networks, otherwise twice the comparator-count lower bound
/// `(n - l_max) ceil(log2(l_max + 1))` minus the dropped inputs.
pub fn chi_sel(l_max: u64, n: u64) -> u64 {
    if l_max >= n {
        return 0;
    }
    match (l_max, n) {
        (4, 8) => 24,
        (6, 8) => 22,
        (6, 12) => 30,
        _ => {
            let dropped = n - l_max;
            let units = dropped * ceil_log2(l_max + 1);
            2 * units - dropped
        }
    }
}

/// True when `chi_sel` resolves from the tabulated networks (or is zero).
pub fn chi_sel_is_exact(l_max: u64, n: u64) -> bool {
    l_max >= n || matches!((l_max, n), (4, 8) | (6, 8) | (6, 12))
}

fn ceil_log2(x: u64) -> u64 {
    debug_assert!(x >= 1);
    64 - (x - 1).leading_zeros() as u64
}

fn pow2_saturating(k: usize) -> u64 {
    if k >= 63 {
        u64::MAX
    } else {
        1u64 << k
    }
}

/// List decoder cost for the overall decoder (input list 1) with maximum
/// list size `l_max`.
pub fn chi_scl(code: RmCode, l_max: usize) -> Result<u64> {
    if code.order() < 0 {
        return Err(Error::NegativeOrder(code.order()));
    }
    if l_max < 2 {
        return Err(Error::ListSizeTooSmall(l_max));
    }
    Ok(chi_scl_general(
        code.order(),
        code.log_length(),
        1,
        l_max as u64,
    ))
}

/// Constituent list decoder cost for input list size `l_in`.
///
/// Leaves cost `l_in (3 + 4 [r >= 0])` plus the selection stage; a
/// composite vertex pays both constituents plus
/// `2^{m-1} (l_in + 2 l' + l'')` preparation and recombination operations,
/// where `l'` and `l''` are the capped intermediate list sizes.
pub fn chi_scl_general(r: i32, m: u32, l_in: u64, l_max: u64) -> u64 {
    scl_walk(r, m, l_in, l_max, &Address::root(), &mut None, &mut false)
}

#[allow(clippy::too_many_arguments)]
fn scl_walk(
    r: i32,
    m: u32,
    l_in: u64,
    l_max: u64,
    addr: &Address,
    breakdown: &mut Option<&mut BTreeMap<String, u64>>,
    used_bound: &mut bool,
) -> u64 {
    if m == 0 {
        let tentative = pow2_saturating(crate::rm::dimension(r, 0)).saturating_mul(l_in);
        let local = l_in * (3 + 4 * u64::from(r >= 0)) + chi_sel(l_max, tentative);
        if !chi_sel_is_exact(l_max, tentative) {
            *used_bound = true;
        }
        record(breakdown, addr, local);
        return local;
    }
    let l_prime = pow2_saturating(crate::rm::dimension(r - 1, m - 1))
        .saturating_mul(l_in)
        .min(l_max);
    let l_second = pow2_saturating(crate::rm::dimension(r, m - 1))
        .saturating_mul(l_prime)
        .min(l_max);
    let right = scl_walk(
        r - 1,
        m - 1,
        l_in,
        l_max,
        &addr.child(1),
        breakdown,
        used_bound,
    );
    let left = scl_walk(
        r,
        m - 1,
        l_prime,
        l_max,
        &addr.child(0),
        breakdown,
        used_bound,
    );
    let local = (1u64 << (m - 1)) * (l_in + 2 * l_prime + l_second);
    record(breakdown, addr, local);
    right + left + local
}

/// Total operations divided by the code dimension.
pub fn ops_per_info_bit(total: u64, code: RmCode) -> Result<f64> {
    let k = code.dimension();
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(total as f64 / k as f64)
}

/// Full report (total, normalized count, per-vertex breakdown) for a
/// decoder spec. The brute-force ML decoder has no operation-count model.
pub fn report(spec: &DecoderSpec, code: RmCode) -> Result<ComplexityReport> {
    let mut breakdown = BTreeMap::new();
    let mut uses_bound = false;
    let total = match spec {
        DecoderSpec::Ml => return Err(Error::NoComplexityModel(spec.to_string())),
        DecoderSpec::Gmc => {
            let dist = AutomorphismDistribution::empty();
            dist.validate_for(code)?;
            ca_walk(code, &dist, &Address::root(), 1, &mut Some(&mut breakdown))
        }
        DecoderSpec::Ae(size) => {
            let dist = if *size <= 1 {
                AutomorphismDistribution::empty()
            } else {
                AutomorphismDistribution::new([(Address::root(), *size)])?
            };
            dist.validate_for(code)?;
            ca_walk(code, &dist, &Address::root(), 1, &mut Some(&mut breakdown))
        }
        DecoderSpec::Ca(pairs) => {
            let dist = AutomorphismDistribution::new(pairs.clone())?;
            dist.validate_for(code)?;
            ca_walk(code, &dist, &Address::root(), 1, &mut Some(&mut breakdown))
        }
        DecoderSpec::Scl(l_max) => {
            if code.order() < 0 {
                return Err(Error::NegativeOrder(code.order()));
            }
            if *l_max < 2 {
                return Err(Error::ListSizeTooSmall(*l_max));
            }
            scl_walk(
                code.order(),
                code.log_length(),
                1,
                *l_max as u64,
                &Address::root(),
                &mut Some(&mut breakdown),
                &mut uses_bound,
            )
        }
    };
    Ok(ComplexityReport {
        decoder_spec: spec.to_string(),
        code: (code.order(), code.log_length()),
        total_ops: total,
        dimension: code.dimension(),
        ops_per_info_bit: ops_per_info_bit(total, code)?,
        breakdown,
        uses_selection_bound: uses_bound,
    })
}
