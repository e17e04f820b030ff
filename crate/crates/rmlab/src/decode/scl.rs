//! Successive-cancellation list decoding over the length-1 atom set.
//!
//! Constituent decoders map a list of (LLR vector, cost) pairs to a list of
//! (codeword, input index, cost) triples, where the cost of a codeword `c`
//! against `l` is `sum_i lsigmoid((-1)^c[i] l[i])`. Lists are truncated to
//! the `l_max` lowest costs by a stable selection, so ties keep their
//! tentative order. The overall decoder starts from a single entry with
//! cost 0 and finally picks the candidate of least analog weight against
//! the original input.

use crate::bits::BitVec;
use crate::llr::{add_llr, analog_weight, lsigmoid, soft_xor_vec};
use crate::rm::{plotkin_join, RmCode};
use crate::{Error, Result};

/// One entry of a constituent decoder's output list.
#[derive(Clone, Debug)]
pub struct SclEntry {
    pub codeword: BitVec,
    /// Index into the decoder's input list this entry descends from.
    pub parent: usize,
    /// Accumulated cost of the codeword (input cost included).
    pub cost: f64,
}

/// Full candidate list of the root constituent decoder.
pub fn scl_candidates(code: RmCode, l: &[f64], l_max: usize) -> Result<Vec<SclEntry>> {
    if code.order() < 0 {
        return Err(Error::NegativeOrder(code.order()));
    }
    if l_max < 2 {
        return Err(Error::ListSizeTooSmall(l_max));
    }
    if l.len() != code.length() {
        return Err(Error::LengthMismatch {
            expected: code.length(),
            got: l.len(),
        });
    }
    Ok(scl_rec(
        code.order(),
        code.log_length(),
        vec![(l.to_vec(), 0.0)],
        l_max,
    ))
}

/// List decoding with maximum list size `l_max`; the returned codeword has
/// the least analog weight among the root candidates (lowest list index on
/// ties).
pub fn decode_scl(code: RmCode, l: &[f64], l_max: usize) -> Result<BitVec> {
    let candidates = scl_candidates(code, l, l_max)?;
    let mut best: Option<(BitVec, f64)> = None;
    for entry in candidates {
        let weight = analog_weight(&entry.codeword, l)?;
        if best.as_ref().is_none_or(|(_, w)| weight < *w) {
            best = Some((entry.codeword, weight));
        }
    }
    Ok(best.expect("candidate list is nonempty").0)
}

fn scl_rec(r: i32, m: u32, inputs: Vec<(Vec<f64>, f64)>, l_max: usize) -> Vec<SclEntry> {
    if m == 0 {
        return scl_leaf(r, &inputs, l_max);
    }
    let half = 1usize << (m - 1);
    let v_inputs: Vec<(Vec<f64>, f64)> = inputs
        .iter()
        .map(|(l, cost)| (soft_xor_vec(&l[..half], &l[half..]), *cost))
        .collect();
    let v_list = scl_rec(r - 1, m - 1, v_inputs, l_max);
    let u_inputs: Vec<(Vec<f64>, f64)> = v_list
        .iter()
        .map(|entry| {
            let (left, right) = inputs[entry.parent].0.split_at(half);
            let folded: Vec<f64> = (0..half)
                .map(|i| {
                    add_llr(
                        left[i],
                        if entry.codeword.get(i) == 1 {
                            -right[i]
                        } else {
                            right[i]
                        },
                    )
                })
                .collect();
            (folded, entry.cost)
        })
        .collect();
    let u_list = scl_rec(r, m - 1, u_inputs, l_max);
    u_list
        .into_iter()
        .map(|u_entry| {
            let v_entry = &v_list[u_entry.parent];
            SclEntry {
                codeword: plotkin_join(&u_entry.codeword, &v_entry.codeword),
                parent: v_entry.parent,
                cost: u_entry.cost,
            }
        })
        .collect()
}

fn scl_leaf(r: i32, inputs: &[(Vec<f64>, f64)], l_max: usize) -> Vec<SclEntry> {
    if r < 0 {
        // The zero code: one candidate per input, no truncation.
        return inputs
            .iter()
            .enumerate()
            .map(|(i, (l, cost))| SclEntry {
                codeword: BitVec::zeros(1),
                parent: i,
                cost: cost + lsigmoid(l[0]),
            })
            .collect();
    }
    let mut tentative = Vec::with_capacity(2 * inputs.len());
    for (i, (l, cost)) in inputs.iter().enumerate() {
        tentative.push(SclEntry {
            codeword: BitVec::zeros(1),
            parent: i,
            cost: cost + lsigmoid(l[0]),
        });
        tentative.push(SclEntry {
            codeword: BitVec::from_bits([1]),
            parent: i,
            cost: cost + lsigmoid(-l[0]),
        });
    }
    // Stable sort, so equal costs keep their tentative order.
    tentative.sort_by(|a, b| a.cost.total_cmp(&b.cost));
    tentative.truncate(l_max);
    tentative
}
