//! Maximum-likelihood leaf decoders for the atom-set codes.

use crate::bits::BitVec;
use crate::llr::{fht, hard, hard_vec, LLR_CLAMP};
use crate::rm::RmCode;

/// ML decoding of the repetition code: the sign of the LLR sum decides all
/// positions. Contradictory infinities cancel (majority of infinite signs
/// wins; on balance the finite remainder decides).
pub fn decode_repetition(l: &[f64]) -> BitVec {
    let mut finite = 0.0;
    let mut pos_inf = 0i64;
    let mut neg_inf = 0i64;
    for &v in l {
        if v == f64::INFINITY {
            pos_inf += 1;
        } else if v == f64::NEG_INFINITY {
            neg_inf += 1;
        } else {
            finite += v;
        }
    }
    let total = match pos_inf.cmp(&neg_inf) {
        std::cmp::Ordering::Greater => f64::INFINITY,
        std::cmp::Ordering::Less => f64::NEG_INFINITY,
        std::cmp::Ordering::Equal => finite,
    };
    let bit = hard(total);
    BitVec::from_bits(vec![bit; l.len()])
}

/// Wagner decoding of the single-parity-check code `RM(m-1, m)`: take hard
/// decisions and, if the overall parity is odd, flip the least reliable
/// position (lowest index on ties). This is ML for the SPC code.
pub fn decode_spc_wagner(l: &[f64]) -> BitVec {
    debug_assert!(l.len() >= 2);
    let mut out = hard_vec(l);
    if out.parity() == 1 {
        let mut flip = 0;
        let mut best = f64::INFINITY;
        for (i, &v) in l.iter().enumerate() {
            if v.abs() < best {
                best = v.abs();
                flip = i;
            }
        }
        out.set(flip, out.get(flip) ^ 1);
    }
    out
}

/// First-order decoding via the fast Hadamard transform: pick the transform
/// index of largest magnitude (lowest index on ties), read the sign, and
/// expand `codeword[i] = sign XOR parity(i AND index)`. This is ML for
/// `RM(1, m)`.
///
/// Infinite entries are clamped to `LLR_CLAMP` so transform sums stay
/// well-defined; the leaf stays exact whenever the clamp dominates the
/// finite entries.
pub fn decode_first_order(l: &[f64]) -> BitVec {
    debug_assert!(l.len().is_power_of_two());
    let mut y: Vec<f64> = l.iter().map(|&v| v.clamp(-LLR_CLAMP, LLR_CLAMP)).collect();
    fht(&mut y).expect("length checked by caller");
    let mut best_idx = 0;
    let mut best = -1.0;
    for (j, &v) in y.iter().enumerate() {
        if v.abs() > best {
            best = v.abs();
            best_idx = j;
        }
    }
    let sign = hard(y[best_idx]);
    let bits: Vec<u8> = (0..l.len())
        .map(|i| sign ^ ((i & best_idx).count_ones() as u8 & 1))
        .collect();
    BitVec::from_bits(bits)
}

/// Dispatches a leaf label to its ML decoder.
///
/// Order matters where labels overlap: the zero code, then repetition, then
/// length-1, then first-order, then SPC, then the whole space.
pub fn decode_leaf(code: RmCode, l: &[f64]) -> BitVec {
    debug_assert_eq!(l.len(), code.length());
    let (r, m) = (code.order(), code.log_length());
    if r < 0 {
        BitVec::zeros(l.len())
    } else if r == 0 {
        decode_repetition(l)
    } else if m == 0 {
        hard_vec(l)
    } else if r == 1 {
        decode_first_order(l)
    } else if r == m as i32 - 1 {
        decode_spc_wagner(l)
    } else if r >= m as i32 {
        hard_vec(l)
    } else {
        panic!("decode_leaf called on composite label {code}");
    }
}
