//! Brute-force maximum-likelihood decoding by codebook enumeration.

use crate::bits::BitVec;
use crate::llr::hard;
use crate::rm::RmCode;
use crate::{Error, Result};

/// A decoding decision together with its analog weight against the
/// decoder's input LLR vector.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    pub codeword: BitVec,
    pub analog_weight: f64,
}

/// Enumerates every codeword (Gray-code walk over the generator rows) and
/// returns one of minimum analog weight; ties break to the
/// lexicographically smallest codeword.
///
/// Guarded to dimensions up to 24.
pub fn decode_ml(code: RmCode, l: &[f64]) -> Result<DecodeOutcome> {
    if l.len() != code.length() {
        return Err(Error::LengthMismatch {
            expected: code.length(),
            got: l.len(),
        });
    }
    let k = code.dimension();
    if k > 24 {
        return Err(Error::MlDimensionGuard(k));
    }
    let words = l.len().div_ceil(64);
    let rows: Vec<Vec<u64>> = code
        .generator_rows()
        .iter()
        .map(BitVec::to_words_msb)
        .collect();
    let hard_words = {
        let mut w = vec![0u64; words];
        for (i, &v) in l.iter().enumerate() {
            if hard(v) == 1 {
                w[i / 64] |= 1 << (63 - (i % 64));
            }
        }
        w
    };
    let abs: Vec<f64> = l.iter().map(|v| v.abs()).collect();
    let weight_of = |cw: &[u64]| -> f64 {
        let mut w = 0.0;
        for (wi, (&a, &b)) in cw.iter().zip(&hard_words).enumerate() {
            let mut x = a ^ b;
            while x != 0 {
                let bit = x.trailing_zeros() as usize;
                w += abs[wi * 64 + 63 - bit];
                x &= x - 1;
            }
        }
        w
    };

    let mut current = vec![0u64; words];
    let mut best = current.clone();
    let mut best_weight = weight_of(&current);
    for t in 1u64..1u64 << k {
        let row = &rows[t.trailing_zeros() as usize];
        for (c, r) in current.iter_mut().zip(row) {
            *c ^= r;
        }
        let w = weight_of(&current);
        if w < best_weight || (w == best_weight && current < best) {
            best_weight = w;
            best.copy_from_slice(&current);
        }
    }
    Ok(DecodeOutcome {
        codeword: BitVec::from_words_msb(&best, l.len()),
        analog_weight: best_weight,
    })
}
