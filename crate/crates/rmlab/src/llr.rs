//! Extended-real log-likelihood-ratio arithmetic.
//!
//! LLRs live in the extended reals (`f64` with genuine infinities). The
//! operations here are exact up to floating point: the soft XOR uses the
//! dual-log1p identity rather than the min-sum approximation.

use crate::bits::BitVec;
use crate::{Error, Result};

/// Magnitude substituted for infinite LLRs before the Hadamard transform.
pub const LLR_CLAMP: f64 = (1u64 << 20) as f64;

/// Soft XOR: `2 atanh(tanh(a/2) tanh(b/2))` with `tanh(±inf) = ±1`.
///
/// Computed as `sign(a) sign(b) min(|a|,|b|) + log1p(-exp) corrections`,
/// which is exact, not the min-sum approximation. For infinite arguments:
/// `(+inf) ⊞ b = b` and `(-inf) ⊞ b = -b`.
pub fn soft_xor(a: f64, b: f64) -> f64 {
    if a.is_infinite() {
        return if a > 0.0 { b } else { -b };
    }
    if b.is_infinite() {
        return if b > 0.0 { a } else { -a };
    }
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Elementwise soft XOR of two equal-length LLR vectors.
pub fn soft_xor_vec(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len(), "soft_xor_vec length mismatch");
    a.iter().zip(b).map(|(&x, &y)| soft_xor(x, y)).collect()
}

/// LLR sum with the erasure rule: `(+inf) + (-inf) = 0`.
///
/// Two branches asserting contradictory certainty cancel to a complete
/// erasure instead of producing NaN.
pub fn add_llr(a: f64, b: f64) -> f64 {
    if a.is_infinite() && b.is_infinite() && a != b {
        0.0
    } else {
        a + b
    }
}

/// Negative log-sigmoid `ln(1 + exp(-x))`, with `lsigmoid(-inf) = inf` and
/// `lsigmoid(inf) = 0`. Stable for large `|x|`.
pub fn lsigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

/// Hard decision: 1 iff `l < 0` (so `hard(0) = 0`).
pub fn hard(l: f64) -> u8 {
    u8::from(l < 0.0)
}

/// Elementwise hard decisions.
pub fn hard_vec(l: &[f64]) -> BitVec {
    BitVec::from_bits(l.iter().map(|&x| hard(x)).collect::<Vec<_>>())
}

/// Analog weight: the sum of `|l[i]|` over positions where `x` disagrees
/// with the hard decision of `l`. Infinite where a disagreement has
/// infinite reliability.
pub fn analog_weight(x: &BitVec, l: &[f64]) -> Result<f64> {
    if x.len() != l.len() {
        return Err(Error::LengthMismatch {
            expected: l.len(),
            got: x.len(),
        });
    }
    let mut w = 0.0;
    for (i, &v) in l.iter().enumerate() {
        if x.get(i) != hard(v) {
            w += v.abs();
        }
    }
    Ok(w)
}

/// List-decoding cost: the sum of `lsigmoid((-1)^c[i] * l[i])`.
pub fn scl_cost(c: &BitVec, l: &[f64]) -> Result<f64> {
    if c.len() != l.len() {
        return Err(Error::LengthMismatch {
            expected: l.len(),
            got: c.len(),
        });
    }
    let mut cost = 0.0;
    for (i, &v) in l.iter().enumerate() {
        cost += lsigmoid(if c.get(i) == 1 { -v } else { v });
    }
    Ok(cost)
}

/// In-place fast Hadamard transform: `y[j] = sum_i (-1)^{popcount(i & j)} v[i]`,
/// in `m * 2^m` additions. Errors unless the length is a power of two.
pub fn fht(v: &mut [f64]) -> Result<()> {
    if !v.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(v.len()));
    }
    let mut h = 1;
    while h < v.len() {
        for block in (0..v.len()).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn soft_xor_direct(a: f64, b: f64) -> f64 {
        // Definition-level oracle, numerically poor for large magnitudes.
        2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atanh()
    }

    #[test]
    fn soft_xor_examples() {
        assert_eq!(soft_xor(0.0, 5.0), 0.0);
        assert_eq!(soft_xor(f64::INFINITY, -3.2), -3.2);
        // High-precision evaluation of 2 atanh(tanh(1)^2).
        assert!((soft_xor(2.0, 2.0) - 1.3250027473578645).abs() < 1e-12);
        assert!((soft_xor(2.0, 2.0) - soft_xor_direct(2.0, 2.0)).abs() < 1e-12);
        assert_eq!(
            soft_xor(f64::INFINITY, f64::NEG_INFINITY),
            f64::NEG_INFINITY
        );
        assert_eq!(soft_xor(f64::INFINITY, f64::INFINITY), f64::INFINITY);
    }

    #[test]
    fn lsigmoid_examples() {
        assert!((lsigmoid(0.0) - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(lsigmoid(f64::INFINITY), 0.0);
        assert_eq!(lsigmoid(f64::NEG_INFINITY), f64::INFINITY);
        assert!((lsigmoid(40.0) - 4.248354255291589e-18).abs() < 1e-30);
        assert!((lsigmoid(-40.0) - 40.0).abs() < 1e-12);
    }

    #[test]
    fn hard_decision_examples() {
        assert_eq!(hard(-0.3), 1);
        assert_eq!(hard(0.0), 0);
        assert_eq!(
            hard_vec(&[f64::INFINITY, f64::NEG_INFINITY, 2.0, -2.0]),
            BitVec::from_bits([0, 1, 0, 1])
        );
    }

    #[test]
    fn analog_weight_examples() {
        let l = [3.0, -4.0];
        assert_eq!(analog_weight(&hard_vec(&l), &l).unwrap(), 0.0);
        assert_eq!(analog_weight(&BitVec::from_bits([1, 0]), &l).unwrap(), 7.0);
        assert!(analog_weight(&BitVec::from_bits([1]), &l).is_err());
        // A disagreement backed by infinite reliability costs infinity.
        let l = [f64::INFINITY, 1.0];
        assert_eq!(
            analog_weight(&BitVec::from_bits([1, 0]), &l).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn analog_weight_matches_naive_loop() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let n = 1 + (next() * 24.0) as usize;
            let l: Vec<f64> = (0..n).map(|_| 8.0 * next() - 4.0).collect();
            let x = BitVec::from_bits((0..n).map(|_| u8::from(next() < 0.5)).collect::<Vec<_>>());
            let naive: f64 = (0..n)
                .filter(|&i| x.get(i) != hard(l[i]))
                .map(|i| l[i].abs())
                .sum();
            assert_eq!(analog_weight(&x, &l).unwrap(), naive);
        }
    }

    #[test]
    fn scl_cost_examples() {
        assert_eq!(
            scl_cost(&BitVec::from_bits([0]), &[f64::INFINITY]).unwrap(),
            0.0
        );
        let two_ln2 = scl_cost(&BitVec::from_bits([0, 0]), &[0.0, 0.0]).unwrap();
        assert!((two_ln2 - 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn cost_decomposes_over_plotkin_splits() {
        // cost(c, l) = cost(v, l' soft-xor l'') + cost(u, l' + (-1)^v l'')
        use crate::channel::RngStream;
        use crate::rm::{plotkin_split, RmCode};
        use rand::Rng;

        let code = RmCode::new(2, 4);
        let mut rng = RngStream::new(0xC0_57, 0).rng();
        for _ in 0..500 {
            let msg = BitVec::from_bits(
                (0..code.dimension())
                    .map(|_| rng.random_range(0..2u8))
                    .collect::<Vec<_>>(),
            );
            let c = code.encode(&msg).unwrap();
            let l: Vec<f64> = (0..16).map(|_| rng.random_range(-6.0..6.0)).collect();
            let (left, right) = l.split_at(8);
            let (u, v) = plotkin_split(&c).unwrap();
            let v_llr = soft_xor_vec(left, right);
            let u_llr: Vec<f64> = (0..8)
                .map(|i| left[i] + if v.get(i) == 1 { -right[i] } else { right[i] })
                .collect();
            let whole = scl_cost(&c, &l).unwrap();
            let parts = scl_cost(&v, &v_llr).unwrap() + scl_cost(&u, &u_llr).unwrap();
            assert!(
                (whole - parts).abs() <= 1e-9 * (1.0 + whole.abs()),
                "{whole} vs {parts}"
            );
        }
    }

    #[test]
    fn fht_examples() {
        let mut v = [1.0, 1.0, 1.0, 1.0];
        fht(&mut v).unwrap();
        assert_eq!(v, [4.0, 0.0, 0.0, 0.0]);

        let mut v = [5.0, 4.0, -4.0, -5.0];
        fht(&mut v).unwrap();
        assert_eq!(v, [0.0, 2.0, 18.0, 0.0]);

        let mut v = [1.0, 2.0, 3.0];
        assert!(fht(&mut v).is_err());
    }

    #[test]
    fn fht_matches_naive_up_to_m6() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        for m in 0..=6u32 {
            let n = 1usize << m;
            let v: Vec<f64> = (0..n).map(|_| 10.0 * next()).collect();
            let naive: Vec<f64> = (0..n)
                .map(|j| {
                    (0..n)
                        .map(|i| {
                            let sign = if (i & j).count_ones() % 2 == 1 {
                                -1.0
                            } else {
                                1.0
                            };
                            sign * v[i]
                        })
                        .sum()
                })
                .collect();
            let mut fast = v.clone();
            fht(&mut fast).unwrap();
            for (a, b) in fast.iter().zip(&naive) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn add_llr_erasure_rule() {
        assert_eq!(add_llr(f64::INFINITY, f64::NEG_INFINITY), 0.0);
        assert_eq!(add_llr(f64::INFINITY, f64::INFINITY), f64::INFINITY);
        assert_eq!(add_llr(1.5, -0.5), 1.0);
    }

    proptest! {
        #[test]
        fn soft_xor_matches_definition(a in -12.0f64..12.0, b in -12.0f64..12.0) {
            // The tanh/atanh oracle itself degrades past |x| ~ 15 as the
            // tanh product saturates, hence the bounded domain.
            let exact = soft_xor(a, b);
            let direct = soft_xor_direct(a, b);
            prop_assert!((exact - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
        }

        #[test]
        fn soft_xor_commutes_and_bounds(a in -50.0f64..50.0, b in -50.0f64..50.0) {
            prop_assert_eq!(soft_xor(a, b), soft_xor(b, a));
            let out = soft_xor(a, b);
            prop_assert!(out.abs() <= a.abs().min(b.abs()) + 1e-12);
            if a != 0.0 && b != 0.0 && out != 0.0 {
                prop_assert_eq!(out < 0.0, (a < 0.0) != (b < 0.0));
            }
        }

        #[test]
        fn soft_xor_is_associative(a in -20.0f64..20.0, b in -20.0f64..20.0, c in -20.0f64..20.0) {
            let left = soft_xor(soft_xor(a, b), c);
            let right = soft_xor(a, soft_xor(b, c));
            prop_assert!((left - right).abs() <= 1e-9);
        }

        #[test]
        fn soft_xor_identity_and_annihilator(a in -50.0f64..50.0) {
            prop_assert_eq!(soft_xor(a, f64::INFINITY), a);
            prop_assert_eq!(soft_xor(a, 0.0), 0.0);
        }

        #[test]
        fn lsigmoid_reflection(x in -40.0f64..40.0) {
            // lsigmoid(-x) = lsigmoid(x) + x
            let lhs = lsigmoid(-x);
            let rhs = lsigmoid(x) + x;
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }

        #[test]
        fn fht_involution_up_to_scale(v in proptest::collection::vec(-8.0f64..8.0, 8)) {
            let mut w = v.clone();
            fht(&mut w).unwrap();
            fht(&mut w).unwrap();
            for (a, b) in w.iter().zip(&v) {
                prop_assert!((a - 8.0 * b).abs() < 1e-9);
            }
        }
    }
}
