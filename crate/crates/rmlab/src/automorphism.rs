//! Coordinate permutations from the general affine group `GA(m, F2)`.
//!
//! A pair `(A, b)` with `A` an invertible `m x m` bit matrix acts on the
//! points of `F2^m` by `z -> A z XOR b`; reading points as coordinates of a
//! length-`2^m` vector (variable `x0` in the most significant index bit, as
//! in the encoder) gives a coordinate permutation that maps codewords of
//! every nontrivial RM code to codewords.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::bits::BitVec;
use crate::{Error, Result};

/// A permutation of `[n]` stored as an index array, acting on vectors by
/// `(pi v)[i] = v[pi(i)]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Permutation {
    map: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n as u32).collect(),
        }
    }

    /// Builds from an explicit index array; panics unless it is a bijection.
    pub fn from_map(map: Vec<u32>) -> Self {
        let mut seen = vec![false; map.len()];
        for &i in &map {
            assert!(
                (i as usize) < map.len() && !seen[i as usize],
                "index array is not a bijection"
            );
            seen[i as usize] = true;
        }
        Permutation { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn index(&self, i: usize) -> usize {
        self.map[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `(pi v)[i] = v[pi(i)]`. Panics on length mismatch.
    pub fn apply<T: Copy>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.len(), "permutation length mismatch");
        self.map.iter().map(|&i| v[i as usize]).collect()
    }

    /// Inverse action: `apply_inverse(pi, apply(pi, v)) = v`.
    pub fn apply_inverse<T: Copy + Default>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.len(), "permutation length mismatch");
        let mut out = vec![T::default(); v.len()];
        for (i, &j) in self.map.iter().enumerate() {
            out[j as usize] = v[i];
        }
        out
    }

    pub fn apply_bits(&self, v: &BitVec) -> BitVec {
        BitVec::from_bits(self.apply(v.as_slice()))
    }

    pub fn apply_inverse_bits(&self, v: &BitVec) -> BitVec {
        BitVec::from_bits(self.apply_inverse(v.as_slice()))
    }

    /// Function composition `(self . inner)(i) = self(inner(i))`, matching
    /// `to_permutation` of composed affine maps.
    pub fn compose(&self, inner: &Permutation) -> Permutation {
        assert_eq!(self.len(), inner.len());
        Permutation {
            map: inner.map.iter().map(|&i| self.map[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = vec![0u32; self.len()];
        for (i, &j) in self.map.iter().enumerate() {
            map[j as usize] = i as u32;
        }
        Permutation { map }
    }
}

/// An element of `GA(m, F2)`: invertible matrix `A` and offset `b`.
///
/// Rows and the offset are packed with bit `t` corresponding to variable
/// `x_t` (row `t` of `A z` decides point bit `t`).
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AffinePermutation {
    m: u32,
    #[serde(serialize_with = "hex_rows")]
    rows: Vec<u32>,
    #[serde(serialize_with = "hex_word")]
    b: u32,
}

fn hex_rows<S: serde::Serializer>(rows: &[u32], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rows.iter().map(|r| format!("{r:x}")))
}

fn hex_word<S: serde::Serializer>(w: &u32, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{w:x}"))
}

impl fmt::Debug for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffinePermutation(m={}, rows=[", self.m)?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r:x}")?;
        }
        write!(f, "], b={:x})", self.b)
    }
}

fn rank_gf2(rows: &[u32]) -> u32 {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for col in 0..32 {
        if let Some(pivot) = (rank..rows.len()).find(|&i| rows[i] >> col & 1 == 1) {
            rows.swap(rank, pivot);
            for i in 0..rows.len() {
                if i != rank && rows[i] >> col & 1 == 1 {
                    rows[i] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank as u32
}

impl AffinePermutation {
    /// Builds from explicit rows (bit `t` of `rows[s]` is `A[s][t]`) and
    /// offset; errors unless `A` is invertible.
    pub fn new(m: u32, rows: Vec<u32>, b: u32) -> Result<Self> {
        assert_eq!(rows.len(), m as usize);
        let masked: Vec<u32> = rows.iter().map(|r| r & mask(m)).collect();
        if rank_gf2(&masked) != m {
            return Err(Error::BadDistribution(
                "affine".into(),
                "matrix is singular".into(),
            ));
        }
        Ok(AffinePermutation {
            m,
            rows: masked,
            b: b & mask(m),
        })
    }

    pub fn identity(m: u32) -> Self {
        AffinePermutation {
            m,
            rows: (0..m).map(|t| 1 << t).collect(),
            b: 0,
        }
    }

    pub fn log_length(&self) -> u32 {
        self.m
    }

    pub fn is_identity(&self) -> bool {
        self.b == 0 && self.rows.iter().enumerate().all(|(t, &r)| r == 1 << t)
    }

    /// The coordinate permutation `pi(i) = index(A bits(i) XOR b)` where
    /// `bits(i)` lists the point with variable `x0` most significant.
    pub fn to_permutation(&self) -> Permutation {
        let n = 1usize << self.m;
        let mut map = Vec::with_capacity(n);
        for i in 0..n as u32 {
            let z = reverse_low_bits(i, self.m);
            let mut y = self.b;
            for (t, &row) in self.rows.iter().enumerate() {
                y ^= ((row & z).count_ones() & 1) << t;
            }
            map.push(reverse_low_bits(y, self.m));
        }
        Permutation { map }
    }

    /// Affine composition `(self . other)(z) = A1 (A2 z XOR b2) XOR b1`.
    pub fn compose(&self, other: &AffinePermutation) -> AffinePermutation {
        assert_eq!(self.m, other.m);
        let mul_vec = |rows: &[u32], v: u32| -> u32 {
            rows.iter().enumerate().fold(0, |acc, (t, &row)| {
                acc ^ (((row & v).count_ones() & 1) << t)
            })
        };
        // Row s of A1*A2: bit t = sum_j A1[s][j] A2[j][t]; build per column.
        let mut rows = vec![0u32; self.m as usize];
        for t in 0..self.m {
            let col: u32 =
                (0..self.m).fold(0, |acc, j| acc | (((other.rows[j as usize] >> t) & 1) << j));
            let image = mul_vec(&self.rows, col);
            for (s, row) in rows.iter_mut().enumerate() {
                *row |= ((image >> s) & 1) << t;
            }
        }
        AffinePermutation {
            m: self.m,
            rows,
            b: mul_vec(&self.rows, other.b) ^ self.b,
        }
    }

    /// Matrix rows and offset as lowercase hex strings, for run logs.
    pub fn to_hex(&self) -> (Vec<String>, String) {
        (
            self.rows.iter().map(|r| format!("{r:x}")).collect(),
            format!("{:x}", self.b),
        )
    }
}

fn mask(m: u32) -> u32 {
    if m >= 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

fn reverse_low_bits(x: u32, m: u32) -> u32 {
    if m == 0 {
        0
    } else {
        x.reverse_bits() >> (32 - m)
    }
}

/// Uniform sample from `GA(m, F2)`: rejection sampling on matrix rank, with
/// a uniform offset.
pub fn sample_affine(m: u32, rng: &mut impl Rng) -> AffinePermutation {
    assert!((1..=31).contains(&m), "m must be in 1..=31");
    loop {
        let rows: Vec<u32> = (0..m).map(|_| rng.random::<u32>() & mask(m)).collect();
        if rank_gf2(&rows) == m {
            let b = rng.random::<u32>() & mask(m);
            return AffinePermutation { m, rows, b };
        }
    }
}

/// Number of elements of `GA(m, F2)`, saturating.
pub fn ga_order(m: u32) -> u128 {
    let mut order: u128 = 1u128 << m; // translations
    for i in 0..m {
        let factor = (1u128 << m) - (1u128 << i);
        order = order.saturating_mul(factor);
    }
    order
}

/// A set of pairwise-distinct affine maps with their materialized
/// coordinate permutations.
#[derive(Clone, Debug)]
pub struct AutomorphismEnsemble {
    affines: Vec<AffinePermutation>,
    perms: Vec<Permutation>,
}

impl AutomorphismEnsemble {
    /// The size-1 ensemble holding only the identity.
    pub fn identity(m: u32) -> Self {
        Self::from_affines(vec![AffinePermutation::identity(m)])
    }

    pub fn from_affines(affines: Vec<AffinePermutation>) -> Self {
        let perms = affines
            .iter()
            .map(AffinePermutation::to_permutation)
            .collect();
        AutomorphismEnsemble { affines, perms }
    }

    /// Samples `size` pairwise-distinct maps; size 1 yields the identity by
    /// convention. Errors if `size` exceeds the group order.
    pub fn sample(m: u32, size: usize, rng: &mut impl Rng) -> Result<Self> {
        assert!(size >= 1);
        if size as u128 > ga_order(m) {
            return Err(Error::EnsembleTooLarge { m, size });
        }
        if size == 1 {
            return Ok(Self::identity(m));
        }
        let mut affines: Vec<AffinePermutation> = Vec::with_capacity(size);
        while affines.len() < size {
            let candidate = sample_affine(m, rng);
            if !affines.contains(&candidate) {
                affines.push(candidate);
            }
        }
        Ok(Self::from_affines(affines))
    }

    pub fn len(&self) -> usize {
        self.affines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.affines.is_empty()
    }

    pub fn log_length(&self) -> u32 {
        self.affines[0].log_length()
    }

    pub fn affines(&self) -> &[AffinePermutation] {
        &self.affines
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::RngStream;
    use crate::llr::analog_weight;
    use crate::rm::RmCode;

    #[test]
    fn identity_map_gives_identity_permutation() {
        let a = AffinePermutation::identity(3);
        assert!(a.to_permutation().is_identity());
    }

    #[test]
    fn translation_of_low_point_bit() {
        // m=2, A=I, b with only the x1 component set: flips the low index bit.
        let a = AffinePermutation::new(2, vec![0b01, 0b10], 0b10).unwrap();
        let p = a.to_permutation();
        assert_eq!(
            (0..4).map(|i| p.index(i)).collect::<Vec<_>>(),
            vec![1, 0, 3, 2]
        );
    }

    #[test]
    fn singular_matrix_is_rejected() {
        assert!(AffinePermutation::new(2, vec![0b11, 0b11], 0).is_err());
    }

    #[test]
    fn sampled_matrices_have_full_rank() {
        let mut rng = RngStream::new(5, 0).rng();
        for _ in 0..200 {
            let a = sample_affine(4, &mut rng);
            assert_eq!(rank_gf2(a.rows.as_slice()), 4);
        }
    }

    #[test]
    fn ga1_has_two_elements() {
        assert_eq!(ga_order(1), 2);
        let mut rng = RngStream::new(5, 1).rng();
        for _ in 0..20 {
            let a = sample_affine(1, &mut rng);
            assert_eq!(a.rows, vec![1]);
            assert!(a.b <= 1);
        }
        assert!(AutomorphismEnsemble::sample(1, 3, &mut rng).is_err());
        assert_eq!(
            AutomorphismEnsemble::sample(1, 2, &mut rng).unwrap().len(),
            2
        );
    }

    #[test]
    fn ga2_sampling_is_uniform() {
        // |GA(2, F2)| = 6 * 4 = 24; check cell counts within 3 sigma.
        assert_eq!(ga_order(2), 24);
        let mut rng = RngStream::new(17, 0).rng();
        let mut counts = std::collections::HashMap::new();
        let draws = 100_000;
        for _ in 0..draws {
            let a = sample_affine(2, &mut rng);
            *counts.entry((a.rows.clone(), a.b)).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 24);
        let expect = draws as f64 / 24.0;
        let sigma = (expect * (1.0 - 1.0 / 24.0)).sqrt();
        for &c in counts.values() {
            assert!((c as f64 - expect).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn permutation_round_trip_and_group_law() {
        let mut rng = RngStream::new(23, 0).rng();
        let v: Vec<f64> = (0..32).map(|i| i as f64).collect();
        for _ in 0..50 {
            let a = sample_affine(5, &mut rng);
            let p = a.to_permutation();
            assert_eq!(p.apply_inverse(&p.apply(&v)), v);
            assert_eq!(p.inverse().apply(&v), p.apply_inverse(&v));
        }
    }

    #[test]
    fn composition_commutes_with_materialization() {
        let mut rng = RngStream::new(29, 0).rng();
        for _ in 0..50 {
            let a1 = sample_affine(4, &mut rng);
            let a2 = sample_affine(4, &mut rng);
            let composed = a1.compose(&a2).to_permutation();
            let p = a1.to_permutation().compose(&a2.to_permutation());
            assert_eq!(composed, p);
        }
    }

    #[test]
    fn codewords_map_to_codewords() {
        let mut rng = RngStream::new(31, 0).rng();
        // Exhaustive over the codebook when it is small, randomized beyond.
        for (r, m) in [(1i32, 3u32), (1, 4), (2, 4), (2, 5), (3, 5)] {
            let code = RmCode::new(r, m);
            let k = code.dimension();
            for _ in 0..8 {
                let p = sample_affine(m, &mut rng).to_permutation();
                let messages: Vec<BitVec> = if k <= 16 {
                    (0..1u32 << k)
                        .map(|msg| {
                            BitVec::from_bits(
                                (0..k).map(|j| ((msg >> j) & 1) as u8).collect::<Vec<_>>(),
                            )
                        })
                        .collect()
                } else {
                    (0..64)
                        .map(|_| {
                            BitVec::from_bits(
                                (0..k).map(|_| rng.random_range(0..2u8)).collect::<Vec<_>>(),
                            )
                        })
                        .collect()
                };
                for msg in messages {
                    let c = code.encode(&msg).unwrap();
                    assert!(code.is_codeword(&p.apply_bits(&c)));
                    assert!(code.is_codeword(&p.apply_inverse_bits(&c)));
                }
            }
        }
    }

    #[test]
    fn analog_weight_is_permutation_invariant() {
        let mut rng = RngStream::new(37, 0).rng();
        let code = RmCode::new(2, 4);
        for _ in 0..50 {
            let a = sample_affine(4, &mut rng);
            let p = a.to_permutation();
            let msg = BitVec::from_bits(
                (0..code.dimension())
                    .map(|_| rng.random_range(0..2u8))
                    .collect::<Vec<_>>(),
            );
            let c = code.encode(&msg).unwrap();
            let l: Vec<f64> = (0..code.length())
                .map(|_| rng.random_range(-4.0..4.0))
                .collect();
            let w1 = analog_weight(&c, &l).unwrap();
            let w2 = analog_weight(&p.apply_bits(&c), &p.apply(&l)).unwrap();
            assert!((w1 - w2).abs() < 1e-12);
        }
    }

    #[test]
    fn affine_maps_serialize_as_hex() {
        let a = AffinePermutation::new(3, vec![0b001, 0b010, 0b100], 0b101).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            r#"{"m":3,"rows":["1","2","4"],"b":"5"}"#
        );
        assert_eq!(
            a.to_hex(),
            (vec!["1".into(), "2".into(), "4".into()], "5".into())
        );
    }

    #[test]
    fn ensembles_are_distinct_and_reproducible() {
        let e1 = AutomorphismEnsemble::sample(6, 4, &mut RngStream::new(3, 0).rng()).unwrap();
        let e2 = AutomorphismEnsemble::sample(6, 4, &mut RngStream::new(3, 0).rng()).unwrap();
        assert_eq!(e1.affines(), e2.affines());
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(e1.affines()[i], e1.affines()[j]);
            }
        }
        let single = AutomorphismEnsemble::sample(6, 1, &mut RngStream::new(3, 1).rng()).unwrap();
        assert!(single.affines()[0].is_identity());
    }
}
