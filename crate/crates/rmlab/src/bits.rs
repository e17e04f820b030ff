//! Binary vectors over F2.
//!
//! `BitVec` stores one byte per bit. External text form is an ASCII 0/1
//! string; `to_words_msb` provides a packed form whose word-sequence order
//! agrees with lexicographic order on the bits.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A vector over F2. Derived ordering is lexicographic with 0 < 1.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitVec {
    bits: Vec<u8>,
}

impl BitVec {
    /// The empty vector.
    pub fn empty() -> Self {
        BitVec { bits: Vec::new() }
    }

    /// The all-zero vector of length `n`.
    pub fn zeros(n: usize) -> Self {
        BitVec { bits: vec![0; n] }
    }

    /// Builds from explicit bits; every entry must be 0 or 1.
    pub fn from_bits(bits: impl Into<Vec<u8>>) -> Self {
        let bits = bits.into();
        assert!(bits.iter().all(|&b| b <= 1), "entries must be 0 or 1");
        BitVec { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, bit: u8) {
        debug_assert!(bit <= 1);
        self.bits[i] = bit;
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.bits.push(bit);
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().copied()
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// XOR of all entries.
    pub fn parity(&self) -> u8 {
        self.bits.iter().fold(0, |p, &b| p ^ b)
    }

    /// Elementwise XOR. Panics on length mismatch.
    pub fn xor(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len(), other.len(), "xor length mismatch");
        BitVec {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        }
    }

    /// Concatenation `(self | other)`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitVec { bits }
    }

    /// Splits into equal halves; errors on odd length.
    pub fn split_half(&self) -> Result<(BitVec, BitVec)> {
        if !self.len().is_multiple_of(2) {
            return Err(Error::OddLength(self.len()));
        }
        let half = self.len() / 2;
        Ok((
            BitVec::from_bits(&self.bits[..half]),
            BitVec::from_bits(&self.bits[half..]),
        ))
    }

    /// Packs into 64-bit words, bit `i` at word `i / 64`, position
    /// `63 - i % 64`. Comparing word sequences as integers matches the
    /// lexicographic order of the unpacked bits.
    pub fn to_words_msb(&self) -> Vec<u64> {
        let mut words = vec![0u64; self.len().div_ceil(64)];
        for (i, &b) in self.bits.iter().enumerate() {
            if b == 1 {
                words[i / 64] |= 1u64 << (63 - (i % 64));
            }
        }
        words
    }

    /// Inverse of [`to_words_msb`](Self::to_words_msb) for a known length.
    pub fn from_words_msb(words: &[u64], len: usize) -> Self {
        let mut bits = vec![0u8; len];
        for (i, bit) in bits.iter_mut().enumerate() {
            *bit = ((words[i / 64] >> (63 - (i % 64))) & 1) as u8;
        }
        BitVec { bits }
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

// Debug delegates to Display so codewords read as 0/1 strings in asserts.
impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return Err(Error::BadBitString(s.to_string())),
            }
        }
        Ok(BitVec { bits })
    }
}

impl std::ops::Index<usize> for BitVec {
    type Output = u8;

    fn index(&self, i: usize) -> &u8 {
        &self.bits[i]
    }
}
