//! Reed-Muller code algebra.
//!
//! An `RM(r, m)` codeword is the evaluation of an `m`-variate polynomial of
//! total degree at most `r` at all points of `F2^m` in lexicographic order,
//! with variable `x0` as the most significant bit of the point index.
//!
//! The message-to-monomial map fixes the monomial basis grouped by ascending
//! total degree and lexicographically within a degree
//! (`1; x0, ..., x_{m-1}; x0x1, x0x2, ...`).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::bits::BitVec;
use crate::{Error, Result};

/// A Reed-Muller code `RM(r, m)`: order `r` (may be negative) and
/// log-length `m >= 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RmCode {
    r: i32,
    m: u32,
}

impl RmCode {
    pub fn new(r: i32, m: u32) -> Self {
        RmCode { r, m }
    }

    pub fn order(&self) -> i32 {
        self.r
    }

    pub fn log_length(&self) -> u32 {
        self.m
    }

    /// Block length `n = 2^m`.
    pub fn length(&self) -> usize {
        1usize << self.m
    }

    /// Dimension `k(r, m) = sum_{i=0..r} C(m, i)`, clamped to 0 for `r < 0`
    /// and to `2^m` for `r >= m`.
    pub fn dimension(&self) -> usize {
        dimension(self.r, self.m)
    }

    /// Code rate `k / n`.
    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.length() as f64
    }

    /// Minimum Hamming distance `2^{m-r}`, defined for `0 <= r <= m`.
    pub fn min_distance(&self) -> Option<u64> {
        if self.r >= 0 && (self.r as u32) <= self.m {
            Some(1u64 << (self.m - self.r as u32))
        } else {
            None
        }
    }

    /// Trivial iff `r < 0`, `r = 0`, or `r >= m - 1`: the zero code, the
    /// repetition code, the single-parity-check code, or the whole space.
    pub fn is_trivial(&self) -> bool {
        self.r <= 0 || self.r >= self.m as i32 - 1
    }

    pub fn is_nontrivial(&self) -> bool {
        !self.is_trivial()
    }

    /// Left Plotkin constituent `RM(r, m-1)`.
    pub fn left_constituent(&self) -> RmCode {
        assert!(self.m >= 1, "length-1 code has no constituents");
        RmCode::new(self.r, self.m - 1)
    }

    /// Right Plotkin constituent `RM(r-1, m-1)`.
    pub fn right_constituent(&self) -> RmCode {
        assert!(self.m >= 1, "length-1 code has no constituents");
        RmCode::new(self.r - 1, self.m - 1)
    }

    /// Monomials of the generator in canonical order, each as a variable
    /// mask (bit `t` set means `x_t` is a factor).
    pub fn monomials(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.dimension());
        if self.r < 0 {
            return out;
        }
        let max_deg = (self.r as u32).min(self.m);
        for deg in 0..=max_deg {
            push_monomials_of_degree(self.m, deg, &mut out);
        }
        out
    }

    /// Generator rows in canonical monomial order.
    pub fn generator_rows(&self) -> Vec<BitVec> {
        self.monomials()
            .iter()
            .map(|&mono| eval_monomial(mono, self.m))
            .collect()
    }

    /// Encodes a message of length `k(r, m)`: the XOR of the generator rows
    /// selected by the message bits.
    pub fn encode(&self, message: &BitVec) -> Result<BitVec> {
        let k = self.dimension();
        if message.len() != k {
            return Err(Error::BadMessageLength {
                expected: k,
                got: message.len(),
            });
        }
        let mut out = BitVec::zeros(self.length());
        for (j, mono) in self.monomials().into_iter().enumerate() {
            if message.get(j) == 1 {
                out = out.xor(&eval_monomial(mono, self.m));
            }
        }
        Ok(out)
    }

    /// Membership test against the row space of the generator, via a cached
    /// reduced echelon basis.
    pub fn is_codeword(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.length(), "is_codeword length mismatch");
        let basis = echelon_basis(*self);
        let mut words = v.to_words_msb();
        for &(pivot, ref row) in basis.iter() {
            if word_bit(&words, pivot) {
                for (w, r) in words.iter_mut().zip(row) {
                    *w ^= r;
                }
            }
        }
        words.iter().all(|&w| w == 0)
    }
}

impl fmt::Display for RmCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RM({},{})", self.r, self.m)
    }
}

impl fmt::Debug for RmCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `k(r, m)`: the binomial sum, with the degenerate clamps.
pub fn dimension(r: i32, m: u32) -> usize {
    if r < 0 {
        return 0;
    }
    if r as u32 >= m {
        return 1usize << m;
    }
    let mut k = 1u64; // C(m, 0)
    let mut binom = 1u64;
    for i in 1..=r as u64 {
        binom = binom * (m as u64 - i + 1) / i;
        k += binom;
    }
    k as usize
}

/// Evaluation of one monomial at all points in lexicographic order.
///
/// Point index `i` carries `x0` in its most significant bit, so the
/// monomial's variable mask is mirrored into an index mask and the entry is
/// 1 exactly when all masked index bits are set.
fn eval_monomial(mono: u32, m: u32) -> BitVec {
    let mut point_mask = 0usize;
    for t in 0..m {
        if mono & (1 << t) != 0 {
            point_mask |= 1 << (m - 1 - t);
        }
    }
    let mut bits = vec![0u8; 1 << m];
    for (i, b) in bits.iter_mut().enumerate() {
        *b = u8::from(i & point_mask == point_mask);
    }
    BitVec::from_bits(bits)
}

fn push_monomials_of_degree(m: u32, deg: u32, out: &mut Vec<u32>) {
    // Emits variable subsets of the given size in lexicographic order of
    // their sorted index tuples: x0x1 < x0x2 < ... < x1x2 < ...
    fn rec(m: u32, next: u32, remaining: u32, acc: u32, out: &mut Vec<u32>) {
        if remaining == 0 {
            out.push(acc);
            return;
        }
        for t in next..=m - remaining {
            rec(m, t + 1, remaining - 1, acc | (1 << t), out);
        }
    }
    if deg == 0 {
        out.push(0);
    } else if deg <= m {
        rec(m, 0, deg, 0, out);
    }
}

/// Plotkin decomposition `c = (u | u XOR v)`: returns `(u, v)` where `u` is
/// the left half and `v` the XOR of the halves.
pub fn plotkin_split(c: &BitVec) -> Result<(BitVec, BitVec)> {
    let (left, right) = c.split_half()?;
    let v = left.xor(&right);
    Ok((left, v))
}

/// Inverse of [`plotkin_split`]: `(u | u XOR v)`.
pub fn plotkin_join(u: &BitVec, v: &BitVec) -> BitVec {
    u.concat(&u.xor(v))
}

// ---------------------------------------------------------------------------
// Membership basis cache
// ---------------------------------------------------------------------------

type Echelon = Vec<(usize, Vec<u64>)>;
type EchelonCache = Mutex<HashMap<(i32, u32), Arc<Echelon>>>;

fn word_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (63 - (i % 64)) & 1 == 1
}

fn echelon_basis(code: RmCode) -> Arc<Echelon> {
    static CACHE: OnceLock<EchelonCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(basis) = cache.lock().unwrap().get(&(code.r, code.m)) {
        return Arc::clone(basis);
    }
    let rows: Vec<Vec<u64>> = code
        .generator_rows()
        .iter()
        .map(BitVec::to_words_msb)
        .collect();
    let mut basis: Echelon = Vec::new();
    for mut row in rows {
        for &(pivot, ref b) in basis.iter() {
            if word_bit(&row, pivot) {
                for (w, r) in row.iter_mut().zip(b) {
                    *w ^= r;
                }
            }
        }
        if let Some(word) = row.iter().position(|&w| w != 0) {
            let pivot = word * 64 + row[word].leading_zeros() as usize;
            basis.push((pivot, row));
        }
    }
    basis.sort_by_key(|&(p, _)| p);
    let basis = Arc::new(basis);
    cache
        .lock()
        .unwrap()
        .insert((code.r, code.m), Arc::clone(&basis));
    basis
}

// ---------------------------------------------------------------------------
// Decoding-tree addresses
// ---------------------------------------------------------------------------

/// Address of a vertex in a decoding tree. The root has the empty address;
/// the left child of `a` is `(a | 0)` and the right child is `(a | 1)`.
///
/// In text form the root is written `-`; other addresses are nonempty 0/1
/// strings.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address(String);

impl Address {
    pub fn root() -> Self {
        Address(String::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Hamming weight: the number of right turns.
    pub fn weight(&self) -> u32 {
        self.0.bytes().filter(|&b| b == b'1').count() as u32
    }

    pub fn child(&self, bit: u8) -> Address {
        debug_assert!(bit <= 1);
        let mut s = self.0.clone();
        s.push(if bit == 0 { '0' } else { '1' });
        Address(s)
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.bytes().map(|b| b - b'0')
    }

    /// Splits off the leading bit; `None` at the root.
    pub fn split_first(&self) -> Option<(u8, Address)> {
        let mut bytes = self.0.bytes();
        let first = bytes.next()? - b'0';
        Some((first, Address(self.0[1..].to_string())))
    }

    /// The all-ones address of a given depth (the rightmost vertex).
    pub fn rightmost(depth: u32) -> Address {
        Address("1".repeat(depth as usize))
    }

    /// Label of this vertex in a tree rooted at `code`:
    /// `(r - wt(a), m - len(a))`.
    pub fn label_in(&self, code: RmCode) -> RmCode {
        RmCode::new(
            code.order() - self.weight() as i32,
            code.log_length() - self.len(),
        )
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "-")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl serde::Serialize for Address {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Address {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Address {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "-" || s.is_empty() {
            return Ok(Address::root());
        }
        if s.bytes().all(|b| b == b'0' || b == b'1') {
            Ok(Address(s.to_string()))
        } else {
            Err(Error::BadAddress(s.to_string()))
        }
    }
}

// ---------------------------------------------------------------------------
// Atom sets and the decoding tree
// ---------------------------------------------------------------------------

/// Family of constituent codes decoded directly by leaf decoders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomSet {
    /// Trivial plus first-order codes: labels with `r <= 1` or `r >= m - 1`.
    TrivialAndFirstOrder,
    /// Length-1 codes only, so the decoding tree is the full Plotkin tree.
    LengthOne,
}

impl AtomSet {
    pub fn contains(self, code: RmCode) -> bool {
        let (r, m) = (code.order(), code.log_length() as i32);
        match self {
            AtomSet::TrivialAndFirstOrder => r <= 1 || r >= m - 1,
            AtomSet::LengthOne => m == 0,
        }
    }
}

/// Vertex of a decoding tree: composite labels are internal, atom labels
/// are leaves, and every vertex carries its address.
#[derive(Clone, Debug)]
pub struct TreeNode {
    pub address: Address,
    pub code: RmCode,
    pub children: Option<Box<(TreeNode, TreeNode)>>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    /// All vertices in pre-order (self, left subtree, right subtree).
    pub fn iter(&self) -> Vec<&TreeNode> {
        let mut out = vec![self];
        if let Some(children) = &self.children {
            out.extend(children.0.iter());
            out.extend(children.1.iter());
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.iter().len()
    }

    pub fn internal_addresses(&self) -> Vec<Address> {
        self.iter()
            .into_iter()
            .filter(|n| !n.is_leaf())
            .map(|n| n.address.clone())
            .collect()
    }

    pub fn leaf_addresses(&self) -> Vec<Address> {
        self.iter()
            .into_iter()
            .filter(|n| n.is_leaf())
            .map(|n| n.address.clone())
            .collect()
    }

    pub fn find(&self, address: &Address) -> Option<&TreeNode> {
        self.iter().into_iter().find(|n| &n.address == address)
    }
}

/// Builds the decoding tree of `code` under the given atom set.
pub fn decoding_tree(code: RmCode, atoms: AtomSet) -> TreeNode {
    fn build(code: RmCode, address: Address, atoms: AtomSet) -> TreeNode {
        if atoms.contains(code) {
            return TreeNode {
                address,
                code,
                children: None,
            };
        }
        let left = build(code.left_constituent(), address.child(0), atoms);
        let right = build(code.right_constituent(), address.child(1), atoms);
        TreeNode {
            address,
            code,
            children: Some(Box::new((left, right))),
        }
    }
    build(code, Address::root(), atoms)
}

/// The all-ones-address vertices of the tree that are composite with
/// respect to the standard atom set, outermost first.
pub fn rightmost_composite_addresses(code: RmCode) -> Vec<Address> {
    let mut out = Vec::new();
    let mut depth = 0;
    loop {
        let addr = Address::rightmost(depth);
        let label = addr.label_in(code);
        if AtomSet::TrivialAndFirstOrder.contains(label) {
            return out;
        }
        out.push(addr);
        depth += 1;
    }
}
