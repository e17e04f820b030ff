//! The recursive Plotkin-split decoders: plain GMC/SC decoding, automorphism
//! ensemble (AE) decoding at the root, and constituent-automorphism (CA)
//! decoding that applies AE locally at selected composite vertices.
//!
//! A CA decoder is configured by an automorphism distribution: a set of
//! `(address, size)` pairs naming composite vertices of the decoding tree
//! and the ensemble size used there. The empty distribution is the GMC
//! decoder; `{(root, s)}` is the conventional AE decoder of size `s`.

use std::collections::{BTreeMap, HashMap};

use crate::automorphism::AutomorphismEnsemble;
use crate::bits::BitVec;
use crate::channel::RngStream;
use crate::decode::leaf::decode_leaf;
use crate::llr::{add_llr, analog_weight, soft_xor_vec};
use crate::rm::{plotkin_join, Address, AtomSet, RmCode};
use crate::{Error, Result};

/// Ensemble sizes per decoding-tree address. Stored sizes are always at
/// least 2; absent addresses use the implied identity ensemble.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AutomorphismDistribution {
    sizes: BTreeMap<Address, usize>,
}

impl AutomorphismDistribution {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds from `(address, size)` pairs. Sizes below 2 and duplicate
    /// addresses are rejected.
    pub fn new(pairs: impl IntoIterator<Item = (Address, usize)>) -> Result<Self> {
        let mut sizes = BTreeMap::new();
        for (addr, size) in pairs {
            if size < 2 {
                return Err(Error::BadDistribution(
                    addr.to_string(),
                    format!("ensemble size {size} must be at least 2"),
                ));
            }
            if sizes.insert(addr.clone(), size).is_some() {
                return Err(Error::BadDistribution(
                    addr.to_string(),
                    "duplicate address".into(),
                ));
            }
        }
        Ok(AutomorphismDistribution { sizes })
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Address, usize)> {
        self.sizes.iter().map(|(a, &s)| (a, s))
    }

    /// Ensemble size at the root of this (sub)distribution; 1 when absent.
    pub fn size_at_root(&self) -> usize {
        self.sizes.get(&Address::root()).copied().unwrap_or(1)
    }

    /// The child distribution: entries whose address starts with `bit`,
    /// with that leading bit stripped.
    pub fn child(&self, bit: u8) -> AutomorphismDistribution {
        let sizes = self
            .sizes
            .iter()
            .filter_map(|(addr, &size)| {
                let (first, rest) = addr.split_first()?;
                (first == bit).then_some((rest, size))
            })
            .collect();
        AutomorphismDistribution { sizes }
    }

    /// Checks that every address names a composite vertex of the decoding
    /// tree of `code` under the standard atom set.
    pub fn validate_for(&self, code: RmCode) -> Result<()> {
        for (addr, _) in self.pairs() {
            if addr.len() > code.log_length() {
                return Err(Error::BadDistribution(
                    addr.to_string(),
                    "address is deeper than the tree".into(),
                ));
            }
            // Every prefix must be composite: an atom prefix means the
            // address dives inside a leaf (or names one).
            let mut prefix = Address::root();
            let mut rest = Some(addr.clone());
            loop {
                let label = prefix.label_in(code);
                if AtomSet::TrivialAndFirstOrder.contains(label) {
                    let reason = if prefix == *addr {
                        format!("{label} is a leaf of the decoding tree")
                    } else {
                        format!("not in the decoding tree: prefix {prefix} is a leaf ({label})")
                    };
                    return Err(Error::BadDistribution(addr.to_string(), reason));
                }
                match rest.take().and_then(|a| a.split_first()) {
                    None => break,
                    Some((bit, tail)) => {
                        prefix = prefix.child(bit);
                        rest = Some(tail);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Per-address materialized ensembles for a CA decoder.
#[derive(Clone, Debug, Default)]
pub struct CaEnsembles {
    map: HashMap<Address, AutomorphismEnsemble>,
}

impl CaEnsembles {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_map(map: HashMap<Address, AutomorphismEnsemble>) -> Self {
        CaEnsembles { map }
    }

    pub fn insert(&mut self, addr: Address, ensemble: AutomorphismEnsemble) {
        self.map.insert(addr, ensemble);
    }

    pub fn get(&self, addr: &Address) -> Option<&AutomorphismEnsemble> {
        self.map.get(addr)
    }

    /// Samples one ensemble per distribution entry from the affine group of
    /// the entry's own log-length. Deterministic in the stream; entries are
    /// drawn in address order.
    pub fn sample_for(
        code: RmCode,
        dist: &AutomorphismDistribution,
        stream: RngStream,
    ) -> Result<Self> {
        dist.validate_for(code)?;
        let mut rng = stream.rng();
        let mut map = HashMap::new();
        for (addr, size) in dist.pairs() {
            let m = code.log_length() - addr.len();
            map.insert(
                addr.clone(),
                AutomorphismEnsemble::sample(m, size, &mut rng)?,
            );
        }
        Ok(CaEnsembles { map })
    }
}

/// GMC (successive cancellation) decoding over the standard atom set.
pub fn decode_gmc(code: RmCode, l: &[f64]) -> Result<BitVec> {
    decode_gmc_with(code, l, AtomSet::TrivialAndFirstOrder)
}

/// GMC decoding with an explicit atom set.
pub fn decode_gmc_with(code: RmCode, l: &[f64], atoms: AtomSet) -> Result<BitVec> {
    check_len(code, l)?;
    Ok(ca_rec(
        code,
        l,
        &AutomorphismDistribution::empty(),
        &CaEnsembles::empty(),
        &Address::root(),
        atoms,
    ))
}

/// AE decoding: each ensemble permutation decodes a permuted copy with the
/// GMC decoder, and the candidate of least analog weight wins (lowest
/// ensemble index on ties).
pub fn decode_ae(code: RmCode, l: &[f64], ensemble: &AutomorphismEnsemble) -> Result<BitVec> {
    check_len(code, l)?;
    if ensemble.log_length() != code.log_length() {
        return Err(Error::LengthMismatch {
            expected: code.length(),
            got: 1 << ensemble.log_length(),
        });
    }
    let mut best: Option<(BitVec, f64)> = None;
    for perm in ensemble.perms() {
        let permuted = perm.apply(l);
        let decoded = decode_gmc(code, &permuted)?;
        let candidate = perm.apply_inverse_bits(&decoded);
        let weight = analog_weight(&candidate, l)?;
        if best.as_ref().is_none_or(|(_, w)| weight < *w) {
            best = Some((candidate, weight));
        }
    }
    Ok(best.expect("ensembles are nonempty").0)
}

/// CA decoding of `code` under an automorphism distribution, with one fixed
/// ensemble per addressed vertex.
pub fn decode_ca(
    code: RmCode,
    l: &[f64],
    dist: &AutomorphismDistribution,
    ensembles: &CaEnsembles,
) -> Result<BitVec> {
    check_len(code, l)?;
    dist.validate_for(code)?;
    for (addr, size) in dist.pairs() {
        let ensemble = ensembles
            .get(addr)
            .ok_or_else(|| Error::MissingEnsemble(addr.to_string()))?;
        if ensemble.len() != size {
            return Err(Error::BadDistribution(
                addr.to_string(),
                format!("ensemble size {} does not match {size}", ensemble.len()),
            ));
        }
        if ensemble.log_length() != code.log_length() - addr.len() {
            return Err(Error::BadDistribution(
                addr.to_string(),
                "ensemble acts on the wrong length".into(),
            ));
        }
    }
    Ok(ca_rec(
        code,
        l,
        dist,
        ensembles,
        &Address::root(),
        AtomSet::TrivialAndFirstOrder,
    ))
}

fn check_len(code: RmCode, l: &[f64]) -> Result<()> {
    if l.len() != code.length() {
        return Err(Error::LengthMismatch {
            expected: code.length(),
            got: l.len(),
        });
    }
    Ok(())
}

/// One Plotkin split: decode the soft-XOR branch, fold its decision into
/// the left branch, recurse, and recombine.
fn decode_split(
    code: RmCode,
    l: &[f64],
    dist: &AutomorphismDistribution,
    ensembles: &CaEnsembles,
    addr: &Address,
    atoms: AtomSet,
) -> BitVec {
    let half = l.len() / 2;
    let (left, right) = l.split_at(half);
    let v_llr = soft_xor_vec(left, right);
    let v = ca_rec(
        code.right_constituent(),
        &v_llr,
        &dist.child(1),
        ensembles,
        &addr.child(1),
        atoms,
    );
    let u_llr: Vec<f64> = (0..half)
        .map(|i| add_llr(left[i], if v.get(i) == 1 { -right[i] } else { right[i] }))
        .collect();
    let u = ca_rec(
        code.left_constituent(),
        &u_llr,
        &dist.child(0),
        ensembles,
        &addr.child(0),
        atoms,
    );
    plotkin_join(&u, &v)
}

fn ca_rec(
    code: RmCode,
    l: &[f64],
    dist: &AutomorphismDistribution,
    ensembles: &CaEnsembles,
    addr: &Address,
    atoms: AtomSet,
) -> BitVec {
    if atoms.contains(code) {
        return decode_leaf(code, l);
    }
    let size = dist.size_at_root();
    if size == 1 {
        return decode_split(code, l, dist, ensembles, addr, atoms);
    }
    let ensemble = ensembles.get(addr).expect("validated before recursion");
    let mut best: Option<(BitVec, f64)> = None;
    for perm in ensemble.perms() {
        let permuted = perm.apply(l);
        let decoded = decode_split(code, &permuted, dist, ensembles, addr, atoms);
        let candidate = perm.apply_inverse_bits(&decoded);
        let weight = analog_weight(&candidate, l).expect("equal lengths");
        if best.as_ref().is_none_or(|(_, w)| weight < *w) {
            best = Some((candidate, weight));
        }
    }
    best.expect("ensembles are nonempty").0
}
