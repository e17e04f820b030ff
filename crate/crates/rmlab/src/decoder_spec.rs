//! Decoder selection strings and prepared decoder instances.
//!
//! Grammar: `gmc` | `ml` | `scl:<int>` | `ae:<int>` |
//! `ca:{(<addr>,<int>)(,...)}` where `<addr>` is a nonempty 0/1 string or
//! `-` for the root.

use std::fmt;
use std::str::FromStr;

use crate::automorphism::AutomorphismEnsemble;
use crate::bits::BitVec;
use crate::channel::RngStream;
use crate::decode::{
    decode_ae, decode_ca, decode_gmc, decode_ml, decode_scl, AutomorphismDistribution, CaEnsembles,
};
use crate::rm::{Address, RmCode};
use crate::{Error, Result};

/// Parsed decoder selection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecoderSpec {
    Gmc,
    Ml,
    Scl(usize),
    Ae(usize),
    /// Pairs are kept sorted by address; sizes are at least 2.
    Ca(Vec<(Address, usize)>),
}

impl FromStr for DecoderSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::BadDecoderSpec(s.to_string(), why.to_string());
        match s {
            "gmc" => return Ok(DecoderSpec::Gmc),
            "ml" => return Ok(DecoderSpec::Ml),
            _ => {}
        }
        if let Some(arg) = s.strip_prefix("scl:") {
            let size: usize = arg
                .parse()
                .map_err(|_| bad("list size must be an integer"))?;
            if size < 2 {
                return Err(bad("list size must be at least 2"));
            }
            return Ok(DecoderSpec::Scl(size));
        }
        if let Some(arg) = s.strip_prefix("ae:") {
            let size: usize = arg
                .parse()
                .map_err(|_| bad("ensemble size must be an integer"))?;
            if size < 1 {
                return Err(bad("ensemble size must be at least 1"));
            }
            return Ok(DecoderSpec::Ae(size));
        }
        if let Some(arg) = s.strip_prefix("ca:") {
            let inner = arg
                .strip_prefix('{')
                .and_then(|a| a.strip_suffix('}'))
                .ok_or_else(|| bad("expected ca:{(addr,size),...}"))?;
            let mut pairs = Vec::new();
            if !inner.trim().is_empty() {
                let tokens: Vec<&str> = inner.split(',').map(str::trim).collect();
                if !tokens.len().is_multiple_of(2) {
                    return Err(bad("expected (addr,size) pairs"));
                }
                for chunk in tokens.chunks(2) {
                    let addr_str = chunk[0]
                        .strip_prefix('(')
                        .ok_or_else(|| bad("pair must start with '('"))?;
                    let size_str = chunk[1]
                        .strip_suffix(')')
                        .ok_or_else(|| bad("pair must end with ')'"))?;
                    let addr: Address = addr_str
                        .parse()
                        .map_err(|_| bad("address must be '-' or a 0/1 string"))?;
                    let size: usize = size_str
                        .parse()
                        .map_err(|_| bad("ensemble size must be an integer"))?;
                    pairs.push((addr, size));
                }
            }
            // Canonical order plus the size/duplicate checks.
            let dist = AutomorphismDistribution::new(pairs)
                .map_err(|e| Error::BadDecoderSpec(s.to_string(), e.to_string()))?;
            return Ok(DecoderSpec::Ca(
                dist.pairs().map(|(a, n)| (a.clone(), n)).collect(),
            ));
        }
        Err(bad("unknown decoder"))
    }
}

impl fmt::Display for DecoderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoderSpec::Gmc => write!(f, "gmc"),
            DecoderSpec::Ml => write!(f, "ml"),
            DecoderSpec::Scl(size) => write!(f, "scl:{size}"),
            DecoderSpec::Ae(size) => write!(f, "ae:{size}"),
            DecoderSpec::Ca(pairs) => {
                write!(f, "ca:{{")?;
                for (i, (addr, size)) in pairs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "({addr},{size})")?;
                }
                write!(f, "}}")
            }
        }
    }
}

enum Prepared {
    Gmc,
    Ml,
    Scl(usize),
    Ae(AutomorphismEnsemble),
    Ca {
        dist: AutomorphismDistribution,
        ensembles: CaEnsembles,
    },
}

/// A decoder instance bound to a code, with any ensembles materialized once
/// so repeated decodes are deterministic and cheap to share across threads.
pub struct Decoder {
    code: RmCode,
    spec: DecoderSpec,
    prepared: Prepared,
}

impl Decoder {
    /// Validates the spec against the code and materializes ensembles from
    /// the given stream.
    pub fn prepare(code: RmCode, spec: &DecoderSpec, stream: RngStream) -> Result<Decoder> {
        let prepared = match spec {
            DecoderSpec::Gmc => Prepared::Gmc,
            DecoderSpec::Ml => {
                let k = code.dimension();
                if k > 24 {
                    return Err(Error::MlDimensionGuard(k));
                }
                Prepared::Ml
            }
            DecoderSpec::Scl(size) => {
                if code.order() < 0 {
                    return Err(Error::NegativeOrder(code.order()));
                }
                if *size < 2 {
                    return Err(Error::ListSizeTooSmall(*size));
                }
                Prepared::Scl(*size)
            }
            DecoderSpec::Ae(size) => Prepared::Ae(AutomorphismEnsemble::sample(
                code.log_length(),
                *size,
                &mut stream.rng(),
            )?),
            DecoderSpec::Ca(pairs) => {
                let dist = AutomorphismDistribution::new(pairs.clone())?;
                dist.validate_for(code)?;
                let ensembles = CaEnsembles::sample_for(code, &dist, stream)?;
                Prepared::Ca { dist, ensembles }
            }
        };
        Ok(Decoder {
            code,
            spec: spec.clone(),
            prepared,
        })
    }

    pub fn code(&self) -> RmCode {
        self.code
    }

    pub fn spec(&self) -> &DecoderSpec {
        &self.spec
    }

    pub fn decode(&self, l: &[f64]) -> Result<BitVec> {
        match &self.prepared {
            Prepared::Gmc => decode_gmc(self.code, l),
            Prepared::Ml => Ok(decode_ml(self.code, l)?.codeword),
            Prepared::Scl(size) => decode_scl(self.code, l, *size),
            Prepared::Ae(ensemble) => decode_ae(self.code, l, ensemble),
            Prepared::Ca { dist, ensembles } => decode_ca(self.code, l, dist, ensembles),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_grammar() {
        assert_eq!("gmc".parse::<DecoderSpec>().unwrap(), DecoderSpec::Gmc);
        assert_eq!("ml".parse::<DecoderSpec>().unwrap(), DecoderSpec::Ml);
        assert_eq!("scl:4".parse::<DecoderSpec>().unwrap(), DecoderSpec::Scl(4));
        assert_eq!("ae:6".parse::<DecoderSpec>().unwrap(), DecoderSpec::Ae(6));
        let ca: DecoderSpec = "ca:{(-,2),(1,3)}".parse().unwrap();
        assert_eq!(
            ca,
            DecoderSpec::Ca(vec![(Address::root(), 2), ("1".parse().unwrap(), 3)])
        );
        assert_eq!(
            "ca:{}".parse::<DecoderSpec>().unwrap(),
            DecoderSpec::Ca(vec![])
        );
    }

    #[test]
    fn rejects_malformed_specs() {
        for s in [
            "bogus",
            "scl:",
            "scl:1",
            "scl:x",
            "ae:0",
            "ca:{(2,3)}",
            "ca:{(1,1)}",
            "ca:{(1,2),(1,3)}",
            "ca:{(1,2)",
            "ca:(1,2)",
        ] {
            assert!(s.parse::<DecoderSpec>().is_err(), "{s} should not parse");
        }
    }

    #[test]
    fn canonical_rendering_sorts_ca_pairs() {
        let spec: DecoderSpec = "ca:{(11,3),(-,2),(1,4)}".parse().unwrap();
        assert_eq!(spec.to_string(), "ca:{(-,2),(1,4),(11,3)}");
    }

    #[test]
    fn prepare_rejects_incompatible_pairs() {
        let stream = RngStream::new(0, 0);
        let code = RmCode::new(4, 9);
        assert!(Decoder::prepare(code, &DecoderSpec::Ml, stream).is_err());
        assert!(Decoder::prepare(code, &"ca:{(111,2)}".parse().unwrap(), stream).is_err());
        assert!(Decoder::prepare(RmCode::new(-1, 4), &DecoderSpec::Scl(4), stream).is_err());
        assert!(Decoder::prepare(code, &DecoderSpec::Gmc, stream).is_ok());
    }

    fn spec_strategy() -> impl Strategy<Value = DecoderSpec> {
        let addr = proptest::collection::vec(0u8..2, 0..5).prop_map(|bits| {
            if bits.is_empty() {
                Address::root()
            } else {
                bits.iter()
                    .map(|b| char::from(b'0' + b))
                    .collect::<String>()
                    .parse()
                    .unwrap()
            }
        });
        prop_oneof![
            Just(DecoderSpec::Gmc),
            Just(DecoderSpec::Ml),
            (2usize..64).prop_map(DecoderSpec::Scl),
            (1usize..8).prop_map(DecoderSpec::Ae),
            proptest::collection::btree_map(addr, 2usize..8, 0..4)
                .prop_map(|m| { DecoderSpec::Ca(m.into_iter().collect()) }),
        ]
    }

    proptest! {
        #[test]
        fn spec_strings_round_trip(spec in spec_strategy()) {
            let rendered = spec.to_string();
            prop_assert_eq!(rendered.parse::<DecoderSpec>().unwrap(), spec);
        }
    }
}
