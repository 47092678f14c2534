//! Error channels and syndrome extraction.
//!
//! Per qubit, in index order: the binary symmetric channels draw the Z bit
//! then the X bit; the depolarizing channel draws one uniform `u` and maps
//! `[0, p/3)` to Z, `[p/3, 2p/3)` to X, `[2p/3, p)` to Y.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chain::{Chain, Grade};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Side};
use crate::rng::SplitMix64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Channel {
    Bsc { p: f64 },
    NonIidBsc { p: Vec<f64> },
    Depolarizing { p: f64 },
}

impl Channel {
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let ok = |p: f64| (0.0..1.0).contains(&p);
        match self {
            Channel::Bsc { p } | Channel::Depolarizing { p } if !ok(*p) => Err(Error::InvalidArgument(
                format!("probability {p} outside [0, 1)"),
            )),
            Channel::NonIidBsc { p } if p.len() != n_qubits => Err(Error::LengthMismatch {
                expected: n_qubits,
                got: p.len(),
            }),
            Channel::NonIidBsc { p } if !p.iter().all(|&x| ok(x)) => Err(Error::InvalidArgument(
                "per-qubit probability outside [0, 1)".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Marginal flip probability of qubit `i` on one side.
    pub fn marginal(&self, i: usize) -> f64 {
        match self {
            Channel::Bsc { p } => *p,
            Channel::NonIidBsc { p } => p[i],
            Channel::Depolarizing { p } => 2.0 * p / 3.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    #[serde(flatten)]
    pub channel: Channel,
    #[serde(default)]
    pub seed: u64,
}

fn check_pair(primal: &Lattice, dual: &Lattice) -> Result<()> {
    if primal.side() != Side::Primal
        || dual.side() != Side::Dual
        || primal.family() != dual.family()
    {
        return Err(Error::InvalidArgument(
            "sample_error needs the primal and dual lattice of one code".into(),
        ));
    }
    Ok(())
}

/// Samples `(e_Z on the primal, e_X on the dual)` from the channel seed.
pub fn sample_error(ch: &ChannelSpec, primal: &Lattice, dual: &Lattice) -> Result<(Chain, Chain)> {
    let mut rng = SplitMix64::new(ch.seed);
    sample_error_with(&ch.channel, primal, dual, &mut rng)
}

pub fn sample_error_with(
    channel: &Channel,
    primal: &Lattice,
    dual: &Lattice,
    rng: &mut SplitMix64,
) -> Result<(Chain, Chain)> {
    check_pair(primal, dual)?;
    let n = primal.n_qubits();
    channel.validate(n)?;
    let mut ez = primal.zero_chain(Grade::C1);
    let mut ex = dual.zero_chain(Grade::C1);
    for i in 0..n {
        match channel {
            Channel::Bsc { p } => {
                ez.bits.set(i, rng.coin(*p));
                ex.bits.set(i, rng.coin(*p));
            }
            Channel::NonIidBsc { p } => {
                ez.bits.set(i, rng.coin(p[i]));
                ex.bits.set(i, rng.coin(p[i]));
            }
            Channel::Depolarizing { p } => {
                let u = rng.next_f64();
                let band = p / 3.0;
                if u < band {
                    ez.bits.set(i, true);
                } else if u < 2.0 * band {
                    ex.bits.set(i, true);
                } else if u < *p {
                    ez.bits.set(i, true);
                    ex.bits.set(i, true);
                }
            }
        }
    }
    Ok((ez, ex))
}

pub fn syndrome_of(lat: &Lattice, e: &Chain) -> Result<Chain> {
    lat.boundary(e)
}

/// Parses `"0.1"`, `"1/10"` or `"1e-3"` into an exact rational.
pub fn parse_probability(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("cannot parse probability {s:?}"));
    let q = if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        BigRational::new(n, d)
    } else {
        let (mant, exp) = match s.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let scale = exp - frac.len() as i32;
        let ten = BigInt::from(10);
        if scale >= 0 {
            BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
        }
    };
    if q.is_negative() || q >= BigRational::one() {
        return Err(Error::InvalidArgument(format!("probability {s} outside [0, 1)")));
    }
    Ok(q)
}

pub fn ratio_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{CodeFamily, Family, LatticePair};

    fn pair(kind: Family, l: usize) -> LatticePair {
        LatticePair::new(CodeFamily::new(kind, l).unwrap()).unwrap()
    }

    #[test]
    fn zero_noise_is_empty() {
        let lp = pair(Family::Planar, 3);
        for channel in [Channel::Bsc { p: 0.0 }, Channel::Depolarizing { p: 0.0 }] {
            let (ez, ex) = sample_error(&ChannelSpec { channel, seed: 9 }, &lp.primal, &lp.dual).unwrap();
            assert!(ez.is_zero() && ex.is_zero());
        }
    }

    #[test]
    fn rejects_swapped_pair() {
        let lp = pair(Family::Toric, 3);
        let ch = ChannelSpec { channel: Channel::Bsc { p: 0.1 }, seed: 0 };
        assert!(sample_error(&ch, &lp.dual, &lp.primal).is_err());
    }

    #[test]
    fn parses_probabilities() {
        let tenth = BigRational::new(1.into(), 10.into());
        assert_eq!(parse_probability("0.1").unwrap(), tenth);
        assert_eq!(parse_probability("1/10").unwrap(), tenth);
        assert_eq!(parse_probability("1e-1").unwrap(), tenth);
        assert!(parse_probability("1.5").is_err());
        assert!(parse_probability("x").is_err());
    }
}
