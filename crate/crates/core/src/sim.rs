//! Monte Carlo logical-error-rate runs.

use std::path::PathBuf;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::gf2::RowSpace;
use crate::lattice::{CodeFamily, Family, Lattice, LatticePair, Side};
use crate::noise::{parse_probability, ratio_to_f64, sample_error_with, Channel};
use crate::rng::{mix, SplitMix64};
use crate::smlc::{Backend, SmlcDecoder};
use crate::smw::{decode_smw, default_profile, Solver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Bsc,
    Depolarizing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderKind {
    SmwBlossom,
    SmwSeparator,
    Smlc,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::SmwBlossom => "smw-blossom",
            DecoderKind::SmwSeparator => "smw-separator",
            DecoderKind::Smlc => "smlc",
        }
    }

    fn solver(self) -> Option<Solver> {
        match self {
            DecoderKind::SmwBlossom => Some(Solver::Blossom),
            DecoderKind::SmwSeparator => Some(Solver::Separator),
            DecoderKind::Smlc => None,
        }
    }
}

/// A probability written as a number or as an exact string such as `"1/10"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Probability {
    Number(f64),
    Text(String),
}

impl Probability {
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            Probability::Number(x) => parse_probability(&x.to_string()),
            Probability::Text(s) => parse_probability(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub family: Family,
    #[serde(rename = "L")]
    pub distance: usize,
    pub channel: ChannelKind,
    /// One CSV row per probability.
    pub p: Vec<Probability>,
    pub decoder: DecoderKind,
    pub trials: u64,
    pub seed: u64,
    pub backend: Option<Backend>,
    pub out: Option<PathBuf>,
    /// Fill the `mean_decode_ms` column (which makes the CSV vary between
    /// runs).
    pub timing: bool,
    /// For SMW decoders, also run the other solver and count trials whose
    /// weights differ.
    pub cross_check: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: Family::Toric,
            distance: 4,
            channel: ChannelKind::Bsc,
            p: vec![Probability::Text("1/20".into())],
            decoder: DecoderKind::SmwSeparator,
            trials: 1000,
            seed: 1,
            backend: None,
            out: None,
            timing: false,
            cross_check: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<Vec<BigRational>> {
        CodeFamily::new(self.family, self.distance)?;
        if self.p.is_empty() {
            return Err(Error::InvalidArgument("at least one p is required".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        if self.cross_check && self.decoder == DecoderKind::Smlc {
            return Err(Error::InvalidArgument("cross-check applies to SMW decoders only".into()));
        }
        let ps = self.p.iter().map(Probability::to_rational).collect::<Result<Vec<_>>>()?;
        if self.decoder == DecoderKind::Smlc {
            for p in &ps {
                let m = self.marginal(p);
                if m > BigRational::new(1.into(), 2.into()) {
                    return Err(Error::InvalidArgument(format!(
                        "SMLC needs a per-side flip probability of at most 1/2, p = {p} gives {m}"
                    )));
                }
            }
        }
        Ok(ps)
    }

    /// Flip probability of one side: `p` for bit flips, `2p/3` under
    /// depolarizing noise.
    pub fn marginal(&self, p: &BigRational) -> BigRational {
        match self.channel {
            ChannelKind::Bsc => p.clone(),
            ChannelKind::Depolarizing => p * BigRational::new(2.into(), 3.into()),
        }
    }
}

pub const CSV_HEADER: &str =
    "family,L,channel,p,decoder,backend,trials,failures_X,failures_Z,failures_any,weight_mismatches,mean_decode_ms";

#[derive(Clone, Debug, PartialEq)]
pub struct SimRow {
    pub family: Family,
    pub distance: usize,
    pub channel: ChannelKind,
    pub p: BigRational,
    pub decoder: DecoderKind,
    pub backend: Option<Backend>,
    pub trials: u64,
    /// Failures on the dual side (X errors).
    pub failures_x: u64,
    /// Failures on the primal side (Z errors).
    pub failures_z: u64,
    pub failures_any: u64,
    pub weight_mismatches: Option<u64>,
    pub mean_decode_ms: Option<f64>,
}

impl SimRow {
    pub fn to_csv(&self) -> String {
        let channel = match self.channel {
            ChannelKind::Bsc => "bsc",
            ChannelKind::Depolarizing => "depolarizing",
        };
        let backend = match self.backend {
            Some(Backend::Exact) => "exact",
            Some(Backend::Float) => "float",
            None => "",
        };
        format!(
            "{},{},{channel},{},{},{backend},{},{},{},{},{},{}",
            self.family,
            self.distance,
            self.p,
            self.decoder.name(),
            self.trials,
            self.failures_x,
            self.failures_z,
            self.failures_any,
            self.weight_mismatches.map(|x| x.to_string()).unwrap_or_default(),
            self.mean_decode_ms.map(|x| format!("{x:.4}")).unwrap_or_default(),
        )
    }
}

pub fn to_csv(rows: &[SimRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

struct TrialOutcome {
    fail_x: bool,
    fail_z: bool,
    mismatch: bool,
    seconds: f64,
}

enum SideDecoder {
    Smw(Solver),
    Smlc(Box<SmlcDecoder>),
}

/// Decodes `s` and reports whether the correction differs from `e` by a
/// nontrivial logical, plus whether the two SMW solvers disagreed on weight.
fn decode_side(lat: &Lattice, stab: &RowSpace, dec: &SideDecoder, e: &Chain, cross_check: bool) -> Result<(bool, bool)> {
    let s = lat.boundary(e)?;
    let (correction, mismatch) = match dec {
        SideDecoder::Smw(solver) => {
            let profile = default_profile(lat);
            let r = decode_smw(lat, &s, &profile, *solver)?;
            let mismatch = if cross_check {
                let other = match solver {
                    Solver::Blossom => Solver::Separator,
                    Solver::Separator => Solver::Blossom,
                };
                decode_smw(lat, &s, &profile, other)?.weight != r.weight
            } else {
                false
            };
            (r.error, mismatch)
        }
        SideDecoder::Smlc(d) => (d.decide(&s)?.chosen_error().clone(), false),
    };
    let residual = correction.xor(e)?;
    Ok((!stab.contains(&residual.bits), mismatch))
}

/// Runs every trial of every `p` in the config. Trials run on the current
/// rayon pool; trial `t` of the `k`-th probability draws from
/// `SplitMix64::for_trial(mix(seed ^ k), t)`.
pub fn simulate(cfg: &RunConfig) -> Result<Vec<SimRow>> {
    let ps = cfg.validate()?;
    let pair = LatticePair::new(CodeFamily::new(cfg.family, cfg.distance)?)?;
    let n = pair.primal.n_qubits();
    let (stab_z, stab_x) = (pair.primal.stabilizer_space(), pair.dual.stabilizer_space());
    let mut rows = Vec::new();
    for (k, p) in ps.iter().enumerate() {
        let channel = match cfg.channel {
            ChannelKind::Bsc => Channel::Bsc { p: ratio_to_f64(p) },
            ChannelKind::Depolarizing => Channel::Depolarizing { p: ratio_to_f64(p) },
        };
        let backend = cfg.backend.unwrap_or(Backend::default_for(n));
        let make = |side: Side| -> Result<SideDecoder> {
            Ok(match cfg.decoder.solver() {
                Some(s) => SideDecoder::Smw(s),
                None => SideDecoder::Smlc(Box::new(SmlcDecoder::new(&pair, side, &vec![cfg.marginal(p); n], backend)?)),
            })
        };
        let (dz, dx) = (make(Side::Primal)?, make(Side::Dual)?);
        let stream = mix(cfg.seed ^ k as u64);
        let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = SplitMix64::for_trial(stream, t);
                let (ez, ex) = sample_error_with(&channel, &pair.primal, &pair.dual, &mut rng)?;
                let start = Instant::now();
                let (fail_z, mz) = decode_side(&pair.primal, &stab_z, &dz, &ez, cfg.cross_check)?;
                let (fail_x, mx) = decode_side(&pair.dual, &stab_x, &dx, &ex, cfg.cross_check)?;
                Ok(TrialOutcome {
                    fail_x,
                    fail_z,
                    mismatch: mz || mx,
                    seconds: start.elapsed().as_secs_f64(),
                })
            })
            .collect::<Result<_>>()?;
        let count = |f: fn(&TrialOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as u64;
        let seconds: f64 = outcomes.iter().map(|o| o.seconds).sum();
        rows.push(SimRow {
            family: cfg.family,
            distance: cfg.distance,
            channel: cfg.channel,
            p: p.clone(),
            decoder: cfg.decoder,
            backend: (cfg.decoder == DecoderKind::Smlc).then_some(backend),
            trials: cfg.trials,
            failures_x: count(|o| o.fail_x),
            failures_z: count(|o| o.fail_z),
            failures_any: count(|o| o.fail_x || o.fail_z),
            weight_mismatches: cfg.cross_check.then(|| count(|o| o.mismatch)),
            mean_decode_ms: cfg.timing.then(|| 1e3 * seconds / cfg.trials as f64),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_json_round_trip() {
        let cfg = RunConfig {
            p: vec![Probability::Number(0.1), Probability::Text("1/4".into())],
            ..RunConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        let ps = back.validate().unwrap();
        assert_eq!(ps[0], BigRational::new(1.into(), 10.into()));
    }

    #[test]
    fn smlc_rejects_large_marginals() {
        let cfg = RunConfig {
            decoder: DecoderKind::Smlc,
            channel: ChannelKind::Depolarizing,
            p: vec![Probability::Text("9/10".into())],
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
