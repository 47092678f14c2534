//! Minimum-weight decoding through perfect matchings of decorated graphs.

mod classical;
mod join;
mod overlay;
mod resolve;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use classical::{classical_weight, shortest_distances};
pub use join::{verify_djoin, JoinReport};
pub use overlay::grid_overlay;
pub use resolve::{resolve_bad_defects, Resolution};

use crate::chain::{Chain, Grade};
use crate::error::{Error, Result};
use crate::gadgets::{build_decorated, DecorationProfile, DefectStyle, EvenStyle, Weighting};
use crate::lattice::{Family, Lattice};
use crate::matching::{mwm_separator, mwpm_to_mwm_weights, Matching, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Blossom,
    Separator,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SmwStats {
    pub atoms: usize,
    pub edges: usize,
    pub activations: usize,
    pub augmentations: usize,
    pub depth: usize,
    pub separator_atoms: usize,
    pub deferred: usize,
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmwResult {
    pub error: Chain,
    /// Sum of lattice-edge weights: the error size under unit weights, the
    /// fixed-point LLR total otherwise.
    pub weight: i128,
    pub solver: Solver,
    pub stats: SmwStats,
}

/// Single-vertex defects on even tori of side at least 4 (where dropping
/// degree-3 defects loses nothing), odd gadgets everywhere else. Even
/// degree-4 checks use K4.
pub fn default_profile(lat: &Lattice) -> DecorationProfile {
    let l = lat.distance();
    let style = if lat.kind() == Family::Toric && l % 2 == 0 && l >= 4 {
        DefectStyle::SingleVertex
    } else {
        DefectStyle::OddGadget
    };
    DecorationProfile::smw(style, EvenStyle::NonplanarK4)
}

pub fn decode_smw(lat: &Lattice, s: &Chain, profile: &DecorationProfile, solver: Solver) -> Result<SmwResult> {
    let start = Instant::now();
    if matches!(profile.weighting, Weighting::Multiplicative { .. }) {
        return Err(Error::Profile("minimum-weight decoding needs additive weights".into()));
    }
    let dg = build_decorated(lat, s, profile)?;
    let w = dg.int_weights().expect("additive weights are integers");
    let k = w.iter().copied().max().unwrap_or(0).max(1) as i128;
    let mut g = WeightedGraph::new(
        dg.n_atoms,
        dg.edges.iter().zip(w).map(|(d, &x)| (d.u, d.v, x as i128)).collect(),
    );
    let mut stats = SmwStats {
        atoms: dg.n_atoms,
        edges: dg.edges.len(),
        ..Default::default()
    };
    let matching: Matching = match solver {
        Solver::Blossom => {
            let t = mwpm_to_mwm_weights(&g, k)?;
            let mut e = t.engine();
            for v in 0..t.n {
                e.activate(v);
            }
            stats.activations = e.stats.activations;
            stats.augmentations = e.stats.augmentations;
            Matching::from_engine(&e)
        }
        Solver::Separator => {
            let ov = grid_overlay(lat, &dg);
            stats.deferred = ov.deferred.len();
            g.overlay = Some(ov);
            let t = mwpm_to_mwm_weights(&g, k)?;
            let (m, st) = mwm_separator(&t)?;
            stats.activations = st.engine.activations;
            stats.augmentations = st.engine.augmentations;
            stats.depth = st.depth;
            stats.separator_atoms = st.separator_atoms;
            m
        }
    };
    if !matching.is_perfect() {
        return Err(Error::NotPerfect {
            unmatched: matching.unmatched(),
        });
    }
    let error = dg.matching_to_join(&matching.edges, lat.n_qubits())?;
    let weight = dg.total_int_weight(&matching.edges).expect("integer weights");
    if lat.boundary(&error)? != *s {
        return Err(Error::Invariant("decoded error does not reproduce the syndrome".into()));
    }
    stats.wall_time = start.elapsed();
    Ok(SmwResult {
        error,
        weight,
        solver,
        stats,
    })
}

/// Decodes independent syndromes in parallel; results keep input order.
pub fn decode_smw_batch(
    lat: &Lattice,
    syndromes: &[Chain],
    profile: &DecorationProfile,
    solver: Solver,
) -> Vec<Result<SmwResult>> {
    syndromes
        .par_iter()
        .map(|s| decode_smw(lat, s, profile, solver))
        .collect()
}

/// Unit weight of a 1-chain, or its LLR total.
pub fn chain_weight(profile: &DecorationProfile, e: &Chain) -> i128 {
    match &profile.weighting {
        Weighting::Llr(p) => e
            .bits
            .iter_ones()
            .map(|i| crate::gadgets::llr_weight(p[i]) as i128)
            .sum(),
        _ => e.weight() as i128,
    }
}

pub(crate) fn check_syndrome(lat: &Lattice, s: &Chain) -> Result<()> {
    lat.check_chain(s)?;
    if s.grade != Grade::C0 {
        return Err(Error::GradeMismatch {
            expected: "c0",
            got: s.grade.name(),
        });
    }
    if lat.kind() == Family::Toric && s.weight() % 2 == 1 {
        return Err(Error::InvalidSyndromeParity);
    }
    Ok(())
}
