//! Most-likely-coset decoding under independent bit flips.
//!
//! The probability of a stabilizer coset `e + C^perp` is a weighted sum
//! over the codewords of `C`, which for surface codes are the (relative)
//! cycles of the opposite lattice. Even Fisher gadgets turn that cycle sum
//! into a perfect-matching sum on a decorated graph, evaluated as a
//! determinant (planar and rotated codes) or as a signed combination of
//! four Pfaffians (toric code).

pub mod kasteleyn;
pub mod skew;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

pub use kasteleyn::{
    kasteleyn_orient, matching_for_cycle, matching_sign, toric_orientations, Orientation, ToricKasteleyn,
    TORIC_COEFFICIENTS,
};
pub use skew::{
    bareiss, det_exact, det_log, exact_sqrt, pfaffian_log, pfaffian_signed, Backend, LogValue, SkewSystem,
};

use crate::bits::Bits;
use crate::chain::{Chain, ChainFile, Grade};
use crate::error::{Error, Result};
use crate::gadgets::{build_decorated, DecoratedGraph, DecorationProfile, Origin};
use crate::gf2::LinearCode;
use crate::lattice::{Family, Lattice, LatticePair, Side};

/// Largest codeword count enumerated by the duality oracles (2^24).
pub const MAX_ENUMERATION_DIM: usize = 24;

/// Relative score gap below which floating-point decisions count as ties.
pub const FLOAT_TIE_GAP: f64 = 1e-12;

/// `(-1)^<z, e>`.
pub fn character(z: &Bits, e: &Bits) -> Result<i8> {
    if z.len() != e.len() {
        return Err(Error::LengthMismatch {
            expected: z.len(),
            got: e.len(),
        });
    }
    Ok(if z.dot(e) { -1 } else { 1 })
}

fn one_minus_two(p: &BigRational) -> BigRational {
    BigRational::one() - BigRational::from_integer(BigInt::from(2)) * p
}

/// Probability of the coset `e + C^perp` under independent flips with
/// per-bit probabilities `p`, as `(1/|C|) sum_{z in C} prod_{i in z}
/// (-1)^{e_i} (1 - 2 p_i)`.
pub fn coset_prob_dual(code: &LinearCode, e: &Bits, p: &[BigRational]) -> Result<BigRational> {
    let n = code.len();
    if e.len() != n || p.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: if e.len() != n { e.len() } else { p.len() },
        });
    }
    if code.dim() > MAX_ENUMERATION_DIM {
        return Err(Error::TooLarge(format!("code of dimension {}", code.dim())));
    }
    let w: Vec<BigRational> = (0..n)
        .map(|i| {
            let x = one_minus_two(&p[i]);
            if e.get(i) {
                -x
            } else {
                x
            }
        })
        .collect();
    let mut total = BigRational::zero();
    for z in code.codewords() {
        let mut term = BigRational::one();
        for i in z.iter_ones() {
            term *= &w[i];
        }
        total += term;
    }
    Ok(total / BigRational::from_integer(BigInt::one() << code.dim()))
}

/// Probability of the coset `(e, e') + C^perp x C'^perp` when each pair
/// `(x_i, x'_i)` is `(0, 0)` with probability `1 - p` and each other value
/// with probability `p / 3`.
pub fn coset_prob_depolarizing(
    code: &LinearCode,
    code2: &LinearCode,
    e: &Bits,
    e2: &Bits,
    p: &BigRational,
) -> Result<BigRational> {
    let n = code.len();
    if code2.len() != n || e.len() != n || e2.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: [code2.len(), e.len(), e2.len()].into_iter().find(|&x| x != n).unwrap_or(n),
        });
    }
    if code.dim() + code2.dim() > MAX_ENUMERATION_DIM {
        return Err(Error::TooLarge(format!(
            "code pair of dimensions {} and {}",
            code.dim(),
            code2.dim()
        )));
    }
    let alpha = BigRational::one() - BigRational::new(BigInt::from(4), BigInt::from(3)) * p;
    let mut powers = vec![BigRational::one()];
    for k in 1..=n {
        powers.push(&powers[k - 1] * &alpha);
    }
    let second: Vec<(Bits, bool)> = code2.codewords().map(|z2| (z2.clone(), z2.dot(e2))).collect();
    let mut total = BigRational::zero();
    for z in code.codewords() {
        let sz = z.dot(e);
        for (z2, s2) in &second {
            let term = &powers[z.or(z2).count_ones()];
            if sz ^ s2 {
                total -= term;
            } else {
                total += term;
            }
        }
    }
    Ok(total / BigRational::from_integer(BigInt::one() << (code.dim() + code2.dim())))
}

/// The code whose codewords weight the coset sum for errors on `side`:
/// everything orthogonal to that side's stabilizers.
pub fn dual_cycle_code(lat: &Lattice) -> LinearCode {
    let stab = lat.stabilizer_space();
    LinearCode::from_generators(lat.n_qubits(), stab.orthogonal().rows())
}

/// Coset probability of an error on one side of a surface code.
pub fn coset_prob_surface(lat: &Lattice, e: &Chain, p: &[BigRational]) -> Result<BigRational> {
    lat.check_chain(e)?;
    coset_prob_dual(&dual_cycle_code(lat), &e.bits, p)
}

/// Joint coset probability of `(e_primal, e_dual)` under depolarizing noise.
pub fn coset_prob_depolarizing_pair(
    pair: &LatticePair,
    e_primal: &Chain,
    e_dual: &Chain,
    p: &BigRational,
) -> Result<BigRational> {
    pair.primal.check_chain(e_primal)?;
    pair.dual.check_chain(e_dual)?;
    coset_prob_depolarizing(
        &dual_cycle_code(&pair.primal),
        &dual_cycle_code(&pair.dual),
        &e_primal.bits,
        &e_dual.bits,
        p,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub enum Score {
    Exact(BigRational),
    /// Relative to the largest score of the decision.
    Float(f64),
}

impl Score {
    pub fn to_json(&self) -> Value {
        match self {
            Score::Exact(q) => Value::String(format!("{}/{}", q.numer(), q.denom())),
            Score::Float(x) => json!(x),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CosetDecision {
    pub representatives: Vec<Chain>,
    pub scores: Vec<Score>,
    pub chosen: usize,
    /// Several candidates share the top score (or came within the float
    /// tie gap).
    pub tie: bool,
}

impl CosetDecision {
    pub fn chosen_error(&self) -> &Chain {
        &self.representatives[self.chosen]
    }

    /// Representatives in chain-file form for the lattice they live on.
    pub fn to_json(&self, lat: &Lattice) -> Value {
        json!({
            "representatives": self.representatives.iter()
                .map(|c| serde_json::to_value(ChainFile::from_chain(lat, c)).expect("chain file serializes"))
                .collect::<Vec<_>>(),
            "scores": self.scores.iter().map(Score::to_json).collect::<Vec<_>>(),
            "chosen": self.chosen,
            "tie": self.tie,
        })
    }
}

#[derive(Clone, Debug)]
enum Pfaffians {
    Planar(Orientation),
    Toric(Box<ToricKasteleyn>),
}

/// Everything about one side of a code that does not depend on the
/// syndrome: the decorated graph of the opposite lattice and its
/// orientations.
#[derive(Clone, Debug)]
pub struct SmlcDecoder {
    lat: Lattice,
    graph: DecoratedGraph,
    pfaffians: Pfaffians,
    /// `1 - 2 p_e` per qubit.
    edge_weight: Vec<BigRational>,
    backend: Backend,
}

impl SmlcDecoder {
    /// Decoder for syndromes on `side`; `p` holds one flip probability per
    /// qubit.
    pub fn new(pair: &LatticePair, side: Side, p: &[BigRational], backend: Backend) -> Result<Self> {
        let lat = pair.get(side).clone();
        let other = pair.get(side.other());
        let n = lat.n_qubits();
        if p.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: p.len(),
            });
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if p.iter().any(|x| x.is_negative() || x > &half) {
            return Err(Error::InvalidArgument("SMLC needs every p in [0, 1/2]".into()));
        }
        let profile = DecorationProfile::smlc(Chain::zeros(Grade::C1, n), p.to_vec());
        let graph = build_decorated(other, &other.zero_chain(Grade::C0), &profile)?;
        let pfaffians = match lat.kind() {
            Family::Toric => Pfaffians::Toric(Box::new(toric_orientations(&graph, other)?)),
            Family::Planar | Family::Rotated => Pfaffians::Planar(kasteleyn_orient(&graph)?),
        };
        Ok(SmlcDecoder {
            lat,
            graph,
            pfaffians,
            edge_weight: p.iter().map(one_minus_two).collect(),
            backend,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lat
    }

    pub fn graph(&self) -> &DecoratedGraph {
        &self.graph
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    /// Decorated-edge weights for the coset of `e`: 1 inside gadgets and
    /// `(-1)^{e_i} (1 - 2 p_i)` on the edge of qubit i.
    pub fn weights(&self, e: &Chain) -> Vec<BigRational> {
        self.graph
            .edges
            .iter()
            .map(|d| match d.origin {
                Origin::GadgetInternal => BigRational::one(),
                Origin::LatticeEdge(i) => {
                    let w = self.edge_weight[i].clone();
                    if e.bits.get(i) {
                        -w
                    } else {
                        w
                    }
                }
            })
            .collect()
    }

    fn system(&self, orientation: &Orientation, weights: &[BigRational]) -> Result<SkewSystem> {
        SkewSystem::from_graph(
            self.graph.n_atoms,
            self.graph.edges.iter().map(|d| (d.u, d.v)),
            orientation,
            weights,
            self.backend,
        )
    }

    /// Exact score of the coset of `e`: `det A` for planar and rotated
    /// codes (the square of the matching sum), the signed four-Pfaffian
    /// combination (the matching sum itself) on the torus.
    pub fn score_exact(&self, e: &Chain) -> Result<BigRational> {
        self.lat.check_chain(e)?;
        let w = self.weights(e);
        match &self.pfaffians {
            Pfaffians::Planar(o) => det_exact(&self.system(o, &w)?),
            Pfaffians::Toric(t) => {
                let mut total = BigRational::zero();
                for k in 0..4 {
                    let pf = pfaffian_signed(&self.system(&t.orientations[k], &w)?)?;
                    let c = TORIC_COEFFICIENTS[k] * t.reference_signs[k];
                    total += BigRational::from_integer(c.into()) * pf;
                }
                Ok(total / BigRational::from_integer(2.into()))
            }
        }
    }

    /// The perfect-matching sum itself, `|C| * pi(e)`.
    pub fn matching_sum(&self, e: &Chain) -> Result<BigRational> {
        let s = self.score_exact(e)?;
        match self.pfaffians {
            Pfaffians::Toric(_) => Ok(s),
            Pfaffians::Planar(_) => exact_sqrt(&s)
                .ok_or_else(|| Error::Invariant(format!("determinant {s} is not a rational square"))),
        }
    }

    /// Floating-point score terms `(coefficient, value)`; the score is
    /// their sum.
    fn score_terms_float(&self, e: &Chain) -> Result<Vec<(f64, LogValue)>> {
        self.lat.check_chain(e)?;
        let w = self.weights(e);
        match &self.pfaffians {
            Pfaffians::Planar(o) => Ok(vec![(1.0, det_log(&self.system(o, &w)?)?)]),
            Pfaffians::Toric(t) => (0..4)
                .map(|k| {
                    let pf = pfaffian_log(&self.system(&t.orientations[k], &w)?)?;
                    let c = (TORIC_COEFFICIENTS[k] * t.reference_signs[k]) as f64 / 2.0;
                    Ok((c, pf))
                })
                .collect(),
        }
    }

    /// The candidate cosets: `e`, `e + a` (and `e + b`, `e + a + b` on the
    /// torus) for any `e` with boundary `s`.
    pub fn representatives(&self, s: &Chain) -> Result<Vec<Chain>> {
        let e = self.lat.find_any_error(s)?;
        let logicals = self.lat.logical_representatives();
        let mut reps = vec![e.clone(), e.xor(&logicals[0])?];
        if logicals.len() == 2 {
            reps.push(e.xor(&logicals[1])?);
            reps.push(reps[1].xor(&logicals[1])?);
        }
        Ok(reps)
    }

    pub fn decide(&self, s: &Chain) -> Result<CosetDecision> {
        let representatives = self.representatives(s)?;
        match self.backend {
            Backend::Exact => {
                let scores: Vec<BigRational> = representatives
                    .par_iter()
                    .map(|e| self.score_exact(e))
                    .collect::<Result<_>>()?;
                let best = scores.iter().max().expect("at least two candidates").clone();
                let chosen = scores.iter().position(|x| *x == best).unwrap();
                let tie = scores.iter().filter(|x| **x == best).count() > 1;
                Ok(CosetDecision {
                    representatives,
                    scores: scores.into_iter().map(Score::Exact).collect(),
                    chosen,
                    tie,
                })
            }
            Backend::Float => {
                let terms: Vec<Vec<(f64, LogValue)>> = representatives
                    .par_iter()
                    .map(|e| self.score_terms_float(e))
                    .collect::<Result<_>>()?;
                let top = terms
                    .iter()
                    .flatten()
                    .filter(|t| t.1.sign != 0)
                    .map(|t| t.1.ln_abs)
                    .fold(f64::NEG_INFINITY, f64::max);
                let raw: Vec<f64> = terms
                    .iter()
                    .map(|ts| {
                        ts.iter()
                            .map(|(c, v)| c * v.sign as f64 * (v.ln_abs - top).exp())
                            .sum()
                    })
                    .collect();
                let scale = raw.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                let rel: Vec<f64> = raw.iter().map(|x| if scale > 0.0 { x / scale } else { 0.0 }).collect();
                let best = rel.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mut chosen = rel.iter().position(|&x| x == best).unwrap();
                let near = rel.iter().filter(|&&x| best - x <= FLOAT_TIE_GAP * best.abs()).count();
                let tie = near > 1;
                if tie && self.lat.n_qubits() <= 512 {
                    let exact = self.clone().with_backend(Backend::Exact).decide(s)?;
                    chosen = exact.chosen;
                }
                Ok(CosetDecision {
                    representatives,
                    scores: rel.into_iter().map(Score::Float).collect(),
                    chosen,
                    tie,
                })
            }
        }
    }
}

fn require_family(lat: &Lattice, toric: bool) -> Result<()> {
    if (lat.kind() == Family::Toric) != toric {
        return Err(Error::InvalidArgument(format!(
            "{} decoder called on a {} lattice",
            if toric { "toric" } else { "surface" },
            lat.kind().name()
        )));
    }
    Ok(())
}

/// Two-coset decision for planar and rotated codes.
pub fn decode_smlc_surface(
    pair: &LatticePair,
    side: Side,
    s: &Chain,
    p: &[BigRational],
    backend: Backend,
) -> Result<CosetDecision> {
    require_family(pair.get(side), false)?;
    SmlcDecoder::new(pair, side, p, backend)?.decide(s)
}

/// Four-coset decision for the toric code.
pub fn decode_smlc_toric(
    pair: &LatticePair,
    side: Side,
    s: &Chain,
    p: &[BigRational],
    backend: Backend,
) -> Result<CosetDecision> {
    require_family(pair.get(side), true)?;
    SmlcDecoder::new(pair, side, p, backend)?.decide(s)
}
