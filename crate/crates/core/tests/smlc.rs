use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use surface_decode::gadgets::{DEdge, DecoratedGraph, Origin, Owner, Weights};
use surface_decode::gf2::LinearCode;
use surface_decode::rng::SplitMix64;
use surface_decode::smlc::*;
use surface_decode::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn pair(kind: Family, l: usize) -> LatticePair {
    LatticePair::new(CodeFamily::new(kind, l).unwrap()).unwrap()
}

fn pow(x: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

fn bsc_probability(e: &Bits, p: &BigRational) -> BigRational {
    let k = e.count_ones();
    pow(p, k) * pow(&(BigRational::one() - p), e.len() - k)
}

/// Coset probabilities keyed by (syndrome, canonical coset representative),
/// from all 2^n errors.
fn coset_table(lat: &Lattice, p: &BigRational) -> HashMap<(Bits, Bits), BigRational> {
    let n = lat.n_qubits();
    let stab = lat.stabilizer_space();
    let mut out: HashMap<(Bits, Bits), BigRational> = HashMap::new();
    for mask in 0u64..(1 << n) {
        let e = Bits::from_u64(n, mask);
        let s = lat.boundary(&Chain::new(Grade::C1, e.clone())).unwrap().bits;
        *out.entry((s, stab.reduce(&e))).or_insert_with(BigRational::zero) += bsc_probability(&e, p);
    }
    out
}

/// Probability of `e + stabilizers` by summing over the stabilizer group.
fn coset_by_stabilizers(lat: &Lattice, e: &Bits, p: &BigRational) -> BigRational {
    lat.stabilizer_space()
        .elements()
        .map(|y| bsc_probability(&e.xor(&y), p))
        .fold(BigRational::zero(), |a, b| a + b)
}

fn cycle_count(lat: &Lattice) -> BigRational {
    BigRational::from_integer(BigInt::one() << dual_cycle_code(lat).dim())
}

fn reachable_syndromes(lat: &Lattice) -> Vec<Chain> {
    let n = lat.n_qubits();
    let mut seen = std::collections::BTreeSet::new();
    for mask in 0u64..(1 << n) {
        let e = Chain::new(Grade::C1, Bits::from_u64(n, mask));
        seen.insert(lat.boundary(&e).unwrap().bits.ones());
    }
    seen.into_iter()
        .map(|ones| Chain::from_indices(Grade::C0, lat.n_checks(), ones))
        .collect()
}

/// Checks every score against the enumerated coset probabilities and the
/// decision against their argmax.
fn check_surface_exact(kind: Family, l: usize, p: BigRational) {
    let pr = pair(kind, l);
    for side in [Side::Primal, Side::Dual] {
        let lat = pr.get(side);
        let table = coset_table(lat, &p);
        let stab = lat.stabilizer_space();
        let dec = SmlcDecoder::new(&pr, side, &vec![p.clone(); lat.n_qubits()], Backend::Exact).unwrap();
        for s in reachable_syndromes(lat) {
            let d = dec.decide(&s).unwrap();
            assert_eq!(d.representatives.len(), 2);
            let mut probs = Vec::new();
            for (rep, score) in d.representatives.iter().zip(&d.scores) {
                let pi = table[&(s.bits.clone(), stab.reduce(&rep.bits))].clone();
                let Score::Exact(det) = score else { panic!("exact backend") };
                let root = exact_sqrt(det).expect("determinant is a square");
                assert_eq!(root, &pi * cycle_count(lat), "{kind:?} L={l} {side:?}");
                probs.push(pi);
            }
            let best = probs.iter().max().unwrap();
            assert_eq!(&probs[d.chosen], best);
            assert_eq!(d.tie, probs[0] == probs[1]);
        }
    }
}

#[test]
fn planar_two_scores_match_enumeration() {
    for p in [q(1, 10), q(1, 4)] {
        check_surface_exact(Family::Planar, 2, p);
    }
}

#[test]
fn planar_three_and_rotated_three_scores_match_enumeration() {
    for p in [q(1, 10), q(1, 4)] {
        check_surface_exact(Family::Planar, 3, p.clone());
        check_surface_exact(Family::Rotated, 3, p);
    }
}

#[test]
fn rotated_three_random_syndromes_pick_the_likelier_coset() {
    let pr = pair(Family::Rotated, 3);
    let lat = &pr.primal;
    let p = q(1, 10);
    let table = coset_table(lat, &p);
    let stab = lat.stabilizer_space();
    let mut rng = SplitMix64::new(11);
    for _ in 0..50 {
        let e = Chain::new(Grade::C1, Bits::from_bools(&(0..9).map(|_| rng.coin(0.2)).collect::<Vec<_>>()));
        let s = lat.boundary(&e).unwrap();
        let d = decode_smlc_surface(&pr, Side::Primal, &s, &vec![p.clone(); 9], Backend::Exact).unwrap();
        let probs: Vec<_> = d
            .representatives
            .iter()
            .map(|r| table[&(s.bits.clone(), stab.reduce(&r.bits))].clone())
            .collect();
        assert_eq!(&probs[d.chosen], probs.iter().max().unwrap());
    }
}

#[test]
fn toric_two_scores_match_enumeration() {
    let pr = pair(Family::Toric, 2);
    for side in [Side::Primal, Side::Dual] {
        let lat = pr.get(side);
        for p in [q(1, 10), q(1, 4)] {
            let table = coset_table(lat, &p);
            let stab = lat.stabilizer_space();
            let dec = SmlcDecoder::new(&pr, side, &vec![p.clone(); 8], Backend::Exact).unwrap();
            for s in reachable_syndromes(lat) {
                let d = dec.decide(&s).unwrap();
                assert_eq!(d.representatives.len(), 4);
                let mut probs = Vec::new();
                for (rep, score) in d.representatives.iter().zip(&d.scores) {
                    let pi = table[&(s.bits.clone(), stab.reduce(&rep.bits))].clone();
                    assert_eq!(score, &Score::Exact(&pi * cycle_count(lat)));
                    probs.push(pi);
                }
                assert_eq!(&probs[d.chosen], probs.iter().max().unwrap());
            }
        }
    }
}

#[test]
fn toric_three_scores_match_cycle_and_stabilizer_sums() {
    let pr = pair(Family::Toric, 3);
    let lat = &pr.primal;
    assert_eq!(lat.stabilizer_space().rank(), 8);
    assert_eq!(dual_cycle_code(lat).dim(), 10);
    let p = q(1, 10);
    let ps = vec![p.clone(); 18];
    let dec = SmlcDecoder::new(&pr, Side::Primal, &ps, Backend::Exact).unwrap();
    let mut rng = SplitMix64::new(5);
    for _ in 0..20 {
        let e = Chain::new(Grade::C1, Bits::from_bools(&(0..18).map(|_| rng.coin(0.15)).collect::<Vec<_>>()));
        let s = lat.boundary(&e).unwrap();
        let d = dec.decide(&s).unwrap();
        let mut probs = Vec::new();
        for (rep, score) in d.representatives.iter().zip(&d.scores) {
            let direct = coset_by_stabilizers(lat, &rep.bits, &p);
            let cycles = coset_prob_surface(lat, rep, &ps).unwrap();
            assert_eq!(direct, cycles);
            assert_eq!(score, &Score::Exact(&direct * cycle_count(lat)));
            probs.push(direct);
        }
        assert_eq!(&probs[d.chosen], probs.iter().max().unwrap());
    }
}

#[test]
fn half_probability_ties_every_coset() {
    for (kind, l) in [(Family::Planar, 3), (Family::Toric, 2)] {
        let pr = pair(kind, l);
        let lat = &pr.primal;
        let ps = vec![q(1, 2); lat.n_qubits()];
        let dec = SmlcDecoder::new(&pr, Side::Primal, &ps, Backend::Exact).unwrap();
        for s in reachable_syndromes(lat).into_iter().take(8) {
            let d = dec.decide(&s).unwrap();
            assert!(d.tie);
            assert_eq!(d.chosen, 0);
            assert!(d.scores.iter().all(|x| x == &d.scores[0]));
        }
    }
}

#[test]
fn float_backend_agrees_with_exact() {
    for (kind, l) in [(Family::Rotated, 3), (Family::Planar, 3), (Family::Toric, 2), (Family::Toric, 3)] {
        let pr = pair(kind, l);
        let lat = &pr.primal;
        let ps = vec![q(1, 10); lat.n_qubits()];
        let exact = SmlcDecoder::new(&pr, Side::Primal, &ps, Backend::Exact).unwrap();
        let float = exact.clone().with_backend(Backend::Float);
        let mut rng = SplitMix64::new(3);
        for _ in 0..20 {
            let e = Chain::new(
                Grade::C1,
                Bits::from_bools(&(0..lat.n_qubits()).map(|_| rng.coin(0.15)).collect::<Vec<_>>()),
            );
            let s = lat.boundary(&e).unwrap();
            let a = exact.decide(&s).unwrap();
            let b = float.decide(&s).unwrap();
            assert_eq!(a.chosen, b.chosen, "{kind:?} L={l}");
            assert!(matches!(b.scores[b.chosen], Score::Float(x) if (x - 1.0).abs() < 1e-9));
        }
    }
}

#[test]
fn wrong_family_is_rejected() {
    let pr = pair(Family::Toric, 2);
    let s = pr.primal.zero_chain(Grade::C0);
    assert!(decode_smlc_surface(&pr, Side::Primal, &s, &vec![q(1, 10); 8], Backend::Exact).is_err());
    let pr = pair(Family::Planar, 2);
    let s = pr.primal.zero_chain(Grade::C0);
    assert!(decode_smlc_toric(&pr, Side::Primal, &s, &vec![q(1, 10); 5], Backend::Exact).is_err());
}

#[test]
fn decision_json_uses_fraction_strings() {
    let pr = pair(Family::Planar, 2);
    let lat = &pr.primal;
    let s = lat.boundary(&Chain::from_indices(Grade::C1, 5, [0])).unwrap();
    let d = decode_smlc_surface(&pr, Side::Primal, &s, &vec![q(1, 10); 5], Backend::Exact).unwrap();
    let v = d.to_json(lat);
    assert_eq!(v["representatives"].as_array().unwrap().len(), 2);
    let score = v["scores"][0].as_str().unwrap();
    assert!(score.contains('/'));
    assert!(v["tie"].is_boolean());
}

// ---- Pfaffians and orientations ----

/// Signed sum over all pairings of 0..n.
fn pfaffian_by_pairings(a: &[Vec<i64>]) -> i64 {
    fn go(a: &[Vec<i64>], left: &mut Vec<usize>, perm: &mut Vec<usize>, total: &mut i64) {
        if left.is_empty() {
            let mut inversions = 0;
            for i in 0..perm.len() {
                for j in i + 1..perm.len() {
                    if perm[i] > perm[j] {
                        inversions += 1;
                    }
                }
            }
            let mut term = if inversions % 2 == 0 { 1 } else { -1 };
            for k in (0..perm.len()).step_by(2) {
                term *= a[perm[k]][perm[k + 1]];
            }
            *total += term;
            return;
        }
        let i = left.remove(0);
        for idx in 0..left.len() {
            let j = left.remove(idx);
            perm.push(i);
            perm.push(j);
            go(a, left, perm, total);
            perm.pop();
            perm.pop();
            left.insert(idx, j);
        }
        left.insert(0, i);
    }
    let mut total = 0;
    go(a, &mut (0..a.len()).collect(), &mut Vec::new(), &mut total);
    total
}

fn random_skew(rng: &mut SplitMix64, n: usize) -> (SkewSystem, Vec<Vec<i64>>) {
    let mut dense = vec![vec![0i64; n]; n];
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.coin(0.6) {
                let w = rng.below(7) as i64 - 3;
                dense[i][j] = w;
                dense[j][i] = -w;
                entries.push((i, j, BigRational::from_integer(w.into())));
            }
        }
    }
    (
        SkewSystem {
            dim: n,
            entries,
            backend: Backend::Exact,
        },
        dense,
    )
}

#[test]
fn pfaffian_matches_pairing_expansion() {
    let mut rng = SplitMix64::new(17);
    for trial in 0..300 {
        let n = 2 * (trial % 6);
        let (sk, dense) = random_skew(&mut rng, n);
        let pf = pfaffian_signed(&sk).unwrap();
        assert_eq!(pf, BigRational::from_integer(pfaffian_by_pairings(&dense).into()));
        assert_eq!(&pf * &pf, det_exact(&sk).unwrap());
        let fl = pfaffian_log(&sk).unwrap().to_f64();
        let want = pfaffian_by_pairings(&dense) as f64;
        assert!((fl - want).abs() <= 1e-6 * want.abs().max(1.0), "{fl} vs {want}");
        let dl = det_log(&sk).unwrap().to_f64();
        assert!((dl - want * want).abs() <= 1e-6 * (want * want).max(1.0));
    }
}

#[test]
fn rational_entries_scale_exactly() {
    let sk = SkewSystem {
        dim: 4,
        entries: vec![
            (0, 1, q(1, 3)),
            (2, 3, q(-2, 5)),
            (0, 2, q(1, 2)),
            (1, 3, q(3, 7)),
        ],
        backend: Backend::Exact,
    };
    // Pf = a01 a23 - a02 a13 + a03 a12
    let want = q(1, 3) * q(-2, 5) - q(1, 2) * q(3, 7);
    assert_eq!(pfaffian_signed(&sk).unwrap(), want);
    assert_eq!(det_exact(&sk).unwrap(), &want * &want);
}

fn bare_graph(n: usize, ends: &[(usize, usize)], rotation: Vec<Vec<usize>>) -> DecoratedGraph {
    DecoratedGraph {
        n_atoms: n,
        edges: ends
            .iter()
            .map(|&(u, v)| DEdge {
                u,
                v,
                origin: Origin::GadgetInternal,
            })
            .collect(),
        weights: Weights::Int(vec![1; ends.len()]),
        owner: vec![Owner::Boundary; n],
        gadgets: vec![],
        boundary_gadget: None,
        lattice_edge: vec![],
        embedding: Some(rotation),
        defects: Bits::zeros(0),
    }
}

#[test]
fn single_edge_orientation() {
    let g = bare_graph(2, &[(0, 1)], vec![vec![0], vec![0]]);
    let o = kasteleyn_orient(&g).unwrap();
    assert_eq!(o.forward.len(), 1);
}

#[test]
fn four_cycle_orientation() {
    let ends = [(0, 1), (1, 2), (2, 3), (3, 0)];
    let g = bare_graph(4, &ends, vec![vec![0, 3], vec![1, 0], vec![2, 1], vec![3, 2]]);
    let o = kasteleyn_orient(&g).unwrap();
    let reversed = o.forward.iter().filter(|&&f| !f).count();
    assert_eq!(reversed % 2, 1);
    let s1 = matching_sign(&g, &o, &[0, 2]);
    let s2 = matching_sign(&g, &o, &[1, 3]);
    assert_eq!(s1, s2);
    let ones = vec![BigRational::one(); 4];
    let sk = SkewSystem::from_graph(4, ends, &o, &ones, Backend::Exact).unwrap();
    assert_eq!(pfaffian_signed(&sk).unwrap().abs(), q(2, 1));
}

#[test]
fn missing_embedding_is_an_error() {
    let mut g = bare_graph(2, &[(0, 1)], vec![vec![0], vec![0]]);
    g.embedding = None;
    assert!(matches!(kasteleyn_orient(&g), Err(Error::MissingEmbedding)));
}

/// Every perfect matching of a small graph, as sorted edge lists.
fn all_matchings(n: usize, ends: &[(usize, usize)]) -> Vec<Vec<usize>> {
    fn go(n: usize, ends: &[(usize, usize)], used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(v) = (0..n).find(|&v| !used[v]) else {
            let mut m = cur.clone();
            m.sort_unstable();
            out.push(m);
            return;
        };
        used[v] = true;
        for (i, &(a, b)) in ends.iter().enumerate() {
            let u = if a == v { b } else if b == v { a } else { continue };
            if !used[u] {
                used[u] = true;
                cur.push(i);
                go(n, ends, used, cur, out);
                cur.pop();
                used[u] = false;
            }
        }
        used[v] = false;
    }
    let mut out = Vec::new();
    go(n, ends, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

fn graph_ends(g: &DecoratedGraph) -> Vec<(usize, usize)> {
    g.edges.iter().map(|d| (d.u, d.v)).collect()
}

#[test]
fn small_surface_graphs_have_uniform_signs() {
    let mut audited = 0;
    for (kind, l) in [(Family::Planar, 2), (Family::Planar, 3), (Family::Rotated, 3)] {
        let pr = pair(kind, l);
        for side in [Side::Primal, Side::Dual] {
            let n = pr.get(side).n_qubits();
            let dec = SmlcDecoder::new(&pr, side, &vec![q(1, 10); n], Backend::Exact).unwrap();
            let g = dec.graph();
            if g.n_atoms > 24 {
                continue;
            }
            audited += 1;
            let o = kasteleyn_orient(g).unwrap();
            let ms = all_matchings(g.n_atoms, &graph_ends(g));
            assert!(!ms.is_empty());
            let s0 = matching_sign(g, &o, &ms[0]);
            assert!(ms.iter().all(|m| matching_sign(g, &o, m) == s0), "{kind:?} L={l} {side:?}");
            // one matching per relative cycle of the opposite lattice
            let other = pr.get(side.other());
            assert_eq!(ms.len(), 1 << dual_cycle_code(pr.get(side)).dim());
            assert_eq!(other.n_qubits(), n);
        }
    }
    assert!(audited > 0);
}

#[test]
fn torus_orientations_combine_to_the_matching_count() {
    let pr = pair(Family::Toric, 2);
    for side in [Side::Primal, Side::Dual] {
        let dec = SmlcDecoder::new(&pr, side, &vec![q(1, 10); 8], Backend::Exact).unwrap();
        let g = dec.graph();
        let t = toric_orientations(g, pr.get(side.other())).unwrap();
        let ms = all_matchings(g.n_atoms, &graph_ends(g));
        assert_eq!(ms.len(), 32);
        for m in &ms {
            let total: i32 = (0..4)
                .map(|k| {
                    TORIC_COEFFICIENTS[k] as i32
                        * t.reference_signs[k] as i32
                        * matching_sign(g, &t.orientations[k], m) as i32
                })
                .sum();
            assert_eq!(total, 2);
        }
    }
}

// ---- duality oracles ----

fn random_code(rng: &mut SplitMix64, n: usize) -> LinearCode {
    let k = rng.below(n as u64 + 1) as usize;
    let gens: Vec<Bits> = (0..k).map(|_| Bits::from_u64(n, rng.next_u64() & ((1 << n) - 1))).collect();
    LinearCode::from_generators(n, &gens)
}

#[test]
fn dual_coset_formula_matches_direct_sum() {
    let mut rng = SplitMix64::new(23);
    for trial in 0..200 {
        let n = 1 + trial % 12;
        let code = random_code(&mut rng, n);
        let perp = code.dual();
        let e = Bits::from_u64(n, rng.next_u64() & ((1 << n) - 1));
        let p = [q(1, 10), q(1, 4), q(2, 5)][trial % 3].clone();
        let direct = perp
            .codewords()
            .map(|y| bsc_probability(&e.xor(&y), &p))
            .fold(BigRational::zero(), |a, b| a + b);
        assert_eq!(coset_prob_dual(&code, &e, &vec![p; n]).unwrap(), direct);
    }
}

#[test]
fn dual_coset_probabilities_sum_to_one() {
    let mut rng = SplitMix64::new(29);
    for n in [3, 6, 9] {
        let code = random_code(&mut rng, n);
        let perp = code.dual();
        let p = q(1, 4);
        let mut seen = std::collections::HashSet::new();
        let mut total = BigRational::zero();
        for mask in 0u64..(1 << n) {
            let e = Bits::from_u64(n, mask);
            if seen.insert(perp.coset_key(&e)) {
                total += coset_prob_dual(&code, &e, &vec![p.clone(); n]).unwrap();
            }
        }
        assert_eq!(total, BigRational::one());
    }
}

fn depolarizing_probability(x: &Bits, x2: &Bits, p: &BigRational) -> BigRational {
    let k = x.or(x2).count_ones();
    pow(&(p / BigRational::from_integer(3.into())), k) * pow(&(BigRational::one() - p), x.len() - k)
}

#[test]
fn depolarizing_formula_matches_direct_sum() {
    let mut rng = SplitMix64::new(31);
    for trial in 0..100 {
        let n = 1 + trial % 6;
        let (c, c2) = (random_code(&mut rng, n), random_code(&mut rng, n));
        let e = Bits::from_u64(n, rng.next_u64() & ((1 << n) - 1));
        let e2 = Bits::from_u64(n, rng.next_u64() & ((1 << n) - 1));
        let p = [q(1, 10), q(1, 4), q(1, 2)][trial % 3].clone();
        let mut direct = BigRational::zero();
        let perp2: Vec<Bits> = c2.dual().codewords().collect();
        for y in c.dual().codewords() {
            for y2 in &perp2 {
                direct += depolarizing_probability(&e.xor(&y), &e2.xor(y2), &p);
            }
        }
        assert_eq!(coset_prob_depolarizing(&c, &c2, &e, &e2, &p).unwrap(), direct);
    }
}

#[test]
fn depolarizing_at_three_quarters_is_uniform() {
    let pr = pair(Family::Toric, 2);
    let e = Chain::from_indices(Grade::C1, 8, [0, 3]);
    let e2 = Chain::from_indices(Grade::C1, 8, [5]);
    let pi = coset_prob_depolarizing_pair(&pr, &e, &e2, &q(3, 4)).unwrap();
    let sizes = dual_cycle_code(&pr.primal).dim() + dual_cycle_code(&pr.dual).dim();
    assert_eq!(pi, BigRational::new(BigInt::one(), BigInt::one() << sizes));
}

#[test]
fn toric_two_joint_cosets_sum_to_one() {
    let pr = pair(Family::Toric, 2);
    let (sp, sd) = (pr.primal.stabilizer_space(), pr.dual.stabilizer_space());
    let keys = |stab: &surface_decode::gf2::RowSpace| {
        let mut out = std::collections::BTreeMap::new();
        for mask in 0u64..256 {
            let e = Bits::from_u64(8, mask);
            out.entry(stab.reduce(&e).ones()).or_insert(e);
        }
        out.into_values().collect::<Vec<_>>()
    };
    let (kp, kd) = (keys(&sp), keys(&sd));
    assert_eq!((kp.len(), kd.len()), (32, 32));
    let p = q(1, 10);
    let mut total = BigRational::zero();
    for a in &kp {
        for b in &kd {
            total += coset_prob_depolarizing_pair(
                &pr,
                &Chain::new(Grade::C1, a.clone()),
                &Chain::new(Grade::C1, b.clone()),
                &p,
            )
            .unwrap();
        }
    }
    assert_eq!(total, BigRational::one());
}

#[test]
fn oversized_codes_are_refused() {
    let n = 30;
    let gens: Vec<Bits> = (0..25).map(|i| Bits::from_indices(n, [i])).collect();
    let code = LinearCode::from_generators(n, &gens);
    assert!(matches!(
        coset_prob_dual(&code, &Bits::zeros(n), &vec![q(1, 10); n]),
        Err(Error::TooLarge(_))
    ));
}

proptest! {
    #[test]
    fn character_is_multiplicative(z in any::<u16>(), x in any::<u16>(), y in any::<u16>()) {
        let (z, x, y) = (Bits::from_u64(16, z as u64), Bits::from_u64(16, x as u64), Bits::from_u64(16, y as u64));
        prop_assert_eq!(
            character(&z, &x.xor(&y)).unwrap(),
            character(&z, &x).unwrap() * character(&z, &y).unwrap()
        );
    }

    #[test]
    fn pfaffian_squares_to_determinant(seed in any::<u64>(), half in 0usize..6) {
        let mut rng = SplitMix64::new(seed);
        let (sk, _) = random_skew(&mut rng, 2 * half);
        let pf = pfaffian_signed(&sk).unwrap();
        prop_assert_eq!(&pf * &pf, det_exact(&sk).unwrap());
    }
}
