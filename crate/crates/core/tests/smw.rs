use std::collections::HashMap;

use proptest::prelude::*;
use surface_decode::gadgets::{DecorationProfile, DefectStyle, EvenStyle};
use surface_decode::rng::SplitMix64;
use surface_decode::smw::*;
use surface_decode::*;

fn lattice(kind: Family, l: usize, side: Side) -> Lattice {
    build_lattice(CodeFamily::new(kind, l).unwrap(), side).unwrap()
}

/// Minimum error weight for every reachable syndrome, by enumerating all
/// 2^n errors.
fn exhaustive_minimum(lat: &Lattice) -> HashMap<Bits, usize> {
    let n = lat.n_qubits();
    let mut best: HashMap<Bits, usize> = HashMap::new();
    for mask in 0u64..(1 << n) {
        let e = Chain::new(Grade::C1, Bits::from_u64(n, mask));
        let s = lat.boundary(&e).unwrap().bits;
        let w = mask.count_ones() as usize;
        best.entry(s).and_modify(|b| *b = (*b).min(w)).or_insert(w);
    }
    best
}

fn random_syndrome(lat: &Lattice, rng: &mut SplitMix64, p: f64) -> Chain {
    let e = Chain::new(
        Grade::C1,
        Bits::from_bools(&(0..lat.n_qubits()).map(|_| rng.coin(p)).collect::<Vec<_>>()),
    );
    lat.boundary(&e).unwrap()
}

#[test]
fn empty_syndrome_decodes_to_nothing() {
    for kind in [Family::Toric, Family::Planar, Family::Rotated] {
        let lat = lattice(kind, 4, Side::Primal);
        for solver in [Solver::Blossom, Solver::Separator] {
            let r = decode_smw(&lat, &lat.zero_chain(Grade::C0), &default_profile(&lat), solver).unwrap();
            assert!(r.error.is_zero());
            assert_eq!(r.weight, 0);
        }
    }
}

#[test]
fn optimal_on_every_syndrome_of_small_codes() {
    let cases = [
        (Family::Rotated, 3),
        (Family::Planar, 2),
        (Family::Planar, 3),
        (Family::Toric, 2),
    ];
    for (kind, l) in cases {
        for side in [Side::Primal, Side::Dual] {
            let lat = lattice(kind, l, side);
            let profile = default_profile(&lat);
            for (s, &w) in &exhaustive_minimum(&lat) {
                let s = Chain::new(Grade::C0, s.clone());
                for solver in [Solver::Blossom, Solver::Separator] {
                    let r = decode_smw(&lat, &s, &profile, solver).unwrap();
                    assert_eq!(r.weight as usize, w, "{kind:?} L={l} {side:?} {solver:?}");
                    assert_eq!(r.error.weight(), w);
                }
            }
        }
    }
}

#[test]
fn agrees_with_classical_decoder() {
    let mut rng = SplitMix64::new(11);
    for (kind, l) in [(Family::Toric, 4), (Family::Toric, 5), (Family::Planar, 5), (Family::Rotated, 6)] {
        for side in [Side::Primal, Side::Dual] {
            let lat = lattice(kind, l, side);
            let profile = default_profile(&lat);
            for _ in 0..30 {
                let s = random_syndrome(&lat, &mut rng, 0.12);
                let a = decode_smw(&lat, &s, &profile, Solver::Blossom).unwrap();
                let b = decode_smw(&lat, &s, &profile, Solver::Separator).unwrap();
                let c = classical_weight(&lat, &s, &|_| 1).unwrap();
                assert_eq!((a.weight, b.weight), (c, c), "{kind:?} L={l} {side:?}");
            }
        }
    }
}

#[test]
fn odd_gadgets_match_single_vertex_on_even_torus() {
    let mut rng = SplitMix64::new(5);
    let lat = lattice(Family::Toric, 6, Side::Primal);
    let odd = DecorationProfile::smw(DefectStyle::OddGadget, EvenStyle::PlanarFisher);
    let single = DecorationProfile::smw(DefectStyle::SingleVertex, EvenStyle::NonplanarK4);
    for _ in 0..20 {
        let s = random_syndrome(&lat, &mut rng, 0.15);
        let a = decode_smw(&lat, &s, &odd, Solver::Separator).unwrap();
        let b = decode_smw(&lat, &s, &single, Solver::Separator).unwrap();
        assert_eq!(a.weight, b.weight);
        let rep = verify_djoin(&lat, &s, &b.error).unwrap();
        assert!(rep.bad_defects(&s).is_empty());
    }
}

#[test]
fn llr_weights_match_classical_dijkstra() {
    let mut rng = SplitMix64::new(8);
    let lat = lattice(Family::Planar, 4, Side::Primal);
    let p: Vec<f64> = (0..lat.n_qubits()).map(|_| 0.01 + 0.3 * rng.next_f64()).collect();
    let mut profile = DecorationProfile::smw(DefectStyle::OddGadget, EvenStyle::NonplanarK4);
    profile.weighting = gadgets::Weighting::Llr(p.clone());
    for _ in 0..20 {
        let s = random_syndrome(&lat, &mut rng, 0.15);
        let r = decode_smw(&lat, &s, &profile, Solver::Separator).unwrap();
        let c = classical_weight(&lat, &s, &|e| gadgets::llr_weight(p[e])).unwrap();
        assert_eq!(r.weight, c);
        assert_eq!(chain_weight(&profile, &r.error), c);
    }
}

#[test]
fn odd_torus_syndrome_rejected() {
    let lat = lattice(Family::Toric, 4, Side::Primal);
    let s = Chain::from_indices(Grade::C0, lat.n_checks(), [3]);
    let err = decode_smw(&lat, &s, &default_profile(&lat), Solver::Separator).unwrap_err();
    assert_eq!(err.to_string(), "invalid syndrome parity");
}

#[test]
fn join_verifier_flags_both_ends_of_a_missing_edge() {
    let lat = lattice(Family::Toric, 4, Side::Primal);
    let empty = verify_djoin(&lat, &lat.zero_chain(Grade::C0), &lat.zero_chain(Grade::C1)).unwrap();
    assert!(empty.pass);
    let e = Chain::from_indices(Grade::C1, lat.n_qubits(), [0, 2]);
    let s = lat.boundary(&e).unwrap();
    assert!(verify_djoin(&lat, &s, &e).unwrap().pass);
    let short = Chain::from_indices(Grade::C1, lat.n_qubits(), [0]);
    let rep = verify_djoin(&lat, &s, &short).unwrap();
    assert!(!rep.pass);
    let mut ends = lat.edge(2).ends.to_vec();
    ends.sort_unstable();
    assert_eq!(rep.violations(), ends);
}

fn in_plaquette_space(lat: &Lattice, a: &Chain, b: &Chain) -> bool {
    lat.stabilizer_space().contains(&a.bits.xor(&b.bits))
}

#[test]
fn resolution_leaves_good_joins_alone() {
    let lat = lattice(Family::Toric, 4, Side::Primal);
    let e = Chain::from_indices(Grade::C1, lat.n_qubits(), [0]);
    let s = lat.boundary(&e).unwrap();
    let r = resolve_bad_defects(&lat, &s, &e).unwrap();
    assert_eq!(r.join, e);
    assert!(r.plaquettes.is_empty());
}

#[test]
fn resolution_campaign() {
    let mut rng = SplitMix64::new(21);
    let odd = DecorationProfile::smw(DefectStyle::OddGadget, EvenStyle::PlanarFisher);
    let mut total_bad = 0;
    for (kind, l) in [(Family::Toric, 4), (Family::Toric, 6), (Family::Planar, 3), (Family::Planar, 5), (Family::Rotated, 4)] {
        for side in [Side::Primal, Side::Dual] {
            let lat = lattice(kind, l, side);
            for _ in 0..60 {
                let s = random_syndrome(&lat, &mut rng, 0.3);
                let j = decode_smw(&lat, &s, &odd, Solver::Blossom).unwrap().error;
                let r = resolve_bad_defects(&lat, &s, &j).unwrap();
                total_bad += r.bad_before;
                assert_eq!(r.join.weight(), j.weight());
                let rep = verify_djoin(&lat, &s, &r.join).unwrap();
                assert!(rep.pass && rep.bad_defects(&s).is_empty(), "{kind:?} L={l} {side:?}");
                assert!(in_plaquette_space(&lat, &j, &r.join));
            }
        }
    }
    assert!(total_bad > 0, "campaign never produced a degree-3 defect");
}

#[test]
fn resolution_of_constructed_bad_defect() {
    // three edges at vertex 5 of the L=4 torus plus one more edge: an
    // optimal 4-defect join with one degree-3 defect
    let lat = lattice(Family::Toric, 4, Side::Primal);
    let v = 5;
    let es: Vec<usize> = lat.incident(v)[..3].to_vec();
    let j = Chain::from_indices(Grade::C1, lat.n_qubits(), es);
    let s = lat.boundary(&j).unwrap();
    let c = classical_weight(&lat, &s, &|_| 1).unwrap();
    assert_eq!(c, 3);
    let r = resolve_bad_defects(&lat, &s, &j).unwrap();
    assert_eq!(r.bad_before, 1);
    assert_eq!(r.join.weight(), 3);
    assert!(verify_djoin(&lat, &s, &r.join).unwrap().bad_defects(&s).is_empty());
    assert!(in_plaquette_space(&lat, &j, &r.join));
}

#[test]
fn resolution_rejects_non_minimal_join() {
    // degree-3 vertex v plus the far edge (a, p) on both 4-cycles through v:
    // both partners become defects and the transfer step shrinks the join
    let lat = lattice(Family::Toric, 4, Side::Primal);
    let v = 5;
    let inc = lat.incident(v).to_vec();
    let step = |e: usize| lat.step_from(v, e);
    let (ea1, ea2) = (inc[0], inc[2]);
    assert_eq!((step(ea1).0, step(ea1).1), (-step(ea2).0, -step(ea2).1));
    let eb = inc[1];
    let mut ones = vec![ea1, eb, ea2];
    for ea in [ea1, ea2] {
        let a = lat.other_end(ea, v);
        let pl = *lat.plaquettes_of(ea).iter().find(|p| lat.plaquettes_of(eb).contains(p)).unwrap();
        let far = lat
            .plaquette(pl)
            .iter()
            .copied()
            .find(|&e| e != ea && lat.edge(e).ends.contains(&a))
            .unwrap();
        ones.push(far);
    }
    let j = Chain::from_indices(Grade::C1, lat.n_qubits(), ones);
    let s = lat.boundary(&j).unwrap();
    assert!(matches!(resolve_bad_defects(&lat, &s, &j), Err(Error::NonMinimalJoin { vertex: 5 })));
}

/// Same-size joins in the class of `j` in which every defect has degree 1,
/// by enumerating the plaquette space.
fn resolved_joins_in_class(lat: &Lattice, d: &Chain, j: &Chain) -> usize {
    let good = |x: &Bits| d.bits.iter_ones().all(|v| lat.incident(v).iter().filter(|&&e| x.get(e)).count() == 1);
    lat.stabilizer_space()
        .elements()
        .map(|s| j.bits.xor(&s))
        .filter(|x| x.count_ones() == j.weight() && good(x))
        .count()
}

fn rotated_instance(l: usize, side: Side, d: &[usize], j: &[usize]) -> (Lattice, Chain, Chain) {
    let lat = lattice(Family::Rotated, l, side);
    let d = Chain::from_indices(Grade::C0, lat.n_checks(), d.iter().copied());
    let j = Chain::from_indices(Grade::C1, lat.n_qubits(), j.iter().copied());
    assert_eq!(lat.boundary(&j).unwrap(), d);
    assert_eq!(j.weight() as i128, classical_weight(&lat, &d, &|_| 1).unwrap());
    (lat, d, j)
}

#[test]
fn resolution_skips_missing_corner_partner() {
    // vertex 4 sits next to a corner: one diagonal plaquette is absent, the
    // other partner is free
    let (lat, d, j) = rotated_instance(4, Side::Dual, &[0, 2, 3, 4, 6, 7], &[4, 7, 10, 11]);
    let r = resolve_bad_defects(&lat, &d, &j).unwrap();
    assert_eq!((r.bad_before, r.transfers, r.retries), (1, 0, 0));
    assert!(verify_djoin(&lat, &d, &r.join).unwrap().bad_defects(&d).is_empty());
    assert!(in_plaquette_space(&lat, &j, &r.join));
}

#[test]
fn resolution_reverses_a_walk_stuck_at_a_corner() {
    let (lat, d, j) = rotated_instance(
        6,
        Side::Dual,
        &[2, 3, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16],
        &[9, 11, 12, 13, 22, 23, 24, 26, 28],
    );
    let r = resolve_bad_defects(&lat, &d, &j).unwrap();
    assert_eq!(r.retries, 1);
    assert_eq!(r.join.weight(), j.weight());
    assert!(verify_djoin(&lat, &d, &r.join).unwrap().bad_defects(&d).is_empty());
    assert!(in_plaquette_space(&lat, &j, &r.join));
}

#[test]
fn resolution_dead_end_is_reported() {
    // both walks from vertex 6 end at a missing corner partner, although
    // resolved joins of the same size exist in the same class
    let (lat, d, j) = rotated_instance(
        6,
        Side::Dual,
        &[0, 1, 3, 4, 6, 7, 8, 9, 10, 12, 13, 15, 17],
        &[0, 1, 11, 12, 16, 17, 20, 29, 32],
    );
    assert!(matches!(resolve_bad_defects(&lat, &d, &j), Err(Error::CornerDeadEnd { vertex: 6 })));
    assert!(resolved_joins_in_class(&lat, &d, &j) > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn solvers_agree_on_random_toric_syndromes(seed in any::<u64>(), l in 4usize..8) {
        let lat = lattice(Family::Toric, l, Side::Dual);
        let mut rng = SplitMix64::new(seed);
        let s = random_syndrome(&lat, &mut rng, 0.2);
        let p = default_profile(&lat);
        let a = decode_smw(&lat, &s, &p, Solver::Blossom).unwrap();
        let b = decode_smw(&lat, &s, &p, Solver::Separator).unwrap();
        prop_assert_eq!(a.weight, b.weight);
        prop_assert!(verify_djoin(&lat, &s, &b.error).unwrap().pass);
    }
}

#[test]
fn odd_torus_single_vertex_harness() {
    // single-vertex defects are only proven safe on even tori; report how
    // often they miss the minimum on odd ones without asserting anything
    let mut rng = SplitMix64::new(5);
    let mut single = DecorationProfile::smw(DefectStyle::SingleVertex, EvenStyle::NonplanarK4);
    single.allow_single_vertex_odd_toric = true;
    for l in [3, 5] {
        let lat = lattice(Family::Toric, l, Side::Primal);
        let (mut runs, mut above, mut errors) = (0, 0, 0);
        for _ in 0..100 {
            let s = random_syndrome(&lat, &mut rng, 0.15);
            runs += 1;
            match decode_smw(&lat, &s, &single, Solver::Blossom) {
                Ok(r) if r.weight > classical_weight(&lat, &s, &|_| 1).unwrap() => above += 1,
                Ok(_) => {}
                Err(_) => errors += 1,
            }
        }
        println!("toric L={l}: {runs} syndromes, {above} above the minimum, {errors} not decodable");
    }
}
