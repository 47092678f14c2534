//! Invariant campaigns behind `surface-decode verify`. Each campaign checks
//! library results against small exhaustive computations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::chain::{Chain, Grade};
use crate::error::Result;
use crate::gadgets::{make_gadget, DecoratedGraph, DecorationProfile, DefectStyle, EvenStyle, Parity};
use crate::gf2::LinearCode;
use crate::lattice::{build_lattice, CodeFamily, Family, Lattice, LatticePair, Side};
use crate::rng::SplitMix64;
use crate::smlc::{
    coset_prob_dual, coset_prob_depolarizing, det_exact, kasteleyn_orient, matching_sign, pfaffian_signed,
    toric_orientations, Backend, SkewSystem, SmlcDecoder, TORIC_COEFFICIENTS,
};
use crate::smw::{classical_weight, decode_smw, default_profile, resolve_bad_defects, verify_djoin, Solver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Gadgets,
    Joins,
    Duality,
    Pfaffian,
    Resolution,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Gadgets => "gadgets",
            Suite::Joins => "joins",
            Suite::Duality => "duality",
            Suite::Pfaffian => "pfaffian",
            Suite::Resolution => "resolution",
            Suite::All => "all",
        }
    }
}

/// How much work each campaign does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest gadget degree enumerated.
    pub max_degree: usize,
    /// Longest random code in the duality campaign (at most 16).
    pub max_code_len: usize,
    /// Random instances per campaign or per lattice.
    pub instances: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_degree: 8,
            max_code_len: 12,
            instances: 200,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}/{}: {}\n", c.suite.name(), c.name, c.detail));
        }
        out
    }

    fn push(&mut self, suite: Suite, name: impl Into<String>, failures: usize, total: usize, first: Option<String>) {
        let mut detail = format!("{} of {total} instances ok", total - failures);
        if let Some(f) = first {
            detail.push_str(&format!("; first failure: {f}"));
        }
        self.checks.push(Check {
            suite,
            name: name.into(),
            passed: failures == 0 && total > 0,
            detail,
        });
    }
}

/// Tallies instance outcomes for one check.
#[derive(Default)]
struct Tally {
    total: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn result<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(x) => Some(x),
            Err(e) => {
                let w = what();
                self.record(false, || format!("{w}: {e}"));
                None
            }
        }
    }

    fn finish(self, report: &mut Report, suite: Suite, name: &str) {
        report.push(suite, name, self.failures, self.total, self.first);
    }
}

pub fn run_suite(suite: Suite, budget: &Budget) -> Report {
    let mut report = Report::default();
    let all = suite == Suite::All;
    if all || suite == Suite::Gadgets {
        gadgets(budget, &mut report);
    }
    if all || suite == Suite::Joins {
        joins(budget, &mut report);
    }
    if all || suite == Suite::Duality {
        duality(budget, &mut report);
    }
    if all || suite == Suite::Pfaffian {
        pfaffian(budget, &mut report);
    }
    if all || suite == Suite::Resolution {
        resolution(budget, &mut report);
    }
    report
}

fn gadgets(budget: &Budget, report: &mut Report) {
    let mut t = Tally::default();
    let mut cases: Vec<(Parity, usize, bool)> = Vec::new();
    for k in 1..=budget.max_degree {
        for parity in [Parity::Even, Parity::Odd] {
            cases.push((parity, k, true));
        }
    }
    if budget.max_degree >= 4 {
        cases.push((Parity::Even, 4, false));
    }
    for (parity, k, planar) in cases {
        let Some(g) = t.result(make_gadget(parity, k, planar), || format!("{parity:?} degree {k}")) else {
            continue;
        };
        for subset in 0u64..(1 << k) {
            let removed = (0..k)
                .filter(|j| subset >> j & 1 == 1)
                .fold(0u64, |m, j| m | 1 << g.port_vertex[j]);
            let count = g.count_matchings_without(removed);
            let want = parity.admits(subset.count_ones() as usize);
            // planar gadgets also have at most one matching per port subset
            let ok = (count > 0) == want && (!planar || count <= 1);
            t.record(ok, || format!("{parity:?} degree {k} ports {subset:b}: {count} matchings"));
        }
    }
    t.finish(report, Suite::Gadgets, "port parity");
}

fn random_syndrome(lat: &Lattice, rng: &mut SplitMix64, p: f64) -> Chain {
    let e = Chain::new(
        Grade::C1,
        Bits::from_bools(&(0..lat.n_qubits()).map(|_| rng.coin(p)).collect::<Vec<_>>()),
    );
    lat.boundary(&e).expect("error chain on its own lattice")
}

fn lattice_cases(cases: &[(Family, usize)]) -> Vec<Lattice> {
    let mut out = Vec::new();
    for &(kind, l) in cases {
        for side in [Side::Primal, Side::Dual] {
            out.push(build_lattice(CodeFamily::new(kind, l).expect("supported size"), side).expect("valid lattice"));
        }
    }
    out
}

fn label(lat: &Lattice) -> String {
    format!("{} L={} {}", lat.kind().name(), lat.distance(), lat.side().name())
}

fn joins(budget: &Budget, report: &mut Report) {
    let mut t = Tally::default();
    let mut rng = SplitMix64::new(budget.seed);
    let lats = lattice_cases(&[(Family::Toric, 4), (Family::Planar, 3), (Family::Planar, 4), (Family::Rotated, 3), (Family::Rotated, 4)]);
    let per = budget.instances.div_ceil(lats.len()).max(1);
    for lat in &lats {
        let profile = default_profile(lat);
        for _ in 0..per {
            let s = random_syndrome(lat, &mut rng, 0.1);
            let what = || label(lat);
            let Some(b) = t.result(decode_smw(lat, &s, &profile, Solver::Blossom), what) else { continue };
            let Some(sep) = t.result(decode_smw(lat, &s, &profile, Solver::Separator), what) else { continue };
            let Some(c) = t.result(classical_weight(lat, &s, &|_| 1), what) else { continue };
            let joins_ok = [&b.error, &sep.error]
                .iter()
                .all(|j| verify_djoin(lat, &s, j).map(|r| r.pass).unwrap_or(false));
            t.record(joins_ok && b.weight == sep.weight && b.weight == c, || {
                format!("{}: weights {} / {} / {c}, joins valid {joins_ok}", label(lat), b.weight, sep.weight)
            });
        }
    }
    t.finish(report, Suite::Joins, "solvers and classical decoder agree");
}

fn bsc_probability(e: &Bits, p: &BigRational) -> BigRational {
    let k = e.count_ones();
    let q = BigRational::one() - p;
    num_traits::pow(p.clone(), k) * num_traits::pow(q, e.len() - k)
}

fn random_code(rng: &mut SplitMix64, n: usize) -> LinearCode {
    let k = rng.below(n as u64 + 1) as usize;
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let gens: Vec<Bits> = (0..k).map(|_| Bits::from_u64(n, rng.next_u64() & mask)).collect();
    LinearCode::from_generators(n, &gens)
}

fn random_bits(rng: &mut SplitMix64, n: usize) -> Bits {
    Bits::from_bools(&(0..n).map(|_| rng.coin(0.5)).collect::<Vec<_>>())
}

fn duality(budget: &Budget, report: &mut Report) {
    let mut rng = SplitMix64::new(budget.seed ^ 0xd0a1);
    let max_n = budget.max_code_len.clamp(1, 16);
    let probs = [
        BigRational::new(1.into(), 10.into()),
        BigRational::new(1.into(), 4.into()),
        BigRational::new(2.into(), 5.into()),
    ];

    let mut t = Tally::default();
    for i in 0..budget.instances {
        let n = 1 + i % max_n;
        let code = random_code(&mut rng, n);
        let e = random_bits(&mut rng, n);
        let p = &probs[i % 3];
        let direct = code
            .dual()
            .codewords()
            .map(|y| bsc_probability(&e.xor(&y), p))
            .fold(BigRational::zero(), |a, b| a + b);
        if let Some(x) = t.result(coset_prob_dual(&code, &e, &vec![p.clone(); n]), || format!("n={n}")) {
            t.record(x == direct, || format!("n={n}, dim {}: {x} != {direct}", code.dim()));
        }
    }
    t.finish(report, Suite::Duality, "bit-flip coset sums");

    let mut t = Tally::default();
    for i in 0..budget.instances.div_ceil(2) {
        let n = 1 + i % 6;
        let (c1, c2) = (random_code(&mut rng, n), random_code(&mut rng, n));
        let (e1, e2) = (random_bits(&mut rng, n), random_bits(&mut rng, n));
        let p = &probs[i % 3];
        let third = p / BigRational::from_integer(3.into());
        let q = BigRational::one() - p;
        let perp2: Vec<Bits> = c2.dual().codewords().collect();
        let mut direct = BigRational::zero();
        for y1 in c1.dual().codewords() {
            for y2 in &perp2 {
                let k = e1.xor(&y1).or(&e2.xor(y2)).count_ones();
                direct += num_traits::pow(third.clone(), k) * num_traits::pow(q.clone(), n - k);
            }
        }
        if let Some(x) = t.result(coset_prob_depolarizing(&c1, &c2, &e1, &e2, p), || format!("n={n}")) {
            t.record(x == direct, || format!("n={n}: {x} != {direct}"));
        }
    }
    t.finish(report, Suite::Duality, "depolarizing coset sums");

    let mut t = Tally::default();
    for n in [3, 6, max_n.min(10)] {
        let code = random_code(&mut rng, n);
        let perp = code.dual();
        let p = &probs[1];
        let mut seen = std::collections::HashSet::new();
        let mut total = BigRational::zero();
        for mask in 0u64..(1 << n) {
            let e = Bits::from_u64(n, mask);
            if seen.insert(perp.coset_key(&e)) {
                if let Some(x) = t.result(coset_prob_dual(&code, &e, &vec![p.clone(); n]), || format!("n={n}")) {
                    total += x;
                }
            }
        }
        t.record(total.is_one(), || format!("n={n}: total {total}"));
    }
    t.finish(report, Suite::Duality, "normalization");
}

/// Signed sum over all pairings of `0..n`, with signs from inversion counts.
pub fn pfaffian_by_pairings(a: &[Vec<BigInt>]) -> BigInt {
    fn go(a: &[Vec<BigInt>], left: &mut Vec<usize>, perm: &mut Vec<usize>, total: &mut BigInt) {
        if left.is_empty() {
            let mut inversions = 0;
            for i in 0..perm.len() {
                inversions += perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
            }
            let mut term = BigInt::from(if inversions % 2 == 0 { 1 } else { -1 });
            for pair in perm.chunks(2) {
                term *= &a[pair[0]][pair[1]];
            }
            *total += term;
            return;
        }
        let i = left.remove(0);
        for idx in 0..left.len() {
            let j = left.remove(idx);
            perm.extend([i, j]);
            go(a, left, perm, total);
            perm.truncate(perm.len() - 2);
            left.insert(idx, j);
        }
        left.insert(0, i);
    }
    let mut total = BigInt::zero();
    go(a, &mut (0..a.len()).collect(), &mut Vec::new(), &mut total);
    total
}

/// Every perfect matching of a small graph, as sorted edge lists.
pub fn all_perfect_matchings(n: usize, ends: &[(usize, usize)]) -> Vec<Vec<usize>> {
    fn go(n: usize, ends: &[(usize, usize)], used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(v) = (0..n).find(|&v| !used[v]) else {
            let mut m = cur.clone();
            m.sort_unstable();
            out.push(m);
            return;
        };
        used[v] = true;
        for (i, &(a, b)) in ends.iter().enumerate() {
            let u = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
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

/// Largest decorated graph whose perfect matchings are enumerated.
pub const MAX_AUDIT_ATOMS: usize = 24;

fn pfaffian(budget: &Budget, report: &mut Report) {
    let mut rng = SplitMix64::new(budget.seed ^ 0x9faf);
    let mut t = Tally::default();
    for i in 0..budget.instances {
        let n = 2 * (i % 6);
        let mut dense = vec![vec![BigInt::zero(); n]; n];
        let mut entries = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.coin(0.6) {
                    let w = rng.below(7) as i64 - 3;
                    dense[a][b] = w.into();
                    dense[b][a] = (-w).into();
                    entries.push((a, b, BigRational::from_integer(w.into())));
                }
            }
        }
        let sk = SkewSystem {
            dim: n,
            entries,
            backend: Backend::Exact,
        };
        let (Some(pf), Some(det)) = (
            t.result(pfaffian_signed(&sk), || format!("n={n}")),
            t.result(det_exact(&sk), || format!("n={n}")),
        ) else {
            continue;
        };
        let want = BigRational::from_integer(pfaffian_by_pairings(&dense));
        t.record(&pf * &pf == det && pf == want, || format!("n={n}: Pf {pf}, expansion {want}, det {det}"));
    }
    t.finish(report, Suite::Pfaffian, "Pf^2 = det");

    let mut t = Tally::default();
    let half = BigRational::new(1.into(), 10.into());
    for kind in [Family::Planar, Family::Rotated, Family::Toric] {
        for l in 2..=4 {
            let Ok(fam) = CodeFamily::new(kind, l) else { continue };
            let Ok(pair) = LatticePair::new(fam) else { continue };
            for side in [Side::Primal, Side::Dual] {
                let n = pair.get(side).n_qubits();
                let what = || format!("{} L={l} {}", kind.name(), side.name());
                let Some(dec) = t.result(SmlcDecoder::new(&pair, side, &vec![half.clone(); n], Backend::Exact), what)
                else {
                    continue;
                };
                let g = dec.graph();
                if g.n_atoms > MAX_AUDIT_ATOMS {
                    continue;
                }
                let ms = all_perfect_matchings(g.n_atoms, &graph_ends(g));
                if kind == Family::Toric {
                    let Some(tk) = t.result(toric_orientations(g, pair.get(side.other())), what) else { continue };
                    let ok = ms.iter().all(|m| {
                        (0..4)
                            .map(|k| {
                                TORIC_COEFFICIENTS[k] as i32
                                    * tk.reference_signs[k] as i32
                                    * matching_sign(g, &tk.orientations[k], m) as i32
                            })
                            .sum::<i32>()
                            == 2
                    });
                    t.record(ok, || format!("{}: four-orientation combination", what()));
                } else {
                    let Some(o) = t.result(kasteleyn_orient(g), what) else { continue };
                    let s0 = ms.first().map(|m| matching_sign(g, &o, m));
                    let ok = ms.iter().all(|m| Some(matching_sign(g, &o, m)) == s0);
                    t.record(ok, || format!("{}: mixed matching signs", what()));
                }
            }
        }
    }
    t.finish(report, Suite::Pfaffian, "matching signs on small decorated graphs");
}

fn resolution(budget: &Budget, report: &mut Report) {
    let mut t = Tally::default();
    let mut rng = SplitMix64::new(budget.seed ^ 0x7e50);
    let profile = DecorationProfile::smw(DefectStyle::OddGadget, EvenStyle::PlanarFisher);
    let lats = lattice_cases(&[
        (Family::Toric, 4),
        (Family::Toric, 6),
        (Family::Planar, 3),
        (Family::Planar, 4),
        (Family::Planar, 5),
        (Family::Rotated, 3),
        (Family::Rotated, 4),
        (Family::Rotated, 5),
    ]);
    let per = budget.instances.div_ceil(lats.len()).max(1);
    for lat in &lats {
        let stab = lat.stabilizer_space();
        for _ in 0..per {
            let s = random_syndrome(lat, &mut rng, 0.3);
            let what = || label(lat);
            let Some(j) = t.result(decode_smw(lat, &s, &profile, Solver::Blossom), what) else { continue };
            let Some(r) = t.result(resolve_bad_defects(lat, &s, &j.error), what) else { continue };
            let rep = verify_djoin(lat, &s, &r.join);
            let degrees_ok = rep.map(|x| x.pass && x.bad_defects(&s).is_empty()).unwrap_or(false);
            let same_size = r.join.weight() == j.error.weight();
            let homologous = stab.contains(&r.join.bits.xor(&j.error.bits));
            t.record(degrees_ok && same_size && homologous, || {
                format!("{}: degrees {degrees_ok}, size kept {same_size}, homologous {homologous}", label(lat))
            });
        }
    }
    t.finish(report, Suite::Resolution, "bad defects resolved");
}
