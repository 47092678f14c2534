//! Turns a minimum-size D-join into one of the same size in which every
//! defect has degree exactly 1, by xoring 4-cycles around bad defects.

use super::join::verify_djoin;
use crate::bits::Bits;
use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::lattice::{Family, Lattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub join: Chain,
    /// Plaquettes xored into the join, in order.
    pub plaquettes: Vec<usize>,
    /// Defects of degree 3 in the input.
    pub bad_before: usize,
    /// Steps that moved a bad defect to a diagonal partner.
    pub transfers: usize,
    /// Edges rerouted away from degree-1 boundary vertices (rotated only).
    pub rerouted: usize,
    /// Walks undone at a missing corner partner and redone the other way.
    pub retries: usize,
}

/// A diagonal partner and the plaquette holding it and the bad defect.
#[derive(Clone, Copy, Debug)]
struct Partner {
    vertex: usize,
    plaquette: usize,
}

struct State<'a> {
    lat: &'a Lattice,
    join: Bits,
    size: usize,
    plaquettes: Vec<usize>,
}

impl State<'_> {
    fn degree(&self, v: usize) -> usize {
        self.lat.incident(v).iter().filter(|&&e| self.join.get(e)).count()
    }

    fn xor_plaquette(&mut self, p: usize, at: usize) -> Result<()> {
        self.join.xor_with(&self.lat.plaquette_boundary(p));
        let size = self.join.count_ones();
        if size < self.size {
            return Err(Error::NonMinimalJoin { vertex: at });
        }
        if size > self.size {
            return Err(Error::Invariant(format!("4-cycle at vertex {at} grew the join")));
        }
        self.plaquettes.push(p);
        Ok(())
    }

    /// The two diagonal partners across the aligned J-edges. A partner is
    /// `None` when its plaquette is a missing half-plaquette at a rotated corner.
    fn partners(&self, v: usize) -> Result<[Option<Partner>; 2]> {
        let lat = self.lat;
        let js: Vec<usize> = lat.incident(v).iter().copied().filter(|&e| self.join.get(e)).collect();
        if js.len() != 3 {
            return Err(Error::Invariant(format!("vertex {v} has J-degree {}", js.len())));
        }
        let step = |e: usize| lat.step_from(v, e);
        let (i, k) = [(0, 1), (0, 2), (1, 2)]
            .into_iter()
            .find(|&(i, k)| {
                let (a, b) = (step(js[i]), step(js[k]));
                a.0 == -b.0 && a.1 == -b.1
            })
            .ok_or_else(|| Error::Invariant(format!("no aligned J-edges at vertex {v}")))?;
        let eb = js[3 - i - k];
        let b = lat.other_end(eb, v);
        let partner = |ea: usize| -> Result<Option<Partner>> {
            let a = lat.other_end(ea, v);
            let Some(plaquette) = lat.plaquettes_of(ea).iter().copied().find(|p| lat.plaquettes_of(eb).contains(p)) else {
                return Ok(None);
            };
            let vertex = lat
                .plaquette(plaquette)
                .iter()
                .flat_map(|&e| lat.edge(e).ends)
                .find(|&x| x != v && x != a && x != b)
                .ok_or_else(|| Error::Invariant(format!("degenerate plaquette {plaquette}")))?;
            Ok(Some(Partner { vertex, plaquette }))
        };
        Ok([partner(js[i])?, partner(js[k])?])
    }
}

pub fn resolve_bad_defects(lat: &Lattice, d: &Chain, j: &Chain) -> Result<Resolution> {
    let l = lat.distance();
    match lat.kind() {
        Family::Toric if l % 2 == 1 || l < 4 => {
            return Err(Error::InvalidArgument(format!("torus needs even L >= 4, got {l}")));
        }
        Family::Planar | Family::Rotated if l < 3 => {
            return Err(Error::InvalidArgument(format!("surface needs L >= 3, got {l}")));
        }
        _ => {}
    }
    let report = verify_djoin(lat, d, j)?;
    if !report.pass {
        return Err(Error::InvalidArgument(format!(
            "not a D-join: parity fails at {:?}",
            report.violations()
        )));
    }
    let bad_before = d.bits.iter_ones().filter(|&v| report.degrees[v] == 3).count();
    let mut st = State {
        lat,
        join: j.bits.clone(),
        size: j.weight(),
        plaquettes: Vec::new(),
    };

    let mut rerouted = 0;
    if lat.kind() == Family::Rotated {
        for w in lat.boundary_vertices() {
            if lat.degree(w) != 1 {
                continue;
            }
            let e = lat.incident(w)[0];
            if !st.join.get(e) {
                continue;
            }
            let u = lat.other_end(e, w);
            let f = lat
                .incident(u)
                .iter()
                .copied()
                .find(|&f| {
                    let x = lat.other_end(f, u);
                    f != e && lat.is_boundary(x) && lat.degree(x) == 2
                })
                .ok_or_else(|| Error::Invariant(format!("check {u} has no second boundary edge")))?;
            st.join.flip(e);
            st.join.flip(f);
            if st.join.count_ones() < st.size {
                return Err(Error::NonMinimalJoin { vertex: u });
            }
            rerouted += 1;
        }
    }

    let is_defect = |x: usize| !lat.is_boundary(x) && d.bits.get(x);
    let cap = 8 * lat.n_vertices_total() * (d.weight() + 1);
    let mut steps = 0;
    let mut transfers = 0;
    let mut retries = 0;
    while let Some(start) = d.bits.iter_ones().find(|&v| st.degree(v) == 3) {
        // Near a rotated corner the walk can reach a bad defect whose onward
        // partner is a missing half-plaquette. The first step's direction is
        // free, so undo the walk and go the other way.
        let (join, undo) = (st.join.clone(), st.plaquettes.len());
        let mut resolved = false;
        for reverse in [false, true] {
            if reverse {
                st.join = join.clone();
                st.plaquettes.truncate(undo);
                retries += 1;
            }
            let mut v = start;
            let mut prev: Option<usize> = None;
            let mut moved = 0;
            loop {
                steps += 1;
                if steps > cap {
                    return Err(Error::IterationCap(cap));
                }
                let [mut p1, mut p2] = st.partners(v)?;
                match prev {
                    Some(pv) => {
                        if p2.is_some_and(|p| p.vertex == pv) {
                            std::mem::swap(&mut p1, &mut p2);
                        } else if !p1.is_some_and(|p| p.vertex == pv) {
                            return Err(Error::Invariant(format!(
                                "previous bad defect {pv} is not a diagonal partner of {v}"
                            )));
                        }
                    }
                    None if p2.is_none() != reverse => std::mem::swap(&mut p1, &mut p2),
                    None => {}
                }
                if prev.is_none() {
                    if let Some(p) = p1.filter(|p| !is_defect(p.vertex)) {
                        st.xor_plaquette(p.plaquette, v)?;
                        resolved = true;
                        break;
                    }
                }
                let Some(p2) = p2 else { break };
                st.xor_plaquette(p2.plaquette, v)?;
                if !is_defect(p2.vertex) {
                    resolved = true;
                    break;
                }
                prev = Some(v);
                v = p2.vertex;
                moved += 1;
            }
            if resolved {
                transfers += moved;
                break;
            }
        }
        if !resolved {
            // TODO: search for a size-preserving relative cycle through `start`
            // instead; rotated L=6 dual in tests/smw.rs reaches this
            return Err(Error::CornerDeadEnd { vertex: start });
        }
    }

    Ok(Resolution {
        join: Chain::new(j.grade, st.join),
        plaquettes: st.plaquettes,
        bad_before,
        transfers,
        rerouted,
        retries,
    })
}
