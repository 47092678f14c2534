//! Decorated graphs: every check of a lattice replaced by a gadget, and
//! (for planar and rotated lattices) the boundary set B replaced by one
//! large gadget whose ports are the lattice edges touching B.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::catalog::{make_gadget, single_vertex, Gadget, Parity, Slot};
use crate::bits::Bits;
use crate::chain::{Chain, Grade};
use crate::error::{Error, Result};
use crate::lattice::{Family, Lattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefectStyle {
    SingleVertex,
    OddGadget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvenStyle {
    PlanarFisher,
    NonplanarK4,
}

/// LLR weights are stored as `round(ln((1-p)/p) * 2^32)`.
pub const LLR_SCALE: f64 = 4_294_967_296.0;

/// Probability used in place of an exact zero when forming an LLR.
pub const LLR_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq)]
pub enum Weighting {
    UnitZeroOne,
    /// Per-qubit flip probabilities, each below 1/2.
    Llr(Vec<f64>),
    /// `e_ref` is a 1-chain on the opposite lattice; `p` per qubit.
    Multiplicative { e_ref: Chain, p: Vec<BigRational> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecorationProfile {
    pub defect_style: DefectStyle,
    pub even_style: EvenStyle,
    pub weighting: Weighting,
    /// Permit the single-vertex defect style on odd toric lattices.
    pub allow_single_vertex_odd_toric: bool,
}

impl DecorationProfile {
    pub fn smw(defect_style: DefectStyle, even_style: EvenStyle) -> Self {
        DecorationProfile {
            defect_style,
            even_style,
            weighting: Weighting::UnitZeroOne,
            allow_single_vertex_odd_toric: false,
        }
    }

    pub fn smlc(e_ref: Chain, p: Vec<BigRational>) -> Self {
        DecorationProfile {
            defect_style: DefectStyle::OddGadget,
            even_style: EvenStyle::PlanarFisher,
            weighting: Weighting::Multiplicative { e_ref, p },
            allow_single_vertex_odd_toric: false,
        }
    }
}

pub fn llr_weight(p: f64) -> i64 {
    let p = p.max(LLR_FLOOR);
    (((1.0 - p) / p).ln() * LLR_SCALE).round() as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    GadgetInternal,
    LatticeEdge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DEdge {
    pub u: usize,
    pub v: usize,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    Int(Vec<i64>),
    Exact(Vec<BigRational>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Owner {
    Check(usize),
    Boundary,
}

#[derive(Clone, Debug)]
pub struct Placed {
    pub gadget: Gadget,
    /// First atom id; local vertex i is atom `start + i`.
    pub start: usize,
    /// Lattice edge at each port, counter-clockwise as seen by the gadget.
    pub ports: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct DecoratedGraph {
    pub n_atoms: usize,
    pub edges: Vec<DEdge>,
    pub weights: Weights,
    pub owner: Vec<Owner>,
    /// One gadget per lattice check, indexed by check id.
    pub gadgets: Vec<Placed>,
    pub boundary_gadget: Option<Placed>,
    /// Decorated edge of each lattice edge.
    pub lattice_edge: Vec<usize>,
    /// Counter-clockwise decorated edges around every atom, when all
    /// gadgets are planar.
    pub embedding: Option<Vec<Vec<usize>>>,
    pub defects: Bits,
}

fn angle(step: (i32, i32)) -> f64 {
    (-(step.0 as f64)).atan2(step.1 as f64)
}

/// Rotates the cyclic list so that the largest gap in `key` falls between
/// the last and first entries (first maximum wins).
fn open_at_largest_gap<T: Copy>(items: &mut [T], gap: impl Fn(T, T) -> f64) {
    let k = items.len();
    if k < 2 {
        return;
    }
    let mut best = 0;
    let mut best_gap = f64::NEG_INFINITY;
    for j in 0..k {
        let g = gap(items[j], items[(j + 1) % k]);
        if g > best_gap + 1e-9 {
            best_gap = g;
            best = j;
        }
    }
    items.rotate_left((best + 1) % k);
}

pub fn build_decorated(lat: &Lattice, defects: &Chain, profile: &DecorationProfile) -> Result<DecoratedGraph> {
    lat.check_chain(defects)?;
    if defects.grade != Grade::C0 {
        return Err(Error::GradeMismatch {
            expected: "c0",
            got: defects.grade.name(),
        });
    }
    let toric = lat.kind() == Family::Toric;
    if toric && defects.weight() % 2 == 1 {
        return Err(Error::InvalidSyndromeParity);
    }
    if toric
        && profile.defect_style == DefectStyle::SingleVertex
        && lat.distance() % 2 == 1
        && !profile.allow_single_vertex_odd_toric
    {
        return Err(Error::Profile(
            "single-vertex defects need even L on the torus; use odd gadgets".into(),
        ));
    }
    if let Weighting::Multiplicative { e_ref, p } = &profile.weighting {
        if profile.even_style != EvenStyle::PlanarFisher {
            return Err(Error::Profile("multiplicative weights need planar gadgets".into()));
        }
        if !defects.is_zero() {
            return Err(Error::Profile("multiplicative weights need an empty defect set".into()));
        }
        if e_ref.bits.len() != lat.n_qubits() || p.len() != lat.n_qubits() {
            return Err(Error::LengthMismatch {
                expected: lat.n_qubits(),
                got: e_ref.bits.len().min(p.len()),
            });
        }
    }
    if let Weighting::Llr(p) = &profile.weighting {
        if p.len() != lat.n_qubits() {
            return Err(Error::LengthMismatch {
                expected: lat.n_qubits(),
                got: p.len(),
            });
        }
        if p.iter().any(|&x| !(0.0..0.5).contains(&x)) {
            return Err(Error::Profile("LLR weights need every p_e in [0, 1/2)".into()));
        }
    }

    let mut owner = Vec::new();
    let mut gadgets = Vec::with_capacity(lat.n_checks());
    let mut all_planar = true;
    for v in 0..lat.n_checks() {
        let mut ports: Vec<usize> = lat.incident(v).to_vec();
        open_at_largest_gap(&mut ports, |a, b| {
            let d = angle(lat.step_from(v, b)) - angle(lat.step_from(v, a));
            d.rem_euclid(std::f64::consts::TAU)
        });
        let k = ports.len();
        let gadget = if defects.bits.get(v) {
            match profile.defect_style {
                DefectStyle::SingleVertex => single_vertex(k),
                DefectStyle::OddGadget => make_gadget(Parity::Odd, k, true)?,
            }
        } else {
            let planar = !(profile.even_style == EvenStyle::NonplanarK4 && k == 4);
            make_gadget(Parity::Even, k, planar)?
        };
        all_planar &= gadget.planar;
        let start = owner.len();
        owner.extend(std::iter::repeat(Owner::Check(v)).take(gadget.n_local));
        gadgets.push(Placed { gadget, start, ports });
    }

    let boundary_gadget = if lat.boundary_vertices().is_empty() {
        None
    } else {
        let mut ports: Vec<usize> = (0..lat.n_qubits())
            .filter(|&e| lat.edge(e).ends.iter().any(|&x| lat.is_boundary(x)))
            .collect();
        // clockwise around the lattice centre, reference points just inside B
        let n_pos = lat.n_vertices_total() as f64;
        let (cy, cx) = (0..lat.n_vertices_total()).fold((0.0, 0.0), |acc, v| {
            let (y, x) = lat.position(v);
            (acc.0 + y as f64 / n_pos, acc.1 + x as f64 / n_pos)
        });
        let reference = |e: usize| {
            let [a, b] = lat.edge(e).ends;
            let (bv, other) = if lat.is_boundary(a) { (a, b) } else { (b, a) };
            let (by, bx) = lat.position(bv);
            let (oy, ox) = lat.position(other);
            let y = by as f64 + 0.25 * (oy - by) as f64;
            let x = bx as f64 + 0.25 * (ox - bx) as f64;
            // math angle with y pointing up
            (-(y - cy)).atan2(x - cx)
        };
        ports.sort_by(|&a, &b| reference(b).partial_cmp(&reference(a)).unwrap().then(a.cmp(&b)));
        let check_cell = |e: usize| {
            let v = lat.check_ends(e).next().expect("boundary edge has a check end");
            lat.grid_cell(v)
        };
        open_at_largest_gap(&mut ports, |a, b| {
            let (ra, ca) = check_cell(a);
            let (rb, cb) = check_cell(b);
            (ra - rb).abs().max((ca - cb).abs()) as f64
        });
        let parity = Parity::of(defects.weight());
        let gadget = make_gadget(parity, ports.len(), true)?;
        let start = owner.len();
        owner.extend(std::iter::repeat(Owner::Boundary).take(gadget.n_local));
        Some(Placed { gadget, start, ports })
    };

    // decorated edges: gadget internals first (gadget by gadget), then the
    // lattice edges in index order
    let mut edges = Vec::new();
    let mut internal_ids: Vec<Vec<usize>> = Vec::new();
    for pl in gadgets.iter().chain(boundary_gadget.iter()) {
        let mut ids = Vec::with_capacity(pl.gadget.edges.len());
        for &(a, b) in &pl.gadget.edges {
            ids.push(edges.len());
            edges.push(DEdge {
                u: pl.start + a,
                v: pl.start + b,
                origin: Origin::GadgetInternal,
            });
        }
        internal_ids.push(ids);
    }
    // port position of every (lattice edge, side)
    let port_atom = |pl: &Placed, e: usize| -> usize {
        let j = pl.ports.iter().position(|&x| x == e).expect("edge is a port");
        pl.start + pl.gadget.port_vertex[j]
    };
    let mut lattice_edge = Vec::with_capacity(lat.n_qubits());
    for e in 0..lat.n_qubits() {
        let [a, b] = lat.edge(e).ends;
        let atom = |x: usize| {
            if lat.is_boundary(x) {
                port_atom(boundary_gadget.as_ref().unwrap(), e)
            } else {
                port_atom(&gadgets[x], e)
            }
        };
        lattice_edge.push(edges.len());
        edges.push(DEdge {
            u: atom(a),
            v: atom(b),
            origin: Origin::LatticeEdge(e),
        });
    }

    let weights = match &profile.weighting {
        Weighting::UnitZeroOne => Weights::Int(
            edges
                .iter()
                .map(|d| match d.origin {
                    Origin::GadgetInternal => 0,
                    Origin::LatticeEdge(_) => 1,
                })
                .collect(),
        ),
        Weighting::Llr(p) => Weights::Int(
            edges
                .iter()
                .map(|d| match d.origin {
                    Origin::GadgetInternal => 0,
                    Origin::LatticeEdge(e) => llr_weight(p[e]),
                })
                .collect(),
        ),
        Weighting::Multiplicative { e_ref, p } => Weights::Exact(
            edges
                .iter()
                .map(|d| match d.origin {
                    Origin::GadgetInternal => BigRational::one(),
                    Origin::LatticeEdge(e) => {
                        let two = BigRational::from_integer(2.into());
                        let w = BigRational::one() - two * &p[e];
                        if e_ref.bits.get(lat.dual_edge_of(e)) {
                            -w
                        } else {
                            w
                        }
                    }
                })
                .collect(),
        ),
    };

    let n_atoms = owner.len();
    let boundary_planar = boundary_gadget.as_ref().map_or(true, |b| b.gadget.planar);
    let embedding = if all_planar && boundary_planar {
        let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n_atoms];
        for (gi, pl) in gadgets.iter().chain(boundary_gadget.iter()).enumerate() {
            let local = pl.gadget.rotation.as_ref().expect("planar gadget has a rotation");
            for (li, slots) in local.iter().enumerate() {
                rot[pl.start + li] = slots
                    .iter()
                    .map(|s| match *s {
                        Slot::Internal(i) => internal_ids[gi][i],
                        Slot::Port(j) => lattice_edge[pl.ports[j]],
                    })
                    .collect();
            }
        }
        Some(rot)
    } else {
        None
    };

    Ok(DecoratedGraph {
        n_atoms,
        edges,
        weights,
        owner,
        gadgets,
        boundary_gadget,
        lattice_edge,
        embedding,
        defects: defects.bits.clone(),
    })
}

impl DecoratedGraph {
    pub fn int_weights(&self) -> Option<&[i64]> {
        match &self.weights {
            Weights::Int(w) => Some(w),
            Weights::Exact(_) => None,
        }
    }

    pub fn exact_weight(&self, i: usize) -> BigRational {
        match &self.weights {
            Weights::Int(w) => BigRational::from_integer(w[i].into()),
            Weights::Exact(w) => w[i].clone(),
        }
    }

    pub fn other(&self, i: usize, a: usize) -> usize {
        let d = &self.edges[i];
        if d.u == a {
            d.v
        } else {
            d.u
        }
    }

    /// All placed gadgets, checks first then the boundary gadget.
    pub fn placed(&self) -> impl Iterator<Item = &Placed> {
        self.gadgets.iter().chain(self.boundary_gadget.iter())
    }

    /// Lattice 1-chain selected by a perfect matching given as edge ids.
    pub fn matching_to_join(&self, matched: &[usize], n_qubits: usize) -> Result<Chain> {
        let mut seen = vec![false; self.n_atoms];
        let mut covered = 0;
        let mut out = Bits::zeros(n_qubits);
        for &i in matched {
            let d = &self.edges[i];
            for x in [d.u, d.v] {
                if seen[x] {
                    return Err(Error::InvalidArgument(format!("atom {x} matched twice")));
                }
                seen[x] = true;
                covered += 1;
            }
            if let Origin::LatticeEdge(e) = d.origin {
                out.set(e, true);
            }
        }
        if covered != self.n_atoms {
            return Err(Error::NotPerfect {
                unmatched: self.n_atoms - covered,
            });
        }
        Ok(Chain::new(Grade::C1, out))
    }

    /// Faces of the embedding as dart cycles; dart `2i` runs u to v on
    /// edge i, dart `2i+1` the other way.
    pub fn faces(&self) -> Result<Vec<Vec<usize>>> {
        let rot = self.embedding.as_ref().ok_or(Error::MissingEmbedding)?;
        // position of each dart's tail in its rotation
        let mut pos = vec![usize::MAX; 2 * self.edges.len()];
        for (a, list) in rot.iter().enumerate() {
            for (j, &i) in list.iter().enumerate() {
                let d = &self.edges[i];
                let dart = if d.u == a {
                    2 * i
                } else if d.v == a {
                    2 * i + 1
                } else {
                    return Err(Error::Embedding(format!("edge {i} listed at atom {a}")));
                };
                pos[dart] = j;
            }
        }
        if pos.contains(&usize::MAX) {
            return Err(Error::Embedding("rotation misses a dart".into()));
        }
        let head = |dart: usize| {
            let d = &self.edges[dart / 2];
            if dart % 2 == 0 {
                d.v
            } else {
                d.u
            }
        };
        let mut seen = vec![false; pos.len()];
        let mut faces = Vec::new();
        for start in 0..pos.len() {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                face.push(d);
                // turn to the next edge clockwise around the head
                let h = head(d);
                let back = d ^ 1;
                let list = &rot[h];
                let j = pos[back];
                let next = list[(j + list.len() - 1) % list.len()];
                d = if self.edges[next].u == h { 2 * next } else { 2 * next + 1 };
            }
            faces.push(face);
        }
        Ok(faces)
    }

    pub fn n_components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.n_atoms).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        let mut comps = self.n_atoms;
        for d in &self.edges {
            let (a, b) = (find(&mut parent, d.u), find(&mut parent, d.v));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        comps
    }

    /// V - E + F of the embedding.
    pub fn euler_characteristic(&self) -> Result<i64> {
        let f = self.faces()?.len() as i64;
        Ok(self.n_atoms as i64 - self.edges.len() as i64 + f)
    }

    /// Checks the embedding against the genus of the lattice surface.
    pub fn check_embedding(&self, toric: bool) -> Result<()> {
        let chi = self.euler_characteristic()?;
        let want = if toric { 0 } else { 2 * self.n_components() as i64 };
        if chi != want {
            return Err(Error::Embedding(format!("Euler characteristic {chi}, expected {want}")));
        }
        Ok(())
    }

    /// `u,v,weight,origin` lines followed by a gadget table.
    pub fn dump_csv(&self) -> String {
        let mut out = String::from("u,v,weight,origin\n");
        for (i, d) in self.edges.iter().enumerate() {
            let w = match &self.weights {
                Weights::Int(w) => w[i].to_string(),
                Weights::Exact(w) => w[i].to_string(),
            };
            let o = match d.origin {
                Origin::GadgetInternal => "internal".to_string(),
                Origin::LatticeEdge(e) => format!("edge{e}"),
            };
            out.push_str(&format!("{},{},{},{}\n", d.u, d.v, w, o));
        }
        out.push_str("\nowner,parity,degree,planar,first_atom,atoms\n");
        for (gi, pl) in self.placed().enumerate() {
            let who = if gi < self.gadgets.len() { format!("check{gi}") } else { "boundary".into() };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                who,
                pl.gadget.parity.name(),
                pl.gadget.degree,
                pl.gadget.planar,
                pl.start,
                pl.gadget.n_local
            ));
        }
        out
    }

    pub fn total_int_weight(&self, matched: &[usize]) -> Option<i128> {
        let w = self.int_weights()?;
        Some(matched.iter().map(|&i| w[i] as i128).sum())
    }

    pub fn is_zero_weighted(&self) -> bool {
        match &self.weights {
            Weights::Int(w) => w.iter().all(|&x| x == 0),
            Weights::Exact(w) => w.iter().all(|x| x.is_zero()),
        }
    }
}
