//! Fisher gadgets: small graphs whose perfect matchings exist exactly when
//! an odd (or even) number of their external vertices is matched outside.
//!
//! Local vertex ids put the externals `x_0..x_{k-1}` first, in
//! counter-clockwise order, then the internal vertices. The odd planar
//! gadget of degree k >= 4 is a chain of triangles
//! `(x0, x1, i1), (i1, x2, i2), ..., (i_{k-3}, x_{k-2}, x_{k-1})`; the even
//! planar gadget of degree k >= 3 runs that chain with an internal vertex
//! `q` in place of `x_0` and hangs `x_0` off `q` by one pendant edge.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    pub fn admits(self, n: usize) -> bool {
        Parity::of(n) == self
    }
}

/// One entry of a local rotation: a gadget-internal edge or the external
/// lattice edge attached at port j.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Internal(usize),
    Port(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gadget {
    pub parity: Parity,
    pub degree: usize,
    pub planar: bool,
    pub n_local: usize,
    pub n_external: usize,
    pub edges: Vec<(usize, usize)>,
    /// Local vertex carrying port j.
    pub port_vertex: Vec<usize>,
    /// Counter-clockwise slots around each local vertex (planar only).
    pub rotation: Option<Vec<Vec<Slot>>>,
}

impl Gadget {
    pub fn internal_vertices(&self) -> usize {
        self.n_local - self.n_external
    }

    pub fn internal_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of perfect matchings left after deleting the local vertices
    /// in `removed` (a bitmask over local ids). Exhaustive; for tests and
    /// audits of small gadgets.
    pub fn count_matchings_without(&self, removed: u64) -> u64 {
        assert!(self.n_local <= 63);
        let mut adj = vec![0u64; self.n_local];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        let full = (1u64 << self.n_local) - 1;
        count_pm(&adj, full & !removed)
    }
}

fn count_pm(adj: &[u64], left: u64) -> u64 {
    if left == 0 {
        return 1;
    }
    let v = left.trailing_zeros() as usize;
    let rest = left & !(1 << v);
    let mut cand = adj[v] & rest;
    let mut total = 0;
    while cand != 0 {
        let u = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        total += count_pm(adj, rest & !(1 << u));
    }
    total
}

/// Builds a catalog gadget. Degree 1 and 2 gadgets and every planar degree
/// are supported; the only nonplanar gadget is the even degree-4 K4.
pub fn make_gadget(parity: Parity, k: usize, planar: bool) -> Result<Gadget> {
    let unsupported = || Error::UnsupportedGadget {
        parity: parity.name(),
        degree: k,
        planar,
    };
    if k == 0 {
        return Err(unsupported());
    }
    if !planar {
        if parity == Parity::Even && k == 4 {
            let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
            return Ok(Gadget {
                parity,
                degree: 4,
                planar: false,
                n_local: 4,
                n_external: 4,
                edges,
                port_vertex: (0..4).collect(),
                rotation: None,
            });
        }
        return Err(unsupported());
    }
    let (n_local, edges, pos) = match (parity, k) {
        (Parity::Odd, 1) => (1, vec![], vec![ring(1, 0, 1.0)]),
        (Parity::Even, 1) => (2, vec![(0, 1)], vec![ring(1, 0, 1.0), ring(1, 0, 0.5)]),
        (Parity::Even, 2) => (2, vec![(0, 1)], vec![ring(2, 0, 1.0), ring(2, 1, 1.0)]),
        (Parity::Odd, 2) => (
            3,
            vec![(0, 2), (2, 1)],
            vec![ring(2, 0, 1.0), ring(2, 1, 1.0), ring(4, 1, 0.5)],
        ),
        (Parity::Odd, _) => {
            let ext: Vec<usize> = (0..k).collect();
            let mut pos: Vec<(f64, f64)> = (0..k).map(|j| ring(k, j, 1.0)).collect();
            let mut edges = Vec::new();
            triangle_chain(&ext, k, &mut edges, &mut pos);
            (pos.len(), edges, pos)
        }
        (Parity::Even, _) => {
            // q is local id k; the chain's externals are q, x1..x_{k-1}
            let q = k;
            let mut pos: Vec<(f64, f64)> = (0..k).map(|j| ring(k, j, 1.0)).collect();
            pos.push(ring(k, 0, 0.75));
            let mut ext = vec![q];
            ext.extend(1..k);
            let mut edges = vec![(0, q)];
            triangle_chain(&ext, k, &mut edges, &mut pos);
            (pos.len(), edges, pos)
        }
    };
    let rotation = local_rotation(k, n_local, &edges, &pos);
    Ok(Gadget {
        parity,
        degree: k,
        planar: true,
        n_local,
        n_external: k,
        edges,
        port_vertex: (0..k).collect(),
        rotation: Some(rotation),
    })
}

/// A single vertex carrying all k ports (the defect of the single-vertex
/// profile). It must be matched along exactly one port.
pub fn single_vertex(k: usize) -> Gadget {
    Gadget {
        parity: Parity::Odd,
        degree: k,
        planar: true,
        n_local: 1,
        n_external: 1,
        edges: vec![],
        port_vertex: vec![0; k],
        rotation: Some(vec![(0..k).map(Slot::Port).collect()]),
    }
}

/// Point j of k evenly spaced on a circle of radius r.
fn ring(k: usize, j: usize, r: f64) -> (f64, f64) {
    let a = TAU * j as f64 / k as f64;
    (r * a.cos(), r * a.sin())
}

/// Odd chain of triangles over `ext` (k >= 3 vertices in ccw order); new
/// internal vertices are appended to `pos` halfway between consecutive
/// externals.
fn triangle_chain(ext: &[usize], k: usize, edges: &mut Vec<(usize, usize)>, pos: &mut Vec<(f64, f64)>) {
    if k == 3 {
        edges.extend([(ext[0], ext[1]), (ext[1], ext[2]), (ext[0], ext[2])]);
        return;
    }
    let first = pos.len();
    for j in 1..=k - 3 {
        pos.push(ring(2 * k, 2 * j + 1, 0.5));
    }
    let inner = |j: usize| first + j - 1;
    edges.extend([(ext[0], ext[1]), (ext[0], inner(1)), (ext[1], inner(1))]);
    for j in 2..=k - 3 {
        edges.extend([(inner(j - 1), ext[j]), (ext[j], inner(j)), (inner(j - 1), inner(j))]);
    }
    let last = inner(k - 3);
    edges.extend([(last, ext[k - 2]), (ext[k - 2], ext[k - 1]), (last, ext[k - 1])]);
}

fn local_rotation(k: usize, n_local: usize, edges: &[(usize, usize)], pos: &[(f64, f64)]) -> Vec<Vec<Slot>> {
    let mut around: Vec<Vec<(f64, Slot)>> = vec![Vec::new(); n_local];
    for j in 0..k {
        let (x, y) = ring(k, j, 1.0);
        around[j].push((y.atan2(x), Slot::Port(j)));
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        let (pa, pb) = (pos[a], pos[b]);
        around[a].push(((pb.1 - pa.1).atan2(pb.0 - pa.0), Slot::Internal(i)));
        around[b].push(((pa.1 - pb.1).atan2(pa.0 - pb.0), Slot::Internal(i)));
    }
    around
        .into_iter()
        .map(|mut v| {
            v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            v.into_iter().map(|(_, s)| s).collect()
        })
        .collect()
}
