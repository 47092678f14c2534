//! Toric, planar and rotated surface-code lattices as relative chain complexes.
//!
//! Vertices are split into checks (non-boundary vertices, the support of
//! 0-chains) followed by the boundary set B of boundary-sublattice vertices
//! that touch a qubit edge. Qubit edges carry the same index on the primal
//! and dual lattice, so the dual edge of `e` is `e` itself; a dual check has
//! the index of the primal plaquette it sits in and vice versa.
//!
//! Indexing (stable, used by the chain file format):
//! * toric: vertex `v = rL + c`, edge `2v` is the rightward edge at `v`,
//!   `2v + 1` the downward one, plaquette `p = rL + c` has top-left corner
//!   `v`. Dual vertices sit at plaquette centres.
//! * planar: the primal vertex grid is L rows by L+1 columns with the two
//!   outer columns in the boundary sublattice. Edges run row-major, the L
//!   horizontal edges of a row before the L-1 vertical edges hanging below
//!   it. Checks are `r(L-1) + c - 1` for columns `1..L`, plaquettes `rL + c`.
//! * rotated: data qubit `(i, j)` of the L by L grid is edge `iL + j`.
//!   Checks and plaquettes are the stabilizer positions of the
//!   (L+1) by (L+1) face grid, enumerated row-major.

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt;

use crate::bits::Bits;
use crate::chain::{Chain, Grade};
use crate::error::{Error, Result};
use crate::gf2::RowSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Toric,
    Planar,
    Rotated,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Toric => "toric",
            Family::Planar => "planar",
            Family::Rotated => "rotated",
        }
    }

    pub fn min_distance(self) -> usize {
        2
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "toric" => Ok(Family::Toric),
            "planar" => Ok(Family::Planar),
            "rotated" => Ok(Family::Rotated),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Primal,
    Dual,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Primal => Side::Dual,
            Side::Dual => Side::Primal,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Primal => "primal",
            Side::Dual => "dual",
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "primal" => Ok(Side::Primal),
            "dual" => Ok(Side::Dual),
            other => Err(Error::InvalidArgument(format!("unknown side {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeFamily {
    pub kind: Family,
    #[serde(rename = "L")]
    pub distance: usize,
}

impl CodeFamily {
    pub fn new(kind: Family, distance: usize) -> Result<Self> {
        if distance < kind.min_distance() {
            return Err(Error::LatticeTooSmall {
                family: kind.name(),
                min: kind.min_distance(),
                got: distance,
            });
        }
        Ok(CodeFamily { kind, distance })
    }
}

/// A qubit edge. `step` is the unit lattice step from `ends[0]` to `ends[1]`
/// in (row, column) screen coordinates; for the torus it ignores wrapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub ends: [usize; 2],
    pub step: (i32, i32),
    /// Torus only: the edge crosses the row seam / the column seam.
    pub wraps: (bool, bool),
}

#[derive(Clone, Debug)]
pub struct Lattice {
    family: CodeFamily,
    side: Side,
    n_checks: usize,
    /// Doubled (row, column) coordinates for checks then boundary vertices.
    positions: Vec<(i64, i64)>,
    edges: Vec<Edge>,
    plaquettes: Vec<Vec<usize>>,
    /// Incident edges of every vertex, counter-clockwise by direction.
    incident: Vec<Vec<usize>>,
    /// Plaquettes containing each edge (one or two).
    edge_plaquettes: Vec<Vec<usize>>,
}

pub fn build_lattice(family: CodeFamily, side: Side) -> Result<Lattice> {
    let family = CodeFamily::new(family.kind, family.distance)?;
    let raw = match family.kind {
        Family::Toric => toric(family.distance, side),
        Family::Planar => planar(family.distance, side),
        Family::Rotated => rotated(family.distance, side),
    };
    Ok(Lattice::assemble(family, side, raw))
}

struct Raw {
    n_checks: usize,
    positions: Vec<(i64, i64)>,
    edges: Vec<Edge>,
    plaquettes: Vec<Vec<usize>>,
}

fn edge(a: usize, b: usize, step: (i32, i32)) -> Edge {
    Edge {
        ends: [a, b],
        step,
        wraps: (false, false),
    }
}

fn toric(l: usize, side: Side) -> Raw {
    let id = |r: usize, c: usize| (r % l) * l + (c % l);
    let h = |r: usize, c: usize| 2 * id(r, c);
    let v = |r: usize, c: usize| 2 * id(r, c) + 1;
    let mut positions = Vec::with_capacity(l * l);
    let offset = match side {
        Side::Primal => 0,
        Side::Dual => 1,
    };
    for r in 0..l {
        for c in 0..l {
            positions.push((2 * r as i64 + offset, 2 * c as i64 + offset));
        }
    }
    let mut edges = vec![edge(0, 0, (0, 0)); 2 * l * l];
    let mut plaquettes = Vec::with_capacity(l * l);
    match side {
        Side::Primal => {
            for r in 0..l {
                for c in 0..l {
                    edges[h(r, c)] = Edge {
                        ends: [id(r, c), id(r, c + 1)],
                        step: (0, 1),
                        wraps: (false, c + 1 == l),
                    };
                    edges[v(r, c)] = Edge {
                        ends: [id(r, c), id(r + 1, c)],
                        step: (1, 0),
                        wraps: (r + 1 == l, false),
                    };
                }
            }
            for r in 0..l {
                for c in 0..l {
                    plaquettes.push(vec![h(r, c), v(r, c + 1), h(r + 1, c), v(r, c)]);
                }
            }
        }
        Side::Dual => {
            // h(r,c) separates plaquettes (r-1,c) and (r,c); v(r,c) separates
            // (r,c-1) and (r,c).
            for r in 0..l {
                for c in 0..l {
                    edges[h(r, c)] = Edge {
                        ends: [id(r + l - 1, c), id(r, c)],
                        step: (1, 0),
                        wraps: (r == 0, false),
                    };
                    edges[v(r, c)] = Edge {
                        ends: [id(r, c + l - 1), id(r, c)],
                        step: (0, 1),
                        wraps: (false, c == 0),
                    };
                }
            }
            // dual plaquette = primal vertex (r,c), walked top, right, bottom, left
            for r in 0..l {
                for c in 0..l {
                    plaquettes.push(vec![v(r + l - 1, c), h(r, c), v(r, c), h(r, c + l - 1)]);
                }
            }
        }
    }
    Raw {
        n_checks: l * l,
        positions,
        edges,
        plaquettes,
    }
}

fn planar(l: usize, side: Side) -> Raw {
    // edge index of h(r,c), c in 0..l, and v(r,c), c in 1..l, r < l-1
    let row = 2 * l - 1;
    let h = |r: usize, c: usize| r * row + c;
    let v = |r: usize, c: usize| r * row + l + (c - 1);
    let n_edges = l * l + (l - 1) * (l - 1);
    let mut edges = vec![edge(0, 0, (0, 0)); n_edges];
    let mut positions = Vec::new();
    let mut plaquettes = Vec::new();
    let n_checks = l * (l - 1);
    match side {
        Side::Primal => {
            let check = |r: usize, c: usize| r * (l - 1) + (c - 1);
            // boundary ids: left column then right column
            let vert = |r: usize, c: usize| {
                if c == 0 {
                    n_checks + r
                } else if c == l {
                    n_checks + l + r
                } else {
                    check(r, c)
                }
            };
            for r in 0..l {
                for c in 1..l {
                    positions.push((2 * r as i64, 2 * c as i64));
                }
            }
            for r in 0..l {
                positions.push((2 * r as i64, 0));
            }
            for r in 0..l {
                positions.push((2 * r as i64, 2 * l as i64));
            }
            for r in 0..l {
                for c in 0..l {
                    edges[h(r, c)] = edge(vert(r, c), vert(r, c + 1), (0, 1));
                }
                if r + 1 < l {
                    for c in 1..l {
                        edges[v(r, c)] = edge(vert(r, c), vert(r + 1, c), (1, 0));
                    }
                }
            }
            for r in 0..l - 1 {
                for c in 0..l {
                    let mut p = vec![h(r, c)];
                    if c + 1 < l {
                        p.push(v(r, c + 1));
                    }
                    p.push(h(r + 1, c));
                    if c >= 1 {
                        p.push(v(r, c));
                    }
                    plaquettes.push(p);
                }
            }
        }
        Side::Dual => {
            let n_dual_checks = (l - 1) * l;
            // dual checks are primal plaquettes (r,c), r < l-1; boundary:
            // top row then bottom row
            let vert = |r: isize, c: usize| {
                if r < 0 {
                    n_dual_checks + c
                } else if r as usize == l - 1 {
                    n_dual_checks + l + c
                } else {
                    r as usize * l + c
                }
            };
            for r in 0..l - 1 {
                for c in 0..l {
                    positions.push((2 * r as i64 + 1, 2 * c as i64 + 1));
                }
            }
            for c in 0..l {
                positions.push((-1, 2 * c as i64 + 1));
            }
            for c in 0..l {
                positions.push((2 * l as i64 - 1, 2 * c as i64 + 1));
            }
            for r in 0..l {
                for c in 0..l {
                    edges[h(r, c)] = edge(vert(r as isize - 1, c), vert(r as isize, c), (1, 0));
                }
                if r + 1 < l {
                    for c in 1..l {
                        edges[v(r, c)] = edge(vert(r as isize, c - 1), vert(r as isize, c), (0, 1));
                    }
                }
            }
            // dual plaquette = primal check (r,c), c in 1..l
            for r in 0..l {
                for c in 1..l {
                    let mut p = Vec::new();
                    if r >= 1 {
                        p.push(v(r - 1, c));
                    }
                    p.push(h(r, c));
                    if r + 1 < l {
                        p.push(v(r, c));
                    }
                    p.push(h(r, c - 1));
                    plaquettes.push(p);
                }
            }
            return Raw {
                n_checks: n_dual_checks,
                positions,
                edges,
                plaquettes,
            };
        }
    }
    Raw {
        n_checks,
        positions,
        edges,
        plaquettes,
    }
}

fn rotated(l: usize, side: Side) -> Raw {
    // Face grid positions (a, b) in [0, l]^2. Vertices of this side have
    // parity `want` of a + b; checks are those strictly inside along the
    // open direction, the rest form B.
    let want = match side {
        Side::Primal => 0,
        Side::Dual => 1,
    };
    let is_check = |a: usize, b: usize| match side {
        Side::Primal => (1..l).contains(&b),
        Side::Dual => (1..l).contains(&a),
    };
    let mut check_id = vec![usize::MAX; (l + 1) * (l + 1)];
    let mut boundary = Vec::new();
    let mut positions = Vec::new();
    let mut n_checks = 0;
    for a in 0..=l {
        for b in 0..=l {
            if (a + b) % 2 != want {
                continue;
            }
            if is_check(a, b) {
                check_id[a * (l + 1) + b] = n_checks;
                n_checks += 1;
                positions.push((2 * a as i64, 2 * b as i64));
            } else {
                boundary.push((a, b));
            }
        }
    }
    for (k, &(a, b)) in boundary.iter().enumerate() {
        check_id[a * (l + 1) + b] = n_checks + k;
        positions.push((2 * a as i64, 2 * b as i64));
    }
    let at = |a: usize, b: usize| check_id[a * (l + 1) + b];
    let mut edges = Vec::with_capacity(l * l);
    for i in 0..l {
        for j in 0..l {
            // the two corners of qubit (i,j) with the right colour
            if (i + j) % 2 == want {
                edges.push(edge(at(i, j), at(i + 1, j + 1), (1, 1)));
            } else {
                edges.push(edge(at(i, j + 1), at(i + 1, j), (1, -1)));
            }
        }
    }
    // plaquettes: stabilizer positions of the other colour, same order as
    // the checks of the opposite side
    let other_check = |a: usize, b: usize| match side {
        Side::Primal => (1..l).contains(&a),
        Side::Dual => (1..l).contains(&b),
    };
    let mut plaquettes = Vec::new();
    for a in 0..=l {
        for b in 0..=l {
            if (a + b) % 2 == want || !other_check(a, b) {
                continue;
            }
            let mut p = Vec::new();
            for (da, db) in [(1usize, 1usize), (1, 0), (0, 0), (0, 1)] {
                // qubit (a - da, b - db) when it exists
                if a >= da && b >= db && a - da < l && b - db < l {
                    p.push((a - da) * l + (b - db));
                }
            }
            plaquettes.push(p);
        }
    }
    Raw {
        n_checks,
        positions,
        edges,
        plaquettes,
    }
}

fn angle(step: (i32, i32)) -> f64 {
    // screen rows grow downward; counter-clockwise in the usual sense
    (-(step.0 as f64)).atan2(step.1 as f64)
}

impl Lattice {
    fn assemble(family: CodeFamily, side: Side, raw: Raw) -> Lattice {
        let nv = raw.positions.len();
        let mut incident = vec![Vec::new(); nv];
        for (e, ed) in raw.edges.iter().enumerate() {
            incident[ed.ends[0]].push(e);
            incident[ed.ends[1]].push(e);
        }
        let mut edge_plaquettes = vec![Vec::new(); raw.edges.len()];
        for (p, es) in raw.plaquettes.iter().enumerate() {
            for &e in es {
                edge_plaquettes[e].push(p);
            }
        }
        let mut lat = Lattice {
            family,
            side,
            n_checks: raw.n_checks,
            positions: raw.positions,
            edges: raw.edges,
            plaquettes: raw.plaquettes,
            incident,
            edge_plaquettes,
        };
        for v in 0..nv {
            let mut inc = std::mem::take(&mut lat.incident[v]);
            inc.sort_by(|&a, &b| {
                angle(lat.step_from(v, a))
                    .partial_cmp(&angle(lat.step_from(v, b)))
                    .unwrap()
            });
            lat.incident[v] = inc;
        }
        lat
    }

    pub fn family(&self) -> CodeFamily {
        self.family
    }

    pub fn kind(&self) -> Family {
        self.family.kind
    }

    pub fn distance(&self) -> usize {
        self.family.distance
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn n_qubits(&self) -> usize {
        self.edges.len()
    }

    /// Number of non-boundary vertices (length of a 0-chain).
    pub fn n_checks(&self) -> usize {
        self.n_checks
    }

    pub fn n_plaquettes(&self) -> usize {
        self.plaquettes.len()
    }

    /// Checks plus boundary vertices.
    pub fn n_vertices_total(&self) -> usize {
        self.positions.len()
    }

    pub fn boundary_vertices(&self) -> std::ops::Range<usize> {
        self.n_checks..self.positions.len()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        v >= self.n_checks
    }

    pub fn position(&self, v: usize) -> (i64, i64) {
        self.positions[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn plaquette(&self, p: usize) -> &[usize] {
        &self.plaquettes[p]
    }

    pub fn plaquettes_of(&self, e: usize) -> &[usize] {
        &self.edge_plaquettes[e]
    }

    /// Incident edges of `v` in counter-clockwise order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edges[e].ends;
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    /// Unit step of edge `e` leaving vertex `v`.
    pub fn step_from(&self, v: usize, e: usize) -> (i32, i32) {
        let ed = &self.edges[e];
        if ed.ends[0] == v {
            ed.step
        } else {
            (-ed.step.0, -ed.step.1)
        }
    }

    /// The dual partner of edge `e`; qubit indices are shared by both sides.
    pub fn dual_edge_of(&self, e: usize) -> usize {
        e
    }

    /// Non-boundary endpoints of `e` (its relative boundary).
    pub fn check_ends(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges[e].ends.into_iter().filter(|&v| v < self.n_checks)
    }

    pub fn face_count(&self, grade: Grade) -> usize {
        match grade {
            Grade::C0 => self.n_checks,
            Grade::C1 => self.edges.len(),
            Grade::C2 => self.plaquettes.len(),
        }
    }

    pub fn zero_chain(&self, grade: Grade) -> Chain {
        Chain::zeros(grade, self.face_count(grade))
    }

    pub fn check_chain(&self, c: &Chain) -> Result<()> {
        let want = self.face_count(c.grade);
        if c.bits.len() != want {
            return Err(Error::LengthMismatch {
                expected: want,
                got: c.bits.len(),
            });
        }
        Ok(())
    }

    /// Relative boundary map: drops endpoints in the boundary sublattice.
    pub fn boundary(&self, c: &Chain) -> Result<Chain> {
        self.check_chain(c)?;
        match c.grade {
            Grade::C0 => Err(Error::GradeMismatch {
                expected: "c1 or c2",
                got: "c0",
            }),
            Grade::C1 => {
                let mut out = Bits::zeros(self.n_checks);
                for e in c.bits.iter_ones() {
                    for v in self.check_ends(e) {
                        out.flip(v);
                    }
                }
                Ok(Chain::new(Grade::C0, out))
            }
            Grade::C2 => {
                let mut out = Bits::zeros(self.edges.len());
                for p in c.bits.iter_ones() {
                    for &e in &self.plaquettes[p] {
                        out.flip(e);
                    }
                }
                Ok(Chain::new(Grade::C1, out))
            }
        }
    }

    pub fn plaquette_boundary(&self, p: usize) -> Bits {
        Bits::from_indices(self.edges.len(), self.plaquettes[p].iter().copied())
    }

    /// Image of the plaquette boundary map: the stabilizers acting on this
    /// side's edges.
    pub fn stabilizer_space(&self) -> RowSpace {
        let rows: Vec<Bits> = (0..self.plaquettes.len()).map(|p| self.plaquette_boundary(p)).collect();
        RowSpace::from_rows(self.edges.len(), &rows)
    }

    /// Kernel of the relative boundary map (relative cycles).
    pub fn cycle_space(&self) -> RowSpace {
        let stars: Vec<Bits> = (0..self.n_checks)
            .map(|v| Bits::from_indices(self.edges.len(), self.incident[v].iter().copied()))
            .collect();
        RowSpace::from_rows(self.edges.len(), &stars).orthogonal()
    }

    /// Minimum-weight logical cycles: two for the torus, one otherwise.
    pub fn logical_representatives(&self) -> Vec<Chain> {
        let l = self.family.distance;
        let n = self.edges.len();
        let sets: Vec<Vec<usize>> = match (self.family.kind, self.side) {
            (Family::Toric, Side::Primal) => vec![
                (0..l).map(|c| 2 * c).collect(),
                (0..l).map(|r| 2 * r * l + 1).collect(),
            ],
            (Family::Toric, Side::Dual) => vec![
                (0..l).map(|c| 2 * c + 1).collect(),
                (0..l).map(|r| 2 * r * l).collect(),
            ],
            (Family::Planar, Side::Primal) => vec![(0..l).collect()],
            (Family::Planar, Side::Dual) => vec![(0..l).map(|r| r * (2 * l - 1)).collect()],
            (Family::Rotated, Side::Primal) => vec![(0..l).collect()],
            (Family::Rotated, Side::Dual) => vec![(0..l).map(|i| i * l).collect()],
        };
        sets.into_iter()
            .map(|s| Chain::new(Grade::C1, Bits::from_indices(n, s)))
            .collect()
    }

    /// Any 1-chain whose relative boundary is `s`. Every defect is joined
    /// along a breadth-first spanning forest to its root; on the torus the
    /// root parity cancels, otherwise the roots are boundary vertices.
    pub fn find_any_error(&self, s: &Chain) -> Result<Chain> {
        self.check_chain(s)?;
        if s.grade != Grade::C0 {
            return Err(Error::GradeMismatch {
                expected: "c0",
                got: s.grade.name(),
            });
        }
        if self.family.kind == Family::Toric && s.bits.count_ones() % 2 == 1 {
            return Err(Error::InvalidSyndromeParity);
        }
        let mut out = Bits::zeros(self.edges.len());
        if s.bits.is_zero() {
            return Ok(Chain::new(Grade::C1, out));
        }
        let parent = self.bfs_forest();
        for d in s.bits.iter_ones() {
            let mut v = d;
            while let Some(e) = parent[v] {
                out.flip(e);
                v = self.other_end(e, v);
            }
        }
        Ok(Chain::new(Grade::C1, out))
    }

    /// Parent edge of every vertex in a BFS forest rooted at vertex 0 (torus)
    /// or at all boundary vertices.
    fn bfs_forest(&self) -> Vec<Option<usize>> {
        let nv = self.positions.len();
        let mut parent = vec![None; nv];
        let mut seen = vec![false; nv];
        let mut queue = VecDeque::new();
        let roots: Vec<usize> = if self.family.kind == Family::Toric {
            vec![0]
        } else {
            self.boundary_vertices().collect()
        };
        for r in roots {
            seen[r] = true;
            queue.push_back(r);
        }
        while let Some(u) = queue.pop_front() {
            for &e in &self.incident[u] {
                let w = self.other_end(e, u);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Lattice coordinates used to lay gadgets on a grid: torus and planar
    /// checks keep their (row, column); rotated checks use the diagonal
    /// frame in which lattice edges are axis-aligned.
    pub fn grid_cell(&self, v: usize) -> (i64, i64) {
        let (y, x) = self.positions[v];
        match self.family.kind {
            Family::Toric | Family::Planar => (y.div_euclid(2), x.div_euclid(2)),
            Family::Rotated => {
                let (a, b) = (y / 2, x / 2);
                // a + b and a - b share parity
                ((a + b).div_euclid(2), (a - b).div_euclid(2))
            }
        }
    }
}

/// Primal and dual lattice of one code.
#[derive(Clone, Debug)]
pub struct LatticePair {
    pub primal: Lattice,
    pub dual: Lattice,
}

impl LatticePair {
    pub fn new(family: CodeFamily) -> Result<Self> {
        Ok(LatticePair {
            primal: build_lattice(family, Side::Primal)?,
            dual: build_lattice(family, Side::Dual)?,
        })
    }

    pub fn get(&self, side: Side) -> &Lattice {
        match side {
            Side::Primal => &self.primal,
            Side::Dual => &self.dual,
        }
    }

    pub fn family(&self) -> CodeFamily {
        self.primal.family()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(kind: Family, l: usize, side: Side) -> Lattice {
        build_lattice(CodeFamily { kind, distance: l }, side).unwrap()
    }

    #[test]
    fn sizes_match_code_parameters() {
        let t = lat(Family::Toric, 3, Side::Primal);
        assert_eq!((t.n_qubits(), t.n_checks(), t.n_plaquettes()), (18, 9, 9));
        assert_eq!(lat(Family::Planar, 4, Side::Primal).n_qubits(), 25);
        assert_eq!(lat(Family::Rotated, 5, Side::Primal).n_qubits(), 25);
        let p = lat(Family::Planar, 4, Side::Primal);
        assert_eq!(p.n_plaquettes(), 12);
        assert_eq!(p.boundary_vertices().len(), 8);
    }

    #[test]
    fn rejects_tiny_lattices() {
        assert!(build_lattice(CodeFamily { kind: Family::Toric, distance: 1 }, Side::Primal).is_err());
    }

    #[test]
    fn planar_edge_touching_boundary_has_one_check_end() {
        let p = lat(Family::Planar, 3, Side::Primal);
        let c = Chain::new(Grade::C1, Bits::from_indices(p.n_qubits(), [0]));
        let b = p.boundary(&c).unwrap();
        assert_eq!(b.bits.ones(), vec![0]);
    }

    #[test]
    fn rotated_checks_count() {
        for l in 2..7 {
            for side in [Side::Primal, Side::Dual] {
                let r = lat(Family::Rotated, l, side);
                assert_eq!(r.n_checks() + r.n_plaquettes(), l * l - 1, "L={l} {side:?}");
            }
        }
    }
}
