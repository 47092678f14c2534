//! Pfaffian orientations of decorated graphs.
//!
//! Faces are dart cycles traced with the embedding; an edge agrees with a
//! face when its orientation matches the tracing direction. A planar
//! orientation in which every face but one has an odd number of agreeing
//! edges gives all perfect matchings the same sign.
//!
//! On the torus the graph is cut open along the row seam and the column
//! seam (the decorated edges of wrapping lattice edges). The cut graph is
//! planar and is oriented as above; the seam edges are then chosen so that
//! every torus face is odd. Reversing all row-seam edges, all column-seam
//! edges, or both gives the other three orientations.

use std::collections::VecDeque;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::gadgets::{DecoratedGraph, Origin};
use crate::lattice::{Family, Lattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    /// `forward[i]`: decorated edge i points from `u` to `v`.
    pub forward: Vec<bool>,
}

impl Orientation {
    /// Does dart `d` (edge `d / 2`, even darts run u to v) follow the edge?
    pub fn agrees(&self, d: usize) -> bool {
        self.forward[d / 2] == (d % 2 == 0)
    }

    /// Reverses every edge in `edges`.
    pub fn flipped(&self, edges: &[usize]) -> Orientation {
        let mut out = self.clone();
        for &i in edges {
            out.forward[i] = !out.forward[i];
        }
        out
    }

    pub fn odd_faces(&self, faces: &[Vec<usize>]) -> usize {
        faces.iter().filter(|f| f.iter().filter(|&&d| self.agrees(d)).count() % 2 == 1).count()
    }
}

/// Rotation lists restricted to the edges in `active`.
fn restricted(dg: &DecoratedGraph, active: &[bool]) -> Result<Vec<Vec<usize>>> {
    let rot = dg.embedding.as_ref().ok_or(Error::MissingEmbedding)?;
    Ok(rot
        .iter()
        .map(|list| list.iter().copied().filter(|&i| active[i]).collect())
        .collect())
}

/// Dart cycles of a rotation system, traced as in `DecoratedGraph::faces`.
fn trace_faces(dg: &DecoratedGraph, rot: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let n_darts = 2 * dg.edges.len();
    let mut pos = vec![usize::MAX; n_darts];
    let mut used = vec![false; n_darts];
    for (a, list) in rot.iter().enumerate() {
        for (j, &i) in list.iter().enumerate() {
            let d = &dg.edges[i];
            let dart = if d.u == a { 2 * i } else { 2 * i + 1 };
            pos[dart] = j;
            used[dart] = true;
        }
    }
    let head = |dart: usize| {
        let d = &dg.edges[dart / 2];
        if dart % 2 == 0 {
            d.v
        } else {
            d.u
        }
    };
    let mut seen = vec![false; n_darts];
    let mut faces = Vec::new();
    for start in 0..n_darts {
        if seen[start] || !used[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            face.push(d);
            let h = head(d);
            let list = &rot[h];
            let j = pos[d ^ 1];
            if j == usize::MAX {
                return Err(Error::Embedding(format!("dart {} missing from the rotation", d ^ 1)));
            }
            let next = list[(j + list.len() - 1) % list.len()];
            d = if dg.edges[next].u == h { 2 * next } else { 2 * next + 1 };
        }
        faces.push(face);
    }
    Ok(faces)
}

/// Spanning-tree and dual-tree sweep over the active edges. Every face
/// except `outer` ends up odd. Inactive edges keep their entry in `forward`.
fn sweep(
    dg: &DecoratedGraph,
    active: &[bool],
    faces: &[Vec<usize>],
    outer: usize,
    forward: &mut [bool],
) -> Result<()> {
    let n = dg.n_atoms;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, d) in dg.edges.iter().enumerate() {
        if active[i] {
            adj[d.u].push(i);
            adj[d.v].push(i);
        }
    }
    let mut in_tree = vec![false; dg.edges.len()];
    let mut reached = vec![false; n];
    let mut queue = VecDeque::new();
    if n > 0 {
        reached[0] = true;
        queue.push_back(0);
    }
    while let Some(x) = queue.pop_front() {
        for &i in &adj[x] {
            let y = dg.other(i, x);
            if !reached[y] {
                reached[y] = true;
                in_tree[i] = true;
                forward[i] = true;
                queue.push_back(y);
            }
        }
    }
    if reached.iter().any(|&r| !r) {
        return Err(Error::InvalidArgument("decorated graph is disconnected".into()));
    }

    let mut face_of = vec![usize::MAX; 2 * dg.edges.len()];
    for (f, face) in faces.iter().enumerate() {
        for &d in face {
            face_of[d] = f;
        }
    }
    let mut dual: Vec<Vec<usize>> = vec![Vec::new(); faces.len()];
    for i in 0..dg.edges.len() {
        if active[i] && !in_tree[i] {
            let (a, b) = (face_of[2 * i], face_of[2 * i + 1]);
            if a == b {
                return Err(Error::Embedding(format!("non-tree edge {i} borders one face twice")));
            }
            dual[a].push(i);
            dual[b].push(i);
        }
    }
    let mut parent_edge = vec![usize::MAX; faces.len()];
    let mut visited = vec![false; faces.len()];
    let mut order = vec![outer];
    visited[outer] = true;
    let mut head = 0;
    while head < order.len() {
        let f = order[head];
        head += 1;
        for &i in &dual[f] {
            let g = if face_of[2 * i] == f { face_of[2 * i + 1] } else { face_of[2 * i] };
            if !visited[g] {
                visited[g] = true;
                parent_edge[g] = i;
                order.push(g);
            }
        }
    }
    if order.len() != faces.len() {
        return Err(Error::Embedding("dual of the cotree is not connected".into()));
    }
    for &f in order.iter().skip(1).rev() {
        let pe = parent_edge[f];
        let mut odd = false;
        let mut own = usize::MAX;
        for &d in &faces[f] {
            if d / 2 == pe {
                own = d;
            } else if forward[d / 2] == (d % 2 == 0) {
                odd = !odd;
            }
        }
        // the parent edge must agree exactly when the rest is even
        let want_agree = !odd;
        forward[pe] = want_agree == (own % 2 == 0);
    }
    Ok(())
}

/// Pfaffian orientation of a planar decorated graph.
pub fn kasteleyn_orient(dg: &DecoratedGraph) -> Result<Orientation> {
    let active = vec![true; dg.edges.len()];
    let rot = restricted(dg, &active)?;
    let faces = trace_faces(dg, &rot)?;
    let chi = dg.n_atoms as i64 - dg.edges.len() as i64 + faces.len() as i64;
    if dg.n_atoms > 0 && chi != 2 {
        return Err(Error::Embedding(format!("expected a planar embedding, Euler characteristic {chi}")));
    }
    let mut forward = vec![true; dg.edges.len()];
    if let Some(outer) = (0..faces.len()).max_by_key(|&f| (faces[f].len(), std::cmp::Reverse(f))) {
        sweep(dg, &active, &faces, outer, &mut forward)?;
    }
    let o = Orientation { forward };
    if !faces.is_empty() && o.odd_faces(&faces) + 1 < faces.len() {
        return Err(Error::Invariant("Kasteleyn sweep left an even face".into()));
    }
    Ok(o)
}

/// Sign of the Pfaffian term of a perfect matching (edge ids) under an
/// orientation, weights aside.
pub fn matching_sign(dg: &DecoratedGraph, orientation: &Orientation, matching: &[usize]) -> i8 {
    let mut perm = Vec::with_capacity(2 * matching.len());
    let mut sign = 1i8;
    for &i in matching {
        let d = &dg.edges[i];
        let (a, b) = (d.u.min(d.v), d.u.max(d.v));
        perm.push(a);
        perm.push(b);
        // forward means u -> v; the term uses A[a][b]
        if orientation.forward[i] != (d.u == a) {
            sign = -sign;
        }
    }
    if permutation_is_odd(&perm) {
        sign = -sign;
    }
    sign
}

/// Parity of `perm` read as the permutation i -> perm[i].
fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for s in 0..perm.len() {
        let mut x = s;
        let mut len = 0;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 1
}

/// The perfect matching that uses exactly the lattice edges of `cycle`
/// (a relative cycle of the decorated lattice), completed inside each
/// gadget.
pub fn matching_for_cycle(dg: &DecoratedGraph, cycle: &Bits) -> Result<Vec<usize>> {
    let mut taken = vec![false; dg.n_atoms];
    let mut out = Vec::new();
    for e in cycle.iter_ones() {
        let i = *dg.lattice_edge.get(e).ok_or(Error::LengthMismatch {
            expected: dg.lattice_edge.len(),
            got: cycle.len(),
        })?;
        let d = &dg.edges[i];
        taken[d.u] = true;
        taken[d.v] = true;
        out.push(i);
    }
    let mut first_edge = 0;
    for pl in dg.placed() {
        let g = &pl.gadget;
        let mut free: Vec<bool> = (0..g.n_local).map(|l| !taken[pl.start + l]).collect();
        let mut chosen = Vec::new();
        if !complete(&g.edges, &mut free, &mut chosen) {
            return Err(Error::NotPerfect {
                unmatched: free.iter().filter(|&&f| f).count(),
            });
        }
        out.extend(chosen.into_iter().map(|k| first_edge + k));
        first_edge += g.edges.len();
    }
    out.sort_unstable();
    Ok(out)
}

/// Backtracking perfect matching of the free vertices over `edges`.
fn complete(edges: &[(usize, usize)], free: &mut [bool], chosen: &mut Vec<usize>) -> bool {
    let Some(v) = free.iter().position(|&f| f) else {
        return true;
    };
    free[v] = false;
    for (k, &(a, b)) in edges.iter().enumerate() {
        let u = if a == v {
            b
        } else if b == v {
            a
        } else {
            continue;
        };
        if free[u] {
            free[u] = false;
            chosen.push(k);
            if complete(edges, free, chosen) {
                return true;
            }
            chosen.pop();
            free[u] = true;
        }
    }
    free[v] = true;
    false
}

/// The four torus orientations and the signs that combine their
/// Pfaffians into the perfect-matching sum:
/// `sum = (s0 Pf0 + s1 Pf1 + s2 Pf2 - s3 Pf3) / 2` with `s_k` the sign of
/// the reference matching under orientation k.
#[derive(Clone, Debug)]
pub struct ToricKasteleyn {
    /// Orientations for (r, s) = (1, 1), (-1, 1), (1, -1), (-1, -1): r
    /// reverses the row seam, s the column seam.
    pub orientations: [Orientation; 4],
    pub reference: Vec<usize>,
    pub reference_signs: [i8; 4],
    pub row_seam: Vec<usize>,
    pub column_seam: Vec<usize>,
}

pub const TORIC_COEFFICIENTS: [i8; 4] = [1, 1, 1, -1];

/// `lat` is the lattice the decorated graph was built on.
pub fn toric_orientations(dg: &DecoratedGraph, lat: &Lattice) -> Result<ToricKasteleyn> {
    if lat.kind() != Family::Toric {
        return Err(Error::InvalidArgument("toric orientations need a toric lattice".into()));
    }
    let mut row_seam = Vec::new();
    let mut column_seam = Vec::new();
    for (i, d) in dg.edges.iter().enumerate() {
        if let Origin::LatticeEdge(e) = d.origin {
            let w = lat.edge(e).wraps;
            if w.0 {
                row_seam.push(i);
            } else if w.1 {
                column_seam.push(i);
            }
        }
    }
    let all = vec![true; dg.edges.len()];
    let torus_faces = trace_faces(dg, &restricted(dg, &all)?)?;
    let chi = dg.n_atoms as i64 - dg.edges.len() as i64 + torus_faces.len() as i64;
    if chi != 0 {
        return Err(Error::Embedding(format!("expected a torus embedding, Euler characteristic {chi}")));
    }

    let mut cut = all.clone();
    for &i in row_seam.iter().chain(&column_seam) {
        cut[i] = false;
    }
    let cut_faces = trace_faces(dg, &restricted(dg, &cut)?)?;
    let n_cut_edges = cut.iter().filter(|&&a| a).count() as i64;
    let chi_cut = dg.n_atoms as i64 - n_cut_edges + cut_faces.len() as i64;
    if chi_cut != 2 {
        return Err(Error::Embedding(format!("cut torus is not planar (Euler characteristic {chi_cut})")));
    }
    // the cut graph's outer face is the one that is not a torus face
    let mut torus_face_of = vec![usize::MAX; 2 * dg.edges.len()];
    for (f, face) in torus_faces.iter().enumerate() {
        for &d in face {
            torus_face_of[d] = f;
        }
    }
    let is_torus_face = |face: &Vec<usize>| {
        let f = torus_face_of[face[0]];
        torus_faces[f].len() == face.len() && face.iter().all(|&d| torus_face_of[d] == f)
    };
    let outers: Vec<usize> = (0..cut_faces.len()).filter(|&f| !is_torus_face(&cut_faces[f])).collect();
    if outers.len() != 1 {
        return Err(Error::Embedding(format!("cut torus has {} outer faces", outers.len())));
    }
    let mut forward = vec![true; dg.edges.len()];
    sweep(dg, &cut, &cut_faces, outers[0], &mut forward)?;

    // seam edges: one GF(2) equation per torus face that crosses a seam
    let seam: Vec<usize> = row_seam.iter().chain(&column_seam).copied().collect();
    let mut col = vec![usize::MAX; dg.edges.len()];
    for (k, &i) in seam.iter().enumerate() {
        col[i] = k;
    }
    let mut rows = Vec::new();
    for face in &torus_faces {
        if face.iter().all(|&d| col[d / 2] == usize::MAX) {
            continue;
        }
        // unknown x_i = forward[i]; an odd dart agrees when x_i is false
        let mut row = Bits::zeros(seam.len());
        let mut rhs = true;
        for &d in face {
            let i = d / 2;
            if col[i] == usize::MAX {
                if forward[i] == (d % 2 == 0) {
                    rhs = !rhs;
                }
            } else {
                row.flip(col[i]);
                if d % 2 == 1 {
                    rhs = !rhs;
                }
            }
        }
        rows.push((row, rhs));
    }
    let x = solve_gf2(rows, seam.len())
        .ok_or_else(|| Error::Invariant("no odd orientation of the torus faces".into()))?;
    for (k, &i) in seam.iter().enumerate() {
        forward[i] = x.get(k);
    }
    let base = Orientation { forward };
    if base.odd_faces(&torus_faces) != torus_faces.len() {
        return Err(Error::Invariant("torus orientation left an even face".into()));
    }

    // relative sign of matchings whose symmetric difference with the
    // reference lies in each homology class, under each seam flip
    let reference = matching_for_cycle(dg, &Bits::zeros(lat.n_qubits()))?;
    let logicals = lat.logical_representatives();
    let (a, b) = (&logicals[0].bits, &logicals[1].bits);
    let class_cycles = [a.clone(), b.clone(), a.xor(b)];
    let class_matchings: Vec<Vec<usize>> = class_cycles
        .iter()
        .map(|c| matching_for_cycle(dg, c))
        .collect::<Result<_>>()?;
    let flips = |fr: bool, fc: bool| {
        let mut edges = Vec::new();
        if fr {
            edges.extend(&row_seam);
        }
        if fc {
            edges.extend(&column_seam);
        }
        base.flipped(&edges)
    };
    let variants = [(false, false), (true, false), (false, true), (true, true)];
    // sigma[o][c]: class c = trivial, a, b, a+b
    let mut sigma = [[1i8; 4]; 4];
    for (o, &(fr, fc)) in variants.iter().enumerate() {
        let or = flips(fr, fc);
        let s0 = matching_sign(dg, &or, &reference);
        for (c, m) in class_matchings.iter().enumerate() {
            sigma[o][c + 1] = s0 * matching_sign(dg, &or, m);
        }
    }
    // exactly one variant must enter with a minus sign: for every class,
    // sum_o coeff_o sigma[o][c] = 2 with coeff = +-1
    let odd = (0..4).find(|&neg| {
        (0..4).all(|c| {
            let total: i32 = (0..4)
                .map(|o| if o == neg { -1 } else { 1 } * sigma[o][c] as i32)
                .sum();
            total == 2
        })
    });
    let Some(neg) = odd else {
        return Err(Error::Invariant(format!("torus sign classes {sigma:?} admit no four-Pfaffian combination")));
    };
    // relabel so that the negative variant is (-1, -1)
    let (nr, nc) = variants[neg];
    let base = flips(!nr, !nc);
    let orientations = variants.map(|(fr, fc)| {
        let mut edges = Vec::new();
        if fr {
            edges.extend(&row_seam);
        }
        if fc {
            edges.extend(&column_seam);
        }
        base.flipped(&edges)
    });
    let reference_signs = [0, 1, 2, 3].map(|o| matching_sign(dg, &orientations[o], &reference));
    Ok(ToricKasteleyn {
        orientations,
        reference,
        reference_signs,
        row_seam,
        column_seam,
    })
}

/// Solves `row . x = rhs` over GF(2); `None` if inconsistent.
fn solve_gf2(mut rows: Vec<(Bits, bool)>, n: usize) -> Option<Bits> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0.get(c)) else {
            continue;
        };
        rows.swap(r, p);
        let (pr, prhs) = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.0.get(c) {
                row.0.xor_with(&pr);
                row.1 ^= prhs;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|(_, rhs)| *rhs) {
        return None;
    }
    let mut x = Bits::zeros(n);
    for (i, &c) in pivots.iter().enumerate() {
        x.set(c, rows[i].1);
    }
    Some(x)
}
