//! Incremental primal-dual maximum-weight matching.
//!
//! Vertices start inactive. `activate(v)` adds `v` to the graph under the
//! assumption that the current matching is maximum on the active vertices,
//! and restores maximality by a single search rooted at `v`: it grows one
//! alternating tree, shrinking and expanding blossoms, until `v` reaches an
//! augmenting path, its dual hits zero, or another tree vertex's dual hits
//! zero (in which case the even path from `v` to that vertex is flipped).
//! Activating every vertex in any order yields a maximum-weight matching;
//! the separator solver only chooses a clever order.
//!
//! Conventions follow the classic implementation: vertex duals are stored
//! doubled, edge slack is `y_i + y_j - 2 w`, blossom duals move by the same
//! delta as vertex duals. During a search every tree node's dual is linear
//! in the global delta, so it is stored as `(base, time, rate)` and only
//! materialized when its label changes. Pending events (a dual reaching
//! zero, an edge becoming tight, a T-blossom dual reaching zero) live in one
//! heap keyed by the delta at which they fire; stale entries are dropped
//! when popped.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

const NONE: usize = usize::MAX;

const FREE: u8 = 0;
const S: u8 = 1;
const T: u8 = 2;
const CRUMB: u8 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Event {
    VertexDual = 1,
    Grow = 2,
    Shrink = 3,
    Expand = 4,
}

type Entry = Reverse<(i128, Event, usize, usize)>;

/// How a search ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The new vertex joined with zero dual and stays unmatched.
    Unchanged,
    /// An augmenting path from the new vertex was applied.
    Augmented,
    /// An even alternating path was flipped; the named vertex became free.
    Flipped(usize),
}

#[derive(Clone, Debug, Default)]
pub struct Stats {
    pub activations: usize,
    pub augmentations: usize,
    pub flips: usize,
    pub events: usize,
    /// Heap entries pushed, live or not.
    pub pushes: usize,
    /// Vertices scanned as S.
    pub scans: usize,
}

#[derive(Clone, Debug)]
pub struct Engine {
    n: usize,
    /// endpoint[2k] and endpoint[2k+1] are the ends of edge k.
    endpoint: Vec<usize>,
    weight: Vec<i128>,
    /// Remote endpoints of the edges at each vertex.
    neighbend: Vec<Vec<usize>>,
    active: Vec<bool>,
    /// Remote endpoint of the matched edge, or NONE.
    mate: Vec<usize>,

    // per node (vertices 0..n, blossoms n..2n)
    label: Vec<u8>,
    labelend: Vec<usize>,
    parent: Vec<usize>,
    childs: Vec<Vec<usize>>,
    endps: Vec<Vec<usize>>,
    base: Vec<usize>,
    /// Leaf count of each node.
    size: Vec<usize>,
    unused: Vec<usize>,
    /// Leaf group of each top-level node.
    node_group: Vec<usize>,

    // leaf groups: the leaves of one top-level node, merged small into
    // large when blossoms form and split small out of large on expansion
    group: Vec<usize>,
    group_top: Vec<usize>,
    members: Vec<Vec<usize>>,
    member_pos: Vec<usize>,
    free_groups: Vec<usize>,

    // lazy duals: a blossom's value is dbase + rate * (delta - dtime); a
    // vertex's is dbase plus the offset of its group, which moves the
    // same way
    dbase: Vec<i128>,
    dtime: Vec<i128>,
    rate: Vec<i8>,
    gacc: Vec<i128>,
    gtime: Vec<i128>,
    grate: Vec<i8>,
    delta: i128,

    heap: BinaryHeap<Entry>,
    touched: Vec<usize>,
    touched_groups: Vec<usize>,
    stage_blossoms: Vec<usize>,
    pub stats: Stats,
}

impl Engine {
    /// `edges` are `(u, v, w)`; self-loops are ignored.
    pub fn new(n: usize, edges: &[(usize, usize, i128)]) -> Self {
        let mut endpoint = Vec::with_capacity(2 * edges.len());
        let mut weight = Vec::with_capacity(edges.len());
        let mut neighbend = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            assert!(u < n && v < n, "edge endpoint out of range");
            let k = weight.len();
            endpoint.push(u);
            endpoint.push(v);
            weight.push(w);
            if u != v {
                neighbend[u].push(2 * k + 1);
                neighbend[v].push(2 * k);
            }
        }
        Engine {
            n,
            endpoint,
            weight,
            neighbend,
            active: vec![false; n],
            mate: vec![NONE; n],
            label: vec![FREE; 2 * n],
            labelend: vec![NONE; 2 * n],
            parent: vec![NONE; 2 * n],
            childs: vec![Vec::new(); 2 * n],
            endps: vec![Vec::new(); 2 * n],
            base: (0..n).chain(std::iter::repeat(NONE).take(n)).collect(),
            size: (0..2 * n).map(|x| usize::from(x < n)).collect(),
            unused: (n..2 * n).rev().collect(),
            node_group: (0..n).chain(std::iter::repeat(NONE).take(n)).collect(),
            group: (0..n).collect(),
            group_top: (0..n).collect(),
            members: (0..n).map(|v| vec![v]).collect(),
            member_pos: vec![0; n],
            free_groups: Vec::new(),
            dbase: vec![0; 2 * n],
            dtime: vec![0; 2 * n],
            rate: vec![0; 2 * n],
            gacc: vec![0; n],
            gtime: vec![0; n],
            grate: vec![0; n],
            delta: 0,
            heap: BinaryHeap::new(),
            touched: Vec::new(),
            touched_groups: Vec::new(),
            stage_blossoms: Vec::new(),
            stats: Stats::default(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn is_active(&self, v: usize) -> bool {
        self.active[v]
    }

    pub fn mate_of(&self, v: usize) -> Option<usize> {
        match self.mate[v] {
            NONE => None,
            p => Some(self.endpoint[p]),
        }
    }

    /// Matched edge ids, ascending.
    pub fn matched_edges(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.n)
            .filter_map(|v| match self.mate[v] {
                NONE => None,
                p if self.endpoint[p] > v => Some(p / 2),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn matched_weight(&self) -> i128 {
        self.matched_edges().iter().map(|&k| self.weight[k]).sum()
    }

    /// Doubled vertex dual.
    pub fn vertex_dual(&self, v: usize) -> i128 {
        self.dual(v)
    }

    #[inline]
    fn group_offset(&self, g: usize) -> i128 {
        self.gacc[g] + self.grate[g] as i128 * (self.delta - self.gtime[g])
    }

    #[inline]
    fn dual(&self, x: usize) -> i128 {
        if x < self.n {
            self.dbase[x] + self.group_offset(self.group[x])
        } else {
            self.dbase[x] + self.rate[x] as i128 * (self.delta - self.dtime[x])
        }
    }

    /// Top-level node containing vertex `v`.
    #[inline]
    fn top(&self, v: usize) -> usize {
        self.group_top[self.group[v]]
    }

    /// Rate of a blossom's own dual.
    #[inline]
    fn set_rate(&mut self, x: usize, r: i8) {
        debug_assert!(x >= self.n);
        if self.rate[x] != r {
            self.dbase[x] = self.dual(x);
            self.dtime[x] = self.delta;
            self.rate[x] = r;
        }
    }

    /// Rate of every leaf dual under top-level node `b`.
    fn set_leaf_rate(&mut self, b: usize, r: i8) {
        let g = self.node_group[b];
        if self.grate[g] != r {
            self.gacc[g] = self.group_offset(g);
            self.gtime[g] = self.delta;
            self.grate[g] = r;
            self.touched_groups.push(g);
        }
    }

    fn group_leaves(&self, b: usize) -> Vec<usize> {
        self.members[self.node_group[b]].clone()
    }

    /// Merges the groups of `childs` into the largest one, now owned by `b`.
    fn merge_groups(&mut self, b: usize, childs: &[usize]) {
        let gs: Vec<usize> = childs.iter().map(|&c| self.node_group[c]).collect();
        let keep = *gs.iter().max_by_key(|&&g| self.members[g].len()).unwrap();
        let off = self.group_offset(keep);
        for g in gs {
            if g == keep {
                continue;
            }
            let shift = self.group_offset(g) - off;
            for v in std::mem::take(&mut self.members[g]) {
                self.dbase[v] += shift;
                self.group[v] = keep;
                self.member_pos[v] = self.members[keep].len();
                self.members[keep].push(v);
            }
            self.free_groups.push(g);
        }
        for &c in childs {
            self.node_group[c] = NONE;
        }
        self.group_top[keep] = b;
        self.node_group[b] = keep;
    }

    /// Gives every child of expanding blossom `b` its own group; the
    /// largest child keeps `b`'s group. Leaf duals are unchanged.
    fn split_groups(&mut self, b: usize, childs: &[usize]) {
        let g = self.node_group[b];
        self.node_group[b] = NONE;
        let big = *childs.iter().max_by_key(|&&c| self.size[c]).unwrap();
        let off = self.group_offset(g);
        for &c in childs {
            if c == big {
                continue;
            }
            let ng = self.free_groups.pop().expect("group ids exhausted");
            self.gacc[ng] = off;
            self.gtime[ng] = self.delta;
            self.grate[ng] = self.grate[g];
            self.touched_groups.push(ng);
            let mut leaves = Vec::with_capacity(self.size[c]);
            self.leaves(c, &mut leaves);
            for v in leaves {
                // swap-remove from the old group
                let pos = self.member_pos[v];
                let last = self.members[g].pop().unwrap();
                if last != v {
                    self.members[g][pos] = last;
                    self.member_pos[last] = pos;
                }
                self.group[v] = ng;
                self.member_pos[v] = self.members[ng].len();
                self.members[ng].push(v);
            }
            self.group_top[ng] = c;
            self.node_group[c] = ng;
        }
        self.group_top[g] = big;
        self.node_group[big] = g;
    }

    #[inline]
    fn slack(&self, k: usize) -> i128 {
        self.dual(self.endpoint[2 * k]) + self.dual(self.endpoint[2 * k + 1]) - 2 * self.weight[k]
    }

    fn leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.n {
            out.push(b);
        } else {
            for &t in &self.childs[b] {
                self.leaves(t, out);
            }
        }
    }

    /// Adds `v` and restores a maximum-weight matching on the active set.
    pub fn activate(&mut self, v: usize) -> Outcome {
        assert!(!self.active[v], "vertex {v} activated twice");
        self.active[v] = true;
        self.stats.activations += 1;
        let mut y = 0i128;
        for &p in &self.neighbend[v] {
            let u = self.endpoint[p];
            if self.active[u] {
                y = y.max(2 * self.weight[p / 2] - self.dual(u));
            }
        }
        self.dbase[v] = y - self.group_offset(self.group[v]);
        if y == 0 {
            return Outcome::Unchanged;
        }
        let out = self.search(v);
        match out {
            Outcome::Augmented => self.stats.augmentations += 1,
            Outcome::Flipped(_) => self.stats.flips += 1,
            Outcome::Unchanged => {}
        }
        out
    }

    fn push(&mut self, key: i128, ev: Event, a: usize, b: usize) {
        self.stats.pushes += 1;
        self.heap.push(Reverse((key, ev, a, b)));
    }

    fn touch(&mut self, x: usize) {
        self.touched.push(x);
    }

    fn search(&mut self, root: usize) -> Outcome {
        self.delta = 0;
        self.heap.clear();
        self.assign_label(root, S, NONE);
        let outcome = loop {
            let Reverse((key, ev, a, b)) = self.heap.pop().expect("root dual event pending");
            if !self.is_live(key, ev, a, b) {
                continue;
            }
            self.stats.events += 1;
            self.delta = key;
            match ev {
                Event::VertexDual => {
                    if a == root {
                        break Outcome::Unchanged;
                    }
                    self.augment_from(a, NONE);
                    break Outcome::Flipped(a);
                }
                Event::Grow => {
                    // a is the S-side endpoint index, b the edge's remote endpoint
                    let p = b;
                    let w = self.endpoint[p];
                    let bw = self.top(w);
                    if self.mate[self.base[bw]] == NONE {
                        if bw >= self.n {
                            self.augment_blossom(bw, w);
                        }
                        self.mate[w] = p ^ 1;
                        self.augment_from(self.endpoint[p ^ 1], p);
                        break Outcome::Augmented;
                    }
                    self.assign_label(w, T, p ^ 1);
                }
                Event::Shrink => {
                    let k = a;
                    let base = self.scan_blossom(self.endpoint[2 * k], self.endpoint[2 * k + 1]);
                    assert_ne!(base, NONE, "two S-blossoms of one tree always share a base");
                    self.add_blossom(base, k);
                }
                Event::Expand => {
                    self.expand_blossom(a, false);
                }
            }
        };
        self.finish_stage();
        outcome
    }

    fn is_live(&self, key: i128, ev: Event, a: usize, b: usize) -> bool {
        match ev {
            Event::VertexDual => {
                self.label[self.top(a)] == S && key == self.delta + self.dual(a)
            }
            Event::Grow => {
                let x = self.endpoint[b ^ 1];
                let w = self.endpoint[b];
                self.label[self.top(x)] == S
                    && self.label[self.top(w)] == FREE
                    && self.active[w]
                    && key == self.delta + self.slack(a)
            }
            Event::Shrink => {
                let bi = self.top(self.endpoint[2 * a]);
                let bj = self.top(self.endpoint[2 * a + 1]);
                bi != bj
                    && self.label[bi] == S
                    && self.label[bj] == S
                    && key == self.delta + self.slack(a) / 2
            }
            Event::Expand => {
                self.base[a] != NONE
                    && self.parent[a] == NONE
                    && self.label[a] == T
                    && key == self.delta + self.dual(a)
            }
        }
    }

    /// Queue the events of a vertex that just became S.
    fn scan_s_vertex(&mut self, x: usize) {
        self.stats.scans += 1;
        let key = self.delta + self.dual(x);
        self.push(key, Event::VertexDual, x, 0);
        let bx = self.top(x);
        for i in 0..self.neighbend[x].len() {
            let p = self.neighbend[x][i];
            let w = self.endpoint[p];
            if !self.active[w] {
                continue;
            }
            let bw = self.top(w);
            if bw == bx {
                continue;
            }
            let k = p / 2;
            match self.label[bw] {
                FREE => {
                    let key = self.delta + self.slack(k);
                    self.push(key, Event::Grow, k, p);
                }
                S => {
                    let s = self.slack(k);
                    debug_assert!(s % 2 == 0, "S-S slack must be even");
                    self.push(self.delta + s / 2, Event::Shrink, k, 0);
                }
                _ => {
                    // reached vertex inside a T-blossom; remembered for expansion
                    if self.label[w] == FREE && self.slack(k) == 0 {
                        self.label[w] = T;
                        self.labelend[w] = p ^ 1;
                        self.touch(w);
                    }
                }
            }
        }
    }

    /// Queue growth events into a vertex that just lost its label.
    fn scan_free_vertex(&mut self, w: usize) {
        for i in 0..self.neighbend[w].len() {
            let p = self.neighbend[w][i];
            let x = self.endpoint[p];
            if self.active[x] && self.label[self.top(x)] == S {
                let k = p / 2;
                let key = self.delta + self.slack(k);
                self.push(key, Event::Grow, k, p ^ 1);
            }
        }
    }

    fn set_top_label(&mut self, b: usize, t: u8) {
        self.label[b] = t;
        self.touch(b);
        let r = match t {
            S => -1,
            T => 1,
            _ => 0,
        };
        if b >= self.n {
            self.set_rate(b, -r);
        }
        self.set_leaf_rate(b, r);
    }

    fn assign_label(&mut self, w: usize, t: u8, p: usize) {
        let b = self.top(w);
        debug_assert!(self.label[w] == FREE && self.label[b] == FREE);
        self.label[w] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.touch(w);
        self.set_top_label(b, t);
        if t == S {
            if b >= self.n {
                self.stage_blossoms.push(b);
            }
            for v in self.group_leaves(b) {
                self.scan_s_vertex(v);
            }
        } else {
            if b >= self.n {
                let key = self.delta + self.dual(b);
                self.push(key, Event::Expand, b, 0);
            }
            let base = self.base[b];
            let mbase = self.mate[base];
            assert_ne!(mbase, NONE, "T-blossom base must be matched");
            self.assign_label(self.endpoint[mbase], S, mbase ^ 1);
        }
    }

    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let (mut v, mut w) = (v, w);
        while v != NONE || w != NONE {
            let mut b = self.top(v);
            if self.label[b] & CRUMB != 0 {
                base = self.base[b];
                break;
            }
            debug_assert_eq!(self.label[b], S);
            path.push(b);
            self.label[b] = S | CRUMB;
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b]];
                b = self.top(v);
                debug_assert_eq!(self.label[b], T);
                v = self.endpoint[self.labelend[b]];
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = S;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w) = (self.endpoint[2 * k], self.endpoint[2 * k + 1]);
        let bb = self.top(base);
        let mut bv = self.top(v);
        let mut bw = self.top(w);
        let b = self.unused.pop().expect("blossom ids exhausted");
        self.base[b] = base;
        self.parent[b] = NONE;
        self.parent[bb] = b;
        let mut childs = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.parent[bv] = b;
            childs.push(bv);
            endps.push(self.labelend[bv]);
            v = self.endpoint[self.labelend[bv]];
            bv = self.top(v);
        }
        childs.push(bb);
        childs.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.parent[bw] = b;
            childs.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            w = self.endpoint[self.labelend[bw]];
            bw = self.top(w);
        }
        // freeze the children's duals before they stop being top-level
        for &c in &childs {
            if c >= self.n {
                self.set_rate(c, 0);
            }
        }
        let mut new_s = Vec::new();
        for &c in &childs {
            if self.label[c] == T {
                new_s.extend(self.group_leaves(c));
            }
        }
        for &c in &childs {
            self.size[b] += self.size[c];
        }
        self.merge_groups(b, &childs);
        self.childs[b] = childs;
        self.endps[b] = endps;
        self.label[b] = S;
        self.labelend[b] = self.labelend[bb];
        self.dbase[b] = 0;
        self.dtime[b] = self.delta;
        self.rate[b] = 1;
        self.touch(b);
        self.stage_blossoms.push(b);
        self.set_leaf_rate(b, -1);
        for x in new_s {
            self.scan_s_vertex(x);
        }
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.childs[b].clone();
        for &s in &childs {
            self.parent[s] = NONE;
        }
        self.split_groups(b, &childs);
        if endstage {
            for &s in &childs {
                if s >= self.n && self.dual(s) == 0 {
                    self.expand_blossom(s, endstage);
                }
            }
        }
        if !endstage && self.label[b] == T {
            // every leaf restarts from an unlabeled state
            for &c in &childs {
                self.set_leaf_rate(c, 0);
            }
            let entry = self.top(self.endpoint[self.labelend[b] ^ 1]);
            let len = childs.len() as isize;
            let at = |j: isize| ((j % len + len) % len) as usize;
            let mut j = childs.iter().position(|&c| c == entry).unwrap() as isize;
            let (jstep, trick): (isize, usize) = if j & 1 != 0 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };
            let mut p = self.labelend[b];
            while j != 0 {
                let e1 = self.endpoint[p ^ 1];
                self.label[e1] = FREE;
                let q = self.endps[b][at(j - trick as isize)] ^ trick ^ 1;
                self.label[self.endpoint[q]] = FREE;
                self.assign_label(e1, T, p);
                j += jstep;
                p = self.endps[b][at(j - trick as isize)] ^ trick;
                j += jstep;
            }
            let bv = childs[at(j)];
            let e1 = self.endpoint[p ^ 1];
            self.label[e1] = T;
            self.labelend[e1] = p;
            self.touch(e1);
            self.labelend[bv] = p;
            self.set_top_label(bv, T);
            if bv >= self.n {
                let key = self.delta + self.dual(bv);
                self.push(key, Event::Expand, bv, 0);
            }
            j += jstep;
            while childs[at(j)] != entry {
                let bv = childs[at(j)];
                if self.label[bv] == S {
                    j += jstep;
                    continue;
                }
                let reached = self.members[self.node_group[bv]]
                    .iter()
                    .copied()
                    .find(|&x| self.label[x] != FREE);
                if let Some(x) = reached {
                    self.label[x] = FREE;
                    let mb = self.mate[self.base[bv]];
                    self.label[self.endpoint[mb]] = FREE;
                    let le = self.labelend[x];
                    self.assign_label(x, T, le);
                }
                j += jstep;
            }
            // children left unlabeled may be reachable by tight edges
            for &c in &childs {
                if self.label[c] == FREE {
                    for x in self.group_leaves(c) {
                        self.label[x] = FREE;
                        self.scan_free_vertex(x);
                    }
                }
            }
        }
        self.label[b] = FREE;
        self.labelend[b] = NONE;
        self.base[b] = NONE;
        self.size[b] = 0;
        self.rate[b] = 0;
        self.dbase[b] = 0;
        self.childs[b].clear();
        self.endps[b].clear();
        self.unused.push(b);
    }

    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut chain = vec![v];
        let mut t = v;
        while t != b {
            t = self.parent[t];
            chain.push(t);
        }
        self.augment_chain(&chain);
    }

    /// `chain` runs from a vertex up through its ancestors to the blossom
    /// being augmented, so nested levels never re-walk the parent links.
    fn augment_chain(&mut self, chain: &[usize]) {
        let b = chain[chain.len() - 1];
        let v = chain[0];
        let t = chain[chain.len() - 2];
        if t >= self.n {
            self.augment_chain(&chain[..chain.len() - 1]);
        }
        let len = self.childs[b].len() as isize;
        let at = |j: isize| ((j % len + len) % len) as usize;
        let i = self.childs[b].iter().position(|&c| c == t).unwrap();
        let mut j = i as isize;
        let (jstep, trick): (isize, usize) = if i & 1 != 0 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let t1 = self.childs[b][at(j)];
            let p = self.endps[b][at(j - trick as isize)] ^ trick;
            if t1 >= self.n {
                self.augment_blossom(t1, self.endpoint[p]);
            }
            j += jstep;
            let t2 = self.childs[b][at(j)];
            if t2 >= self.n {
                self.augment_blossom(t2, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        self.childs[b].rotate_left(i);
        self.endps[b].rotate_left(i);
        self.base[b] = self.base[self.childs[b][0]];
        debug_assert_eq!(self.base[b], v);
    }

    /// Matches S-vertex `s` to remote endpoint `p` (or frees it when `p` is
    /// NONE) and flips the tree path from `s` back to the root.
    fn augment_from(&mut self, s: usize, p: usize) {
        let (mut s, mut p) = (s, p);
        loop {
            let bs = self.top(s);
            debug_assert_eq!(self.label[bs], S);
            if bs >= self.n {
                self.augment_blossom(bs, s);
            }
            self.mate[s] = p;
            if self.labelend[bs] == NONE {
                break;
            }
            let t = self.endpoint[self.labelend[bs]];
            let bt = self.top(t);
            debug_assert_eq!(self.label[bt], T);
            s = self.endpoint[self.labelend[bt]];
            let j = self.endpoint[self.labelend[bt] ^ 1];
            if bt >= self.n {
                self.augment_blossom(bt, j);
            }
            self.mate[j] = self.labelend[bt];
            p = self.labelend[bt] ^ 1;
        }
    }

    fn finish_stage(&mut self) {
        // expand S-blossoms whose dual dropped to zero
        let blossoms = std::mem::take(&mut self.stage_blossoms);
        for b in blossoms {
            if self.base[b] != NONE && self.parent[b] == NONE && self.label[b] == S && self.dual(b) == 0
            {
                self.expand_blossom(b, true);
            }
        }
        for g in std::mem::take(&mut self.touched_groups) {
            self.gacc[g] = self.group_offset(g);
            self.grate[g] = 0;
            self.gtime[g] = 0;
        }
        let touched = std::mem::take(&mut self.touched);
        for x in touched {
            if x >= self.n && self.rate[x] != 0 {
                self.dbase[x] = self.dual(x);
                self.rate[x] = 0;
            }
            self.dtime[x] = 0;
            self.label[x] = FREE;
            self.labelend[x] = NONE;
        }
        self.delta = 0;
        self.heap.clear();
    }

    /// Checks dual feasibility and complementary slackness on the active
    /// subgraph; a passing check certifies the matching is maximum.
    pub fn certify(&self) -> std::result::Result<(), String> {
        for v in 0..self.n {
            if !self.active[v] {
                if self.mate[v] != NONE {
                    return Err(format!("inactive vertex {v} is matched"));
                }
                continue;
            }
            let y = self.dual(v);
            if y < 0 {
                return Err(format!("vertex {v} has negative dual"));
            }
            if self.mate[v] == NONE && y != 0 {
                return Err(format!("free vertex {v} has dual {y}"));
            }
        }
        let chain_of = |v: usize| {
            let mut out = vec![v];
            while self.parent[*out.last().unwrap()] != NONE {
                out.push(self.parent[*out.last().unwrap()]);
            }
            out.reverse();
            out
        };
        for k in 0..self.weight.len() {
            let (i, j) = (self.endpoint[2 * k], self.endpoint[2 * k + 1]);
            if i == j || !self.active[i] || !self.active[j] {
                continue;
            }
            let mut s = self.slack(k);
            for (bi, bj) in chain_of(i).into_iter().zip(chain_of(j)) {
                if bi != bj {
                    break;
                }
                s += 2 * self.dual(bi);
            }
            if s < 0 {
                return Err(format!("edge {k} has negative slack {s}"));
            }
            let matched = self.mate[i] == 2 * k + 1;
            if matched != (self.mate[j] == 2 * k) {
                return Err(format!("edge {k} is half matched"));
            }
            if matched && s != 0 {
                return Err(format!("matched edge {k} has slack {s}"));
            }
        }
        for b in self.n..2 * self.n {
            if self.base[b] == NONE {
                continue;
            }
            if self.dual(b) < 0 {
                return Err(format!("blossom {b} has negative dual"));
            }
            if self.dual(b) > 0 {
                for (ix, &p) in self.endps[b].iter().enumerate() {
                    if ix % 2 == 1 && self.mate[self.endpoint[p]] != p ^ 1 {
                        return Err(format!("blossom {b} with positive dual is not full"));
                    }
                }
            }
        }
        Ok(())
    }
}
