//! Exact maximum-weight matching: a blossom baseline, the single-vertex
//! augmentation primitive, and the recursive grid-separator solver.

pub mod engine;

use crate::error::{Error, Result};
pub use engine::{Engine, Outcome, Stats};

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, i128)>,
    pub overlay: Option<GridOverlay>,
}

/// Atoms grouped into grid cells. Edges between non-deferred atoms must
/// join cells at Chebyshev distance at most 1. Deferred atoms sit outside
/// the grid and are added last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridOverlay {
    pub rows: usize,
    pub cols: usize,
    /// Atoms of each cell, row-major.
    pub cells: Vec<Vec<usize>>,
    pub deferred: Vec<usize>,
}

impl GridOverlay {
    pub fn from_cells(n: usize, cell_of: &[Option<(usize, usize)>], deferred: Vec<usize>) -> Self {
        let rows = cell_of.iter().flatten().map(|c| c.0 + 1).max().unwrap_or(0);
        let cols = cell_of.iter().flatten().map(|c| c.1 + 1).max().unwrap_or(0);
        let mut cells = vec![Vec::new(); rows * cols];
        for v in 0..n {
            if let Some((r, c)) = cell_of[v] {
                cells[r * cols + c].push(v);
            }
        }
        GridOverlay {
            rows,
            cols,
            cells,
            deferred,
        }
    }

    fn cell_index(&self) -> Vec<Option<(usize, usize)>> {
        let n = self.cells.iter().flatten().chain(&self.deferred).max().map_or(0, |m| m + 1);
        let mut out = vec![None; n];
        for r in 0..self.rows {
            for c in 0..self.cols {
                for &v in &self.cells[r * self.cols + c] {
                    out[v] = Some((r, c));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub mate: Vec<Option<usize>>,
    /// Matched edge ids, ascending.
    pub edges: Vec<usize>,
    pub weight: i128,
}

impl Matching {
    pub fn from_engine(e: &Engine) -> Self {
        Matching {
            mate: (0..e.n_vertices()).map(|v| e.mate_of(v)).collect(),
            edges: e.matched_edges(),
            weight: e.matched_weight(),
        }
    }

    pub fn is_perfect(&self) -> bool {
        self.mate.iter().all(Option::is_some)
    }

    pub fn unmatched(&self) -> usize {
        self.mate.iter().filter(|m| m.is_none()).count()
    }

    /// Partner map, edge list and stored weight agree with `g`.
    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        let mut mate = vec![None; g.n];
        let mut w = 0;
        for &k in &self.edges {
            let (u, v, wt) = g.edges[k];
            if mate[u].is_some() || mate[v].is_some() {
                return Err(Error::Invariant(format!("vertex shared by matched edge {k}")));
            }
            mate[u] = Some(v);
            mate[v] = Some(u);
            w += wt;
        }
        if mate != self.mate {
            return Err(Error::Invariant("partner map disagrees with edges".into()));
        }
        if w != self.weight {
            return Err(Error::Invariant("stored weight disagrees with edges".into()));
        }
        Ok(())
    }
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, i128)>) -> Self {
        WeightedGraph {
            n,
            edges,
            overlay: None,
        }
    }

    pub fn engine(&self) -> Engine {
        Engine::new(self.n, &self.edges)
    }
}

/// `w'(e) = k|V| - w(e)`: a maximum-weight matching of the result is a
/// minimum-weight perfect matching of `g` whenever one exists (k >= 1).
pub fn mwpm_to_mwm_weights(g: &WeightedGraph, k: i128) -> Result<WeightedGraph> {
    if k < 1 {
        return Err(Error::InvalidArgument("weight bound must be at least 1".into()));
    }
    let kv = k * g.n as i128;
    let mut edges = Vec::with_capacity(g.edges.len());
    for &(u, v, w) in &g.edges {
        if !(0..=k).contains(&w) {
            return Err(Error::InvalidArgument(format!("weight {w} outside [0, {k}]")));
        }
        edges.push((u, v, kv - w));
    }
    Ok(WeightedGraph {
        n: g.n,
        edges,
        overlay: g.overlay.clone(),
    })
}

/// Blossom baseline: every vertex activated in index order.
pub fn mwm_blossom(g: &WeightedGraph) -> Matching {
    let mut e = g.engine();
    for v in 0..g.n {
        e.activate(v);
    }
    Matching::from_engine(&e)
}

/// Adds `v` to a solver state that is maximum on its active vertices. The
/// state carries the dual certificate the augmentation needs.
pub fn augment_vertex(state: &mut Engine, v: usize) -> Outcome {
    state.activate(v)
}

#[derive(Clone, Debug, Default)]
pub struct SeparatorStats {
    pub depth: usize,
    pub separator_atoms: usize,
    pub base_cases: usize,
    pub engine: Stats,
}

/// Order in which the separator solver activates atoms: quadrants
/// recursively, then the atoms of the separating row and column
/// (row-major), and finally the deferred atoms.
pub fn separator_order(overlay: &GridOverlay) -> (Vec<usize>, SeparatorStats) {
    let mut out = Vec::new();
    let mut stats = SeparatorStats::default();
    recurse(overlay, 0, overlay.rows, 0, overlay.cols, 0, &mut out, &mut stats);
    out.extend(&overlay.deferred);
    (out, stats)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    ov: &GridOverlay,
    r0: usize,
    r1: usize,
    c0: usize,
    c1: usize,
    depth: usize,
    out: &mut Vec<usize>,
    stats: &mut SeparatorStats,
) {
    if r0 >= r1 || c0 >= c1 {
        return;
    }
    stats.depth = stats.depth.max(depth);
    let (h, w) = (r1 - r0, c1 - c0);
    let cell = |r: usize, c: usize| &ov.cells[r * ov.cols + c];
    if h <= 2 && w <= 2 {
        stats.base_cases += 1;
        for r in r0..r1 {
            for c in c0..c1 {
                out.extend(cell(r, c));
            }
        }
        return;
    }
    let rm = (h >= 3).then(|| r0 + h / 2);
    let cm = (w >= 3).then(|| c0 + w / 2);
    let row_parts = match rm {
        Some(m) => vec![(r0, m), (m + 1, r1)],
        None => vec![(r0, r1)],
    };
    let col_parts = match cm {
        Some(m) => vec![(c0, m), (m + 1, c1)],
        None => vec![(c0, c1)],
    };
    for &(a, b) in &row_parts {
        for &(c, d) in &col_parts {
            recurse(ov, a, b, c, d, depth + 1, out, stats);
        }
    }
    for r in r0..r1 {
        for c in c0..c1 {
            if Some(r) == rm || Some(c) == cm {
                let atoms = cell(r, c);
                stats.separator_atoms += atoms.len();
                out.extend(atoms);
            }
        }
    }
}

/// Checks the overlay covers every vertex once and that no edge between
/// gridded atoms skips a cell.
pub fn check_overlay(g: &WeightedGraph, ov: &GridOverlay) -> Result<()> {
    let mut seen = vec![false; g.n];
    for &v in ov.cells.iter().flatten().chain(&ov.deferred) {
        if v >= g.n || seen[v] {
            return Err(Error::Overlay(format!("atom {v} placed twice or out of range")));
        }
        seen[v] = true;
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Error::Overlay(format!("atom {v} has no cell")));
    }
    let cell = ov.cell_index();
    for &(u, v, _) in &g.edges {
        if let (Some((ru, cu)), Some((rv, cv))) = (cell[u], cell[v]) {
            if ru.abs_diff(rv) > 1 || cu.abs_diff(cv) > 1 {
                return Err(Error::Overlay(format!(
                    "edge {u}-{v} joins cells ({ru},{cu}) and ({rv},{cv})"
                )));
            }
        }
    }
    Ok(())
}

/// Recursive quadrant-separator solver. Quadrants share no edges once the
/// separating row and column are removed, so solving them in one engine
/// one after another is the same as solving them apart; the separator and
/// deferred atoms are then added one augmentation at a time.
pub fn mwm_separator(g: &WeightedGraph) -> Result<(Matching, SeparatorStats)> {
    let ov = g
        .overlay
        .as_ref()
        .ok_or_else(|| Error::Overlay("graph has no grid overlay".into()))?;
    check_overlay(g, ov)?;
    let (order, mut stats) = separator_order(ov);
    let mut e = g.engine();
    for v in order {
        e.activate(v);
    }
    stats.engine = e.stats.clone();
    Ok((Matching::from_engine(&e), stats))
}

/// Exhaustive maximum matching weight for graphs of at most ~20 vertices.
pub fn brute_force_mwm(g: &WeightedGraph) -> i128 {
    assert!(g.n <= 24, "brute force limited to small graphs");
    let mut adj: Vec<Vec<(usize, i128)>> = vec![Vec::new(); g.n];
    for &(u, v, w) in &g.edges {
        if u != v {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
    }
    fn go(adj: &[Vec<(usize, i128)>], used: u32, memo: &mut std::collections::HashMap<u32, i128>) -> i128 {
        let n = adj.len();
        let Some(v) = (0..n).find(|&v| used & (1 << v) == 0) else {
            return 0;
        };
        if let Some(&x) = memo.get(&used) {
            return x;
        }
        let mark = used | (1 << v);
        let mut best = go(adj, mark, memo);
        for &(u, w) in &adj[v] {
            if mark & (1 << u) == 0 {
                best = best.max(w + go(adj, mark | (1 << u), memo));
            }
        }
        memo.insert(used, best);
        best
    }
    go(&adj, 0, &mut std::collections::HashMap::new())
}
