//! Textbook matching decoder on the complete graph of defects, kept as an
//! independent reference for the decorated-graph decoders.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::check_syndrome;
use crate::chain::Chain;
use crate::error::Result;
use crate::lattice::Lattice;
use crate::matching::{mwm_blossom, mwpm_to_mwm_weights, WeightedGraph};

/// Dijkstra distances from `src` over every lattice vertex, boundary
/// vertices included.
pub fn shortest_distances(lat: &Lattice, src: usize, weight: &dyn Fn(usize) -> i64) -> Vec<i64> {
    let mut dist = vec![i64::MAX; lat.n_vertices_total()];
    let mut heap = BinaryHeap::new();
    dist[src] = 0;
    heap.push(Reverse((0i64, src)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &e in lat.incident(u) {
            let v = lat.other_end(e, u);
            let nd = d + weight(e);
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

/// Minimum total weight of an error with syndrome `s`: minimum-weight
/// perfect matching over the defects, where each defect also has a private
/// boundary twin (twins pair up for free) when the lattice has a boundary.
pub fn classical_weight(lat: &Lattice, s: &Chain, weight: &dyn Fn(usize) -> i64) -> Result<i128> {
    check_syndrome(lat, s)?;
    let defects = s.bits.ones();
    let m = defects.len();
    if m == 0 {
        return Ok(0);
    }
    let has_boundary = !lat.boundary_vertices().is_empty();
    let mut edges: Vec<(usize, usize, i128)> = Vec::new();
    for (i, &d) in defects.iter().enumerate() {
        let dist = shortest_distances(lat, d, weight);
        for (j, &t) in defects.iter().enumerate().skip(i + 1) {
            if dist[t] < i64::MAX {
                edges.push((i, j, dist[t] as i128));
            }
        }
        if has_boundary {
            let to_b = lat.boundary_vertices().map(|b| dist[b]).min().unwrap_or(i64::MAX);
            if to_b < i64::MAX {
                edges.push((i, m + i, to_b as i128));
            }
            for j in i + 1..m {
                edges.push((m + i, m + j, 0));
            }
        }
    }
    let n = if has_boundary { 2 * m } else { m };
    let g = WeightedGraph::new(n, edges);
    let k = g.edges.iter().map(|e| e.2).max().unwrap_or(0).max(1);
    let t = mwpm_to_mwm_weights(&g, k)?;
    let mm = mwm_blossom(&t);
    if !mm.is_perfect() {
        return Err(crate::error::Error::NotPerfect {
            unmatched: mm.unmatched(),
        });
    }
    Ok(mm.edges.iter().map(|&i| g.edges[i].2).sum())
}
