//! Lays the atoms of a decorated graph on the grid of lattice checks so the
//! separator solver can split it into quadrants.

use crate::gadgets::{DecoratedGraph, Owner};
use crate::lattice::{Family, Lattice};
use crate::matching::GridOverlay;

/// Check gadgets sit in the cell of their check. Boundary-gadget atoms take
/// the cell of the check across their port edge (internal atoms borrow the
/// cell of their first port neighbour). On the torus the first row and
/// column of cells are held back, which removes every wrapping edge. Any
/// atom still on an edge that skips a cell is held back as well.
pub fn grid_overlay(lat: &Lattice, dg: &DecoratedGraph) -> GridOverlay {
    let n = dg.n_atoms;
    let mut cell: Vec<Option<(i64, i64)>> = vec![None; n];
    for (v, pl) in dg.gadgets.iter().enumerate() {
        let c = lat.grid_cell(v);
        for a in pl.start..pl.start + pl.gadget.n_local {
            cell[a] = Some(c);
        }
    }
    if let Some(pl) = &dg.boundary_gadget {
        let g = &pl.gadget;
        let port_cell = |j: usize| {
            let e = pl.ports[j];
            let v = lat.check_ends(e).next().expect("boundary edge has a check end");
            lat.grid_cell(v)
        };
        for j in 0..g.n_external {
            cell[pl.start + g.port_vertex[j]] = Some(port_cell(j));
        }
        for i in g.n_external..g.n_local {
            let first_port = g
                .edges
                .iter()
                .filter_map(|&(a, b)| match (a == i, b == i) {
                    (true, _) if b < g.n_external => Some(b),
                    (_, true) if a < g.n_external => Some(a),
                    _ => None,
                })
                .min();
            cell[pl.start + i] = first_port.map(port_cell);
        }
    }

    let mut deferred: Vec<usize> = Vec::new();
    if lat.kind() == Family::Toric {
        let mut held: Vec<(i64, i64, usize)> = Vec::new();
        for (a, c) in cell.iter_mut().enumerate() {
            if let Some((r, col)) = *c {
                if r == 0 || col == 0 {
                    held.push((r, col, a));
                    *c = None;
                } else {
                    *c = Some((r - 1, col - 1));
                }
            }
        }
        held.sort_unstable();
        deferred.extend(held.into_iter().map(|x| x.2));
    }
    // unplaced boundary internals
    for a in 0..n {
        if cell[a].is_none() && !deferred.contains(&a) {
            deferred.push(a);
        }
    }

    // hold back atoms on edges that skip a cell, boundary atoms first
    for d in &dg.edges {
        if let (Some(cu), Some(cv)) = (cell[d.u], cell[d.v]) {
            if (cu.0 - cv.0).abs() > 1 || (cu.1 - cv.1).abs() > 1 {
                let pick = |x: usize| (dg.owner[x] == Owner::Boundary, x);
                let victim = if pick(d.u) > pick(d.v) { d.u } else { d.v };
                cell[victim] = None;
                deferred.push(victim);
            }
        }
    }

    let r0 = cell.iter().flatten().map(|c| c.0).min().unwrap_or(0);
    let c0 = cell.iter().flatten().map(|c| c.1).min().unwrap_or(0);
    let cells: Vec<Option<(usize, usize)>> = cell
        .iter()
        .map(|c| c.map(|(r, col)| ((r - r0) as usize, (col - c0) as usize)))
        .collect();
    GridOverlay::from_cells(n, &cells, deferred)
}
