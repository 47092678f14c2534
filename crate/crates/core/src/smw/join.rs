//! Degree checks for (relative) D-joins.

use serde::Serialize;

use crate::chain::{Chain, Grade};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinReport {
    /// J-degree of every lattice vertex, boundary vertices included.
    pub degrees: Vec<usize>,
    pub weight: usize,
    /// Defects of even J-degree.
    pub even_defects: Vec<usize>,
    /// Non-defect, non-boundary vertices of odd J-degree.
    pub odd_others: Vec<usize>,
    /// Parity of |D| matches the total J-degree parity on the boundary.
    pub boundary_parity_ok: bool,
    pub pass: bool,
}

impl JoinReport {
    /// Every vertex whose degree parity is wrong, ascending.
    pub fn violations(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.even_defects.iter().chain(&self.odd_others).copied().collect();
        v.sort_unstable();
        v
    }

    /// Defects whose J-degree is not exactly 1.
    pub fn bad_defects(&self, d: &Chain) -> Vec<usize> {
        d.bits.iter_ones().filter(|&v| self.degrees[v] != 1).collect()
    }
}

pub fn verify_djoin(lat: &Lattice, d: &Chain, j: &Chain) -> Result<JoinReport> {
    lat.check_chain(d)?;
    lat.check_chain(j)?;
    if d.grade != Grade::C0 || j.grade != Grade::C1 {
        return Err(Error::GradeMismatch {
            expected: "c0 defects and a c1 join",
            got: if d.grade != Grade::C0 { d.grade.name() } else { j.grade.name() },
        });
    }
    let mut degrees = vec![0usize; lat.n_vertices_total()];
    for e in j.bits.iter_ones() {
        for v in lat.edge(e).ends {
            degrees[v] += 1;
        }
    }
    let mut even_defects = Vec::new();
    let mut odd_others = Vec::new();
    for v in 0..lat.n_checks() {
        let odd = degrees[v] % 2 == 1;
        match (d.bits.get(v), odd) {
            (true, false) => even_defects.push(v),
            (false, true) => odd_others.push(v),
            _ => {}
        }
    }
    let b_total: usize = lat.boundary_vertices().map(|b| degrees[b]).sum();
    let boundary_parity_ok = b_total % 2 == d.weight() % 2;
    let pass = even_defects.is_empty() && odd_others.is_empty() && boundary_parity_ok;
    Ok(JoinReport {
        degrees,
        weight: j.weight(),
        even_defects,
        odd_others,
        boundary_parity_ok,
        pass,
    })
}
