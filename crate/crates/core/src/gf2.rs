//! Linear algebra over GF(2): row reduction, kernels and small linear codes.

use crate::bits::Bits;

/// Row space kept in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSpace {
    n: usize,
    rows: Vec<Bits>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(n: usize) -> Self {
        RowSpace {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows<'a>(n: usize, rows: impl IntoIterator<Item = &'a Bits>) -> Self {
        let mut s = RowSpace::new(n);
        for r in rows {
            s.insert(r.clone());
        }
        s
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Bits] {
        &self.rows
    }

    /// Reduce `v` against the basis; zero iff `v` is in the span.
    pub fn reduce(&self, v: &Bits) -> Bits {
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_with(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &Bits) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the space; returns false if it was already spanned.
    pub fn insert(&mut self, v: Bits) -> bool {
        assert_eq!(v.len(), self.n);
        let v = self.reduce(&v);
        let Some(p) = v.first_one() else {
            return false;
        };
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_with(&v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    /// Basis of the orthogonal complement {x : <r, x> = 0 for every row r}.
    pub fn orthogonal(&self) -> RowSpace {
        let mut is_pivot = vec![false; self.n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut out = RowSpace::new(self.n);
        for f in (0..self.n).filter(|&c| !is_pivot[c]) {
            let mut x = Bits::zeros(self.n);
            x.set(f, true);
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if row.get(f) {
                    x.set(p, true);
                }
            }
            out.insert(x);
        }
        out
    }

    /// Every element of the span, in Gray-code order starting from zero.
    pub fn elements(&self) -> impl Iterator<Item = Bits> + '_ {
        let k = self.rows.len();
        assert!(k < 40, "span too large to enumerate");
        let mut cur = Bits::zeros(self.n);
        let mut i: u64 = 0;
        std::iter::from_fn(move || {
            if i >= 1u64 << k {
                return None;
            }
            if i > 0 {
                let flip = i.trailing_zeros() as usize;
                cur.xor_with(&self.rows[flip]);
            }
            i += 1;
            Some(cur.clone())
        })
    }
}

/// A binary linear code of length n given by a generator basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    space: RowSpace,
}

impl LinearCode {
    pub fn from_generators<'a>(n: usize, gens: impl IntoIterator<Item = &'a Bits>) -> Self {
        LinearCode {
            space: RowSpace::from_rows(n, gens),
        }
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.space.rank()
    }

    pub fn generators(&self) -> &[Bits] {
        self.space.rows()
    }

    pub fn contains(&self, v: &Bits) -> bool {
        self.space.contains(v)
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode {
            space: self.space.orthogonal(),
        }
    }

    pub fn codewords(&self) -> impl Iterator<Item = Bits> + '_ {
        self.space.elements()
    }

    /// Canonical coset representative of `v + C`.
    pub fn coset_key(&self, v: &Bits) -> Bits {
        self.space.reduce(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetition_code_dual_is_even_weight() {
        let all = Bits::from_indices(4, 0..4);
        let c = LinearCode::from_generators(4, [&all]);
        let d = c.dual();
        assert_eq!(d.dim(), 3);
        assert!(d.codewords().all(|w| w.count_ones() % 2 == 0));
        assert_eq!(d.codewords().count(), 8);
    }

    #[test]
    fn insert_reports_dependence() {
        let mut s = RowSpace::new(3);
        assert!(s.insert(Bits::from_indices(3, [0, 1])));
        assert!(s.insert(Bits::from_indices(3, [1, 2])));
        assert!(!s.insert(Bits::from_indices(3, [0, 2])));
        assert_eq!(s.rank(), 2);
    }
}
