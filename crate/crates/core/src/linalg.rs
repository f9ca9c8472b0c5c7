//! Sparse exact Gaussian elimination over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::Rational;

pub type SparseRow = BTreeMap<usize, Rational>;

/// Row echelon form built incrementally; rows are keyed by their pivot column.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

fn axpy(row: &mut SparseRow, factor: &Rational, other: &SparseRow) {
    for (c, v) in other {
        let e = row.entry(*c).or_insert_with(Rational::zero);
        *e -= factor * v;
        if e.is_zero() {
            row.remove(c);
        }
    }
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce a row against the current pivots. Returns the remainder.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        loop {
            let Some((&lead, _)) = row
                .iter()
                .find(|(c, _)| self.pivots.contains_key(c))
            else {
                return row;
            };
            let f = row[&lead].clone();
            axpy(&mut row, &f, &self.pivots[&lead]);
        }
    }

    /// Insert a row; returns `true` if it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((&lead, lv)) = row.iter().next() else {
            return false;
        };
        let inv = Rational::one() / lv;
        let row: SparseRow = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        self.pivots.insert(lead, row);
        true
    }

    /// Back substitution; free variables set by `free`.
    fn back_substitute(&self, rhs_col: Option<usize>, free: &BTreeMap<usize, Rational>) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.ncols];
        for (c, v) in free {
            x[*c] = v.clone();
        }
        for (&pc, row) in self.pivots.iter().rev() {
            let mut acc = Rational::zero();
            for (c, v) in row.range(pc + 1..) {
                if Some(*c) == rhs_col {
                    acc += v;
                } else if *c < self.ncols {
                    acc -= v * &x[*c];
                }
            }
            x[pc] = acc;
        }
        x
    }
}

/// Solve `A x = b` for `A` given by rows; `None` if inconsistent. Free
/// variables are set to zero.
pub fn solve(ncols: usize, rows: &[SparseRow], rhs: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(rows.len(), rhs.len());
    let mut ech = Echelon::new(ncols);
    for (row, b) in rows.iter().zip(rhs) {
        let mut r = row.clone();
        if !b.is_zero() {
            r.insert(ncols, b.clone());
        }
        let r = ech.reduce(r);
        if let Some((&lead, _)) = r.iter().next() {
            if lead == ncols {
                return None;
            }
            ech.insert(r);
        }
    }
    Some(ech.back_substitute(Some(ncols), &BTreeMap::new()))
}

/// Basis of the null space of `A`.
pub fn nullspace(ncols: usize, rows: &[SparseRow]) -> Vec<Vec<Rational>> {
    let mut ech = Echelon::new(ncols);
    for row in rows {
        ech.insert(row.clone());
    }
    let mut out = Vec::new();
    for f in 0..ncols {
        if ech.pivots.contains_key(&f) {
            continue;
        }
        let mut free = BTreeMap::new();
        free.insert(f, Rational::one());
        out.push(ech.back_substitute(None, &free));
    }
    out
}

/// Rank of the matrix with the given rows.
pub fn rank(ncols: usize, rows: &[SparseRow]) -> usize {
    let mut ech = Echelon::new(ncols);
    for row in rows {
        ech.insert(row.clone());
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|(c, v)| (*c, int(*v))).collect()
    }

    fn mul(rows: &[SparseRow], x: &[Rational]) -> Vec<Rational> {
        rows.iter()
            .map(|r| r.iter().map(|(c, v)| v * &x[*c]).sum())
            .collect()
    }

    #[test]
    fn solves_consistent_system() {
        let rows = vec![row(&[(0, 1), (1, 1)]), row(&[(0, 1), (1, -1)]), row(&[(0, 2)])];
        let b = vec![int(3), int(1), int(4)];
        let x = solve(2, &rows, &b).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
    }

    #[test]
    fn detects_inconsistency() {
        let rows = vec![row(&[(0, 1), (1, 1)]), row(&[(0, 2), (1, 2)])];
        assert!(solve(2, &rows, &[int(1), int(3)]).is_none());
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let rows = vec![row(&[(0, 1), (1, 2), (3, 1)]), row(&[(1, 1), (2, -1)])];
        let ns = nullspace(4, &rows);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mul(&rows, v).iter().all(Zero::is_zero));
        }
        assert_eq!(rank(4, &rows), 2);
    }
}
