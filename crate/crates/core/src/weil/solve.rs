//! Bounded-degree linear algebra on cochain spaces.
//!
//! The unknown cochain is written as a rational combination of "elementary"
//! cochains: a single table entry holding a single monomial. Every linear
//! operator on cochains then becomes a sparse matrix.

use std::collections::HashMap;

use num_traits::Zero;

use crate::algebroid::forms::masks_of_degree;
use crate::algebroid::{AlgebroidPresentation, Mask, VForm};
use crate::connections::ARep;
use crate::error::{Error, Result};
use crate::linalg::{self, SparseRow};
use crate::poly::{Monomial, Poly, Rational};

use super::{delta, WeilCochain};

type EntryKey = (usize, Vec<usize>, Vec<usize>, usize, Mask, Monomial);

/// A finite family of elementary cochains spanning a bounded-degree subspace
/// of `W^{p,q}(A;V)`.
#[derive(Debug, Clone)]
pub struct CochainSpace {
    n: usize,
    r: usize,
    m: usize,
    p: usize,
    q: usize,
    units: Vec<EntryKey>,
}

impl CochainSpace {
    /// All entries with coefficients of total degree `≤ bound`. If `ideal`
    /// is given, correction-term entries with a symmetric slot in the ideal
    /// are left out (horizontal cochains).
    pub fn new(
        alg: &AlgebroidPresentation,
        m: usize,
        p: usize,
        q: usize,
        bound: u32,
        ideal: Option<&[usize]>,
    ) -> Self {
        let n = alg.chart_dim();
        let r = alg.rank();
        let shape = WeilCochain::zero(n, r, m, p, q);
        let monos = Monomial::up_to_degree(n, bound);
        let mut units = Vec::new();
        for k in shape.valid_components() {
            for (i, j) in shape.slots(k) {
                if k > 0 {
                    if let Some(id) = ideal {
                        if j.iter().any(|x| id.contains(x)) {
                            continue;
                        }
                    }
                }
                for b in 0..m {
                    for mask in masks_of_degree(n, q - k) {
                        for mono in &monos {
                            units.push((k, i.clone(), j.clone(), b, mask, mono.clone()));
                        }
                    }
                }
            }
        }
        CochainSpace {
            n,
            r,
            m,
            p,
            q,
            units,
        }
    }

    pub fn dim(&self) -> usize {
        self.units.len()
    }

    pub fn unit(&self, t: usize) -> WeilCochain {
        let (k, i, j, b, mask, mono) = &self.units[t];
        let mut c = WeilCochain::zero(self.n, self.r, self.m, self.p, self.q);
        let mut w = VForm::zero(self.n, self.m, self.q - k);
        w.add_component(*b, *mask, &Poly::monomial(mono.clone(), Rational::from_integer(1.into())));
        c.set(*k, i, j, w);
        c
    }

    pub fn combine(&self, x: &[Rational]) -> WeilCochain {
        let mut c = WeilCochain::zero(self.n, self.r, self.m, self.p, self.q);
        for (t, v) in x.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let (k, i, j, b, mask, mono) = &self.units[t];
            let mut w = VForm::zero(self.n, self.m, self.q - k);
            w.add_component(*b, *mask, &Poly::monomial(mono.clone(), v.clone()));
            c.add_entry(*k, i, j, &w);
        }
        c
    }
}

#[derive(Default)]
struct RowIndex {
    map: HashMap<EntryKey, usize>,
}

impl RowIndex {
    fn row(&mut self, key: EntryKey) -> usize {
        let next = self.map.len();
        *self.map.entry(key).or_insert(next)
    }
}

fn flatten(c: &WeilCochain) -> Vec<(EntryKey, Rational)> {
    let mut out = Vec::new();
    for ((k, i, j, b, mask), p) in c.flat_entries() {
        for (mono, v) in p.terms() {
            out.push(((k, i.clone(), j.clone(), b, mask, mono.clone()), v.clone()));
        }
    }
    out
}

/// Matrix of a linear map on the space, as rows keyed by output entries.
fn operator_rows<F>(space: &CochainSpace, op: F, index: &mut RowIndex) -> Result<Vec<SparseRow>>
where
    F: Fn(&WeilCochain) -> Result<WeilCochain>,
{
    let mut rows: Vec<SparseRow> = Vec::new();
    for t in 0..space.dim() {
        let image = op(&space.unit(t))?;
        for (key, v) in flatten(&image) {
            let r = index.row(key);
            if r >= rows.len() {
                rows.resize(r + 1, SparseRow::new());
            }
            rows[r].insert(t, v);
        }
    }
    Ok(rows)
}

/// Find `x` in the space with `op(x) = target`, or `None`.
pub fn solve_linear<F>(space: &CochainSpace, op: F, target: &WeilCochain) -> Result<Option<WeilCochain>>
where
    F: Fn(&WeilCochain) -> Result<WeilCochain>,
{
    let mut index = RowIndex::default();
    let mut rows = operator_rows(space, op, &mut index)?;
    let mut rhs = vec![Rational::zero(); rows.len()];
    for (key, v) in flatten(target) {
        let r = index.row(key);
        if r >= rows.len() {
            rows.resize(r + 1, SparseRow::new());
            rhs.resize(r + 1, Rational::zero());
        }
        rhs[r] = v;
    }
    Ok(linalg::solve(space.dim(), &rows, &rhs).map(|x| space.combine(&x)))
}

/// Basis of `{x in space : op(x) = 0}`.
pub fn kernel<F>(space: &CochainSpace, op: F) -> Result<Vec<WeilCochain>>
where
    F: Fn(&WeilCochain) -> Result<WeilCochain>,
{
    let mut index = RowIndex::default();
    let rows = operator_rows(space, op, &mut index)?;
    Ok(linalg::nullspace(space.dim(), &rows)
        .into_iter()
        .map(|x| space.combine(&x))
        .collect())
}

/// Solve `δb = target` with `b` of coefficient degree `≤ bound`. `ideal`
/// restricts `b` to horizontal cochains.
pub fn solve_coboundary(
    alg: &AlgebroidPresentation,
    rep: &ARep,
    target: &WeilCochain,
    bound: u32,
    ideal: Option<&[usize]>,
) -> Result<Option<WeilCochain>> {
    if target.level() == 0 {
        return Err(Error::contract("a level-0 cochain is never a coboundary target"));
    }
    if !delta(alg, rep, target)?.is_zero() {
        return Err(Error::contract("target is not a δ-cocycle"));
    }
    let space = CochainSpace::new(
        alg,
        target.value_rank(),
        target.level() - 1,
        target.degree(),
        bound,
        ideal,
    );
    solve_linear(&space, |c| delta(alg, rep, c), target)
}

/// Basis of δ-cocycles of coefficient degree `≤ bound`.
pub fn cocycle_basis(
    alg: &AlgebroidPresentation,
    rep: &ARep,
    p: usize,
    q: usize,
    bound: u32,
    ideal: Option<&[usize]>,
) -> Result<Vec<WeilCochain>> {
    let space = CochainSpace::new(alg, rep.rank(), p, q, bound, ideal);
    kernel(&space, |c| delta(alg, rep, c))
}
