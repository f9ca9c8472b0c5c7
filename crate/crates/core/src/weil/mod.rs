//! Weil cochains `W^{p,q}(A;V)` stored by their values on frame tuples.

mod ops;
pub mod solve;

use std::collections::BTreeMap;

use crate::algebroid::{AlgebroidPresentation, Mask, Section, VForm};
use crate::connections::multisets;
use crate::error::{Error, Result};
use crate::poly::{Poly, Rational};

pub use ops::{
    check_im, delta, dnabla_cochain, invariance_cochain, wedge_ttheta, is_horizontal,
};

/// Table key: increasing antisymmetric indices `I` and sorted symmetric indices `J`.
pub type Slot = (Vec<usize>, Vec<usize>);

/// `c = (c_0, …, c_p) ∈ W^{p,q}(A;V)` on a chart of dimension `n`, over an
/// algebroid of rank `r`, with values in a trivial bundle of rank `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeilCochain {
    n: usize,
    r: usize,
    m: usize,
    p: usize,
    q: usize,
    comps: Vec<BTreeMap<Slot, VForm>>,
}

/// Strictly increasing tuples of length `len` over `0..r`.
pub fn increasing_tuples(r: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(r: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(r, len, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(r, len, 0, &mut cur, &mut out);
    out
}

/// Sort a tuple, returning the permutation parity, or `None` if an index repeats.
pub fn sort_antisym(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut neg = false;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                neg = !neg;
            }
        }
    }
    let mut v = idx.to_vec();
    v.sort_unstable();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, neg))
}

impl WeilCochain {
    pub fn zero(n: usize, r: usize, m: usize, p: usize, q: usize) -> Self {
        WeilCochain {
            n,
            r,
            m,
            p,
            q,
            comps: vec![BTreeMap::new(); p + 1],
        }
    }

    pub fn zero_like(alg: &AlgebroidPresentation, m: usize, p: usize, q: usize) -> Self {
        Self::zero(alg.chart_dim(), alg.rank(), m, p, q)
    }

    /// A `V`-valued q-form as a level-0 cochain.
    pub fn from_form(r: usize, w: &VForm) -> Self {
        let mut c = Self::zero(w.nvars(), r, w.rank(), 0, w.degree());
        if c.has_component(0) {
            c.set(0, &[], &[], w.clone());
        }
        c
    }

    pub fn chart_dim(&self) -> usize {
        self.n
    }

    pub fn alg_rank(&self) -> usize {
        self.r
    }

    pub fn value_rank(&self) -> usize {
        self.m
    }

    pub fn level(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.q
    }

    /// Whether `c_k` is a stored component (`0 ≤ q−k ≤ n`, `k ≤ p`).
    pub fn has_component(&self, k: usize) -> bool {
        k <= self.p && k <= self.q && self.q - k <= self.n
    }

    pub fn valid_components(&self) -> Vec<usize> {
        (0..=self.p).filter(|&k| self.has_component(k)).collect()
    }

    /// All table keys of `c_k`.
    pub fn slots(&self, k: usize) -> Vec<Slot> {
        let mut out = Vec::new();
        for i in increasing_tuples(self.r, self.p - k) {
            for j in multisets(self.r, k) {
                out.push((i.clone(), j));
            }
        }
        out
    }

    pub fn entries(&self, k: usize) -> impl Iterator<Item = (&Slot, &VForm)> {
        self.comps[k].iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(BTreeMap::is_empty)
    }

    pub fn same_shape(&self, other: &WeilCochain) -> bool {
        (self.n, self.r, self.m, self.p, self.q) == (other.n, other.r, other.m, other.p, other.q)
    }

    fn check_same(&self, other: &WeilCochain) -> Result<()> {
        if !self.same_shape(other) {
            return Err(Error::structural(format!(
                "cochain shape mismatch: W^({},{}) rank {} vs W^({},{}) rank {}",
                self.p, self.q, self.m, other.p, other.q, other.m
            )));
        }
        Ok(())
    }

    fn zero_form(&self, k: usize) -> VForm {
        VForm::zero(self.n, self.m, self.q.saturating_sub(k))
    }

    /// Set `c_k(e_I ‖ e_J)`. `I` may be in any order (sign applied), `J` is sorted.
    pub fn set(&mut self, k: usize, anti: &[usize], sym: &[usize], w: VForm) {
        assert!(self.has_component(k), "component c_{k} is not stored");
        assert_eq!(anti.len(), self.p - k);
        assert_eq!(sym.len(), k);
        assert_eq!(w.rank(), self.m);
        assert_eq!(w.degree(), self.q - k);
        let Some((i, neg)) = sort_antisym(anti) else { return };
        let mut j = sym.to_vec();
        j.sort();
        let w = if neg { w.neg() } else { w };
        if w.is_zero() {
            self.comps[k].remove(&(i, j));
        } else {
            self.comps[k].insert((i, j), w);
        }
    }

    /// Add to `c_k(e_I ‖ e_J)`.
    pub fn add_entry(&mut self, k: usize, anti: &[usize], sym: &[usize], w: &VForm) {
        if w.is_zero() || !self.has_component(k) {
            return;
        }
        let Some((i, neg)) = sort_antisym(anti) else { return };
        let mut j = sym.to_vec();
        j.sort();
        let key = (i, j);
        let w = if neg { w.neg() } else { w.clone() };
        match self.comps[k].get_mut(&key) {
            Some(e) => {
                e.add_assign(&w);
                if e.is_zero() {
                    self.comps[k].remove(&key);
                }
            }
            None => {
                self.comps[k].insert(key, w);
            }
        }
    }

    /// `c_k(e_I ‖ e_J)` on frame sections in any order.
    pub fn get(&self, k: usize, anti: &[usize], sym: &[usize]) -> VForm {
        if !self.has_component(k) {
            return VForm::zero(self.n, self.m, self.q.saturating_sub(k));
        }
        let Some((i, neg)) = sort_antisym(anti) else {
            return self.zero_form(k);
        };
        let mut j = sym.to_vec();
        j.sort();
        match self.comps[k].get(&(i, j)) {
            Some(w) if neg => w.neg(),
            Some(w) => w.clone(),
            None => self.zero_form(k),
        }
    }

    /// Level-0 cochain as its form.
    pub fn as_form(&self) -> VForm {
        assert_eq!(self.p, 0, "as_form needs a level-0 cochain");
        self.get(0, &[], &[])
    }

    /// `c_k(α_1, …, α_{p−k} ‖ β_1, …, β_k)` on arbitrary sections.
    pub fn evaluate(&self, k: usize, antis: &[Section], syms: &[Section]) -> Result<VForm> {
        if k > self.p || antis.len() != self.p - k || syms.len() != k {
            return Err(Error::structural(format!(
                "cochain in W^({},{}) cannot take {} + {} arguments in component {k}",
                self.p,
                self.q,
                antis.len(),
                syms.len()
            )));
        }
        if antis.iter().chain(syms).any(|s| s.rank() != self.r) {
            return Err(Error::structural("argument is not a section of the algebroid"));
        }
        let mut prefix = Vec::with_capacity(antis.len());
        Ok(self.eval_rec(k, &mut prefix, antis, &mut syms.to_vec()))
    }

    fn eval_rec(
        &self,
        k: usize,
        prefix: &mut Vec<usize>,
        rest: &[Section],
        syms: &mut Vec<Section>,
    ) -> VForm {
        if !self.has_component(k) {
            return VForm::zero(self.n, self.m, self.q.saturating_sub(k));
        }
        if rest.is_empty() {
            return self.eval_syms(k, prefix, syms);
        }
        let t = prefix.len();
        let arg = &rest[0];
        let mut out = self.zero_form(k);
        if let Some(l) = arg.as_basis() {
            prefix.push(l);
            let v = self.eval_rec(k, prefix, &rest[1..], syms);
            prefix.pop();
            return v;
        }
        for (l, f) in arg.0.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            prefix.push(l);
            let v = self.eval_rec(k, prefix, &rest[1..], syms);
            prefix.pop();
            if !v.is_zero() {
                out.add_assign(&v.mul_poly(f));
            }
            if f.as_constant().is_some() || !self.has_component(k + 1) {
                continue;
            }
            // (−1)^t df ∧ c_{k+1}(prefix, rest ‖ e_l, syms)
            syms.push(Section::basis(self.n, self.r, l));
            let inner = self.eval_rec(k + 1, prefix, &rest[1..], syms);
            syms.pop();
            if inner.is_zero() {
                continue;
            }
            let w = VForm::wedge_scalar_left(&VForm::exact(f), &inner);
            if t % 2 == 1 {
                out.sub_assign(&w);
            } else {
                out.add_assign(&w);
            }
        }
        out
    }

    fn eval_syms(&self, k: usize, anti: &[usize], syms: &[Section]) -> VForm {
        let mut out = self.zero_form(k);
        let mut idx = vec![0usize; syms.len()];
        self.eval_syms_rec(k, anti, syms, 0, &mut idx, Poly::one(self.n), &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn eval_syms_rec(
        &self,
        k: usize,
        anti: &[usize],
        syms: &[Section],
        pos: usize,
        idx: &mut Vec<usize>,
        coef: Poly,
        out: &mut VForm,
    ) {
        if pos == syms.len() {
            let w = self.get(k, anti, idx);
            if !w.is_zero() {
                out.add_assign(&w.mul_poly(&coef));
            }
            return;
        }
        for (l, f) in syms[pos].0.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            idx[pos] = l;
            self.eval_syms_rec(k, anti, syms, pos + 1, idx, &coef * f, out);
        }
    }

    pub fn checked_add(&self, other: &WeilCochain) -> Result<WeilCochain> {
        self.check_same(other)?;
        let mut out = self.clone();
        for k in 0..=self.p {
            for ((i, j), w) in &other.comps[k] {
                out.add_entry(k, i, j, w);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &WeilCochain) -> WeilCochain {
        self.checked_add(other).expect("cochain shape mismatch")
    }

    pub fn sub(&self, other: &WeilCochain) -> WeilCochain {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> WeilCochain {
        self.scale(&-Rational::from_integer(1.into()))
    }

    pub fn scale(&self, c: &Rational) -> WeilCochain {
        let mut out = Self::zero(self.n, self.r, self.m, self.p, self.q);
        for k in 0..=self.p {
            for ((i, j), w) in &self.comps[k] {
                out.add_entry(k, i, j, &w.scale(c));
            }
        }
        out
    }

    /// Apply a constant linear map to the values.
    pub fn map_values<F>(&self, rank: usize, f: F) -> WeilCochain
    where
        F: Fn(usize) -> Vec<(usize, Rational)> + Copy,
    {
        let mut out = Self::zero(self.n, self.r, rank, self.p, self.q);
        for k in 0..=self.p {
            for ((i, j), w) in &self.comps[k] {
                out.add_entry(k, i, j, &w.map_values(rank, f));
            }
        }
        out
    }

    /// Total number of nonzero polynomial coefficients over all tables.
    pub fn size(&self) -> usize {
        self.comps
            .iter()
            .flat_map(|c| c.values())
            .flat_map(|w| w.components().map(|(_, p)| p.num_terms()))
            .sum()
    }

    pub fn max_poly_degree(&self) -> u32 {
        self.comps
            .iter()
            .flat_map(|c| c.values())
            .map(VForm::max_poly_degree)
            .max()
            .unwrap_or(0)
    }

    /// Flat coordinates `(k, I, J, b, mask) → poly` for serialization and solving.
    pub fn flat_entries(&self) -> Vec<((usize, Vec<usize>, Vec<usize>, usize, Mask), Poly)> {
        let mut out = Vec::new();
        for k in 0..=self.p {
            for ((i, j), w) in &self.comps[k] {
                for ((b, mask), p) in w.components() {
                    out.push(((k, i.clone(), j.clone(), *b, *mask), p.clone()));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisym_sort() {
        assert_eq!(sort_antisym(&[2, 0, 1]), Some((vec![0, 1, 2], false)));
        assert_eq!(sort_antisym(&[1, 0]), Some((vec![0, 1], true)));
        assert_eq!(sort_antisym(&[1, 1]), None);
        assert_eq!(sort_antisym(&[]), Some((vec![], false)));
    }

    #[test]
    fn evaluate_on_basis_is_table_lookup() {
        let n = 2;
        let mut c = WeilCochain::zero(n, 2, 1, 1, 1);
        let w = VForm::scalar(Poly::var(n, 0), &[1]);
        c.set(0, &[1], &[], w.clone());
        let e1 = Section::basis(n, 2, 1);
        assert_eq!(c.evaluate(0, &[e1], &[]).unwrap(), w);
    }

    #[test]
    fn arity_mismatch_is_structural() {
        let c = WeilCochain::zero(2, 2, 1, 1, 1);
        assert!(matches!(c.evaluate(0, &[], &[]), Err(Error::Structural(_))));
    }

    #[test]
    fn leibniz_on_first_slot() {
        // c_0(x2 e) = x2 c_0(e) + dx2 ⊗ c_1(e)
        let n = 2;
        let mut c = WeilCochain::zero(n, 1, 1, 1, 1);
        c.set(1, &[], &[0], VForm::from_section(n, &[Poly::one(n)]));
        let arg = Section(vec![Poly::var(n, 1)]);
        assert_eq!(
            c.evaluate(0, &[arg], &[]).unwrap(),
            VForm::scalar(Poly::one(n), &[1])
        );
    }
}
