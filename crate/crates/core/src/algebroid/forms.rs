//! Vector-bundle-valued differential forms on the coordinate chart.
//!
//! A basis q-form `dx^{a_1} ∧ ... ∧ dx^{a_q}` (increasing indices) is encoded
//! as a bitmask with bit `a` set for each `a_i`. Components are keyed by
//! `(value index, mask)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::{Poly, Rational};

pub type Mask = u32;

/// Maximum chart dimension supported by the mask encoding.
pub const MAX_CHART_DIM: usize = 24;

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &a| m | (1 << a))
}

pub fn mask_indices(m: Mask) -> Vec<usize> {
    (0..32).filter(|a| m & (1 << a) != 0).collect()
}

/// All masks of `q` bits among the first `n`, ascending.
pub fn masks_of_degree(n: usize, q: usize) -> Vec<Mask> {
    if q > n {
        return Vec::new();
    }
    let mut out: Vec<Mask> = (0..(1u32 << n))
        .filter(|m| m.count_ones() as usize == q)
        .collect();
    out.sort_by_key(|m| mask_indices(*m));
    out
}

/// Sign of `dx^{m1} ∧ dx^{m2}` relative to the sorted basis element, or
/// `None` if the masks overlap.
pub fn wedge_sign(m1: Mask, m2: Mask) -> Option<bool> {
    if m1 & m2 != 0 {
        return None;
    }
    let mut swaps = 0u32;
    for j in mask_indices(m2) {
        swaps += (m1 >> (j + 1)).count_ones();
    }
    Some(swaps % 2 == 1)
}

/// A form of fixed degree with values in a trivial bundle of rank `rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VForm {
    nvars: usize,
    rank: usize,
    degree: usize,
    comps: BTreeMap<(usize, Mask), Poly>,
}

impl VForm {
    pub fn zero(nvars: usize, rank: usize, degree: usize) -> Self {
        assert!(nvars <= MAX_CHART_DIM, "chart dimension too large");
        VForm {
            nvars,
            rank,
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// The value `ξ` (a section of the bundle) seen as a 0-form.
    pub fn from_section(nvars: usize, values: &[Poly]) -> Self {
        let mut out = Self::zero(nvars, values.len(), 0);
        for (b, p) in values.iter().enumerate() {
            out.add_component(b, 0, p);
        }
        out
    }

    /// Scalar-valued form `f dx^I`.
    pub fn scalar(f: Poly, indices: &[usize]) -> Self {
        let n = f.nvars();
        let mut out = Self::zero(n, 1, indices.len());
        let mut sorted = indices.to_vec();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != indices.len() {
            return out;
        }
        let mut perm_sign = false;
        for i in 0..indices.len() {
            for j in i + 1..indices.len() {
                if indices[i] > indices[j] {
                    perm_sign = !perm_sign;
                }
            }
        }
        let f = if perm_sign { -f } else { f };
        out.add_component(0, mask_of(&sorted), &f);
        out
    }

    /// `f dx^I ⊗ u_b` in a bundle of rank `rank`.
    pub fn basic(f: Poly, indices: &[usize], rank: usize, b: usize) -> Self {
        Self::scalar(f, indices).tensor_basis(rank, b)
    }

    /// The differential of a function.
    pub fn exact(f: &Poly) -> Self {
        let n = f.nvars();
        let mut out = Self::zero(n, 1, 1);
        for a in 0..n {
            out.add_component(0, 1 << a, &f.d(a));
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&(usize, Mask), &Poly)> {
        self.comps.iter()
    }

    pub fn get(&self, b: usize, mask: Mask) -> Poly {
        self.comps
            .get(&(b, mask))
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.nvars))
    }

    pub fn add_component(&mut self, b: usize, mask: Mask, p: &Poly) {
        debug_assert!(b < self.rank);
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        if p.is_zero() {
            return;
        }
        let key = (b, mask);
        match self.comps.get_mut(&key) {
            Some(e) => {
                e.add_assign_ref(p);
                if e.is_zero() {
                    self.comps.remove(&key);
                }
            }
            None => {
                self.comps.insert(key, p.clone());
            }
        }
    }

    fn add_component_signed(&mut self, b: usize, mask: Mask, p: Poly, neg: bool) {
        if neg {
            self.add_component(b, mask, &-p);
        } else {
            self.add_component(b, mask, &p);
        }
    }

    fn check_same(&self, other: &VForm) -> Result<()> {
        if self.nvars != other.nvars || self.rank != other.rank || self.degree != other.degree {
            return Err(Error::structural(format!(
                "form shape mismatch: (n={}, rank={}, deg={}) vs (n={}, rank={}, deg={})",
                self.nvars, self.rank, self.degree, other.nvars, other.rank, other.degree
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &VForm) -> Result<VForm> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &VForm) {
        self.check_same(other).expect("form shape mismatch");
        for ((b, m), p) in &other.comps {
            self.add_component(*b, *m, p);
        }
    }

    pub fn sub_assign(&mut self, other: &VForm) {
        self.check_same(other).expect("form shape mismatch");
        for ((b, m), p) in &other.comps {
            self.add_component(*b, *m, &-p);
        }
    }

    pub fn add(&self, other: &VForm) -> VForm {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &VForm) -> VForm {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn neg(&self) -> VForm {
        self.scale(&-Rational::from_integer(1.into()))
    }

    pub fn scale(&self, c: &Rational) -> VForm {
        let mut out = VForm::zero(self.nvars, self.rank, self.degree);
        for ((b, m), p) in &self.comps {
            out.add_component(*b, *m, &p.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, f: &Poly) -> VForm {
        let mut out = VForm::zero(self.nvars, self.rank, self.degree);
        if f.is_zero() {
            return out;
        }
        for ((b, m), p) in &self.comps {
            out.add_component(*b, *m, &(f * p));
        }
        out
    }

    /// Reinterpret a scalar form as `self ⊗ u_b` in a bundle of rank `rank`.
    pub fn tensor_basis(&self, rank: usize, b: usize) -> VForm {
        assert_eq!(self.rank, 1, "tensor_basis needs a scalar form");
        let mut out = VForm::zero(self.nvars, rank, self.degree);
        for ((_, m), p) in &self.comps {
            out.add_component(b, *m, p);
        }
        out
    }

    /// Scalar form `ω ⊗ ξ` for a section ξ of a rank-`values.len()` bundle.
    pub fn tensor_section(&self, values: &[Poly]) -> VForm {
        assert_eq!(self.rank, 1, "tensor_section needs a scalar form");
        let mut out = VForm::zero(self.nvars, values.len(), self.degree);
        for ((_, m), p) in &self.comps {
            for (b, v) in values.iter().enumerate() {
                if !v.is_zero() {
                    out.add_component(b, *m, &(p * v));
                }
            }
        }
        out
    }

    /// The scalar form given by one value component.
    pub fn value_component(&self, b: usize) -> VForm {
        let mut out = VForm::zero(self.nvars, 1, self.degree);
        for ((c, m), p) in &self.comps {
            if *c == b {
                out.add_component(0, *m, p);
            }
        }
        out
    }

    /// Degree-0 form as its section of values.
    pub fn to_section(&self) -> Vec<Poly> {
        assert_eq!(self.degree, 0, "to_section needs a 0-form");
        (0..self.rank).map(|b| self.get(b, 0)).collect()
    }

    /// General wedge `ω ∧ η` with value pairing `pair(b, c) -> [(d, coeff)]`.
    pub fn wedge_with<F>(&self, other: &VForm, rank: usize, pair: F) -> VForm
    where
        F: Fn(usize, usize) -> Vec<(usize, Rational)>,
    {
        assert_eq!(self.nvars, other.nvars, "form chart mismatch");
        let deg = self.degree + other.degree;
        let mut out = VForm::zero(self.nvars, rank, deg);
        if deg > self.nvars {
            return out;
        }
        for ((b, m1), p1) in &self.comps {
            for ((c, m2), p2) in &other.comps {
                let Some(neg) = wedge_sign(*m1, *m2) else { continue };
                let targets = pair(*b, *c);
                if targets.is_empty() {
                    continue;
                }
                let prod = p1 * p2;
                for (d, k) in targets {
                    out.add_component_signed(d, m1 | m2, prod.scale(&k), neg);
                }
            }
        }
        out
    }

    /// `σ ∧ ω` for a scalar form σ.
    pub fn wedge_scalar_left(sigma: &VForm, omega: &VForm) -> VForm {
        assert_eq!(sigma.rank, 1, "left factor must be scalar");
        let one = Rational::from_integer(1.into());
        omega_left(sigma, omega, &one)
    }

    /// `ω ∧ σ` for a scalar form σ.
    pub fn wedge_scalar_right(&self, sigma: &VForm) -> VForm {
        assert_eq!(sigma.rank, 1, "right factor must be scalar");
        let one = Rational::from_integer(1.into());
        self.wedge_with(sigma, self.rank, |b, _| vec![(b, one.clone())])
    }

    /// Exterior derivative acting componentwise (trivial coefficients).
    pub fn d(&self) -> VForm {
        let mut out = VForm::zero(self.nvars, self.rank, self.degree + 1);
        if self.degree + 1 > self.nvars {
            return out;
        }
        for ((b, m), p) in &self.comps {
            for a in 0..self.nvars {
                if m & (1 << a) != 0 {
                    continue;
                }
                let da = p.d(a);
                if da.is_zero() {
                    continue;
                }
                let neg = (m & ((1 << a) - 1)).count_ones() % 2 == 1;
                out.add_component_signed(*b, m | (1 << a), da, neg);
            }
        }
        out
    }

    /// Interior product with a vector field.
    pub fn interior(&self, x: &VField) -> VForm {
        assert_eq!(x.len(), self.nvars, "vector field dimension mismatch");
        if self.degree == 0 {
            return VForm::zero(self.nvars, self.rank, 0);
        }
        let mut out = VForm::zero(self.nvars, self.rank, self.degree - 1);
        for ((b, m), p) in &self.comps {
            for (t, a) in mask_indices(*m).into_iter().enumerate() {
                let xa = &x.0[a];
                if xa.is_zero() {
                    continue;
                }
                out.add_component_signed(*b, m & !(1 << a), xa * p, t % 2 == 1);
            }
        }
        out
    }

    /// Lie derivative along a vector field (trivial coefficients), by Cartan's formula.
    pub fn lie(&self, x: &VField) -> VForm {
        let a = self.interior(x).d();
        if self.degree == 0 {
            return self.d().interior(x);
        }
        let mut out = a;
        out.add_assign(&self.d().interior(x));
        out
    }

    /// Apply a polynomial matrix to the values: `(M ω)^b = M^b_c ω^c`.
    pub fn apply_matrix(&self, m: &PolyMatrix) -> VForm {
        assert_eq!(m.cols, self.rank, "matrix/form rank mismatch");
        let mut out = VForm::zero(self.nvars, m.rows, self.degree);
        for ((c, mask), p) in &self.comps {
            for b in 0..m.rows {
                let e = m.get(b, *c);
                if !e.is_zero() {
                    out.add_component(b, *mask, &(e * p));
                }
            }
        }
        out
    }

    /// Evaluate the scalar coefficient form on an ordered list of coordinate
    /// vector fields `∂_{a_1}, ..., ∂_{a_q}`.
    pub fn eval_coord(&self, b: usize, dirs: &[usize]) -> Poly {
        assert_eq!(dirs.len(), self.degree);
        let mut sorted = dirs.to_vec();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Poly::zero(self.nvars);
        }
        let mut neg = false;
        for i in 0..dirs.len() {
            for j in i + 1..dirs.len() {
                if dirs[i] > dirs[j] {
                    neg = !neg;
                }
            }
        }
        let p = self.get(b, mask_of(&sorted));
        if neg {
            -p
        } else {
            p
        }
    }

    /// Map values through a linear map on value indices.
    pub fn map_values<F>(&self, rank: usize, f: F) -> VForm
    where
        F: Fn(usize) -> Vec<(usize, Rational)>,
    {
        let mut out = VForm::zero(self.nvars, rank, self.degree);
        for ((b, m), p) in &self.comps {
            for (d, k) in f(*b) {
                out.add_component(d, *m, &p.scale(&k));
            }
        }
        out
    }

    pub fn max_poly_degree(&self) -> u32 {
        self.comps
            .values()
            .filter_map(Poly::total_degree)
            .max()
            .unwrap_or(0)
    }
}

fn omega_left(sigma: &VForm, omega: &VForm, one: &Rational) -> VForm {
    sigma.wedge_with(omega, omega.rank, |_, c| vec![(c, one.clone())])
}

/// A vector field `X = X^a ∂_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VField(pub Vec<Poly>);

impl VField {
    pub fn zero(n: usize) -> Self {
        VField((0..n).map(|_| Poly::zero(n)).collect())
    }

    pub fn coordinate(n: usize, a: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[a] = Poly::one(n);
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }

    /// `X(f)`
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(f.nvars());
        for (a, xa) in self.0.iter().enumerate() {
            if !xa.is_zero() {
                out.add_assign_ref(&(xa * &f.d(a)));
            }
        }
        out
    }

    /// Vector-field commutator `[X, Y]`.
    pub fn bracket(&self, other: &VField) -> VField {
        assert_eq!(self.len(), other.len(), "vector field dimension mismatch");
        VField(
            (0..self.len())
                .map(|a| &self.apply(&other.0[a]) - &other.apply(&self.0[a]))
                .collect(),
        )
    }

    pub fn add(&self, other: &VField) -> VField {
        VField(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale_poly(&self, f: &Poly) -> VField {
        VField(self.0.iter().map(|a| a * f).collect())
    }
}

/// Dense matrix of polynomials, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    nvars: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(nvars: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            nvars,
            entries: vec![Poly::zero(nvars); rows * cols],
        }
    }

    pub fn identity(nvars: usize, m: usize) -> Self {
        let mut out = Self::zero(nvars, m, m);
        for i in 0..m {
            out.set(i, i, Poly::one(nvars));
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.entries[r * self.cols + c] = p;
    }

    pub fn add_to(&mut self, r: usize, c: usize, p: &Poly) {
        self.entries[r * self.cols + c].add_assign_ref(p);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = PolyMatrix::zero(self.nvars, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            e.add_assign_ref(o);
        }
        out
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            e.sub_assign_ref(o);
        }
        out
    }

    pub fn scale_poly(&self, f: &Poly) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self.entries.iter().map(|e| e * f).collect(),
        }
    }

    pub fn commutator(&self, other: &PolyMatrix) -> PolyMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols, "matrix/vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(self.nvars);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc.add_assign_ref(&(a * x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Row-major flattening, used as the value vector of an End-valued object.
    pub fn flatten(&self) -> Vec<Poly> {
        self.entries.clone()
    }

    pub fn from_flat(nvars: usize, m: usize, v: &[Poly]) -> Self {
        assert_eq!(v.len(), m * m);
        PolyMatrix {
            rows: m,
            cols: m,
            nvars,
            entries: v.to_vec(),
        }
    }
}

/// View an End(V)-valued form (value index `b*m + c`) acting on a V-valued
/// form: `(T ∧ ω)^b = Σ_c T^b_c ∧ ω^c`.
pub fn end_wedge(t: &VForm, omega: &VForm) -> VForm {
    let m = omega.rank();
    assert_eq!(t.rank(), m * m, "End-valued form rank mismatch");
    let one = Rational::from_integer(1.into());
    t.wedge_with(omega, m, |bc, c2| {
        if bc % m == c2 {
            vec![(bc / m, one.clone())]
        } else {
            vec![]
        }
    })
}

/// Contract an End(V)-valued 0-form with a section: `(M ξ)^b`.
pub fn end_apply_form(t: &VForm, omega: &VForm) -> VForm {
    end_wedge(t, omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(s: &str) -> Poly {
        Poly::parse_default(s, 2).unwrap()
    }

    #[test]
    fn d_of_x_dy() {
        let w = VForm::scalar(p2("x1"), &[1]);
        assert_eq!(w.d(), VForm::scalar(p2("1"), &[0, 1]));
    }

    #[test]
    fn interior_of_area_form() {
        let w = VForm::scalar(p2("x1"), &[0, 1]);
        let dx = VField::coordinate(2, 0);
        assert_eq!(w.interior(&dx), VForm::scalar(p2("x1"), &[1]));
    }

    #[test]
    fn lie_of_area_form() {
        let w = VForm::scalar(p2("x1"), &[0, 1]);
        let dx = VField::coordinate(2, 0);
        assert_eq!(w.lie(&dx), VForm::scalar(p2("1"), &[0, 1]));
    }

    #[test]
    fn permuted_indices_carry_sign() {
        assert_eq!(
            VForm::scalar(p2("1"), &[1, 0]),
            VForm::scalar(p2("-1"), &[0, 1])
        );
        assert!(VForm::scalar(p2("1"), &[1, 1]).is_zero());
    }

    #[test]
    fn wedge_anticommutes_on_one_forms() {
        let a = VForm::scalar(p2("x2"), &[0]);
        let b = VForm::scalar(p2("x1"), &[1]);
        let ab = VForm::wedge_scalar_left(&a, &b);
        let ba = VForm::wedge_scalar_left(&b, &a);
        assert_eq!(ab, ba.neg());
    }

    #[test]
    fn degree_overflow_gives_zero() {
        let a = VForm::scalar(p2("1"), &[0, 1]);
        let b = VForm::scalar(p2("1"), &[0]);
        let w = VForm::wedge_scalar_left(&a, &b);
        assert!(w.is_zero());
        assert_eq!(w.degree(), 3);
        assert!(a.d().is_zero());
    }
}
