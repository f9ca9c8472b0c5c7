//! Linear connections, algebroid representations, and the invariance form.

use std::collections::BTreeMap;

use crate::algebroid::forms::{end_wedge, mask_of};
use crate::algebroid::{AlgebroidPresentation, PolyMatrix, Section, VField, VForm};
use crate::error::{Error, Result};
use crate::poly::{int, Poly};
use crate::report::Report;

/// A connection on a trivial bundle `V` of rank `m`:
/// `∇_{∂_a} u_c = Γ^b_{ac} u_b`, with `Γ_a` stored as the matrix `(Γ_a)^b_c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConnection {
    n: usize,
    m: usize,
    gamma: Vec<PolyMatrix>,
}

impl LinearConnection {
    pub fn new(n: usize, m: usize, gamma: Vec<PolyMatrix>) -> Result<Self> {
        if gamma.len() != n {
            return Err(Error::structural(format!(
                "connection needs {n} Christoffel matrices, got {}",
                gamma.len()
            )));
        }
        for g in &gamma {
            if g.rows != m || g.cols != m || g.nvars() != n {
                return Err(Error::structural("Christoffel matrix has wrong shape"));
            }
        }
        Ok(LinearConnection { n, m, gamma })
    }

    pub fn trivial(n: usize, m: usize) -> Self {
        LinearConnection {
            n,
            m,
            gamma: vec![PolyMatrix::zero(n, m, m); n],
        }
    }

    /// From the connection 1-form `Γ = Γ_a dx^a` stored as an End-valued 1-form.
    pub fn from_form(m: usize, form: &VForm) -> Result<Self> {
        let n = form.nvars();
        if form.rank() != m * m || form.degree() != 1 {
            return Err(Error::structural("connection form must be an End-valued 1-form"));
        }
        let mut gamma = vec![PolyMatrix::zero(n, m, m); n];
        for ((bc, mask), p) in form.components() {
            let a = mask.trailing_zeros() as usize;
            gamma[a].set(bc / m, bc % m, p.clone());
        }
        Ok(LinearConnection { n, m, gamma })
    }

    pub fn chart_dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn gamma(&self, a: usize) -> &PolyMatrix {
        &self.gamma[a]
    }

    /// `Γ^b_{ac}`
    pub fn christoffel(&self, a: usize, b: usize, c: usize) -> &Poly {
        self.gamma[a].get(b, c)
    }

    /// The connection 1-form as an End(V)-valued form.
    pub fn as_form(&self) -> VForm {
        let mut out = VForm::zero(self.n, self.m * self.m, 1);
        for (a, g) in self.gamma.iter().enumerate() {
            for (bc, p) in g.flatten().iter().enumerate() {
                out.add_component(bc, 1 << a, p);
            }
        }
        out
    }

    /// `∇ + γ` for an End(V)-valued 1-form γ.
    pub fn shifted(&self, gamma: &VForm) -> Result<Self> {
        let shift = Self::from_form(self.m, gamma)?;
        Ok(LinearConnection {
            n: self.n,
            m: self.m,
            gamma: self
                .gamma
                .iter()
                .zip(&shift.gamma)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    fn check_form(&self, w: &VForm) -> Result<()> {
        if w.rank() != self.m || w.nvars() != self.n {
            return Err(Error::structural(format!(
                "form with values of rank {} does not match connection rank {}",
                w.rank(),
                self.m
            )));
        }
        Ok(())
    }

    /// `∇_X ξ`
    pub fn covariant(&self, x: &VField, xi: &[Poly]) -> Vec<Poly> {
        let mut out: Vec<Poly> = xi.iter().map(|p| x.apply(p)).collect();
        for (a, xa) in x.0.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, v) in self.gamma[a].apply(xi).into_iter().enumerate() {
                out[b].add_assign_ref(&(xa * &v));
            }
        }
        out
    }

    /// `d^∇ ω = dω + dx^a ∧ Γ_a ω`
    pub fn dnabla(&self, w: &VForm) -> Result<VForm> {
        self.check_form(w)?;
        let mut out = w.d();
        if w.degree() + 1 > self.n {
            return Ok(out);
        }
        for (a, g) in self.gamma.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let gw = w.apply_matrix(g);
            let dxa = VForm::scalar(Poly::one(self.n), &[a]);
            out.add_assign(&VForm::wedge_scalar_left(&dxa, &gw));
        }
        Ok(out)
    }

    /// `L^∇_X = ι_X d^∇ + d^∇ ι_X`
    pub fn lie(&self, x: &VField, w: &VForm) -> Result<VForm> {
        let mut out = self.dnabla(w)?.interior(x);
        if w.degree() > 0 {
            out.add_assign(&self.dnabla(&w.interior(x))?);
        }
        Ok(out)
    }

    /// `R(∂_a,∂_b) = ∂_aΓ_b − ∂_bΓ_a + [Γ_a,Γ_b]`, as an End(V)-valued 2-form.
    pub fn curvature(&self) -> VForm {
        let m = self.m;
        let mut out = VForm::zero(self.n, m * m, 2);
        for a in 0..self.n {
            for b in a + 1..self.n {
                let mut r = self.gamma[a].commutator(&self.gamma[b]);
                for i in 0..m {
                    for j in 0..m {
                        let t = &self.gamma[b].get(i, j).d(a) - &self.gamma[a].get(i, j).d(b);
                        r.add_to(i, j, &t);
                    }
                }
                for (bc, p) in r.flatten().iter().enumerate() {
                    out.add_component(bc, mask_of(&[a, b]), p);
                }
            }
        }
        out
    }

    pub fn is_flat(&self) -> bool {
        self.curvature().is_zero()
    }

    /// Induced connection on `End V` (rank `m²`, index `b*m + c`), acting by commutator.
    pub fn induced_end(&self) -> LinearConnection {
        let m = self.m;
        let gamma = self
            .gamma
            .iter()
            .map(|g| commutator_operator(g, m))
            .collect();
        LinearConnection {
            n: self.n,
            m: m * m,
            gamma,
        }
    }
}

/// Matrix of `M ↦ GM − MG` on flattened `m×m` matrices.
pub fn commutator_operator(g: &PolyMatrix, m: usize) -> PolyMatrix {
    let n = g.nvars();
    let mut out = PolyMatrix::zero(n, m * m, m * m);
    for b in 0..m {
        for c in 0..m {
            for d in 0..m {
                // (GM)_{bc} = G_{bd} M_{dc}
                let gbd = g.get(b, d);
                if !gbd.is_zero() {
                    out.add_to(b * m + c, d * m + c, gbd);
                }
                // (MG)_{bc} = M_{bd} G_{dc}
                let gdc = g.get(d, c);
                if !gdc.is_zero() {
                    out.add_to(b * m + c, b * m + d, &-gdc);
                }
            }
        }
    }
    out
}

/// Representation of the algebroid on a trivial bundle `V` of rank `m`:
/// `∇^A_{e_i} u_c = ψ^b_{ic} u_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ARep {
    n: usize,
    m: usize,
    psi: Vec<PolyMatrix>,
}

impl ARep {
    pub fn new(n: usize, m: usize, psi: Vec<PolyMatrix>) -> Result<Self> {
        for p in &psi {
            if p.rows != m || p.cols != m || p.nvars() != n {
                return Err(Error::structural("representation matrix has wrong shape"));
            }
        }
        Ok(ARep { n, m, psi })
    }

    /// `∇^A_α ξ = ρ(α)ξ` on a trivial bundle of rank `m`.
    pub fn trivial(alg: &AlgebroidPresentation, m: usize) -> Self {
        let n = alg.chart_dim();
        ARep {
            n,
            m,
            psi: vec![PolyMatrix::zero(n, m, m); alg.rank()],
        }
    }

    /// `∇^A_α = ∇_{ρα}`
    pub fn from_connection(alg: &AlgebroidPresentation, conn: &LinearConnection) -> Self {
        let n = alg.chart_dim();
        let m = conn.rank();
        let psi = (0..alg.rank())
            .map(|i| {
                let mut acc = PolyMatrix::zero(n, m, m);
                for a in 0..n {
                    let r = alg.rho(i, a);
                    if !r.is_zero() {
                        acc = acc.add(&conn.gamma(a).scale_poly(r));
                    }
                }
                acc
            })
            .collect();
        ARep { n, m, psi }
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn algebroid_rank(&self) -> usize {
        self.psi.len()
    }

    pub fn psi(&self, i: usize) -> &PolyMatrix {
        &self.psi[i]
    }

    /// `α^i ψ_i`
    pub fn psi_of(&self, alpha: &Section) -> PolyMatrix {
        let mut acc = PolyMatrix::zero(self.n, self.m, self.m);
        for (i, ai) in alpha.0.iter().enumerate() {
            if !ai.is_zero() {
                acc = acc.add(&self.psi[i].scale_poly(ai));
            }
        }
        acc
    }

    /// `∇^A_α ξ`
    pub fn act(&self, alg: &AlgebroidPresentation, alpha: &Section, xi: &[Poly]) -> Vec<Poly> {
        let x = alg.anchor(alpha).expect("section rank matches");
        let mut out: Vec<Poly> = xi.iter().map(|p| x.apply(p)).collect();
        for (b, v) in self.psi_of(alpha).apply(xi).into_iter().enumerate() {
            out[b].add_assign_ref(&v);
        }
        out
    }

    /// `L^A_α ω = L_{ρα} ω + (α^i ψ_i) ω` for a V-valued form.
    pub fn lie_form(&self, alg: &AlgebroidPresentation, alpha: &Section, w: &VForm) -> VForm {
        assert_eq!(w.rank(), self.m, "form values do not match representation");
        let x = alg.anchor(alpha).expect("section rank matches");
        let mut out = w.lie(&x);
        out.add_assign(&w.apply_matrix(&self.psi_of(alpha)));
        out
    }

    /// `L^A_{e_i}` on a V-valued form.
    pub fn lie_basis(&self, alg: &AlgebroidPresentation, i: usize, w: &VForm) -> VForm {
        assert_eq!(w.rank(), self.m, "form values do not match representation");
        let mut out = w.lie(&alg.anchor_basis(i));
        if !self.psi[i].is_zero() {
            out.add_assign(&w.apply_matrix(&self.psi[i]));
        }
        out
    }

    /// Lie derivative on forms with values in `S^k(A^*) ⊗ V`.
    pub fn lie_sym(&self, alg: &AlgebroidPresentation, alpha: &Section, g: &SymForm) -> SymForm {
        let r = alg.rank();
        let mut out = SymForm::zero(g.nvars, r, self.m, g.degree, g.slots);
        for (slots, w) in &g.comps {
            out.add(slots.clone(), &self.lie_form(alg, alpha, w));
        }
        // − Σ_s γ(β_1, …, [α, β_s], …)
        let all = multisets(r, g.slots);
        for target in &all {
            for s in 0..target.len() {
                let br = alg
                    .bracket(alpha, &alg.basis(target[s]))
                    .expect("section rank matches");
                for (l, f) in br.0.iter().enumerate() {
                    if f.is_zero() {
                        continue;
                    }
                    let mut src = target.clone();
                    src[s] = l;
                    src.sort();
                    if let Some(w) = g.comps.get(&src) {
                        out.add(target.clone(), &w.mul_poly(f).neg());
                    }
                }
            }
        }
        out
    }

    /// Flatness `∇^A_{[e_i,e_j]} = [∇^A_{e_i}, ∇^A_{e_j}]` on all basis pairs.
    pub fn validate(&self, alg: &AlgebroidPresentation) -> Report {
        let mut rep = Report::new();
        let mut bad = Vec::new();
        let r = alg.rank();
        for i in 0..r {
            for j in i + 1..r {
                let br = alg.basis_bracket(i, j);
                let ok = (0..self.m).all(|c| {
                    let mut u = vec![Poly::zero(self.n); self.m];
                    u[c] = Poly::one(self.n);
                    let lhs = self.act(alg, &br, &u);
                    let a = self.act(alg, &alg.basis(i), &self.act(alg, &alg.basis(j), &u));
                    let b = self.act(alg, &alg.basis(j), &self.act(alg, &alg.basis(i), &u));
                    lhs.iter()
                        .zip(a.iter().zip(&b))
                        .all(|(l, (x, y))| &(x - y) == l)
                });
                if !ok {
                    bad.push(format!("(e{},e{})", i + 1, j + 1));
                }
            }
        }
        let detail = if bad.is_empty() {
            String::new()
        } else {
            format!("representation is not flat on {}", bad.join(", "))
        };
        rep.push("rep_flatness", bad.is_empty(), detail);
        rep
    }

    /// Induced representation on `End V`, acting by commutator.
    pub fn induced_end(&self) -> ARep {
        ARep {
            n: self.n,
            m: self.m * self.m,
            psi: self
                .psi
                .iter()
                .map(|p| commutator_operator(p, self.m))
                .collect(),
        }
    }
}

/// All sorted multisets of length `k` over `0..r`, ascending.
pub fn multisets(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(r: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(r, k, i, cur, out);
            cur.pop();
        }
    }
    rec(r, k, 0, &mut cur, &mut out);
    out
}

/// A form of degree `degree` with values in `S^k(A^*) ⊗ V`, stored by its
/// values on sorted multisets of frame sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymForm {
    pub nvars: usize,
    pub alg_rank: usize,
    pub rank: usize,
    pub degree: usize,
    pub slots: usize,
    comps: BTreeMap<Vec<usize>, VForm>,
}

impl SymForm {
    pub fn zero(nvars: usize, alg_rank: usize, rank: usize, degree: usize, slots: usize) -> Self {
        SymForm {
            nvars,
            alg_rank,
            rank,
            degree,
            slots,
            comps: BTreeMap::new(),
        }
    }

    /// Wrap a plain V-valued form (no symmetric slots).
    pub fn from_form(alg_rank: usize, w: &VForm) -> Self {
        let mut out = Self::zero(w.nvars(), alg_rank, w.rank(), w.degree(), 0);
        out.add(Vec::new(), w);
        out
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &VForm)> {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Add `w` to the value on the multiset `slots` (sorted internally).
    pub fn add(&mut self, mut slots: Vec<usize>, w: &VForm) {
        assert_eq!(slots.len(), self.slots, "slot count mismatch");
        slots.sort();
        if w.is_zero() {
            return;
        }
        match self.comps.get_mut(&slots) {
            Some(e) => {
                e.add_assign(w);
                if e.is_zero() {
                    self.comps.remove(&slots);
                }
            }
            None => {
                self.comps.insert(slots, w.clone());
            }
        }
    }

    /// Value on frame sections (any order).
    pub fn get(&self, slots: &[usize]) -> VForm {
        let mut s = slots.to_vec();
        s.sort();
        self.comps
            .get(&s)
            .cloned()
            .unwrap_or_else(|| VForm::zero(self.nvars, self.rank, self.degree))
    }

    /// Value on general sections, by `C^∞`-multilinearity.
    pub fn eval(&self, sections: &[Section]) -> VForm {
        assert_eq!(sections.len(), self.slots);
        let mut out = VForm::zero(self.nvars, self.rank, self.degree);
        let mut idx = vec![0usize; sections.len()];
        fn rec(
            g: &SymForm,
            sections: &[Section],
            pos: usize,
            idx: &mut Vec<usize>,
            coef: Poly,
            out: &mut VForm,
        ) {
            if pos == sections.len() {
                let w = g.get(idx);
                if !w.is_zero() {
                    out.add_assign(&w.mul_poly(&coef));
                }
                return;
            }
            for (l, f) in sections[pos].0.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                idx[pos] = l;
                rec(g, sections, pos + 1, idx, &coef * f, out);
            }
        }
        rec(self, sections, 0, &mut idx, Poly::one(self.nvars), &mut out);
        out
    }

    /// Fix the first slot: `γ(β, ·)`.
    pub fn insert(&self, beta: &Section) -> SymForm {
        let mut out = SymForm::zero(
            self.nvars,
            self.alg_rank,
            self.rank,
            self.degree,
            self.slots - 1,
        );
        for rest in multisets(self.alg_rank, self.slots - 1) {
            let mut args: Vec<Section> = vec![beta.clone()];
            args.extend(rest.iter().map(|&l| Section::basis(self.nvars, self.alg_rank, l)));
            out.add(rest, &self.eval(&args));
        }
        out
    }

    pub fn interior(&self, x: &VField) -> SymForm {
        let deg = self.degree.saturating_sub(1);
        let mut out = SymForm::zero(self.nvars, self.alg_rank, self.rank, deg, self.slots);
        if self.degree == 0 {
            return out;
        }
        for (s, w) in &self.comps {
            out.add(s.clone(), &w.interior(x));
        }
        out
    }

    pub fn as_form(&self) -> VForm {
        assert_eq!(self.slots, 0, "symmetric slots remain");
        self.get(&[])
    }
}

/// `(T, θ)` on frame sections: `θ(e_i)` an End(V) matrix, `T(e_i)` an
/// End(V)-valued 1-form (value index `b*m + c`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceForm {
    pub m: usize,
    pub theta: Vec<PolyMatrix>,
    pub t: Vec<VForm>,
}

impl InvarianceForm {
    /// `θ(α) = ∇^A_α − ∇_{ρα}`, `T(α) = d^∇θ(α) − ι_{ρα}R^∇`
    pub fn compute(
        alg: &AlgebroidPresentation,
        conn: &LinearConnection,
        rep: &ARep,
    ) -> Result<Self> {
        let m = conn.rank();
        if rep.rank() != m {
            return Err(Error::structural(
                "connection and representation act on different bundles",
            ));
        }
        let n = alg.chart_dim();
        let curv = conn.curvature();
        let end_conn = conn.induced_end();
        let mut theta = Vec::with_capacity(alg.rank());
        let mut t = Vec::with_capacity(alg.rank());
        for i in 0..alg.rank() {
            let mut th = rep.psi(i).clone();
            for a in 0..n {
                let r = alg.rho(i, a);
                if !r.is_zero() {
                    th = th.sub(&conn.gamma(a).scale_poly(r));
                }
            }
            let th_form = VForm::from_section(n, &th.flatten());
            let mut ti = end_conn.dnabla(&th_form)?;
            ti.sub_assign(&curv.interior(&alg.anchor_basis(i)));
            theta.push(th);
            t.push(ti);
        }
        Ok(InvarianceForm { m, theta, t })
    }

    pub fn is_zero(&self) -> bool {
        self.theta.iter().all(PolyMatrix::is_zero) && self.t.iter().all(VForm::is_zero)
    }

    /// `T(α) ∧ ω` for a frame section.
    pub fn t_wedge(&self, i: usize, w: &VForm) -> VForm {
        end_wedge(&self.t[i], w)
    }
}

/// `∇` is A-invariant iff `θ = 0` and `ι_{ρα}R^∇ = 0` on all frame sections.
pub fn is_a_invariant(alg: &AlgebroidPresentation, conn: &LinearConnection, rep: &ARep) -> bool {
    let Ok(tt) = InvarianceForm::compute(alg, conn, rep) else {
        return false;
    };
    let curv = conn.curvature();
    tt.theta.iter().all(PolyMatrix::is_zero)
        && (0..alg.rank()).all(|i| curv.interior(&alg.anchor_basis(i)).is_zero())
}

/// Curvature applied to a section: `R·ξ`, an V-valued 2-form.
pub fn curvature_apply(conn: &LinearConnection, xi: &[Poly]) -> VForm {
    let n = conn.chart_dim();
    end_wedge(&conn.curvature(), &VForm::from_section(n, xi))
}

/// `L^{A}_α` of an End(V)-valued form under the induced representation.
pub fn lie_end(
    alg: &AlgebroidPresentation,
    rep: &ARep,
    alpha: &Section,
    w: &VForm,
) -> VForm {
    rep.induced_end().lie_form(alg, alpha, w)
}

pub(crate) fn unit(n: usize, m: usize, c: usize) -> Vec<Poly> {
    let mut u = vec![Poly::zero(n); m];
    u[c] = Poly::constant(n, int(1));
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_connection_reduces_to_d() {
        let n = 2;
        let conn = LinearConnection::trivial(n, 1);
        let w = VForm::scalar(Poly::parse_default("x1", n).unwrap(), &[1]);
        assert_eq!(conn.dnabla(&w).unwrap(), w.d());
        assert!(conn.curvature().is_zero());
        assert!(conn.induced_end().curvature().is_zero());
    }

    #[test]
    fn rank_mismatch_rejected() {
        let conn = LinearConnection::trivial(2, 2);
        let w = VForm::zero(2, 1, 0);
        assert!(matches!(conn.dnabla(&w), Err(Error::Structural(_))));
    }

    #[test]
    fn rank_one_curvature() {
        // ∇ = d + x dy on a line bundle: R = dx∧dy
        let n = 2;
        let mut g = vec![PolyMatrix::zero(n, 1, 1); 2];
        g[1].set(0, 0, Poly::var(n, 0));
        let conn = LinearConnection::new(n, 1, g).unwrap();
        assert_eq!(
            conn.curvature(),
            VForm::scalar(Poly::one(n), &[0, 1])
        );
    }
}
