//! Bundles of ideals, IM connections and their coupling data.

mod coupling;
mod curving;
mod horizontal;
mod pairing;

use crate::algebroid::{AlgebroidPresentation, PolyMatrix, Section, VForm};
use crate::connections::{unit, ARep, LinearConnection};
use crate::error::{Error, Result};
use crate::poly::{int, Poly, Rational};
use crate::report::Report;
use crate::weil::{check_im, WeilCochain};

pub use coupling::{
    build_coupled, build_coupled_unchecked, connection_from_entries, coupled_conditions,
    coupling_checks, Coupled, CouplingTriple,
};
pub use curving::{
    abelian_primitive_check, ad_inverse, check_semisimple, curving_suite, deformed_curving,
    primitive_from_pair, unique_curving,
};
pub use horizontal::{
    bianchi_check, c2, curvature, curvature_explicit, deform, dhor, hstar, obstruction_cocycle,
};
pub use pairing::{wedgedot, wedgedot_multiple};

/// A frame-aligned bundle of ideals `𝔨 = span{e_{k_1}, …, e_{k_m}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealBundle {
    alg: AlgebroidPresentation,
    indices: Vec<usize>,
}

impl IdealBundle {
    /// Structural checks only; use [`IdealBundle::validate`] for the ideal axioms.
    pub fn new(alg: AlgebroidPresentation, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort();
        indices.dedup();
        if indices.iter().any(|&i| i >= alg.rank()) {
            return Err(Error::structural("ideal index out of range"));
        }
        Ok(IdealBundle { alg, indices })
    }

    pub fn algebroid(&self) -> &AlgebroidPresentation {
        &self.alg
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn rank(&self) -> usize {
        self.indices.len()
    }

    fn n(&self) -> usize {
        self.alg.chart_dim()
    }

    /// Position of `e_i` in the ideal frame, if it belongs to it.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.indices.iter().position(|&k| k == i)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.position(i).is_some()
    }

    /// Indices of the complementary frame sections.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.alg.rank()).filter(|i| !self.contains(*i)).collect()
    }

    /// Include a section of 𝔨 into A.
    pub fn include(&self, xi: &[Poly]) -> Section {
        let mut s = self.alg.zero_section();
        for (b, p) in xi.iter().enumerate() {
            s.0[self.indices[b]] = p.clone();
        }
        s
    }

    /// Components of a section of A along 𝔨 (assumes it lies in 𝔨).
    pub fn restrict(&self, s: &Section) -> Vec<Poly> {
        self.indices.iter().map(|&k| s.0[k].clone()).collect()
    }

    /// `κ^d_{bc}`: `[u_b, u_c] = κ^d_{bc} u_d`.
    pub fn kappa(&self, b: usize, c: usize, d: usize) -> &Poly {
        self.alg
            .c(self.indices[b], self.indices[c], self.indices[d])
    }

    /// The fibrewise bracket of 𝔨.
    pub fn fibre(&self) -> FibreBracket {
        let m = self.rank();
        let mut kappa = Vec::with_capacity(m * m * m);
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    kappa.push(self.kappa(b, c, d).clone());
                }
            }
        }
        FibreBracket {
            n: self.n(),
            m,
            kappa,
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.fibre().is_abelian()
    }

    /// Adjoint representation `∇^A_α ξ = [α, ξ]`.
    pub fn adjoint_rep(&self) -> ARep {
        let n = self.n();
        let m = self.rank();
        let psi = (0..self.alg.rank())
            .map(|i| {
                let mut mat = PolyMatrix::zero(n, m, m);
                for c in 0..m {
                    for b in 0..m {
                        mat.set(b, c, self.alg.c(i, self.indices[c], self.indices[b]).clone());
                    }
                }
                mat
            })
            .collect();
        ARep::new(n, m, psi).expect("adjoint matrices have the right shape")
    }

    /// Anchor vanishes on 𝔨 and `[e_i, e_j] ∈ Γ(𝔨)` for every `i` and `j ∈ 𝔨`.
    pub fn validate(&self) -> Report {
        let mut rep = Report::new();
        let bad: Vec<String> = self
            .indices
            .iter()
            .filter(|&&j| !self.alg.anchor_basis(j).is_zero())
            .map(|j| format!("e{}", j + 1))
            .collect();
        rep.push(
            "ideal_in_kernel_of_anchor",
            bad.is_empty(),
            if bad.is_empty() {
                String::new()
            } else {
                format!("anchor does not vanish on {}", bad.join(", "))
            },
        );
        let mut bad = Vec::new();
        for i in 0..self.alg.rank() {
            for &j in &self.indices {
                let br = self.alg.basis_bracket(i, j);
                if (0..self.alg.rank()).any(|l| !self.contains(l) && !br.0[l].is_zero()) {
                    bad.push(format!("[e{},e{}]", i + 1, j + 1));
                }
            }
        }
        rep.push(
            "ideal_bracket_closure",
            bad.is_empty(),
            if bad.is_empty() {
                String::new()
            } else {
                format!("{} leave the ideal", bad.join(", "))
            },
        );
        rep
    }
}

/// A bracket on the fibres of a trivial bundle of rank `m`,
/// `[u_b, u_c] = κ^d_{bc} u_d` with `κ` stored at `(b*m + c)*m + d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreBracket {
    n: usize,
    m: usize,
    kappa: Vec<Poly>,
}

impl FibreBracket {
    pub fn new(n: usize, m: usize, kappa: Vec<Poly>) -> Result<Self> {
        if kappa.len() != m * m * m || kappa.iter().any(|p| p.nvars() != n) {
            return Err(Error::structural("fibre bracket table has the wrong shape"));
        }
        Ok(FibreBracket { n, m, kappa })
    }

    /// The zero bracket.
    pub fn abelian(n: usize, m: usize) -> Self {
        FibreBracket {
            n,
            m,
            kappa: vec![Poly::zero(n); m * m * m],
        }
    }

    /// Constant structure constants given for `b < c`.
    pub fn from_upper(
        n: usize,
        m: usize,
        upper: impl IntoIterator<Item = ((usize, usize, usize), Poly)>,
    ) -> Result<Self> {
        let mut out = Self::abelian(n, m);
        for ((b, c, d), p) in upper {
            if b >= c || c >= m || d >= m {
                return Err(Error::structural("fibre bracket entries need b < c < m"));
            }
            out.kappa[(c * m + b) * m + d] = -&p;
            out.kappa[(b * m + c) * m + d] = p;
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn chart_dim(&self) -> usize {
        self.n
    }

    pub fn kappa(&self, b: usize, c: usize, d: usize) -> &Poly {
        &self.kappa[(b * self.m + c) * self.m + d]
    }

    pub fn is_abelian(&self) -> bool {
        self.kappa.iter().all(Poly::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.kappa.iter().all(|p| p.as_constant().is_some())
    }

    /// `[ξ, η]` pointwise.
    pub fn bracket(&self, xi: &[Poly], eta: &[Poly]) -> Vec<Poly> {
        let mut out = vec![Poly::zero(self.n); self.m];
        for (b, x) in xi.iter().enumerate() {
            for (c, y) in eta.iter().enumerate() {
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (d, o) in out.iter_mut().enumerate() {
                    let k = self.kappa(b, c, d);
                    if !k.is_zero() {
                        o.add_assign_ref(&(&xy * k));
                    }
                }
            }
        }
        out
    }

    /// `ad(ξ)` as an `m×m` matrix.
    pub fn ad(&self, xi: &[Poly]) -> PolyMatrix {
        let m = self.m;
        let mut mat = PolyMatrix::zero(self.n, m, m);
        for (b, x) in xi.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for c in 0..m {
                for d in 0..m {
                    let k = self.kappa(b, c, d);
                    if !k.is_zero() {
                        mat.add_to(d, c, &(x * k));
                    }
                }
            }
        }
        mat
    }

    /// `[ω, η] = Σ ω^b ∧ η^c [u_b, u_c]` for forms with values in the bundle.
    pub fn bracket_forms(&self, w: &VForm, e: &VForm) -> VForm {
        let m = self.m;
        let mut out = VForm::zero(self.n, m, w.degree() + e.degree());
        for b in 0..m {
            let wb = w.value_component(b);
            if wb.is_zero() {
                continue;
            }
            for c in 0..m {
                let vals: Vec<Poly> = (0..m).map(|d| self.kappa(b, c, d).clone()).collect();
                if vals.iter().all(Poly::is_zero) {
                    continue;
                }
                let ec = e.value_component(c);
                if ec.is_zero() {
                    continue;
                }
                let prod = VForm::wedge_scalar_left(&wb, &ec);
                out.add_assign(&prod.tensor_section(&vals));
            }
        }
        out
    }

    /// Antisymmetry and the Jacobi identity on frame sections.
    pub fn is_lie(&self) -> bool {
        let m = self.m;
        let basis = |b: usize| unit(self.n, m, b);
        for b in 0..m {
            for c in 0..m {
                let s = self.bracket(&basis(b), &basis(c));
                let t = self.bracket(&basis(c), &basis(b));
                if s.iter().zip(&t).any(|(x, y)| !(x + y).is_zero()) {
                    return false;
                }
                for d in 0..m {
                    let (x, y, z) = (basis(b), basis(c), basis(d));
                    let j1 = self.bracket(&x, &self.bracket(&y, &z));
                    let j2 = self.bracket(&y, &self.bracket(&z, &x));
                    let j3 = self.bracket(&z, &self.bracket(&x, &y));
                    if (0..m).any(|e| !(&(&j1[e] + &j2[e]) + &j3[e]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// An IM connection `(C, v) ∈ W^{1,1}(A; 𝔨)` with `v|_𝔨 = id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IMConnection {
    ideal: IdealBundle,
    cochain: WeilCochain,
}

impl IMConnection {
    /// Requires the symbol to restrict to the identity and (C.1)–(C.3) to hold.
    pub fn new(ideal: IdealBundle, cochain: WeilCochain) -> Result<Self> {
        let imc = Self::new_unchecked(ideal, cochain)?;
        let rep = check_im(imc.algebroid(), &imc.ideal.adjoint_rep(), &imc.cochain)?;
        if let Some(f) = rep.failures().next() {
            return Err(Error::contract(format!(
                "not an IM form: {}",
                f.detail
            )));
        }
        Ok(imc)
    }

    /// Checks the shape and `v|_𝔨 = id`, but not the compatibility conditions.
    pub fn new_unchecked(ideal: IdealBundle, cochain: WeilCochain) -> Result<Self> {
        let alg = ideal.algebroid();
        if cochain.level() != 1
            || cochain.degree() != 1
            || cochain.value_rank() != ideal.rank()
            || cochain.alg_rank() != alg.rank()
            || cochain.chart_dim() != alg.chart_dim()
        {
            return Err(Error::structural(
                "an IM connection is a 𝔨-valued cochain in W^(1,1)",
            ));
        }
        let imc = IMConnection { ideal, cochain };
        for (b, &k) in imc.ideal.indices.iter().enumerate() {
            let v = imc.symbol(k);
            for (d, p) in v.iter().enumerate() {
                let expect = if d == b { int(1) } else { int(0) };
                if p.as_constant() != Some(expect) {
                    return Err(Error::contract(format!(
                        "symbol does not restrict to the identity on e{}",
                        k + 1
                    )));
                }
            }
        }
        Ok(imc)
    }

    pub fn ideal(&self) -> &IdealBundle {
        &self.ideal
    }

    pub fn algebroid(&self) -> &AlgebroidPresentation {
        &self.ideal.alg
    }

    pub fn cochain(&self) -> &WeilCochain {
        &self.cochain
    }

    /// `v(e_i)`
    pub fn symbol(&self, i: usize) -> Vec<Poly> {
        self.cochain.get(1, &[], &[i]).to_section()
    }

    /// `v(α)`
    pub fn symbol_of(&self, alpha: &Section) -> Vec<Poly> {
        self.cochain
            .evaluate(1, &[], &[alpha.clone()])
            .expect("section of the algebroid")
            .to_section()
    }

    /// `C(e_i)`
    pub fn leading(&self, i: usize) -> VForm {
        self.cochain.get(0, &[i], &[])
    }

    /// `C(α)` through the Leibniz identity.
    pub fn leading_of(&self, alpha: &Section) -> VForm {
        self.cochain
            .evaluate(0, &[alpha.clone()], &[])
            .expect("section of the algebroid")
    }

    /// `hα = α − v(α)`
    pub fn horizontal(&self, alpha: &Section) -> Section {
        alpha.sub(&self.ideal.include(&self.symbol_of(alpha)))
    }

    pub fn horizontal_basis(&self, i: usize) -> Section {
        self.horizontal(&self.algebroid().basis(i))
    }

    /// Coupling connection `∇ξ = C(ξ)` on 𝔨.
    pub fn coupling_connection(&self) -> LinearConnection {
        let n = self.algebroid().chart_dim();
        let m = self.ideal.rank();
        let mut gamma = vec![PolyMatrix::zero(n, m, m); n];
        for (c, &k) in self.ideal.indices.iter().enumerate() {
            let w = self.leading(k);
            for ((b, mask), p) in w.components() {
                let a = mask.trailing_zeros() as usize;
                gamma[a].set(*b, c, p.clone());
            }
        }
        LinearConnection::new(n, m, gamma).expect("coupling connection shape")
    }

    /// `U(hα) = −C(hα)`
    pub fn u_of(&self, alpha: &Section) -> VForm {
        self.leading_of(&self.horizontal(alpha)).neg()
    }

    /// `(C, v) + λ (L, l)` without any checks on `L`.
    pub fn shifted(&self, l: &WeilCochain, lambda: &Rational) -> Result<IMConnection> {
        let c = self.cochain.checked_add(&l.scale(lambda))?;
        IMConnection::new_unchecked(self.ideal.clone(), c)
    }
}
