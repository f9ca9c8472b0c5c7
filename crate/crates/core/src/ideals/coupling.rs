//! Coupling data of an IM connection and the coupled algebroid construction.

use std::collections::BTreeMap;

use crate::algebroid::{AlgebroidPresentation, PolyMatrix, Section, VForm};
use crate::connections::{curvature_apply, is_a_invariant, unit, LinearConnection};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::report::Report;
use crate::weil::WeilCochain;

use super::{FibreBracket, IMConnection, IdealBundle};

fn listing(bad: &[String], what: &str) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("{what} fails on {}", bad.join(", "))
    }
}

/// Splitting data `(v, ∇, U)`: a symbol on every frame section, a
/// connection on 𝔨 and `U(h e_i)` for the frame sections outside 𝔨.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingTriple {
    pub symbol: Vec<Vec<Poly>>,
    pub conn: LinearConnection,
    pub u: BTreeMap<usize, VForm>,
}

impl CouplingTriple {
    pub fn from_imc(imc: &IMConnection) -> Self {
        let alg = imc.algebroid();
        let symbol = (0..alg.rank()).map(|i| imc.symbol(i)).collect();
        let u = imc
            .ideal()
            .complement()
            .into_iter()
            .map(|i| (i, imc.u_of(&alg.basis(i))))
            .collect();
        CouplingTriple {
            symbol,
            conn: imc.coupling_connection(),
            u,
        }
    }

    /// `(C, v)` with `C(α) = ∇(vα) − U(hα)`.
    pub fn cochain(&self, ideal: &IdealBundle) -> Result<WeilCochain> {
        let alg = ideal.algebroid();
        let (n, r, m) = (alg.chart_dim(), alg.rank(), ideal.rank());
        if self.symbol.len() != r
            || self.symbol.iter().any(|v| v.len() != m)
            || self.conn.rank() != m
            || self.conn.chart_dim() != n
        {
            return Err(Error::structural("splitting data does not match the ideal"));
        }
        for (b, &k) in ideal.indices().iter().enumerate() {
            if self.symbol[k] != unit(n, m, b) {
                return Err(Error::contract(format!(
                    "symbol does not restrict to the identity on e{}",
                    k + 1
                )));
            }
        }
        let mut c = WeilCochain::zero(n, r, m, 1, 1);
        for i in 0..r {
            let v = VForm::from_section(n, &self.symbol[i]);
            if c.has_component(0) {
                let mut w = self.conn.dnabla(&v)?;
                if let Some(u) = self.u.get(&i) {
                    if ideal.contains(i) {
                        return Err(Error::contract("U is only defined on the horizontal frame"));
                    }
                    if u.rank() != m || u.degree() != 1 {
                        return Err(Error::structural("U must be a 𝔨-valued 1-form"));
                    }
                    w.sub_assign(u);
                }
                c.set(0, &[i], &[], w);
            }
            c.set(1, &[], &[i], v);
        }
        Ok(c)
    }
}

/// `∇[ξ, η] = [∇ξ, η] + [ξ, ∇η]` on frame sections of 𝔨.
fn bracket_preserving_failures(fibre: &FibreBracket, conn: &LinearConnection) -> Result<Vec<String>> {
    let (n, m) = (fibre.chart_dim(), fibre.rank());
    let mut bad = Vec::new();
    for b in 0..m {
        for c in b + 1..m {
            let ub = VForm::from_section(n, &unit(n, m, b));
            let uc = VForm::from_section(n, &unit(n, m, c));
            let br = VForm::from_section(n, &fibre.bracket(&unit(n, m, b), &unit(n, m, c)));
            let lhs = conn.dnabla(&br)?;
            let rhs = fibre
                .bracket_forms(&conn.dnabla(&ub)?, &uc)
                .add(&fibre.bracket_forms(&ub, &conn.dnabla(&uc)?));
            if lhs != rhs {
                bad.push(format!("(u{},u{})", b + 1, c + 1));
            }
        }
    }
    Ok(bad)
}

/// Structural identities of the coupling data of an IM connection.
pub fn coupling_checks(imc: &IMConnection) -> Result<Report> {
    let alg = imc.algebroid();
    let ideal = imc.ideal();
    let fibre = ideal.fibre();
    let (n, r, m) = (alg.chart_dim(), alg.rank(), ideal.rank());
    let conn = imc.coupling_connection();
    let mut rep = Report::new();

    let bad = bracket_preserving_failures(&fibre, &conn)?;
    rep.push("S.1", bad.is_empty(), listing(&bad, "S.1"));

    let us: Vec<VForm> = (0..r).map(|i| imc.u_of(&alg.basis(i))).collect();
    let hs: Vec<Section> = (0..r).map(|i| imc.horizontal_basis(i)).collect();

    let mut bad = Vec::new();
    for i in 0..r {
        let x = alg.anchor_basis(i);
        for c in 0..m {
            let xi = unit(n, m, c);
            let lhs = curvature_apply(&conn, &xi).interior(&x);
            let rhs = fibre.bracket_forms(&us[i], &VForm::from_section(n, &xi));
            if lhs != rhs {
                bad.push(format!("(e{},u{})", i + 1, c + 1));
            }
        }
    }
    rep.push("S.2", bad.is_empty(), listing(&bad, "S.2"));

    let mut bad = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let (xi, xj) = (alg.anchor_basis(i), alg.anchor_basis(j));
            let lhs = imc.u_of(&alg.basis_bracket(i, j));
            let mut rhs = conn.lie(&xi, &us[j])?;
            rhs.sub_assign(&conn.lie(&xj, &us[i])?);
            rhs.add_assign(&conn.dnabla(&us[i].interior(&xj))?);
            if lhs != rhs {
                bad.push(format!("(e{},e{})", i + 1, j + 1));
            }
        }
    }
    rep.push("S.3", bad.is_empty(), listing(&bad, "S.3"));

    let mut bad = Vec::new();
    for i in 0..r {
        let x = alg.anchor_basis(i);
        for c in 0..m {
            let xi = unit(n, m, c);
            let lhs = conn.covariant(&x, &xi);
            let br = alg.bracket(&hs[i], &ideal.include(&xi))?;
            if ideal.include(&lhs) != br {
                bad.push(format!("(e{},u{})", i + 1, c + 1));
            }
        }
    }
    rep.push("conn_orb2", bad.is_empty(), listing(&bad, "conn_orb2"));

    let mut bad = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let lhs = imc.symbol_of(&alg.bracket(&hs[i], &hs[j])?);
            let rhs = us[i].interior(&alg.anchor_basis(j));
            if VForm::from_section(n, &lhs) != rhs {
                bad.push(format!("(e{},e{})", i + 1, j + 1));
            }
        }
    }
    rep.push("U_along_orbits", bad.is_empty(), listing(&bad, "U_along_orbits"));

    let abelian = fibre.is_abelian();
    let invariant = is_a_invariant(alg, &conn, &ideal.adjoint_rep());
    rep.push(
        "abelian_iff_invariant",
        abelian == invariant,
        match (abelian, invariant) {
            (true, false) => "ideal is abelian but the coupling connection is not A-invariant",
            (false, true) => "coupling connection is A-invariant but the ideal is not abelian",
            _ => "",
        },
    );
    Ok(rep)
}

/// The algebroid `B ⊕ 𝔨` built from a curving, with its IM connection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupled {
    pub imc: IMConnection,
    pub conn: LinearConnection,
    pub curving: VForm,
}

impl Coupled {
    pub fn algebroid(&self) -> &AlgebroidPresentation {
        self.imc.algebroid()
    }

    pub fn ideal(&self) -> &IdealBundle {
        self.imc.ideal()
    }
}

/// (i) `∇` preserves the bracket, (ii) `R = −ad F`, (iii) `ι_{ρ_B α} d^∇F = 0`.
pub fn coupled_conditions(
    b: &AlgebroidPresentation,
    fibre: &FibreBracket,
    conn: &LinearConnection,
    f: &VForm,
) -> Result<Report> {
    check_coupling_shapes(b, fibre, conn, f)?;
    let (n, m) = (b.chart_dim(), fibre.rank());
    let mut rep = Report::new();
    let bad = bracket_preserving_failures(fibre, conn)?;
    rep.push("bracket_preserving", bad.is_empty(), listing(&bad, "bracket_preserving"));

    let mut bad = Vec::new();
    for c in 0..m {
        let xi = unit(n, m, c);
        let lhs = curvature_apply(conn, &xi);
        let rhs = fibre.bracket_forms(&VForm::from_section(n, &xi), f);
        if lhs != rhs {
            bad.push(format!("u{}", c + 1));
        }
    }
    rep.push("R == -ad F", bad.is_empty(), listing(&bad, "R == -ad F"));

    let df = conn.dnabla(f)?;
    let bad: Vec<String> = (0..b.rank())
        .filter(|&i| !df.interior(&b.anchor_basis(i)).is_zero())
        .map(|i| format!("e{}", i + 1))
        .collect();
    rep.push("iota_rho dF == 0", bad.is_empty(), listing(&bad, "iota_rho dF == 0"));
    Ok(rep)
}

fn check_coupling_shapes(
    b: &AlgebroidPresentation,
    fibre: &FibreBracket,
    conn: &LinearConnection,
    f: &VForm,
) -> Result<()> {
    let n = b.chart_dim();
    if fibre.chart_dim() != n || conn.chart_dim() != n || f.nvars() != n {
        return Err(Error::structural("coupling data over different charts"));
    }
    if conn.rank() != fibre.rank() || f.rank() != fibre.rank() || f.degree() != 2 {
        return Err(Error::structural(
            "coupling needs a connection on 𝔨 and a 𝔨-valued 2-form",
        ));
    }
    Ok(())
}

/// `B ⊕ 𝔨` with `[(α,ξ),(β,η)] = ([α,β], ∇_{ρα}η − ∇_{ρβ}ξ + [ξ,η] − F(ρα,ρβ))`.
pub fn build_coupled(
    b: &AlgebroidPresentation,
    fibre: &FibreBracket,
    conn: &LinearConnection,
    f: &VForm,
) -> Result<Coupled> {
    let rep = coupled_conditions(b, fibre, conn, f)?;
    if let Some(fail) = rep.failures().next() {
        return Err(Error::contract(format!(
            "coupling data rejected: {}",
            fail.detail
        )));
    }
    let out = build_coupled_unchecked(b, fibre, conn, f)?;
    IMConnection::new(out.imc.ideal().clone(), out.imc.cochain().clone())?;
    Ok(out)
}

/// As [`build_coupled`], skipping conditions (i)–(iii) and the IM check.
pub fn build_coupled_unchecked(
    b: &AlgebroidPresentation,
    fibre: &FibreBracket,
    conn: &LinearConnection,
    f: &VForm,
) -> Result<Coupled> {
    check_coupling_shapes(b, fibre, conn, f)?;
    let (n, rb, m) = (b.chart_dim(), b.rank(), fibre.rank());
    let r = rb + m;
    let mut structure = vec![Poly::zero(n); r * r * r];
    let mut set = |i: usize, j: usize, k: usize, p: &Poly| {
        structure[(i * r + j) * r + k] = p.clone();
        structure[(j * r + i) * r + k] = -p;
    };
    for i in 0..rb {
        let xi = b.anchor_basis(i);
        for j in i + 1..rb {
            let xj = b.anchor_basis(j);
            for k in 0..rb {
                set(i, j, k, b.c(i, j, k));
            }
            let fij = f.interior(&xi).interior(&xj);
            for d in 0..m {
                set(i, j, rb + d, &-fij.get(d, 0));
            }
        }
        for c in 0..m {
            let v = conn.covariant(&xi, &unit(n, m, c));
            for (d, p) in v.iter().enumerate() {
                set(i, rb + c, rb + d, p);
            }
        }
    }
    for c in 0..m {
        for e in c + 1..m {
            for d in 0..m {
                set(rb + c, rb + e, rb + d, fibre.kappa(c, e, d));
            }
        }
    }
    let mut anchor = vec![Poly::zero(n); r * n];
    for i in 0..rb {
        for a in 0..n {
            anchor[i * n + a] = b.rho(i, a).clone();
        }
    }
    let alg = AlgebroidPresentation::new(n, r, structure, anchor)?;
    let ideal = IdealBundle::new(alg, (rb..r).collect())?;

    let mut c = WeilCochain::zero(n, r, m, 1, 1);
    for i in 0..rb {
        if c.has_component(0) {
            c.set(0, &[i], &[], f.interior(&b.anchor_basis(i)));
        }
    }
    for d in 0..m {
        let ud = VForm::from_section(n, &unit(n, m, d));
        if c.has_component(0) {
            c.set(0, &[rb + d], &[], conn.dnabla(&ud)?);
        }
        c.set(1, &[], &[rb + d], ud);
    }
    let imc = IMConnection::new_unchecked(ideal, c)?;
    Ok(Coupled {
        imc,
        conn: conn.clone(),
        curving: f.clone(),
    })
}

/// Connection form helper: `Γ_a` matrices from `(a, b, c) ↦ Γ^b_{ac}`.
pub fn connection_from_entries(
    n: usize,
    m: usize,
    entries: impl IntoIterator<Item = ((usize, usize, usize), Poly)>,
) -> Result<LinearConnection> {
    let mut gamma = vec![PolyMatrix::zero(n, m, m); n];
    for ((a, b, c), p) in entries {
        if a >= n || b >= m || c >= m {
            return Err(Error::structural("Christoffel index out of range"));
        }
        gamma[a].set(b, c, p);
    }
    LinearConnection::new(n, m, gamma)
}
