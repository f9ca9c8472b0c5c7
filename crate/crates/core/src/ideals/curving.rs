//! Curvings, their deformations, and the semisimple and abelian cases.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebroid::{Mask, Section, VForm};
use crate::connections::{curvature_apply, unit, LinearConnection};
use crate::error::{Error, Result};
use crate::linalg::{self, SparseRow};
use crate::poly::{rat, Monomial, Poly, Rational};
use crate::report::Report;
use crate::weil::{delta, is_horizontal, WeilCochain};

use super::horizontal::curvature;
use super::{IMConnection, IdealBundle};

fn verdict(rep: &mut Report, name: &str, ok: bool, detail: &str) {
    rep.push(name, ok, if ok { "" } else { detail });
}

/// `δ⁰ω` for a 𝔨-valued form, through the adjoint representation.
fn delta0(ideal: &IdealBundle, w: &VForm) -> Result<WeilCochain> {
    let alg = ideal.algebroid();
    delta(alg, &ideal.adjoint_rep(), &WeilCochain::from_form(alg.rank(), w))
}

/// Checks that `F` is a curving of `imc`, together with the structure it
/// forces; with `gamma`, also the deformed curving `F^γ`.
pub fn curving_suite(imc: &IMConnection, f: &VForm, gamma: Option<&VForm>) -> Result<Report> {
    let alg = imc.algebroid();
    let ideal = imc.ideal();
    let fibre = ideal.fibre();
    let (n, r, m) = (alg.chart_dim(), alg.rank(), ideal.rank());
    if f.rank() != m || f.degree() != 2 || f.nvars() != n {
        return Err(Error::structural("a curving is a 𝔨-valued 2-form"));
    }
    let conn = imc.coupling_connection();
    let omega = curvature(imc)?;
    let mut rep = Report::new();

    verdict(
        &mut rep,
        "delta0 F == Omega",
        delta0(ideal, f)? == omega,
        "F does not integrate the curvature",
    );

    let bad: Vec<String> = (0..m)
        .filter(|&c| {
            let xi = VForm::from_section(n, &unit(n, m, c));
            curvature_apply(&conn, &unit(n, m, c)) != fibre.bracket_forms(&xi, f)
        })
        .map(|c| format!("u{}", c + 1))
        .collect();
    verdict(&mut rep, "R == -ad F", bad.is_empty(), &format!("fails on {}", bad.join(", ")));

    let bad: Vec<String> = (0..r)
        .filter(|&i| imc.u_of(&alg.basis(i)) != f.interior(&alg.anchor_basis(i)).neg())
        .map(|i| format!("e{}", i + 1))
        .collect();
    verdict(
        &mut rep,
        "U == -iota_rho F",
        bad.is_empty(),
        &format!("fails on {}", bad.join(", ")),
    );

    let g = conn.dnabla(f)?;
    verdict(&mut rep, "delta0 G == 0", delta0(ideal, &g)?.is_zero(), "G is not invariant");
    verdict(&mut rep, "dnabla G == 0", conn.dnabla(&g)?.is_zero(), "G is not closed");

    if let Some(gamma) = gamma {
        if gamma.rank() != m || gamma.degree() != 1 || gamma.nvars() != n {
            return Err(Error::structural("a curving deformation is a 𝔨-valued 1-form"));
        }
        let shift = delta0(ideal, gamma)?;
        verdict(
            &mut rep,
            "delta0 gamma horizontal",
            is_horizontal(&shift, ideal.indices()),
            "delta0 gamma has vertical correction terms",
        );
        let deformed = imc.shifted(&shift, &Rational::from_integer(1.into()))?;
        let f_gamma = deformed_curving(ideal, &conn, f, gamma)?;
        verdict(
            &mut rep,
            "delta0 F^gamma == Omega^gamma",
            delta0(ideal, &f_gamma)? == curvature(&deformed)?,
            "F^gamma is not a curving of the deformed connection",
        );
        let conn_gamma = deformed.coupling_connection();
        let bad: Vec<String> = (0..m)
            .filter(|&c| {
                let xi = VForm::from_section(n, &unit(n, m, c));
                let expect = conn
                    .dnabla(&xi)
                    .map(|w| w.add(&fibre.bracket_forms(&xi, gamma)));
                conn_gamma.dnabla(&xi).ok() != expect.ok()
            })
            .map(|c| format!("u{}", c + 1))
            .collect();
        verdict(
            &mut rep,
            "nabla^gamma == nabla + ad(gamma)",
            bad.is_empty(),
            &format!("fails on {}", bad.join(", ")),
        );
        verdict(
            &mut rep,
            "G^gamma == G",
            conn_gamma.dnabla(&f_gamma)? == g,
            "3-curvature changed under deformation",
        );
    }
    Ok(rep)
}

/// `F^γ = F + d^∇γ − ½[γ, γ]`
pub fn deformed_curving(
    ideal: &IdealBundle,
    conn: &LinearConnection,
    f: &VForm,
    gamma: &VForm,
) -> Result<VForm> {
    let sq = ideal.fibre().bracket_forms(gamma, gamma);
    Ok(f.add(&conn.dnabla(gamma)?).sub(&sq.scale(&rat(1, 2))))
}

/// Centre trivial and every derivation inner, for constant structure constants.
pub fn check_semisimple(ideal: &IdealBundle) -> Result<Report> {
    let fibre = ideal.fibre();
    if !fibre.is_constant() {
        return Err(Error::contract(
            "semisimplicity test needs constant structure constants",
        ));
    }
    let m = fibre.rank();
    let k = |b: usize, c: usize, d: usize| fibre.kappa(b, c, d).as_constant().unwrap();
    let mut rep = Report::new();

    // ad: 𝔨 → End 𝔨, unknowns ξ^b, rows (d, c)
    let mut rows = Vec::new();
    for c in 0..m {
        for d in 0..m {
            let row: SparseRow = (0..m)
                .filter_map(|b| {
                    let v = k(b, c, d);
                    (!v.is_zero()).then_some((b, v))
                })
                .collect();
            rows.push(row);
        }
    }
    let ad_rank = linalg::rank(m, &rows);
    verdict(&mut rep, "centre trivial", ad_rank == m, "ad has a kernel");

    // derivations D^e_b: D[u_b,u_c] = [Du_b,u_c] + [u_b,Du_c]
    let var = |e: usize, b: usize| e * m + b;
    let mut rows = Vec::new();
    for b in 0..m {
        for c in 0..m {
            for d in 0..m {
                let mut row = SparseRow::new();
                let mut add = |col: usize, v: Rational| {
                    let e = row.entry(col).or_insert_with(Rational::zero);
                    *e += v;
                };
                for e in 0..m {
                    add(var(d, e), k(b, c, e));
                    add(var(e, b), -k(e, c, d));
                    add(var(e, c), -k(b, e, d));
                }
                row.retain(|_, v| !v.is_zero());
                rows.push(row);
            }
        }
    }
    let der_dim = m * m - linalg::rank(m * m, &rows);
    verdict(
        &mut rep,
        "derivations inner",
        der_dim == ad_rank,
        &format!("{der_dim} derivations against {ad_rank} inner ones"),
    );
    Ok(rep)
}

/// Solve `[ξ, γ] = D ξ` for an End(𝔨)-valued form `D` (value index `d*m + c`).
pub fn ad_inverse(ideal: &IdealBundle, d: &VForm) -> Result<VForm> {
    let fibre = ideal.fibre();
    if !fibre.is_constant() {
        return Err(Error::contract("ad inverse needs constant structure constants"));
    }
    let m = fibre.rank();
    if d.rank() != m * m {
        return Err(Error::structural("ad inverse needs an End(𝔨)-valued form"));
    }
    let n = d.nvars();
    let mut rows = Vec::new();
    for c in 0..m {
        for e in 0..m {
            let row: SparseRow = (0..m)
                .filter_map(|b| {
                    let v = fibre.kappa(c, b, e).as_constant().unwrap();
                    (!v.is_zero()).then_some((b, v))
                })
                .collect();
            rows.push(row);
        }
    }
    if linalg::rank(m, &rows) != m {
        return Err(Error::contract("ad is not injective on the fibre"));
    }
    let mut targets: BTreeMap<(Mask, Monomial), Vec<Rational>> = BTreeMap::new();
    for ((ec, mask), p) in d.components() {
        let (e, c) = (ec / m, ec % m);
        for (mono, v) in p.terms() {
            targets
                .entry((*mask, mono.clone()))
                .or_insert_with(|| vec![Rational::zero(); m * m])[c * m + e] = v.clone();
        }
    }
    let mut out = VForm::zero(n, m, d.degree());
    for ((mask, mono), rhs) in targets {
        let x = linalg::solve(m, &rows, &rhs)
            .ok_or_else(|| Error::contract("form is not of the shape ad(γ)"))?;
        for (b, v) in x.into_iter().enumerate() {
            if !v.is_zero() {
                out.add_component(b, mask, &Poly::monomial(mono.clone(), v));
            }
        }
    }
    Ok(out)
}

/// The curving forced by `R = −ad F` when the ideal is semisimple.
pub fn unique_curving(imc: &IMConnection) -> Result<VForm> {
    let ideal = imc.ideal();
    let rep = check_semisimple(ideal)?;
    if let Some(f) = rep.failures().next() {
        return Err(Error::contract(format!("ideal is not semisimple: {}", f.detail)));
    }
    let f = ad_inverse(ideal, &imc.coupling_connection().curvature())?;
    if delta0(ideal, &f)? != curvature(imc)? {
        return Err(Error::contract("curvature admits no curving"));
    }
    Ok(f)
}

/// The IM connection `C(α) = ∇(vα) + ι_{ρα}F` with `F` solving `R = −ad F`.
pub fn primitive_from_pair(
    ideal: &IdealBundle,
    symbol: &[Vec<Poly>],
    conn: &LinearConnection,
) -> Result<(IMConnection, VForm)> {
    let alg = ideal.algebroid();
    let (n, r, m) = (alg.chart_dim(), alg.rank(), ideal.rank());
    if symbol.len() != r || symbol.iter().any(|v| v.len() != m) || conn.rank() != m {
        return Err(Error::structural("splitting data does not match the ideal"));
    }
    let f = ad_inverse(ideal, &conn.curvature())?;
    let mut c = WeilCochain::zero(n, r, m, 1, 1);
    for (i, v) in symbol.iter().enumerate() {
        let v = VForm::from_section(n, v);
        if c.has_component(0) {
            let w = conn.dnabla(&v)?.add(&f.interior(&alg.anchor_basis(i)));
            c.set(0, &[i], &[], w);
        }
        c.set(1, &[], &[i], v);
    }
    let imc = IMConnection::new(ideal.clone(), c)?;
    Ok((imc, f))
}

/// Conditions for `(v, ∇, F)` to come from a primitive when 𝔨 is abelian.
pub fn abelian_primitive_check(
    ideal: &IdealBundle,
    symbol: &[Vec<Poly>],
    conn: &LinearConnection,
    f: &VForm,
) -> Result<Report> {
    let alg = ideal.algebroid();
    let (n, r, m) = (alg.chart_dim(), alg.rank(), ideal.rank());
    if !ideal.is_abelian() {
        return Err(Error::contract("ideal is not abelian"));
    }
    if symbol.len() != r || symbol.iter().any(|v| v.len() != m) || conn.rank() != m {
        return Err(Error::structural("splitting data does not match the ideal"));
    }
    if f.rank() != m || f.degree() != 2 {
        return Err(Error::structural("F must be a 𝔨-valued 2-form"));
    }
    let symbol_of = |s: &Section| -> Vec<Poly> {
        let mut out = vec![Poly::zero(n); m];
        for (i, coef) in s.0.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(&symbol[i]) {
                o.add_assign_ref(&(coef * v));
            }
        }
        out
    };
    let h = |i: usize| alg.basis(i).sub(&ideal.include(&symbol[i]));
    let mut rep = Report::new();
    verdict(&mut rep, "R == 0", conn.is_flat(), "connection is not flat");

    let mut bad = Vec::new();
    for i in ideal.complement() {
        let x = alg.anchor_basis(i);
        for c in 0..m {
            let xi = unit(n, m, c);
            let br = alg.bracket(&h(i), &ideal.include(&xi))?;
            if br != ideal.include(&conn.covariant(&x, &xi)) {
                bad.push(format!("(e{},u{})", i + 1, c + 1));
            }
        }
    }
    verdict(
        &mut rep,
        "nabla induces nabla^B",
        bad.is_empty(),
        &format!("fails on {}", bad.join(", ")),
    );

    let mut bad = Vec::new();
    let comp = ideal.complement();
    for (t, &i) in comp.iter().enumerate() {
        for &j in &comp[t + 1..] {
            let lhs: Vec<Poly> = symbol_of(&alg.bracket(&h(i), &h(j))?)
                .into_iter()
                .map(|p| -p)
                .collect();
            let rhs = f
                .interior(&alg.anchor_basis(i))
                .interior(&alg.anchor_basis(j))
                .to_section();
            if lhs != rhs {
                bad.push(format!("(e{},e{})", i + 1, j + 1));
            }
        }
    }
    verdict(
        &mut rep,
        "F^v == rho^* F",
        bad.is_empty(),
        &format!("fails on {}", bad.join(", ")),
    );

    let df = conn.dnabla(f)?;
    let bad: Vec<String> = (0..r)
        .filter(|&i| !df.interior(&alg.anchor_basis(i)).is_zero())
        .map(|i| format!("e{}", i + 1))
        .collect();
    verdict(
        &mut rep,
        "iota_rho dnabla F == 0",
        bad.is_empty(),
        &format!("fails on {}", bad.join(", ")),
    );
    Ok(rep)
}
