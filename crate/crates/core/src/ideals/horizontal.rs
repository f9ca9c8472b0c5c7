//! Horizontal projection, the horizontal differential and curvature.

use crate::algebroid::{Section, VForm};
use crate::connections::{curvature_apply, multisets};
use crate::error::{Error, Result};
use crate::poly::Rational;
use crate::report::Report;
use crate::weil::{check_im, delta, dnabla_cochain, increasing_tuples, is_horizontal, WeilCochain};

use super::pairing::pair_cochain;
use super::{IMConnection, IdealBundle};

fn shuffle_negative(chosen: &[usize]) -> bool {
    chosen.iter().enumerate().map(|(t, s)| s - t).sum::<usize>() % 2 == 1
}

/// The horizontal projection `h^*` determined by an IM connection.
pub fn hstar(imc: &IMConnection, c: &WeilCochain) -> Result<WeilCochain> {
    let alg = imc.algebroid();
    if c.alg_rank() != alg.rank() || c.chart_dim() != alg.chart_dim() {
        return Err(Error::structural("cochain lives over a different algebroid"));
    }
    let ideal = imc.ideal();
    let (n, r, m, p, q) = (
        c.chart_dim(),
        c.alg_rank(),
        c.value_rank(),
        c.level(),
        c.degree(),
    );
    let hbasis: Vec<Section> = (0..r).map(|i| imc.horizontal_basis(i)).collect();
    let lead: Vec<VForm> = (0..r).map(|i| imc.leading(i)).collect();
    let mut out = WeilCochain::zero(n, r, m, p, q);
    for k in out.valid_components() {
        for ii in increasing_tuples(r, p - k) {
            for jj in multisets(r, k) {
                let mut val = VForm::zero(n, m, q - k);
                let mut syms: Vec<Section> = jj.iter().map(|&j| hbasis[j].clone()).collect();
                if syms.iter().any(Section::is_zero) {
                    continue;
                }
                for j in k..=p {
                    if !c.has_component(j) {
                        continue;
                    }
                    for chosen in increasing_tuples(ii.len(), j - k) {
                        let antis: Vec<Section> = (0..ii.len())
                            .filter(|t| !chosen.contains(t))
                            .map(|t| alg.basis(ii[t]))
                            .collect();
                        let thetas: Vec<VForm> = chosen.iter().map(|&t| lead[ii[t]].clone()).collect();
                        let w = pair_cochain(ideal, c, j, &antis, &mut syms, &thetas)?;
                        if w.is_zero() {
                            continue;
                        }
                        if ((j - k) % 2 == 1) != shuffle_negative(&chosen) {
                            val.sub_assign(&w);
                        } else {
                            val.add_assign(&w);
                        }
                    }
                }
                out.set(k, &ii, &jj, val);
            }
        }
    }
    Ok(out)
}

/// The horizontal differential `D = h^* ∘ d^∇`.
pub fn dhor(imc: &IMConnection, c: &WeilCochain) -> Result<WeilCochain> {
    let conn = imc.coupling_connection();
    hstar(imc, &dnabla_cochain(&conn, c)?)
}

/// `Ω = D(C, v)`
pub fn curvature(imc: &IMConnection) -> Result<WeilCochain> {
    dhor(imc, imc.cochain())
}

/// `Ω(α) = (R·v(α) − d^∇U(hα), −U(hα))`
pub fn curvature_explicit(imc: &IMConnection) -> Result<WeilCochain> {
    let alg = imc.algebroid();
    let (n, r, m) = (alg.chart_dim(), alg.rank(), imc.ideal().rank());
    let conn = imc.coupling_connection();
    let mut out = WeilCochain::zero(n, r, m, 1, 2);
    for i in 0..r {
        let u = imc.u_of(&alg.basis(i));
        if out.has_component(0) {
            let mut w = curvature_apply(&conn, &imc.symbol(i));
            w.sub_assign(&conn.dnabla(&u)?);
            out.set(0, &[i], &[], w);
        }
        if out.has_component(1) {
            out.set(1, &[], &[i], u.neg());
        }
    }
    Ok(out)
}

/// `D(Ω) = 0`, and agreement of the two curvature formulas.
pub fn bianchi_check(imc: &IMConnection) -> Result<Report> {
    let omega = curvature(imc)?;
    let mut rep = Report::new();
    let explicit = curvature_explicit(imc)?;
    rep.push(
        "Omega explicit",
        omega == explicit,
        if omega == explicit {
            ""
        } else {
            "D(C,v) differs from (R v - d U, -U)"
        },
    );
    let d_omega = dhor(imc, &omega)?;
    rep.push(
        "D(Omega) == 0",
        d_omega.is_zero(),
        if d_omega.is_zero() {
            String::new()
        } else {
            format!("{} nonzero entries", d_omega.size())
        },
    );
    Ok(rep)
}

/// `(C, v) + λ(L, l)` for a horizontal IM form `(L, l)`.
pub fn deform(imc: &IMConnection, l: &WeilCochain, lambda: &Rational) -> Result<IMConnection> {
    let ideal = imc.ideal();
    if !l.same_shape(imc.cochain()) {
        return Err(Error::structural("deformation must be a 𝔨-valued cochain in W^(1,1)"));
    }
    if !is_horizontal(l, ideal.indices()) {
        return Err(Error::contract("deformation is not horizontal"));
    }
    let rep = check_im(imc.algebroid(), &ideal.adjoint_rep(), l)?;
    if let Some(f) = rep.failures().next() {
        return Err(Error::contract(format!("deformation is not an IM form: {}", f.detail)));
    }
    let shifted = imc.shifted(l, lambda)?;
    IMConnection::new(ideal.clone(), shifted.cochain().clone())
}

/// The quadratic term `c2(L, l)(α) = −(L|_𝔨 ⋅∧ Lα, L|_𝔨 · lα)`.
pub fn c2(ideal: &IdealBundle, l: &WeilCochain) -> Result<WeilCochain> {
    let alg = ideal.algebroid();
    let (n, r, m) = (alg.chart_dim(), alg.rank(), ideal.rank());
    if l.alg_rank() != r || l.value_rank() != m || l.level() != 1 || l.degree() != 1 {
        return Err(Error::structural("c2 needs a 𝔨-valued cochain in W^(1,1)"));
    }
    let restricted: Vec<VForm> = ideal.indices().iter().map(|&k| l.get(0, &[k], &[])).collect();
    let mut out = WeilCochain::zero(n, r, m, 1, 2);
    for i in 0..r {
        if out.has_component(0) {
            let li = l.get(0, &[i], &[]);
            let mut w = VForm::zero(n, m, 2);
            for (b, lb) in restricted.iter().enumerate() {
                let s = li.value_component(b);
                if !s.is_zero() {
                    w.sub_assign(&VForm::wedge_scalar_left(&s, lb));
                }
            }
            out.set(0, &[i], &[], w);
        }
        if out.has_component(1) {
            let sym = l.get(1, &[], &[i]);
            let mut w = VForm::zero(n, m, 1);
            for (b, lb) in restricted.iter().enumerate() {
                let s = sym.get(b, 0);
                if !s.is_zero() {
                    w.sub_assign(&lb.mul_poly(&s));
                }
            }
            out.set(1, &[], &[i], w);
        }
    }
    Ok(out)
}

/// `δ(C, v)` for the cochain assembled from a coupling triple.
pub fn obstruction_cocycle(ideal: &IdealBundle, triple: &super::CouplingTriple) -> Result<WeilCochain> {
    let c = triple.cochain(ideal)?;
    delta(ideal.algebroid(), &ideal.adjoint_rep(), &c)
}
