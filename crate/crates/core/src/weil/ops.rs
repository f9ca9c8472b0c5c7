use crate::algebroid::{AlgebroidPresentation, Section, VForm};
use crate::connections::{ARep, InvarianceForm, LinearConnection};
use crate::error::{Error, Result};
use crate::report::Report;

use super::{increasing_tuples, WeilCochain};
use crate::connections::multisets;

fn without(v: &[usize], pos: usize) -> Vec<usize> {
    let mut out = v.to_vec();
    out.remove(pos);
    out
}

fn check_alg(alg: &AlgebroidPresentation, c: &WeilCochain) -> Result<()> {
    if alg.rank() != c.alg_rank() || alg.chart_dim() != c.chart_dim() {
        return Err(Error::structural("cochain lives over a different algebroid"));
    }
    Ok(())
}

/// The simplicial differential `δ: W^{p,q} → W^{p+1,q}`.
pub fn delta(alg: &AlgebroidPresentation, rep: &ARep, c: &WeilCochain) -> Result<WeilCochain> {
    check_alg(alg, c)?;
    if rep.rank() != c.value_rank() || rep.algebroid_rank() != alg.rank() {
        return Err(Error::structural(
            "representation does not act on the cochain's value bundle",
        ));
    }
    let (n, r, m, p, q) = (c.n, c.r, c.m, c.p, c.q);
    let mut out = WeilCochain::zero(n, r, m, p + 1, q);
    for k in out.valid_components() {
        let alen = p + 1 - k;
        for ii in increasing_tuples(r, alen) {
            for jj in multisets(r, k) {
                let mut val = VForm::zero(n, m, q - k);
                if c.has_component(k) {
                    for i in 0..alen {
                        let rest = without(&ii, i);
                        let ck = c.get(k, &rest, &jj);
                        if !ck.is_zero() {
                            let lie = rep.lie_basis(alg, ii[i], &ck);
                            if i % 2 == 0 {
                                val.add_assign(&lie);
                            } else {
                                val.sub_assign(&lie);
                            }
                        }
                        // symmetric-slot bracket insertions of L^A
                        for s in 0..k {
                            for l in 0..r {
                                let f = alg.c(ii[i], jj[s], l);
                                if f.is_zero() {
                                    continue;
                                }
                                let mut j2 = jj.clone();
                                j2[s] = l;
                                let w = c.get(k, &rest, &j2).mul_poly(f);
                                if i % 2 == 0 {
                                    val.sub_assign(&w);
                                } else {
                                    val.add_assign(&w);
                                }
                            }
                        }
                    }
                    // bracket terms through evaluate
                    for i in 0..alen {
                        for j in i + 1..alen {
                            let br = alg.basis_bracket(ii[i], ii[j]);
                            if br.is_zero() {
                                continue;
                            }
                            let mut args = vec![br];
                            for (t, &x) in ii.iter().enumerate() {
                                if t != i && t != j {
                                    args.push(alg.basis(x));
                                }
                            }
                            let syms: Vec<Section> = jj.iter().map(|&x| alg.basis(x)).collect();
                            let w = c.evaluate(k, &args, &syms)?;
                            if (i + j) % 2 == 0 {
                                val.add_assign(&w);
                            } else {
                                val.sub_assign(&w);
                            }
                        }
                    }
                }
                if k >= 1 && c.has_component(k - 1) {
                    for s in 0..k {
                        let rest = without(&jj, s);
                        let w = c.get(k - 1, &ii, &rest);
                        if !w.is_zero() {
                            val.sub_assign(&w.interior(&alg.anchor_basis(jj[s])));
                        }
                    }
                }
                if k % 2 == 1 {
                    val = val.neg();
                }
                out.set(k, &ii, &jj, val);
            }
        }
    }
    Ok(out)
}

/// Exterior covariant derivative of cochains `d^∇: W^{p,q} → W^{p,q+1}`.
pub fn dnabla_cochain(conn: &LinearConnection, c: &WeilCochain) -> Result<WeilCochain> {
    if conn.rank() != c.value_rank() || conn.chart_dim() != c.chart_dim() {
        return Err(Error::structural(
            "connection does not act on the cochain's value bundle",
        ));
    }
    let (n, r, m, p, q) = (c.n, c.r, c.m, c.p, c.q);
    let mut out = WeilCochain::zero(n, r, m, p, q + 1);
    for k in out.valid_components() {
        for ii in increasing_tuples(r, p - k) {
            for jj in multisets(r, k) {
                let mut val = if c.has_component(k) {
                    conn.dnabla(&c.get(k, &ii, &jj))?
                } else {
                    VForm::zero(n, m, q + 1 - k)
                };
                if k >= 1 {
                    for s in 0..k {
                        let mut anti = vec![jj[s]];
                        anti.extend(&ii);
                        val.sub_assign(&c.get(k - 1, &anti, &without(&jj, s)));
                    }
                }
                if k % 2 == 1 {
                    val = val.neg();
                }
                out.set(k, &ii, &jj, val);
            }
        }
    }
    Ok(out)
}

/// `(T,θ) ∧ c`, raising level and degree by one.
pub fn wedge_ttheta(tt: &InvarianceForm, c: &WeilCochain) -> Result<WeilCochain> {
    if tt.m != c.value_rank() || tt.theta.len() != c.alg_rank() {
        return Err(Error::structural(
            "invariance form does not match the cochain's value bundle",
        ));
    }
    let (n, r, m, p, q) = (c.n, c.r, c.m, c.p, c.q);
    let mut out = WeilCochain::zero(n, r, m, p + 1, q + 1);
    for k in out.valid_components() {
        let alen = p + 1 - k;
        for ii in increasing_tuples(r, alen) {
            for jj in multisets(r, k) {
                let mut val = VForm::zero(n, m, q + 1 - k);
                if c.has_component(k) {
                    for i in 0..alen {
                        let ck = c.get(k, &without(&ii, i), &jj);
                        if ck.is_zero() {
                            continue;
                        }
                        let w = tt.t_wedge(ii[i], &ck);
                        if i % 2 == 0 {
                            val.add_assign(&w);
                        } else {
                            val.sub_assign(&w);
                        }
                    }
                }
                if k >= 1 {
                    for s in 0..k {
                        let w = c.get(k - 1, &ii, &without(&jj, s));
                        if !w.is_zero() {
                            val.add_assign(&w.apply_matrix(&tt.theta[jj[s]]));
                        }
                    }
                }
                out.set(k, &ii, &jj, val);
            }
        }
    }
    Ok(out)
}

/// `(T,θ)` as a cochain in `W^{1,1}(A; End V)`.
pub fn invariance_cochain(alg: &AlgebroidPresentation, tt: &InvarianceForm) -> WeilCochain {
    let n = alg.chart_dim();
    let mut c = WeilCochain::zero(n, alg.rank(), tt.m * tt.m, 1, 1);
    for i in 0..alg.rank() {
        if c.has_component(0) {
            c.set(0, &[i], &[], tt.t[i].clone());
        }
        c.set(1, &[], &[i], VForm::from_section(n, &tt.theta[i].flatten()));
    }
    c
}

/// Compatibility conditions (C.1)–(C.3) of a level-1 cochain, checked on all
/// frame pairs.
pub fn check_im(alg: &AlgebroidPresentation, rep: &ARep, c: &WeilCochain) -> Result<Report> {
    check_alg(alg, c)?;
    if c.level() != 1 {
        return Err(Error::structural("compatibility conditions need a level-1 cochain"));
    }
    let r = alg.rank();
    let mut rep_out = Report::new();

    let mut bad = Vec::new();
    if c.has_component(0) {
        for i in 0..r {
            for j in i + 1..r {
                let lhs = c.evaluate(0, &[alg.basis_bracket(i, j)], &[])?;
                let rhs = rep
                    .lie_basis(alg, i, &c.get(0, &[j], &[]))
                    .sub(&rep.lie_basis(alg, j, &c.get(0, &[i], &[])));
                if lhs != rhs {
                    bad.push(format!("(e{},e{})", i + 1, j + 1));
                }
            }
        }
    }
    rep_out.push("C.1", bad.is_empty(), failing("C.1", &bad));

    let mut bad = Vec::new();
    if c.has_component(1) {
        for i in 0..r {
            for j in 0..r {
                let lhs = c.evaluate(1, &[], &[alg.basis_bracket(i, j)])?;
                let mut rhs = rep.lie_basis(alg, i, &c.get(1, &[], &[j]));
                if c.has_component(0) {
                    rhs.sub_assign(&c.get(0, &[i], &[]).interior(&alg.anchor_basis(j)));
                }
                if lhs != rhs {
                    bad.push(format!("(e{},e{})", i + 1, j + 1));
                }
            }
        }
    }
    rep_out.push("C.2", bad.is_empty(), failing("C.2", &bad));

    let mut bad = Vec::new();
    if c.has_component(1) {
        for i in 0..r {
            for j in i..r {
                let a = c.get(1, &[], &[j]).interior(&alg.anchor_basis(i));
                let b = c.get(1, &[], &[i]).interior(&alg.anchor_basis(j));
                if !a.add(&b).is_zero() {
                    bad.push(format!("(e{},e{})", i + 1, j + 1));
                }
            }
        }
    }
    rep_out.push("C.3", bad.is_empty(), failing("C.3", &bad));
    Ok(rep_out)
}

fn failing(name: &str, bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("{name} fails on {}", bad.join(", "))
    }
}

/// Correction terms vanish whenever a symmetric slot receives a frame
/// section of the ideal spanned by `ideal`.
pub fn is_horizontal(c: &WeilCochain, ideal: &[usize]) -> bool {
    (1..=c.level()).all(|k| {
        c.entries(k)
            .all(|((_, j), _)| !j.iter().any(|x| ideal.contains(x)))
    })
}
