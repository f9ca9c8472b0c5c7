use weilform::algebroid::{AlgebroidPresentation, Section, VForm};
use weilform::connections::{LinearConnection, SymForm};
use weilform::fixtures::{fixture, so3, RandomData};
use weilform::ideals::{
    abelian_primitive_check, ad_inverse, bianchi_check, build_coupled, c2, check_semisimple,
    coupling_checks, curvature, curving_suite, deform, dhor, hstar, obstruction_cocycle,
    primitive_from_pair, wedgedot, wedgedot_multiple, CouplingTriple, IMConnection,
};
use weilform::poly::{int, rat, Poly};
use weilform::weil::{delta, dnabla_cochain, WeilCochain};

fn xy(s: &str) -> Poly {
    Poly::parse(s, &["x".to_string(), "y".to_string()]).unwrap()
}

fn delta0(imc: &IMConnection, w: &VForm) -> WeilCochain {
    let alg = imc.algebroid();
    delta(alg, &imc.ideal().adjoint_rep(), &WeilCochain::from_form(alg.rank(), w)).unwrap()
}

/// `Σ_i (−1)^i γ(ϑ(X_i))(X_0, …, X̂_i, …)` on coordinate fields.
fn pair_one<G>(imc: &IMConnection, gamma: G, theta: &VForm, dirs: &[usize], comp: usize) -> Poly
where
    G: Fn(Section) -> VForm,
{
    let n = imc.algebroid().chart_dim();
    let m = imc.ideal().rank();
    let mut acc = Poly::zero(n);
    for i in 0..dirs.len() {
        let xi: Vec<Poly> = (0..m).map(|b| theta.eval_coord(b, &dirs[i..=i])).collect();
        let rest: Vec<usize> = dirs.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &d)| d).collect();
        let term = gamma(imc.ideal().include(&xi)).eval_coord(comp, &rest);
        if i % 2 == 0 {
            acc.add_assign_ref(&term);
        } else {
            acc.sub_assign_ref(&term);
        }
    }
    acc
}

fn perturbed_f2(seed: u64) -> IMConnection {
    let f2 = fixture("F2_semisimple_2d").unwrap();
    RandomData::new(seed).with_bound(1).perturbed_imc(&f2.coupled.imc)
}

#[test]
fn pairing_of_one_forms() {
    let f2 = fixture("F2_semisimple_2d").unwrap();
    let imc = &f2.coupled.imc;
    let ideal = imc.ideal();
    for seed in 0..6 {
        let mut rd = RandomData::new(seed);
        let g = rd.sym_form(2, 5, 3, 1, 1);
        let theta = rd.form(2, 3, 1);
        let got = wedgedot(ideal, &g, &theta).unwrap().get(&[]);
        for comp in 0..3 {
            let expect = pair_one(imc, |s| g.eval(&[s]), &theta, &[0, 1], comp);
            assert_eq!(got.eval_coord(comp, &[0, 1]), expect);
        }
    }
    let g = SymForm::zero(2, 5, 3, 1, 0);
    assert!(wedgedot(ideal, &g, &RandomData::new(0).form(2, 3, 1)).is_err());
}

#[test]
fn hstar_matches_level_one_formula() {
    for seed in 0..8 {
        let imc = perturbed_f2(seed);
        let alg = imc.algebroid();
        let (n, r) = (alg.chart_dim(), alg.rank());
        let q = 1 + (seed as usize % 2);
        let c = RandomData::new(seed + 100).cochain(alg, 3, 1, q);
        let h = hstar(&imc, &c).unwrap();
        let dirs: Vec<usize> = (0..q).collect();
        for i in 0..r {
            let a = Section::basis(n, r, i);
            let lead = imc.leading_of(&a);
            let got = h.get(0, &[i], &[]);
            let c0 = c.get(0, &[i], &[]);
            for comp in 0..3 {
                let corr = pair_one(&imc, |s| c.evaluate(1, &[], &[s]).unwrap(), &lead, &dirs, comp);
                assert_eq!(got.eval_coord(comp, &dirs), c0.eval_coord(comp, &dirs) - corr);
            }
            let hb = imc.horizontal(&a);
            assert_eq!(h.get(1, &[], &[i]), c.evaluate(1, &[], &[hb]).unwrap());
        }
    }
}

fn sym_slice(c: &WeilCochain, k: usize, antis: &[Section], fixed: &[Section]) -> SymForm {
    let (n, r) = (c.chart_dim(), c.alg_rank());
    let free = k - fixed.len();
    let mut out = SymForm::zero(n, r, c.value_rank(), c.degree() - k, free);
    for ms in weilform::connections::multisets(r, free) {
        let mut syms = fixed.to_vec();
        syms.extend(ms.iter().map(|&l| Section::basis(n, r, l)));
        out.add(ms, &c.evaluate(k, antis, &syms).unwrap());
    }
    out
}

#[test]
fn hstar_matches_level_two_formula() {
    for seed in 0..6 {
        let imc = perturbed_f2(seed);
        let ideal = imc.ideal();
        let alg = imc.algebroid();
        let (n, r) = (alg.chart_dim(), alg.rank());
        let c = RandomData::new(seed + 200).cochain(alg, 3, 2, 2);
        let h = hstar(&imc, &c).unwrap();
        let b = |i: usize| Section::basis(n, r, i);
        for i in 0..r {
            for j in i + 1..r {
                let (l1, l2) = (imc.leading_of(&b(i)), imc.leading_of(&b(j)));
                let pairs = wedgedot_multiple(ideal, &sym_slice(&c, 2, &[], &[]), &[l1.clone(), l2.clone()])
                    .unwrap()
                    .get(&[]);
                let got = h.get(0, &[i, j], &[]);
                for comp in 0..3 {
                    let p1 = pair_one(&imc, |s| c.evaluate(1, &[b(j)], &[s]).unwrap(), &l1, &[0, 1], comp);
                    let p2 = pair_one(&imc, |s| c.evaluate(1, &[b(i)], &[s]).unwrap(), &l2, &[0, 1], comp);
                    let expect = c.get(0, &[i, j], &[]).eval_coord(comp, &[0, 1]) - (p1 - p2)
                        + pairs.eval_coord(comp, &[0, 1]);
                    assert_eq!(got.eval_coord(comp, &[0, 1]), expect, "seed {seed} ({i},{j})");
                }
            }
        }
        for i in 0..r {
            let lead = imc.leading_of(&b(i));
            for j in 0..r {
                let hb = imc.horizontal(&b(j));
                let got = h.get(1, &[i], &[j]);
                for comp in 0..3 {
                    let corr = pair_one(&imc, |s| c.evaluate(2, &[], &[hb.clone(), s]).unwrap(), &lead, &[0], comp);
                    let expect = c.evaluate(1, &[b(i)], &[hb.clone()]).unwrap().eval_coord(comp, &[0]) - corr;
                    assert_eq!(got.eval_coord(comp, &[0]), expect);
                }
            }
            for j in i..r {
                let expect = c
                    .evaluate(2, &[], &[imc.horizontal(&b(i)), imc.horizontal(&b(j))])
                    .unwrap();
                assert_eq!(h.get(2, &[], &[i, j]), expect);
            }
        }
    }
}

#[test]
fn hstar_and_d_examples() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let imc = &f1.coupled.imc;
    assert!(hstar(imc, imc.cochain()).unwrap().is_zero());
    for seed in 0..5 {
        let l = delta0(imc, &RandomData::new(seed).form(2, 1, 1));
        assert_eq!(hstar(imc, &l).unwrap(), l);
        let w = RandomData::new(seed + 50).form(2, 1, 1);
        let lhs = dhor(imc, &delta0(imc, &w)).unwrap();
        let rhs = delta0(imc, &imc.coupling_connection().dnabla(&w).unwrap());
        assert_eq!(lhs, rhs);
    }
    assert_eq!(dhor(imc, imc.cochain()).unwrap(), curvature(imc).unwrap());
    let d = dnabla_cochain(&imc.coupling_connection(), imc.cochain()).unwrap();
    assert_eq!(hstar(imc, &d).unwrap(), curvature(imc).unwrap());
}

#[test]
fn curvature_examples() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let imc = &f1.coupled.imc;
    let omega = curvature(imc).unwrap();
    assert_eq!(omega.get(0, &[0], &[]), VForm::basic(Poly::one(2), &[0, 1], 1, 0));
    assert_eq!(omega.get(1, &[], &[0]), VForm::basic(xy("x"), &[1], 1, 0));
    assert_eq!(omega, delta0(imc, &f1.coupled.curving));

    let f2 = fixture("F2_semisimple_2d").unwrap();
    let imc = &f2.coupled.imc;
    let omega = curvature(imc).unwrap();
    let ad3 = imc.ideal().fibre().ad(&[Poly::zero(2), Poly::zero(2), Poly::one(2)]);
    for (a, &k) in imc.ideal().indices().iter().enumerate() {
        let mut e = vec![Poly::zero(2); 3];
        e[a] = Poly::one(2);
        let expect = VForm::scalar(Poly::one(2), &[0, 1]).tensor_section(&ad3.apply(&e));
        assert_eq!(omega.get(0, &[k], &[]), expect);
        assert!(omega.get(1, &[], &[k]).is_zero());
    }
    for name in ["F1_abelian_2d", "F2_semisimple_2d", "F3_foliation_4d"] {
        assert!(bianchi_check(&fixture(name).unwrap().coupled.imc).unwrap().all_passed());
    }
}

#[test]
fn deformation_examples() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let imc = &f1.coupled.imc;
    let l = delta0(imc, &VForm::basic(xy("y"), &[0], 1, 0));
    assert_eq!(curvature(&deform(imc, &l, &int(0)).unwrap()).unwrap(), curvature(imc).unwrap());
    let deformed = deform(imc, &l, &int(1)).unwrap();
    let expect = delta0(imc, &VForm::basic(xy("x - 1"), &[0, 1], 1, 0));
    assert_eq!(curvature(&deformed).unwrap(), expect);
    assert!(deform(imc, imc.cochain(), &int(1)).is_err());

    let f2 = fixture("F2_semisimple_2d").unwrap();
    let imc = &f2.coupled.imc;
    let gamma = VForm::basic(Poly::one(2), &[0], 3, 0).add(&VForm::basic(Poly::one(2), &[1], 3, 1));
    let l = delta0(imc, &gamma);
    let sq = imc.ideal().fibre().bracket_forms(&gamma, &gamma);
    assert_eq!(c2(imc.ideal(), &l).unwrap(), delta0(imc, &sq).scale(&rat(-1, 2)));
    assert!(!sq.is_zero());
}

#[test]
fn obstruction_examples() {
    for name in ["F1_abelian_2d", "F2_semisimple_2d"] {
        let f = fixture(name).unwrap();
        let ideal = f.coupled.ideal();
        let t = CouplingTriple::from_imc(&f.coupled.imc);
        assert!(obstruction_cocycle(ideal, &t).unwrap().is_zero());
        let mut bad = t.clone();
        let e = ideal.indices()[0];
        bad.u.insert(e, VForm::zero(2, ideal.rank(), 1));
        assert!(bad.cochain(ideal).is_err());
    }
}

#[test]
fn coupling_examples() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let rep = coupling_checks(&f1.coupled.imc).unwrap();
    assert!(rep.all_passed(), "{:?}", rep.summary_lines());

    let f2 = fixture("F2_semisimple_2d").unwrap();
    let ideal = f2.coupled.ideal();
    let mut t = CouplingTriple::from_imc(&f2.coupled.imc);
    for u in t.u.values_mut() {
        *u = VForm::zero(2, 3, 1);
    }
    let zeroed = IMConnection::new_unchecked(ideal.clone(), t.cochain(ideal).unwrap()).unwrap();
    let rep = coupling_checks(&zeroed).unwrap();
    assert!(!rep.passed("S.2"));

    // F = 0 with a flat bracket-preserving connection: a semidirect product.
    let b = AlgebroidPresentation::tangent(2);
    let semi = build_coupled(&b, &so3(2), &LinearConnection::trivial(2, 3), &VForm::zero(2, 3, 2)).unwrap();
    assert!(semi.algebroid().validate().all_passed());
    let omega = curvature(&semi.imc).unwrap();
    for i in semi.ideal().complement() {
        assert!(omega.get(0, &[i], &[]).is_zero());
        assert!(omega.get(1, &[], &[i]).is_zero());
    }
}

#[test]
fn curving_examples() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let rep = curving_suite(&f1.coupled.imc, &f1.coupled.curving, None).unwrap();
    assert!(rep.all_passed());
    assert!(f1.coupled.conn.dnabla(&f1.coupled.curving).unwrap().is_zero());
    let beta = VForm::basic(xy("y"), &[0, 1], 1, 0);
    let rep = curving_suite(&f1.coupled.imc, &f1.coupled.curving.add(&beta), None).unwrap();
    assert!(!rep.passed("delta0 F == Omega"));

    let f3 = fixture("F3_foliation_4d").unwrap();
    let rep = curving_suite(&f3.coupled.imc, &f3.coupled.curving, None).unwrap();
    assert!(rep.all_passed());
    let g = f3.coupled.conn.dnabla(&f3.coupled.curving).unwrap();
    assert_eq!(g, VForm::basic(Poly::one(4), &[1, 2, 3], 1, 0));
}

#[test]
fn semisimple_examples() {
    let so3_fx = fixture("F0_so3").unwrap();
    assert!(check_semisimple(so3_fx.coupled.ideal()).unwrap().all_passed());
    let f2 = fixture("F2_semisimple_2d").unwrap();
    let ideal = f2.coupled.ideal();
    let ad3 = ideal.fibre().ad(&[Poly::zero(2), Poly::zero(2), Poly::one(2)]);
    let neg_ad_dx = VForm::scalar(Poly::one(2), &[0]).tensor_section(&ad3.flatten()).neg();
    assert_eq!(ad_inverse(ideal, &neg_ad_dx).unwrap(), VForm::basic(Poly::one(2), &[0], 3, 2));

    let symbol: Vec<Vec<Poly>> = (0..5).map(|i| f2.coupled.imc.symbol(i)).collect();
    let (imc, f) = primitive_from_pair(ideal, &symbol, &f2.coupled.conn).unwrap();
    assert_eq!(f, f2.coupled.curving);
    assert_eq!(&imc, &f2.coupled.imc);

    let f1 = fixture("F1_abelian_2d").unwrap();
    assert!(!check_semisimple(f1.coupled.ideal()).unwrap().all_passed());
    assert!(ad_inverse(f1.coupled.ideal(), &VForm::zero(2, 1, 1)).is_err());
}

#[test]
fn abelian_check_examples() {
    for name in ["F1_abelian_2d", "F3_foliation_4d"] {
        let f = fixture(name).unwrap();
        let ideal = f.coupled.ideal();
        let r = ideal.algebroid().rank();
        let symbol: Vec<Vec<Poly>> = (0..r).map(|i| f.coupled.imc.symbol(i)).collect();
        let rep = abelian_primitive_check(ideal, &symbol, &f.coupled.conn, &f.coupled.curving).unwrap();
        assert!(rep.all_passed(), "{name}: {:?}", rep.summary_lines());
    }
    let f1 = fixture("F1_abelian_2d").unwrap();
    let ideal = f1.coupled.ideal();
    let symbol: Vec<Vec<Poly>> = (0..3).map(|i| f1.coupled.imc.symbol(i)).collect();
    let bent = LinearConnection::trivial(2, 1).shifted(&VForm::basic(xy("x"), &[1], 1, 0)).unwrap();
    let rep = abelian_primitive_check(ideal, &symbol, &bent, &f1.coupled.curving).unwrap();
    assert!(!rep.passed("R == 0"));

    let f2 = fixture("F2_semisimple_2d").unwrap();
    let symbol: Vec<Vec<Poly>> = (0..5).map(|i| f2.coupled.imc.symbol(i)).collect();
    let ideal = f2.coupled.ideal();
    assert!(abelian_primitive_check(ideal, &symbol, &f2.coupled.conn, &f2.coupled.curving).is_err());
}
