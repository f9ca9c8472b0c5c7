use proptest::prelude::*;

use weilform::algebroid::{Section, VForm};
use weilform::connections::{ARep, InvarianceForm, LinearConnection};
use weilform::fixtures::{all_fixtures, fixture, RandomData};
use weilform::poly::Poly;
use weilform::weil::solve::{cocycle_basis, solve_coboundary};
use weilform::weil::{check_im, delta, dnabla_cochain, wedge_ttheta, WeilCochain};

fn xy(s: &str) -> Poly {
    Poly::parse(s, &["x".to_string(), "y".to_string()]).unwrap()
}

#[test]
fn leading_term_is_leibniz_forced() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let c = f1.coupled.imc.cochain();
    let e = f1.coupled.ideal().indices()[0];
    let y_e = Section::basis(2, 3, e).scale_poly(&xy("y"));
    assert_eq!(c.evaluate(0, &[y_e], &[]).unwrap(), VForm::basic(Poly::one(2), &[1], 1, 0));
}

#[test]
fn evaluate_on_basis_reads_tables() {
    for f in all_fixtures() {
        let alg = f.coupled.algebroid();
        let (n, r) = (alg.chart_dim(), alg.rank());
        let c = RandomData::new(5).cochain(alg, 2, 2, n.min(2));
        for k in c.valid_components() {
            for (slot, w) in c.entries(k) {
                let antis: Vec<Section> = slot.0.iter().map(|&i| Section::basis(n, r, i)).collect();
                let syms: Vec<Section> = slot.1.iter().map(|&i| Section::basis(n, r, i)).collect();
                assert_eq!(&c.evaluate(k, &antis, &syms).unwrap(), w);
            }
        }
    }
}

#[test]
fn delta_of_f1_curving() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let imc = &f1.coupled.imc;
    let alg = imc.algebroid();
    let rep = imc.ideal().adjoint_rep();
    let dc = delta(alg, &rep, &WeilCochain::from_form(3, &f1.coupled.curving)).unwrap();
    assert_eq!(dc.get(0, &[0], &[]), VForm::basic(Poly::one(2), &[0, 1], 1, 0));
    assert_eq!(dc.get(1, &[], &[1]), VForm::basic(xy("-x"), &[0], 1, 0));
    assert!(delta(alg, &rep, imc.cochain()).unwrap().is_zero());
}

#[test]
fn dnabla_of_f1_connection() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let imc = &f1.coupled.imc;
    let d = dnabla_cochain(&imc.coupling_connection(), imc.cochain()).unwrap();
    assert_eq!(d.get(1, &[], &[0]), VForm::basic(xy("x"), &[1], 1, 0));
    let zero = WeilCochain::zero(2, 3, 1, 1, 1);
    assert!(dnabla_cochain(&imc.coupling_connection(), &zero).unwrap().is_zero());
}

#[test]
fn check_im_examples() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let imc = &f1.coupled.imc;
    let (alg, rep) = (imc.algebroid(), imc.ideal().adjoint_rep());
    assert!(check_im(alg, &rep, imc.cochain()).unwrap().all_passed());
    let gamma = RandomData::new(3).form(2, 1, 1);
    let d0 = delta(alg, &rep, &WeilCochain::from_form(3, &gamma)).unwrap();
    assert!(check_im(alg, &rep, &d0).unwrap().all_passed());
    let mut broken = imc.cochain().clone();
    broken.set(0, &[0], &[], VForm::basic(xy("x^2"), &[1], 1, 0));
    let rep_c = check_im(alg, &rep, &broken).unwrap();
    assert!(!rep_c.passed("C.2"));
}

#[test]
fn solver_examples() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let imc = &f1.coupled.imc;
    let (alg, rep) = (imc.algebroid(), imc.ideal().adjoint_rep());
    let b0 = RandomData::new(11).with_bound(1).cochain(alg, 1, 0, 1);
    let target = delta(alg, &rep, &b0).unwrap();
    let b = solve_coboundary(alg, &rep, &target, 1, None).unwrap().unwrap();
    assert_eq!(delta(alg, &rep, &b).unwrap(), target);

    let omega = weilform::ideals::curvature(imc).unwrap();
    let f = solve_coboundary(alg, &rep, &omega, 2, None).unwrap().unwrap();
    assert_eq!(delta(alg, &rep, &f).unwrap(), omega);
    let diff = f.sub(&WeilCochain::from_form(3, &f1.coupled.curving));
    assert!(delta(alg, &rep, &diff).unwrap().is_zero());
}

#[test]
fn so3_first_cohomology_vanishes() {
    let so3 = fixture("F0_so3").unwrap();
    let alg = so3.coupled.algebroid();
    let rep = so3.coupled.ideal().adjoint_rep();
    let cocycles = cocycle_basis(alg, &rep, 1, 0, 0, None).unwrap();
    assert!(!cocycles.is_empty());
    for z in cocycles {
        let b = solve_coboundary(alg, &rep, &z, 0, None).unwrap().unwrap();
        assert_eq!(delta(alg, &rep, &b).unwrap(), z);
    }
}

#[test]
fn zero_invariance_form_wedges_to_zero() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let imc = &f1.coupled.imc;
    let alg = imc.algebroid();
    let tt = InvarianceForm::compute(alg, &imc.coupling_connection(), &imc.ideal().adjoint_rep()).unwrap();
    let c = RandomData::new(2).cochain(alg, 1, 1, 1);
    assert!(wedge_ttheta(&tt, &c).unwrap().is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evaluation_is_leibniz(s in any::<u64>(), i in 0usize..4) {
        let f = all_fixtures().swap_remove(i);
        let alg = f.coupled.algebroid();
        let (n, r) = (alg.chart_dim(), alg.rank());
        let mut rd = RandomData::new(s).with_bound(1);
        let c = rd.cochain(alg, 2, 2, n.min(2));
        let g = rd.poly(n);
        for j in c.valid_components() {
            if j == 2 {
                continue;
            }
            let alphas: Vec<Section> = (0..2 - j).map(|_| rd.section(n, r)).collect();
            let betas: Vec<Section> = (0..j).map(|_| rd.section(n, r)).collect();
            let mut scaled = alphas.clone();
            scaled[0] = alphas[0].scale_poly(&g);
            let lhs = c.evaluate(j, &scaled, &betas).unwrap();
            let mut rhs = c.evaluate(j, &alphas, &betas).unwrap().mul_poly(&g);
            if c.has_component(j + 1) {
                let mut syms = vec![alphas[0].clone()];
                syms.extend(betas.iter().cloned());
                let next = c.evaluate(j + 1, &alphas[1..], &syms).unwrap();
                rhs = rhs.add(&VForm::wedge_scalar_left(&VForm::exact(&g), &next));
            }
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn delta_squares_to_zero_for_flat_reps(s in any::<u64>(), p in 0usize..3, q in 0usize..3) {
        let f = fixture("F2_semisimple_2d").unwrap();
        let alg = f.coupled.algebroid();
        let mut rd = RandomData::new(s).with_bound(1);
        // d + dg ⊗ M is flat for a constant matrix M.
        let entries: Vec<Poly> = (0..9).map(|_| Poly::from_int(2, rd.integer(-2, 2))).collect();
        let gamma = VForm::exact(&rd.poly(2)).tensor_section(&entries);
        let conn = LinearConnection::trivial(2, 3).shifted(&gamma).unwrap();
        let rep = ARep::from_connection(alg, &conn);
        prop_assert!(rep.validate(alg).all_passed());
        let c = rd.cochain(alg, 3, p, q);
        let d = delta(alg, &rep, &c).unwrap();
        prop_assert!(delta(alg, &rep, &d).unwrap().is_zero());
    }
}
