use proptest::prelude::*;

use weilform::algebroid::forms::end_wedge;
use weilform::algebroid::{PolyMatrix, VForm};
use weilform::connections::{is_a_invariant, InvarianceForm, LinearConnection};
use weilform::fixtures::{fixture, RandomData};
use weilform::poly::Poly;

fn xy(s: &str) -> Poly {
    Poly::parse(s, &["x".to_string(), "y".to_string()]).unwrap()
}

fn e3(n: usize) -> Vec<Poly> {
    vec![Poly::zero(n), Poly::zero(n), Poly::one(n)]
}

/// The End-valued 2-form's value on (∂x, ∂y) as a matrix.
fn on_dxdy(w: &VForm, m: usize) -> PolyMatrix {
    let flat: Vec<Poly> = (0..m * m).map(|i| w.eval_coord(i, &[0, 1])).collect();
    PolyMatrix::from_flat(2, m, &flat)
}

#[test]
fn trivial_connection_is_d() {
    let conn = LinearConnection::trivial(2, 1);
    let w = VForm::scalar(xy("x"), &[1]);
    assert_eq!(conn.dnabla(&w).unwrap(), VForm::scalar(Poly::one(2), &[0, 1]));
    assert!(conn.is_flat());
    assert_eq!(conn.induced_end(), LinearConnection::trivial(2, 1));
}

#[test]
fn f2_connection_on_constant_section() {
    let f2 = fixture("F2_semisimple_2d").unwrap();
    let u1 = VForm::basic(Poly::one(2), &[], 3, 0);
    let got = f2.coupled.conn.dnabla(&u1).unwrap();
    assert_eq!(got, VForm::basic(xy("x"), &[1], 3, 1));
}

#[test]
fn f2_curvature_is_ad_e3() {
    let f2 = fixture("F2_semisimple_2d").unwrap();
    let fibre = f2.coupled.ideal().fibre();
    assert_eq!(on_dxdy(&f2.coupled.conn.curvature(), 3), fibre.ad(&e3(2)));
}

#[test]
fn f1_lie_derivative_of_curving() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let imc = &f1.coupled.imc;
    let alg = imc.algebroid();
    let rep = imc.ideal().adjoint_rep();
    let got = rep.lie_form(alg, &alg.basis(0), &f1.coupled.curving);
    assert_eq!(got, VForm::basic(Poly::one(2), &[0, 1], 1, 0));
    let e = alg.basis(imc.ideal().indices()[0]);
    assert!(rep.lie_form(alg, &e, &VForm::basic(Poly::one(2), &[1], 1, 0)).is_zero());
}

#[test]
fn invariance_form_examples() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let imc = &f1.coupled.imc;
    let (alg, rep) = (imc.algebroid(), imc.ideal().adjoint_rep());
    let tt = InvarianceForm::compute(alg, &imc.coupling_connection(), &rep).unwrap();
    assert!(tt.is_zero());
    assert!(is_a_invariant(alg, &imc.coupling_connection(), &rep));

    let f2 = fixture("F2_semisimple_2d").unwrap();
    let imc = &f2.coupled.imc;
    let (alg, rep) = (imc.algebroid(), imc.ideal().adjoint_rep());
    let tt = InvarianceForm::compute(alg, &imc.coupling_connection(), &rep).unwrap();
    let k3 = imc.ideal().indices()[2];
    assert_eq!(tt.theta[k3], imc.ideal().fibre().ad(&e3(2)));
    assert!(!is_a_invariant(alg, &imc.coupling_connection(), &rep));
}

#[test]
fn flat_connection_with_induced_rep_is_invariant() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let alg = f1.coupled.algebroid();
    let conn = LinearConnection::trivial(2, 2);
    let rep = weilform::connections::ARep::from_connection(alg, &conn);
    assert!(is_a_invariant(alg, &conn, &rep));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn squared_covariant_derivative_is_curvature(s in any::<u64>(), deg in 0usize..2) {
        let mut rd = RandomData::new(s).with_bound(1);
        let conn = LinearConnection::trivial(3, 2).shifted(&rd.form(3, 4, 1)).unwrap();
        let w = rd.form(3, 2, deg);
        let dd = conn.dnabla(&conn.dnabla(&w).unwrap()).unwrap();
        prop_assert_eq!(dd, end_wedge(&conn.curvature(), &w));
        let bianchi = conn.induced_end().dnabla(&conn.curvature()).unwrap();
        prop_assert!(bianchi.is_zero());
    }
}
