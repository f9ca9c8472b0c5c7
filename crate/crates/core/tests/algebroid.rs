use proptest::prelude::*;

use weilform::algebroid::{AlgebroidPresentation, Section, VField, VForm};
use weilform::fixtures::{all_fixtures, fixture, so3, RandomData};
use weilform::poly::Poly;

fn xy(s: &str) -> Poly {
    Poly::parse(s, &["x".to_string(), "y".to_string()]).unwrap()
}

fn so3_algebroid(c312: i64, extra: bool) -> AlgebroidPresentation {
    let mut table = vec![
        ((0, 1, 2), Poly::from_int(0, c312)),
        ((1, 2, 0), Poly::one(0)),
        ((0, 2, 1), Poly::from_int(0, -1)),
    ];
    if extra {
        table.push(((0, 1, 0), Poly::one(0)));
    }
    AlgebroidPresentation::from_upper(0, 3, table, vec![]).unwrap()
}

#[test]
fn so3_bracket_reads_structure_constants() {
    let a = so3_algebroid(1, false);
    assert_eq!(a.bracket(&a.basis(0), &a.basis(1)).unwrap(), a.basis(2));
    assert!(a.validate().all_passed());
    assert!(so3(0).is_lie());
}

#[test]
fn rescaled_so3_stays_lie() {
    // [e1,e2] = a e3, [e2,e3] = b e1, [e3,e1] = c e2 is Lie for every a, b, c.
    assert!(so3_algebroid(2, false).validate().all_passed());
}

#[test]
fn extra_constant_breaks_jacobi() {
    let a = so3_algebroid(1, true);
    let rep = a.validate();
    assert!(!rep.passed("jacobi"));
    assert!(rep.get("jacobi").unwrap().detail.contains("(e1,e2,e3)"));
    assert!(!a.jacobiator(&a.basis(0), &a.basis(1), &a.basis(2)).unwrap().is_zero());
}

#[test]
fn f1_bracket_of_horizontal_frame() {
    let f1 = fixture("F1_abelian_2d").unwrap();
    let a = f1.coupled.algebroid();
    let e = f1.coupled.ideal().indices()[0];
    let got = a.bracket(&a.basis(0), &a.basis(1)).unwrap();
    assert_eq!(got, a.basis(e).scale_poly(&xy("-x")));
}

#[test]
fn fixtures_are_lie_algebroids() {
    for f in all_fixtures() {
        let rep = f.coupled.algebroid().validate();
        assert!(rep.all_passed(), "{}: {:?}", f.name, rep.summary_lines());
    }
}

#[test]
fn rank_mismatch_is_structural() {
    assert!(AlgebroidPresentation::new(2, 2, vec![Poly::zero(2); 7], vec![Poly::zero(2); 4]).is_err());
}

#[test]
fn exterior_calculus_examples() {
    let x_dy = VForm::scalar(xy("x"), &[1]);
    assert_eq!(x_dy.d(), VForm::scalar(Poly::one(2), &[0, 1]));
    let w = VForm::scalar(xy("x"), &[0, 1]);
    let dx = VField::coordinate(2, 0);
    assert_eq!(w.interior(&dx), x_dy);
    assert_eq!(w.lie(&dx), VForm::scalar(Poly::one(2), &[0, 1]));
}

fn random_section(seed: u64, a: &AlgebroidPresentation) -> Section {
    RandomData::new(seed).section(a.chart_dim(), a.rank())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bracket_axioms_on_fixtures(i in 0usize..4, s in any::<u64>()) {
        let f = all_fixtures().swap_remove(i);
        let a = f.coupled.algebroid();
        let (x, y, z) = (
            random_section(s, a),
            random_section(s ^ 1, a),
            random_section(s ^ 2, a),
        );
        prop_assert!(a.bracket(&x, &x).unwrap().is_zero());
        prop_assert!(a.jacobiator(&x, &y, &z).unwrap().is_zero());
        let g = RandomData::new(s ^ 3).poly(a.chart_dim());
        let lhs = a.bracket(&x, &y.scale_poly(&g)).unwrap();
        let rhs = a
            .bracket(&x, &y)
            .unwrap()
            .scale_poly(&g)
            .add(&y.scale_poly(&a.anchor(&x).unwrap().apply(&g)));
        prop_assert_eq!(lhs, rhs);
        let anchor_bracket = a.anchor(&a.bracket(&x, &y).unwrap()).unwrap();
        prop_assert_eq!(anchor_bracket, a.anchor(&x).unwrap().bracket(&a.anchor(&y).unwrap()));
    }

    #[test]
    fn cartan_calculus(s in any::<u64>(), deg in 1usize..3) {
        let mut rd = RandomData::new(s);
        let w = rd.form(3, 2, deg);
        let (x, y) = (rd.vfield(3), rd.vfield(3));
        prop_assert!(w.d().d().is_zero());
        prop_assert_eq!(w.lie(&x), w.interior(&x).d().add(&w.d().interior(&x)));
        prop_assert_eq!(w.lie(&x).d(), w.d().lie(&x));
        let lhs = w.interior(&y).lie(&x).sub(&w.lie(&x).interior(&y));
        prop_assert_eq!(lhs, w.interior(&x.bracket(&y)));
    }
}
