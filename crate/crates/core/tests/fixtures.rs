use weilform::algebroid::VForm;
use weilform::fixtures::{all_fixtures, fixture, RandomData, FIXTURE_NAMES};
use weilform::poly::Poly;
use weilform::spec::SpecFile;
use weilform::weil::WeilCochain;

#[test]
fn same_seed_same_data() {
    let f2 = fixture("F2_semisimple_2d").unwrap();
    let alg = f2.coupled.algebroid();
    for seed in [0, 1, 99] {
        let a = RandomData::new(seed).cochain(alg, 3, 2, 1);
        let b = RandomData::new(seed).cochain(alg, 3, 2, 1);
        assert_eq!(a, b);
        let ideal = f2.coupled.ideal();
        assert_eq!(RandomData::new(seed).triple(ideal), RandomData::new(seed).triple(ideal));
    }
    let a = RandomData::new(1).cochain(alg, 3, 1, 1);
    let b = RandomData::new(2).cochain(alg, 3, 1, 1);
    assert_ne!(a, b);
}

#[test]
fn level_zero_cochains_are_forms() {
    let f3 = fixture("F3_foliation_4d").unwrap();
    let alg = f3.coupled.algebroid();
    for seed in 0..5 {
        let c = RandomData::new(seed).cochain(alg, 1, 0, 2);
        assert_eq!(c.valid_components(), vec![0]);
        assert_eq!(WeilCochain::from_form(alg.rank(), &c.as_form()), c);
    }
}

#[test]
fn point_fixture_has_no_positive_form_degrees() {
    let so3 = fixture("F0_so3").unwrap();
    let alg = so3.coupled.algebroid();
    assert_eq!(alg.chart_dim(), 0);
    for p in 0..3 {
        for q in 1..3 {
            let c = RandomData::new(4).cochain(alg, 3, p, q);
            for k in c.valid_components() {
                assert!(k == q || c.entries(k).next().is_none(), "p={p} q={q} k={k}");
            }
        }
    }
    assert!(RandomData::new(4).cochain(alg, 3, 0, 1).is_zero());
}

#[test]
fn fixture_contents() {
    assert_eq!(all_fixtures().len(), FIXTURE_NAMES.len());
    let f1 = fixture("F1_abelian_2d").unwrap();
    let x = Poly::parse("x", &f1.variables).unwrap();
    assert_eq!(f1.coupled.curving, VForm::basic(x, &[0, 1], 1, 0));
    assert!(f1.coupled.ideal().is_abelian());

    let f2 = fixture("F2_semisimple_2d").unwrap();
    assert_eq!(f2.coupled.curving, VForm::basic(Poly::from_int(2, -1), &[0, 1], 3, 2));
    assert!(!f2.coupled.ideal().is_abelian());

    let f3 = fixture("F3_foliation_4d").unwrap();
    assert_eq!(f3.coupled.algebroid().rank(), 2);
    assert!(fixture("F4").is_err());
}

#[test]
fn perturbed_connections_stay_im() {
    for f in all_fixtures() {
        for seed in 0..4 {
            let imc = RandomData::new(seed).with_bound(1).perturbed_imc(&f.coupled.imc);
            let rep = weilform::weil::check_im(
                imc.algebroid(),
                &imc.ideal().adjoint_rep(),
                imc.cochain(),
            )
            .unwrap();
            assert!(rep.all_passed(), "{}", f.name);
        }
    }
}

#[test]
fn fixtures_export_to_specs() {
    for f in all_fixtures() {
        let spec = SpecFile::from_fixture(&f);
        let text = spec.to_json();
        let back = SpecFile::parse(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back.imc().unwrap().as_ref(), Some(&f.coupled.imc));
    }
}
