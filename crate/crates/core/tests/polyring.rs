use proptest::prelude::*;

use weilform::fixtures::RandomData;
use weilform::poly::{int, rat, Poly};

fn vars() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

fn p(s: &str) -> Poly {
    Poly::parse(s, &vars()).unwrap()
}

fn random(seed: u64, n: usize) -> Poly {
    RandomData::new(seed).poly(n)
}

#[test]
fn worked_products() {
    assert_eq!(p("x+1") * p("x-1"), p("x^2-1"));
    assert!((p("x") * Poly::zero(2)).is_zero());
    assert_eq!(p("1/2*x + 1/3").scale(&int(3)), p("3/2*x + 1"));
    assert_eq!(p("1/2*x + 1/3") * Poly::from_int(2, 3), p("3/2*x + 1"));
}

#[test]
fn worked_partials() {
    assert_eq!(p("x^2*y").partial(0).unwrap(), p("2*x*y"));
    assert!(p("7/3").partial(1).unwrap().is_zero());
    let (f, g) = (p("x"), p("x*y"));
    assert_eq!(
        (&f * &g).partial(0).unwrap(),
        &(&f.d(0) * &g) + &(&f * &g.d(0))
    );
    assert!(p("x").partial(2).is_err());
}

#[test]
fn variable_mismatch_is_rejected() {
    assert!(Poly::one(2).checked_add(&Poly::one(3)).is_err());
    assert!(Poly::one(2).checked_mul(&Poly::one(1)).is_err());
}

#[test]
fn display_parses_back() {
    for src in ["0", "1", "-x", "x^2*y - 3/4", "1/2*x + 1/3*y^3"] {
        let f = p(src);
        assert_eq!(p(&f.to_string_with(&vars())), f);
    }
    assert!(Poly::parse("z", &vars()).is_err());
    assert!(Poly::parse("x +", &vars()).is_err());
}

#[test]
fn evaluation_at_rational_points() {
    let f = p("x^2*y - 3/4");
    assert_eq!(f.eval(&[rat(1, 2), int(3)]).unwrap(), int(0));
}

proptest! {
    #[test]
    fn ring_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (f, g, h) = (random(a, 3), random(b, 3), random(c, 3));
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &Poly::one(3), f.clone());
    }

    #[test]
    fn partials_are_derivations(a in any::<u64>(), b in any::<u64>(), i in 0usize..3, j in 0usize..3) {
        let (f, g) = (random(a, 3), random(b, 3));
        prop_assert_eq!((&f * &g).d(i), &(&f.d(i) * &g) + &(&f * &g.d(i)));
        prop_assert_eq!(f.d(i).d(j), f.d(j).d(i));
    }

    #[test]
    fn parse_display_round_trip(a in any::<u64>()) {
        let f = random(a, 2);
        prop_assert_eq!(p(&f.to_string_with(&vars())), f);
    }
}
