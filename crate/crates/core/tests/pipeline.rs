mod common;

use common::{fixture, rf, FIXTURES};
use powerlog::exact::GaussianRational;
use powerlog::oracles::{oracle_invert, oracle_undetermined};
use powerlog::recurse::{expand, growth_report, residual_valuation};
use powerlog::reduce::check_condition;
use powerlog::{Error, Poly, RatFunc};

fn p2() -> RatFunc {
    rf("t^3 - 3/2*t^2 + 3/2*t - 3/4")
}

fn is_power_of_t(p: &Poly) -> bool {
    let m = p.monic();
    match m.degree() {
        Some(d) => m == Poly::monomial(GaussianRational::one(), d),
        None => false,
    }
}

#[test]
fn dulac_b2_and_p2() {
    let p = fixture("example2_dulac");
    let e = expand(&p, 10, false).unwrap();
    let red = &e.state.reduced;
    assert_eq!(e.ell.ell, 1);
    // the x² forcing term before normalization
    assert_eq!(&red.lead * e.state.rhs(1), rf("4*t^3"));
    assert_eq!(e.series.coeff(2), p2());

    let c: Vec<GaussianRational> = red.a.iter().map(|a| (a * &red.lead).as_constant().unwrap()).collect();
    let b2 = (&red.lead * e.state.rhs(1)).num().clone();
    let oracle = oracle_undetermined(&c, &GaussianRational::from_int(2), &b2, 6).unwrap();
    assert_eq!(RatFunc::normalize(oracle, Poly::one()).unwrap(), p2());

    for k in (1..=10).step_by(2) {
        assert!(e.series.coeff(k).is_zero(), "R_{k} should vanish");
    }
}

#[test]
fn rational_form_condition_and_inversion() {
    let p = fixture("example2_rational");
    let r = check_condition(&p, None).unwrap();
    assert!(r.holds);
    assert_eq!(r.m, 0);
    assert_eq!(r.a[1], rf("-2/t^2"));
    assert_eq!(r.a[0], rf("-4/t^3"));

    let e = expand(&p, 10, false).unwrap();
    for (k, c) in e.series.terms() {
        assert!(is_power_of_t(c.den()), "denominator of R_{k} is {}", c.den());
    }
    assert_eq!(e.series.coeff(2), &(-&p2()) * &rf("1/t^2"));

    let dulac = expand(&fixture("example2_dulac"), 2, false).unwrap().series;
    let inv = oracle_invert(&dulac, 2).unwrap();
    assert_eq!(inv.coeff(2), e.series.coeff(2));
    assert_eq!(inv.coeff(0), e.series.coeff(0));
}

#[test]
fn painleve_polynomial_coefficients() {
    let p = fixture("example1_painleve6");
    let r = check_condition(&p, None).unwrap();
    assert!(r.holds);
    assert_eq!(r.m, 2);
    assert!(r.a.iter().all(RatFunc::is_polynomial));

    let e = expand(&p, 8, false).unwrap();
    for k in 1..=8 {
        let c = e.series.coeff(k);
        assert!(c.is_polynomial(), "R_{k} = {c}");
        assert!(c.num().degree().unwrap_or(0) <= 2 * k, "deg R_{k} = {:?}", c.num().degree());
    }
    for n in 0..=8 {
        let v = residual_valuation(&p, &e.series, n, r.m);
        assert!(v.lower_bound() >= n + 3, "N = {n}: {v}");
    }
}

#[test]
fn transseries_denominator_shapes() {
    let p = fixture("example3_transseries");
    let r = check_condition(&p, None).unwrap();
    assert!(r.holds);
    assert_eq!(r.m, 0);
    assert_eq!(r.a[2], rf("-8/t^3"));

    let e = expand(&p, 3, false).unwrap();
    for k in 1..=3 {
        let t_pow = Poly::monomial(GaussianRational::one(), k + 1);
        let c = e.series.coeff(k);
        assert!(c.den().divides(&t_pow), "R_{k} = {c}");
    }
}

#[test]
fn growth_slopes_are_stable() {
    for name in ["example1_painleve6", "example2_dulac", "example2_rational", "example3_transseries"] {
        let p = fixture(name);
        let g8 = growth_report(&expand(&p, 8, false).unwrap().state).unwrap();
        let g12 = growth_report(&expand(&p, 12, false).unwrap().state).unwrap();
        assert!(g8.all_pass() && g12.all_pass(), "{name}");
        assert_eq!((g8.c_pole, g8.c_infinity), (g12.c_pole, g12.c_infinity), "{name}");
        for row in &g12.rows {
            assert!(row.pole_order <= row.k * g12.c_pole, "{name} k={}", row.k);
        }
    }
}

#[test]
fn residual_valuation_every_fixture() {
    for name in FIXTURES {
        let p = fixture(name);
        let e = expand(&p, p.expand_to, false).unwrap();
        for n in 0..=p.expand_to {
            let v = residual_valuation(&p, &e.series, n, e.report.m);
            assert!(v.lower_bound() > n + e.report.m, "{name} N={n}: {v}");
        }
    }
}

#[test]
fn mixed_valuation_counterexample_fails() {
    let p = fixture("counterexample_mixed_m");
    assert!(!check_condition(&p, None).unwrap().holds);
    assert!(matches!(expand(&p, 4, false), Err(Error::ConditionFailed(_))));
}

#[test]
fn transseries_deep_run_is_sound() {
    let p = fixture("example3_transseries");
    match expand(&p, 9, false) {
        Ok(e) => {
            for n in [3, 6, 9] {
                let v = residual_valuation(&p, &e.series, n, e.report.m);
                assert!(v.lower_bound() > n, "N={n}: {v}");
            }
        }
        Err(Error::NoRationalSolution { .. }) => {}
        Err(other) => panic!("unexpected error {other}"),
    }
}
