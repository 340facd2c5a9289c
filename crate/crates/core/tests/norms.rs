mod common;

use common::{fixture, rf};
use num_rational::BigRational;
use powerlog::exact::GaussianRational;
use powerlog::majorant::{certify_expansion, choose_r, d_chain, d_op, l_op, rebase_operator, NormContext};
use powerlog::recurse::expand;
use powerlog::{Poly, RatFunc};
use proptest::prelude::*;

const BITS: u32 = 64;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn gauss() -> impl Strategy<Value = GaussianRational> {
    (-9i64..=9, -9i64..=9, 1i64..=4).prop_map(|(re, im, d)| GaussianRational::new(BigRational::new(re.into(), d.into()), rat(im)))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(gauss(), 0..=max_deg + 1).prop_map(Poly::new)
}

fn nonneg_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((0i64..=9, 1i64..=5), 0..=max_deg + 1)
        .prop_map(|cs| Poly::new(cs.into_iter().map(|(n, d)| GaussianRational::from_ratio(n, d)).collect()))
}

/// A rational function with its poles inside the disc of radius 4.
fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(4), prop::collection::vec((-3i64..=3, -3i64..=3), 0..=2)).prop_map(|(num, roots)| {
        let den = roots
            .iter()
            .fold(Poly::one(), |acc, &(a, b)| &acc * &Poly::new(vec![GaussianRational::new(rat(-a), rat(-b)), GaussianRational::one()]));
        RatFunc::normalize(num, den).unwrap()
    })
}

/// Contexts with `c₂`, `c₃` computed for a trivial operator `δⁿ`.
fn context(q: &str, n: usize, c1: usize) -> NormContext {
    let q = rf(q).num().clone();
    let mut a = vec![RatFunc::zero(); n];
    a.push(RatFunc::one());
    choose_r(&q, n, c1, BITS).unwrap().with_constants(&a, &[]).unwrap()
}

fn contexts() -> Vec<NormContext> {
    vec![context("t", 1, 3), context("1", 2, 5), context("t^2", 1, 2), context("t - 10", 1, 1), context("t^2 + 1", 2, 2)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn norm_is_subadditive_and_submultiplicative(f in ratfunc(), g in ratfunc()) {
        let r = rat(64);
        let tol = BigRational::new(1.into(), (1u64 << 40).into());
        let n = |h: &RatFunc| powerlog::majorant::norm(h, &r, &tol, BITS).unwrap();
        let (nf, ng) = (n(&f), n(&g));
        prop_assert!(n(&(&f + &g)).lo <= &nf.hi + &ng.hi);
        prop_assert!(n(&(&f * &g)).lo <= &nf.hi * &ng.hi);
    }

    #[test]
    fn nonnegative_polynomials_give_equalities(p in nonneg_poly(8), q in nonneg_poly(8), e in 0u32..6) {
        let r = BigRational::new(2.into(), 1.into()) + BigRational::new(e.into(), 3.into());
        let n = |h: &Poly| powerlog::majorant::poly_norm(h, &r, BITS);
        let (np, nq) = (n(&p), n(&q));
        prop_assert!(np.is_point() && nq.is_point());
        prop_assert_eq!(n(&(&p + &q)).hi, &np.hi + &nq.hi);
        prop_assert_eq!(n(&(&p * &q)).hi, &np.hi * &nq.hi);
    }

    #[test]
    fn operator_norm_chain(which in 0usize..5, k in 1usize..6, dm in 0usize..2, p in poly(12)) {
        let ctx = &contexts()[which];
        let m = k + dm.min(ctx.n - 1);
        let cap = (BigRational::from_integer(k.into()) * &ctx.r / rat(4)).floor().to_integer();
        let d = p.degree().unwrap_or(0);
        prop_assume!(BigRational::from_integer(d.into()) <= BigRational::from_integer(cap));
        let c = ctx.constants();
        let np = ctx.poly_norm(&p);
        let nd = ctx.poly_norm(&d_op(&ctx.q, k, m, &p));
        // (k + m + deg P)·c₂·‖P‖ bounds the operator from above
        let factor = rat((k + m + d) as i64) * &c.c2;
        prop_assert!(nd.hi <= &factor * &np.lo);
        // and (c₃/k)·‖D P‖ from below
        prop_assert!(np.hi <= &c.c3 / rat(k as i64) * &nd.lo);
    }
}

/// Chain and inverse inequalities on the numerators `P_k = R_{ℓ+k}·Q^k` of real runs.
#[test]
fn chain_and_inverse_bounds_on_fixtures() {
    for (name, order) in [("example2_rational", 9), ("example2_dulac", 9), ("example1_painleve6", 6), ("example3_transseries", 5)] {
        let e = expand(&fixture(name), order, false).unwrap();
        let cert = certify_expansion(&e, BITS).unwrap();
        let ctx = &cert.ctx;
        let c = ctx.constants();
        let a = rebase_operator(&e.state.reduced.a, e.state.reduced.ell);
        let n = ctx.n;
        for (i, r) in e.state.coeffs().iter().enumerate() {
            let k = i + 1;
            let pk = r.mul_poly(&ctx.q.pow(k as u32)).num().clone();
            if pk.is_zero() {
                continue;
            }
            let np = ctx.poly_norm(&pk);
            let top = ctx.poly_norm(&d_chain(&ctx.q, k, n, &pk));
            for j in 0..=n {
                let dj = ctx.poly_norm(&d_chain(&ctx.q, k, j, &pk));
                let kj = rat(k as i64).pow(j as i32);
                assert!(dj.hi <= &c.c2_tilde * &kj * &np.lo, "{name} k={k} j={j}: upper chain bound");
                let knj = rat(k as i64).pow((n - j) as i32);
                assert!(dj.hi <= &c.c3_tilde / &knj * &top.lo, "{name} k={k} j={j}: lower chain bound");
            }
            let l = ctx.norm(&l_op(&a, &ctx.q, k, &pk)).unwrap();
            assert!(top.hi <= &c.a * &l.lo, "{name} k={k}: ‖𝒟 P‖ ≤ A‖ℒ P‖");
        }
    }
}

#[test]
fn constants_for_q_equal_t() {
    let ctx = context("t", 1, 3);
    assert_eq!(ctx.r, rat(16));
    let c = ctx.constants();
    assert_eq!(c.c2, rat(16));
    assert_eq!(c.c3, BigRational::new(1.into(), 4.into()));
    assert_eq!(c.c3_tilde, rat(1));
}
