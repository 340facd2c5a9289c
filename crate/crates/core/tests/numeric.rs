mod common;

use common::fixture;
use powerlog::numeric::{bf_to_f64, Evaluator, C64};
use powerlog::recurse::expand;

#[test]
fn dulac_residual_decreases() {
    let p = fixture("example2_dulac");
    let e = expand(&p, 8, false).unwrap();
    let mut ev = Evaluator::new(p.precision_bits);
    let x = C64::new(0.05, 0.0);
    let res: Vec<f64> = [2, 4, 6, 8].iter().map(|&n| bf_to_f64(&ev.residual(&p.ode, &e.series, n, x).unwrap())).collect();
    for w in res.windows(2) {
        assert!(w[1] < w[0], "{res:?}");
    }
}

#[test]
fn doubling_precision_is_stable() {
    let p = fixture("example2_dulac");
    let e = expand(&p, 8, false).unwrap();
    let mut lo = Evaluator::new(128);
    let mut hi = Evaluator::new(256);
    let tol = 2f64.powi(-64);
    for x in [C64::new(0.05, 0.0), C64::new(0.03, 0.02), C64::new(0.04, -0.03)] {
        for n in [2, 4, 6, 8] {
            let a = lo.eval_series(&e.series, n, x).unwrap();
            let b = hi.eval_series(&e.series, n, x).unwrap();
            let d = hi.relative_difference(&b, &a);
            assert!(d < tol, "x={x:?} N={n}: {d}");
        }
    }
}
