//! End-to-end acceptance suite: one PASS/FAIL line per criterion.
//! Runs as a plain binary so the lines always reach the terminal.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use num_rational::BigRational;
use powerlog::exact::GaussianRational;
use powerlog::frontend::{load_problem, parse_ratfunc};
use powerlog::majorant::{
    certify_expansion, choose_r, d_chain, d_op, l_op, majorant_recursion, poly_norm, rebase_operator, MajorantMonomial, NormContext,
};
use powerlog::numeric::{Evaluator, C64};
use powerlog::oracles::{oracle_bruteforce_majorant, oracle_invert, oracle_undetermined};
use powerlog::recurse::{expand, growth_report};
use powerlog::{Poly, RatFunc};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

/// Runs the CLI; returns exit code, parsed stdout, and stderr.
fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_powerlog")).args(args).output().expect("spawn powerlog");
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), doc, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn cli_ok(args: &[&str]) -> Result<Value, String> {
    match run(args) {
        (0, doc, _) => Ok(doc),
        (code, _, err) => Err(format!("`powerlog {}` exited {code}: {}", args.join(" "), err.trim())),
    }
}

fn rf(s: &str) -> Result<RatFunc, String> {
    parse_ratfunc(s).map_err(|e| format!("parse '{s}': {e}"))
}

fn coeff(doc: &Value, k: usize) -> Result<RatFunc, String> {
    let entries = doc["coefficients"].as_array().ok_or("no coefficients")?;
    match entries.iter().find(|e| e["k"] == k) {
        None => Ok(RatFunc::zero()),
        Some(e) => {
            let num = rf(e["num"].as_str().unwrap())?;
            let den = rf(e["den"].as_str().unwrap())?;
            num.checked_div(&den).map_err(|e| e.to_string())
        }
    }
}

fn t_pow(d: usize) -> Poly {
    Poly::monomial(GaussianRational::one(), d)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn p2() -> RatFunc {
    parse_ratfunc("t^3 - 3/2*t^2 + 3/2*t - 3/4").unwrap()
}

fn c1_dulac() -> Outcome {
    let path = fixture("example2_dulac");
    let f = path.to_str().unwrap();
    let red = cli_ok(&["reduce", f])?;
    let lead = rf(red["lead"].as_str().unwrap())?;
    let b = red["monomials"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["mu"] == 0 && m["q"].as_array().unwrap().iter().all(|q| q == 0))
        .ok_or("no U-free monomial")?;
    let b2 = &lead * &rf(b["b"].as_str().unwrap())?;
    ensure(b2 == rf("4*t^3")?, format!("B_2 = {b2}"))?;

    let exp = cli_ok(&["expand", f, "--to", "10"])?;
    ensure(coeff(&exp, 2)? == p2(), "P_2 mismatch")?;
    let ops: Vec<GaussianRational> =
        red["a"].as_array().unwrap().iter().map(|a| (&rf(a.as_str().unwrap()).unwrap() * &lead).as_constant().unwrap()).collect();
    let oracle = oracle_undetermined(&ops, &GaussianRational::from_int(2), b2.num(), 6).ok_or("oracle found no solution")?;
    ensure(RatFunc::from(oracle) == p2(), "oracle disagrees")?;
    for k in (1..=9).step_by(2) {
        ensure(coeff(&exp, k)?.is_zero(), format!("R_{k} nonzero"))?;
    }
    Ok("B_2 = 4t^3, P_2 matches the oracle, odd coefficients vanish to N=10".into())
}

fn c2_rational() -> Outcome {
    let path = fixture("example2_rational");
    let f = path.to_str().unwrap();
    let chk = cli_ok(&["check", f])?;
    ensure(chk["m"] == 0, "m != 0")?;
    ensure(rf(chk["a"][1].as_str().unwrap())? == rf("-2/t^2")?, "a_1")?;
    ensure(rf(chk["a"][0].as_str().unwrap())? == rf("-4/t^3")?, "a_0")?;
    let exp = cli_ok(&["expand", f, "--to", "10"])?;
    for k in 0..=10 {
        let c = coeff(&exp, k)?;
        ensure(c.is_zero() || t_pow(c.den().degree().unwrap()) == c.den().monic(), format!("den of R_{k}"))?;
    }
    let dulac = expand(&load_problem(fixture("example2_dulac")).unwrap(), 2, false).map_err(|e| e.to_string())?;
    let inv = oracle_invert(&dulac.series, 2).map_err(|e| e.to_string())?;
    ensure(coeff(&exp, 2)? == inv.coeff(2), "R_2 vs inversion oracle")?;
    ensure(inv.coeff(2) == &(-&p2()) * &rf("1/t^2")?, "R_2 != -P_2/t^2")?;
    let cert = cli_ok(&["certify", f, "--to", "10"])?;
    ensure(cert["all_pass"] == true, cert["summary"].to_string())?;
    Ok(format!("a_1, a_0 exact; R_2 = -P_2/t^2; {}", cert["summary"].as_str().unwrap()))
}

fn c3_painleve() -> Outcome {
    let path = fixture("example1_painleve6");
    let f = path.to_str().unwrap();
    let chk = cli_ok(&["check", f])?;
    ensure(chk["m"] == 2, "m != 2")?;
    for a in chk["a"].as_array().unwrap() {
        ensure(rf(a.as_str().unwrap())?.is_polynomial(), format!("a_j = {a} not polynomial"))?;
    }
    let rep = cli_ok(&["report", f, "--to", "8"])?;
    let exp = &rep["expansion"];
    for k in 1..=8 {
        let c = coeff(exp, k)?;
        ensure(c.is_polynomial() && c.num().degree().unwrap_or(0) <= 2 * k, format!("R_{k} = {c}"))?;
    }
    for v in rep["residual_valuations"].as_array().unwrap() {
        let target = v["target"].as_u64().unwrap();
        ensure(v["N"].as_u64().unwrap() + 3 == target && v["pass"] == true, format!("residual {v}"))?;
    }
    Ok("m=2, polynomial a_j, deg P_k <= 2k, residual valuation >= N+3 for N <= 8".into())
}

fn c4_transseries() -> Outcome {
    let path = fixture("example3_transseries");
    let f = path.to_str().unwrap();
    let chk = cli_ok(&["check", f])?;
    ensure(chk["holds"] == true && chk["m"] == 0, "condition")?;
    ensure(rf(chk["a"][2].as_str().unwrap())? == rf("-8/t^3")?, "a_2")?;
    let exp = cli_ok(&["expand", f, "--to", "3"])?;
    for k in 1..=3 {
        let c = coeff(&exp, k)?;
        ensure(c.den().divides(&t_pow(k + 1)), format!("R_{k} = {c}"))?;
    }
    Ok("m=0, a_2 = -8/t^3, R_k in t^-(k+1) C[t] for k <= 3".into())
}

fn c5_growth() -> Outcome {
    let mut notes = Vec::new();
    for name in ["example1_painleve6", "example2_dulac", "example2_rational", "example3_transseries"] {
        let p = load_problem(fixture(name)).unwrap();
        let growth = |n: usize| expand(&p, n, false).and_then(|e| growth_report(&e.state)).map_err(|e| e.to_string());
        let (g8, g12) = (growth(8)?, growth(12)?);
        ensure(g8.all_pass() && g12.all_pass(), format!("{name}: bound exceeded"))?;
        ensure(
            (g8.c_pole, g8.c_infinity) == (g12.c_pole, g12.c_infinity),
            format!("{name}: C moved from {}/{} to {}/{}", g8.c_pole, g8.c_infinity, g12.c_pole, g12.c_infinity),
        )?;
        notes.push(format!("{name} C={}/{}", g12.c_pole, g12.c_infinity));
    }
    Ok(notes.join(", "))
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn random_poly(rng: &mut StdRng, max_deg: usize) -> Poly {
    let d = rng.gen_range(0..=max_deg);
    Poly::new(
        (0..=d)
            .map(|_| {
                GaussianRational::new(
                    BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into()),
                    rat(rng.gen_range(-9..=9)),
                )
            })
            .collect(),
    )
}

fn trivial_context(q: &str, n: usize, c1: usize) -> NormContext {
    let mut a = vec![RatFunc::zero(); n];
    a.push(RatFunc::one());
    choose_r(parse_ratfunc(q).unwrap().num(), n, c1, 64).unwrap().with_constants(&a, &[]).unwrap()
}

fn c6_norms() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let ctxs = [trivial_context("t", 1, 3), trivial_context("1", 2, 5), trivial_context("t^2", 1, 2), trivial_context("t^2 + 1", 2, 2)];
    let mut cases = 0;
    while cases < 200 {
        let ctx = &ctxs[rng.gen_range(0..ctxs.len())];
        let k = rng.gen_range(1..6usize);
        let m = k + rng.gen_range(0..ctx.n);
        let p = random_poly(&mut rng, 12);
        let d = p.degree().unwrap_or(0);
        if rat((4 * d) as i64) > rat(k as i64) * &ctx.r {
            continue;
        }
        cases += 1;
        let c = ctx.constants();
        let np = ctx.poly_norm(&p);
        let nd = ctx.poly_norm(&d_op(&ctx.q, k, m, &p));
        ensure(nd.hi <= rat((k + m + d) as i64) * &c.c2 * &np.lo, format!("upper operator bound, case {cases}"))?;
        ensure(np.hi <= &c.c3 / rat(k as i64) * &nd.lo, format!("lower operator bound, case {cases}"))?;

        let nn = |rng: &mut StdRng| {
            Poly::new((0..rng.gen_range(1..8)).map(|_| GaussianRational::from_ratio(rng.gen_range(0..9), rng.gen_range(1..5))).collect())
        };
        let (a, b) = (nn(&mut rng), nn(&mut rng));
        let n = |h: &Poly| poly_norm(h, &ctx.r, 64).hi;
        ensure(n(&(&a * &b)) == n(&a) * n(&b) && n(&(&a + &b)) == n(&a) + n(&b), "nonnegative equality")?;
    }

    let mut checks = 0;
    for (name, order) in [("example2_rational", 9), ("example1_painleve6", 6), ("example3_transseries", 5)] {
        let e = expand(&load_problem(fixture(name)).unwrap(), order, false).map_err(|e| e.to_string())?;
        let cert = certify_expansion(&e, 64).map_err(|e| e.to_string())?;
        let ctx = &cert.ctx;
        let c = ctx.constants();
        let a = rebase_operator(&e.state.reduced.a, e.state.reduced.ell);
        for (i, r) in e.state.coeffs().iter().enumerate() {
            let k = i + 1;
            let pk = r.mul_poly(&ctx.q.pow(k as u32)).num().clone();
            if pk.is_zero() {
                continue;
            }
            let np = ctx.poly_norm(&pk);
            let top = ctx.poly_norm(&d_chain(&ctx.q, k, ctx.n, &pk));
            for j in 0..=ctx.n {
                let dj = ctx.poly_norm(&d_chain(&ctx.q, k, j, &pk));
                ensure(dj.hi <= &c.c2_tilde * rat(k as i64).pow(j as i32) * &np.lo, format!("{name} k={k} j={j} upper"))?;
                ensure(dj.hi <= &c.c3_tilde / rat(k as i64).pow((ctx.n - j) as i32) * &top.lo, format!("{name} k={k} j={j} lower"))?;
                checks += 2;
            }
            let l = ctx.norm(&l_op(&a, &ctx.q, k, &pk)).map_err(|e| e.to_string())?;
            ensure(top.hi <= &c.a * &l.lo, format!("{name} k={k}: A bound"))?;
            checks += 1;
        }
    }
    Ok(format!("200 random operator cases with equalities, {checks} fixture inequalities"))
}

fn c7_majorant() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    for case in 0..100 {
        let monos: Vec<MajorantMonomial> = (0..rng.gen_range(1..5))
            .map(|_| MajorantMonomial {
                mu: rng.gen_range(0..3),
                nu: rng.gen_range(0..4),
                power: rng.gen_range(0..4),
                alpha: BigRational::new(rng.gen_range(1..6).into(), rng.gen_range(1..4).into()),
            })
            .collect();
        let sigma = BigRational::new(rng.gen_range(1..5).into(), 3.into());
        let n = rng.gen_range(1..=6);
        ensure(majorant_recursion(&monos, &sigma, n) == oracle_bruteforce_majorant(&monos, &sigma, n), format!("case {case}"))?;
    }
    let path = fixture("example2_rational");
    let cert = cli_ok(&["certify", path.to_str().unwrap(), "--to", "9"])?;
    let per_k = cert["per_k"].as_array().unwrap();
    ensure(per_k.iter().filter(|v| v["k"].as_u64().unwrap() <= 8).count() == 8, "fewer than 8 verdicts")?;
    ensure(per_k.iter().all(|v| v["pass"] == true), "a verdict failed")?;
    Ok("recursion equals brute force on 100 random sets, majorant inequality holds for k <= 8".into())
}

fn c8_residuals() -> Outcome {
    let mut total = 0;
    for name in ["example1_painleve6", "example2_dulac", "example2_rational", "example3_transseries", "linear_exact"] {
        let path = fixture(name);
        let rep = cli_ok(&["report", path.to_str().unwrap()])?;
        for v in rep["residual_valuations"].as_array().unwrap() {
            ensure(v["pass"] == true, format!("{name}: {v}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} exact valuation checks"))
}

fn c9_numeric() -> Outcome {
    let path = fixture("example2_dulac");
    let doc = cli_ok(&["residual", path.to_str().unwrap(), "--to", "8", "--x", "0.05,0"])?;
    let rows = doc["rows"].as_array().unwrap();
    let res: Vec<f64> =
        [2, 4, 6, 8].iter().map(|&n| rows.iter().find(|r| r["N"] == n).unwrap()["residual_abs"].as_f64().unwrap()).collect();
    ensure(res.windows(2).all(|w| w[1] < w[0]), format!("{res:?}"))?;

    let p = load_problem(&path).unwrap();
    let e = expand(&p, 8, false).map_err(|e| e.to_string())?;
    let (mut lo, mut hi) = (Evaluator::new(128), Evaluator::new(256));
    let x = C64::new(0.05, 0.0);
    let mut worst = 0f64;
    for n in [2, 4, 6, 8] {
        let a = lo.eval_series(&e.series, n, x).map_err(|e| e.to_string())?;
        let b = hi.eval_series(&e.series, n, x).map_err(|e| e.to_string())?;
        worst = worst.max(hi.relative_difference(&b, &a));
    }
    ensure(worst < 2f64.powi(-64), format!("relative change {worst:e}"))?;
    let shown: Vec<String> = res.iter().map(|r| format!("{r:.2e}")).collect();
    Ok(format!("residuals {}, precision doubling changes values by {worst:.1e}", shown.join(" > ")))
}

fn c10_negative() -> Outcome {
    let path = fixture("counterexample_mixed_m");
    let (code, _, _) = run(&["check", path.to_str().unwrap()]);
    ensure(code == 2, format!("counterexample check exited {code}"))?;
    let path = fixture("example3_transseries");
    let f = path.to_str().unwrap();
    match run(&["report", f, "--to", "9"]) {
        (0, rep, _) => {
            for v in rep["residual_valuations"].as_array().unwrap() {
                ensure(v["pass"] == true, format!("deep run residual {v}"))?;
            }
            Ok("counterexample exits 2; Example 3 to N=9 rational with residual check".into())
        }
        (_, _, err) => {
            let e: Value = serde_json::from_str(err.trim()).map_err(|_| err.clone())?;
            ensure(e["error"]["kind"] == "no_rational_solution", format!("unexpected failure {err}"))?;
            Ok("counterexample exits 2; Example 3 stops with no rational solution".into())
        }
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("dulac form coefficients", c1_dulac),
        ("rational form and certificate", c2_rational),
        ("painleve polynomial coefficients", c3_painleve),
        ("transseries denominators", c4_transseries),
        ("growth bounds", c5_growth),
        ("norm machinery", c6_norms),
        ("majorant", c7_majorant),
        ("whole-series residual valuation", c8_residuals),
        ("numeric sanity", c9_numeric),
        ("negative paths", c10_negative),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
