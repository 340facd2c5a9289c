use std::path::{Path, PathBuf};

use powerlog::frontend::{load_problem, SectorSpec};
use powerlog::majorant::{certify_expansion, Certificate, VerdictView};
use powerlog::numeric::{bf_to_f64, radius_estimate, sector_points, Evaluator, C64};
use powerlog::oracles::{load_oracle_cases, run_oracle_case};
use powerlog::recurse::SolveOptions;
use powerlog::recurse::{coefficient_dump, expand as expand_series, growth_report, residual_valuation, BoundsMode, Expansion};
use powerlog::reduce::{check_condition, choose_ell, reduce_equation, ConditionReport};
use powerlog::{Error, Problem, Result};
use serde_json::{json, Value};

use crate::render::{emit, error_value, valuation, write_csv, Row, SCHEMA};
use crate::{Common, Numeric, ReportArgs};

fn load(c: &Common) -> Result<Problem> {
    let mut p = load_problem(&c.problem)?;
    if let Some(n) = c.to {
        p.expand_to = n;
    }
    if let Some(d) = c.depth {
        p.check_depth = d;
    }
    if let Some(b) = c.precision {
        if b < 16 {
            return Err(Error::InvalidProblem("--precision must be at least 16".into()));
        }
        p.precision_bits = b;
    }
    if let Some(s) = &c.sector {
        p.sector = Some(SectorSpec::parse(s)?);
    }
    Ok(p)
}

fn header(command: &str, c: &Common) -> Value {
    json!({ "schema": SCHEMA, "command": command, "problem": c.problem.display().to_string() })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn condition_json(r: &ConditionReport) -> Value {
    json!({
        "m": r.m,
        "a": strings(&r.a),
        "valuations": r.valuations.iter().map(valuation).collect::<Vec<_>>(),
        "holds": r.holds,
        "holds_strict": r.holds_strict,
        "stable": r.stable,
        "certified": r.certified,
        "depth_used": r.depth_used,
    })
}

pub fn check(c: &Common) -> Result<u8> {
    let p = load(c)?;
    let r = check_condition(&p, None)?;
    emit(&merge(header("check", c), condition_json(&r)), c.out.as_deref())?;
    Ok(if r.holds { 0 } else { 2 })
}

fn holding_report(p: &Problem) -> Result<ConditionReport> {
    let r = check_condition(p, None)?;
    if !r.holds {
        return Err(Error::ConditionFailed(format!(
            "nondegeneracy condition fails (m = {}, stable = {}, certified = {})",
            r.m, r.stable, r.certified
        )));
    }
    Ok(r)
}

pub fn reduce(c: &Common) -> Result<u8> {
    let p = load(c)?;
    let r = holding_report(&p)?;
    let ell = choose_ell(&r)?;
    let opts = SolveOptions { exact_bounds: c.exact_bounds, ..SolveOptions::default() };
    let red = reduce_equation(&p, &r, ell.ell, &opts)?;
    let monomials: Vec<Value> = red.monomials.iter().map(|(k, b)| json!({ "mu": k.mu, "q": k.q, "b": b.to_string() })).collect();
    let doc = json!({
        "m": red.m,
        "n": red.n,
        "ell": red.ell,
        "p": red.p,
        "pinf": red.pinf.fmt_var("lambda"),
        "integer_roots": strings(&ell.integer_roots),
        "a": strings(&red.a),
        "lead": red.lead.to_string(),
        "q_den": red.q_den()?.fmt_var("t"),
        "monomials": monomials,
        "prefix": coefficient_dump(&red.phi),
    });
    emit(&merge(header("reduce", c), doc), c.out.as_deref())?;
    Ok(0)
}

fn run_expand(p: &Problem, c: &Common) -> Result<Expansion> {
    holding_report(p)?;
    expand_series(p, p.expand_to, c.exact_bounds)
}

fn expansion_json(p: &Problem, e: &Expansion) -> Result<Value> {
    let g = growth_report(&e.state)?;
    let solver: Vec<Value> = e
        .state
        .outcomes()
        .iter()
        .enumerate()
        .map(|(i, o)| {
            json!({
                "k": e.ell.ell + i + 1,
                "mode": match o.mode { BoundsMode::Adaptive => "adaptive", BoundsMode::Exact => "exact", BoundsMode::Trivial => "trivial" },
                "ansatz_den": o.ansatz_den.fmt_var("t"),
                "ansatz_deg": o.ansatz_deg,
                "steps": o.steps,
            })
        })
        .collect();
    let rows: Vec<Value> = g
        .rows
        .iter()
        .map(|r| {
            json!({
                "k": e.ell.ell + r.k, "pole_order": r.pole_order, "degree_at_infinity": r.degree_at_infinity,
                "pole_bound": r.pole_bound, "infinity_bound": r.infinity_bound, "pass": r.pass,
            })
        })
        .collect();
    Ok(json!({
        "m": e.report.m,
        "ell": e.ell.ell,
        "pinf": e.ell.pinf.fmt_var("lambda"),
        "q_den": e.state.q_den.fmt_var("t"),
        "order": e.order,
        "coefficients": coefficient_dump(&e.series),
        "residual_valuation": valuation(&residual_valuation(p, &e.series, e.order, e.report.m)),
        "residual_target": e.order + e.report.m + 1,
        "growth": { "c_pole": g.c_pole, "c_infinity": g.c_infinity, "all_pass": g.all_pass(), "rows": rows },
        "solver": solver,
    }))
}

pub fn expand(c: &Common) -> Result<u8> {
    let p = load(c)?;
    let e = run_expand(&p, c)?;
    emit(&merge(header("expand", c), expansion_json(&p, &e)?), c.out.as_deref())?;
    Ok(0)
}

fn certificate_json(cert: &Certificate) -> Value {
    let per_k: Vec<VerdictView> = cert.run.certs.iter().map(VerdictView::from).collect();
    let monomials: Vec<Value> =
        cert.run.monomials.iter().map(|m| json!({ "alpha": m.alpha.to_string(), "mu": m.mu, "nu": m.nu, "power": m.power })).collect();
    json!({
        "r": cert.ctx.r.to_string(),
        "q": cert.ctx.q.fmt_var("t"),
        "q_power": cert.q_power,
        "constants": cert.ctx.view(),
        "majorant_monomials": monomials,
        "per_k": per_k,
        "all_pass": cert.run.all_pass(),
        "summary": cert.summary(),
    })
}

pub fn certify(c: &Common) -> Result<u8> {
    let p = load(c)?;
    let e = run_expand(&p, c)?;
    let cert = certify_expansion(&e, p.precision_bits as u32)?;
    emit(&merge(header("certify", c), certificate_json(&cert)), c.out.as_deref())?;
    Ok(if cert.run.all_pass() { 0 } else { 3 })
}

fn points(n: &Numeric, p: &Problem) -> Result<Vec<C64>> {
    if !n.x.is_empty() {
        return n
            .x
            .iter()
            .map(|s| {
                let bad = || Error::InvalidProblem(format!("--x expects RE,IM, got '{s}'"));
                let (a, b) = s.split_once(',').ok_or_else(bad)?;
                Ok(C64::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
            })
            .collect();
    }
    let spec = p.sector.ok_or_else(|| Error::InvalidSector("no sector given (use --sector or the problem file)".into()))?;
    sector_points(&spec)
}

fn rows_for(p: &Problem, e: &Expansion, xs: &[C64], orders: &[usize]) -> Result<Vec<Row>> {
    let mut ev = Evaluator::new(p.precision_bits);
    let mut rows = Vec::new();
    for &x in xs {
        for &n in orders {
            let value = ev.eval_series(&e.series, n, x)?.to_c64();
            let res = ev.residual(&p.ode, &e.series, n, x)?;
            rows.push(Row { x, n, value, residual_abs: bf_to_f64(&res) });
        }
    }
    Ok(rows)
}

fn numeric_doc(command: &str, n: &Numeric, orders: &[usize]) -> Result<(Value, Vec<Row>)> {
    let p = load(&n.common)?;
    let e = run_expand(&p, &n.common)?;
    let xs = points(n, &p)?;
    let rows = rows_for(&p, &e, &xs, orders)?;
    let doc = merge(
        header(command, &n.common),
        json!({ "precision_bits": p.precision_bits, "order": e.order, "rows": rows.iter().map(Row::json).collect::<Vec<_>>() }),
    );
    Ok((doc, rows))
}

fn finish_numeric(n: &Numeric, doc: &Value, rows: &[Row]) -> Result<u8> {
    emit(doc, n.common.out.as_deref())?;
    if let Some(path) = &n.csv {
        write_csv(rows, path)?;
    }
    Ok(0)
}

fn order_of(n: &Numeric) -> Result<usize> {
    Ok(load(&n.common)?.expand_to)
}

pub fn evaluate(n: &Numeric) -> Result<u8> {
    let order = order_of(n)?;
    let (doc, rows) = numeric_doc("evaluate", n, &[order])?;
    finish_numeric(n, &doc, &rows)
}

pub fn residual(n: &Numeric) -> Result<u8> {
    let order = order_of(n)?;
    let orders: Vec<usize> = (1..=order).collect();
    let (doc, rows) = numeric_doc("residual", n, &orders)?;
    finish_numeric(n, &doc, &rows)
}

fn oracle_dir(r: &ReportArgs) -> PathBuf {
    r.oracles_dir.clone().unwrap_or_else(|| r.numeric.common.problem.parent().unwrap_or(Path::new(".")).join("oracles"))
}

pub fn report(r: &ReportArgs) -> Result<u8> {
    let c = &r.numeric.common;
    let p = load(c)?;
    let cond = check_condition(&p, None)?;
    if !cond.holds {
        let doc = merge(header("report", c), json!({ "condition": condition_json(&cond) }));
        emit(&doc, c.out.as_deref())?;
        return Ok(2);
    }
    let e = expand_series(&p, p.expand_to, c.exact_bounds)?;
    let mut doc = merge(header("report", c), json!({ "condition": condition_json(&cond), "expansion": expansion_json(&p, &e)? }));

    // exact residual valuation for every truncation order
    let vals: Vec<Value> = (0..=e.order)
        .map(|n| {
            let v = residual_valuation(&p, &e.series, n, cond.m);
            json!({ "N": n, "valuation": valuation(&v), "target": n + cond.m + 1, "pass": v.lower_bound() > n + cond.m })
        })
        .collect();
    doc["residual_valuations"] = json!(vals);

    let mut norms: Vec<(usize, f64)> = Vec::new();
    doc["certificate"] = match certify_expansion(&e, p.precision_bits as u32) {
        Ok(cert) => {
            norms = cert.run.certs.iter().map(|v| (v.k, powerlog::exact::rational_to_f64(&v.lhs_hi))).collect();
            certificate_json(&cert)
        }
        Err(err) => json!({ "error": error_value(&err) }),
    };
    doc["radius_estimate"] = match radius_estimate(&norms) {
        Ok(est) => json!(est),
        Err(err) => json!({ "error": error_value(&err) }),
    };

    let mut rows = Vec::new();
    if r.numeric.x.is_empty() && p.sector.is_none() {
        doc["numeric"] = json!({ "skipped": "no sector" });
    } else {
        let xs = points(&r.numeric, &p)?;
        let mut orders: Vec<usize> = (2..=e.order).step_by(2).collect();
        if orders.last() != Some(&e.order) {
            orders.push(e.order);
        }
        rows = rows_for(&p, &e, &xs, &orders)?;
        doc["numeric"] = json!({ "precision_bits": p.precision_bits, "rows": rows.iter().map(Row::json).collect::<Vec<_>>() });
    }

    if r.with_oracles {
        let cases = load_oracle_cases(oracle_dir(r))?;
        let outcomes = cases.iter().map(run_oracle_case).collect::<Result<Vec<_>>>()?;
        doc["oracles"] = json!({ "all_pass": outcomes.iter().all(|o| o.pass), "cases": outcomes });
    }
    emit(&doc, c.out.as_deref())?;
    if let Some(path) = &r.numeric.csv {
        write_csv(&rows, path)?;
    }
    Ok(0)
}
