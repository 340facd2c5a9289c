//! Brute-force reference computations, deliberately independent of the
//! algorithms they check, and the oracle case files that exercise them.

use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{solve_linear_system, GaussianRational, LinearVerdict, Matrix, Poly, RatFunc};
use crate::frontend::{parse_ratfunc, SeedEntry};
use crate::majorant::{majorant_recursion, MajorantMonomial};
use crate::series::PowerLogSeries;

fn poly_of(f: &RatFunc) -> Result<Poly> {
    if !f.is_polynomial() {
        return Err(Error::InvalidProblem(format!("expected a polynomial, got {f}")));
    }
    Ok(f.num().clone())
}

/// `Σ c_j (λ₀ + d/dt)^j p` on polynomials.
fn apply_const_operator(c: &[GaussianRational], lambda0: &GaussianRational, p: &Poly) -> Poly {
    let mut acc = Poly::zero();
    let mut cur = p.clone();
    for (j, cj) in c.iter().enumerate() {
        if j > 0 {
            cur = &cur.scale(lambda0) + &cur.derivative();
        }
        acc = &acc + &cur.scale(cj);
    }
    acc
}

/// Polynomial `P` of degree `≤ deg_cap` with `Σ c_j (λ₀ + d/dt)^j P = rhs`.
///
/// When `Σ c_j λ₀^j ≠ 0` the operator is triangular on `1, t, t², …` and the
/// coefficients are found top-down; otherwise the capped system is solved
/// with free coefficients set to zero. `None` when no solution exists.
pub fn oracle_undetermined(c: &[GaussianRational], lambda0: &GaussianRational, rhs: &Poly, deg_cap: usize) -> Option<Poly> {
    if rhs.is_zero() {
        return Some(Poly::zero());
    }
    let diag = c.iter().rev().fold(GaussianRational::zero(), |acc, cj| &(&acc * lambda0) + cj);
    if rhs.degree().unwrap() > deg_cap {
        return None;
    }
    if !diag.is_zero() {
        let mut rest = rhs.clone();
        let mut out = Poly::zero();
        for i in (0..=deg_cap).rev() {
            let ci = rest.coeff(i);
            if ci.is_zero() {
                continue;
            }
            let mono = Poly::monomial(&ci / &diag, i);
            rest = &rest - &apply_const_operator(c, lambda0, &mono);
            out = &out + &mono;
        }
        return rest.is_zero().then_some(out);
    }
    let cols = deg_cap + 1;
    let mut m = Matrix::zeros(cols, cols);
    for i in 0..cols {
        let img = apply_const_operator(c, lambda0, &Poly::monomial(GaussianRational::one(), i));
        for r in 0..cols {
            m.set(r, i, img.coeff(r));
        }
    }
    let b: Vec<GaussianRational> = (0..cols).map(|r| rhs.coeff(r)).collect();
    match solve_linear_system(&m, &b) {
        LinearVerdict::Inconsistent => None,
        v => Some(Poly::new(v.solution().unwrap().to_vec())),
    }
}

/// Multiplicative inverse up to `x^N`.
pub fn oracle_invert(series: &PowerLogSeries, n_max: usize) -> Result<PowerLogSeries> {
    let r0 = series.coeff(0);
    if r0.is_zero() {
        return Err(Error::NotInvertible);
    }
    let inv0 = r0.inv()?;
    let mut w: Vec<RatFunc> = vec![inv0.clone()];
    for k in 1..=n_max {
        let mut acc = RatFunc::zero();
        for j in 1..=k {
            let rj = series.coeff(j);
            if !rj.is_zero() && !w[k - j].is_zero() {
                acc = &acc + &(&rj * &w[k - j]);
            }
        }
        w.push(-(&acc * &inv0));
    }
    Ok(PowerLogSeries::from_terms(w.into_iter().enumerate(), n_max))
}

/// `P̃_1…P̃_N` by iterating `U ← x·M̃(x, t, U)/σ` on truncated series.
pub fn oracle_bruteforce_majorant(monomials: &[MajorantMonomial], sigma: &BigRational, n_max: usize) -> Vec<Poly> {
    let inv = GaussianRational::real(sigma.recip());
    let mut u = PowerLogSeries::zero(n_max);
    for _ in 0..n_max {
        let mut next = PowerLogSeries::zero(n_max);
        for m in monomials {
            let coef = RatFunc::from(Poly::monomial(GaussianRational::real(m.alpha.clone()), m.nu as usize));
            let term = u.pow(m.power).scale(&coef).mul_x_pow(m.mu as usize + 1);
            next = next.add(&term);
        }
        u = next.scale_scalar(&inv);
    }
    (1..=n_max).map(|k| u.coeff(k).num().clone()).collect()
}

/// A majorant monomial in case files.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialSpec {
    pub alpha: String,
    pub mu: u32,
    pub nu: u32,
    pub power: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleInput {
    Undetermined { operator: Vec<String>, lambda0: String, rhs: String, deg_cap: usize },
    Invert { series: Vec<SeedEntry>, order: usize },
    Majorant { monomials: Vec<MonomialSpec>, sigma: String, order: usize },
}

/// One stored oracle case; `expected` is a list of expressions, or `["none"]`
/// / `["error"]` for the negative outcomes.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCase {
    pub name: String,
    pub input: OracleInput,
    pub expected: Vec<String>,
    pub provenance: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn scalar(s: &str) -> Result<GaussianRational> {
    parse_ratfunc(s)?.as_constant().ok_or_else(|| Error::InvalidProblem(format!("expected a constant, got '{s}'")))
}

fn positive_rational(s: &str) -> Result<BigRational> {
    let c = scalar(s)?;
    if !c.is_real() || c.re() <= &BigRational::from_integer(0.into()) {
        return Err(Error::InvalidProblem(format!("expected a positive rational, got '{s}'")));
    }
    Ok(c.re().clone())
}

fn render(items: &[RatFunc]) -> Vec<String> {
    items.iter().map(|f| f.to_string()).collect()
}

/// Evaluates a case and compares with its expectation. For majorant cases
/// the brute-force oracle and the recursion must both match.
pub fn run_oracle_case(case: &OracleCase) -> Result<OracleOutcome> {
    let expected: Vec<String> = case.expected.clone();
    let (got, extra): (Vec<String>, Option<Vec<String>>) = match &case.input {
        OracleInput::Undetermined { operator, lambda0, rhs, deg_cap } => {
            let c: Vec<GaussianRational> = operator.iter().map(|s| scalar(s)).collect::<Result<_>>()?;
            let l = scalar(lambda0)?;
            let r = poly_of(&parse_ratfunc(rhs)?)?;
            let out = match oracle_undetermined(&c, &l, &r, *deg_cap) {
                Some(p) => vec![RatFunc::from(p).to_string()],
                None => vec!["none".into()],
            };
            (out, None)
        }
        OracleInput::Invert { series, order } => {
            let s =
                PowerLogSeries::from_terms(series.iter().map(|e| Ok((e.k, parse_ratfunc(&e.value)?))).collect::<Result<Vec<_>>>()?, *order);
            let out = match oracle_invert(&s, *order) {
                Ok(w) => render(&(0..=*order).map(|k| w.coeff(k)).collect::<Vec<_>>()),
                Err(_) => vec!["error".into()],
            };
            (out, None)
        }
        OracleInput::Majorant { monomials, sigma, order } => {
            let monos: Vec<MajorantMonomial> = monomials
                .iter()
                .map(|m| Ok(MajorantMonomial { alpha: positive_rational(&m.alpha)?, mu: m.mu, nu: m.nu, power: m.power }))
                .collect::<Result<_>>()?;
            let s = positive_rational(sigma)?;
            let brute: Vec<RatFunc> = oracle_bruteforce_majorant(&monos, &s, *order).into_iter().map(RatFunc::from).collect();
            let rec: Vec<RatFunc> = majorant_recursion(&monos, &s, *order).into_iter().map(RatFunc::from).collect();
            (render(&brute), Some(render(&rec)))
        }
    };
    // compare after canonical re-printing of the expectation
    let canon: Vec<String> = expected
        .iter()
        .map(
            |e| if e == "none" || e == "error" { e.clone() } else { parse_ratfunc(e).map(|f| f.to_string()).unwrap_or_else(|_| e.clone()) },
        )
        .collect();
    let mut pass = got == canon;
    let mut detail = format!("got [{}]", got.join(", "));
    if let Some(rec) = extra {
        pass &= rec == canon;
        detail.push_str(&format!("; recursion [{}]", rec.join(", ")));
    }
    Ok(OracleOutcome { name: case.name.clone(), pass, detail })
}

/// Loads every `*.json` case in `dir`, sorted by file name.
pub fn load_oracle_cases(dir: impl AsRef<Path>) -> Result<Vec<OracleCase>> {
    let dir = dir.as_ref();
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::InvalidProblem(format!("{}: {e}", p.display())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        poly_of(&parse_ratfunc(s).unwrap()).unwrap()
    }

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn undetermined_examples() {
        // 2(d/dt + 2)P = 4t³
        let out = oracle_undetermined(&[g(0), g(2)], &g(2), &p("4*t^3"), 5).unwrap();
        assert_eq!(out, p("t^3 - 3/2*t^2 + 3/2*t - 3/4"));
        assert_eq!(oracle_undetermined(&[g(0), g(2)], &g(2), &Poly::zero(), 5), Some(Poly::zero()));
        assert_eq!(oracle_undetermined(&[g(0), g(1)], &g(0), &Poly::one(), 3), Some(p("t")));
        // d/dt P = t³ has no solution of degree ≤ 3
        assert_eq!(oracle_undetermined(&[g(0), g(1)], &g(0), &p("t^3"), 3), None);
    }

    #[test]
    fn invert_examples() {
        let p2 = parse_ratfunc("t^3 - 3/2*t^2 + 3/2*t - 3/4").unwrap();
        let s = PowerLogSeries::from_terms([(0, RatFunc::t()), (2, p2.clone())], 2);
        let w = oracle_invert(&s, 2).unwrap();
        assert_eq!(w.coeff(0), parse_ratfunc("1/t").unwrap());
        assert!(w.coeff(1).is_zero());
        assert_eq!(w.coeff(2), -(&p2 * &parse_ratfunc("1/t^2").unwrap()));
        let one = PowerLogSeries::constant(RatFunc::one(), 3);
        assert_eq!(oracle_invert(&one, 3).unwrap(), one);
        let xt = PowerLogSeries::from_terms([(1, RatFunc::t())], 3);
        assert!(matches!(oracle_invert(&xt, 3), Err(Error::NotInvertible)));
    }

    #[test]
    fn bruteforce_matches_recursion() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let monos = vec![
            MajorantMonomial { mu: 0, nu: 1, power: 0, alpha: q(1, 1) },
            MajorantMonomial { mu: 0, nu: 0, power: 2, alpha: q(1, 1) },
            MajorantMonomial { mu: 1, nu: 2, power: 1, alpha: q(3, 2) },
        ];
        for s in [q(1, 1), q(1, 3), q(2, 1)] {
            assert_eq!(oracle_bruteforce_majorant(&monos, &s, 6), majorant_recursion(&monos, &s, 6));
        }
        // doubling σ halves P̃_1
        let a = oracle_bruteforce_majorant(&monos[..1], &q(1, 1), 3);
        let b = oracle_bruteforce_majorant(&monos[..1], &q(2, 1), 3);
        assert_eq!(a[0], b[0].scale(&g(2)));
    }
}
