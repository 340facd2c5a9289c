//! The nondegeneracy condition on a formal solution prefix, the reduction
//! `y = φ_ℓ + x^ℓ u` to `L(δ)u = x·M(x, ln x, u, (δ+ℓ)u, …)`, and the choice of `ℓ`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{binomial, poly_lcm, squarefree_part, GaussianRational, Poly, RatFunc};
use crate::frontend::{AlgebraicOde, MonoKey, Problem};
use crate::recurse::{apply_operator, solve_rational_ode, SolveOptions};
use crate::series::{partial_series, substitute, PowerLogSeries, Valuation};

/// Outcome of [`check_condition`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    /// Valuation of `∂F/∂y_n` on the prefix jets.
    pub m: usize,
    /// `x^m` coefficients of `∂F/∂y_j`, `j = 0…n`.
    pub a: Vec<RatFunc>,
    /// Valuation of each partial on the prefix.
    pub valuations: Vec<Valuation>,
    /// Weak reading: `val ≥ m` for every `j`, equality for `j = n`.
    pub holds: bool,
    /// Strict reading: `val = m` for every `j`.
    pub holds_strict: bool,
    /// Truncation order used for the partials.
    pub depth_used: usize,
    /// `(m, a)` unchanged when recomputed at `depth_used + 1`.
    pub stable: bool,
    /// `m` lies within the seed, so the extracted coefficients are final.
    pub certified: bool,
}

fn partials_at(ode: &AlgebraicOde, seed: &PowerLogSeries, depth: usize) -> Result<(usize, Vec<RatFunc>, Vec<Valuation>)> {
    let n = ode.order();
    let jets = seed.with_trunc(depth).jet(n, 0);
    let parts: Vec<PowerLogSeries> = (0..=n).map(|j| partial_series(ode, j, &jets)).collect();
    let vals: Vec<Valuation> = parts.iter().map(|s| s.valuation()).collect();
    let m = vals[n].value().ok_or(Error::Indeterminate { n, depth })?;
    let a = parts.iter().map(|s| s.coeff(m)).collect();
    Ok((m, a, vals))
}

/// Checks the nondegeneracy hypothesis on the seed prefix. `depth` counts
/// x-orders past the first nonzero seed term.
pub fn check_condition(problem: &Problem, depth: Option<usize>) -> Result<ConditionReport> {
    let seed = problem.seed_series(problem.seed_order);
    let v0 = seed.valuation().value().unwrap_or(0);
    let depth = v0 + depth.unwrap_or(problem.check_depth);
    let (m, a, valuations) = partials_at(&problem.ode, &seed, depth)?;
    let (m2, a2, _) = partials_at(&problem.ode, &seed, depth + 1)?;
    let stable = m == m2 && a == a2;
    let certified = m <= problem.seed_order;
    let weak = valuations.iter().all(|v| v.lower_bound() >= m);
    let holds = weak && stable && certified;
    let holds_strict = holds && valuations.iter().all(|v| *v == Valuation::At(m));
    Ok(ConditionReport { m, a, valuations, holds, holds_strict, depth_used: depth, stable, certified })
}

/// Leading data of the normalized operator at `t = ∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct InfinityData {
    /// Common degree `p = max_j deg_∞ a_j ≥ 0`.
    pub p: i64,
    /// `P_∞(λ) = Σ a_{j,p} λ^j`.
    pub pinf: Poly,
}

/// `p` and `P_∞` for normalized coefficients (`a_n = 1`).
pub fn infinity_data(a: &[RatFunc]) -> InfinityData {
    let p = a.iter().filter_map(|x| x.degree_at_infinity()).max().unwrap_or(0);
    let coeffs = a
        .iter()
        .map(|x| match x.degree_at_infinity() {
            Some(d) if d == p => x.num().leading_coeff().unwrap() / x.den().leading_coeff().unwrap(),
            _ => GaussianRational::zero(),
        })
        .collect();
    InfinityData { p, pinf: Poly::new(coeffs) }
}

/// `a_j / a_n`.
pub fn normalize_coefficients(a: &[RatFunc]) -> Result<Vec<RatFunc>> {
    let lead = a.last().ok_or_else(|| Error::InvalidProblem("empty operator".into()))?;
    a.iter().map(|x| x.checked_div(lead)).collect()
}

/// Result of [`choose_ell`].
#[derive(Clone, Debug, PartialEq)]
pub struct EllChoice {
    pub ell: usize,
    pub p: i64,
    pub pinf: Poly,
    pub integer_roots: Vec<BigInt>,
}

/// Smallest `ℓ > m` such that `P_∞` has no integer root above `ℓ`.
pub fn choose_ell_from(m: usize, a_normalized: &[RatFunc]) -> Result<EllChoice> {
    let InfinityData { p, pinf } = infinity_data(a_normalized);
    let roots = pinf.integer_roots()?;
    let top = roots.iter().filter_map(|r| usize::try_from(r).ok()).max().unwrap_or(0);
    Ok(EllChoice { ell: (m + 1).max(top), p, pinf, integer_roots: roots })
}

pub fn choose_ell(report: &ConditionReport) -> Result<EllChoice> {
    if !report.holds {
        return Err(Error::ConditionFailed("nondegeneracy condition does not hold".into()));
    }
    choose_ell_from(report.m, &normalize_coefficients(&report.a)?)
}

/// Extends the seed to `Φ_ℓ`, solving for the missing `R_k`
/// (`seed_order < k ≤ ℓ`) from the linearization at `x^{m+k}`.
pub fn complete_seed(problem: &Problem, report: &ConditionReport, ell: usize, opts: &SolveOptions) -> Result<PowerLogSeries> {
    let n = problem.ode.order();
    let m = report.m;
    let mut phi = problem.seed_series(ell.max(problem.seed_order)).with_trunc(ell);
    if problem.seed_order >= ell {
        return Ok(phi);
    }
    let a = normalize_coefficients(&report.a)?;
    let inf = infinity_data(&a);
    let lead = report.a[n].clone();
    let q_den = squarefree_denominator(a.iter())?;
    for k in problem.seed_order + 1..=ell {
        if k <= m {
            return Err(Error::SeedTooShort { k, reason: format!("coefficients up to x^{m} must be given") });
        }
        if inf.pinf.eval(&GaussianRational::from_int(k as i64)).is_zero() {
            return Err(Error::SeedTooShort { k, reason: format!("P_inf vanishes at {k}, R_{k} is not determined") });
        }
        let fk = substitute(&problem.ode, &phi.with_trunc(m + k).jet(n, 0));
        if let Some(v) = fk.valuation().value().filter(|&v| v < m + k) {
            return Err(Error::Divisibility { what: "F(x, Φ)".into(), found: format!("valuation {v}"), expected: m + k });
        }
        let rhs = (-fk.coeff(m + k)).checked_div(&lead)?;
        let q = squarefree_denominator(std::iter::once(&rhs).chain(a.iter()))?;
        let q = poly_lcm(&q, &q_den)?;
        let sol = solve_rational_ode(&a, k, &rhs, &q, opts, k).map_err(|e| match e {
            Error::NotUnique { .. } | Error::NoRationalSolution { .. } => {
                Error::SeedTooShort { k, reason: format!("cannot complete R_{k}: {e}") }
            }
            e => e,
        })?;
        debug_assert_eq!(apply_operator(&a, k, &sol.value), rhs);
        phi.set(k, sol.value);
    }
    Ok(phi)
}

/// Monic squarefree part of the product of the denominators.
pub fn squarefree_denominator<'a, I: IntoIterator<Item = &'a RatFunc>>(fs: I) -> Result<Poly> {
    let mut acc = Poly::one();
    for f in fs {
        if !f.den().is_constant() {
            acc = poly_lcm(&acc, &squarefree_part(f.den())?)?;
        }
    }
    Ok(acc)
}

/// `F(x, Φ_ℓ-jets + x^ℓ·U-jets)` as a polynomial in `U_0…U_n` with exact
/// power-log coefficients, keyed by the `U`-exponent vector.
pub fn expand_shifted(ode: &AlgebraicOde, phi: &PowerLogSeries, ell: usize) -> BTreeMap<Vec<u32>, PowerLogSeries> {
    let n = ode.order();
    let trunc = ode.poly().x_degree() as usize + ell.max(phi.trunc()) * ode.poly().y_degree() as usize;
    let jets = phi.with_trunc(trunc).jet(n, 0);
    let one = PowerLogSeries::constant(RatFunc::one(), trunc);
    let mut powers: Vec<Vec<PowerLogSeries>> = (0..=n).map(|j| vec![one.clone(), jets.get(j).clone()]).collect();
    let mut out: BTreeMap<Vec<u32>, PowerLogSeries> = BTreeMap::new();
    for (key, c) in ode.poly().terms() {
        // distribute: Π_j Σ_s C(q_j, s) φ_j^{q_j − s} x^{ℓ s} U_j^s
        let mut partial: Vec<(Vec<u32>, PowerLogSeries)> = vec![(Vec::new(), one.scale_scalar(c).mul_x_pow(key.mu as usize))];
        for (j, &qj) in key.q.iter().enumerate() {
            while powers[j].len() <= qj as usize {
                let next = powers[j].last().unwrap().mul(jets.get(j));
                powers[j].push(next);
            }
            let mut next = Vec::new();
            for (s_vec, coeff) in &partial {
                for s in 0..=qj {
                    let b = GaussianRational::real(binomial(qj as u64, s as u64).into());
                    let term = coeff.mul(&powers[j][(qj - s) as usize]).scale_scalar(&b).mul_x_pow(ell * s as usize);
                    if term.is_zero() {
                        continue;
                    }
                    let mut sv = s_vec.clone();
                    sv.push(s);
                    next.push((sv, term));
                }
            }
            partial = next;
        }
        for (s_vec, term) in partial {
            let e = out.entry(s_vec).or_insert_with(|| PowerLogSeries::zero(trunc));
            *e = e.add(&term);
        }
    }
    out.retain(|_, s| !s.is_zero());
    out
}

/// `L(δ)u = x·M(x, ln x, u, (δ+ℓ)u, …, (δ+ℓ)^n u)` with `a_n = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedEquation {
    pub ell: usize,
    pub n: usize,
    pub m: usize,
    /// Normalized `a_0…a_n`.
    pub a: Vec<RatFunc>,
    /// The original `a_n` divided out.
    pub lead: RatFunc,
    /// `b_{q,μ}`: coefficient of `x^μ·U_0^{q_0}⋯U_n^{q_n}` in `M`.
    pub monomials: BTreeMap<MonoKey, RatFunc>,
    pub p: i64,
    pub pinf: Poly,
    /// The prefix `Φ_ℓ`.
    pub phi: PowerLogSeries,
}

impl ReducedEquation {
    /// Squarefree common denominator of all `a_j` and `b_{q,μ}`.
    pub fn q_den(&self) -> Result<Poly> {
        squarefree_denominator(self.a.iter().chain(self.monomials.values()))
    }

    /// `C₀ = n + max |deg num − deg den|` over the `b_{q,μ}`.
    pub fn heuristic_slope(&self) -> usize {
        let imbalance = self.monomials.values().map(|b| b.degree_at_infinity().unwrap_or(0).unsigned_abs() as usize).max().unwrap_or(0);
        self.n + imbalance
    }

    /// `b_{0,0} = M(0, t, 0, …, 0)`.
    pub fn constant_term(&self) -> RatFunc {
        self.monomials.get(&MonoKey { mu: 0, q: vec![0; self.n + 1] }).cloned().unwrap_or_default()
    }

    /// `lead · x^{m+ℓ} · (L − x·M)` in the same layout as [`expand_shifted`].
    pub fn reassemble(&self) -> BTreeMap<Vec<u32>, BTreeMap<usize, RatFunc>> {
        let shift = self.m + self.ell;
        let mut out: BTreeMap<Vec<u32>, BTreeMap<usize, RatFunc>> = BTreeMap::new();
        for (j, aj) in self.a.iter().enumerate() {
            if aj.is_zero() {
                continue;
            }
            let mut q = vec![0; self.n + 1];
            q[j] = 1;
            out.entry(q).or_default().insert(shift, aj * &self.lead);
        }
        for (key, b) in &self.monomials {
            let slot = out.entry(key.q.clone()).or_default().entry(shift + 1 + key.mu as usize).or_default();
            *slot = &*slot - &(b * &self.lead);
        }
        for v in out.values_mut() {
            v.retain(|_, r| !r.is_zero());
        }
        out.retain(|_, v| !v.is_empty());
        out
    }
}

/// Performs the reduction for a prefix `phi = Φ_ℓ` (coefficients up to `ℓ`).
pub fn reduce_with_prefix(ode: &AlgebraicOde, report: &ConditionReport, phi: &PowerLogSeries, ell: usize) -> Result<ReducedEquation> {
    let m = report.m;
    if ell <= m {
        return Err(Error::EllTooSmall { ell, m });
    }
    let n = ode.order();
    let shift = m + ell;
    let expanded = expand_shifted(ode, &phi.with_trunc(ell), ell);
    let lead = report.a[n].clone();
    let mut a = vec![RatFunc::zero(); n + 1];
    let mut monomials = BTreeMap::new();
    for (s, series) in &expanded {
        let degree: u32 = s.iter().sum();
        if let Some(v) = series.valuation().value() {
            let need = if degree == 1 { shift } else { shift + 1 };
            if v < need {
                let what = if degree == 0 { "F(x, Φ_ℓ)".to_string() } else { format!("coefficient of U^{s:?}") };
                return Err(Error::Divisibility { what, found: format!("valuation {v}"), expected: need });
            }
        }
        for (k, r) in series.terms() {
            if degree == 1 && k == shift {
                let j = s.iter().position(|&e| e == 1).unwrap();
                a[j] = r.checked_div(&lead)?;
                continue;
            }
            let mu = (k - shift - 1) as u32;
            monomials.insert(MonoKey { mu, q: s.clone() }, (-r).checked_div(&lead)?);
        }
    }
    for (j, aj) in a.iter().enumerate() {
        if (aj * &lead) != report.a[j] {
            return Err(Error::ConditionFailed(format!("leading coefficient of ∂F/∂y{j} changed under reduction")));
        }
    }
    let InfinityData { p, pinf } = infinity_data(&a);
    Ok(ReducedEquation { ell, n, m, a, lead, monomials, p, pinf, phi: phi.with_trunc(ell) })
}

/// Full reduction: checks that the condition holds, completes the seed to
/// `Φ_ℓ` and reduces.
pub fn reduce_equation(problem: &Problem, report: &ConditionReport, ell: usize, opts: &SolveOptions) -> Result<ReducedEquation> {
    if !report.holds {
        return Err(Error::ConditionFailed("nondegeneracy condition does not hold".into()));
    }
    if ell <= report.m {
        return Err(Error::EllTooSmall { ell, m: report.m });
    }
    let phi = complete_seed(problem, report, ell, opts)?;
    reduce_with_prefix(&problem.ode, report, &phi, ell)
}
