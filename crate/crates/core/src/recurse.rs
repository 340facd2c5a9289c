//! Coefficient recursion for the reduced equation: each `R_{ℓ+k}` is the unique
//! rational solution of `Σ a_j(t)(ℓ+k+d/dt)^j R = R̃_k(t)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::{poly_lcm, solve_linear_system, GaussianRational, LinearVerdict, Matrix, Poly, RatFunc};
use crate::frontend::{MonoKey, Problem};
use crate::reduce::{check_condition, choose_ell, infinity_data, reduce_equation, ConditionReport, EllChoice, ReducedEquation};
use crate::series::{substitute, PowerLogSeries, Valuation};

/// `Σ_j a_j (λ₀ + d/dt)^j r`.
pub fn apply_operator(a: &[RatFunc], lambda0: usize, r: &RatFunc) -> RatFunc {
    let lambda = GaussianRational::from_int(lambda0 as i64);
    let mut acc = RatFunc::zero();
    let mut cur = r.clone();
    for (j, aj) in a.iter().enumerate() {
        if j > 0 {
            cur = cur.shifted_derivative(&lambda);
        }
        if !aj.is_zero() {
            acc = &acc + &(aj * &cur);
        }
    }
    acc
}

/// How the ansatz `N(t)/D(t)` is sized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Derive the pole orders from indicial polynomials when the pole set is
    /// rational; otherwise (or when unavailable) escalate adaptively.
    pub exact_bounds: bool,
    /// Number of escalation steps before giving up.
    pub max_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { exact_bounds: false, max_steps: 16 }
    }
}

/// Which sizing strategy produced a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundsMode {
    Adaptive,
    Exact,
    /// Right-hand side was zero.
    Trivial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub value: RatFunc,
    pub mode: BoundsMode,
    /// Denominator of the accepted ansatz.
    pub ansatz_den: Poly,
    /// Degree bound of the accepted numerator.
    pub ansatz_deg: usize,
    /// Escalations performed (adaptive mode).
    pub steps: usize,
}

enum Attempt {
    Solved(RatFunc),
    Inconsistent,
    Kernel(usize),
}

fn attempt(a: &[RatFunc], lambda0: usize, rhs: &RatFunc, den: &Poly, deg: usize) -> Result<Attempt> {
    let images: Vec<RatFunc> = (0..=deg)
        .map(|i| {
            let basis = RatFunc::normalize(Poly::monomial(GaussianRational::one(), i), den.clone())?;
            Ok(apply_operator(a, lambda0, &basis))
        })
        .collect::<Result<_>>()?;
    let mut w = rhs.den().monic();
    for img in &images {
        if !img.den().is_constant() {
            w = poly_lcm(&w, img.den())?;
        }
    }
    let to_poly = |f: &RatFunc| -> Poly { f.mul_poly(&w).num().clone() };
    let cols: Vec<Poly> = images.iter().map(to_poly).collect();
    let target = to_poly(rhs);
    let rows = cols.iter().chain(std::iter::once(&target)).filter_map(|p| p.degree()).max().map_or(0, |d| d + 1);
    let mut m = Matrix::zeros(rows, deg + 1);
    for (c, p) in cols.iter().enumerate() {
        for (r, v) in p.coeffs().iter().enumerate() {
            m.set(r, c, v.clone());
        }
    }
    let b: Vec<GaussianRational> = (0..rows).map(|r| target.coeff(r)).collect();
    Ok(match solve_linear_system(&m, &b) {
        LinearVerdict::Unique(x) => Attempt::Solved(RatFunc::normalize(Poly::new(x), den.clone())?),
        LinearVerdict::Underdetermined { kernel, .. } => Attempt::Kernel(kernel.len()),
        LinearVerdict::Inconsistent => Attempt::Inconsistent,
    })
}

/// Order of vanishing of `f` at `t0` (negative for a pole) and the leading
/// coefficient there.
fn local_leading(f: &RatFunc, t0: &GaussianRational) -> (i64, GaussianRational) {
    let n = f.num().taylor_shift(t0);
    let d = f.den().taylor_shift(t0);
    let (vn, vd) = (n.low_degree().unwrap(), d.low_degree().unwrap());
    (vn as i64 - vd as i64, &n.coeff(vn) / &d.coeff(vd))
}

/// Pole-order bound at a rational point `t0` from the indicial polynomial.
fn indicial_bound(a: &[RatFunc], rhs: &RatFunc, t0: &GaussianRational) -> Result<usize> {
    let lead: Vec<Option<(i64, GaussianRational)>> = a.iter().map(|aj| (!aj.is_zero()).then(|| local_leading(aj, t0))).collect();
    let gamma = lead.iter().enumerate().filter_map(|(j, l)| l.as_ref().map(|(v, _)| j as i64 - v)).max().unwrap();
    // P(s) = Σ_{j − v_j = γ} A_j (−s)(−s−1)⋯(−s−j+1)
    let mut indicial = Poly::zero();
    for (j, l) in lead.iter().enumerate() {
        let Some((v, c)) = l else { continue };
        if j as i64 - v != gamma {
            continue;
        }
        let mut ff = Poly::constant(c.clone());
        for i in 0..j {
            ff = &ff * &Poly::new(vec![GaussianRational::from_int(-(i as i64)), GaussianRational::from_int(-1)]);
        }
        indicial = &indicial + &ff;
    }
    let root_max = indicial.integer_roots()?.into_iter().filter_map(|r| usize::try_from(r).ok()).max().unwrap_or(0);
    let rhs_pole = if rhs.is_zero() { 0 } else { (-local_leading(rhs, t0).0).max(0) };
    Ok(root_max.max((rhs_pole - gamma).max(0) as usize))
}

/// Unique rational solution of `Σ a_j (λ₀ + d/dt)^j R = rhs` for normalized
/// `a` (`a_n = 1`), with poles confined to the roots of `q_den`.
pub fn solve_rational_ode(
    a: &[RatFunc],
    lambda0: usize,
    rhs: &RatFunc,
    q_den: &Poly,
    opts: &SolveOptions,
    k: usize,
) -> Result<SolveOutcome> {
    if rhs.is_zero() {
        return Ok(SolveOutcome { value: RatFunc::zero(), mode: BoundsMode::Trivial, ansatz_den: Poly::one(), ansatz_deg: 0, steps: 0 });
    }
    let inf = infinity_data(a);
    if inf.pinf.eval(&GaussianRational::from_int(lambda0 as i64)).is_zero() {
        return Err(Error::NotUnique { k, dim: 1 });
    }
    let mu = rhs.degree_at_infinity().unwrap() - inf.p;
    let accept = |value: RatFunc, mode, den: Poly, deg, steps| -> Result<SolveOutcome> {
        if apply_operator(a, lambda0, &value) != *rhs {
            return Err(Error::NoRationalSolution { k });
        }
        Ok(SolveOutcome { value, mode, ansatz_den: den, ansatz_deg: deg, steps })
    };

    if opts.exact_bounds {
        if let Some(roots) = q_den.rational_linear_factors() {
            let mut den = Poly::one();
            for (t0, _) in &roots {
                let t0 = GaussianRational::real(t0.clone());
                let e = indicial_bound(a, rhs, &t0)?;
                let lin = Poly::new(vec![-&t0, GaussianRational::one()]);
                den = &den * &lin.pow(e as u32);
            }
            let d = mu + den.degree().unwrap() as i64;
            if d < 0 {
                return Err(Error::NoRationalSolution { k });
            }
            return match attempt(a, lambda0, rhs, &den, d as usize)? {
                Attempt::Solved(v) => accept(v, BoundsMode::Exact, den, d as usize, 0),
                Attempt::Kernel(dim) => Err(Error::NotUnique { k, dim }),
                Attempt::Inconsistent => Err(Error::NoRationalSolution { k }),
            };
        }
    }

    let dq = q_den.degree().unwrap_or(0) as i64;
    let e0 = rhs.pole_order_in(q_den).ok_or(Error::PoleOutsideSet { k })?;
    for (steps, e) in (0..=opts.max_steps).zip(e0..) {
        let d = mu + e as i64 * dq;
        if d >= 0 {
            let den = q_den.pow(e as u32);
            match attempt(a, lambda0, rhs, &den, d as usize)? {
                Attempt::Solved(v) => return accept(v, BoundsMode::Adaptive, den, d as usize, steps),
                Attempt::Kernel(dim) => return Err(Error::NotUnique { k, dim }),
                Attempt::Inconsistent => {}
            }
        } else if dq == 0 {
            break;
        }
    }
    Err(Error::NoRationalSolution { k })
}

/// Memoized coefficients of `U_j^e` where `U_j = (δ+ℓ)^j ψ`.
#[derive(Clone, Debug, Default)]
struct PowerTable {
    memo: HashMap<(usize, u32, usize), RatFunc>,
}

impl PowerTable {
    /// `[x^s] U_j^e`, given `jets[i-1][j] = [x^i] U_j`.
    fn get(&mut self, jets: &[Vec<RatFunc>], j: usize, e: u32, s: usize) -> RatFunc {
        if e == 0 {
            return if s == 0 { RatFunc::one() } else { RatFunc::zero() };
        }
        if (s as u64) < e as u64 {
            return RatFunc::zero();
        }
        if e == 1 {
            return jets[s - 1][j].clone();
        }
        if let Some(v) = self.memo.get(&(j, e, s)) {
            return v.clone();
        }
        let mut acc = RatFunc::zero();
        for i in 1..=s + 1 - e as usize {
            let f = &jets[i - 1][j];
            if f.is_zero() {
                continue;
            }
            let rest = self.get(jets, j, e - 1, s - i);
            if !rest.is_zero() {
                acc = &acc + &(f * &rest);
            }
        }
        self.memo.insert((j, e, s), acc.clone());
        acc
    }

    /// `[x^s] Π_j U_j^{q_j}`.
    fn monomial(&mut self, jets: &[Vec<RatFunc>], factors: &[(usize, u32)], s: usize) -> RatFunc {
        match factors {
            [] => {
                if s == 0 {
                    RatFunc::one()
                } else {
                    RatFunc::zero()
                }
            }
            [(j, e)] => self.get(jets, *j, *e, s),
            [(j, e), rest @ ..] => {
                let rest_min: usize = rest.iter().map(|(_, e)| *e as usize).sum();
                let mut acc = RatFunc::zero();
                for s1 in *e as usize..=s.saturating_sub(rest_min) {
                    let head = self.get(jets, *j, *e, s1);
                    if head.is_zero() {
                        continue;
                    }
                    let tail = self.monomial(jets, rest, s - s1);
                    if !tail.is_zero() {
                        acc = &acc + &(&head * &tail);
                    }
                }
                acc
            }
        }
    }
}

/// Coefficients `R_{ℓ+1}, R_{ℓ+2}, …` of the reduced solution `ψ`.
#[derive(Clone, Debug)]
pub struct RecursionState {
    pub reduced: ReducedEquation,
    /// Squarefree common denominator of the `a_j` and `b_{q,μ}`.
    pub q_den: Poly,
    pub opts: SolveOptions,
    coeffs: Vec<RatFunc>,
    rhs: Vec<RatFunc>,
    outcomes: Vec<SolveOutcome>,
    /// `jets[k-1][j] = (ℓ+k+d/dt)^j R_{ℓ+k}`.
    jets: Vec<Vec<RatFunc>>,
    table: PowerTable,
}

impl RecursionState {
    pub fn new(reduced: ReducedEquation, opts: SolveOptions) -> Result<Self> {
        let q_den = reduced.q_den()?;
        Ok(RecursionState {
            reduced,
            q_den,
            opts,
            coeffs: Vec::new(),
            rhs: Vec::new(),
            outcomes: Vec::new(),
            jets: Vec::new(),
            table: PowerTable::default(),
        })
    }

    /// Options with the escalation budget set to four times the heuristic slope.
    pub fn default_options(reduced: &ReducedEquation, exact_bounds: bool) -> SolveOptions {
        SolveOptions { exact_bounds, max_steps: 4 * reduced.heuristic_slope().max(1) }
    }

    /// Number of computed coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `R_{ℓ+k}` for `k ≥ 1`.
    pub fn coeff(&self, k: usize) -> &RatFunc {
        &self.coeffs[k - 1]
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    /// `R̃_k` as used when solving for `R_{ℓ+k}`.
    pub fn rhs(&self, k: usize) -> &RatFunc {
        &self.rhs[k - 1]
    }

    pub fn outcomes(&self) -> &[SolveOutcome] {
        &self.outcomes
    }

    /// `(ℓ+k+d/dt)^j R_{ℓ+k}`.
    pub fn jet(&self, k: usize, j: usize) -> &RatFunc {
        &self.jets[k - 1][j]
    }

    /// `[x^k] x·M(x, t, ψ-jets)`; needs `R_{ℓ+1}…R_{ℓ+k−1}`.
    pub fn build_rhs(&mut self, k: usize) -> RatFunc {
        assert!(k >= 1 && k <= self.coeffs.len() + 1, "coefficients below k must be computed first");
        let mut acc = RatFunc::zero();
        let monomials: Vec<(MonoKey, RatFunc)> = self.reduced.monomials.iter().map(|(m, b)| (m.clone(), b.clone())).collect();
        for (key, b) in monomials {
            let Some(s) = (k - 1).checked_sub(key.mu as usize) else { continue };
            let factors: Vec<(usize, u32)> = key.q.iter().enumerate().filter(|(_, &e)| e > 0).map(|(j, &e)| (j, e)).collect();
            let c = self.table.monomial(&self.jets, &factors, s);
            if !c.is_zero() {
                acc = &acc + &(&b * &c);
            }
        }
        acc
    }

    /// Computes `R_{ℓ+k}` for the next `k`.
    pub fn step(&mut self) -> Result<&RatFunc> {
        let k = self.coeffs.len() + 1;
        let rhs = self.build_rhs(k);
        if !rhs.is_zero() && rhs.pole_order_in(&self.q_den).is_none() {
            return Err(Error::PoleOutsideSet { k });
        }
        let lambda0 = self.reduced.ell + k;
        let out = solve_rational_ode(&self.reduced.a, lambda0, &rhs, &self.q_den, &self.opts, k)?;
        let lambda = GaussianRational::from_int(lambda0 as i64);
        let mut jet = vec![out.value.clone()];
        for j in 1..=self.reduced.n {
            let next = jet[j - 1].shifted_derivative(&lambda);
            jet.push(next);
        }
        self.jets.push(jet);
        self.coeffs.push(out.value.clone());
        self.rhs.push(rhs);
        self.outcomes.push(out);
        Ok(self.coeffs.last().unwrap())
    }

    /// Computes coefficients until `R_{ℓ+k}` is known.
    pub fn run_to(&mut self, k: usize) -> Result<()> {
        while self.coeffs.len() < k {
            self.step()?;
        }
        Ok(())
    }

    /// `ψ = Σ_{k ≥ 1} R_{ℓ+k} x^k` over the computed coefficients.
    pub fn psi(&self, trunc: usize) -> PowerLogSeries {
        PowerLogSeries::from_terms(self.coeffs.iter().enumerate().map(|(i, r)| (i + 1, r.clone())), trunc)
    }

    /// `φ = Φ_ℓ + x^ℓ ψ` truncated at `n_max`.
    pub fn series(&self, n_max: usize) -> PowerLogSeries {
        let ell = self.reduced.ell;
        let mut s = self.reduced.phi.with_trunc(n_max);
        for (i, r) in self.coeffs.iter().enumerate() {
            s.set(ell + i + 1, r.clone());
        }
        s
    }
}

/// Everything produced by [`expand`].
#[derive(Clone, Debug)]
pub struct Expansion {
    pub report: ConditionReport,
    pub ell: EllChoice,
    pub state: RecursionState,
    /// `φ` up to `x^N`.
    pub series: PowerLogSeries,
    pub order: usize,
}

/// Expands the formal solution to order `N`.
pub fn expand(problem: &Problem, n_max: usize, exact_bounds: bool) -> Result<Expansion> {
    let report = check_condition(problem, None)?;
    if !report.holds {
        return Err(Error::ConditionFailed(format!(
            "nondegeneracy condition fails (m = {}, stable = {}, certified = {})",
            report.m, report.stable, report.certified
        )));
    }
    let ell = choose_ell(&report)?;
    let opts = SolveOptions { exact_bounds, ..SolveOptions::default() };
    let reduced = reduce_equation(problem, &report, ell.ell, &opts)?;
    let opts = RecursionState::default_options(&reduced, exact_bounds);
    let mut state = RecursionState::new(reduced, opts)?;
    state.run_to(n_max.saturating_sub(ell.ell))?;
    for (&k, r) in problem.seed.range(ell.ell + 1..) {
        if k <= n_max && state.coeff(k - ell.ell) != r {
            return Err(Error::InvalidProblem(format!("seed coefficient R_{k} disagrees with the recursion")));
        }
    }
    let series = state.series(n_max);
    Ok(Expansion { report, ell, state, series, order: n_max })
}

/// Lower bound on `val F(x, Φ_N)` from an exact computation modulo
/// `x^{N+m+2}`.
pub fn residual_valuation(problem: &Problem, series: &PowerLogSeries, n_max: usize, m: usize) -> Valuation {
    let phi = series.with_trunc(n_max).with_trunc(n_max + m + 1);
    substitute(&problem.ode, &phi.jet(problem.ode.order(), 0)).valuation()
}

/// Measured growth of one coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub k: usize,
    /// Largest pole order at a root of `q_den`.
    pub pole_order: usize,
    /// `−ord_∞ R_{ℓ+k} = deg num − deg den` (`None` for the zero function).
    pub degree_at_infinity: Option<i64>,
    pub pole_bound: usize,
    pub infinity_bound: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub q_den: Poly,
    /// Slope for finite poles.
    pub c_pole: usize,
    /// Slope for the pole at infinity.
    pub c_infinity: usize,
    pub rows: Vec<GrowthRow>,
}

impl GrowthReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// `max(c_pole, c_infinity)`.
    pub fn slope(&self) -> usize {
        self.c_pole.max(self.c_infinity)
    }
}

fn pole_orders(coeffs: &[RatFunc], q_den: &Poly) -> Result<Vec<(usize, Option<i64>)>> {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let p = r.pole_order_in(q_den).ok_or(Error::PoleOutsideSet { k: i + 1 })?;
            Ok((p, r.degree_at_infinity()))
        })
        .collect()
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Smallest slopes `(C_pole, C_∞)` with both orders bounded by `k·C`.
pub fn fit_slopes(coeffs: &[RatFunc], q_den: &Poly) -> Result<(usize, usize)> {
    let orders = pole_orders(coeffs, q_den)?;
    let mut c = (0, 0);
    for (i, (p, d)) in orders.iter().enumerate() {
        let k = i + 1;
        c.0 = c.0.max(ceil_div(*p, k));
        c.1 = c.1.max(ceil_div(d.unwrap_or(0).max(0) as usize, k));
    }
    Ok(c)
}

/// Growth rows checked against the given slopes (recomputed from the
/// coefficients on every call).
pub fn growth_report_with(coeffs: &[RatFunc], q_den: &Poly, c_pole: usize, c_infinity: usize) -> Result<GrowthReport> {
    let rows = pole_orders(coeffs, q_den)?
        .into_iter()
        .enumerate()
        .map(|(i, (p, d))| {
            let k = i + 1;
            let pass = p <= k * c_pole && d.unwrap_or(0) <= (k * c_infinity) as i64;
            GrowthRow { k, pole_order: p, degree_at_infinity: d, pole_bound: k * c_pole, infinity_bound: k * c_infinity, pass }
        })
        .collect();
    Ok(GrowthReport { q_den: q_den.clone(), c_pole, c_infinity, rows })
}

/// Growth report with slopes fitted to the state's coefficients.
pub fn growth_report(state: &RecursionState) -> Result<GrowthReport> {
    let (cp, ci) = fit_slopes(state.coeffs(), &state.q_den)?;
    growth_report_with(state.coeffs(), &state.q_den, cp, ci)
}

/// Coefficient dump entry `{k, num, den}`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CoefficientEntry {
    pub k: usize,
    pub num: String,
    pub den: String,
}

/// Nonzero coefficients of a series in dump form.
pub fn coefficient_dump(series: &PowerLogSeries) -> Vec<CoefficientEntry> {
    series.terms().map(|(k, r)| CoefficientEntry { k, num: r.num().fmt_var("t"), den: r.den().fmt_var("t") }).collect()
}

/// Integer `λ` values in `1..=up_to` at which `P_∞` vanishes.
pub fn resonances(pinf: &Poly, up_to: usize) -> Vec<usize> {
    (1..=up_to).filter(|&l| pinf.eval(&GaussianRational::from_int(l as i64)).is_zero()).collect()
}
