//! The majorant equation `σU = x·M̃(x, t, U)`, its Dulac-series solution and
//! the per-order inequality `‖P_k/Q^k‖ ≤ c̃^k·‖P̃_k‖`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, rational_sci, GaussianRational, Poly, RatFunc};
use crate::recurse::{fit_slopes, Expansion};
use crate::reduce::ReducedEquation;

use super::context::{choose_r, rebase_operator, NormContext};
use super::norm::Interval;

/// `|α|·x^μ·t^ν·U^power`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MajorantMonomial {
    pub mu: u32,
    pub nu: u32,
    pub power: u32,
    pub alpha: BigRational,
}

/// One order of the inequality check.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub k: usize,
    pub lhs_hi: BigRational,
    pub rhs_lo: BigRational,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictView {
    pub k: usize,
    pub lhs_hi: String,
    pub rhs_lo: String,
    pub pass: bool,
}

impl From<&Verdict> for VerdictView {
    fn from(v: &Verdict) -> Self {
        VerdictView { k: v.k, lhs_hi: rational_sci(&v.lhs_hi), rhs_lo: rational_sci(&v.rhs_lo), pass: v.pass }
    }
}

#[derive(Clone, Debug)]
pub struct MajorantRun {
    pub monomials: Vec<MajorantMonomial>,
    /// `P̃_1, P̃_2, …`
    pub ptilde: Vec<Poly>,
    pub certs: Vec<Verdict>,
}

impl MajorantRun {
    pub fn all_pass(&self) -> bool {
        self.certs.iter().all(|v| v.pass)
    }
}

type VMono = BTreeMap<Vec<u32>, BigInt>;

fn vmul(a: &VMono, b: &VMono) -> VMono {
    let mut out = VMono::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let key: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            *out.entry(key).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `b·x^μ·Π U_j^{q_j}` with `U_j = (δ+ℓ)^j u = Σ_i C(j,i) ℓ^{j−i} δ^i u`, collected
/// by `(μ, exponent vector in δ^i u)`.
pub fn rebase_monomials(reduced: &ReducedEquation) -> BTreeMap<(u32, Vec<u32>), RatFunc> {
    let n = reduced.n;
    let ell = BigInt::from(reduced.ell);
    let unit = |i: usize| {
        let mut v = vec![0u32; n + 1];
        v[i] = 1;
        v
    };
    let linear: Vec<VMono> = (0..=n)
        .map(|j| (0..=j).map(|i| (unit(i), binomial(j as u64, i as u64) * ell.pow((j - i) as u32))).filter(|(_, c)| !c.is_zero()).collect())
        .collect();
    let mut out: BTreeMap<(u32, Vec<u32>), RatFunc> = BTreeMap::new();
    for (key, b) in &reduced.monomials {
        let mut poly: VMono = [(vec![0u32; n + 1], BigInt::one())].into_iter().collect();
        for (j, &e) in key.q.iter().enumerate() {
            for _ in 0..e {
                poly = vmul(&poly, &linear[j]);
            }
        }
        for (v, c) in poly {
            let entry = out.entry((key.mu, v)).or_default();
            *entry = &*entry + &b.scale(&GaussianRational::real(BigRational::from_integer(c)));
        }
    }
    out.retain(|_, b| !b.is_zero());
    out
}

/// Majorant monomials of the rebased `M`, each `b = N_b/Q` split into the terms of `N_b`.
pub fn build_majorant(reduced: &ReducedEquation, q: &Poly, bits: u32) -> Result<Vec<MajorantMonomial>> {
    let mut merged: BTreeMap<(u32, u32, u32), BigRational> = BTreeMap::new();
    for ((mu, v), b) in rebase_monomials(reduced) {
        let nb = b.mul_poly(q);
        if !nb.is_polynomial() {
            return Err(Error::Denominator { what: "b".into(), den: b.den().to_string(), by: q.to_string() });
        }
        let power: u32 = v.iter().sum();
        for (nu, c) in nb.num().coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            *merged.entry((mu, nu as u32, power)).or_insert_with(BigRational::zero) += c.modulus_upper(bits);
        }
    }
    Ok(merged.into_iter().map(|((mu, nu, power), alpha)| MajorantMonomial { mu, nu, power, alpha }).collect())
}

/// `P̃_1 … P̃_N` from `σP̃_k = Σ |α| t^ν [x^{k−1−μ}] U^power`, `U = Σ P̃_j x^j`.
pub fn majorant_recursion(monomials: &[MajorantMonomial], sigma: &BigRational, n_max: usize) -> Vec<Poly> {
    let inv_sigma = GaussianRational::real(sigma.recip());
    let max_power = monomials.iter().map(|m| m.power as usize).max().unwrap_or(0);
    // pw[e][s] = [x^s] U^e for e ≥ 1
    let mut pw: Vec<Vec<Poly>> = vec![Vec::new(); max_power + 1];
    let mut out: Vec<Poly> = Vec::with_capacity(n_max);
    let coeff = |pw: &Vec<Vec<Poly>>, e: usize, s: usize| -> Poly {
        if e == 0 {
            return if s == 0 { Poly::one() } else { Poly::zero() };
        }
        pw[e].get(s).cloned().unwrap_or_default()
    };
    for k in 1..=n_max {
        // extend the power table to x^{k−1}
        let s = k - 1;
        for e in 1..=max_power {
            let v = if s < e {
                Poly::zero()
            } else if e == 1 {
                out[s - 1].clone()
            } else {
                let mut acc = Poly::zero();
                for i in 1..=s + 1 - e {
                    let lower = &pw[e - 1][s - i];
                    if !lower.is_zero() && !out[i - 1].is_zero() {
                        acc = &acc + &(&out[i - 1] * lower);
                    }
                }
                acc
            };
            pw[e].push(v);
        }
        let mut acc = Poly::zero();
        for m in monomials {
            let Some(s) = (k - 1).checked_sub(m.mu as usize) else { continue };
            let c = coeff(&pw, m.power as usize, s);
            if c.is_zero() {
                continue;
            }
            let term = Poly::monomial(GaussianRational::real(m.alpha.clone()), m.nu as usize);
            acc = &acc + &(&term * &c);
        }
        out.push(acc.scale(&inv_sigma));
    }
    out
}

/// Verdicts `hi‖R_{ℓ+k}‖ ≤ c̃^k·‖P̃_k‖` for `k = 1…min(len)`.
pub fn certify(coeffs: &[RatFunc], ptilde: &[Poly], ctx: &NormContext) -> Result<Vec<Verdict>> {
    let c_tilde = &ctx.constants().c_tilde;
    let mut scale = BigRational::one();
    let mut out = Vec::new();
    for (i, (r, pt)) in coeffs.iter().zip(ptilde).enumerate() {
        scale *= c_tilde;
        let lhs: Interval = ctx.norm(r)?;
        let rhs = &ctx.poly_norm(pt).lo * &scale;
        out.push(Verdict { k: i + 1, pass: lhs.hi <= rhs, lhs_hi: lhs.hi, rhs_lo: rhs });
    }
    Ok(out)
}

/// Everything the certificate reports.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub ctx: NormContext,
    pub run: MajorantRun,
    /// `C` in `Q = q_den^C`.
    pub q_power: usize,
}

impl Certificate {
    pub fn summary(&self) -> String {
        let n = self.run.certs.len();
        if self.run.all_pass() {
            format!("majorant inequality verified to order {n}")
        } else {
            let bad: Vec<String> = self.run.certs.iter().filter(|v| !v.pass).map(|v| v.k.to_string()).collect();
            format!("majorant inequality fails at k = {}", bad.join(", "))
        }
    }
}

/// Smallest `C ≥ c_pole` such that `q_den^C` clears every `a_j` and `b_{q,μ}`.
fn q_power(reduced: &ReducedEquation, q_den: &Poly, c_pole: usize) -> Result<usize> {
    let mut c = c_pole;
    for f in reduced.a.iter().chain(reduced.monomials.values()) {
        let e = f.pole_order_in(q_den).ok_or_else(|| Error::Denominator {
            what: "an operator coefficient".into(),
            den: f.den().to_string(),
            by: format!("powers of {q_den}"),
        })?;
        c = c.max(e);
    }
    Ok(c)
}

/// Runs the norm machinery and the majorant check on an expansion.
pub fn certify_expansion(exp: &Expansion, bits: u32) -> Result<Certificate> {
    let state = &exp.state;
    let reduced = &state.reduced;
    let coeffs = state.coeffs();
    let q_den = state.q_den.clone();
    let (c_pole, _) = fit_slopes(coeffs, &q_den)?;
    let c = if q_den.is_constant() { 0 } else { q_power(reduced, &q_den, c_pole)? };
    let q = q_den.pow(c as u32);

    let mut numerators = Vec::with_capacity(coeffs.len());
    let mut c1 = 0usize;
    for (i, r) in coeffs.iter().enumerate() {
        let k = i + 1;
        let pk = r.mul_poly(&q.pow(k as u32));
        if !pk.is_polynomial() {
            return Err(Error::Denominator { what: format!("R_{}", reduced.ell + k), den: r.den().to_string(), by: format!("Q^{k}") });
        }
        if let Some(d) = pk.num().degree() {
            c1 = c1.max(d.div_ceil(k));
        }
        numerators.push(pk.num().clone());
    }

    let a = rebase_operator(&reduced.a, reduced.ell);
    let ctx = choose_r(&q, reduced.n, c1, bits)?.with_constants(&a, &numerators)?;
    let monomials = build_majorant(reduced, &ctx.q, bits)?;
    let ptilde = majorant_recursion(&monomials, &ctx.constants().sigma, coeffs.len());
    let certs = certify(coeffs, &ptilde, &ctx)?;
    Ok(Certificate { ctx, run: MajorantRun { monomials, ptilde, certs }, q_power: c })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn recursion_examples() {
        let m = vec![MajorantMonomial { mu: 0, nu: 3, power: 0, alpha: q(1, 1) }];
        let p = majorant_recursion(&m, &q(1, 2), 3);
        assert_eq!(p[0], Poly::monomial(GaussianRational::from_int(2), 3));
        assert!(p[1].is_zero() && p[2].is_zero());

        let m = vec![MajorantMonomial { mu: 2, nu: 0, power: 1, alpha: q(1, 1) }];
        assert!(majorant_recursion(&m, &q(1, 1), 5).iter().all(Poly::is_zero));

        // σU = x(1 + U): P̃_k = σ^{-k}
        let m =
            vec![MajorantMonomial { mu: 0, nu: 0, power: 0, alpha: q(1, 1) }, MajorantMonomial { mu: 0, nu: 0, power: 1, alpha: q(1, 1) }];
        let p = majorant_recursion(&m, &q(1, 2), 4);
        for (i, pk) in p.iter().enumerate() {
            assert_eq!(*pk, Poly::constant(GaussianRational::from_int(1 << (i + 1))));
        }
    }
}
