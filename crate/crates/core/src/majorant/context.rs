//! The radius `r`, the constants of the operator estimates, and the operators
//! `D_{k,m}`, `𝒟_{k,j}`, `ℒ_k` acting on numerators `P_k = R_{ℓ+k}·Q^k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::exact::{binomial, rational_sci, GaussianRational, Poly, RatFunc};

use super::norm::{norm, poly_norm, power_of_two_at_least, Interval};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn max_q(a: BigRational, b: BigRational) -> BigRational {
    if a >= b {
        a
    } else {
        b
    }
}

/// Upper bounds produced by [`NormContext::with_constants`].
#[derive(Clone, Debug, PartialEq)]
pub struct Constants {
    pub c2: BigRational,
    pub c3: BigRational,
    pub c2_tilde: BigRational,
    pub c3_tilde: BigRational,
    /// `α_i = ‖a_{n−i}·Q^i‖·c̃₃` for `i = 1…n`.
    pub alphas: Vec<BigRational>,
    /// Smallest `k` with `Σ α_i/k^i ≤ 1/2`.
    pub k0: usize,
    /// Ratios `‖𝒟_{k,n}P_k‖/‖ℒ_k P_k‖` for the computed `k < k₀`.
    pub small_k: Vec<(usize, BigRational)>,
    /// `A` is certified for every `k` when `k₀ − 1` numerators were supplied,
    /// otherwise only up to this index.
    pub a_valid_to: Option<usize>,
    pub a: BigRational,
    pub sigma: BigRational,
    pub c_tilde: BigRational,
    pub alpha: BigRational,
}

#[derive(Clone, Debug)]
pub struct NormContext {
    pub r: BigRational,
    pub q: Poly,
    pub n: usize,
    pub c1: usize,
    pub tol: BigRational,
    pub bits: u32,
    pub constants: Option<Constants>,
}

/// Serializable summary of a context.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantsView {
    pub r: String,
    pub q: String,
    pub n: usize,
    pub c1: usize,
    pub c2: String,
    pub c3: String,
    pub c2_tilde: String,
    pub c3_tilde: String,
    pub k0: usize,
    pub a: String,
    pub sigma: String,
    pub c_tilde: String,
    pub alpha: String,
    pub a_valid_to: Option<usize>,
}

impl NormContext {
    /// Context at a fixed radius with no constants yet.
    pub fn at_radius(r: BigRational, q: Poly, n: usize, c1: usize, bits: u32) -> Self {
        let tol = BigRational::new(BigInt::one(), BigInt::one() << 64usize);
        NormContext { r, q, n, c1, tol, bits, constants: None }
    }

    pub fn norm(&self, f: &RatFunc) -> Result<Interval> {
        norm(f, &self.r, &self.tol, self.bits)
    }

    pub fn poly_norm(&self, p: &Poly) -> Interval {
        poly_norm(p, &self.r, self.bits)
    }

    pub fn deg_q(&self) -> usize {
        self.q.degree().unwrap_or(0)
    }

    fn bullets_hold(&self) -> Result<bool> {
        let n = self.n as i64;
        // c₁ + (n−1)·deg Q ≤ r/4
        let need = rat(self.c1 as i64 + (n - 1).max(0) * self.deg_q() as i64);
        if need > &self.r / rat(4) {
            return Ok(false);
        }
        if self.q.is_one() {
            return Ok(true);
        }
        let inv = self.norm(&RatFunc::normalize(Poly::one(), self.q.clone())?)?;
        if inv.hi >= BigRational::one() {
            return Ok(false);
        }
        let big = self.poly_norm(&self.q.pow(self.n as u32 + 1));
        if big.lo <= BigRational::one() {
            return Ok(false);
        }
        let log_der = self.norm(&RatFunc::normalize(self.q.derivative(), self.q.clone())?)?;
        Ok(&log_der.hi * rat(n) <= BigRational::new(1.into(), 2.into()))
    }

    pub fn constants(&self) -> &Constants {
        self.constants.as_ref().expect("constants not computed")
    }

    pub fn view(&self) -> ConstantsView {
        let c = self.constants();
        ConstantsView {
            r: self.r.to_string(),
            q: self.q.fmt_var("t"),
            n: self.n,
            c1: self.c1,
            c2: rational_sci(&c.c2),
            c3: rational_sci(&c.c3),
            c2_tilde: rational_sci(&c.c2_tilde),
            c3_tilde: rational_sci(&c.c3_tilde),
            k0: c.k0,
            a: rational_sci(&c.a),
            sigma: rational_sci(&c.sigma),
            c_tilde: rational_sci(&c.c_tilde),
            alpha: rational_sci(&c.alpha),
            a_valid_to: c.a_valid_to,
        }
    }

    /// Computes the constants for the rebased operator `a` (`a_n = 1`).
    /// `numerators[k−1] = P_k` feeds the small-`k` ratios behind `A`.
    pub fn with_constants(mut self, a: &[RatFunc], numerators: &[Poly]) -> Result<Self> {
        let n = self.n;
        let q = self.q.clone();
        let c2 = max_q(self.poly_norm(&q).hi, self.poly_norm(&q.derivative()).hi);
        let c3 = rat(4) * self.norm(&RatFunc::normalize(Poly::one(), q.clone())?)?.hi;
        let c3_tilde = max_q(BigRational::one(), num_traits::pow(c3.clone(), n));
        let base = rat((2 + n + self.c1 + n * self.deg_q()) as i64) * &c2;
        let c2_tilde = max_q(BigRational::one(), num_traits::pow(base, n));

        let mut alphas = Vec::with_capacity(n);
        for i in 1..=n {
            let f = a[n - i].mul_poly(&q.pow(i as u32));
            alphas.push(self.norm(&f)?.hi * &c3_tilde);
        }
        let k0 = smallest_k0(&alphas);

        let mut small_k = Vec::new();
        let mut a_const = rat(2);
        for k in 1..k0 {
            let Some(pk) = numerators.get(k - 1) else { break };
            if pk.is_zero() {
                continue;
            }
            let top = self.poly_norm(&d_chain(&q, k, n, pk)).hi;
            let l = l_op(a, &q, k, pk);
            let bottom = self.norm(&l)?.lo;
            let ratio = if bottom.is_zero() { top.clone() } else { &top / &bottom };
            if ratio > a_const {
                a_const = ratio.clone();
            }
            small_k.push((k, ratio));
        }
        let a_valid_to = (numerators.len() + 1 < k0).then_some(numerators.len());

        let sigma = (&c3_tilde * &a_const).recip();
        let c_tilde = self.poly_norm(&q.pow(n as u32 + 1)).hi;
        let alpha = &c_tilde * self.poly_norm(&q).hi;
        self.constants = Some(Constants { c2, c3, c2_tilde, c3_tilde, alphas, k0, small_k, a_valid_to, a: a_const, sigma, c_tilde, alpha });
        Ok(self)
    }
}

/// Smallest power of two `r ≥ max(1, 2·ρ(Q))` meeting the three conditions:
/// `‖1/Q‖ < 1` and `‖Q^{n+1}‖ > 1` (skipped for `Q = 1`),
/// `c₁ + (n−1)·deg Q ≤ r/4`, and `n·‖Q′/Q‖ ≤ 1/2`.
pub fn choose_r(q: &Poly, n: usize, c1: usize, bits: u32) -> Result<NormContext> {
    let q = q.monic();
    let r0 = rat(2) * q.root_modulus_bound();
    let mut ctx = NormContext::at_radius(power_of_two_at_least(&r0), q, n, c1, bits);
    while !ctx.bullets_hold()? {
        ctx.r *= rat(2);
    }
    Ok(ctx)
}

fn smallest_k0(alphas: &[BigRational]) -> usize {
    let half = BigRational::new(1.into(), 2.into());
    let sum = |k: usize| -> BigRational {
        let kk = rat(k as i64);
        alphas.iter().enumerate().map(|(i, a)| a / num_traits::pow(kk.clone(), i + 1)).sum()
    };
    if sum(1) <= half {
        return 1;
    }
    // the sum is decreasing in k: bracket, then bisect
    let mut hi = 2usize;
    while sum(hi) > half {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if sum(mid) <= half {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `D_{k,m}(P) = (kQ − mQ′)P + QP′`.
pub fn d_op(q: &Poly, k: usize, m: usize, p: &Poly) -> Poly {
    let kq = q.scale(&GaussianRational::from_int(k as i64));
    let mq = q.derivative().scale(&GaussianRational::from_int(m as i64));
    &(&(&kq - &mq) * p) + &(q * &p.derivative())
}

/// `𝒟_{k,j} = D_{k,k+j−1} ∘ ⋯ ∘ D_{k,k}`; the identity for `j = 0`.
pub fn d_chain(q: &Poly, k: usize, j: usize, p: &Poly) -> Poly {
    let mut acc = p.clone();
    for i in 0..j {
        acc = d_op(q, k, k + i, &acc);
    }
    acc
}

/// `ℒ_k(P) = Σ_j a_j Q^{n−j} 𝒟_{k,j}(P)`.
pub fn l_op(a: &[RatFunc], q: &Poly, k: usize, p: &Poly) -> RatFunc {
    let n = a.len() - 1;
    let mut acc = RatFunc::zero();
    let mut chain = p.clone();
    for (j, aj) in a.iter().enumerate() {
        if j > 0 {
            chain = d_op(q, k, k + j - 1, &chain);
        }
        if aj.is_zero() {
            continue;
        }
        acc = &acc + &aj.mul_poly(&(&q.pow((n - j) as u32) * &chain));
    }
    acc
}

/// `a'_j = Σ_{i≥j} a_i·C(i,j)·ℓ^{i−j}`: the operator `Σ a_i(δ+ℓ)^i` in powers of `δ`.
pub fn rebase_operator(a: &[RatFunc], ell: usize) -> Vec<RatFunc> {
    let n = a.len();
    (0..n)
        .map(|j| {
            let mut acc = RatFunc::zero();
            for (i, ai) in a.iter().enumerate().skip(j) {
                let c = BigRational::from_integer(binomial(i as u64, j as u64) * BigInt::from(ell).pow((i - j) as u32));
                acc = &acc + &ai.scale(&GaussianRational::real(c));
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_ratfunc;

    fn p(s: &str) -> Poly {
        let f = parse_ratfunc(s).unwrap();
        assert!(f.is_polynomial());
        f.num().clone()
    }

    #[test]
    fn radius_examples() {
        assert_eq!(choose_r(&p("t"), 1, 3, 64).unwrap().r, rat(16));
        assert_eq!(choose_r(&Poly::one(), 1, 3, 64).unwrap().r, rat(16));
        assert_eq!(choose_r(&Poly::one(), 2, 5, 64).unwrap().r, rat(32));
        let r = choose_r(&p("t - 10"), 1, 0, 64).unwrap().r;
        assert!(r >= rat(20) && r == power_of_two_at_least(&r));
        assert_eq!(r, rat(32));
    }

    #[test]
    fn constants_examples() {
        let ctx = choose_r(&Poly::one(), 2, 1, 64).unwrap();
        let a = vec![RatFunc::from_int(1), RatFunc::from_int(0), RatFunc::one()];
        let ctx = ctx.with_constants(&a, &[]).unwrap();
        let c = ctx.constants();
        assert_eq!(c.c2, rat(1));
        assert_eq!(c.c3, rat(4));
        assert_eq!(c.c3_tilde, rat(16));

        let ctx = NormContext::at_radius(rat(16), p("t"), 1, 3, 64);
        let a = vec![parse_ratfunc("2/t").unwrap(), RatFunc::one()];
        let ctx = ctx.with_constants(&a, &[]).unwrap();
        let c = ctx.constants();
        assert_eq!(c.c2, rat(16));
        assert_eq!(c.c3, BigRational::new(1.into(), 4.into()));
        assert_eq!(c.c3_tilde, rat(1));
        assert_eq!(c.sigma, (&c.c3_tilde * &c.a).recip());
        assert_eq!(c.c_tilde, rat(256));
    }

    #[test]
    fn operators() {
        let q = p("t^2 - 1");
        let pk = p("t^3 + 2");
        // D_{k,m} by hand
        let d = d_op(&q, 2, 3, &pk);
        let hand = &(&(&q.scale(&GaussianRational::from_int(2)) - &q.derivative().scale(&GaussianRational::from_int(3))) * &pk)
            + &(&q * &pk.derivative());
        assert_eq!(d, hand);
        assert_eq!(d_chain(&q, 2, 2, &pk), d_op(&q, 2, 3, &d_op(&q, 2, 2, &pk)));
        // rebase of (δ+1)² = δ² + 2δ + 1
        let a = vec![RatFunc::zero(), RatFunc::zero(), RatFunc::one()];
        let b = rebase_operator(&a, 1);
        assert_eq!(b, vec![RatFunc::from_int(1), RatFunc::from_int(2), RatFunc::one()]);
    }
}
