//! Reduced rational functions in `t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{poly_gcd, GaussianRational, Poly};
use crate::error::{Error, Result};

/// `num/den` with `gcd(num, den) = 1` and `den` monic; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    /// Canonical reduced form of `num/den`.
    pub fn normalize(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        if den.is_constant() {
            let inv = den.coeff(0).inv().unwrap();
            return Ok(RatFunc { num: num.scale(&inv), den: Poly::one() });
        }
        let g = poly_gcd(&num, &den)?;
        let (mut n, mut d) = if g.is_one() { (num, den) } else { (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap()) };
        let lc = d.leading_coeff().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.inv().unwrap();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    /// Builds without reduction; both invariants must already hold.
    fn from_parts_unchecked(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }

    pub fn constant(c: GaussianRational) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    pub fn t() -> Self {
        Self::from(Poly::t())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value as a constant, when it is one.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// `−ord_∞ f = deg num − deg den`; `None` for zero.
    pub fn degree_at_infinity(&self) -> Option<i64> {
        let n = self.num.degree()? as i64;
        Some(n - self.den.degree().unwrap() as i64)
    }

    pub fn scale(&self, c: &GaussianRational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        self * &RatFunc::from(p.clone())
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::normalize(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZeroPolynomial);
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn derivative(&self) -> RatFunc {
        if self.den.is_one() {
            return RatFunc::from(self.num.derivative());
        }
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::normalize(n, &self.den * &self.den).unwrap()
    }

    /// `(λ + d/dt) f`.
    pub fn shifted_derivative(&self, lambda: &GaussianRational) -> RatFunc {
        &self.scale(lambda) + &self.derivative()
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// First `terms` coefficients of `f(t) = Σ_{i ≥ p} f_i t^{-i}`, returned as
    /// `(i, f_i)` for `i = p, p+1, …` (zero coefficients included).
    pub fn laurent_at_infinity(&self, terms: usize) -> Vec<(i64, GaussianRational)> {
        let Some(dn) = self.num.degree() else {
            return Vec::new();
        };
        let dd = self.den.degree().unwrap();
        let p = dd as i64 - dn as i64;
        // in w = 1/t: f = w^p · ñ(w)/d̃(w) with reversed coefficient vectors
        let nrev: Vec<GaussianRational> = self.num.coeffs().iter().rev().cloned().collect();
        let drev: Vec<GaussianRational> = self.den.coeffs().iter().rev().cloned().collect();
        let d0_inv = drev[0].inv().unwrap();
        let mut g: Vec<GaussianRational> = Vec::with_capacity(terms);
        for j in 0..terms {
            let mut acc = nrev.get(j).cloned().unwrap_or_default();
            for (i, di) in drev.iter().enumerate().skip(1).take(j) {
                if !di.is_zero() && !g[j - i].is_zero() {
                    acc -= &(di * &g[j - i]);
                }
            }
            g.push(if d0_inv.is_one() { acc } else { &acc * &d0_inv });
        }
        g.into_iter().enumerate().map(|(j, c)| (p + j as i64, c)).collect()
    }

    /// Smallest `e` with `den | q^e`, or `None` if no power of `q` suffices.
    pub fn pole_order_in(&self, q: &Poly) -> Option<usize> {
        if self.den.is_one() {
            return Some(0);
        }
        if q.is_constant() {
            return None;
        }
        let dd = self.den.degree().unwrap();
        let mut pw = q.clone();
        for e in 1..=dd {
            if self.den.divides(&pw) {
                return Some(e);
            }
            pw = &pw * q;
        }
        None
    }

    fn fmt_str(&self) -> String {
        if self.den.is_one() {
            return self.num.fmt_var("t");
        }
        let single_num = self.num.term_count() == 1 && self.num.coeffs().iter().all(|c| c.is_zero() || c.is_real() || c.re().is_zero());
        let n = if single_num { self.num.fmt_var("t") } else { format!("({})", self.num.fmt_var("t")) };
        let d = if self.den.term_count() == 1 { self.den.fmt_var("t") } else { format!("({})", self.den.fmt_var("t")) };
        format!("{n}/{d}")
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_parts_unchecked(p, Poly::one())
    }
}

impl From<GaussianRational> for RatFunc {
    fn from(c: GaussianRational) -> Self {
        RatFunc::constant(c)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_str())
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        match (self.den.is_one(), rhs.den.is_one()) {
            (true, true) => RatFunc::from(&self.num + &rhs.num),
            // gcd(a + c·b, b) = gcd(a, b) = 1
            (false, true) => RatFunc::from_parts_unchecked(&self.num + &(&rhs.num * &self.den), self.den.clone()),
            (true, false) => RatFunc::from_parts_unchecked(&rhs.num + &(&self.num * &rhs.den), rhs.den.clone()),
            (false, false) => {
                if self.den == rhs.den {
                    return RatFunc::normalize(&self.num + &rhs.num, self.den.clone()).unwrap();
                }
                let g = poly_gcd(&self.den, &rhs.den).unwrap();
                if g.is_one() {
                    let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
                    // coprime denominators: any common factor of n and b·d is impossible
                    return RatFunc::from_parts_unchecked(n, &self.den * &rhs.den);
                }
                let b1 = self.den.exact_div(&g).unwrap();
                let d1 = rhs.den.exact_div(&g).unwrap();
                let n = &(&self.num * &d1) + &(&rhs.num * &b1);
                RatFunc::normalize(n, &(&b1 * &d1) * &g).unwrap()
            }
        }
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from(&self.num * &rhs.num);
        }
        let (a, d) = cancel(&self.num, &rhs.den);
        let (c, b) = cancel(&rhs.num, &self.den);
        RatFunc::from_parts_unchecked(&a * &c, &b * &d)
    }
}

/// Removes the common factor of `n` and a monic `d`, keeping `d` monic.
fn cancel(n: &Poly, d: &Poly) -> (Poly, Poly) {
    if d.is_one() {
        return (n.clone(), d.clone());
    }
    let g = poly_gcd(n, d).unwrap();
    if g.is_one() {
        (n.clone(), d.clone())
    } else {
        (n.exact_div(&g).unwrap(), d.exact_div(&g).unwrap())
    }
}

macro_rules! forward_owned_rf {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned_rf!(Add, add);
forward_owned_rf!(Sub, sub);
forward_owned_rf!(Mul, mul);
