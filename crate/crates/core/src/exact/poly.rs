//! Dense univariate polynomials over ℚ(i).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::GaussianRational;
use crate::error::{Error, Result};

/// Polynomial `Σ coeffs[i]·t^i`; the coefficient vector never ends in a zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<GaussianRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| GaussianRational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// `c·t^d`.
    pub fn monomial(c: GaussianRational, d: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut v = vec![GaussianRational::zero(); d + 1];
        v[d] = c;
        Poly { coeffs: v }
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(GaussianRational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> GaussianRational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    pub fn scale(&self, c: &GaussianRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![GaussianRational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None => Poly::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &GaussianRational::from_int(i as i64)).collect())
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division; `d` must be nonzero.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZeroPolynomial)?;
        if self.degree().is_none_or(|n| n < dd) {
            return Ok((Poly::zero(), self.clone()));
        }
        let lc_inv = d.leading_coeff().unwrap().inv().unwrap();
        let unit = lc_inv.is_one();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![GaussianRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let f = if unit { top.clone() } else { top * &lc_inv };
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    let sub = &f * dc;
                    rem[i + j] -= &sub;
                }
            }
            quot[i] = f;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.exact_div(self).is_some()
    }

    /// Largest `e` with `self^e | p`, for nonconstant `self` and nonzero `p`.
    pub fn multiplicity_in(&self, p: &Poly) -> usize {
        if self.is_constant() || p.is_zero() {
            return 0;
        }
        let mut e = 0;
        let mut cur = p.clone();
        while let Some(q) = cur.exact_div(self) {
            cur = q;
            e += 1;
        }
        e
    }

    /// Substitute `t ↦ t + c`.
    pub fn taylor_shift(&self, c: &GaussianRational) -> Poly {
        let lin = Poly::new(vec![c.clone(), GaussianRational::one()]);
        let mut acc = Poly::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(a.clone());
        }
        acc
    }

    /// Cauchy bound `1 + max |c_i / c_deg|` rounded up to a rational; every root
    /// has modulus strictly below it.
    pub fn cauchy_bound(&self) -> BigRational {
        let Some(lc) = self.leading_coeff() else {
            return BigRational::zero();
        };
        let lc_inv = lc.inv().unwrap();
        let mut m = BigRational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = (c * &lc_inv).modulus_upper(32);
            if r > m {
                m = r;
            }
        }
        m + BigRational::one()
    }

    /// Rational upper bound on the modulus of every root (`0` when there are none).
    ///
    /// Uses the smaller of the Cauchy and Fujiwara bounds after removing the
    /// root at zero.
    pub fn root_modulus_bound(&self) -> BigRational {
        let Some(low) = self.low_degree() else {
            return BigRational::zero();
        };
        let stripped = Poly::new(self.coeffs[low..].to_vec());
        let Some(d) = stripped.degree() else {
            return BigRational::zero();
        };
        if d == 0 {
            return BigRational::zero();
        }
        if d == 1 {
            return (&stripped.coeffs[0] / &stripped.coeffs[1]).modulus_upper(32);
        }
        let cauchy = stripped.cauchy_bound();
        let lc_inv = stripped.leading_coeff().unwrap().inv().unwrap();
        // Fujiwara: 2·max(|a_{d-1}/a_d|, |a_{d-2}/a_d|^{1/2}, …, |a_0/(2a_d)|^{1/d})
        let mut fuj = BigRational::zero();
        for i in 1..=d {
            let mut a = (&stripped.coeffs[d - i] * &lc_inv).modulus_upper(32);
            if i == d {
                a /= BigRational::from_integer(2.into());
            }
            let root = nth_root_upper(&a, i as u32);
            if root > fuj {
                fuj = root;
            }
        }
        fuj *= BigRational::from_integer(2.into());
        if fuj < cauchy {
            fuj
        } else {
            cauchy
        }
    }

    /// All integer roots, found by exhaustive search inside the Cauchy bound.
    pub fn integer_roots(&self) -> Result<Vec<BigInt>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("integer roots"));
        }
        let bound = self.cauchy_bound().ceil().to_integer();
        let mut roots = Vec::new();
        // root zero first, then strip it so the search below skips the t-factor
        let low = self.low_degree().unwrap();
        let stripped = Poly::new(self.coeffs[low..].to_vec());
        if low > 0 {
            roots.push(BigInt::zero());
        }
        if stripped.degree() == Some(0) {
            return Ok(roots);
        }
        let mut k = BigInt::one();
        while k <= bound {
            for cand in [-k.clone(), k.clone()] {
                let x = GaussianRational::real(BigRational::from_integer(cand.clone()));
                if stripped.eval(&x).is_zero() {
                    roots.push(cand);
                }
            }
            k += 1;
        }
        roots.sort();
        Ok(roots)
    }

    /// Rational roots `p/q` with small denominator, searched over a grid; used to
    /// split denominators into linear factors over ℚ when possible.
    pub fn rational_linear_factors(&self) -> Option<Vec<(BigRational, usize)>> {
        let d = self.degree()?;
        if d == 0 {
            return Some(Vec::new());
        }
        if !self.is_real() {
            return None;
        }
        // clear denominators to an integer polynomial, then apply the rational root test
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = num_integer::Integer::lcm(&lcm, c.re().denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c.re() * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let mut rest = self.clone();
        let mut out: Vec<(BigRational, usize)> = Vec::new();
        let mut cands: Vec<BigRational> = vec![BigRational::zero()];
        let low = ints.iter().position(|c| !c.is_zero()).unwrap();
        let a0 = ints[low].abs();
        let ad = ints[d].abs();
        let divs = |n: &BigInt| -> Vec<BigInt> {
            let mut v = Vec::new();
            let mut i = BigInt::one();
            // divisor enumeration is only attempted for modest constants
            while &i * &i <= *n {
                if (n % &i).is_zero() {
                    v.push(i.clone());
                    v.push(n / &i);
                }
                i += 1;
            }
            v
        };
        if a0.bits() > 40 || ad.bits() > 40 {
            return None;
        }
        for p in divs(&a0) {
            for q in divs(&ad) {
                let r = BigRational::new(p.clone(), q.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            let lin = Poly::new(vec![GaussianRational::real(-r.clone()), GaussianRational::one()]);
            let mult = lin.multiplicity_in(&rest);
            if mult > 0 {
                rest = rest.exact_div(&lin.pow(mult as u32)).unwrap();
                out.push((r, mult));
            }
        }
        rest.is_constant().then_some(out)
    }

    /// Formats with the given variable name, ascending powers.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = split_sign(c);
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = if i == 0 {
                mag.to_string()
            } else {
                let v = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                if mag.is_one() {
                    v
                } else if !mag.is_real() && !mag.re().is_zero() {
                    format!("({mag})*{v}")
                } else {
                    format!("{mag}*{v}")
                }
            };
            if i == 0 && !mag.is_real() && !mag.re().is_zero() && self.coeffs.len() > 1 {
                out.push_str(&format!("({mag})"));
            } else {
                out.push_str(&body);
            }
        }
        out
    }

    /// Number of printed terms, used to decide parenthesization.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

/// Sign convention for printing: a coefficient reads as negative when its
/// first nonzero component (real, then imaginary) is negative.
fn split_sign(c: &GaussianRational) -> (bool, GaussianRational) {
    let neg = if c.re().is_zero() { c.im().is_negative() } else { c.re().is_negative() && c.im().is_zero() };
    if neg {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

/// Smallest `u` on a dyadic grid with `u^n ≥ a`, for `a ≥ 0`.
fn nth_root_upper(a: &BigRational, n: u32) -> BigRational {
    if a.is_zero() {
        return BigRational::zero();
    }
    if n == 1 {
        return a.clone();
    }
    let approx = super::scalar::rational_to_f64(a).powf(1.0 / n as f64);
    let scale = BigRational::from_integer(BigInt::one() << 40usize);
    let mut u = BigRational::from_float(approx * (1.0 + 1e-9))
        .map(|v| (v * &scale).ceil() / &scale)
        .unwrap_or_else(|| a.clone() + BigRational::one());
    let step = BigRational::new(BigInt::one(), BigInt::one() << 20usize);
    while num_traits::pow(u.clone(), n as usize) < *a {
        u += &step;
    }
    u
}

/// Monic greatest common divisor.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGcd);
    }
    // split off the common power of t; denominators are often pure powers
    let (la, lb) = (a.low_degree(), b.low_degree());
    if la.unwrap_or(0) > 0 || lb.unwrap_or(0) > 0 {
        let low = match (la, lb) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => 0,
        };
        let strip = |p: &Poly, l: Option<usize>| match l {
            Some(l) => Poly::new(p.coeffs[l..].to_vec()),
            None => Poly::zero(),
        };
        let (a0, b0) = (strip(a, la), strip(b, lb));
        let rest = if a0.is_zero() || b0.is_zero() { (&a0 + &b0).monic() } else { poly_gcd(&a0, &b0)? };
        return Ok(rest.shift(low));
    }
    let (mut x, mut y) = if a.degree() >= b.degree() { (a.monic(), b.monic()) } else { (b.monic(), a.monic()) };
    while !y.is_zero() {
        if y.degree() == Some(0) {
            return Ok(Poly::one());
        }
        let (_, r) = x.div_rem(&y)?;
        x = y;
        y = r.monic();
    }
    Ok(x.monic())
}

/// Monic product of the distinct irreducible factors of `p`.
pub fn squarefree_part(p: &Poly) -> Result<Poly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("squarefree part"));
    }
    let g = poly_gcd(p, &p.derivative())?;
    let (q, _) = p.div_rem(&g)?;
    Ok(q.monic())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("t"))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut v = long.coeffs.clone();
        for (a, b) in v.iter_mut().zip(short.coeffs.iter()) {
            *a += b;
        }
        Poly::new(v)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = self.coeffs.clone();
        v.resize(n, GaussianRational::zero());
        for (a, b) in v.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
        Poly::new(v)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if self.coeffs.len() == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.coeffs.len() == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let mut v = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += &(a * b);
                }
            }
        }
        Poly::new(v)
    }
}

macro_rules! forward_owned_poly {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned_poly!(Add, add);
forward_owned_poly!(Sub, sub);
forward_owned_poly!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&p(&[-1, 0, 1]), &p(&[1, -2, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(poly_gcd(&p(&[0, 0, 0, 1]), &p(&[0, 0, 1])).unwrap(), p(&[0, 0, 1]));
        assert_eq!(poly_gcd(&p(&[1, 1]), &p(&[-1, 1])).unwrap(), Poly::one());
        assert_eq!(poly_gcd(&Poly::zero(), &Poly::zero()), Err(Error::ZeroGcd));
        assert_eq!(poly_gcd(&Poly::zero(), &p(&[2, 4])).unwrap(), p(&[1, 2]).scale(&GaussianRational::from_ratio(1, 2)));
        // t-power splitting: gcd(t²(t−1), t(t−1)(t+1)) = t(t−1)
        assert_eq!(poly_gcd(&p(&[0, 0, -1, 1]), &p(&[0, -1, 0, 1])).unwrap(), p(&[0, -1, 1]));
        assert_eq!(poly_gcd(&p(&[0, 0, 0, 0, 5]), &p(&[0, 0, 3, 7])).unwrap(), p(&[0, 0, 1]));
        assert_eq!(poly_gcd(&p(&[0, 0, 2]), &Poly::zero()).unwrap(), p(&[0, 0, 1]));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&p(&[0, 0, -1, 1])).unwrap(), p(&[0, -1, 1]));
        assert_eq!(squarefree_part(&p(&[1, 0, 1])).unwrap(), p(&[1, 0, 1]));
        assert_eq!(squarefree_part(&p(&[-1, 1]).pow(4)).unwrap(), p(&[-1, 1]));
        assert!(squarefree_part(&Poly::zero()).is_err());
    }

    #[test]
    fn integer_root_examples() {
        let ints = |v: Vec<BigInt>| v.into_iter().map(|b| b.to_string()).collect::<Vec<_>>();
        assert_eq!(ints(p(&[2, -3, 1]).integer_roots().unwrap()), ["1", "2"]);
        assert!(p(&[1, 0, 1]).integer_roots().unwrap().is_empty());
        // (λ−1)(λ−2)(λ−3) expanded by hand: λ³ − 6λ² + 11λ − 6
        let cubic = &(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[-3, 1]);
        assert_eq!(cubic, p(&[-6, 11, -6, 1]));
        assert_eq!(ints(cubic.integer_roots().unwrap()), ["1", "2", "3"]);
        assert!(p(&[5]).integer_roots().unwrap().is_empty());
        assert_eq!(ints(p(&[0, 0, 1]).integer_roots().unwrap()), ["0"]);
    }

    #[test]
    fn printing() {
        assert_eq!(p(&[0, 2, -1]).to_string(), "2*t - t^2");
        assert_eq!(p(&[-3, 0, 1]).to_string(), "-3 + t^2");
        let c = Poly::new(vec![GaussianRational::zero(), GaussianRational::i()]);
        assert_eq!(c.to_string(), "i*t");
    }

    #[test]
    fn root_bounds_enclose_roots() {
        let q = p(&[-10, 1]);
        assert!(q.root_modulus_bound() >= BigRational::from_integer(10.into()));
        assert_eq!(p(&[0, 0, 1]).root_modulus_bound(), BigRational::zero());
        let f = &p(&[-2, 1]) * &p(&[3, 1]);
        let b = f.root_modulus_bound();
        assert!(b >= BigRational::from_integer(3.into()));
    }

    #[test]
    fn rational_factor_split() {
        // t(t−2)(t+2)
        let f = p(&[0, -4, 0, 1]);
        let fs = f.rational_linear_factors().unwrap();
        assert_eq!(fs.len(), 3);
        assert!(p(&[1, 0, 1]).rational_linear_factors().is_none());
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec(-6i64..6, 0..=max_deg + 1).prop_map(|v| Poly::from_ints(&v))
    }

    proptest! {
        #[test]
        fn gcd_scales_with_common_factor(a in arb_poly(3), b in arb_poly(3), c in arb_poly(2)) {
            prop_assume!(!c.is_zero() && !(a.is_zero() && b.is_zero()));
            let g = poly_gcd(&(&a * &c), &(&b * &c)).unwrap();
            let expect = (&c * &poly_gcd(&a, &b).unwrap()).monic();
            prop_assert_eq!(g, expect);
        }

        #[test]
        fn div_rem_reconstructs(a in arb_poly(5), b in arb_poly(3)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree());
        }
    }
}
