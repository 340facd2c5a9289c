//! The weighted norm `‖f‖_r = Σ_{i≥p} |f_i| r^{−i}` of the Laurent expansion
//! `f = Σ f_i t^{−i}` at infinity, evaluated as a certified rational interval.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rational_to_f64, GaussianRational, Poly, RatFunc};

const MAX_TERMS: usize = 20_000;

/// Closed rational interval `[lo, hi]` with `0 ≤ lo ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(q: BigRational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo * &o.lo, hi: &self.hi * &o.hi }
    }

    pub fn scale(&self, c: &BigRational) -> Interval {
        Interval { lo: &self.lo * c, hi: &self.hi * c }
    }

    pub fn hi_f64(&self) -> f64 {
        rational_to_f64(&self.hi)
    }

    pub fn lo_f64(&self) -> f64 {
        rational_to_f64(&self.lo)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo_f64(), self.hi_f64())
    }
}

/// Decimal rendering used in reports.
#[derive(Clone, Debug, Serialize)]
pub struct IntervalView {
    pub lo: f64,
    pub hi: f64,
}

impl From<&Interval> for IntervalView {
    fn from(i: &Interval) -> Self {
        IntervalView { lo: i.lo_f64(), hi: i.hi_f64() }
    }
}

fn modulus(c: &GaussianRational, bits: u32) -> (BigRational, BigRational) {
    c.modulus_bounds(bits)
}

/// `Σ |p_i| r^i`; a point interval unless some coefficient has an irrational modulus.
pub fn poly_norm(p: &Poly, r: &BigRational, bits: u32) -> Interval {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    // Horner from the top
    for c in p.coeffs().iter().rev() {
        let (l, h) = modulus(c, bits);
        lo = &lo * r + l;
        hi = &hi * r + h;
    }
    Interval { lo, hi }
}

/// `r^e` for a signed exponent.
fn rpow(r: &BigRational, e: i64) -> BigRational {
    let base = if e >= 0 { r.clone() } else { r.recip() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// Norm with tail error at most `tol`.
///
/// Requires every pole of `f` to have modulus below `r`; the bound used is
/// [`Poly::root_modulus_bound`] of the denominator.
pub fn norm(f: &RatFunc, r: &BigRational, tol: &BigRational, bits: u32) -> Result<Interval> {
    if f.is_zero() {
        return Ok(Interval::zero());
    }
    if f.is_polynomial() {
        return Ok(poly_norm(f.num(), r, bits));
    }
    let den = f.den();
    let dn = f.num().degree().unwrap();
    let dd = den.degree().unwrap();
    let rho = den.root_modulus_bound();
    if &rho >= r {
        return Err(Error::RadiusTooSmall { bound: rho.to_string(), r: r.to_string() });
    }
    // a pure power of t gives a finite Laurent polynomial
    if den.low_degree() == Some(dd) {
        return Ok(laurent_sum(f, r, dn + 1, bits));
    }
    let (_, rem) = f.num().div_rem(den)?;
    let s = (&rho + r) / BigRational::from_integer(BigInt::from(2));
    let ratio = &s / r;
    // |h_i| ≤ G s^i on the proper part, G = max_{|t|=s} |rem/den|
    let g = poly_norm(&rem, &s, bits).hi / num_traits::pow(&s - &rho, dd);
    let one_minus = BigRational::one() - &ratio;
    let tail_after = |t: usize| -> BigRational { &g * num_traits::pow(ratio.clone(), t + 1) / &one_minus };

    // initial guess in floating point, then confirm exactly
    let gf = rational_to_f64(&g).max(f64::MIN_POSITIVE);
    let tf = rational_to_f64(tol).max(f64::MIN_POSITIVE);
    let rf = rational_to_f64(&ratio);
    let guess = ((tf * rational_to_f64(&one_minus) / gf).ln() / rf.ln()).ceil();
    let mut t = if guess.is_finite() && guess > 0.0 { guess.to_usize().unwrap_or(MAX_TERMS) } else { 1 };
    let mut tail = tail_after(t);
    while &tail > tol {
        t += 8;
        if t > MAX_TERMS {
            return Err(Error::NormTolerance(MAX_TERMS));
        }
        tail = tail_after(t);
    }
    // terms with index i from p = dd − dn up to t
    let p = dd as i64 - dn as i64;
    let count = (t as i64 - p + 1).max(1) as usize;
    let mut iv = laurent_sum(f, r, count, bits);
    iv.hi += tail;
    Ok(iv)
}

fn laurent_sum(f: &RatFunc, r: &BigRational, count: usize, bits: u32) -> Interval {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for (i, c) in f.laurent_at_infinity(count) {
        if c.is_zero() {
            continue;
        }
        let w = rpow(r, -i);
        let (l, h) = modulus(&c, bits);
        lo += &l * &w;
        hi += &h * &w;
    }
    Interval { lo, hi }
}

/// Smallest power of two (with nonnegative exponent) that is `≥ q`.
pub fn power_of_two_at_least(q: &BigRational) -> BigRational {
    let mut r = BigRational::one();
    while &r < q {
        r *= BigRational::from_integer(BigInt::from(2));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_ratfunc;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn tol() -> BigRational {
        q(1, 1 << 40)
    }

    #[test]
    fn finite_sums() {
        let f = parse_ratfunc("t^2 + 2*t").unwrap();
        let iv = norm(&f, &q(5, 1), &tol(), 64).unwrap();
        assert_eq!(iv, Interval::point(q(35, 1)));
        assert_eq!(norm(&RatFunc::zero(), &q(5, 1), &tol(), 64).unwrap(), Interval::zero());
        let g = parse_ratfunc("(t + 3)/t^2").unwrap();
        assert_eq!(norm(&g, &q(4, 1), &tol(), 64).unwrap(), Interval::point(q(1, 4) + q(3, 16)));
    }

    #[test]
    fn geometric_pole() {
        // ‖1/(t − a)‖ = 1/(r − |a|)
        for (a, r) in [(3i64, 8i64), (-5, 16), (1, 2)] {
            let f = parse_ratfunc(&format!("1/(t - ({a}))")).unwrap();
            let rr = q(r, 1);
            let iv = norm(&f, &rr, &tol(), 64).unwrap();
            let exact = q(1, r - a.abs());
            assert!(iv.lo <= exact && exact <= iv.hi, "{a} {r}: {iv}");
            assert!(iv.width() <= tol());
        }
    }

    #[test]
    fn radius_too_small() {
        let f = parse_ratfunc("1/(t - 10)").unwrap();
        assert!(matches!(norm(&f, &q(8, 1), &tol(), 64), Err(Error::RadiusTooSmall { .. })));
    }

    #[test]
    fn gaussian_coefficients() {
        let f = parse_ratfunc("(3 + 4*i)*t").unwrap();
        assert_eq!(norm(&f, &q(2, 1), &tol(), 64).unwrap(), Interval::point(q(10, 1)));
        let g = parse_ratfunc("(1 + i)*t").unwrap();
        let iv = norm(&g, &q(1, 1), &tol(), 64).unwrap();
        assert!(&iv.lo * &iv.lo <= q(2, 1) && &iv.hi * &iv.hi >= q(2, 1));
    }
}
