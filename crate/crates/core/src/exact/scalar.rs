//! Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact element of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The value as an integer, when it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.im.is_zero() && self.re.is_integer() {
            Some(self.re.to_integer())
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(GaussianRational { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
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

    /// Rational bounds `lo ≤ |z| ≤ hi` with `hi − lo ≤ 2^{−bits}·max(1, |z|)`.
    /// Exact (`lo == hi`) when `z` is real.
    pub fn modulus_bounds(&self, bits: u32) -> (BigRational, BigRational) {
        if self.im.is_zero() {
            let a = self.re.abs();
            return (a.clone(), a);
        }
        if self.re.is_zero() {
            let a = self.im.abs();
            return (a.clone(), a);
        }
        sqrt_bounds(&self.norm_sqr(), bits)
    }

    /// Smallest-effort rational upper bound on `|z|`.
    pub fn modulus_upper(&self, bits: u32) -> BigRational {
        self.modulus_bounds(bits).1
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

/// Nearest `f64`, saturating to ±∞ outside the `f64` range.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // extreme magnitudes: go through a scaled ratio
        let n = q.numer().bits() as i64;
        let d = q.denom().bits() as i64;
        let shift = n - d;
        let scaled = if shift > 0 {
            q / BigRational::from_integer(BigInt::one() << (shift as usize))
        } else {
            q * BigRational::from_integer(BigInt::one() << ((-shift) as usize))
        };
        scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
    })
}

/// Scientific notation (`1.5e300`, `2e-400`) valid beyond the `f64` range.
pub fn rational_sci(q: &BigRational) -> String {
    let f = rational_to_f64(q);
    if f == 0.0 && q.is_zero() {
        return "0e0".into();
    }
    if f.is_finite() && f.abs() > 1e-300 {
        return format!("{f:e}");
    }
    let bits = q.numer().bits() as i64 - q.denom().bits() as i64;
    let e10 = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let p10 = BigRational::from_integer(num_traits::pow(BigInt::from(10), e10.unsigned_abs() as usize));
    let scaled = if e10 >= 0 { q / p10 } else { q * p10 };
    let s = format!("{:e}", rational_to_f64(&scaled));
    let (mant, exp) = s.split_once('e').unwrap();
    format!("{mant}e{}", exp.parse::<i64>().unwrap() + e10)
}

/// Rational bounds on `√q` for `q ≥ 0`.
pub fn sqrt_bounds(q: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!q.is_negative(), "square root of a negative rational");
    if q.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    // √(a/b) = √(a·b)/b; scale by 4^s to get `bits` fractional bits.
    let a = q.numer().magnitude().clone();
    let b = q.denom().magnitude().clone();
    let s = bits as usize + 2;
    let scaled: BigUint = (&a * &b) << (2 * s);
    let root = scaled.sqrt();
    let exact = &root * &root == scaled;
    let den = BigInt::from(b) << s;
    let lo = BigRational::new(BigInt::from(root.clone()), den.clone());
    let hi = if exact { lo.clone() } else { BigRational::new(BigInt::from(root + 1u32), den) };
    (lo, hi)
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re_zero = self.re.is_zero();
        let im_zero = self.im.is_zero();
        if im_zero {
            return fmt_rational(&self.re, f);
        }
        if !re_zero {
            fmt_rational(&self.re, f)?;
            if self.im.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.im.is_one() {
            write!(f, "i")
        } else if (-&self.im).is_one() {
            write!(f, "-i")
        } else {
            fmt_rational(&self.im, f)?;
            write!(f, "*i")
        }
    }
}

impl From<BigRational> for GaussianRational {
    fn from(q: BigRational) -> Self {
        Self::real(q)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self::Output {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self::Output {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => GaussianRational::real(&self.re * &rhs.re),
            (true, false) => GaussianRational { re: &self.re * &rhs.re, im: &self.re * &rhs.im },
            (false, true) => GaussianRational { re: &self.re * &rhs.re, im: &self.im * &rhs.re },
            (false, false) => GaussianRational { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re },
        }
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero; callers check `is_zero` first.
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        if rhs.im.is_zero() {
            return GaussianRational { re: &self.re / &rhs.re, im: &self.im / &rhs.re };
        }
        self * &rhs.inv().expect("division by zero scalar")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussianRational::from_ratio(-3, 4).to_string(), "-3/4");
        assert_eq!(GaussianRational::i().to_string(), "i");
        assert_eq!((-GaussianRational::i()).to_string(), "-i");
        assert_eq!(GaussianRational::new(q(1, 2), q(3, 4)).to_string(), "1/2+3/4*i");
        assert_eq!(GaussianRational::new(q(1, 2), q(-3, 4)).to_string(), "1/2-3/4*i");
        assert_eq!(GaussianRational::new(q(0, 1), q(2, 1)).to_string(), "2*i");
        assert_eq!(GaussianRational::zero().to_string(), "0");
    }

    #[test]
    fn scientific() {
        assert_eq!(rational_sci(&q(3, 2)), "1.5e0");
        let big = BigRational::from_integer(num_traits::pow(BigInt::from(10), 400)) * q(3, 1);
        assert_eq!(rational_sci(&big), "3e400");
        assert_eq!(rational_sci(&big.recip()), "3.3333333333333335e-401");
    }

    #[test]
    fn modulus_of_three_four() {
        let z = GaussianRational::new(q(3, 1), q(4, 1));
        let (lo, hi) = z.modulus_bounds(64);
        assert_eq!(lo, q(5, 1));
        assert_eq!(hi, q(5, 1));
        let w = GaussianRational::new(q(1, 1), q(1, 1));
        let (lo, hi) = w.modulus_bounds(64);
        assert!(&lo * &lo <= q(2, 1) && &hi * &hi >= q(2, 1));
        assert!(&hi - &lo < q(1, 1 << 60));
    }

    fn arb_gr() -> impl Strategy<Value = GaussianRational> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, b, c, d)| GaussianRational::new(q(a, b), q(c, d)))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_gr(), b in arb_gr(), c in arb_gr()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
            prop_assert!((&a - &a).is_zero());
        }
    }
}
