//! Exact arithmetic over the Gaussian rationals ℚ(i): scalars, dense
//! univariate polynomials, reduced rational functions and linear solving.

mod linalg;
mod poly;
mod ratfunc;
mod scalar;

pub use linalg::{solve_linear_system, LinearVerdict, Matrix};
pub use poly::{poly_gcd, squarefree_part, Poly};
pub use ratfunc::RatFunc;
pub use scalar::{rational_sci, rational_to_f64, sqrt_bounds, GaussianRational};

/// Integer roots of `p` (see [`Poly::integer_roots`]).
pub fn integer_roots(p: &Poly) -> crate::Result<Vec<num_bigint::BigInt>> {
    p.integer_roots()
}

/// Canonical reduced form of `num/den`.
pub fn ratfunc_normalize(num: Poly, den: Poly) -> crate::Result<RatFunc> {
    RatFunc::normalize(num, den)
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> num_bigint::BigInt {
    if k > n {
        return 0.into();
    }
    let k = k.min(n - k);
    let mut acc = num_bigint::BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Monic least common multiple of two nonzero polynomials.
pub fn poly_lcm(a: &Poly, b: &Poly) -> crate::Result<Poly> {
    let g = poly_gcd(a, b)?;
    let q = a.exact_div(&g).ok_or(crate::Error::ZeroGcd)?;
    Ok((&q * b).monic())
}
