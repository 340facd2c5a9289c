//! Truncated power-log series `Σ_{k ≤ N} R_k(t)·x^k` with `t = ln x`, and the
//! δ-calculus acting on them.
//!
//! A series with truncation order `N` is exact modulo `x^{N+1}`. Products
//! inherit the smaller truncation order, δ acts coefficient-wise and keeps it.

use std::collections::BTreeMap;
use std::fmt;

use crate::exact::{GaussianRational, RatFunc};
use crate::frontend::{AlgebraicOde, XyPoly};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerLogSeries {
    coeffs: BTreeMap<usize, RatFunc>,
    trunc: usize,
}

/// Result of [`PowerLogSeries::valuation`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    At(usize),
    /// No nonzero coefficient up to and including this order.
    ZeroUpTo(usize),
}

impl Valuation {
    pub fn value(self) -> Option<usize> {
        match self {
            Valuation::At(k) => Some(k),
            Valuation::ZeroUpTo(_) => None,
        }
    }

    /// Certified lower bound on the valuation of the exact series.
    pub fn lower_bound(self) -> usize {
        match self {
            Valuation::At(k) => k,
            Valuation::ZeroUpTo(n) => n + 1,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::At(k) => write!(f, "{k}"),
            Valuation::ZeroUpTo(n) => write!(f, "all-zero up to {n}"),
        }
    }
}

impl PowerLogSeries {
    pub fn zero(trunc: usize) -> Self {
        PowerLogSeries { coeffs: BTreeMap::new(), trunc }
    }

    pub fn constant(c: RatFunc, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.set(0, c);
        s
    }

    /// Builds from `(k, R_k)` pairs, dropping zeros and exponents above `trunc`.
    pub fn from_terms<I: IntoIterator<Item = (usize, RatFunc)>>(terms: I, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        for (k, r) in terms {
            let cur = s.coeff(k);
            s.set(k, &cur + &r);
        }
        s
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeff(&self, k: usize) -> RatFunc {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, k: usize) -> Option<&RatFunc> {
        self.coeffs.get(&k)
    }

    /// Stored (nonzero) coefficients in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &RatFunc)> {
        self.coeffs.iter().map(|(k, r)| (*k, r))
    }

    pub fn set(&mut self, k: usize, r: RatFunc) {
        if k > self.trunc || r.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, r);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Same coefficients, new truncation order (dropping terms above it).
    pub fn with_trunc(&self, trunc: usize) -> Self {
        PowerLogSeries { coeffs: self.coeffs.range(..=trunc).map(|(k, r)| (*k, r.clone())).collect(), trunc }
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.keys().next() {
            Some(&k) => Valuation::At(k),
            None => Valuation::ZeroUpTo(self.trunc),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.with_trunc(trunc);
        for (&k, r) in other.coeffs.range(..=trunc) {
            let cur = out.coeff(k);
            out.set(k, &cur + r);
        }
        out
    }

    pub fn neg(&self) -> Self {
        PowerLogSeries { coeffs: self.coeffs.iter().map(|(k, r)| (*k, -r)).collect(), trunc: self.trunc }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        let mut out = Self::zero(self.trunc);
        for (&k, r) in &self.coeffs {
            out.set(k, r * c);
        }
        out
    }

    pub fn scale_scalar(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(self.trunc);
        for (&k, r) in &self.coeffs {
            out.set(k, r.scale(c));
        }
        out
    }

    /// Multiply by `x^s`; terms pushed past `trunc` are dropped.
    pub fn mul_x_pow(&self, s: usize) -> Self {
        let mut out = Self::zero(self.trunc);
        for (&k, r) in &self.coeffs {
            out.set(k + s, r.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut acc: BTreeMap<usize, RatFunc> = BTreeMap::new();
        for (&i, a) in self.coeffs.range(..=trunc) {
            for (&j, b) in other.coeffs.range(..=trunc - i) {
                let e = acc.entry(i + j).or_default();
                *e = &*e + &(a * b);
            }
        }
        PowerLogSeries { coeffs: acc.into_iter().filter(|(_, r)| !r.is_zero()).collect(), trunc }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(RatFunc::one(), self.trunc);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `(δ + shift)` applied termwise: `R(t)·x^k ↦ x^k·(shift + k + d/dt)R`.
    pub fn delta(&self, shift: usize) -> Self {
        let mut out = Self::zero(self.trunc);
        for (&k, r) in &self.coeffs {
            out.set(k, r.shifted_derivative(&GaussianRational::from_int((k + shift) as i64)));
        }
        out
    }

    /// `[s, (δ+ℓ)s, …, (δ+ℓ)^n s]`.
    pub fn jet(&self, n: usize, shift: usize) -> JetVector {
        let mut entries = Vec::with_capacity(n + 1);
        entries.push(self.clone());
        for j in 1..=n {
            let next = entries[j - 1].delta(shift);
            entries.push(next);
        }
        JetVector { entries }
    }
}

impl fmt::Display for PowerLogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (k, r)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({r})*x^{k}")?;
        }
        write!(f, " + O(x^{})", self.trunc + 1)
    }
}

/// `n + 1` series sharing one truncation order: a base series and its
/// successive (shifted) δ-derivatives.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JetVector {
    entries: Vec<PowerLogSeries>,
}

impl JetVector {
    pub fn new(entries: Vec<PowerLogSeries>) -> Self {
        assert!(!entries.is_empty(), "empty jet");
        let trunc = entries[0].trunc();
        assert!(entries.iter().all(|e| e.trunc() == trunc), "jet entries must share truncation");
        JetVector { entries }
    }

    pub fn entries(&self) -> &[PowerLogSeries] {
        &self.entries
    }

    pub fn get(&self, j: usize) -> &PowerLogSeries {
        &self.entries[j]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn trunc(&self) -> usize {
        self.entries[0].trunc()
    }
}

/// Evaluates a polynomial in `(x, y0, …, yn)` on the jets as a truncated series.
pub fn substitute_poly(p: &XyPoly, jets: &JetVector) -> PowerLogSeries {
    let trunc = jets.trunc();
    let mut powers: Vec<Vec<PowerLogSeries>> =
        jets.entries.iter().map(|e| vec![PowerLogSeries::constant(RatFunc::one(), trunc), e.clone()]).collect();
    let mut out = PowerLogSeries::zero(trunc);
    for (key, c) in p.terms() {
        if key.mu as usize > trunc {
            continue;
        }
        let mut term = PowerLogSeries::constant(RatFunc::constant(c.clone()), trunc);
        for (j, &e) in key.q.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let cache = &mut powers[j];
            while cache.len() <= e as usize {
                let next = cache.last().unwrap().mul(jets.get(j));
                cache.push(next);
            }
            term = term.mul(&cache[e as usize]);
            if term.is_zero() {
                break;
            }
        }
        out = out.add(&term.mul_x_pow(key.mu as usize));
    }
    out
}

/// `F(x, Φ)` as a truncated series.
pub fn substitute(ode: &AlgebraicOde, jets: &JetVector) -> PowerLogSeries {
    assert_eq!(jets.len(), ode.order() + 1, "jet length must be n + 1");
    substitute_poly(ode.poly(), jets)
}

/// `∂F/∂y_j (x, Φ)` as a truncated series.
pub fn partial_series(ode: &AlgebraicOde, j: usize, jets: &JetVector) -> PowerLogSeries {
    assert!(j <= ode.order());
    substitute_poly(&ode.partial(j), jets)
}

/// Valuation of `s` (free-function form).
pub fn valuation(s: &PowerLogSeries) -> Valuation {
    s.valuation()
}
