use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::GaussianRational;

/// Exponent data of one monomial `x^mu · y0^q[0] ⋯ yn^q[n]`.
///
/// The derived ordering (by `mu`, then `q` lexicographically) is the
/// canonical printing order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MonoKey {
    pub mu: u32,
    pub q: Vec<u32>,
}

impl MonoKey {
    pub fn total_degree(&self) -> u32 {
        self.q.iter().sum()
    }

    /// `q_1 + 2q_2 + … + n·q_n`.
    pub fn weighted_degree(&self) -> u32 {
        self.q.iter().enumerate().map(|(j, &e)| j as u32 * e).sum()
    }
}

/// Polynomial in `x, y0, …, yn` with ℚ(i) coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct XyPoly {
    /// Number of jet variables (`n + 1`).
    pub vars: usize,
    terms: BTreeMap<MonoKey, GaussianRational>,
}

impl XyPoly {
    pub fn zero(vars: usize) -> Self {
        XyPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(MonoKey { mu: 0, q: vec![0; vars] }, c);
        p
    }

    pub fn x(vars: usize) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(MonoKey { mu: 1, q: vec![0; vars] }, GaussianRational::one());
        p
    }

    pub fn y(vars: usize, j: usize) -> Self {
        let mut q = vec![0; vars];
        q[j] = 1;
        let mut p = Self::zero(vars);
        p.add_term(MonoKey { mu: 0, q }, GaussianRational::one());
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonoKey, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k.mu == 0 && k.total_degree() == 0)
    }

    /// Constant value, when the polynomial is one.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.terms.is_empty() {
            return Some(GaussianRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn add_term(&mut self, key: MonoKey, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        assert_eq!(key.q.len(), self.vars, "monomial arity mismatch");
        let entry = self.terms.entry(key.clone()).or_insert_with(GaussianRational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Re-embed into `vars` jet variables (must not drop used variables).
    pub fn with_vars(&self, vars: usize) -> Result<XyPoly> {
        let mut out = XyPoly::zero(vars);
        for (k, c) in &self.terms {
            if k.q.iter().skip(vars).any(|&e| e > 0) {
                return Err(Error::InvalidProblem(format!("y-index above declared order {}", vars - 1)));
            }
            let mut q = k.q.clone();
            q.resize(vars, 0);
            out.add_term(MonoKey { mu: k.mu, q }, c.clone());
        }
        Ok(out)
    }

    /// Highest `j` with `yj` occurring.
    pub fn max_y_index(&self) -> Option<usize> {
        self.terms.keys().filter_map(|k| k.q.iter().rposition(|&e| e > 0)).max()
    }

    pub fn add(&self, other: &XyPoly) -> XyPoly {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> XyPoly {
        XyPoly { vars: self.vars, terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &XyPoly) -> XyPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &XyPoly) -> XyPoly {
        assert_eq!(self.vars, other.vars);
        let mut out = XyPoly::zero(self.vars);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let q = ka.q.iter().zip(&kb.q).map(|(a, b)| a + b).collect();
                out.add_term(MonoKey { mu: ka.mu + kb.mu, q }, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> XyPoly {
        let mut acc = XyPoly::constant(self.vars, GaussianRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &GaussianRational) -> XyPoly {
        let mut out = XyPoly::zero(self.vars);
        for (k, a) in &self.terms {
            out.add_term(k.clone(), a * c);
        }
        out
    }

    /// `∂/∂yj`.
    pub fn partial(&self, j: usize) -> XyPoly {
        let mut out = XyPoly::zero(self.vars);
        for (k, c) in &self.terms {
            let e = k.q[j];
            if e == 0 {
                continue;
            }
            let mut q = k.q.clone();
            q[j] -= 1;
            out.add_term(MonoKey { mu: k.mu, q }, c * &GaussianRational::from_int(e as i64));
        }
        out
    }

    /// Highest power of `x` occurring.
    pub fn x_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.mu).max().unwrap_or(0)
    }

    /// Highest total degree in the `y` variables.
    pub fn y_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.total_degree()).max().unwrap_or(0)
    }
}

impl fmt::Display for XyPoly {
    /// Canonical printing: monomials sorted by `(mu, q)`, scalar first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            if k.mu == 1 {
                factors.push("x".into());
            } else if k.mu > 1 {
                factors.push(format!("x^{}", k.mu));
            }
            for (j, &e) in k.q.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("y{j}")),
                    _ => factors.push(format!("y{j}^{e}")),
                }
            }
            let neg = if c.re().is_zero() { c.im().is_negative() } else { c.im().is_zero() && c.re().is_negative() };
            let mag = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let scalar = if !mag.is_real() && !mag.re().is_zero() { format!("({mag})") } else { mag.to_string() };
            if factors.is_empty() {
                write!(f, "{scalar}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{scalar}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Algebraic ODE `F(x, y0, …, yn) = 0` in δ-form variables `yj = δ^j y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraicOde {
    n: usize,
    poly: XyPoly,
}

impl AlgebraicOde {
    /// Validates that `F` involves the unknown.
    pub fn new(poly: XyPoly) -> Result<Self> {
        if poly.vars == 0 {
            return Err(Error::InvalidProblem("equation needs at least one y variable".into()));
        }
        if poly.max_y_index().is_none() {
            return Err(Error::InvalidProblem("equation does not involve the unknown".into()));
        }
        Ok(AlgebraicOde { n: poly.vars - 1, poly })
    }

    /// Order `n`.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &XyPoly {
        &self.poly
    }

    pub fn monomial_count(&self) -> usize {
        self.poly.len()
    }

    pub fn partial(&self, j: usize) -> XyPoly {
        self.poly.partial(j)
    }
}

impl fmt::Display for AlgebraicOde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}
