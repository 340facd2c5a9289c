//! Multiprecision evaluation of truncated series on sectors, numeric
//! residuals and a heuristic radius estimate.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{GaussianRational, Poly, RatFunc};
use crate::frontend::{AlgebraicOde, SectorSpec};
use crate::series::PowerLogSeries;

const RM: RoundingMode = RoundingMode::ToEven;

/// `f64` pair used at the interface.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

pub fn bf_to_f64(b: &BigFloat) -> f64 {
    if b.is_zero() {
        return 0.0;
    }
    if b.is_nan() {
        return f64::NAN;
    }
    if b.is_inf() {
        return if b.is_inf_pos() { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    let (m, _, s, e, _) = b.as_raw_parts().unwrap();
    // mantissa is normalized with its top bit set: value = 0.m × 2^e
    let top = *m.last().unwrap() as f64 / 2f64.powi(64);
    let next = if m.len() > 1 { m[m.len() - 2] as f64 / 2f64.powi(128) } else { 0.0 };
    let v = (top + next) * 2f64.powi(e);
    if s == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Complex number at working precision.
#[derive(Clone, Debug)]
pub struct Cx {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Cx {
    pub fn to_c64(&self) -> C64 {
        C64 { re: bf_to_f64(&self.re), im: bf_to_f64(&self.im) }
    }
}

/// Working precision plus the constant cache of the float library.
pub struct Evaluator {
    p: usize,
    cc: Consts,
}

impl Evaluator {
    pub fn new(precision_bits: usize) -> Self {
        Evaluator { p: precision_bits.max(16), cc: Consts::new().expect("constant cache") }
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    fn zero(&self) -> Cx {
        Cx { re: BigFloat::from_f64(0.0, self.p), im: BigFloat::from_f64(0.0, self.p) }
    }

    fn one(&self) -> Cx {
        Cx { re: BigFloat::from_f64(1.0, self.p), im: BigFloat::from_f64(0.0, self.p) }
    }

    pub fn from_c64(&self, z: C64) -> Cx {
        Cx { re: BigFloat::from_f64(z.re, self.p), im: BigFloat::from_f64(z.im, self.p) }
    }

    fn int(&mut self, n: &BigInt) -> BigFloat {
        BigFloat::parse(&n.to_string(), Radix::Dec, self.p, RM, &mut self.cc)
    }

    fn rational(&mut self, q: &BigRational) -> BigFloat {
        let n = self.int(q.numer());
        if q.denom() == &BigInt::from(1) {
            return n;
        }
        let d = self.int(q.denom());
        n.div(&d, self.p, RM)
    }

    fn scalar(&mut self, c: &GaussianRational) -> Cx {
        Cx { re: self.rational(c.re()), im: self.rational(c.im()) }
    }

    fn add(&self, a: &Cx, b: &Cx) -> Cx {
        Cx { re: a.re.add(&b.re, self.p, RM), im: a.im.add(&b.im, self.p, RM) }
    }

    fn sub(&self, a: &Cx, b: &Cx) -> Cx {
        Cx { re: a.re.sub(&b.re, self.p, RM), im: a.im.sub(&b.im, self.p, RM) }
    }

    fn mul(&self, a: &Cx, b: &Cx) -> Cx {
        let p = self.p;
        let re = a.re.mul(&b.re, p, RM).sub(&a.im.mul(&b.im, p, RM), p, RM);
        let im = a.re.mul(&b.im, p, RM).add(&a.im.mul(&b.re, p, RM), p, RM);
        Cx { re, im }
    }

    fn norm_sqr(&self, a: &Cx) -> BigFloat {
        a.re.mul(&a.re, self.p, RM).add(&a.im.mul(&a.im, self.p, RM), self.p, RM)
    }

    fn div(&self, a: &Cx, b: &Cx) -> Cx {
        let d = self.norm_sqr(b);
        let conj = Cx { re: b.re.clone(), im: b.im.neg() };
        let n = self.mul(a, &conj);
        Cx { re: n.re.div(&d, self.p, RM), im: n.im.div(&d, self.p, RM) }
    }

    pub fn abs(&self, a: &Cx) -> BigFloat {
        self.norm_sqr(a).sqrt(self.p, RM)
    }

    /// Principal logarithm.
    pub fn ln(&mut self, z: &Cx) -> Result<Cx> {
        if z.re.is_zero() && z.im.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let p = self.p;
        let half = BigFloat::from_f64(0.5, p);
        let re = self.norm_sqr(z).ln(p, RM, &mut self.cc).mul(&half, p, RM);
        let pi = self.cc.pi(p, RM);
        let im = if z.re.is_zero() {
            let h = pi.mul(&half, p, RM);
            if z.im.is_positive() {
                h
            } else {
                h.neg()
            }
        } else {
            let a = z.im.div(&z.re, p, RM).atan(p, RM, &mut self.cc);
            if z.re.is_positive() {
                a
            } else if z.im.is_negative() {
                a.sub(&pi, p, RM)
            } else {
                a.add(&pi, p, RM)
            }
        };
        Ok(Cx { re, im })
    }

    pub fn poly(&mut self, p: &Poly, t: &Cx) -> Cx {
        let mut acc = self.zero();
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, t);
            if !c.is_zero() {
                let cc = self.scalar(c);
                acc = self.add(&acc, &cc);
            }
        }
        acc
    }

    /// `f(t)`, refusing points where the denominator is below `2^{−p/2}`.
    pub fn ratfunc(&mut self, f: &RatFunc, t: &Cx, at: C64) -> Result<Cx> {
        let n = self.poly(f.num(), t);
        if f.den().is_one() {
            return Ok(n);
        }
        let d = self.poly(f.den(), t);
        let guard = BigFloat::from_f64(2f64.powi(-(self.p as i32)), self.p);
        // |d|² < 2^{−p}
        if self.norm_sqr(&d).cmp(&guard).is_none_or(|c| c < 0) {
            return Err(Error::LogPole(format!("{}{:+}i", at.re, at.im)));
        }
        Ok(self.div(&n, &d))
    }

    /// `Σ_{k ≤ N} R_k(ln x)·x^k`.
    pub fn eval_series(&mut self, series: &PowerLogSeries, n_max: usize, x: C64) -> Result<Cx> {
        let xb = self.from_c64(x);
        let t = self.ln(&xb)?;
        let mut acc = self.zero();
        let mut xk = self.one();
        let mut k_done = 0usize;
        for (k, r) in series.terms() {
            if k > n_max {
                break;
            }
            while k_done < k {
                xk = self.mul(&xk, &xb);
                k_done += 1;
            }
            let v = self.ratfunc(r, &t, x)?;
            acc = self.add(&acc, &self.mul(&v, &xk));
        }
        Ok(acc)
    }

    /// `|F(x, φ_N, δφ_N, …, δⁿφ_N)|` with the jets formed exactly first.
    pub fn residual(&mut self, ode: &AlgebraicOde, series: &PowerLogSeries, n_max: usize, x: C64) -> Result<BigFloat> {
        let phi = series.with_trunc(n_max);
        let jets = phi.jet(ode.order(), 0);
        let mut ys = Vec::with_capacity(jets.len());
        for j in 0..jets.len() {
            ys.push(self.eval_series(jets.get(j), n_max, x)?);
        }
        let xb = self.from_c64(x);
        let mut acc = self.zero();
        for (key, c) in ode.poly().terms() {
            let mut term = self.scalar(c);
            for _ in 0..key.mu {
                term = self.mul(&term, &xb);
            }
            for (j, &e) in key.q.iter().enumerate() {
                for _ in 0..e {
                    term = self.mul(&term, &ys[j]);
                }
            }
            acc = self.add(&acc, &term);
        }
        Ok(self.abs(&acc))
    }

    /// `|a − b| / max(|a|, |b|)` (zero when both vanish).
    pub fn relative_difference(&self, a: &Cx, b: &Cx) -> f64 {
        let d = bf_to_f64(&self.abs(&self.sub(a, b)));
        let m = bf_to_f64(&self.abs(a)).max(bf_to_f64(&self.abs(b)));
        if m == 0.0 {
            d
        } else {
            d / m
        }
    }
}

/// `Σ_{k ≤ N} R_k(ln x)·x^k` at `precision_bits`.
pub fn eval_truncated(series: &PowerLogSeries, n_max: usize, x: C64, precision_bits: usize) -> Result<C64> {
    Ok(Evaluator::new(precision_bits).eval_series(series, n_max, x)?.to_c64())
}

/// Numeric residual magnitude `|F(x, φ_N, …)|`.
pub fn residual(ode: &AlgebraicOde, series: &PowerLogSeries, n_max: usize, x: C64, precision_bits: usize) -> Result<f64> {
    Ok(bf_to_f64(&Evaluator::new(precision_bits).residual(ode, series, n_max, x)?))
}

/// Grid of `samples × samples` points strictly inside the sector.
pub fn sector_points(spec: &SectorSpec) -> Result<Vec<C64>> {
    spec.validate()?;
    let s = spec.samples;
    let mut pts = Vec::with_capacity(s * s);
    for i in 1..=s {
        let rad = spec.radius * i as f64 / (s + 1) as f64;
        for j in 1..=s {
            let frac = j as f64 / (s + 1) as f64 - 0.5;
            let ang = (spec.bisector_deg + spec.opening_deg * frac).to_radians();
            pts.push(C64::new(rad * ang.cos(), rad * ang.sin()));
        }
    }
    Ok(pts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusEstimate {
    /// `None` stands for +∞ (no nonzero data in the window).
    pub value: Option<f64>,
    pub method: &'static str,
}

/// Root-test estimate from `(k, ‖·‖_k)` pairs.
///
/// Over the trailing half of the data (at least three points), takes the
/// largest growth rate `(v_k / v_j)^{1/(k−j)}` between the first nonzero point
/// `j` of the window and each later nonzero `k`, falling back to `v_k^{1/k}`
/// when the window holds a single nonzero point.
pub fn radius_estimate(points: &[(usize, f64)]) -> Result<RadiusEstimate> {
    const METHOD: &str = "root test (heuristic)";
    if points.len() < 5 {
        return Err(Error::TooFewPoints { needed: 5, got: points.len() });
    }
    let w = (points.len() / 2).max(3);
    let window: Vec<(usize, f64)> = points[points.len() - w..].iter().copied().filter(|(_, v)| *v > 0.0).collect();
    let Some(&(j, vj)) = window.first() else {
        return Ok(RadiusEstimate { value: None, method: METHOD });
    };
    let mut rate: f64 = 0.0;
    if window.len() == 1 {
        rate = vj.powf(1.0 / j.max(1) as f64);
    }
    for &(k, vk) in &window[1..] {
        rate = rate.max((vk / vj).powf(1.0 / (k - j) as f64));
    }
    let value = if rate > 0.0 { Some(1.0 / rate) } else { None };
    Ok(RadiusEstimate { value, method: METHOD })
}
