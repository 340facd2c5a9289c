use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::RatFunc;
use crate::series::PowerLogSeries;

use super::ode::AlgebraicOde;
use super::parser::{parse_ode, parse_ratfunc};

pub const DEFAULT_EXPAND_TO: usize = 8;
pub const DEFAULT_PRECISION_BITS: usize = 128;

/// Sector `S = {0 < |x| < radius, |arg x − bisector| < opening/2}` in degrees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorSpec {
    pub radius: f64,
    pub opening_deg: f64,
    pub bisector_deg: f64,
    /// Grid size per direction (radii × angles).
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    4
}

impl SectorSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.radius.is_finite()
            && self.radius > 0.0
            && self.opening_deg.is_finite()
            && self.opening_deg > 0.0
            && self.opening_deg < 360.0
            && self.bisector_deg.is_finite()
            && self.samples >= 1;
        if !ok {
            return Err(Error::InvalidSector(format!(
                "radius {} opening {} bisector {} samples {}",
                self.radius, self.opening_deg, self.bisector_deg, self.samples
            )));
        }
        // the principal branch cut along the negative axis must stay outside
        let b = self.bisector_deg.rem_euclid(360.0);
        let b = if b > 180.0 { b - 360.0 } else { b };
        if b.abs() + self.opening_deg / 2.0 > 180.0 {
            return Err(Error::InvalidSector(format!(
                "sector with bisector {} and opening {} crosses the branch cut of ln",
                self.bisector_deg, self.opening_deg
            )));
        }
        Ok(())
    }

    /// Parses `R,OPEN,BIS`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::InvalidSector(format!("expected RADIUS,OPENING,BISECTOR, got '{s}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let v: Vec<f64> = parts.iter().map(|p| p.parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        let spec = SectorSpec { radius: v[0], opening_deg: v[1], bisector_deg: v[2], samples: default_samples() };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedEntry {
    pub k: usize,
    pub value: String,
}

/// On-disk problem file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub order: usize,
    pub equation: String,
    pub seed: Vec<SeedEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expand_to: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector: Option<SectorSpec>,
}

/// A validated problem: the equation, the formal solution prefix and options.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub ode: AlgebraicOde,
    /// Seed coefficients `R_k`; exponents not listed are zero.
    pub seed: BTreeMap<usize, RatFunc>,
    /// Largest listed seed exponent.
    pub seed_order: usize,
    pub expand_to: usize,
    /// Extra depth beyond the seed valuation for the condition check.
    pub check_depth: usize,
    pub precision_bits: usize,
    pub sector: Option<SectorSpec>,
}

impl Problem {
    pub fn from_file(file: &ProblemFile) -> Result<Self> {
        let ode = parse_ode(&file.equation, Some(file.order))?;
        if file.seed.is_empty() {
            return Err(Error::InvalidProblem("seed must list at least one coefficient".into()));
        }
        let mut seed = BTreeMap::new();
        for entry in &file.seed {
            let r = parse_ratfunc(&entry.value)?;
            if seed.contains_key(&entry.k) {
                return Err(Error::InvalidProblem(format!("duplicate seed exponent k = {}", entry.k)));
            }
            seed.insert(entry.k, r);
        }
        let seed_order = file.seed.iter().map(|e| e.k).max().unwrap();
        seed.retain(|_, r: &mut RatFunc| !r.is_zero());
        if let Some(s) = &file.sector {
            s.validate()?;
        }
        let precision_bits = file.precision_bits.unwrap_or(DEFAULT_PRECISION_BITS);
        if precision_bits < 16 {
            return Err(Error::InvalidProblem("precision_bits must be at least 16".into()));
        }
        Ok(Problem {
            check_depth: file.check_depth.unwrap_or(2 * ode.order() + 4),
            ode,
            seed,
            seed_order,
            expand_to: file.expand_to.unwrap_or(DEFAULT_EXPAND_TO),
            precision_bits,
            sector: file.sector,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::InvalidProblem(format!("malformed problem file: {e}")))?;
        Self::from_file(&file)
    }

    /// Seed as a series truncated at `trunc`.
    pub fn seed_series(&self, trunc: usize) -> PowerLogSeries {
        PowerLogSeries::from_terms(self.seed.iter().map(|(k, r)| (*k, r.clone())), trunc)
    }

    pub fn to_file(&self) -> ProblemFile {
        ProblemFile {
            order: self.ode.order(),
            equation: self.ode.to_string(),
            seed: (0..=self.seed_order)
                .filter_map(|k| match self.seed.get(&k) {
                    Some(r) => Some(SeedEntry { k, value: r.to_string() }),
                    None if k == self.seed_order => Some(SeedEntry { k, value: "0".into() }),
                    None => None,
                })
                .collect(),
            expand_to: Some(self.expand_to),
            check_depth: Some(self.check_depth),
            precision_bits: Some(self.precision_bits),
            sector: self.sector,
        }
    }
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<Problem> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Problem::from_json(&text)
}
