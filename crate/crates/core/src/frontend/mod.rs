//! Equations, coefficient strings and problem files.

mod ode;
mod parser;
mod problem;

pub use ode::{AlgebraicOde, MonoKey, XyPoly};
pub use parser::{parse_ode, parse_ratfunc};
pub use problem::{load_problem, Problem, ProblemFile, SectorSpec, SeedEntry, DEFAULT_EXPAND_TO, DEFAULT_PRECISION_BITS};
