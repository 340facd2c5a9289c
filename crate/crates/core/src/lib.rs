//! Exact expansion and convergence certification of power-log series
//! solutions `Σ R_k(ln x)·x^k` of algebraic ODEs `F(x, y, δy, …, δⁿy) = 0`,
//! where `δ = x·d/dx` and every `R_k` is a rational function.
//!
//! The pipeline runs bottom-up through the modules:
//!
//! * [`exact`]: ℚ(i) scalars, polynomials, rational functions, linear solving
//! * [`series`]: truncated power-log series and the δ-calculus
//! * [`frontend`]: expression grammar, ODEs and problem files
//! * [`reduce`]: the nondegeneracy check and the reduction `L(δ)u = x·M`
//! * [`recurse`]: the coefficient recursion and growth bounds
//! * [`majorant`]: weighted norms, constants, and the majorant inequality
//! * [`numeric`]: floating evaluation, residuals and radius estimates
//! * [`oracles`]: independent brute-force checks used by the test suites

pub mod error;
pub mod exact;
pub mod frontend;
pub mod majorant;
pub mod numeric;
pub mod oracles;
pub mod recurse;
pub mod reduce;
pub mod series;

pub use error::{Error, Result};
pub use exact::{GaussianRational, Poly, RatFunc};
pub use frontend::{AlgebraicOde, Problem};
pub use series::PowerLogSeries;
