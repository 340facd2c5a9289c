//! Weighted norms, the operator constants and the majorant certificate.

mod context;
mod norm;
mod run;

pub use context::{choose_r, d_chain, d_op, l_op, rebase_operator, Constants, ConstantsView, NormContext};
pub use norm::{norm, poly_norm, power_of_two_at_least, Interval, IntervalView};
pub use run::{
    build_majorant, certify, certify_expansion, majorant_recursion, rebase_monomials, Certificate, MajorantMonomial, MajorantRun, Verdict,
    VerdictView,
};
