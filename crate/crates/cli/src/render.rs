//! JSON/CSV rendering shared by the subcommands.

use std::io::Write;
use std::path::Path;

use powerlog::numeric::C64;
use powerlog::series::Valuation;
use powerlog::Error;
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

pub fn valuation(v: &Valuation) -> Value {
    match v {
        Valuation::At(k) => json!(k),
        Valuation::ZeroUpTo(n) => json!({ "zero_up_to": n }),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZeroPolynomial => "division_by_zero",
        Error::ZeroGcd => "zero_gcd",
        Error::ZeroPolynomial(_) => "zero_polynomial",
        Error::Syntax { .. } => "syntax",
        Error::InvalidProblem(_) => "invalid_problem",
        Error::Io(_) => "io",
        Error::Indeterminate { .. } => "indeterminate",
        Error::ConditionFailed(_) => "condition_failed",
        Error::EllTooSmall { .. } => "ell_too_small",
        Error::Divisibility { .. } => "divisibility",
        Error::Denominator { .. } => "denominator",
        Error::SeedTooShort { .. } => "seed_too_short",
        Error::NoRationalSolution { .. } => "no_rational_solution",
        Error::NotUnique { .. } => "not_unique",
        Error::PoleOutsideSet { .. } => "pole_outside_set",
        Error::RadiusTooSmall { .. } => "radius_too_small",
        Error::NormTolerance(_) => "norm_tolerance",
        Error::LogPole(_) => "log_pole",
        Error::ZeroArgument => "zero_argument",
        Error::InvalidSector(_) => "invalid_sector",
        Error::NotInvertible => "not_invertible",
        Error::TooFewPoints { .. } => "too_few_points",
    }
}

pub fn error_value(e: &Error) -> Value {
    let mut obj = json!({ "kind": error_kind(e), "message": e.to_string() });
    if let Error::Syntax { line, column, .. } = e {
        obj["line"] = json!(line);
        obj["column"] = json!(column);
    }
    obj
}

pub fn error_json(e: &Error) -> String {
    json!({ "schema": SCHEMA, "error": error_value(e) }).to_string()
}

/// Pretty JSON to `out` or stdout, newline-terminated.
pub fn emit(doc: &Value, out: Option<&Path>) -> powerlog::Result<()> {
    let text = serde_json::to_string_pretty(doc).expect("serializable") + "\n";
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string()))
        }
    }
}

/// C's `%.17g`.
pub fn fmt_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let strip = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip(mant), exp.abs())
    } else {
        strip(&format!("{v:.*}", (16 - exp) as usize))
    }
}

/// One row of the numeric table.
#[derive(Clone, Debug)]
pub struct Row {
    pub x: C64,
    pub n: usize,
    pub value: C64,
    pub residual_abs: f64,
}

impl Row {
    pub fn json(&self) -> Value {
        json!({
            "x_re": self.x.re, "x_im": self.x.im, "N": self.n,
            "value_re": self.value.re, "value_im": self.value.im,
            "residual_abs": self.residual_abs,
        })
    }
}

pub fn write_csv(rows: &[Row], path: &Path) -> powerlog::Result<()> {
    let mut s = String::from("x_re,x_im,N,value_re,value_im,residual_abs\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_g17(r.x.re),
            fmt_g17(r.x.im),
            r.n,
            fmt_g17(r.value.re),
            fmt_g17(r.value.im),
            fmt_g17(r.residual_abs)
        ));
    }
    std::fs::write(path, s).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
