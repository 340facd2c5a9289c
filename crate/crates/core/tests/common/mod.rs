#![allow(dead_code)]

use std::path::PathBuf;

use powerlog::frontend::{load_problem, parse_ratfunc};
use powerlog::{Problem, RatFunc};

pub const FIXTURES: [&str; 5] = ["example1_painleve6", "example2_dulac", "example2_rational", "example3_transseries", "linear_exact"];

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> Problem {
    load_problem(fixtures_dir().join(format!("{name}.json"))).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s).unwrap()
}
