//! Shared helpers for the pipeline benchmarks.

use std::path::PathBuf;

use powerlog::frontend::{load_problem, Problem};

/// Path of a file under the workspace `fixtures/` directory.
pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> Problem {
    load_problem(fixture_path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}
