//! Fixtures shared by the benchmarks.

use paperband::catalog::get_model;
use paperband::{FoldedState, Tolerance};

pub fn folded(name: &str) -> FoldedState {
    get_model(name).and_then(|m| m.fold(&Tolerance::default())).expect("catalog models fold")
}
