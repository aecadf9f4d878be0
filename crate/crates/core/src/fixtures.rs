//! Small reference data used in documentation, tests, and benchmarks.

use std::sync::Arc;

use crate::series::OrdinalSeries;
use crate::state::StateSpace;

/// Wage-category series of one Austrian worker, categories `0..=5`.
pub const AW10_CODES: [usize; 22] = [
    3, 3, 3, 3, 3, 0, 0, 3, 2, 0, 4, 0, 0, 3, 3, 3, 4, 5, 4, 4, 4, 5,
];

/// [`AW10_CODES`] as a series over six numbered states.
pub fn aw10() -> OrdinalSeries {
    series_from(&AW10_CODES, 6)
}

/// Builds a series over `n_states` numbered states.
///
/// Panics on invalid codes; meant for literals.
pub fn series_from(codes: &[usize], n_states: usize) -> OrdinalSeries {
    let states = Arc::new(StateSpace::numbered(n_states).expect("at least two states"));
    OrdinalSeries::new(codes.to_vec(), states).expect("valid codes")
}
