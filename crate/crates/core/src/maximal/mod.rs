//! Dyadic grids, Hardy–Littlewood and dyadic maximal operators, stopping
//! intervals, radial and non-tangential maximal functions, and the
//! counterexample built when Dini domination fails.
//!
//! Grid-path operators only look at interval lengths in [h, 4L]: for
//! compactly supported data longer intervals cannot beat the hull average.

mod counterexample;
mod dyadic;
mod operators;
mod piecewise;

pub use counterexample::{build_counterexample, CounterexampleReport, TermRecord, LOG_DOMAIN_CAP};
pub use dyadic::{dyadic_cover, Beta, DyadicInterval};
pub use operators::{
    dyadic_maximal, hl_maximal, nontangential_maximal, radial_maximal, superlevel_measure, ConeSpec,
};
pub use piecewise::PiecewiseConstant;

use crate::error::Result;
use crate::grid::GridFunction;

/// Stopping intervals of a grid function, read as cells [x_j, x_j + h),
/// down to cells of length h.
pub fn stopping_intervals(f: &GridFunction, lambda: f64, beta: Beta) -> Result<Vec<DyadicInterval>> {
    PiecewiseConstant::from_grid(f).stopping_intervals(lambda, beta, f.spec().h())
}
