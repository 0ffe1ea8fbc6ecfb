//! Tolerances shared by the numerical checks. Every verifier accepts
//! overrides through [`crate::verify::Tolerances`]; these are the defaults.

/// Geometric probe grid used for growth-function conditions.
pub const PROBE_T_MIN: f64 = 1e-8;
pub const PROBE_T_MAX: f64 = 1e8;
pub const PROBE_POINTS: usize = 4096;

/// A ratio is classified as growing when its value at the probe edge exceeds
/// the median over the edge decade by this factor.
pub const TREND_FACTOR: f64 = 1.05;

/// Index criterion for the nabla-2 check: a > 1 + margin.
pub const NABLA2_INDEX_MARGIN: f64 = 1e-3;

/// Lower truncation of the Dini integral.
pub const DINI_CUTOFF: f64 = 1e-12;

/// Knots stored for sampled conjugates.
pub const CONJUGATE_KNOTS: usize = 2048;

/// Relative step of central differences on sampled tables.
pub const SAMPLED_DERIV_STEP: f64 = 1e-6;

/// Luxemburg bisection stops when the bracket is this narrow (relative).
pub const LUX_BRACKET_RTOL: f64 = 1e-10;

/// Norm-level identities (isometry, boundary convergence, pairings).
pub const NORM_RTOL: f64 = 1e-2;

/// Pointwise kernel identities.
pub const POINTWISE_TOL: f64 = 1e-3;

/// Slack allowed on monotone sequences along the height lattice.
pub const MONOTONE_SLACK: f64 = 1e-6;

/// Slack on the dual-norm sandwich.
pub const SANDWICH_SLACK: f64 = 1e-6;

/// Cauchy membership residual threshold.
pub const MEMBERSHIP_TOL: f64 = 5e-3;

/// Relative rounding allowance for "exact" comparisons.
pub const EXACT_RTOL: f64 = 1e-12;

/// Largest fraction of a circle allowed to map outside a stored panel.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.2;
