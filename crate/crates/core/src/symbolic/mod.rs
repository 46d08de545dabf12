//! Exact Laurent polynomials, rational functions and truncated series.

pub mod expansion;
pub mod gcd;
pub mod kernel;
pub mod laurent;
pub mod ratfunc;
pub mod series;

pub use expansion::{expand_ratfunc, Discrepancy, ExpansionError, TruncatedSeries, Window};
pub use gcd::{div_exact, poly_gcd};
pub use kernel::{char_poly, kernel_data, quadrant_char_poly, quadrant_kernel_data, KernelData};
pub use laurent::{walk_poly, Exps, LaurentPoly, Var, NVARS};
pub use ratfunc::{RatFunc, RatFuncError};
pub use series::{solve_algebraic_series, AlgebraicSeries, PowerSeries, SeriesError};
