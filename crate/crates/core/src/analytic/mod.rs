//! Bivariate series arithmetic and the scalar solvers built on it.

mod series;
mod solve;

pub use series::{BivariateSeries, SeriesError, SeriesJet, Var};
pub use solve::{
    contraction_fixed_point, contraction_fixed_point_vec, newton_solve_1d, newton_solve_1d_within,
    FixedPoint, SolveError, SolveOptions, DERIVATIVE_FLOOR,
};
