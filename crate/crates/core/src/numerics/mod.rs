//! Numerical substrate: uniform time grids, quadrature, discrete convolution,
//! Volterra solvers and inverse Laplace transforms.

mod function;
mod grid;
mod laplace;
mod quadrature;
mod volterra;

pub use function::{ClosedForm, LaplaceFn, RealFn, TimeFunction};
pub use grid::{DeltaPlusRegular, SampledFunction, TimeGrid};
pub use laplace::{inverse_laplace, TalbotInversion};
pub use quadrature::{convolve, convolve_at, convolve_regular, cumulative_trapezoid, derivative, trapezoid_integral};
pub use volterra::{solve_volterra, solve_volterra_second_kind};
