//! Trapezoid solvers for the two Volterra problems that appear in the
//! memory-kernel dynamics.

use super::grid::{DeltaPlusRegular, SampledFunction};
use super::quadrature::convolution_sum;
use crate::error::{GpcError, Result};
use crate::scalar::Real;

/// Solves `ẋ(t) = w·x(t) + ∫₀ᵗ r(t−τ) x(τ) dτ`, `x(0) = initial`.
///
/// Each step applies the trapezoid rule in time with the trapezoid
/// convolution sum. The only unknown term in the corrector, `x(t_{n+1})`,
/// enters linearly, so the corrector is solved exactly rather than iterated.
/// Global error is `O(h²)`.
pub fn solve_volterra<T: Real>(kappa: &DeltaPlusRegular<T>, initial: T) -> Result<SampledFunction<T>> {
    let grid = *kappa.grid();
    let h = grid.step();
    let half_h = T::lit(0.5) * h;
    let w = kappa.delta_weight;
    if !w.is_finite() {
        return Err(GpcError::InvalidParameter(format!("delta weight {w} is not finite")));
    }
    let r = kappa.regular.values();
    let n = grid.len();

    let mut x = Vec::with_capacity(n);
    x.push(initial);
    // F_n = w x_n + (r * x)(t_n)
    let mut rate = w * initial;
    let implicit = T::one() - half_h * (w + half_h * r[0]);
    if implicit == T::zero() {
        return Err(GpcError::InvalidParameter("step size makes the corrector singular".into()));
    }

    for m in 1..n {
        // known part of the convolution at t_m: everything except r_0 x_m / 2
        let mut known = T::lit(0.5) * r[m] * x[0];
        for i in 1..m {
            known += r[m - i] * x[i];
        }
        known *= h;
        let next = (x[m - 1] + half_h * (rate + known)) / implicit;
        x.push(next);
        rate = w * next + known + half_h * r[0] * next;
    }
    SampledFunction::new(grid, x)
}

/// Solves the second-kind equation `y(t) = F(t) + ∫₀ᵗ k(t−τ) y(τ) dτ`.
pub fn solve_volterra_second_kind<T: Real>(
    forcing: &SampledFunction<T>,
    kernel: &SampledFunction<T>,
) -> Result<SampledFunction<T>> {
    forcing.ensure_same_grid(kernel)?;
    let grid = *forcing.grid();
    let h = grid.step();
    let f = forcing.values();
    let k = kernel.values();
    let diag = T::one() - T::lit(0.5) * h * k[0];
    if diag == T::zero() {
        return Err(GpcError::InvalidParameter("step size makes the quadrature singular".into()));
    }
    let mut y: Vec<T> = Vec::with_capacity(f.len());
    y.push(f[0]);
    for m in 1..f.len() {
        // convolution_sum includes k_0 y_m / 2 with y_m unknown; use zero there
        y.push(T::zero());
        let partial = convolution_sum(k, &y, m, h);
        y[m] = (f[m] + partial) / diag;
    }
    SampledFunction::new(grid, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::TimeGrid;

    fn max_err(x: &SampledFunction<f64>, exact: impl Fn(f64) -> f64) -> f64 {
        x.grid().nodes().zip(x.values()).map(|(t, v)| (v - exact(t)).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_kernel_keeps_initial_value() {
        let g = TimeGrid::new(3.0, 300).unwrap();
        let x = solve_volterra(&DeltaPlusRegular::delta(g, 0.0), 1.0).unwrap();
        assert!(x.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn pure_delta_is_exponential_decay() {
        let g = TimeGrid::new(5.0, 5000).unwrap();
        let x = solve_volterra(&DeltaPlusRegular::delta(g, -2.0), 1.0).unwrap();
        assert!(max_err(&x, |t| (-2.0 * t).exp()) < 1e-6);
    }

    #[test]
    fn delta_plus_exponential_kernel() {
        // -δ(t) + e^{-t}  ->  1 - (1 - e^{-2t})/2
        let g = TimeGrid::new(5.0, 5000).unwrap();
        let k = DeltaPlusRegular::new(-1.0, SampledFunction::from_fn(g, |t: f64| (-t).exp()));
        let x = solve_volterra(&k, 1.0).unwrap();
        assert!(max_err(&x, |t| 1.0 - 0.5 * (1.0 - (-2.0 * t).exp())) < 1e-5);
    }

    #[test]
    fn second_order_convergence() {
        let exact = |t: f64| 1.0 - 0.5 * (1.0 - (-2.0 * t).exp());
        let err = |n| {
            let g = TimeGrid::new(4.0, n).unwrap();
            let k = DeltaPlusRegular::new(-1.0, SampledFunction::from_fn(g, |t: f64| (-t).exp()));
            max_err(&solve_volterra(&k, 1.0).unwrap(), exact)
        };
        let ratio = err(400) / err(800);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn second_kind_renewal() {
        // y = 1 + e^{-t} * y: Y = 1/s + Y/(s+1), so Y = (s+1)/s^2 and y = 1 + t
        let g = TimeGrid::new(2.0, 2000).unwrap();
        let forcing = SampledFunction::constant(g, 1.0);
        let kernel = SampledFunction::from_fn(g, |t: f64| (-t).exp());
        let y = solve_volterra_second_kind(&forcing, &kernel).unwrap();
        assert!(max_err(&y, |t| 1.0 + t) < 1e-6);
    }
}
