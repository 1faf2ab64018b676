use super::grid::{DeltaPlusRegular, SampledFunction};
use crate::error::{GpcError, Result};
use crate::scalar::Real;

/// Composite trapezoid value of `∫₀^{t_j} f`.
pub fn trapezoid_integral<T: Real>(f: &SampledFunction<T>, j: usize) -> Result<T> {
    f.grid().check_index(j)?;
    if j == 0 {
        return Ok(T::zero());
    }
    let v = f.values();
    let half = T::lit(0.5);
    let inner = v[1..j].iter().fold(T::zero(), |acc, &x| acc + x);
    Ok(f.grid().step() * (half * (v[0] + v[j]) + inner))
}

/// Running trapezoid integral `F(t_j) = ∫₀^{t_j} f` at every node.
pub fn cumulative_trapezoid<T: Real>(f: &SampledFunction<T>) -> SampledFunction<T> {
    let v = f.values();
    let half_h = f.grid().step() * T::lit(0.5);
    let mut out = Vec::with_capacity(v.len());
    let mut acc = T::zero();
    out.push(acc);
    for w in v.windows(2) {
        acc += half_h * (w[0] + w[1]);
        out.push(acc);
    }
    SampledFunction::new(*f.grid(), out).expect("length preserved")
}

/// Trapezoid sum of `∫₀^{t_j} r(t_j − τ) x(τ) dτ` on sample slices.
#[inline]
pub(crate) fn convolution_sum<T: Real>(r: &[T], x: &[T], j: usize, h: T) -> T {
    if j == 0 {
        return T::zero();
    }
    let mut acc = T::lit(0.5) * (r[j] * x[0] + r[0] * x[j]);
    for i in 1..j {
        acc += r[j - i] * x[i];
    }
    h * acc
}

/// `w·x(t_j) + ∫₀^{t_j} r(t_j − τ) x(τ) dτ` with the regular part by trapezoid.
pub fn convolve_at<T: Real>(k: &DeltaPlusRegular<T>, x: &SampledFunction<T>, j: usize) -> Result<T> {
    k.regular.ensure_same_grid(x)?;
    x.grid().check_index(j)?;
    let h = x.grid().step();
    Ok(k.delta_weight * x.value(j) + convolution_sum(k.regular.values(), x.values(), j, h))
}

/// Full discrete convolution `(k ∗ x)(t_j)` at every node.
pub fn convolve<T: Real>(k: &DeltaPlusRegular<T>, x: &SampledFunction<T>) -> Result<SampledFunction<T>> {
    k.regular.ensure_same_grid(x)?;
    let h = x.grid().step();
    let (r, xv) = (k.regular.values(), x.values());
    let values = (0..xv.len())
        .map(|j| k.delta_weight * xv[j] + convolution_sum(r, xv, j, h))
        .collect();
    SampledFunction::new(*x.grid(), values)
}

/// Convolution of two regular sampled functions.
pub fn convolve_regular<T: Real>(a: &SampledFunction<T>, b: &SampledFunction<T>) -> Result<SampledFunction<T>> {
    a.ensure_same_grid(b)?;
    let h = a.grid().step();
    let (av, bv) = (a.values(), b.values());
    let values = (0..av.len()).map(|j| convolution_sum(av, bv, j, h)).collect();
    SampledFunction::new(*a.grid(), values)
}

/// Second-order finite-difference derivative: central in the interior,
/// three-point one-sided at the two ends.
pub fn derivative<T: Real>(f: &SampledFunction<T>) -> Result<SampledFunction<T>> {
    let v = f.values();
    let n = v.len();
    if n < 3 {
        return Err(GpcError::InvalidGrid("derivative needs at least two steps".into()));
    }
    let h = f.grid().step();
    let two_h = h + h;
    let (three, four) = (T::lit(3.0), T::lit(4.0));
    let mut out = Vec::with_capacity(n);
    out.push((-three * v[0] + four * v[1] - v[2]) / two_h);
    for j in 1..n - 1 {
        out.push((v[j + 1] - v[j - 1]) / two_h);
    }
    out.push((three * v[n - 1] - four * v[n - 2] + v[n - 3]) / two_h);
    SampledFunction::new(*f.grid(), out)
}
