use crate::error::{GpcError, Result};
use crate::scalar::Real;

/// Uniform grid `t_j = j·h`, `j = 0..=n_steps`, with `h = t_max / n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    t_max: T,
    n_steps: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_max: T, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(GpcError::InvalidGrid("n_steps must be positive".into()));
        }
        if !(t_max > T::zero()) || !t_max.is_finite() {
            return Err(GpcError::InvalidGrid(format!(
                "t_max must be positive and finite, got {t_max}"
            )));
        }
        Ok(Self { t_max, n_steps })
    }

    /// Grid covering `[0, t_max]` with step as close as possible to `step`.
    pub fn with_step(t_max: T, step: T) -> Result<Self> {
        if !(step > T::zero()) {
            return Err(GpcError::InvalidGrid(format!("step must be positive, got {step}")));
        }
        let n = (t_max / step).round().as_f64();
        if !(n >= 1.0) || !n.is_finite() {
            return Err(GpcError::InvalidGrid(format!("t_max {t_max} and step {step} give no steps")));
        }
        Self::new(t_max, n as usize)
    }

    #[inline]
    pub fn t_max(&self) -> T {
        self.t_max
    }

    #[inline]
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of nodes, `n_steps + 1`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn step(&self) -> T {
        self.t_max / T::from_count(self.n_steps)
    }

    #[inline]
    pub fn node(&self, j: usize) -> T {
        if j == self.n_steps {
            self.t_max
        } else {
            T::from_count(j) * self.step()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len()).map(move |j| self.node(j))
    }

    /// Same `t_max`, twice as many steps.
    pub fn refined(&self) -> Self {
        Self { t_max: self.t_max, n_steps: 2 * self.n_steps }
    }

    pub(crate) fn check_index(&self, j: usize) -> Result<()> {
        if j > self.n_steps {
            Err(GpcError::IndexOutOfRange { index: j, len: self.len() })
        } else {
            Ok(())
        }
    }
}

/// Values of a real function on the nodes of a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction<T> {
    grid: TimeGrid<T>,
    values: Vec<T>,
}

impl<T: Real> SampledFunction<T> {
    pub fn new(grid: TimeGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(GpcError::SampleCount { expected: grid.len(), found: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: TimeGrid<T>, f: impl Fn(T) -> T) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    pub fn constant(grid: TimeGrid<T>, c: T) -> Self {
        Self { grid, values: vec![c; grid.len()] }
    }

    pub fn zeros(grid: TimeGrid<T>) -> Self {
        Self::constant(grid, T::zero())
    }

    #[inline]
    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn value(&self, j: usize) -> T {
        self.values[j]
    }

    pub fn get(&self, j: usize) -> Result<T> {
        self.grid.check_index(j)?;
        Ok(self.values[j])
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid, values })
    }

    /// `Σ c_i · f_i` over functions sharing one grid.
    pub fn linear_combination(terms: &[(T, &Self)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| GpcError::InvalidParameter("empty linear combination".into()))?;
        let mut values = vec![T::zero(); first.grid.len()];
        for (c, f) in terms {
            first.ensure_same_grid(f)?;
            for (acc, &v) in values.iter_mut().zip(&f.values) {
                *acc += *c * v;
            }
        }
        Ok(Self { grid: first.grid, values })
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.ensure_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs())))
    }

    pub fn ensure_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(GpcError::GridMismatch)
        }
    }
}

/// `w·δ(t) + r(t)`. The Dirac weight is never sampled: inside a convolution it
/// contributes `w·x(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPlusRegular<T> {
    pub delta_weight: T,
    pub regular: SampledFunction<T>,
}

impl<T: Real> DeltaPlusRegular<T> {
    pub fn new(delta_weight: T, regular: SampledFunction<T>) -> Self {
        Self { delta_weight, regular }
    }

    pub fn delta(grid: TimeGrid<T>, weight: T) -> Self {
        Self { delta_weight: weight, regular: SampledFunction::zeros(grid) }
    }

    pub fn regular(regular: SampledFunction<T>) -> Self {
        Self { delta_weight: T::zero(), regular }
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        self.regular.grid()
    }
}
