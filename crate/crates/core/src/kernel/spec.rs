use rayon::prelude::*;

use super::ell::{lambda_from_kappa_laplace, EllRep};
use crate::channel::EigenTrajectory;
use crate::error::{GpcError, Result};
use crate::numerics::{solve_volterra, solve_volterra_second_kind, DeltaPlusRegular, SampledFunction, TimeFunction, TimeGrid};
use crate::scalar::{creal, Complex, Real};

/// One kernel eigenvalue `κ(t) = w·δ(t) + r(t)`.
#[derive(Debug, Clone)]
pub struct KernelEigenvalue<T: Real> {
    pub delta_weight: T,
    pub regular: TimeFunction<T>,
}

impl<T: Real> KernelEigenvalue<T> {
    pub fn new(delta_weight: T, regular: TimeFunction<T>) -> Self {
        Self { delta_weight, regular }
    }

    pub fn delta(weight: T) -> Self {
        Self::new(weight, TimeFunction::zero())
    }

    pub fn on_grid(&self, grid: &TimeGrid<T>) -> Result<DeltaPlusRegular<T>> {
        Ok(DeltaPlusRegular::new(self.delta_weight, self.regular.sample(grid)?))
    }

    /// `w + r̃(s)` when the regular part has a Laplace transform.
    pub fn laplace(&self, s: Complex<T>) -> Option<Complex<T>> {
        self.regular.laplace(s).map(|r| r + creal(self.delta_weight))
    }

    /// `Σ c_i κ_i`.
    pub fn linear_combination(terms: &[(T, &KernelEigenvalue<T>)]) -> Result<Self> {
        let w = terms.iter().fold(T::zero(), |a, (c, k)| a + *c * k.delta_weight);
        let parts: Vec<(T, &TimeFunction<T>)> = terms.iter().map(|(c, k)| (*c, &k.regular)).collect();
        Ok(Self::new(w, TimeFunction::linear_combination(&parts)?))
    }
}

/// Kernel eigenvalues `κ_α`, `α = 0..=d`.
#[derive(Debug, Clone)]
pub struct KernelSpec<T: Real> {
    d: usize,
    kappa: Vec<KernelEigenvalue<T>>,
}

impl<T: Real> KernelSpec<T> {
    pub fn new(d: usize, kappa: Vec<KernelEigenvalue<T>>) -> Result<Self> {
        if d < 2 {
            return Err(GpcError::UnsupportedDimension(d));
        }
        if kappa.len() != d + 1 {
            return Err(GpcError::WrongLength { expected: d + 1, found: kappa.len() });
        }
        Ok(Self { d, kappa })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kappa(&self) -> &[KernelEigenvalue<T>] {
        &self.kappa
    }

    /// Memory functions `k_α = κ_α − (1/d) Σ_β κ_β`, the inverse of
    /// `κ_α = k_α − Σ_β k_β`.
    pub fn memory_functions(&self) -> Result<Vec<KernelEigenvalue<T>>> {
        let inv_d = T::one() / T::from_count(self.d);
        (0..=self.d)
            .map(|alpha| {
                let mut terms: Vec<(T, &KernelEigenvalue<T>)> = self.kappa.iter().map(|k| (-inv_d, k)).collect();
                terms[alpha].0 = T::one() - inv_d;
                KernelEigenvalue::linear_combination(&terms)
            })
            .collect()
    }

    /// Builds `κ_α = k_α − Σ_β k_β` from memory functions.
    pub fn from_memory_functions(d: usize, k: &[KernelEigenvalue<T>]) -> Result<Self> {
        if k.len() != d + 1 {
            return Err(GpcError::WrongLength { expected: d + 1, found: k.len() });
        }
        let kappa = (0..=d)
            .map(|alpha| {
                let mut terms: Vec<(T, &KernelEigenvalue<T>)> = k.iter().map(|x| (-T::one(), x)).collect();
                terms[alpha].0 = T::zero();
                KernelEigenvalue::linear_combination(&terms)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, kappa)
    }

    /// `κ̃_α(s)`.
    pub fn kappa_laplace(&self, alpha: usize, s: Complex<T>) -> Result<Complex<T>> {
        self.kappa
            .get(alpha)
            .ok_or(GpcError::IndexOutOfRange { index: alpha, len: self.d + 1 })?
            .laplace(s)
            .ok_or(GpcError::MissingRepresentation("Laplace transform of kappa"))
    }

    /// `λ̃_α(s) = 1/(s − κ̃_α(s))`.
    pub fn lambda_laplace(&self, alpha: usize, s: Complex<T>) -> Result<Complex<T>> {
        lambda_from_kappa_laplace(self.kappa_laplace(alpha, s)?, s)
    }
}

/// Solves `λ̇_α = ∫₀ᵗ κ_α(t−τ) λ_α(τ) dτ`, `λ_α(0) = 1`, for every α in parallel.
pub fn propagate_kernel<T: Real>(spec: &KernelSpec<T>, grid: &TimeGrid<T>) -> Result<EigenTrajectory<T>> {
    let lambda = spec
        .kappa
        .par_iter()
        .map(|k| solve_volterra(&k.on_grid(grid)?, T::one()))
        .collect::<Result<Vec<_>>>()?;
    EigenTrajectory::new(lambda)
}

/// Time-domain kernel from the ℓ-representation.
///
/// With `κ = w·δ + r`, the relation `κ̃(1 − ℓ̃) = −sℓ̃` gives `w = −ℓ(0)` and
/// the second-kind equation `r = −ℓ̇ − ℓ(0)ℓ + r ∗ ℓ`, solved on the grid.
pub fn kernel_from_ell<T: Real>(ell: &EllRep<T>, grid: &TimeGrid<T>) -> Result<KernelSpec<T>> {
    let kappa = ell
        .ell()
        .par_iter()
        .map(|l| {
            let values = l.sample(grid)?;
            let l0 = values.value(0);
            let dot = l.derivative_on(grid)?;
            let forcing = SampledFunction::linear_combination(&[(-T::one(), &dot), (-l0, &values)])?;
            let r = solve_volterra_second_kind(&forcing, &values)?;
            Ok(KernelEigenvalue::new(-l0, TimeFunction::Sampled(r)))
        })
        .collect::<Result<Vec<_>>>()?;
    KernelSpec::new(ell.d(), kappa)
}
