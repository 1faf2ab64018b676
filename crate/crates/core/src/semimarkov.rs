//! Quantum semi-Markov dynamics `Λ = N + N∗Q + N∗Q∗Q + …` with
//! `Q_t = (1/(d−1)) Σ_α f_α(t) 𝕌_α` and `N_t = g(t)·id`.
//!
//! On `U_α^k` the map `𝕌_α` acts as `d − 1` and every other `𝕌_β` as `−1`, so
//! `Q_t[U_α^k] = φ_α(t) U_α^k` with `φ_α = f_α − (f − f_α)/(d−1)`, and each
//! eigenvalue obeys the scalar series `λ_α = g + g∗φ_α + g∗φ_α∗φ_α + …`.

use rayon::prelude::*;

use crate::channel::EigenTrajectory;
use crate::error::{GpcError, Result};
use crate::kernel::{check_pole, lambda_from_kappa_laplace};
use crate::linalg::{max_abs_diff, max_abs_entry, pauli, trace_product, CMatrix};
use crate::mub::MubFamily;
use crate::numerics::{
    convolve_regular, cumulative_trapezoid, derivative, trapezoid_integral, SampledFunction, TalbotInversion,
    TimeFunction, TimeGrid,
};
use crate::scalar::{creal, Complex, Real};

fn cnorm<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

/// Waiting-time densities `f_α`, `α = 0..=d`.
#[derive(Debug, Clone)]
pub struct SemiMarkovSpec<T: Real> {
    d: usize,
    f: Vec<TimeFunction<T>>,
}

impl<T: Real> SemiMarkovSpec<T> {
    pub fn new(d: usize, f: Vec<TimeFunction<T>>) -> Result<Self> {
        if d < 2 {
            return Err(GpcError::UnsupportedDimension(d));
        }
        if f.len() != d + 1 {
            return Err(GpcError::WrongLength { expected: d + 1, found: f.len() });
        }
        Ok(Self { d, f })
    }

    /// `f_α = χ` for every α.
    pub fn isotropic(d: usize, chi: TimeFunction<T>) -> Result<Self> {
        Self::new(d, vec![chi; d + 1])
    }

    /// No jumps: `f ≡ 0`.
    pub fn zero(d: usize) -> Result<Self> {
        Self::new(d, vec![TimeFunction::zero(); d + 1])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn densities(&self) -> &[TimeFunction<T>] {
        &self.f
    }

    /// `f = Σ_α f_α`.
    pub fn total_density(&self) -> Result<TimeFunction<T>> {
        let terms: Vec<(T, &TimeFunction<T>)> = self.f.iter().map(|f| (T::one(), f)).collect();
        TimeFunction::linear_combination(&terms)
    }

    /// `φ_α = (d/(d−1)) f_α − f/(d−1)`, the eigenvalue of `Q_t` on `U_α^k`.
    pub fn q_eigenvalue(&self, alpha: usize) -> Result<TimeFunction<T>> {
        if alpha > self.d {
            return Err(GpcError::IndexOutOfRange { index: alpha, len: self.d + 1 });
        }
        let inv = T::one() / T::from_count(self.d - 1);
        let mut terms: Vec<(T, &TimeFunction<T>)> = self.f.iter().map(|f| (-inv, f)).collect();
        terms[alpha].0 = T::one();
        TimeFunction::linear_combination(&terms)
    }

    /// Survival `g(t) = 1 − ∫₀ᵗ f`.
    pub fn survival_on(&self, grid: &TimeGrid<T>) -> Result<SampledFunction<T>> {
        Ok(self.total_density()?.integral_on(grid)?.map(|v| T::one() - v))
    }

    pub fn has_laplace(&self) -> bool {
        self.f.iter().all(|f| f.has_laplace())
    }

    /// `f̃_α(s)` for every α.
    pub fn laplace(&self, s: Complex<T>) -> Result<Vec<Complex<T>>> {
        self.f
            .iter()
            .map(|f| f.laplace(s).ok_or(GpcError::MissingRepresentation("Laplace transform of f")))
            .collect()
    }
}

/// Largest deviation between `Q[U_α^k]` computed through the MUB matrices and
/// `φ_α U_α^k`, for the given values of `f_α` at one instant.
pub fn verify_q_eigenvalues<T: Real>(m: &MubFamily<T>, f_values: &[T]) -> Result<T> {
    let d = m.d();
    if f_values.len() != d + 1 {
        return Err(GpcError::WrongLength { expected: d + 1, found: f_values.len() });
    }
    let inv = T::one() / T::from_count(d - 1);
    let total = f_values.iter().fold(T::zero(), |a, &x| a + x);
    let mut worst = T::zero();
    for alpha in 0..=d {
        let phi = f_values[alpha] - (total - f_values[alpha]) * inv;
        for k in 1..d {
            let u = m.unitary_power(alpha, k)?;
            let mut q = CMatrix::zeros(d, d);
            for beta in 0..=d {
                q += m.u_map(beta, u)? * creal(f_values[beta] * inv);
            }
            worst = worst.max(max_abs_diff(&q, &(u * creal(phi))));
        }
    }
    Ok(worst)
}

/// How `∫₀^∞ f` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralSource {
    /// Analytic totals of every `f_α`.
    ClosedForm,
    /// `f̃(0)` from the Laplace transforms.
    LaplaceAtZero,
    /// Grid quadrature with an exponential tail fitted to the last tenth of
    /// the samples; heuristic.
    Extrapolated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeDensity {
    pub alpha: usize,
    pub t: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemiMarkovCertificate<T> {
    pub legitimate: bool,
    /// Earliest node where some `f_α < −tol`.
    pub first_negative: Option<NegativeDensity>,
    /// `min_t f_α(t)` on the grid, per α.
    pub min_density: Vec<T>,
    /// `∫₀^∞ f`.
    pub integral: T,
    pub integral_source: IntegralSource,
    /// `|∫f − 1| ≤ tol`: no probability ever stays in the survival channel.
    pub boundary: bool,
    /// `min_t g(t)` on the grid.
    pub min_survival: T,
}

/// Fits `c e^{−k t}` to the last tenth of the samples and returns the tail
/// integral beyond the grid (zero when the fit is not a decaying exponential).
fn exponential_tail<T: Real>(f: &SampledFunction<T>) -> T {
    let n = f.grid().n_steps();
    let m = (n / 10).max(1);
    if n < 2 {
        return T::zero();
    }
    let (a, b) = (f.value(n - m), f.value(n));
    let dt = f.grid().node(n) - f.grid().node(n - m);
    if a == T::zero() || b == T::zero() || (a > T::zero()) != (b > T::zero()) {
        return T::zero();
    }
    let k = (a / b).ln() / dt;
    if k > T::zero() {
        b / k
    } else {
        T::zero()
    }
}

/// Legitimacy: `f_α ≥ −tol` on the grid and `∫₀^∞ f ≤ 1 + tol`.
pub fn certify_semimarkov<T: Real>(spec: &SemiMarkovSpec<T>, grid: &TimeGrid<T>, tol: T) -> Result<SemiMarkovCertificate<T>> {
    let samples: Vec<SampledFunction<T>> = spec.f.iter().map(|f| f.sample(grid)).collect::<Result<_>>()?;
    let min_density: Vec<T> =
        samples.iter().map(|s| s.values().iter().copied().fold(T::lit(f64::INFINITY), |a, b| a.min(b))).collect();
    let mut first_negative = None;
    'nodes: for j in 0..grid.len() {
        for (alpha, s) in samples.iter().enumerate() {
            if s.value(j) < -tol {
                first_negative =
                    Some(NegativeDensity { alpha, t: grid.node(j).as_f64(), value: s.value(j).as_f64() });
                break 'nodes;
            }
        }
    }

    let total = spec.total_density()?;
    let (integral, integral_source) = if let Some(v) = total.total() {
        (v, IntegralSource::ClosedForm)
    } else if let Some(v) = total.laplace(creal(T::zero())).filter(|v| v.re.is_finite()) {
        (v.re, IntegralSource::LaplaceAtZero)
    } else {
        let extended = match &total {
            TimeFunction::Closed(_) => {
                let g4 = TimeGrid::new(grid.t_max() * T::lit(4.0), grid.n_steps() * 4)?;
                total.sample(&g4)?
            }
            TimeFunction::Sampled(s) => s.clone(),
        };
        let body = trapezoid_integral(&extended, extended.grid().n_steps())?;
        (body + exponential_tail(&extended), IntegralSource::Extrapolated)
    };
    let survival = spec.survival_on(grid)?;
    let min_survival = survival.values().iter().copied().fold(T::lit(f64::INFINITY), |a, b| a.min(b));
    let legitimate = first_negative.is_none() && integral <= T::one() + tol;
    Ok(SemiMarkovCertificate {
        legitimate,
        first_negative,
        min_density,
        integral,
        integral_source,
        boundary: (integral - T::one()).abs() <= tol,
        min_survival,
    })
}

/// `λ̃_α(s) = −((d−1)/s)(f̃ − 1)/(f̃ − d f̃_α + d − 1)`.
pub fn lambda_laplace_semimarkov<T: Real>(f_s: &[Complex<T>], alpha: usize, s: Complex<T>) -> Result<Complex<T>> {
    let d = f_s.len() - 1;
    let total = f_s.iter().fold(creal(T::zero()), |a, &x| a + x);
    let dm1 = T::from_count(d - 1);
    let den = total - f_s[alpha] * creal(T::from_count(d)) + creal(dm1);
    check_pole(den, cnorm(total), s)?;
    let s_den = s * den;
    check_pole(s_den, cnorm(s), s)?;
    Ok(-(total - creal(T::one())) * creal(dm1) / s_den)
}

/// λ by inverting the Laplace-domain formula at every node; `λ(0) = 1`.
pub fn lambda_via_laplace<T: Real>(
    spec: &SemiMarkovSpec<T>,
    grid: &TimeGrid<T>,
    inversion: &TalbotInversion<T>,
) -> Result<EigenTrajectory<T>> {
    if !spec.has_laplace() {
        return Err(GpcError::MissingRepresentation("Laplace transform of f"));
    }
    let nan = Complex::new(T::lit(f64::NAN), T::lit(f64::NAN));
    let lambda = (0..=spec.d)
        .into_par_iter()
        .map(|alpha| {
            let transform = |s: Complex<T>| {
                spec.laplace(s).and_then(|fs| lambda_laplace_semimarkov(&fs, alpha, s)).unwrap_or(nan)
            };
            let mut values = Vec::with_capacity(grid.len());
            values.push(T::one());
            for t in grid.nodes().skip(1) {
                values.push(inversion.invert(transform, t)?);
            }
            SampledFunction::new(*grid, values)
        })
        .collect::<Result<Vec<_>>>()?;
    EigenTrajectory::new(lambda)
}

/// Result of the Dyson summation.
#[derive(Debug, Clone, PartialEq)]
pub struct DysonResult<T> {
    pub trajectory: EigenTrajectory<T>,
    /// Number of series terms used per α.
    pub terms: Vec<usize>,
}

/// Sums `λ_α = g + g∗φ_α + g∗φ_α∗φ_α + …` term by term.
///
/// The scalar `φ_α` is first checked against the matrix action of `Q` at a
/// few instants. Summation stops once the last term's sup-norm is below `tol`
/// and, when `r = ∫₀^{t_max}|φ_α| < 1`, the geometric tail bound
/// `‖term‖·r/(1−r)` is below `tol` as well.
pub fn lambda_via_dyson<T: Real>(
    spec: &SemiMarkovSpec<T>,
    m: &MubFamily<T>,
    grid: &TimeGrid<T>,
    tol: T,
    max_terms: usize,
) -> Result<DysonResult<T>> {
    if m.d() != spec.d {
        return Err(GpcError::InvalidParameter(format!("MUB family has d = {}, spec has d = {}", m.d(), spec.d)));
    }
    let samples: Vec<SampledFunction<T>> = spec.f.iter().map(|f| f.sample(grid)).collect::<Result<_>>()?;
    for j in [0, grid.n_steps() / 2, grid.n_steps()] {
        let values: Vec<T> = samples.iter().map(|s| s.value(j)).collect();
        let scale = values.iter().fold(T::one(), |a, v| a.max(v.abs()));
        let dev = verify_q_eigenvalues(m, &values)?;
        if dev > T::lit(1e-10).max(T::default_epsilon() * T::lit(1e3)) * scale {
            return Err(GpcError::InvalidParameter(format!("Q eigenvalue check failed: deviation {dev}")));
        }
    }
    let g = spec.survival_on(grid)?;
    let results = (0..=spec.d)
        .into_par_iter()
        .map(|alpha| {
            let phi = spec.q_eigenvalue(alpha)?.sample(grid)?;
            let r = trapezoid_integral(&phi.map(|v| v.abs()), grid.n_steps())?;
            let mut sum = g.clone();
            let mut term = g.clone();
            let mut used = 1;
            loop {
                let size = term.sup_norm();
                let tail = if r < T::one() { size * r / (T::one() - r) } else { T::zero() };
                if size < tol && tail < tol {
                    break;
                }
                if used >= max_terms {
                    return Err(GpcError::SeriesNonConvergence { terms: used, last: size.as_f64() });
                }
                term = convolve_regular(&term, &phi)?;
                sum = sum.zip_with(&term, |a, b| a + b)?;
                used += 1;
            }
            Ok((sum, used))
        })
        .collect::<Result<Vec<_>>>()?;
    let terms = results.iter().map(|(_, n)| *n).collect();
    let trajectory = EigenTrajectory::new(results.into_iter().map(|(s, _)| s).collect())?;
    Ok(DysonResult { trajectory, terms })
}

/// `ℓ̃_α = d(f̃ − f̃_α)/(f̃ − d f̃_α + d − 1)`.
pub fn ell_from_f<T: Real>(f_s: &[Complex<T>], s: Complex<T>) -> Result<Vec<Complex<T>>> {
    let d = f_s.len().checked_sub(1).filter(|&d| d >= 2).ok_or(GpcError::UnsupportedDimension(f_s.len()))?;
    let df = creal(T::from_count(d));
    let total = f_s.iter().fold(creal(T::zero()), |a, &x| a + x);
    f_s.iter()
        .map(|&fa| {
            let den = total - df * fa + creal(T::from_count(d - 1));
            check_pole(den, cnorm(total), s)?;
            Ok(df * (total - fa) / den)
        })
        .collect()
}

/// `f̃_α = [Σ_β 1/(1−ℓ̃_β) − d/(1−ℓ̃_α) − 1] / [Σ_β 1/(1−ℓ̃_β) + 1/(d−1)]`.
pub fn f_from_ell<T: Real>(ell_s: &[Complex<T>], s: Complex<T>) -> Result<Vec<Complex<T>>> {
    let d = ell_s.len().checked_sub(1).filter(|&d| d >= 2).ok_or(GpcError::UnsupportedDimension(ell_s.len()))?;
    let one = creal(T::one());
    let mut inv = Vec::with_capacity(d + 1);
    for &l in ell_s {
        let den = one - l;
        check_pole(den, cnorm(l), s)?;
        inv.push(one / den);
    }
    let sum = inv.iter().fold(creal(T::zero()), |a, &x| a + x);
    let den = sum + creal(T::one() / T::from_count(d - 1));
    check_pole(den, cnorm(sum), s)?;
    Ok(inv.iter().map(|&i| (sum - i * creal(T::from_count(d)) - one) / den).collect())
}

/// Isotropic case: `ℓ̃ = d² χ̃/(χ̃ + d − 1)`.
pub fn isotropic_ell<T: Real>(chi_s: Complex<T>, d: usize, s: Complex<T>) -> Result<Complex<T>> {
    let den = chi_s + creal(T::from_count(d - 1));
    check_pole(den, cnorm(chi_s), s)?;
    let df = T::from_count(d);
    Ok(chi_s * creal(df * df) / den)
}

/// Memory functions `k̃_α = (d/(d−1)) f̃_α / g̃` with `g̃ = (1 − f̃)/s`.
pub fn semimarkov_memory_laplace<T: Real>(f_s: &[Complex<T>], s: Complex<T>) -> Result<Vec<Complex<T>>> {
    let d = f_s.len() - 1;
    let total = f_s.iter().fold(creal(T::zero()), |a, &x| a + x);
    let g = (creal(T::one()) - total) / s;
    check_pole(g, cnorm(total) / cnorm(s), s)?;
    let c = creal(T::from_count(d) / T::from_count(d - 1));
    Ok(f_s.iter().map(|&fa| c * fa / g).collect())
}

/// `λ̃_α` from the semi-Markov memory functions through `κ_α = k_α − Σk`.
pub fn lambda_laplace_from_memory<T: Real>(k_s: &[Complex<T>], alpha: usize, s: Complex<T>) -> Result<Complex<T>> {
    let total = k_s.iter().fold(creal(T::zero()), |a, &x| a + x);
    lambda_from_kappa_laplace(k_s[alpha] - total, s)
}

/// Memory kernel of the inhomogeneous equation: `h_α = ḟ_α + f_α(0)δ`.
fn inhomogeneous_kernels<T: Real>(spec: &SemiMarkovSpec<T>, grid: &TimeGrid<T>) -> Result<Vec<(T, SampledFunction<T>)>> {
    spec.f
        .iter()
        .map(|f| {
            let s = f.sample(grid)?;
            Ok((s.value(0), f.derivative_on(grid)?))
        })
        .collect()
}

fn matrix_derivative<T: Real>(rhos: &[CMatrix<T>], grid: &TimeGrid<T>) -> Result<Vec<CMatrix<T>>> {
    let d = rhos[0].nrows();
    let mut out = vec![CMatrix::zeros(d, d); rhos.len()];
    for r in 0..d {
        for c in 0..d {
            for part in 0..2 {
                let vals: Vec<T> = rhos.iter().map(|m| if part == 0 { m[(r, c)].re } else { m[(r, c)].im }).collect();
                let dv = derivative(&SampledFunction::new(*grid, vals)?)?;
                for (j, v) in dv.values().iter().enumerate() {
                    if part == 0 {
                        out[j][(r, c)].re = *v;
                    } else {
                        out[j][(r, c)].im = *v;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Residual of `ρ̇_t = ∫₀ᵗ Σ_α h_α(t−τ) 𝕌_α[ρ_τ] dτ − f(t) ρ₀` along a sampled
/// trajectory, one matrix per node.
pub fn inhomogeneous_residual<T: Real>(
    spec: &SemiMarkovSpec<T>,
    m: &MubFamily<T>,
    rhos: &[CMatrix<T>],
    grid: &TimeGrid<T>,
) -> Result<Vec<CMatrix<T>>> {
    if rhos.len() != grid.len() {
        return Err(GpcError::SampleCount { expected: grid.len(), found: rhos.len() });
    }
    let d = spec.d;
    let h = grid.step();
    let half = T::lit(0.5);
    let kernels = inhomogeneous_kernels(spec, grid)?;
    let total = spec.total_density()?.sample(grid)?;
    let mapped: Vec<Vec<CMatrix<T>>> =
        (0..=d).map(|alpha| rhos.iter().map(|r| m.u_map(alpha, r)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let rho_dot = matrix_derivative(rhos, grid)?;
    let residual = (0..grid.len())
        .into_par_iter()
        .map(|j| {
            let mut rhs = -(&rhos[0] * creal(total.value(j)));
            for alpha in 0..=d {
                let (w, ref kd) = kernels[alpha];
                let u = &mapped[alpha];
                rhs += &u[j] * creal(w);
                if j > 0 {
                    let k = kd.values();
                    let mut acc = &u[0] * creal(half * k[j]) + &u[j] * creal(half * k[0]);
                    for i in 1..j {
                        acc += &u[i] * creal(k[j - i]);
                    }
                    rhs += acc * creal(h);
                }
            }
            &rho_dot[j] - rhs
        })
        .collect();
    Ok(residual)
}

/// Largest entry of each residual matrix.
pub fn residual_norms<T: Real>(residual: &[CMatrix<T>], grid: &TimeGrid<T>) -> Result<SampledFunction<T>> {
    SampledFunction::new(*grid, residual.iter().map(max_abs_entry).collect())
}

/// Qubit Bloch form of the inhomogeneous equation:
/// `ẋ_α = ∫₀ᵗ [2h_α − h](t−τ) x_α(τ) dτ − f(t) x_α(0)`; returns the residual
/// of each component.
pub fn bloch_residual<T: Real>(spec: &SemiMarkovSpec<T>, x: &[SampledFunction<T>; 3]) -> Result<[SampledFunction<T>; 3]> {
    if spec.d != 2 {
        return Err(GpcError::UnsupportedDimension(spec.d));
    }
    let grid = *x[0].grid();
    let kernels = inhomogeneous_kernels(spec, &grid)?;
    let total = spec.total_density()?.sample(&grid)?;
    let w_sum = kernels.iter().fold(T::zero(), |a, (w, _)| a + *w);
    let k_sum = kernels.iter().skip(1).try_fold(kernels[0].1.clone(), |acc, (_, k)| acc.zip_with(k, |a, b| a + b))?;
    let two = T::lit(2.0);
    let mut out = Vec::with_capacity(3);
    for alpha in 0..3 {
        let (w, ref k) = kernels[alpha];
        let kernel = k.zip_with(&k_sum, |a, b| two * a - b)?;
        let weight = two * w - w_sum;
        let conv = convolve_regular(&kernel, &x[alpha])?;
        let dx = derivative(&x[alpha])?;
        let x0 = x[alpha].value(0);
        let values = (0..grid.len())
            .map(|j| dx.value(j) - (weight * x[alpha].value(j) + conv.value(j) - total.value(j) * x0))
            .collect();
        out.push(SampledFunction::new(grid, values)?);
    }
    let mut it = out.into_iter();
    Ok([it.next().expect("3"), it.next().expect("3"), it.next().expect("3")])
}

/// Bloch components `Tr(R σ_α)` of a qubit residual matrix.
pub fn bloch_components<T: Real>(r: &CMatrix<T>) -> [Complex<T>; 3] {
    let p = pauli::<T>();
    [trace_product(r, &p[0]), trace_product(r, &p[1]), trace_product(r, &p[2])]
}

/// `g ≥ 0` and `g` non-increasing on the grid.
pub fn survival_is_valid<T: Real>(g: &SampledFunction<T>, tol: T) -> bool {
    let v = g.values();
    v.iter().all(|&x| x >= -tol) && v.windows(2).all(|w| w[1] <= w[0] + tol)
}

/// Cumulative `∫₀ᵗ f` for a spec on the grid.
pub fn jump_probability_on<T: Real>(spec: &SemiMarkovSpec<T>, grid: &TimeGrid<T>) -> Result<SampledFunction<T>> {
    Ok(cumulative_trapezoid(&spec.total_density()?.sample(grid)?))
}

#[cfg(test)]
mod tests;
