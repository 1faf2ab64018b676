//! Closed-form example families.
//!
//! Every family evaluates its representations lazily from the parameters, so
//! the results can serve as oracles for the numerical pipeline.

use std::fmt;

use crate::channel::{EigenTrajectory, RateVector};
use crate::error::{GpcError, Result};
use crate::kernel::{exp_kernel_eigenvalue, EllRep, KernelEigenvalue, KernelSpec};
use crate::mub::is_prime;
use crate::numerics::{SampledFunction, TalbotInversion, TimeFunction, TimeGrid};
use crate::scalar::{creal, Complex, Real};
use crate::semimarkov::{f_from_ell, SemiMarkovSpec};

fn check_dimension(d: usize) -> Result<()> {
    if d < 2 || !is_prime(d) {
        return Err(GpcError::UnsupportedDimension(d));
    }
    Ok(())
}

fn check_len<T>(d: usize, v: &[T]) -> Result<()> {
    if v.len() != d + 1 {
        return Err(GpcError::WrongLength { expected: d + 1, found: v.len() });
    }
    Ok(())
}

fn sum<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, &x| a + x)
}

fn sum_inverse<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, &x| a + T::one() / x)
}

fn sample_lambda<T: Real>(d: usize, grid: &TimeGrid<T>, f: impl Fn(usize, T) -> T) -> Result<EigenTrajectory<T>> {
    EigenTrajectory::new((0..=d).map(|a| SampledFunction::from_fn(*grid, |t| f(a, t))).collect())
}

/// Markovian semigroup with constant rates `γ_α ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupModel<T> {
    d: usize,
    gamma: Vec<T>,
}

impl<T: Real> SemigroupModel<T> {
    pub fn new(d: usize, gamma: Vec<T>) -> Result<Self> {
        check_dimension(d)?;
        check_len(d, &gamma)?;
        if let Some(g) = gamma.iter().find(|g| !(**g >= T::zero())) {
            return Err(GpcError::InvalidParameter(format!("negative rate {g}")));
        }
        Ok(Self { d, gamma })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn gamma(&self) -> &[T] {
        &self.gamma
    }

    /// Decay rate `γ − γ_α` of `λ_α`.
    fn decay(&self, alpha: usize) -> T {
        sum(&self.gamma) - self.gamma[alpha]
    }

    /// `λ_α(t) = e^{(γ_α − γ)t}`.
    pub fn lambda(&self, alpha: usize, t: T) -> T {
        (-self.decay(alpha) * t).exp()
    }

    pub fn lambda_on(&self, grid: &TimeGrid<T>) -> Result<EigenTrajectory<T>> {
        sample_lambda(self.d, grid, |a, t| self.lambda(a, t))
    }

    /// `ℓ_α(t) = (γ − γ_α) e^{−(γ−γ_α)t}`.
    pub fn ell(&self) -> Result<EllRep<T>> {
        EllRep::new(
            self.d,
            (0..=self.d).map(|a| TimeFunction::exp_sum(&[(self.decay(a), self.decay(a))])).collect(),
        )
    }

    /// `κ_α = −(γ − γ_α) δ`.
    pub fn kernel(&self) -> Result<KernelSpec<T>> {
        KernelSpec::new(self.d, (0..=self.d).map(|a| KernelEigenvalue::delta(-self.decay(a))).collect())
    }

    /// `f_α(t) = ((d−1)/d) γ_α e^{−((d−1)/d) γ t}`.
    pub fn semimarkov(&self) -> Result<SemiMarkovSpec<T>> {
        let c = T::from_count(self.d - 1) / T::from_count(self.d);
        let rate = c * sum(&self.gamma);
        SemiMarkovSpec::new(self.d, self.gamma.iter().map(|&g| TimeFunction::exp_sum(&[(c * g, rate)])).collect())
    }

    pub fn rates(&self, grid: &TimeGrid<T>) -> Result<RateVector<T>> {
        RateVector::constant(*grid, &self.gamma)
    }
}

/// Which inequality of `d/a_β ≤ Σ 1/a ≤ d²/(2(d−1))` failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscillatoryBound {
    /// `Σ 1/a ≥ d/a_β`
    Lower,
    /// `Σ 1/a ≤ d²/(2(d−1))`
    Upper,
}

impl fmt::Display for OscillatoryBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Lower => write!(f, "lower bound sum(1/a) >= d/a_beta"),
            Self::Upper => write!(f, "upper bound sum(1/a) <= d^2/(2(d-1))"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillatoryVerdict<T> {
    pub admissible: bool,
    pub sum_inverse: T,
    pub upper_bound: T,
    /// First failing inequality, upper bound checked first.
    pub failed: Option<OscillatoryBound>,
    /// `2(1 − 1/d)`; every admissible `a_α` is at least this.
    pub min_a: T,
    pub all_a_above_min: bool,
}

/// `ℓ_α(t) = (ω/a_α) sin ωt`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatoryModel<T> {
    d: usize,
    omega: T,
    a: Vec<T>,
}

impl<T: Real> OscillatoryModel<T> {
    pub fn new(d: usize, omega: T, a: Vec<T>) -> Result<Self> {
        check_dimension(d)?;
        check_len(d, &a)?;
        if !(omega > T::zero()) || a.iter().any(|x| !(*x > T::zero())) {
            return Err(GpcError::InvalidParameter("oscillatory model needs omega > 0 and a > 0".into()));
        }
        Ok(Self { d, omega, a })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn a(&self) -> &[T] {
        &self.a
    }

    pub fn verdict(&self, tol: T) -> OscillatoryVerdict<T> {
        let df = T::from_count(self.d);
        let s = sum_inverse(&self.a);
        let upper_bound = df * df / (T::lit(2.0) * T::from_count(self.d - 1));
        let failed = if s > upper_bound + tol {
            Some(OscillatoryBound::Upper)
        } else if self.a.iter().any(|&x| s < df / x - tol) {
            Some(OscillatoryBound::Lower)
        } else {
            None
        };
        let min_a = T::lit(2.0) * (T::one() - T::one() / df);
        OscillatoryVerdict {
            admissible: failed.is_none(),
            sum_inverse: s,
            upper_bound,
            failed,
            min_a,
            all_a_above_min: self.a.iter().all(|&x| x >= min_a - tol),
        }
    }

    pub fn ell(&self) -> Result<EllRep<T>> {
        EllRep::new(self.d, self.a.iter().map(|&x| TimeFunction::sine(self.omega / x, self.omega)).collect())
    }

    /// `λ_α(t) = 1 − (1 − cos ωt)/a_α`.
    pub fn lambda(&self, alpha: usize, t: T) -> T {
        T::one() - (T::one() - (self.omega * t).cos()) / self.a[alpha]
    }

    pub fn lambda_on(&self, grid: &TimeGrid<T>) -> Result<EigenTrajectory<T>> {
        sample_lambda(self.d, grid, |a, t| self.lambda(a, t))
    }

    /// `p₀(t) = 1 − ((d−1)/d²)(1 − cos ωt) Σ 1/a`.
    pub fn p0(&self, t: T) -> T {
        let df = T::from_count(self.d);
        T::one() - T::from_count(self.d - 1) / (df * df) * (T::one() - (self.omega * t).cos()) * sum_inverse(&self.a)
    }

    /// `p_α(t) = ((d−1)/d²)(1 − cos ωt)(Σ 1/a − d/a_α)`.
    pub fn p(&self, alpha: usize, t: T) -> T {
        let df = T::from_count(self.d);
        T::from_count(self.d - 1) / (df * df)
            * (T::one() - (self.omega * t).cos())
            * (sum_inverse(&self.a) - df / self.a[alpha])
    }

    /// `κ_α(t) = −(ω²/a_α) cos(√(1 − 1/a_α) ωt)`, a hyperbolic cosine when `a_α < 1`.
    pub fn kernel(&self) -> Result<KernelSpec<T>> {
        let w2 = self.omega * self.omega;
        let kappa = self
            .a
            .iter()
            .map(|&x| {
                let amp = -w2 / x;
                let q = T::one() - T::one() / x;
                let regular = if q >= T::zero() {
                    TimeFunction::cosine(amp, q.sqrt() * self.omega)
                } else {
                    TimeFunction::hyperbolic_cosine(amp, (-q).sqrt() * self.omega)
                };
                KernelEigenvalue::new(T::zero(), regular)
            })
            .collect();
        KernelSpec::new(self.d, kappa)
    }
}

/// Origin of a semi-Markov representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FRepresentation {
    /// Qubit with `x₁ = x₂`.
    QubitSymmetric,
    /// `x_α = 1/(d+1)`.
    Uniform,
    /// `f_from_ell` followed by numerical inverse Laplace transform.
    Numerical,
}

/// `λ_α(t) = e^{−dt} + (1 − e^{−dt}) x_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCombinationModel<T> {
    d: usize,
    x: Vec<T>,
}

impl<T: Real> ConvexCombinationModel<T> {
    pub fn new(d: usize, x: Vec<T>) -> Result<Self> {
        check_dimension(d)?;
        check_len(d, &x)?;
        if x.iter().any(|v| !(*v >= T::zero())) || (sum(&x) - T::one()).abs() > T::lit(1e-12) {
            return Err(GpcError::InvalidParameter("x must be a probability vector".into()));
        }
        Ok(Self { d, x })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    fn df(&self) -> T {
        T::from_count(self.d)
    }

    pub fn lambda(&self, alpha: usize, t: T) -> T {
        let e = (-self.df() * t).exp();
        e + (T::one() - e) * self.x[alpha]
    }

    pub fn lambda_on(&self, grid: &TimeGrid<T>) -> Result<EigenTrajectory<T>> {
        sample_lambda(self.d, grid, |a, t| self.lambda(a, t))
    }

    /// `γ_α(t) = Σ_β (1−x_β)/(1+(e^{dt}−1)x_β) − d(1−x_α)/(1+(e^{dt}−1)x_α)`.
    pub fn rate(&self, alpha: usize, t: T) -> T {
        let em1 = (self.df() * t).exp() - T::one();
        let term = |x: T| (T::one() - x) / (T::one() + em1 * x);
        self.x.iter().fold(T::zero(), |a, &x| a + term(x)) - self.df() * term(self.x[alpha])
    }

    pub fn rates(&self, grid: &TimeGrid<T>) -> Result<RateVector<T>> {
        RateVector::new((0..=self.d).map(|a| SampledFunction::from_fn(*grid, |t| self.rate(a, t))).collect())
    }

    /// `a_α = 1/(1 − x_α)`, infinite when `x_α = 1`.
    pub fn weights(&self) -> Vec<T> {
        self.x.iter().map(|&x| if x >= T::one() { T::lit(f64::INFINITY) } else { T::one() / (T::one() - x) }).collect()
    }

    /// `ℓ_α = ℓ/a_α` with `ℓ(t) = d e^{−dt}`.
    pub fn ell(&self) -> Result<EllRep<T>> {
        let df = self.df();
        EllRep::new(self.d, self.x.iter().map(|&x| TimeFunction::exp_sum(&[((T::one() - x) * df, df)])).collect())
    }

    /// `κ_α = −η_α δ + η_α(d − η_α) e^{−(d−η_α)t}` with `η_α = (1 − x_α) d`.
    pub fn kernel(&self) -> Result<KernelSpec<T>> {
        let df = self.df();
        KernelSpec::new(self.d, self.x.iter().map(|&x| exp_kernel_eigenvalue((T::one() - x) * df, df)).collect())
    }

    /// `ℓ̃_α(s) = (1 − x_α) d/(s + d)`.
    pub fn ell_laplace(&self, s: Complex<T>) -> Vec<Complex<T>> {
        let df = self.df();
        self.x.iter().map(|&x| creal((T::one() - x) * df) / (s + creal(df))).collect()
    }

    /// The closed-form waiting-time densities, when available.
    pub fn semimarkov_closed(&self) -> Result<Option<(SemiMarkovSpec<T>, FRepresentation)>> {
        let tol = T::lit(1e-14);
        let uniform = T::one() / T::from_count(self.d + 1);
        if self.x.iter().all(|&x| (x - uniform).abs() <= tol) {
            let df = self.df();
            let c = T::from_count(self.d - 1) / T::from_count(self.d + 1);
            let rate = (df * (df + T::one()) - T::one()) / (df + T::one());
            let spec = SemiMarkovSpec::isotropic(self.d, TimeFunction::exp_sum(&[(c, rate)]))?;
            return Ok(Some((spec, FRepresentation::Uniform)));
        }
        if self.d == 2 && (self.x[0] - self.x[1]).abs() <= tol {
            let x = self.x[0];
            let y = T::one() - T::lit(2.0) * x;
            let xi = self.qubit_xi();
            let decay = (T::lit(3.0) - T::lit(2.0) * x) / T::lit(2.0);
            let half = xi / T::lit(2.0);
            let f1 = TimeFunction::hyperbolic(decay, half, x, -T::lit(3.0) * x * y / xi);
            let f3 = TimeFunction::hyperbolic(decay, half, y, -(T::lit(4.0) * x - T::one()) / xi);
            let spec = SemiMarkovSpec::new(2, vec![f1.clone(), f1, f3])?;
            return Ok(Some((spec, FRepresentation::QubitSymmetric)));
        }
        Ok(None)
    }

    /// `ξ = √(12x² − 4x + 1)` for the qubit with `x₁ = x₂ = x`.
    pub fn qubit_xi(&self) -> T {
        let x = self.x[0];
        (T::lit(12.0) * x * x - T::lit(4.0) * x + T::one()).sqrt()
    }

    /// `∫₀^∞ f = (−3x² + 3x − 1)/(x² + x − 1)` for the qubit with `x₁ = x₂ = x`.
    pub fn qubit_jump_probability(&self) -> Option<T> {
        if self.d != 2 || self.x[0] != self.x[1] {
            return None;
        }
        let x = self.x[0];
        Some((-T::lit(3.0) * x * x + T::lit(3.0) * x - T::one()) / (x * x + x - T::one()))
    }

    /// Closed form where available, otherwise `f` sampled on `grid` from
    /// `f_from_ell` and numerical inversion.
    pub fn semimarkov(&self, grid: &TimeGrid<T>) -> Result<(SemiMarkovSpec<T>, FRepresentation)> {
        if let Some(found) = self.semimarkov_closed()? {
            return Ok(found);
        }
        let inversion = TalbotInversion::default();
        let mut f = Vec::with_capacity(self.d + 1);
        for alpha in 0..=self.d {
            let transform = |s: Complex<T>| {
                f_from_ell(&self.ell_laplace(s), s)
                    .map(|v| v[alpha])
                    .unwrap_or(Complex::new(T::lit(f64::NAN), T::lit(f64::NAN)))
            };
            let mut values = Vec::with_capacity(grid.len());
            // f_α(0) is the large-s limit s·f̃_α(s)
            let s_big = creal(T::lit(1e8));
            values.push((s_big * transform(s_big)).re);
            for t in grid.nodes().skip(1) {
                values.push(inversion.invert(transform, t)?);
            }
            f.push(TimeFunction::Sampled(SampledFunction::new(*grid, values)?));
        }
        Ok((SemiMarkovSpec::new(self.d, f)?, FRepresentation::Numerical))
    }
}

/// Eternally non-Markovian evolution: `γ_α = 1` for `α < d` and
/// `γ_d(t) = −(d−1)(e^{dt}−1)/(e^{dt}−1+d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EternalModel {
    d: usize,
}

impl EternalModel {
    pub fn new(d: usize) -> Result<Self> {
        check_dimension(d)?;
        Ok(Self { d })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rate<T: Real>(&self, alpha: usize, t: T) -> T {
        if alpha < self.d {
            return T::one();
        }
        let df = T::from_count(self.d);
        let em1 = (df * t).exp() - T::one();
        -T::from_count(self.d - 1) * em1 / (em1 + df)
    }

    /// `Γ_α(t) = ∫₀ᵗ γ_α`; `Γ_d(t) = t − log((e^{dt} + d − 1)/d)`.
    pub fn integrated_rate<T: Real>(&self, alpha: usize, t: T) -> T {
        if alpha < self.d {
            return t;
        }
        let df = T::from_count(self.d);
        t - (((df * t).exp() + df - T::one()) / df).ln()
    }

    pub fn rates<T: Real>(&self, grid: &TimeGrid<T>) -> Result<RateVector<T>> {
        RateVector::new((0..=self.d).map(|a| SampledFunction::from_fn(*grid, |t| self.rate(a, t))).collect())
    }

    /// `λ_α = exp[Γ_α − Σ_β Γ_β]` from the closed-form integrated rates.
    pub fn lambda_from_rates<T: Real>(&self, alpha: usize, t: T) -> T {
        let total = (0..=self.d).fold(T::zero(), |a, b| a + self.integrated_rate(b, t));
        (self.integrated_rate(alpha, t) - total).exp()
    }

    /// Same λ as the convex combination with `x_α = 1/d` (`α < d`), `x_d = 0`.
    pub fn convex_equivalent<T: Real>(&self) -> Result<ConvexCombinationModel<T>> {
        let mut x = vec![T::one() / T::from_count(self.d); self.d + 1];
        x[self.d] = T::zero();
        ConvexCombinationModel::new(self.d, x)
    }

    /// Closed-form `f_α`; `f_d < 0` for every `t > 0`.
    pub fn semimarkov<T: Real>(&self) -> Result<SemiMarkovSpec<T>> {
        let df = T::from_count(self.d);
        let dm1 = T::from_count(self.d - 1);
        let c = ((df * df * df - T::lit(4.0) * df + T::lit(4.0)) / (T::lit(4.0) * df)).sqrt();
        let big_d = (df * df * df * df - T::lit(4.0) * df * df + T::lit(4.0) * df).sqrt();
        let decay = df / T::lit(2.0);
        let f = TimeFunction::hyperbolic(decay, c, dm1 / df, -dm1 * (df - T::lit(2.0)) / big_d);
        let last = TimeFunction::hyperbolic(decay, c, T::zero(), -T::lit(2.0) * dm1 * dm1 / big_d);
        let mut all = vec![f; self.d];
        all.push(last);
        SemiMarkovSpec::new(self.d, all)
    }
}

/// Parameters of one example family.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelDescriptor<T> {
    Semigroup { d: usize, gamma: Vec<T> },
    Oscillatory { d: usize, omega: T, a: Vec<T> },
    ConvexCombination { d: usize, x: Vec<T> },
    Eternal { d: usize },
}

/// A built family.
#[derive(Debug, Clone, PartialEq)]
pub enum Model<T> {
    Semigroup(SemigroupModel<T>),
    Oscillatory(OscillatoryModel<T>),
    ConvexCombination(ConvexCombinationModel<T>),
    Eternal(EternalModel),
}

impl<T: Real> ModelDescriptor<T> {
    pub fn build(&self) -> Result<Model<T>> {
        Ok(match self {
            Self::Semigroup { d, gamma } => Model::Semigroup(SemigroupModel::new(*d, gamma.clone())?),
            Self::Oscillatory { d, omega, a } => Model::Oscillatory(OscillatoryModel::new(*d, *omega, a.clone())?),
            Self::ConvexCombination { d, x } => Model::ConvexCombination(ConvexCombinationModel::new(*d, x.clone())?),
            Self::Eternal { d } => Model::Eternal(EternalModel::new(*d)?),
        })
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::Semigroup { .. } => "semigroup",
            Self::Oscillatory { .. } => "oscillatory",
            Self::ConvexCombination { .. } => "convex_combination",
            Self::Eternal { .. } => "eternal",
        }
    }
}

impl<T: Real> Model<T> {
    pub fn d(&self) -> usize {
        match self {
            Self::Semigroup(m) => m.d(),
            Self::Oscillatory(m) => m.d(),
            Self::ConvexCombination(m) => m.d(),
            Self::Eternal(m) => m.d(),
        }
    }

    /// Closed-form λ on the grid.
    pub fn lambda_on(&self, grid: &TimeGrid<T>) -> Result<EigenTrajectory<T>> {
        match self {
            Self::Semigroup(m) => m.lambda_on(grid),
            Self::Oscillatory(m) => m.lambda_on(grid),
            Self::ConvexCombination(m) => m.lambda_on(grid),
            Self::Eternal(m) => sample_lambda(m.d(), grid, |a, t| m.lambda_from_rates(a, t)),
        }
    }

    /// ℓ-representation, where the family has one.
    pub fn ell(&self) -> Result<Option<EllRep<T>>> {
        Ok(match self {
            Self::Semigroup(m) => Some(m.ell()?),
            Self::Oscillatory(m) => Some(m.ell()?),
            Self::ConvexCombination(m) => Some(m.ell()?),
            Self::Eternal(m) => Some(m.convex_equivalent::<T>()?.ell()?),
        })
    }

    /// Closed-form kernel eigenvalues.
    pub fn kernel(&self) -> Result<KernelSpec<T>> {
        match self {
            Self::Semigroup(m) => m.kernel(),
            Self::Oscillatory(m) => m.kernel(),
            Self::ConvexCombination(m) => m.kernel(),
            Self::Eternal(m) => m.convex_equivalent::<T>()?.kernel(),
        }
    }

    /// Closed-form semi-Markov data, where the family has it.
    pub fn semimarkov(&self) -> Result<Option<SemiMarkovSpec<T>>> {
        Ok(match self {
            Self::Semigroup(m) => Some(m.semimarkov()?),
            Self::Oscillatory(_) => None,
            Self::ConvexCombination(m) => m.semimarkov_closed()?.map(|(s, _)| s),
            Self::Eternal(m) => Some(m.semimarkov()?),
        })
    }

    /// Time-local rates, where the family has closed forms for them.
    pub fn rates(&self, grid: &TimeGrid<T>) -> Result<Option<RateVector<T>>> {
        Ok(match self {
            Self::Semigroup(m) => Some(m.rates(grid)?),
            Self::Oscillatory(_) => None,
            Self::ConvexCombination(m) => Some(m.rates(grid)?),
            Self::Eternal(m) => Some(m.rates(grid)?),
        })
    }
}
