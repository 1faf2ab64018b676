//! Functions of time that carry whatever analytic information is known about
//! them: point values, prefix integral, derivative, Laplace transform, and
//! total integral over `[0, ∞)`. Sampled functions carry only their samples.

use std::fmt;
use std::sync::Arc;

use super::grid::{SampledFunction, TimeGrid};
use super::quadrature::{cumulative_trapezoid, derivative};
use crate::error::{GpcError, Result};
use crate::scalar::{creal, Complex, Real};

pub type RealFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
pub type LaplaceFn<T> = Arc<dyn Fn(Complex<T>) -> Complex<T> + Send + Sync>;

/// Closed-form function of time with optional companion representations.
#[derive(Clone)]
pub struct ClosedForm<T> {
    value: RealFn<T>,
    integral: Option<RealFn<T>>,
    derivative: Option<RealFn<T>>,
    laplace: Option<LaplaceFn<T>>,
    total: Option<T>,
}

impl<T: Real> ClosedForm<T> {
    pub fn new(value: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self { value: Arc::new(value), integral: None, derivative: None, laplace: None, total: None }
    }

    /// Prefix integral `∫₀ᵗ f`.
    pub fn with_integral(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.integral = Some(Arc::new(f));
        self
    }

    pub fn with_derivative(mut self, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(f));
        self
    }

    pub fn with_laplace(mut self, f: impl Fn(Complex<T>) -> Complex<T> + Send + Sync + 'static) -> Self {
        self.laplace = Some(Arc::new(f));
        self
    }

    /// `∫₀^∞ f`.
    pub fn with_total(mut self, total: T) -> Self {
        self.total = Some(total);
        self
    }
}

/// A function of time, either in closed form or as samples on a grid.
#[derive(Clone)]
pub enum TimeFunction<T> {
    Closed(ClosedForm<T>),
    Sampled(SampledFunction<T>),
}

impl<T: Real> fmt::Debug for TimeFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Closed(c) => f
                .debug_struct("Closed")
                .field("integral", &c.integral.is_some())
                .field("derivative", &c.derivative.is_some())
                .field("laplace", &c.laplace.is_some())
                .field("total", &c.total)
                .finish(),
            Self::Sampled(s) => f.debug_tuple("Sampled").field(&s.grid()).finish(),
        }
    }
}

impl<T: Real> From<ClosedForm<T>> for TimeFunction<T> {
    fn from(c: ClosedForm<T>) -> Self {
        Self::Closed(c)
    }
}

impl<T: Real> From<SampledFunction<T>> for TimeFunction<T> {
    fn from(s: SampledFunction<T>) -> Self {
        Self::Sampled(s)
    }
}

impl<T: Real> TimeFunction<T> {
    pub fn zero() -> Self {
        Self::constant(T::zero())
    }

    pub fn constant(c: T) -> Self {
        let mut closed = ClosedForm::new(move |_| c)
            .with_integral(move |t| c * t)
            .with_derivative(|_| T::zero())
            .with_laplace(move |s| creal(c) / s);
        if c == T::zero() {
            closed = closed.with_total(T::zero());
        }
        closed.into()
    }

    /// `Σ_i c_i e^{−r_i t}`.
    pub fn exp_sum(terms: &[(T, T)]) -> Self {
        let terms: Arc<[(T, T)]> = terms.iter().copied().filter(|(c, _)| *c != T::zero()).collect();
        let convergent = terms.iter().all(|&(_, r)| r > T::zero());
        let (tv, ti, td, tl) = (terms.clone(), terms.clone(), terms.clone(), terms.clone());
        let mut closed = ClosedForm::new(move |t| tv.iter().fold(T::zero(), |a, &(c, r)| a + c * (-r * t).exp()))
            .with_integral(move |t| {
                ti.iter().fold(T::zero(), |a, &(c, r)| {
                    a + if r == T::zero() { c * t } else { c * (T::one() - (-r * t).exp()) / r }
                })
            })
            .with_derivative(move |t| td.iter().fold(T::zero(), |a, &(c, r)| a - c * r * (-r * t).exp()))
            .with_laplace(move |s| tl.iter().fold(creal(T::zero()), |a, &(c, r)| a + creal(c) / (s + creal(r))));
        if convergent {
            closed = closed.with_total(terms.iter().fold(T::zero(), |a, &(c, r)| a + c / r));
        }
        closed.into()
    }

    /// `e^{−c t}·(A·cosh(b t) + B·sinh(b t))` with `b ≥ 0`.
    pub fn hyperbolic(decay: T, freq: T, cosh_coef: T, sinh_coef: T) -> Self {
        let (c, b, a, bb) = (decay, freq, cosh_coef, sinh_coef);
        // e^{-(c-b)t}(A+B)/2 + e^{-(c+b)t}(A-B)/2
        let half = T::lit(0.5);
        let as_exp = Self::exp_sum(&[((a + bb) * half, c - b), ((a - bb) * half, c + b)]);
        let closed = match as_exp {
            Self::Closed(mut inner) => {
                inner.value = Arc::new(move |t| (-c * t).exp() * (a * (b * t).cosh() + bb * (b * t).sinh()));
                inner.laplace = Some(Arc::new(move |s| {
                    let sc = s + creal(c);
                    (creal(a) * sc + creal(bb * b)) / (sc * sc - creal(b * b))
                }));
                inner
            }
            Self::Sampled(_) => unreachable!(),
        };
        closed.into()
    }

    /// `amp·sin(ω t)`.
    pub fn sine(amp: T, omega: T) -> Self {
        ClosedForm::new(move |t: T| amp * (omega * t).sin())
            .with_integral(move |t: T| amp * (T::one() - (omega * t).cos()) / omega)
            .with_derivative(move |t: T| amp * omega * (omega * t).cos())
            .with_laplace(move |s| creal(amp * omega) / (s * s + creal(omega * omega)))
            .into()
    }

    /// `amp·cos(ω t)`; `ω` may be zero.
    pub fn cosine(amp: T, omega: T) -> Self {
        ClosedForm::new(move |t: T| amp * (omega * t).cos())
            .with_integral(move |t: T| {
                if omega == T::zero() {
                    amp * t
                } else {
                    amp * (omega * t).sin() / omega
                }
            })
            .with_derivative(move |t: T| -amp * omega * (omega * t).sin())
            .with_laplace(move |s| creal(amp) * s / (s * s + creal(omega * omega)))
            .into()
    }

    /// `amp·cosh(ν t)`.
    pub fn hyperbolic_cosine(amp: T, nu: T) -> Self {
        let half = T::lit(0.5) * amp;
        let mut f = Self::exp_sum(&[(half, -nu), (half, nu)]);
        if let Self::Closed(inner) = &mut f {
            inner.value = Arc::new(move |t: T| amp * (nu * t).cosh());
        }
        f
    }

    /// `Σ c_i f_i`. Companion representations survive when every term has them.
    pub fn linear_combination(terms: &[(T, &TimeFunction<T>)]) -> Result<Self> {
        if terms.is_empty() {
            return Ok(Self::zero());
        }
        if terms.iter().all(|(_, f)| matches!(f, Self::Closed(_))) {
            let parts: Vec<(T, ClosedForm<T>)> = terms
                .iter()
                .map(|(c, f)| match f {
                    Self::Closed(cf) => (*c, cf.clone()),
                    Self::Sampled(_) => unreachable!(),
                })
                .collect();
            let parts: Arc<[(T, ClosedForm<T>)]> = parts.into();
            let combine_real = |pick: fn(&ClosedForm<T>) -> Option<RealFn<T>>| -> Option<RealFn<T>> {
                let fns: Option<Vec<(T, RealFn<T>)>> =
                    parts.iter().map(|(c, f)| pick(f).map(|g| (*c, g))).collect();
                fns.map(|fns| {
                    Arc::new(move |t: T| fns.iter().fold(T::zero(), |a, (c, g)| a + *c * g(t))) as RealFn<T>
                })
            };
            let value = combine_real(|f| Some(f.value.clone())).expect("values always present");
            let integral = combine_real(|f| f.integral.clone());
            let derivative = combine_real(|f| f.derivative.clone());
            let laplace = parts
                .iter()
                .map(|(c, f)| f.laplace.clone().map(|g| (*c, g)))
                .collect::<Option<Vec<_>>>()
                .map(|fns| {
                    Arc::new(move |s: Complex<T>| fns.iter().fold(creal(T::zero()), |a, (c, g)| a + g(s) * creal(*c)))
                        as LaplaceFn<T>
                });
            let total = parts
                .iter()
                .map(|(c, f)| f.total.map(|v| *c * v))
                .collect::<Option<Vec<_>>>()
                .map(|v| v.into_iter().fold(T::zero(), |a, b| a + b));
            return Ok(Self::Closed(ClosedForm { value, integral, derivative, laplace, total }));
        }
        let grid = terms
            .iter()
            .find_map(|(_, f)| match f {
                Self::Sampled(s) => Some(*s.grid()),
                Self::Closed(_) => None,
            })
            .expect("at least one sampled term");
        let sampled: Vec<(T, SampledFunction<T>)> =
            terms.iter().map(|(c, f)| f.sample(&grid).map(|s| (*c, s))).collect::<Result<_>>()?;
        let refs: Vec<(T, &SampledFunction<T>)> = sampled.iter().map(|(c, s)| (*c, s)).collect();
        Ok(Self::Sampled(SampledFunction::linear_combination(&refs)?))
    }

    pub fn scaled(&self, c: T) -> Self {
        Self::linear_combination(&[(c, self)]).expect("single term")
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Self::Closed(_))
    }

    /// Point value; only available in closed form.
    pub fn value_at(&self, t: T) -> Option<T> {
        match self {
            Self::Closed(c) => Some((c.value)(t)),
            Self::Sampled(_) => None,
        }
    }

    pub fn sample(&self, grid: &TimeGrid<T>) -> Result<SampledFunction<T>> {
        match self {
            Self::Closed(c) => Ok(SampledFunction::from_fn(*grid, |t| (c.value)(t))),
            Self::Sampled(s) if s.grid() == grid => Ok(s.clone()),
            Self::Sampled(_) => Err(GpcError::GridMismatch),
        }
    }

    /// `∫₀^{t_j} f` at every node: closed form when known, trapezoid otherwise.
    pub fn integral_on(&self, grid: &TimeGrid<T>) -> Result<SampledFunction<T>> {
        match self {
            Self::Closed(ClosedForm { integral: Some(i), .. }) => Ok(SampledFunction::from_fn(*grid, |t| i(t))),
            _ => Ok(cumulative_trapezoid(&self.sample(grid)?)),
        }
    }

    /// Derivative at every node: closed form when known, finite differences otherwise.
    pub fn derivative_on(&self, grid: &TimeGrid<T>) -> Result<SampledFunction<T>> {
        match self {
            Self::Closed(ClosedForm { derivative: Some(d), .. }) => Ok(SampledFunction::from_fn(*grid, |t| d(t))),
            _ => derivative(&self.sample(grid)?),
        }
    }

    pub fn laplace(&self, s: Complex<T>) -> Option<Complex<T>> {
        match self {
            Self::Closed(ClosedForm { laplace: Some(l), .. }) => Some(l(s)),
            _ => None,
        }
    }

    pub fn laplace_fn(&self) -> Option<LaplaceFn<T>> {
        match self {
            Self::Closed(c) => c.laplace.clone(),
            Self::Sampled(_) => None,
        }
    }

    pub fn has_laplace(&self) -> bool {
        self.laplace_fn().is_some()
    }

    /// `∫₀^∞ f` when known analytically.
    pub fn total(&self) -> Option<T> {
        match self {
            Self::Closed(c) => c.total,
            Self::Sampled(_) => None,
        }
    }
}
