use super::ell::{check_ell_conditions, EllCondition, EllRep};
use super::spec::{KernelEigenvalue, KernelSpec};
use crate::error::{GpcError, Result};
use crate::numerics::{TimeFunction, TimeGrid};
use crate::scalar::Real;

fn sum_inverse<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, &x| a + T::one() / x)
}

/// Parameters of `ℓ_α(t) = η e^{−ξ_α t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpFamilyParams<T> {
    pub eta: T,
    pub xi: Vec<T>,
}

/// The exponential family in every representation.
#[derive(Debug, Clone)]
pub struct ExpFamily<T: Real> {
    pub params: ExpFamilyParams<T>,
    pub ell: EllRep<T>,
    pub kernel: KernelSpec<T>,
    /// `ξ_α − η + η/d`, non-negative for admissible parameters.
    pub stability_margins: Vec<T>,
}

impl<T: Real> ExpFamily<T> {
    /// `λ_α(t) = 1 − (η/ξ_α)(1 − e^{−ξ_α t})`.
    pub fn lambda(&self, alpha: usize, t: T) -> T {
        let xi = self.params.xi[alpha];
        T::one() - self.params.eta / xi * (T::one() - (-xi * t).exp())
    }
}

/// Checks `η Σ 1/ξ ≤ d²/(d−1)` and `Σ 1/ξ ≥ d/ξ_β`, with the first failing
/// inequality named in the error.
pub fn check_exp_family<T: Real>(d: usize, params: &ExpFamilyParams<T>, tol: T) -> Result<()> {
    if params.xi.len() != d + 1 {
        return Err(GpcError::WrongLength { expected: d + 1, found: params.xi.len() });
    }
    if !(params.eta >= T::zero()) || params.xi.iter().any(|&x| !(x > T::zero())) {
        return Err(GpcError::InvalidParameter("exponential family needs eta >= 0 and xi > 0".into()));
    }
    let df = T::from_count(d);
    let s = sum_inverse(&params.xi);
    let bound = df * df / T::from_count(d - 1);
    if params.eta * s > bound + tol {
        return Err(GpcError::Admissibility(format!(
            "sum bound violated: eta * sum(1/xi) = {} > d^2/(d-1) = {}",
            params.eta * s,
            bound
        )));
    }
    for (beta, &x) in params.xi.iter().enumerate() {
        if s < df / x - tol {
            return Err(GpcError::Admissibility(format!(
                "dominance violated at index {beta}: sum(1/xi) = {s} < d/xi = {}",
                df / x
            )));
        }
    }
    Ok(())
}

/// Kernel eigenvalue of `ℓ = η e^{−ξ t}`: `κ = −ηδ + η(ξ−η) e^{−(ξ−η)t}`.
pub fn exp_kernel_eigenvalue<T: Real>(eta: T, xi: T) -> KernelEigenvalue<T> {
    let rate = xi - eta;
    KernelEigenvalue::new(-eta, TimeFunction::exp_sum(&[(eta * rate, rate)]))
}

/// Builds and checks the exponential family.
pub fn build_exp_family<T: Real>(d: usize, params: ExpFamilyParams<T>) -> Result<ExpFamily<T>> {
    check_exp_family(d, &params, T::lit(1e-12))?;
    let eta = params.eta;
    let ell = EllRep::new(d, params.xi.iter().map(|&x| TimeFunction::exp_sum(&[(eta, x)])).collect())?;
    let kernel = KernelSpec::new(d, params.xi.iter().map(|&x| exp_kernel_eigenvalue(eta, x)).collect())?;
    let df = T::from_count(d);
    let stability_margins = params.xi.iter().map(|&x| x - eta + eta / df).collect();
    Ok(ExpFamily { params, ell, kernel, stability_margins })
}

/// `ℓ_α = ℓ / a_α`, checked against `Σ 1/a_β ≥ d/a_α` and, on the grid and
/// asymptotically where possible, `Σ (1/a_α) ∫ℓ ≤ d²/(d−1)`.
///
/// `a_α = ∞` is allowed and gives `ℓ_α ≡ 0`.
pub fn build_special_class<T: Real>(
    d: usize,
    ell: &TimeFunction<T>,
    a: &[T],
    grid: &TimeGrid<T>,
    tol: T,
) -> Result<EllRep<T>> {
    if a.len() != d + 1 {
        return Err(GpcError::WrongLength { expected: d + 1, found: a.len() });
    }
    if a.iter().any(|&x| !(x > T::zero())) {
        return Err(GpcError::InvalidParameter("special class needs a > 0".into()));
    }
    check_weight_dominance(d, a, tol)?;
    let rep = EllRep::new(d, a.iter().map(|&x| ell.scaled(T::one() / x)).collect())?;
    let cert = check_ell_conditions(&rep, grid, tol)?;
    if let Some(v) = cert.first_violation {
        let what = match v.condition {
            EllCondition::SumBound => "sum bound",
            EllCondition::NonNegative => "non-negativity",
            EllCondition::Dominance => "dominance",
        };
        return Err(GpcError::Admissibility(format!("{what} violated at t = {} ({})", v.t, v.condition)));
    }
    Ok(rep)
}

/// `Σ 1/a_β ≥ d/a_α` for every α.
pub fn check_weight_dominance<T: Real>(d: usize, a: &[T], tol: T) -> Result<()> {
    let s = sum_inverse(a);
    let df = T::from_count(d);
    for (alpha, &x) in a.iter().enumerate() {
        if s < df / x - tol {
            return Err(GpcError::Admissibility(format!(
                "dominance violated at index {alpha}: sum(1/a) = {s} < d/a = {}",
                df / x
            )));
        }
    }
    Ok(())
}

/// `e^{−z₁t} ∗ ⋯ ∗ e^{−z_n t} = Σ_k e^{−z_k t} / Π_{j≠k}(z_j − z_k)`, with
/// Laplace transform `Π 1/(s + z_k)` and total `1/Π z_k`.
pub fn exp_convolution<T: Real>(z: &[T]) -> Result<TimeFunction<T>> {
    if z.is_empty() || z.iter().any(|&x| !(x > T::zero())) {
        return Err(GpcError::InvalidParameter("convolution rates must be positive".into()));
    }
    for i in 0..z.len() {
        for j in 0..i {
            if z[i] == z[j] {
                return Err(GpcError::InvalidParameter("convolution rates must be distinct".into()));
            }
        }
    }
    let terms: Vec<(T, T)> = (0..z.len())
        .map(|k| {
            let den = (0..z.len()).filter(|&j| j != k).fold(T::one(), |a, j| a * (z[j] - z[k]));
            (T::one() / den, z[k])
        })
        .collect();
    Ok(TimeFunction::exp_sum(&terms))
}

/// Verdict for the special class with `ℓ` an exponential convolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionClassCheck<T> {
    pub dominance_ok: bool,
    /// `Π z ≥ ((d−1)/d²) Σ 1/a`
    pub product_bound_ok: bool,
    /// `p₀(∞) = (1/d²)[d² − (d−1) Σ(1/a) / Π z]`
    pub asymptotic_p0: T,
}

pub fn check_convolution_class<T: Real>(d: usize, z: &[T], a: &[T]) -> Result<ConvolutionClassCheck<T>> {
    if a.len() != d + 1 {
        return Err(GpcError::WrongLength { expected: d + 1, found: a.len() });
    }
    exp_convolution(z)?;
    let df = T::from_count(d);
    let d2 = df * df;
    let dm1 = T::from_count(d - 1);
    let prod = z.iter().fold(T::one(), |a, &x| a * x);
    let s = sum_inverse(a);
    Ok(ConvolutionClassCheck {
        dominance_ok: check_weight_dominance(d, a, T::zero()).is_ok(),
        product_bound_ok: prod >= dm1 / d2 * s,
        asymptotic_p0: (d2 - dm1 * s / prod) / d2,
    })
}
