use rayon::prelude::*;

use crate::channel::EigenTrajectory;
use crate::error::{GpcError, Result};
use crate::numerics::{SampledFunction, TalbotInversion, TimeFunction, TimeGrid};
use crate::scalar::{creal, Complex, Real};

/// Relative size below which a Laplace-domain denominator counts as a pole.
const POLE_EPS: f64 = 1e-13;

pub(crate) fn check_pole<T: Real>(den: Complex<T>, scale: T, s: Complex<T>) -> Result<()> {
    let size = den.re.hypot(den.im);
    if !(size > T::lit(POLE_EPS) * T::one().max(scale)) {
        return Err(GpcError::Pole { re: s.re.as_f64(), im: s.im.as_f64() });
    }
    Ok(())
}

/// `κ̃(s) = −s ℓ̃(s) / (1 − ℓ̃(s))`.
pub fn kappa_from_ell_laplace<T: Real>(ell_s: Complex<T>, s: Complex<T>) -> Result<Complex<T>> {
    let den = creal(T::one()) - ell_s;
    check_pole(den, ell_s.re.hypot(ell_s.im), s)?;
    Ok(-s * ell_s / den)
}

/// `λ̃(s) = 1 / (s − κ̃(s))`.
pub fn lambda_from_kappa_laplace<T: Real>(kappa_s: Complex<T>, s: Complex<T>) -> Result<Complex<T>> {
    let den = s - kappa_s;
    check_pole(den, s.re.hypot(s.im).max(kappa_s.re.hypot(kappa_s.im)), s)?;
    Ok(creal(T::one()) / den)
}

/// Eigenvalues parameterized as `λ_α(t) = 1 − ∫₀ᵗ ℓ_α`.
#[derive(Debug, Clone)]
pub struct EllRep<T: Real> {
    d: usize,
    ell: Vec<TimeFunction<T>>,
}

impl<T: Real> EllRep<T> {
    pub fn new(d: usize, ell: Vec<TimeFunction<T>>) -> Result<Self> {
        if d < 2 {
            return Err(GpcError::UnsupportedDimension(d));
        }
        if ell.len() != d + 1 {
            return Err(GpcError::WrongLength { expected: d + 1, found: ell.len() });
        }
        Ok(Self { d, ell })
    }

    /// `ℓ_α ≡ 0` for every α: the identity evolution.
    pub fn zero(d: usize) -> Result<Self> {
        Self::new(d, vec![TimeFunction::zero(); d + 1])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ell(&self) -> &[TimeFunction<T>] {
        &self.ell
    }

    /// `L_α(t_j) = ∫₀^{t_j} ℓ_α`.
    pub fn integrals_on(&self, grid: &TimeGrid<T>) -> Result<Vec<SampledFunction<T>>> {
        self.ell.iter().map(|l| l.integral_on(grid)).collect()
    }

    /// `λ_α = 1 − L_α` on the grid.
    pub fn lambda_on(&self, grid: &TimeGrid<T>) -> Result<EigenTrajectory<T>> {
        let lambda = self.integrals_on(grid)?.into_iter().map(|l| l.map(|v| T::one() - v)).collect();
        EigenTrajectory::new(lambda)
    }

    /// `L_α(∞)` when every `ℓ_α` has a known total.
    pub fn totals(&self) -> Option<Vec<T>> {
        self.ell.iter().map(|l| l.total()).collect()
    }

    pub fn has_laplace(&self) -> bool {
        self.ell.iter().all(|l| l.has_laplace())
    }

    fn check_alpha(&self, alpha: usize) -> Result<()> {
        if alpha > self.d {
            return Err(GpcError::IndexOutOfRange { index: alpha, len: self.d + 1 });
        }
        Ok(())
    }

    pub fn ell_laplace(&self, alpha: usize, s: Complex<T>) -> Result<Complex<T>> {
        self.check_alpha(alpha)?;
        self.ell[alpha].laplace(s).ok_or(GpcError::MissingRepresentation("Laplace transform of ell"))
    }

    /// `κ̃_α(s)` through the ℓ-representation.
    pub fn kappa_laplace(&self, alpha: usize, s: Complex<T>) -> Result<Complex<T>> {
        kappa_from_ell_laplace(self.ell_laplace(alpha, s)?, s)
    }

    /// `λ̃_α(s) = 1/(s − κ̃_α(s))`.
    pub fn lambda_laplace(&self, alpha: usize, s: Complex<T>) -> Result<Complex<T>> {
        lambda_from_kappa_laplace(self.kappa_laplace(alpha, s)?, s)
    }

    /// `λ_α(t)` by numerically inverting `1/(s − κ̃_α(s))` at every node;
    /// `λ(0) = 1` is set exactly.
    pub fn lambda_via_kernel_laplace(
        &self,
        grid: &TimeGrid<T>,
        inversion: &TalbotInversion<T>,
    ) -> Result<EigenTrajectory<T>> {
        if !self.has_laplace() {
            return Err(GpcError::MissingRepresentation("Laplace transform of ell"));
        }
        let lambda = (0..=self.d)
            .into_par_iter()
            .map(|alpha| {
                let mut values = Vec::with_capacity(grid.len());
                values.push(T::one());
                for t in grid.nodes().skip(1) {
                    // poles of λ̃ inside the contour would show up as non-convergence
                    let v = inversion.invert(
                        |s| self.lambda_laplace(alpha, s).unwrap_or(Complex::new(T::lit(f64::NAN), T::lit(f64::NAN))),
                        t,
                    )?;
                    values.push(v);
                }
                SampledFunction::new(*grid, values)
            })
            .collect::<Result<Vec<_>>>()?;
        EigenTrajectory::new(lambda)
    }
}

/// The three inequalities on `L_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllCondition {
    /// `L_α ≥ 0`
    NonNegative,
    /// `Σ_α L_α ≤ d²/(d−1)`
    SumBound,
    /// `Σ_α L_α ≥ d·L_β`
    Dominance,
}

impl std::fmt::Display for EllCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::NonNegative => "L_a >= 0",
            Self::SumBound => "sum L <= d^2/(d-1)",
            Self::Dominance => "sum L >= d*L_b",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllViolation {
    /// Grid node, or `None` for the `t → ∞` limit.
    pub node: Option<usize>,
    pub t: f64,
    pub condition: EllCondition,
    /// Offending index for the per-α conditions.
    pub alpha: Option<usize>,
    /// Signed margin (negative means violated).
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllCertificate<T> {
    pub passed: bool,
    pub first_violation: Option<EllViolation>,
    /// Worst margins over all nodes for the three conditions, in the order
    /// non-negativity, sum bound, dominance.
    pub worst_margins: [T; 3],
    /// Whether the analytic `t → ∞` limit was also checked.
    pub asymptotic_checked: bool,
}

fn margins<T: Real>(l: &[T], d: usize) -> ([T; 3], [usize; 2]) {
    let sum = l.iter().fold(T::zero(), |a, &x| a + x);
    let (imin, min) = l.iter().copied().enumerate().fold((0, l[0]), |acc, (i, x)| if x < acc.1 { (i, x) } else { acc });
    let (imax, max) = l.iter().copied().enumerate().fold((0, l[0]), |acc, (i, x)| if x > acc.1 { (i, x) } else { acc });
    let df = T::from_count(d);
    let bound = df * df / T::from_count(d - 1);
    ([min, bound - sum, sum - df * max], [imin, imax])
}

/// Checks `L_α ≥ 0`, `ΣL ≤ d²/(d−1)` and `ΣL ≥ d·L_β` at every node, and in
/// the `t → ∞` limit when the totals are known analytically.
pub fn check_ell_conditions<T: Real>(ell: &EllRep<T>, grid: &TimeGrid<T>, tol: T) -> Result<EllCertificate<T>> {
    let integrals = ell.integrals_on(grid)?;
    let d = ell.d;
    let mut worst = [T::lit(f64::INFINITY); 3];
    let mut first = None;
    let mut check = |l: &[T], node: Option<usize>, t: T, worst: &mut [T; 3]| {
        let (m, idx) = margins(l, d);
        for k in 0..3 {
            worst[k] = worst[k].min(m[k]);
        }
        if first.is_none() {
            let conds = [
                (EllCondition::NonNegative, Some(idx[0])),
                (EllCondition::SumBound, None),
                (EllCondition::Dominance, Some(idx[1])),
            ];
            for (k, (condition, alpha)) in conds.into_iter().enumerate() {
                if m[k] < -tol {
                    first = Some(EllViolation { node, t: t.as_f64(), condition, alpha, margin: m[k].as_f64() });
                    break;
                }
            }
        }
    };
    for (j, t) in grid.nodes().enumerate() {
        let l: Vec<T> = integrals.iter().map(|f| f.value(j)).collect();
        check(&l, Some(j), t, &mut worst);
    }
    let totals = ell.totals();
    if let Some(l) = &totals {
        check(l, None, T::lit(f64::INFINITY), &mut worst);
    }
    Ok(EllCertificate {
        passed: first.is_none(),
        first_violation: first,
        worst_margins: worst,
        asymptotic_checked: totals.is_some(),
    })
}
