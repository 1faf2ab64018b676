//! Generalized Pauli channels in probability and eigenvalue coordinates.
//!
//! `Λ = p₀·id + (1/(d−1)) Σ_α p_α 𝕌_α` with eigenvalues `λ_α` on the
//! operators `U_α^k`. Vectors are indexed from 0: `p = (p₀, p_1..p_{d+1})`
//! has length `d + 2`, `λ` has length `d + 1`.

use crate::error::{GpcError, Result};
use crate::linalg::{hermitian_eigenvalues, validate_density_matrix, CMatrix, DENSITY_TOL};
use crate::mub::MubFamily;
use crate::numerics::{cumulative_trapezoid, derivative, SampledFunction, TimeGrid};
use crate::scalar::{creal, Real};

/// Default tolerance for CPTP certification.
pub const CPTP_TOL: f64 = 1e-9;

fn check_len<T>(v: &[T], expected: usize) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(GpcError::WrongLength { expected, found: v.len() })
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(GpcError::UnsupportedDimension(d))
    } else {
        Ok(())
    }
}

/// `λ_α = p₀ + (d/(d−1)) p_α − (1/(d−1)) Σ_β p_β`.
pub fn eigen_from_prob<T: Real>(p: &[T], d: usize) -> Result<Vec<T>> {
    check_dim(d)?;
    check_len(p, d + 2)?;
    let dm1 = T::from_count(d - 1);
    let df = T::from_count(d);
    let sum: T = p[1..].iter().fold(T::zero(), |a, &x| a + x);
    Ok(p[1..].iter().map(|&pa| p[0] + df / dm1 * pa - sum / dm1).collect())
}

/// `p₀ = (1/d²)[1 + (d−1)Σλ]`, `p_α = ((d−1)/d²)(1 + dλ_α − Σλ)`.
pub fn prob_from_eigen<T: Real>(lambda: &[T], d: usize) -> Result<Vec<T>> {
    check_dim(d)?;
    check_len(lambda, d + 1)?;
    let df = T::from_count(d);
    let dm1 = T::from_count(d - 1);
    let d2 = df * df;
    let sum: T = lambda.iter().fold(T::zero(), |a, &x| a + x);
    let mut p = Vec::with_capacity(d + 2);
    p.push((T::one() + dm1 * sum) / d2);
    p.extend(lambda.iter().map(|&l| dm1 / d2 * (T::one() + df * l - sum)));
    Ok(p)
}

/// Side of the Fujiwara–Algoet inequality that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaSide {
    /// `−1/(d−1) ≤ Σλ`
    Lower,
    /// `Σλ ≤ 1 + d·min λ`
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaCertificate<T> {
    pub passed: bool,
    /// `Σλ + 1/(d−1)`
    pub lower_margin: T,
    /// `1 + d·min λ − Σλ`
    pub upper_margin: T,
    /// Index of the smallest eigenvalue.
    pub argmin: usize,
    /// The more violated side, when the check fails.
    pub violated: Option<FaSide>,
}

impl<T: Real> FaCertificate<T> {
    pub fn worst_margin(&self) -> T {
        self.lower_margin.min(self.upper_margin)
    }
}

/// Complete-positivity check `−1/(d−1) ≤ Σλ ≤ 1 + d·min λ` within `tol`.
pub fn fujiwara_algoet_check<T: Real>(lambda: &[T], d: usize, tol: T) -> Result<FaCertificate<T>> {
    check_dim(d)?;
    check_len(lambda, d + 1)?;
    let sum: T = lambda.iter().fold(T::zero(), |a, &x| a + x);
    let (argmin, min) = lambda
        .iter()
        .copied()
        .enumerate()
        .fold((0, lambda[0]), |(ia, a), (i, x)| if x < a { (i, x) } else { (ia, a) });
    let lower_margin = sum + T::one() / T::from_count(d - 1);
    let upper_margin = T::one() + T::from_count(d) * min - sum;
    let lower_ok = lower_margin >= -tol;
    let upper_ok = upper_margin >= -tol;
    let violated = match (lower_ok, upper_ok) {
        (true, true) => None,
        (false, true) => Some(FaSide::Lower),
        (true, false) => Some(FaSide::Upper),
        (false, false) => Some(if lower_margin < upper_margin { FaSide::Lower } else { FaSide::Upper }),
    };
    Ok(FaCertificate { passed: violated.is_none(), lower_margin, upper_margin, argmin, violated })
}

/// A channel in both coordinate systems.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState<T> {
    d: usize,
    p: Vec<T>,
    lambda: Vec<T>,
}

impl<T: Real> ChannelState<T> {
    pub fn from_eigenvalues(d: usize, lambda: Vec<T>) -> Result<Self> {
        let p = prob_from_eigen(&lambda, d)?;
        Ok(Self { d, p, lambda })
    }

    pub fn from_probabilities(d: usize, p: Vec<T>) -> Result<Self> {
        let lambda = eigen_from_prob(&p, d)?;
        Ok(Self { d, p, lambda })
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::from_eigenvalues(d, vec![T::one(); d + 1])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `(p₀, p_1..p_{d+1})`.
    pub fn probabilities(&self) -> &[T] {
        &self.p
    }

    /// `(λ_1..λ_{d+1})`.
    pub fn eigenvalues(&self) -> &[T] {
        &self.lambda
    }

    pub fn certify(&self, tol: T) -> FaCertificate<T> {
        fujiwara_algoet_check(&self.lambda, self.d, tol).expect("length fixed at construction")
    }

    /// `p₀X + (1/(d−1)) Σ_α p_α 𝕌_α[X]` for any `d×d` matrix.
    pub fn map(&self, m: &MubFamily<T>, x: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.check_family(m)?;
        let inv = T::one() / T::from_count(self.d - 1);
        let mut out = x * creal(self.p[0]);
        for alpha in 0..=self.d {
            out += m.u_map(alpha, x)? * creal(self.p[alpha + 1] * inv);
        }
        Ok(out)
    }

    fn check_family(&self, m: &MubFamily<T>) -> Result<()> {
        if m.d() != self.d {
            return Err(GpcError::InvalidParameter(format!(
                "MUB family has d = {}, channel has d = {}",
                m.d(),
                self.d
            )));
        }
        Ok(())
    }
}

/// Applies a certified channel to a validated density matrix.
pub fn apply_channel<T: Real>(m: &MubFamily<T>, state: &ChannelState<T>, rho: &CMatrix<T>) -> Result<CMatrix<T>> {
    validate_density_matrix(rho, state.d, T::lit(DENSITY_TOL))?;
    let cert = state.certify(T::lit(CPTP_TOL));
    if !cert.passed {
        return Err(GpcError::UncertifiedChannel { margin: cert.worst_margin().as_f64() });
    }
    state.map(m, rho)
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)`, of size `d²×d²` and trace `d`.
///
/// Built as `p₀|w₀⟩⟨w₀| + Σ_α (p_α/(d−1)) Σ_k |w_αk⟩⟨w_αk|` with
/// `w_αk = Σ_i |i⟩ ⊗ U_α^k|i⟩`.
pub fn choi_matrix<T: Real>(m: &MubFamily<T>, state: &ChannelState<T>) -> Result<CMatrix<T>> {
    state.check_family(m)?;
    let d = state.d;
    let n = d * d;
    let inv = T::one() / T::from_count(d - 1);
    let mut choi = CMatrix::zeros(n, n);
    let mut add = |u: &CMatrix<T>, weight: T| {
        let w: Vec<_> = (0..n).map(|idx| u[(idx % d, idx / d)]).collect();
        let c = creal(weight);
        for a in 0..n {
            if w[a].re == T::zero() && w[a].im == T::zero() {
                continue;
            }
            let wa = w[a] * c;
            for b in 0..n {
                choi[(a, b)] += wa * w[b].conj();
            }
        }
    };
    add(m.unitary_power(0, 0)?, state.p[0]);
    for alpha in 0..=d {
        let weight = state.p[alpha + 1] * inv;
        for k in 1..d {
            add(m.unitary_power(alpha, k)?, weight);
        }
    }
    Ok(choi)
}

/// Smallest eigenvalue of the Choi matrix.
pub fn choi_min_eigenvalue<T: Real>(m: &MubFamily<T>, state: &ChannelState<T>) -> Result<T> {
    Ok(hermitian_eigenvalues(&choi_matrix(m, state)?)[0])
}

/// Decoherence rates `γ_α(t)` and their prefix integrals `Γ_α(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateVector<T> {
    gamma: Vec<SampledFunction<T>>,
    integrated: Vec<SampledFunction<T>>,
}

impl<T: Real> RateVector<T> {
    /// Rates sampled on a common grid; `Γ_α` by the trapezoid rule.
    pub fn new(gamma: Vec<SampledFunction<T>>) -> Result<Self> {
        if gamma.len() < 3 {
            return Err(GpcError::WrongLength { expected: 3, found: gamma.len() });
        }
        for g in &gamma[1..] {
            gamma[0].ensure_same_grid(g)?;
        }
        let integrated = gamma.iter().map(cumulative_trapezoid).collect();
        Ok(Self { gamma, integrated })
    }

    /// Constant rates on `grid`.
    pub fn constant(grid: TimeGrid<T>, rates: &[T]) -> Result<Self> {
        Self::new(rates.iter().map(|&r| SampledFunction::constant(grid, r)).collect())
    }

    pub fn d(&self) -> usize {
        self.gamma.len() - 1
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        self.gamma[0].grid()
    }

    pub fn gamma(&self) -> &[SampledFunction<T>] {
        &self.gamma
    }

    pub fn integrated(&self) -> &[SampledFunction<T>] {
        &self.integrated
    }
}

/// `λ_α(t) = exp[Γ_α(t) − Γ(t)]`, `Γ = Σ_β Γ_β`.
pub fn rates_to_eigen<T: Real>(rates: &RateVector<T>) -> Vec<SampledFunction<T>> {
    let total = rates
        .integrated
        .iter()
        .skip(1)
        .fold(rates.integrated[0].clone(), |acc, g| acc.zip_with(g, |a, b| a + b).expect("same grid"));
    rates
        .integrated
        .iter()
        .map(|g| g.zip_with(&total, |a, b| (a - b).exp()).expect("same grid"))
        .collect()
}

/// Inverts [`rates_to_eigen`]: `μ_α = d/dt log λ_α`, `γ = −(1/d)Σμ`,
/// `γ_α = μ_α + γ`.
pub fn eigen_to_rates<T: Real>(lambda: &[SampledFunction<T>]) -> Result<RateVector<T>> {
    if lambda.len() < 3 {
        return Err(GpcError::WrongLength { expected: 3, found: lambda.len() });
    }
    let d = lambda.len() - 1;
    let mut mu = Vec::with_capacity(d + 1);
    for (alpha, l) in lambda.iter().enumerate() {
        lambda[0].ensure_same_grid(l)?;
        if let Some((j, &v)) = l.values().iter().enumerate().find(|(_, &v)| !(v > T::zero())) {
            return Err(GpcError::NonPositiveEigenvalue { alpha, t: l.grid().node(j).as_f64(), value: v.as_f64() });
        }
        mu.push(derivative(&l.map(|v| v.ln()))?);
    }
    let inv_d = T::one() / T::from_count(d);
    let sum = mu.iter().skip(1).fold(mu[0].clone(), |acc, m| acc.zip_with(m, |a, b| a + b).expect("same grid"));
    let gamma = sum.map(|s| -s * inv_d);
    let rates = mu.iter().map(|m| m.zip_with(&gamma, |a, g| a + g).expect("same grid")).collect();
    RateVector::new(rates)
}

/// Eigenvalue trajectories `λ_α(t_j)` on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenTrajectory<T> {
    d: usize,
    lambda: Vec<SampledFunction<T>>,
}

impl<T: Real> EigenTrajectory<T> {
    pub fn new(lambda: Vec<SampledFunction<T>>) -> Result<Self> {
        if lambda.len() < 3 {
            return Err(GpcError::WrongLength { expected: 3, found: lambda.len() });
        }
        for l in &lambda[1..] {
            lambda[0].ensure_same_grid(l)?;
        }
        Ok(Self { d: lambda.len() - 1, lambda })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        self.lambda[0].grid()
    }

    pub fn eigenvalues(&self) -> &[SampledFunction<T>] {
        &self.lambda
    }

    pub fn lambda_at(&self, j: usize) -> Result<Vec<T>> {
        self.grid().check_index(j)?;
        Ok(self.lambda.iter().map(|l| l.value(j)).collect())
    }

    pub fn state_at(&self, j: usize) -> Result<ChannelState<T>> {
        ChannelState::from_eigenvalues(self.d, self.lambda_at(j)?)
    }

    /// `p₀(t), p_1(t)..p_{d+1}(t)`.
    pub fn probabilities(&self) -> Vec<SampledFunction<T>> {
        let n = self.grid().len();
        let rows: Vec<Vec<T>> =
            (0..n).map(|j| prob_from_eigen(&self.lambda_at(j).expect("in range"), self.d).expect("length")).collect();
        (0..self.d + 2)
            .map(|k| SampledFunction::new(*self.grid(), rows.iter().map(|r| r[k]).collect()).expect("length"))
            .collect()
    }

    /// Certificate at every node.
    pub fn certify_all(&self, tol: T) -> Vec<FaCertificate<T>> {
        (0..self.grid().len())
            .map(|j| fujiwara_algoet_check(&self.lambda_at(j).expect("in range"), self.d, tol).expect("length"))
            .collect()
    }

    /// First node failing the check, with its certificate.
    pub fn first_violation(&self, tol: T) -> Option<(usize, FaCertificate<T>)> {
        self.certify_all(tol).into_iter().enumerate().find(|(_, c)| !c.passed)
    }

    /// `ρ(t_j) = Λ_{t_j}[ρ₀]`. The channel is applied without re-certifying.
    pub fn evolve(&self, m: &MubFamily<T>, rho0: &CMatrix<T>, j: usize) -> Result<CMatrix<T>> {
        validate_density_matrix(rho0, self.d, T::lit(DENSITY_TOL))?;
        self.state_at(j)?.map(m, rho0)
    }
}
