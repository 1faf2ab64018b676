//! Classical shadows of the dynamics.
//!
//! In the basis `α` the channel maps the distribution `π_k^{(α)} = Tr(P_k^{(α)} ρ)`
//! through the doubly stochastic matrix `T^{(α)} = c_α 𝕀 + (1 − c_α) 𝒫`,
//! `𝒫_{ij} = 1/d`. Matrices of the form `a𝕀 + b𝒫` are closed under products
//! and convolutions, `(a₁, b₁)(a₂, b₂) = (a₁a₂, a₁b₂ + b₁a₂ + b₁b₂)`, so the
//! classical semi-Markov series is summed on those two coordinates.

use nalgebra::DMatrix;

use crate::channel::{ChannelState, EigenTrajectory};
use crate::error::{GpcError, Result};
use crate::kernel::EllRep;
use crate::linalg::{validate_density_matrix, CMatrix, DENSITY_TOL};
use crate::mub::MubFamily;
use crate::numerics::{convolve_regular, SampledFunction, TimeGrid};
use crate::scalar::Real;
use crate::semimarkov::SemiMarkovSpec;

/// `π_k^{(α)}` for every basis, one row per `α`.
pub fn mub_distributions<T: Real>(m: &MubFamily<T>, rho: &CMatrix<T>) -> Result<Vec<Vec<T>>> {
    validate_density_matrix(rho, m.d(), T::lit(DENSITY_TOL))?;
    (0..=m.d()).map(|alpha| m.distribution(alpha, rho)).collect()
}

/// A real `d×d` matrix acting on probability vectors, `π ↦ Tπ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMap<T: Real> {
    d: usize,
    matrix: DMatrix<T>,
}

impl<T: Real> StochasticMap<T> {
    pub fn new(matrix: DMatrix<T>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() < 2 {
            return Err(GpcError::InvalidParameter(format!(
                "stochastic map must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { d: matrix.nrows(), matrix })
    }

    /// `a𝕀 + b𝒫`.
    pub fn from_coordinates(d: usize, a: T, b: T) -> Self {
        let off = b / T::from_count(d);
        let matrix = DMatrix::from_fn(d, d, |i, j| if i == j { a + off } else { off });
        Self { d, matrix }
    }

    /// `[1 − L_α]𝕀 + L_α 𝒫` from `L_α = ∫₀ᵗ ℓ_α`.
    pub fn from_ell_integral(d: usize, l: T) -> Self {
        Self::from_coordinates(d, T::one() - l, l)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn apply(&self, pi: &[T]) -> Result<Vec<T>> {
        if pi.len() != self.d {
            return Err(GpcError::WrongLength { expected: self.d, found: pi.len() });
        }
        Ok((0..self.d).map(|i| (0..self.d).fold(T::zero(), |a, j| a + self.matrix[(i, j)] * pi[j])).collect())
    }

    /// Largest deviation of any row or column sum from 1.
    pub fn stochasticity_defect(&self) -> T {
        bistochastic_defect(&self.matrix)
    }

    pub fn min_entry(&self) -> T {
        self.matrix.iter().copied().fold(T::lit(f64::INFINITY), |a, b| a.min(b))
    }

    /// Row and column sums equal to 1 and entries `≥ −tol`.
    pub fn is_doubly_stochastic(&self, tol: T) -> bool {
        self.stochasticity_defect() <= tol && self.min_entry() >= -tol
    }
}

/// `c_α = (d/(d−1))[p₀ + p_α − 1/d]`.
pub fn classical_weight<T: Real>(state: &ChannelState<T>, alpha: usize) -> Result<T> {
    let d = state.d();
    if alpha > d {
        return Err(GpcError::IndexOutOfRange { index: alpha, len: d + 1 });
    }
    let p = state.probabilities();
    let df = T::from_count(d);
    Ok(df / T::from_count(d - 1) * (p[0] + p[alpha + 1] - T::one() / df))
}

/// `T^{(α)} = c_α 𝕀 + (1 − c_α) 𝒫`.
pub fn stochastic_map<T: Real>(state: &ChannelState<T>, alpha: usize) -> Result<StochasticMap<T>> {
    let c = classical_weight(state, alpha)?;
    Ok(StochasticMap::from_coordinates(state.d(), c, T::one() - c))
}

/// `T^{(α)}(t_j)` at every node from the ℓ-representation.
pub fn stochastic_maps_from_ell<T: Real>(ell: &EllRep<T>, alpha: usize, grid: &TimeGrid<T>) -> Result<Vec<StochasticMap<T>>> {
    let l = ell.ell().get(alpha).ok_or(GpcError::IndexOutOfRange { index: alpha, len: ell.d() + 1 })?;
    let integral = l.integral_on(grid)?;
    Ok(integral.values().iter().map(|&v| StochasticMap::from_ell_integral(ell.d(), v)).collect())
}

/// Classical semi-Markov data for one basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSemiMarkov<T: Real> {
    pub d: usize,
    pub alpha: usize,
    /// `q^{(α)} = q_a 𝕀 + q_b 𝒫`, with diagonal `f_α` and off-diagonal `(f − f_α)/(d−1)`.
    pub q_a: SampledFunction<T>,
    pub q_b: SampledFunction<T>,
    /// `n = g 𝕀`, the same for every basis.
    pub n: SampledFunction<T>,
    /// `T^{(α)} = n + n∗q + n∗q∗q + …` in coordinates `(a, b)`.
    pub t_a: SampledFunction<T>,
    pub t_b: SampledFunction<T>,
    pub terms: usize,
}

impl<T: Real> ClassicalSemiMarkov<T> {
    pub fn q_at(&self, j: usize) -> StochasticMap<T> {
        StochasticMap::from_coordinates(self.d, self.q_a.value(j), self.q_b.value(j))
    }

    pub fn n_at(&self, j: usize) -> StochasticMap<T> {
        StochasticMap::from_coordinates(self.d, self.n.value(j), T::zero())
    }

    pub fn transition_at(&self, j: usize) -> StochasticMap<T> {
        StochasticMap::from_coordinates(self.d, self.t_a.value(j), self.t_b.value(j))
    }
}

/// Sums the classical series until both coordinates of the last term have
/// sup-norm below `tol`.
///
/// With `s = a + b`, a product has `s = s₁s₂`, so each step needs the two
/// scalar convolutions `a∗q_a` and `s∗f` (`q_a + q_b = f`).
pub fn classical_semimarkov<T: Real>(
    spec: &SemiMarkovSpec<T>,
    alpha: usize,
    grid: &TimeGrid<T>,
    tol: T,
    max_terms: usize,
) -> Result<ClassicalSemiMarkov<T>> {
    let d = spec.d();
    let q_a = spec.q_eigenvalue(alpha)?.sample(grid)?;
    let f = spec.total_density()?.sample(grid)?;
    let q_b = f.zip_with(&q_a, |s, a| s - a)?;
    let n = spec.survival_on(grid)?;

    let mut term_a = n.clone();
    let mut term_s = n.clone();
    let mut sum_a = n.clone();
    let mut sum_s = n.clone();
    let mut terms = 1;
    loop {
        let size = term_a.sup_norm().max(term_s.zip_with(&term_a, |s, a| s - a)?.sup_norm());
        if size < tol {
            break;
        }
        if terms >= max_terms {
            return Err(GpcError::SeriesNonConvergence { terms, last: size.as_f64() });
        }
        term_a = convolve_regular(&term_a, &q_a)?;
        term_s = convolve_regular(&term_s, &f)?;
        sum_a = sum_a.zip_with(&term_a, |x, y| x + y)?;
        sum_s = sum_s.zip_with(&term_s, |x, y| x + y)?;
        terms += 1;
    }
    let t_b = sum_s.zip_with(&sum_a, |s, a| s - a)?;
    Ok(ClassicalSemiMarkov { d, alpha, q_a, q_b, n, t_a: sum_a, t_b, terms })
}

/// Qubit phase-space map `W(t) = S(t) W(0)` from `L_α = ∫₀ᵗ ℓ_α`, with
/// `W` ordered `(W₀₀, W₀₁, W₁₀, W₁₁)`.
pub fn qubit_wigner_matrix<T: Real>(l: [T; 3]) -> DMatrix<T> {
    let total = l[0] + l[1] + l[2];
    let s0 = T::lit(4.0) - total;
    let [s1, s2, s3] = l.map(|x| total - T::lit(2.0) * x);
    let q = T::lit(0.25);
    DMatrix::from_row_slice(
        4,
        4,
        &[s0, s3, s1, s2, s3, s0, s2, s1, s1, s2, s0, s3, s2, s1, s3, s0].map(|x| x * q),
    )
}

/// `S(t_j)` at every node of a qubit ℓ-representation.
pub fn wigner_evolution_qubit<T: Real>(ell: &EllRep<T>, grid: &TimeGrid<T>) -> Result<Vec<DMatrix<T>>> {
    if ell.d() != 2 {
        return Err(GpcError::UnsupportedDimension(ell.d()));
    }
    let l = ell.integrals_on(grid)?;
    Ok((0..grid.len()).map(|j| qubit_wigner_matrix([l[0].value(j), l[1].value(j), l[2].value(j)])).collect())
}

/// `S(t_j)` from eigenvalue trajectories through `L_α = 1 − λ_α`.
pub fn wigner_evolution_from_eigen<T: Real>(traj: &EigenTrajectory<T>) -> Result<Vec<DMatrix<T>>> {
    if traj.d() != 2 {
        return Err(GpcError::UnsupportedDimension(traj.d()));
    }
    let lam = traj.eigenvalues();
    Ok((0..traj.grid().len())
        .map(|j| qubit_wigner_matrix([0, 1, 2].map(|a| T::one() - lam[a].value(j))))
        .collect())
}

/// `(W₀₀, W₀₁, W₁₀, W₁₁)` of a qubit with Bloch vector `x`.
pub fn qubit_wigner_from_bloch<T: Real>(x: [T; 3]) -> [T; 4] {
    let q = T::lit(0.25);
    [
        q * (T::one() + x[0] + x[1] + x[2]),
        q * (T::one() - x[0] - x[1] + x[2]),
        q * (T::one() + x[0] - x[1] - x[2]),
        q * (T::one() - x[0] + x[1] - x[2]),
    ]
}

/// Largest deviation of any row or column sum of a square matrix from 1.
pub fn bistochastic_defect<T: Real>(m: &DMatrix<T>) -> T {
    let mut worst = T::zero();
    for i in 0..m.nrows() {
        let row = m.row(i).iter().fold(T::zero(), |a, &x| a + x);
        let col = m.column(i).iter().fold(T::zero(), |a, &x| a + x);
        worst = worst.max((row - T::one()).abs()).max((col - T::one()).abs());
    }
    worst
}

#[cfg(test)]
mod tests;
