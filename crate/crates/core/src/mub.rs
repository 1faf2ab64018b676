//! Mutually unbiased bases in prime dimension, the unitaries `U_α`, the maps
//! `𝕌_α` and `Φ_α`, and discrete Wigner operators.
//!
//! Bases are indexed `α = 0..=d`. For `d = 2` index 0, 1, 2 are the
//! eigenbases of `σ₁`, `σ₂`, `σ₃`, so that `U_α = σ_{α+1}`. For odd prime `d`
//! index `k < d` is the eigenbasis of `X Z^k` and index `d` is the
//! computational basis (the eigenbasis of `Z`).

use crate::error::{GpcError, Result};
use crate::linalg::{identity, projector, trace_product, validate_density_matrix, CMatrix};
use crate::scalar::{creal, Complex, Real};

pub fn is_prime(d: usize) -> bool {
    d >= 2 && (2..).take_while(|k| k * k <= d).all(|k| !d.is_multiple_of(k))
}

fn require_prime(d: usize) -> Result<()> {
    if is_prime(d) {
        Ok(())
    } else {
        Err(GpcError::UnsupportedDimension(d))
    }
}

/// `ω^m` with `ω = e^{2πi/d}`; the exponent is reduced mod `d` first.
pub(crate) fn root_of_unity<T: Real>(d: usize, m: i64) -> Complex<T> {
    let r = m.rem_euclid(d as i64) as usize;
    let angle = T::two_pi() * T::from_count(r) / T::from_count(d);
    Complex::new(angle.cos(), angle.sin())
}

/// The `d + 1` bases, their projectors, and the unitaries `U_α` with all
/// powers `U_α^k`, `k = 0..d`.
#[derive(Debug, Clone)]
pub struct MubFamily<T: Real> {
    d: usize,
    projectors: Vec<Vec<CMatrix<T>>>,
    unitaries: Vec<CMatrix<T>>,
    powers: Vec<Vec<CMatrix<T>>>,
    powers_adjoint: Vec<Vec<CMatrix<T>>>,
}

/// Builds the MUB family for prime `d`.
pub fn build_mubs<T: Real>(d: usize) -> Result<MubFamily<T>> {
    require_prime(d)?;
    let inv_sqrt = creal(T::one() / T::from_count(d).sqrt());
    let bases: Vec<Vec<Vec<Complex<T>>>> = if d == 2 {
        let (o, l, i) = (creal(T::zero()), creal(T::one()), Complex::new(T::zero(), T::one()));
        vec![
            vec![vec![l * inv_sqrt, l * inv_sqrt], vec![l * inv_sqrt, -l * inv_sqrt]],
            vec![vec![l * inv_sqrt, i * inv_sqrt], vec![l * inv_sqrt, -i * inv_sqrt]],
            vec![vec![l, o], vec![o, l]],
        ]
    } else {
        let mut bases = Vec::with_capacity(d + 1);
        for k in 0..d as i64 {
            let basis = (0..d as i64)
                .map(|m| {
                    (0..d as i64)
                        .map(|j| root_of_unity::<T>(d, -m * j + k * (j * (j - 1) / 2)) * inv_sqrt)
                        .collect()
                })
                .collect();
            bases.push(basis);
        }
        let computational = (0..d)
            .map(|m| (0..d).map(|j| creal(if j == m { T::one() } else { T::zero() })).collect())
            .collect();
        bases.push(computational);
        bases
    };

    let projectors: Vec<Vec<CMatrix<T>>> =
        bases.iter().map(|b| b.iter().map(|v: &Vec<Complex<T>>| projector(v)).collect()).collect();
    let unitaries: Vec<CMatrix<T>> = projectors
        .iter()
        .map(|ps| {
            ps.iter().enumerate().fold(CMatrix::zeros(d, d), |acc, (l, p)| acc + p * root_of_unity::<T>(d, l as i64))
        })
        .collect();
    let powers: Vec<Vec<CMatrix<T>>> = unitaries
        .iter()
        .map(|u| {
            let mut out = vec![identity::<T>(d)];
            for k in 1..d {
                let next = &out[k - 1] * u;
                out.push(next);
            }
            out
        })
        .collect();
    let powers_adjoint = powers.iter().map(|ps| ps.iter().map(|p| p.adjoint()).collect()).collect();
    Ok(MubFamily { d, projectors, unitaries, powers, powers_adjoint })
}

impl<T: Real> MubFamily<T> {
    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of bases, `d + 1`.
    pub fn len(&self) -> usize {
        self.d + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_alpha(&self, alpha: usize) -> Result<()> {
        if alpha > self.d {
            Err(GpcError::IndexOutOfRange { index: alpha, len: self.d + 1 })
        } else {
            Ok(())
        }
    }

    /// `P_l^(α)`, `l = 0..d`.
    pub fn projectors(&self, alpha: usize) -> Result<&[CMatrix<T>]> {
        self.check_alpha(alpha)?;
        Ok(&self.projectors[alpha])
    }

    /// `U_α = Σ_l ω^l P_l^(α)`.
    pub fn unitary(&self, alpha: usize) -> Result<&CMatrix<T>> {
        self.check_alpha(alpha)?;
        Ok(&self.unitaries[alpha])
    }

    /// `U_α^k` for `k = 0..d`.
    pub fn unitary_power(&self, alpha: usize, k: usize) -> Result<&CMatrix<T>> {
        self.check_alpha(alpha)?;
        if k >= self.d {
            return Err(GpcError::IndexOutOfRange { index: k, len: self.d });
        }
        Ok(&self.powers[alpha][k])
    }

    /// `𝕌_α[X] = Σ_{k=1}^{d−1} U_α^k X U_α^{k†}` for any `d×d` matrix.
    pub fn u_map(&self, alpha: usize, x: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.check_alpha(alpha)?;
        self.check_shape(x)?;
        let mut out = CMatrix::zeros(self.d, self.d);
        for k in 1..self.d {
            out += &self.powers[alpha][k] * x * &self.powers_adjoint[alpha][k];
        }
        Ok(out)
    }

    /// `Φ_α[X] = Σ_l P_l^(α) X P_l^(α)` for any `d×d` matrix.
    pub fn phi_map(&self, alpha: usize, x: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.check_alpha(alpha)?;
        self.check_shape(x)?;
        Ok(self.projectors[alpha].iter().fold(CMatrix::zeros(self.d, self.d), |acc, p| acc + p * x * p))
    }

    /// [`u_map`](Self::u_map) restricted to validated density matrices.
    pub fn apply_u_map(&self, alpha: usize, rho: &CMatrix<T>) -> Result<CMatrix<T>> {
        validate_density_matrix(rho, self.d, T::lit(crate::linalg::DENSITY_TOL))?;
        self.u_map(alpha, rho)
    }

    /// [`phi_map`](Self::phi_map) restricted to validated density matrices.
    pub fn apply_phi(&self, alpha: usize, rho: &CMatrix<T>) -> Result<CMatrix<T>> {
        validate_density_matrix(rho, self.d, T::lit(crate::linalg::DENSITY_TOL))?;
        self.phi_map(alpha, rho)
    }

    /// Probability distribution of `ρ` in basis `α`: `Tr(ρ P_l^(α))`.
    pub fn distribution(&self, alpha: usize, rho: &CMatrix<T>) -> Result<Vec<T>> {
        self.check_alpha(alpha)?;
        self.check_shape(rho)?;
        Ok(self.projectors[alpha].iter().map(|p| trace_product(rho, p).re).collect())
    }

    fn check_shape(&self, x: &CMatrix<T>) -> Result<()> {
        if x.nrows() != self.d || x.ncols() != self.d {
            return Err(GpcError::WrongLength { expected: self.d * self.d, found: x.nrows() * x.ncols() });
        }
        Ok(())
    }
}

/// Discrete Wigner operators `A_{(a₁,a₂)}`, stored at flat index `a₁·d + a₂`.
#[derive(Debug, Clone)]
pub struct WignerOperatorSet<T: Real> {
    d: usize,
    operators: Vec<CMatrix<T>>,
}

pub fn build_wigner_ops<T: Real>(d: usize) -> Result<WignerOperatorSet<T>> {
    require_prime(d)?;
    let operators = if d == 2 {
        let s = crate::linalg::pauli::<T>();
        let sign = |e: usize| creal(if e.is_multiple_of(2) { T::one() } else { -T::one() });
        let half = creal(T::lit(0.5));
        let mut ops = Vec::with_capacity(4);
        for a1 in 0..2 {
            for a2 in 0..2 {
                let a = &s[2] * sign(a1) + &s[0] * sign(a2) + &s[1] * sign(a1 + a2) + identity::<T>(2);
                ops.push(a * half);
            }
        }
        ops
    } else {
        let mut ops = Vec::with_capacity(d * d);
        for a1 in 0..d {
            for a2 in 0..d {
                ops.push(CMatrix::from_fn(d, d, |k, l| {
                    if (k + l) % d == (2 * a1) % d {
                        root_of_unity::<T>(d, a2 as i64 * (k as i64 - l as i64))
                    } else {
                        creal(T::zero())
                    }
                }));
            }
        }
        ops
    };
    Ok(WignerOperatorSet { d, operators })
}

impl<T: Real> WignerOperatorSet<T> {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn operators(&self) -> &[CMatrix<T>] {
        &self.operators
    }

    pub fn operator(&self, a1: usize, a2: usize) -> Result<&CMatrix<T>> {
        if a1 >= self.d || a2 >= self.d {
            return Err(GpcError::IndexOutOfRange { index: a1.max(a2), len: self.d });
        }
        Ok(&self.operators[a1 * self.d + a2])
    }

    /// `W_{(a₁,a₂)} = (1/d) Tr(ρ A_{(a₁,a₂)})`, flat index `a₁·d + a₂`.
    pub fn wigner_function(&self, rho: &CMatrix<T>) -> Result<Vec<T>> {
        if rho.nrows() != self.d || rho.ncols() != self.d {
            return Err(GpcError::WrongLength { expected: self.d * self.d, found: rho.nrows() * rho.ncols() });
        }
        let inv_d = T::one() / T::from_count(self.d);
        Ok(self.operators.iter().map(|a| trace_product(rho, a).re * inv_d).collect())
    }
}
