//! Small dense complex-matrix helpers.

use nalgebra::DMatrix;

use crate::error::{GpcError, Result};
use crate::scalar::{creal, Complex, Real};

pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Default tolerance for density-matrix validation.
pub const DENSITY_TOL: f64 = 1e-10;

pub fn identity<T: Real>(d: usize) -> CMatrix<T> {
    CMatrix::identity(d, d)
}

/// `|v⟩⟨v|`.
pub fn projector<T: Real>(v: &[Complex<T>]) -> CMatrix<T> {
    let d = v.len();
    CMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj())
}

pub fn real_trace<T: Real>(m: &CMatrix<T>) -> T {
    m.trace().re
}

/// `Re Tr(A B)` without forming the product.
pub fn trace_product<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Complex<T> {
    let d = a.nrows();
    let mut acc = creal(T::zero());
    for i in 0..d {
        for k in 0..d {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn max_abs_entry<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.re.hypot(z.im)))
}

pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    max_abs_entry(&(a - b))
}

pub fn hermiticity_defect<T: Real>(m: &CMatrix<T>) -> T {
    max_abs_diff(m, &m.adjoint())
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let herm = (m + m.adjoint()) * creal(T::lit(0.5));
    let mut ev: Vec<T> = herm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Checks that `rho` is a `d×d` Hermitian, unit-trace, positive semidefinite
/// matrix within `tol`.
pub fn validate_density_matrix<T: Real>(rho: &CMatrix<T>, d: usize, tol: T) -> Result<()> {
    if rho.nrows() != d || rho.ncols() != d {
        return Err(GpcError::InvalidDensityMatrix(format!(
            "expected {d}x{d}, got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let herm = hermiticity_defect(rho);
    if herm > tol {
        return Err(GpcError::InvalidDensityMatrix(format!("not Hermitian (defect {herm})")));
    }
    let tr = rho.trace();
    if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
        return Err(GpcError::InvalidDensityMatrix(format!("trace {} + {}i", tr.re, tr.im)));
    }
    let min = hermitian_eigenvalues(rho)[0];
    if min < -tol {
        return Err(GpcError::InvalidDensityMatrix(format!("negative eigenvalue {min}")));
    }
    Ok(())
}

/// Pauli matrices `σ₁, σ₂, σ₃`.
pub fn pauli<T: Real>() -> [CMatrix<T>; 3] {
    let (o, l, i) = (creal(T::zero()), creal(T::one()), Complex::new(T::zero(), T::one()));
    [
        CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    ]
}

/// Bloch vector `x_α = Tr(ρ σ_α)` of a qubit state.
pub fn bloch_vector<T: Real>(rho: &CMatrix<T>) -> [T; 3] {
    let p = pauli::<T>();
    [trace_product(rho, &p[0]).re, trace_product(rho, &p[1]).re, trace_product(rho, &p[2]).re]
}

/// `½(I + x·σ)`.
pub fn qubit_from_bloch<T: Real>(x: [T; 3]) -> CMatrix<T> {
    let p = pauli::<T>();
    let half = creal(T::lit(0.5));
    (identity::<T>(2) + &p[0] * creal(x[0]) + &p[1] * creal(x[1]) + &p[2] * creal(x[2])) * half
}
