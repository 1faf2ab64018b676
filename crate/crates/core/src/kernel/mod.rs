//! Memory kernels in the ℓ-representation.
//!
//! A kernel acts diagonally on the operators `U_α^k` with eigenvalues `κ_α`,
//! and `λ̇_α = ∫₀ᵗ κ_α(t−τ) λ_α(τ) dτ`. Writing `λ_α = 1 − ∫ℓ_α`, the kernel is
//! `κ̃_α = −sℓ̃_α/(1 − ℓ̃_α)` and legitimacy reduces to three inequalities on
//! `L_α = ∫ℓ_α`.

mod ell;
mod families;
mod spec;

pub use ell::{
    check_ell_conditions, kappa_from_ell_laplace, lambda_from_kappa_laplace, EllCertificate, EllCondition,
    EllRep, EllViolation,
};
pub(crate) use ell::check_pole;
pub use families::{
    build_exp_family, build_special_class, check_convolution_class, check_exp_family, check_weight_dominance,
    exp_convolution, exp_kernel_eigenvalue, ConvolutionClassCheck, ExpFamily, ExpFamilyParams,
};
pub use spec::{kernel_from_ell, propagate_kernel, KernelEigenvalue, KernelSpec};
