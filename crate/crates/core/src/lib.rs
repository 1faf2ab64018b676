//! Generalized Pauli channels driven by memory-kernel master equations.
//!
//! The crate covers the channel data model (probability and eigenvalue
//! coordinates, complete-positivity certification), memory kernels in the
//! ℓ-representation, quantum semi-Markov constructions, closed-form model
//! families, and the projection of the dynamics onto classical stochastic maps
//! and discrete Wigner functions.
//!
//! Everything is generic over the scalar type through [`Real`]; the `*64`
//! aliases below fix it to `f64`.

// `!(x > 0)` style checks are deliberate: they also reject NaN. Index loops
// mirror the matrix notation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod channel;
pub mod classical;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod models;
pub mod mub;
pub mod numerics;
pub mod scalar;
pub mod semimarkov;

pub use error::{GpcError, Result};
pub use classical::{
    classical_semimarkov, mub_distributions, stochastic_map, wigner_evolution_qubit, ClassicalSemiMarkov, StochasticMap,
};
pub use channel::{
    apply_channel, choi_matrix, eigen_from_prob, eigen_to_rates, fujiwara_algoet_check, prob_from_eigen,
    rates_to_eigen, ChannelState, EigenTrajectory, FaCertificate, FaSide, RateVector,
};
pub use kernel::{
    build_exp_family, build_special_class, check_ell_conditions, kernel_from_ell, propagate_kernel, EllRep,
    ExpFamily, ExpFamilyParams, KernelEigenvalue, KernelSpec,
};
pub use linalg::CMatrix;
pub use models::{
    ConvexCombinationModel, EternalModel, Model, ModelDescriptor, OscillatoryModel, SemigroupModel,
};
pub use mub::{build_mubs, build_wigner_ops, MubFamily, WignerOperatorSet};
pub use scalar::{Complex, Real};
pub use semimarkov::{
    certify_semimarkov, inhomogeneous_residual, lambda_via_dyson, lambda_via_laplace, SemiMarkovCertificate,
    SemiMarkovSpec,
};

pub type TimeGrid64 = numerics::TimeGrid<f64>;
pub type SampledFunction64 = numerics::SampledFunction<f64>;
pub type TimeFunction64 = numerics::TimeFunction<f64>;
pub type CMatrix64 = CMatrix<f64>;
pub type MubFamily64 = MubFamily<f64>;
pub type WignerOperatorSet64 = WignerOperatorSet<f64>;
pub type ChannelState64 = ChannelState<f64>;
pub type EigenTrajectory64 = EigenTrajectory<f64>;
pub type RateVector64 = RateVector<f64>;
pub type EllRep64 = EllRep<f64>;
pub type KernelSpec64 = KernelSpec<f64>;
pub type KernelEigenvalue64 = KernelEigenvalue<f64>;
pub type SemiMarkovSpec64 = SemiMarkovSpec<f64>;
pub type SemigroupModel64 = SemigroupModel<f64>;
pub type OscillatoryModel64 = OscillatoryModel<f64>;
pub type ConvexCombinationModel64 = ConvexCombinationModel<f64>;
pub type ModelDescriptor64 = ModelDescriptor<f64>;
pub type Model64 = Model<f64>;
pub type StochasticMap64 = StochasticMap<f64>;
