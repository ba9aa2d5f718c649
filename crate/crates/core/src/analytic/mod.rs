//! The analytic side: kernels of the deformed Dirac operator on built-in
//! model spaces, and the cylinder model operator as a spectral oracle.

pub mod oscillator;
pub mod plane;
pub mod tridiag;

use thiserror::Error;

use crate::characters::CharacterError;

pub use oscillator::{ground_state_profile, oscillator_spectrum, sampled_gaussian, Branch, OscillatorModel};
pub use plane::{
    analytic_index, analytic_modes, bargmann_candidate, build_mode_operator, default_tolerance, kernel_dims,
    kernel_dims_refined, window_weights, Field, KernelDims, ModeOperator, ModeResult, PlaneRotationModel,
};
pub use tridiag::{EigenError, SymTridiag};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("kernel tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("mode {mode}: {count} eigenvalue(s) of op² in [tol², 100·tol²] (tol = {tol:e}); no spectral gap")]
    AmbiguousGap { mode: i64, count: usize, tol: f64 },
    #[error("mode {mode}: near-kernel vector is not graded (even fraction {even_fraction:.4})")]
    AmbiguousGrading { mode: i64, even_fraction: f64 },
    #[error("mode {mode}: kernel dimensions change under grid refinement ({coarse:?} vs {fine:?})")]
    GridUnstable { mode: i64, coarse: KernelDims, fine: KernelDims },
    #[error("mode {mode} carries no sections")]
    EmptyMode { mode: i64 },
    #[error("assembled mode operator is not symmetric")]
    NotSymmetric,
    #[error("the plane model needs a rank-one torus, got rank {0}")]
    RankNotOne(usize),
    #[error("analytic window must be bounded on both sides in the pairing with the taming vector")]
    UnboundedWindow,
    #[error("deformation is not admissible on the solver grid")]
    AdmissibilityFailed,
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}
