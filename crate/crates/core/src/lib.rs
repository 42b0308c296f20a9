//! Operator-sum (Kraus) representations connecting density matrices.
//!
//! Given two states ρ_A and ρ_B of the same dimension, [`kraus::connect`]
//! builds N operators with Σ M_μ†M_μ = I and Σ M_μ ρ_A M_μ† = ρ_B. Along a
//! trajectory ρ(t) the same construction runs per sample on a
//! gauge-matched eigenframe, which feeds unitary dilations and the
//! polar-factor geometric phase.
//!
//! Per-sample work is dispatched through [`Exec`]; with the `parallel`
//! feature (default) it runs on rayon, otherwise sequentially.

pub mod cli;
pub mod density;
pub mod dilation;
pub mod error;
pub mod exec;
pub mod kraus;
pub mod linalg;
pub mod phase;
pub mod random;
pub mod trajectory;

pub use density::{spectral_decompose, validate_density, DensityMatrix, SpectralDecomposition};
pub use dilation::{build_dilation, verify_dilation, Basis, DilationReport, DilationUnitary};
pub use error::{Error, Result};
pub use exec::Exec;
pub use kraus::{apply_channel, build_shift_family, connect, mix_kraus, verify_kraus, KrausReport, KrausSet};
pub use linalg::{ComplexMatrix, Tolerances, C64};
pub use phase::{geometric_phase, PhaseReport};
pub use trajectory::{kraus_trajectory, spectral_trajectory, DensityTrajectory, KrausTrajectory, SpectralTrajectory};
