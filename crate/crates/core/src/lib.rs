//! Principal component pursuit over the reals, complex numbers and
//! quaternions, with the spectrogram plumbing needed to use it for singing
//! voice separation.

pub mod bench;
pub mod error;
pub mod iso;
pub mod matrix;
pub mod metrics;
pub mod pcp;
pub mod pipeline;
pub mod prox;
pub mod quaternion;
pub mod scalar;
pub mod spectral;
pub mod svd;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use num_complex::Complex64;
pub use quaternion::Quaternion;
pub use scalar::Scalar;
pub use svd::{spectral_norm, svd, SvdResult};
pub use pcp::{lambda_for, pcp_solve, PcpSolution, SolverConfig};
pub use pipeline::{separate, SeparationMode, SeparationResult, SolverReport};
pub use spectral::{AudioClip, Spectrogram, StftConfig};
