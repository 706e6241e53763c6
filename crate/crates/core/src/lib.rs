//! Physicality of ancilla operators in system-ancilla unitary models.
//!
//! Given a unitary `U` on `H_A (x) H_B`, the crate computes its operator
//! Schmidt decomposition, decides whether complete positivity of
//! `rho -> tr_B(U (rho (x) sigma) U^dagger)` forces `sigma >= 0`, builds
//! non-positive `sigma` witnesses when it does not, and decides whether the
//! map determines `sigma` uniquely.
//!
//! ```
//! use ancilla_core::gallery::xx_rotation;
//! use ancilla_core::{analyze, schmidt_decompose, Tolerances, Verdict};
//!
//! let tol = Tolerances::default();
//! let sd = schmidt_decompose(&xx_rotation(std::f64::consts::FRAC_PI_2), &tol).unwrap();
//! let report = analyze(&sd, 100, 42, &tol).unwrap();
//! assert_eq!(report.verdict, Verdict::NotP);
//! assert!((report.witness.unwrap().epsilon - 24.5).abs() < 1e-9);
//! ```

pub mod channel;
pub mod error;
pub mod gallery;
pub mod numerics;
pub mod opspace;
pub mod physicality;
pub mod random;
pub mod schmidt;
pub mod tomography;

pub use channel::{build_channel, ChannelRep, CpVerdict};
pub use error::{Error, Result};
pub use numerics::{CMatrix, Tolerances};
pub use opspace::{ConeMembership, OperatorSubspace, VectorSubspace};
pub use physicality::{analyze, AncillaWitness, PhysicalityReport, Verdict};
pub use schmidt::{schmidt_decompose, BipartiteUnitary, SchmidtDecomposition};
pub use tomography::{allows_indirect_tomography, TomographyVerdict};
