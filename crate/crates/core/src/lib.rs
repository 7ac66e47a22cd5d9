//! Structural synthesis and verification for singular discrete-time LQ
//! Hamiltonian systems.
//!
//! The crate synthesizes the five structural matrices (P+, K+, A+, W,
//! Kbar+) of a finite-horizon singular LQ problem, generates the complete
//! two-parameter family of solutions (x_k, p_k, u_k) of the associated
//! Hamiltonian system through a decoupling change of basis, and validates
//! the family against an independent brute-force null-space oracle.

pub mod cli;
pub mod error;
pub mod hamiltonian;
pub mod matrix;
pub mod oracle;
pub mod synthesis;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use synthesis::{ProblemInstance, SynthesisResult};
