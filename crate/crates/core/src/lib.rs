//! Rotation-averaged correlation of two-qubit states under phase and
//! amplitude damping.
//!
//! The average correlation of a two-qubit state `rho` is
//!
//! ```text
//! Sigma = mean over unit vectors a, b of |aᵀ K b|,    K_ij = tr(rho sigma_i ⊗ sigma_j)
//! ```
//!
//! It depends only on the singular values of `K`. Values at or below `1/4`
//! are compatible with classical states, values above `1/(2 sqrt 2)` occur only
//! for nonclassical ones.
//!
//! The crate is organised bottom-up:
//!
//! * [`qstate`]: density matrices, Pauli operators and the Schmidt pure state
//!   `c|01> - sqrt(1 - c^2)|10>`;
//! * [`channels`]: phase- and amplitude-damping Kraus channels applied to both
//!   qubits, and the time-to-probability map `p(t) = 1 - exp(-gamma t)`;
//! * [`correlation`]: `K`, its singular values, `Sigma` by closed form,
//!   quadrature or Monte Carlo, and classification;
//! * [`sweep`]: `Sigma(t)` decay curves for a set of decoherence rates.
//!
//! ```
//! use avgcorr::{channels, correlation, qstate};
//!
//! let bell = qstate::make_pure_state(qstate::SchmidtCoefficient::maximal());
//! let sigma = correlation::sigma_for_state(&bell, correlation::Method::Quadrature)?;
//! assert!((sigma.value - 0.5).abs() < 1e-12);
//!
//! let damping = channels::amplitude_damping(0.5)?;
//! let damped = channels::apply_local_channel(&bell, &damping, &damping);
//! let sigma = correlation::sigma_for_state(&damped, correlation::Method::Quadrature)?;
//! assert_eq!(correlation::classify(&sigma), correlation::Classification::ClassicalCompatible);
//! # Ok::<(), avgcorr::Error>(())
//! ```
//!
//! The guide in `book/` walks through each step with runnable listings.

pub mod channels;
pub mod correlation;
mod error;
pub mod qstate;
pub mod sweep;

pub use error::{Error, Result};
