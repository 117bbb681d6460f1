//! Finite-dimensional Hilbert-space effect algebra toolkit.
//!
//! Everything is realized on dense complex Hermitian matrices (`ℂⁿ`, small n).
//! The crate decides and constructs the compatibility relations between pairs
//! of effects — partial ortho-coexistence, absolute compatibility and
//! x₀-compatibility — together with their normal forms and, for qubits, the
//! Bloch-ball geometric construction of the compatibility scalar λ.
//!
//! Module map:
//! - [`linalg`]: complex Hermitian matrices, spectral decomposition, the
//!   functional calculus (`|w|`, positive/negative parts, square roots).
//! - [`effects`]: the effect algebra `E(H)`, projections, and the absolute
//!   meet/join `a ∧̇ b`, `a ∨̇ b`.
//! - [`coexistence`]: coexistence witnesses and partial ortho-coexistence.
//! - [`algebra`]: commutants, bicommutants and centre membership for the
//!   *-algebra generated by a pair.
//! - [`compatibility`]: absolute compatibility, the defect operator and
//!   x₀-compatibility reports.
//! - [`structure`]: normal-form recovery (central decomposition, strict-pair
//!   block form, six-block decomposition).
//! - [`generators`]: seeded random constructors for every class above.
//! - [`bloch`]: the qubit Bloch-ball realization and the internal-couple
//!   construction of λ.
//! - [`selftest`]: the property suites behind `effectkit selftest`.

pub mod algebra;
pub mod batch;
pub mod bloch;
pub mod coexistence;
pub mod compatibility;
pub mod effects;
mod error;
pub mod generators;
pub mod linalg;
pub mod selftest;
pub mod structure;
mod tol;

pub use error::{Error, Result};
pub use tol::ToleranceConfig;

pub use effects::{Effect, Projection};
pub use linalg::{ComplexMatrix, HermitianMatrix, SpectralDecomposition, C64};
