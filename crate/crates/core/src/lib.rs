//! Periodic Littlewood-Paley analysis and a pseudospectral solver for the
//! two-component Fornberg-Whitham system
//!
//! ```text
//! u_t + u u_x = (1 - ∂ₓ²)⁻¹ ∂ₓ (ρ - u)
//! ρ_t + u ρ_x + ρ u_x = 0,        x ∈ 𝕋 = ℝ / 2πℤ
//! ```
//!
//! The crate is layered bottom-up:
//!
//! - [`spectral`]: truncated Fourier series on an equispaced grid, exact
//!   trigonometric constructors, dealiased products and Lᵖ norms.
//! - [`besov`]: the dyadic partition of unity, periodic blocks Δ_q and the
//!   Besov norms built from them.
//! - [`operators`]: Fourier multipliers, in particular Λ⁻¹∂ₓ, and an
//!   empirical operator-norm probe between Besov spaces.
//! - [`fw_system`]: method-of-lines RK4 integration of the system and of
//!   linear transport equations.
//! - [`approx_sequences`]: the explicit high-frequency families
//!   `u = -ω/n + n^{-s} sin(nx + ωt)`, `ρ = 1/n + n^{-s} sin(nx + ωt)`,
//!   their residuals and the norm brackets that go with them.

pub mod approx_sequences;
pub mod besov;
mod error;
pub mod fw_system;
pub mod operators;
pub mod spectral;

pub use error::{Error, Result};

pub use approx_sequences::SequenceParams;
pub use besov::{BesovIndex, DyadicPartition};
pub use fw_system::{SolverConfig, State, Trajectory, TrajectoryStatus};
pub use operators::Multiplier;
pub use spectral::{GridSpec, PeriodicFunction, TrigKind, TrigTerm};

pub use rustfft::num_complex::Complex64;
