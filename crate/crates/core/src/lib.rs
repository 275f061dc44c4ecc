//! Dirac-bispinor simulation of an oscillating neutrino and of a
//! lepton/antineutrino pair, together with the quantum-information measures
//! needed to check complete complementarity relations (CCR) on every
//! partition of the resulting hyperentangled states.
//!
//! Units are natural (ħ = c = 1) with the light mass eigenvalue `m1 = 1`;
//! times are in units of `1/m1`.
//!
//! Module map:
//!
//! - [`dirac`]: gamma matrices, bispinors, chirality projectors, free evolution.
//! - [`tensor`]: labelled qubit registers, density matrices, partial trace.
//! - [`measures`]: entropies, coherence, predictability, concurrence.
//! - [`ccr`]: pure and mixed entropic complementarity relations.
//! - [`single`]: one electron neutrino with chirality, spin and two-flavor mixing.
//! - [`pair`]: spin-entangled lepton/antineutrino pair with flavor mixing.
//! - [`verify`]: the invariant suite behind `nuccr verify`.

pub mod ccr;
pub mod dirac;
pub mod error;
pub mod measures;
pub mod pair;
pub mod single;
pub mod tensor;
pub mod verify;

pub use ccr::{ccr_mixed, ccr_pure, ccr_qubit, CcrKind, CcrReport, Component};
pub use dirac::{Bispinor, Handedness, MassIndex, PhysParams, Species, Spin, SpinorKind};
pub use error::{Error, Result};
pub use measures::Bits;
pub use pair::{PairCoefficients, SpinDensity};
pub use single::FlavorDensity;
pub use tensor::{DensityMatrix, LabeledState};

pub use num_complex::Complex64;

/// Numerical tolerances shared across the crate.
pub mod tol {
    /// Algebraic identities evaluated in double precision.
    pub const IDENTITY: f64 = 1e-12;
    /// Guard used when an input is required to be normalized.
    pub const NORMALIZATION: f64 = 1e-9;
    /// Eigenvalues in `[-EIGEN_FLOOR, 0)` are clamped to zero, lower ones are rejected.
    pub const EIGEN_FLOOR: f64 = 1e-10;
    /// Eigenvalues below this are dropped from entropy sums.
    pub const EIGEN_DROP: f64 = 1e-12;
    /// Bound on CCR residuals for valid inputs.
    pub const CCR_RESIDUAL: f64 = 1e-10;
}
