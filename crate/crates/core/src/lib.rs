//! Gaussian wave-packet dynamics in one dimension.
//!
//! Two independent engines are provided for the cubic nonlinear Schrödinger
//! equation (free particle) and the Gross–Pitaevskii equation with a harmonic
//! trap:
//!
//! * [`variational`]: closed-form effective potentials and RK4 integration of
//!   the width equation for `Y = Δ²`;
//! * [`pde`]: a Strang split-step Fourier solver for the full field.
//!
//! [`analysis`] turns either output into width traces, regime reports and
//! frequency estimates so the two can be compared.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod field;
pub mod grid;
pub mod pde;
pub mod variational;

pub use error::{Error, Result};
pub use field::{
    gaussian_packet, observables, width_measure, Observables, PotentialKind, WaveField,
    WidthConvention,
};
pub use grid::Grid;
