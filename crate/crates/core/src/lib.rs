//! Simulation of a capacitively shunted ("heavy") fluxonium coupled to a
//! readout resonator.
//!
//! The crate is organized bottom-up:
//!
//! - [`circuit`] reduces the lumped four-node circuit to effective
//!   capacitances and energy scales.
//! - [`fluxonium`] diagonalizes the single-body Hamiltonian and labels states
//!   by well and plasmon level.
//! - [`coupled`] adds the resonator, follows dressed states across flux and
//!   builds transition catalogs.
//! - [`dissipation`] solves the driven Lindblad equation for steady-state
//!   transmission.
//! - [`analytics`] collects the closed-form models used to interpret spectra.
//! - [`export`] writes the fixed CSV formats.
//!
//! Energies are frequencies in GHz, time is in ns, flux is in units of Φ₀.

pub mod analytics;
pub mod circuit;
pub mod coupled;
pub mod dissipation;
mod error;
pub mod export;
pub mod fluxonium;
pub mod linalg;
pub mod presets;
pub mod units;

pub use error::{Error, Result};

// Keeps the guide's code blocks compiling and passing.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/circuit.md")]
    mod circuit {}
    #[doc = include_str!("../../../book/src/fluxonium.md")]
    mod fluxonium {}
    #[doc = include_str!("../../../book/src/coupled.md")]
    mod coupled {}
    #[doc = include_str!("../../../book/src/spectroscopy.md")]
    mod spectroscopy {}
    #[doc = include_str!("../../../book/src/analytics.md")]
    mod analytics {}
}
