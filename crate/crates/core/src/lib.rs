//! Gaussian steady states of an optical cavity coupled to mechanical resonators
//! and driven by the finite-bandwidth squeezed output of a degenerate parametric
//! oscillator, with entanglement and two-mode squeezing measures on top.

pub mod error;
pub mod lyapunov;
pub mod measures;
pub mod model;
pub mod network;
pub mod optimize;
pub mod oracle;
pub mod reservoir;
pub mod steadystate;

pub use error::{Error, Result};
pub use model::{CavityParams, FrequencyConfig, MechanicalMode, OpoParams, SystemModel};
pub use steadystate::{Regime, SteadyStateSolution};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Imaginary unit.
pub const IM: C64 = C64::new(0.0, 1.0);
