//! Exact single-excitation open-system dynamics governed by system-environment
//! bound states, Floquet analysis of piecewise driven models and Floquet
//! topological invariants of driven two-band lattices.
//!
//! Units: ħ = 1 everywhere. Frequencies, energies and rates share whatever
//! reference unit the caller declares (ω₀, ω_c or a hopping J).

pub mod dynamics;
pub mod error;
pub mod floquet;
pub mod linalg;
pub mod metrics;
pub mod quad;
pub mod spectra;
pub mod topology;

pub use error::{Error, Result};
pub use num_complex::Complex64;
