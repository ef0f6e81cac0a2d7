//! Exact single-excitation amplitude dynamics and the derived time-local
//! master-equation coefficients.

pub mod laplace;
pub mod states;
pub mod thermal;
pub mod volterra;

pub use laplace::{decompose_u, BandDecomposition};
pub use states::{propagate, state_at, Propagation, StateSpec};
pub use thermal::{
    effective_temperature, rates_from_u, solve_thermal, tail_average, EffectiveTemperature, RateFunctions,
};
pub use volterra::{solve_u, solve_with_kernel, AmplitudeTrajectory};
