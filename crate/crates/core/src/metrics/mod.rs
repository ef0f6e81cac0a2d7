//! Figures of merit computed from amplitude trajectories.

pub mod entanglement;
pub mod metrology;
pub mod speed;

pub use entanglement::{concurrence, fidelity, trace_distance};
pub use metrology::{
    bound_mzi, heisenberg_limit, ideal_mzi, markovian_mzi, markovian_mzi_min, mzi_precision, optimal_time,
    phase_matched_times, ramsey_bound, ramsey_markovian_min, ramsey_precision, shot_noise_limit, zeno_limit,
    AmplitudeModel, BoundLongTime, Exact, Ideal, Limit, Markovian, MziProbe, PrecisionCurve, Scheme,
};
pub use speed::{non_markovianity, qsl_time, NonMarkovianity, QslTime};
