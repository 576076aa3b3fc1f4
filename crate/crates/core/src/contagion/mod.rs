//! Discrete-time SI dynamics, infection spanning trees and epidemic edge
//! importance.
//!
//! At every step each edge between an infected and a susceptible vertex
//! transmits independently with probability `π_e = 1 - (1 - γ)^{w_e}`.
//! Vertices infected at step `t` start transmitting at `t + 1`. When several
//! edges reach the same vertex in the same step, the credited edge is chosen
//! uniformly among them.

mod importance;
mod si;
mod state;

pub use importance::{epidemic_edge_importance, importance_counts, EeiConfig, ImportanceTable};
pub use si::{
    infection_tree, si_run, si_runs, spread, transmission_prob, InfectionTree, SIConfig, Spread,
    Trajectory, STEP_LIMIT,
};
pub use state::StateVec;
