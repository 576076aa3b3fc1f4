//! Contagion-preserving network sparsifiers.
//!
//! The crate covers the whole pipeline: weighted graphs and their Laplacians,
//! exact and sketched effective resistances, effective-resistance and uniform
//! edge sampling, a discrete-time SI simulator with infection spanning trees,
//! and the fidelity metrics used to compare epidemics on a network against
//! epidemics on its sparsifiers.
//!
//! Data-parallel loops (sketch rows, simulation batches, pairwise metrics) run
//! on rayon when the `parallel` feature is enabled and fall back to plain
//! iterators otherwise. Every random stream is derived from an explicit seed,
//! so results do not depend on the execution mode.

pub mod contagion;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod par;
pub mod rng;
pub mod sparsify;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Edge, WeightedGraph};
pub use par::Execution;
