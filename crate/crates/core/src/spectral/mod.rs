//! Effective resistances and leverage scores.
//!
//! For an edge `e = (u, v)` the effective resistance is
//! `R_e = (χ_u - χ_v)ᵀ L⁺ (χ_u - χ_v)` and its leverage is `ℓ_e = w_e R_e`,
//! the probability that a weighted random spanning tree contains `e`.
//! Leverages sum to `n - c` over a graph with `c` components.
//!
//! Two constructions are provided: [`exact_resistance`] through a dense
//! pseudoinverse per component, and [`approx_resistance`], a random
//! projection of `W^{1/2} B L⁺` with iterative Laplacian solves.
//! [`spanning_tree_edge_probability`] is a matrix-tree oracle for small
//! graphs.

mod approx;
mod exact;
pub mod solver;
mod spanning;

pub use approx::{approx_resistance, jl_dimension, SketchConfig};
pub use exact::{exact_resistance, EXACT_MAX_VERTICES};
pub use spanning::{spanning_tree_edge_probability, MATRIX_TREE_MAX_VERTICES};

use std::io::Write;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Components, Edge, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    JlApprox,
}

/// Dense pseudoinverse of one component's Laplacian.
#[derive(Debug, Clone)]
pub(crate) struct ComponentInverse {
    pub(crate) pinv: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub(crate) enum PairData {
    /// One block per component, indexed through `local`.
    Pseudoinverse {
        blocks: Vec<ComponentInverse>,
        local: Vec<usize>,
    },
    /// Row-major `k × n` projection `Z`; `R_ij ≈ ‖Z(χ_i - χ_j)‖²`.
    Embedding {
        k: usize,
        z: Vec<f64>,
    },
    None,
}

/// Per-edge effective resistances and leverage scores of one graph.
#[derive(Debug, Clone)]
pub struct ResistanceSketch {
    method: Method,
    epsilon: Option<f64>,
    n: usize,
    edges: Vec<Edge>,
    resistance: Vec<f64>,
    leverage: Vec<f64>,
    components: Components,
    pair: PairData,
}

impl ResistanceSketch {
    pub(crate) fn new(
        method: Method,
        epsilon: Option<f64>,
        g: &WeightedGraph,
        resistance: Vec<f64>,
        components: Components,
        pair: PairData,
    ) -> Self {
        let leverage = g
            .edges()
            .iter()
            .zip(&resistance)
            .map(|(e, r)| e.w * r)
            .collect();
        Self {
            method,
            epsilon,
            n: g.n(),
            edges: g.edges().to_vec(),
            resistance,
            leverage,
            components,
            pair,
        }
    }

    /// Bridges carry all current between their endpoints, so `ℓ_e = 1` exactly.
    pub(crate) fn with_unit_bridges(mut self, is_bridge: &[bool]) -> Self {
        for (l, &b) in self.leverage.iter_mut().zip(is_bridge) {
            if b {
                *l = 1.0;
            }
        }
        self
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn resistances(&self) -> &[f64] {
        &self.resistance
    }

    /// `w_e · R_e` per edge.
    pub fn leverages(&self) -> &[f64] {
        &self.leverage
    }

    pub fn leverage_sum(&self) -> f64 {
        self.leverage.iter().sum()
    }

    pub fn components(&self) -> &Components {
        &self.components
    }

    /// Sampling distribution `p_e = ℓ_e / Σℓ`.
    pub fn sampling_probabilities(&self) -> Vec<f64> {
        let total = self.leverage_sum();
        self.leverage.iter().map(|l| l / total).collect()
    }

    /// Checks that the sketch was built from `g`.
    pub fn matches(&self, g: &WeightedGraph) -> Result<()> {
        if self.n != g.n() || self.edges.len() != g.m() {
            return Err(Error::SketchMismatch(format!(
                "sketch has n={} m={}, graph has n={} m={}",
                self.n,
                self.edges.len(),
                g.n(),
                g.m()
            )));
        }
        if let Some((i, _)) = self
            .edges
            .iter()
            .zip(g.edges())
            .enumerate()
            .find(|(_, (a, b))| a != b)
        {
            return Err(Error::SketchMismatch(format!("edge {i} differs")));
        }
        Ok(())
    }

    /// Index of the edge joining `a` and `b`.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search_by_key(&key, |e| (e.u, e.v)).ok()
    }

    /// Effective resistance between any two vertices.
    ///
    /// Vertices in different components are at infinite resistance. Fails when
    /// the sketch was built without pair data.
    pub fn pair_resistance(&self, i: usize, j: usize) -> Result<f64> {
        if i >= self.n || j >= self.n {
            return Err(Error::InvalidParameter(format!(
                "vertex pair ({i}, {j}) out of range for n = {}",
                self.n
            )));
        }
        if i == j {
            return Ok(0.0);
        }
        if !self.components.same(i, j) {
            return Ok(f64::INFINITY);
        }
        match &self.pair {
            PairData::Pseudoinverse { blocks, local } => {
                let p = &blocks[self.components.label(i)].pinv;
                let (a, b) = (local[i], local[j]);
                Ok(p[(a, a)] + p[(b, b)] - 2.0 * p[(a, b)])
            }
            PairData::Embedding { k, z } => {
                let n = self.n;
                Ok((0..*k)
                    .map(|r| {
                        let d = z[r * n + i] - z[r * n + j];
                        d * d
                    })
                    .sum())
            }
            PairData::None => Err(Error::InvalidParameter(
                "sketch was built without pair data".into(),
            )),
        }
    }

    /// Writes `u\tv\tw\tR\tleverage` rows, plus a `component` column when the
    /// graph is disconnected.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let with_component = self.components.count() > 1;
        if with_component {
            writeln!(out, "# u\tv\tw\tR\tleverage\tcomponent")?;
        } else {
            writeln!(out, "# u\tv\tw\tR\tleverage")?;
        }
        for (i, e) in self.edges.iter().enumerate() {
            write!(
                out,
                "{}\t{}\t{:?}\t{:?}\t{:?}",
                e.u, e.v, e.w, self.resistance[i], self.leverage[i]
            )?;
            if with_component {
                write!(out, "\t{}", self.components.label(e.u))?;
            }
            writeln!(out)?;
        }
        out.flush()
    }
}
