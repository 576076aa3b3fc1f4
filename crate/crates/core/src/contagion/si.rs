use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::StateVec;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::par::Execution;
use crate::rng;

/// Hard cap on simulated steps when running to saturation.
pub const STEP_LIMIT: u64 = 1_000_000_000;

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "transmission probability gamma must lie in (0, 1), got {gamma}"
        )))
    }
}

/// Per-step transmission probability of an edge of weight `w`.
pub fn transmission_prob(w: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "weight must be positive, got {w}"
        )));
    }
    Ok(-(w * (-gamma).ln_1p()).exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SIConfig {
    pub gamma: f64,
    /// Number of recorded states, the initial one included.
    pub timesteps: usize,
    pub patient_zero: usize,
    pub seed: u64,
}

impl SIConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        check_gamma(self.gamma)?;
        if self.timesteps < 1 {
            return Err(Error::InvalidParameter(
                "timesteps must be at least 1".into(),
            ));
        }
        if self.patient_zero >= n {
            return Err(Error::InvalidParameter(format!(
                "patient zero {} out of range for n = {n}",
                self.patient_zero
            )));
        }
        Ok(())
    }
}

/// Outcome of one epidemic: infection step and crediting edge per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Spread {
    pub patient_zero: usize,
    pub infection_time: Vec<Option<u64>>,
    pub infected_by: Vec<Option<usize>>,
}

/// Runs the SI process from `source` and records, for every vertex reached
/// by step `horizon` (or ever, if `None`), when it was infected and through
/// which edge.
///
/// Each active edge's first successful step is geometric, so the process is
/// simulated event by event: when `x` is infected at step `t`, every edge to
/// a susceptible neighbor schedules a transmission at `t + G_e` with
/// `P(G_e > k) = (1 - π_e)^k`. A vertex is infected at the earliest scheduled
/// step; ties among edges landing on that step are broken uniformly by
/// reservoir sampling. This has the same law as drawing every edge every step.
pub fn spread(
    g: &WeightedGraph,
    gamma: f64,
    source: usize,
    horizon: Option<u64>,
    rng: &mut rng::Rng,
) -> Result<Spread> {
    check_gamma(gamma)?;
    let n = g.n();
    if source >= n {
        return Err(Error::InvalidParameter(format!(
            "patient zero {source} out of range for n = {n}"
        )));
    }
    let log_keep = (-gamma).ln_1p();
    let log_miss: Vec<f64> = g.edges().iter().map(|e| e.w * log_keep).collect();
    let limit = horizon.unwrap_or(STEP_LIMIT);

    let mut time: Vec<Option<u64>> = vec![None; n];
    let mut via: Vec<Option<usize>> = vec![None; n];
    let mut best = vec![u64::MAX; n];
    let mut best_edge = vec![usize::MAX; n];
    let mut ties = vec![0u32; n];
    let mut queue = BinaryHeap::new();
    queue.push(Reverse((0u64, source)));
    best[source] = 0;

    while let Some(Reverse((t, x))) = queue.pop() {
        if time[x].is_some() || t != best[x] {
            continue;
        }
        if horizon.is_none() && t > STEP_LIMIT {
            return Err(Error::StepLimit(STEP_LIMIT));
        }
        time[x] = Some(t);
        if x != source {
            via[x] = Some(best_edge[x]);
        }
        for &(y, e) in g.neighbors(x) {
            if time[y].is_some() {
                continue;
            }
            let u = 1.0 - rng.random::<f64>();
            let skip = (u.ln() / log_miss[e]).floor();
            // Saturating float-to-int cast keeps huge waits finite.
            let wait = (skip as u64).saturating_add(1);
            let at = t.saturating_add(wait);
            if at > limit && horizon.is_some() {
                continue;
            }
            if at < best[y] {
                best[y] = at;
                best_edge[y] = e;
                ties[y] = 1;
                queue.push(Reverse((at, y)));
            } else if at == best[y] {
                ties[y] += 1;
                if rng.random_range(0..ties[y]) == 0 {
                    best_edge[y] = e;
                }
            }
        }
    }
    Ok(Spread {
        patient_zero: source,
        infection_time: time,
        infected_by: via,
    })
}

/// One SI run: `timesteps` state vectors, the first holding only patient zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<StateVec>,
    pub patient_zero: usize,
    pub seed: u64,
    /// Crediting edge of each vertex infected within the window.
    pub infected_by: Vec<Option<usize>>,
}

impl Trajectory {
    pub fn timesteps(&self) -> usize {
        self.states.len()
    }

    pub fn n(&self) -> usize {
        self.states.first().map_or(0, |s| s.len())
    }

    /// Fraction infected at each step.
    pub fn fraction_series(&self) -> Vec<f64> {
        let n = self.n() as f64;
        self.states
            .iter()
            .map(|s| s.count_ones() as f64 / n)
            .collect()
    }

    /// `t,fraction_infected` rows.
    pub fn write_fraction_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,fraction_infected")?;
        for (t, f) in self.fraction_series().iter().enumerate() {
            writeln!(out, "{t},{f:?}")?;
        }
        out.flush()
    }

    /// One `0`/`1` string per step.
    pub fn write_states<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        for s in &self.states {
            writeln!(out, "{s}")?;
        }
        out.flush()
    }
}

/// Simulates `cfg.timesteps` recorded states of the SI process.
pub fn si_run(g: &WeightedGraph, cfg: &SIConfig) -> Result<Trajectory> {
    cfg.validate(g.n())?;
    let last = (cfg.timesteps - 1) as u64;
    let mut rng = rng::rng(cfg.seed);
    let sp = spread(g, cfg.gamma, cfg.patient_zero, Some(last), &mut rng)?;
    let n = g.n();
    let mut states = Vec::with_capacity(cfg.timesteps);
    let mut current = StateVec::zeros(n);
    let mut order: Vec<(u64, usize)> = sp
        .infection_time
        .iter()
        .enumerate()
        .filter_map(|(x, t)| t.map(|t| (t, x)))
        .collect();
    order.sort_unstable();
    let mut next = 0;
    for t in 0..=last {
        while next < order.len() && order[next].0 <= t {
            current.set(order[next].1);
            next += 1;
        }
        states.push(current.clone());
    }
    Ok(Trajectory {
        states,
        patient_zero: cfg.patient_zero,
        seed: cfg.seed,
        infected_by: sp.infected_by,
    })
}

/// `runs` independent trajectories; run `r` is seeded with
/// `stream_seed(cfg.seed, patient_zero, r)`.
pub fn si_runs(
    g: &WeightedGraph,
    cfg: &SIConfig,
    runs: usize,
    exec: Execution,
) -> Result<Vec<Trajectory>> {
    cfg.validate(g.n())?;
    exec.map_range(runs, |r| {
        let seed = rng::stream_seed(cfg.seed, cfg.patient_zero as u64, r as u64);
        si_run(g, &SIConfig { seed, ..*cfg })
    })
    .into_iter()
    .collect()
}

/// Edges that carried the infection when running until the patient zero's
/// component is saturated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfectionTree {
    /// Sorted edge indices.
    pub edges: Vec<usize>,
    pub patient_zero: usize,
}

pub fn infection_tree(
    g: &WeightedGraph,
    gamma: f64,
    patient_zero: usize,
    seed: u64,
) -> Result<InfectionTree> {
    let mut rng = rng::rng(seed);
    let sp = spread(g, gamma, patient_zero, None, &mut rng)?;
    let mut edges: Vec<usize> = sp.infected_by.into_iter().flatten().collect();
    edges.sort_unstable();
    Ok(InfectionTree {
        edges,
        patient_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn transmission_probability() {
        assert!((transmission_prob(1.0, 0.3).unwrap() - 0.3).abs() < 1e-15);
        let p: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&w| transmission_prob(w, 0.01).unwrap())
            .collect();
        assert!(p[0] < p[1] && p[1] < p[2] && p[2] < 1.0);
        // 1 - 0.997^100
        let v = transmission_prob(100.0, 3e-3).unwrap();
        assert!((v - 0.259_515_740_460_217).abs() < 1e-12, "{v}");
        assert!(transmission_prob(1.0, 0.0).is_err());
        assert!(transmission_prob(1.0, 1.0).is_err());
        assert!(transmission_prob(0.0, 0.5).is_err());
    }

    #[test]
    fn edgeless_graph_stays_at_patient_zero() {
        let g = WeightedGraph::empty(4).unwrap();
        let cfg = SIConfig {
            gamma: 0.9,
            timesteps: 5,
            patient_zero: 2,
            seed: 1,
        };
        let t = si_run(&g, &cfg).unwrap();
        assert_eq!(t.timesteps(), 5);
        assert!(t.states.iter().all(|s| s.to_string() == "0010"));
    }

    #[test]
    fn first_state_is_patient_zero_only() {
        let cfg = SIConfig {
            gamma: 0.99,
            timesteps: 3,
            patient_zero: 1,
            seed: 8,
        };
        let t = si_run(&triangle(), &cfg).unwrap();
        assert_eq!(t.states[0].to_string(), "010");
        assert!(t.states[0].is_subset_of(&t.states[1]));
    }

    #[test]
    fn config_validation() {
        let g = triangle();
        let base = SIConfig {
            gamma: 0.5,
            timesteps: 4,
            patient_zero: 0,
            seed: 0,
        };
        assert!(si_run(
            &g,
            &SIConfig {
                timesteps: 0,
                ..base
            }
        )
        .is_err());
        assert!(si_run(
            &g,
            &SIConfig {
                patient_zero: 3,
                ..base
            }
        )
        .is_err());
        assert!(si_run(&g, &SIConfig { gamma: 1.0, ..base }).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let g = triangle();
        let cfg = SIConfig {
            gamma: 0.2,
            timesteps: 20,
            patient_zero: 0,
            seed: 99,
        };
        assert_eq!(si_run(&g, &cfg).unwrap(), si_run(&g, &cfg).unwrap());
        assert_eq!(
            infection_tree(&g, 0.2, 1, 5).unwrap(),
            infection_tree(&g, 0.2, 1, 5).unwrap()
        );
    }

    #[test]
    fn trees_on_small_graphs() {
        let two = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
        for seed in 0..20 {
            assert_eq!(
                infection_tree(&two, 0.3, seed as usize % 2, seed)
                    .unwrap()
                    .edges,
                vec![0]
            );
        }
        let tri = triangle();
        for seed in 0..50 {
            let t = infection_tree(&tri, 0.5, 0, seed).unwrap();
            assert_eq!(t.edges.len(), 2);
        }
        let tree =
            WeightedGraph::new(5, [(0, 1, 1.0), (1, 2, 3.0), (1, 3, 0.2), (3, 4, 1.0)]).unwrap();
        for seed in 0..20 {
            assert_eq!(
                infection_tree(&tree, 0.1, 4, seed).unwrap().edges,
                vec![0, 1, 2, 3]
            );
        }
    }

    #[test]
    fn tree_stays_in_component() {
        let g = WeightedGraph::new(5, [(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0)]).unwrap();
        let t = infection_tree(&g, 0.5, 4, 3).unwrap();
        assert_eq!(t.edges, vec![2]);
    }

    #[test]
    fn simultaneous_arrivals_split_evenly() {
        // Star 0 - {1, 2} - 3 with γ near 1: both paths reach 3 at step 2
        // almost always, and each should be credited half the time.
        let g =
            WeightedGraph::new(4, [(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)]).unwrap();
        let via_1 = (0..4000)
            .filter(|&s| {
                let t = infection_tree(&g, 0.999_999, 0, s).unwrap();
                t.edges.contains(&2)
            })
            .count();
        let share = via_1 as f64 / 4000.0;
        assert!((share - 0.5).abs() < 0.04, "{share}");
    }

    #[test]
    fn runs_are_seeded_per_run() {
        let g = triangle();
        let cfg = SIConfig {
            gamma: 0.3,
            timesteps: 6,
            patient_zero: 0,
            seed: 4,
        };
        let seq = si_runs(&g, &cfg, 10, Execution::Sequential).unwrap();
        let par = si_runs(&g, &cfg, 10, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert!(seq.windows(2).any(|w| w[0].states != w[1].states));
    }
}
