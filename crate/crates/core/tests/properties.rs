use std::collections::{BTreeMap, VecDeque};

use cpns_core::contagion::{infection_tree, si_run, SIConfig, StateVec};
use cpns_core::graph::{
    bridges, connected_components, laplacian, parse_edge_list, write_edge_list,
};
use cpns_core::metrics::{baseline, entropy, hamming, mutual_information, Metric};
use cpns_core::spectral::{exact_resistance, spanning_tree_edge_probability};
use cpns_core::{Execution, WeightedGraph};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pair = (0..n, 0..n, 0.05f64..20.0);
        proptest::collection::vec(pair, 0..(3 * n)).prop_map(move |raw| {
            let mut edges = BTreeMap::new();
            for (a, b, w) in raw {
                if a != b {
                    edges.entry((a.min(b), a.max(b))).or_insert(w);
                }
            }
            WeightedGraph::new(n, edges.into_iter().map(|((a, b), w)| (a, b, w))).unwrap()
        })
    })
}

/// Random graph made connected by a random spanning tree.
fn connected_strategy(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let n = g.n();
        let tree = proptest::collection::vec(
            (any::<prop::sample::Index>(), 0.05f64..20.0),
            n.saturating_sub(1),
        );
        (Just(g), tree).prop_map(|(g, tree)| {
            let mut edges: BTreeMap<(usize, usize), f64> =
                g.edges().iter().map(|e| ((e.u, e.v), e.w)).collect();
            for (v, (parent, w)) in tree.into_iter().enumerate() {
                let (child, p) = (v + 1, parent.index(v + 1));
                edges.entry((p, child)).or_insert(w);
            }
            WeightedGraph::new(g.n(), edges.into_iter().map(|((a, b), w)| (a, b, w))).unwrap()
        })
    })
}

fn bfs_labels(g: &WeightedGraph) -> Vec<usize> {
    let mut label = vec![usize::MAX; g.n()];
    for s in 0..g.n() {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in g.neighbors(x) {
                if label[y] == usize::MAX {
                    label[y] = s;
                    queue.push_back(y);
                }
            }
        }
    }
    label
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

fn bits(len: usize) -> impl Strategy<Value = StateVec> {
    proptest::collection::vec(any::<bool>(), len).prop_map(StateVec::from_bits)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trip(g in graph_strategy(15)) {
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = parse_edge_list(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(&back, &g);
        let mut again = Vec::new();
        write_edge_list(&back, &mut again).unwrap();
        prop_assert_eq!(buf, again);
    }

    #[test]
    fn laplacian_symmetric_with_zero_row_sums(g in graph_strategy(12)) {
        let l = laplacian(&g).to_dense();
        for i in 0..g.n() {
            let row: f64 = (0..g.n()).map(|j| l[(i, j)]).sum();
            prop_assert!(row.abs() <= 1e-9 * (1.0 + l[(i, i)]));
            for j in 0..g.n() {
                prop_assert_eq!(l[(i, j)], l[(j, i)]);
            }
        }
    }

    #[test]
    fn components_match_breadth_first_search(g in graph_strategy(20)) {
        let c = connected_components(&g);
        let oracle = bfs_labels(&g);
        for a in 0..g.n() {
            for b in 0..g.n() {
                prop_assert_eq!(c.same(a, b), oracle[a] == oracle[b]);
            }
        }
    }

    #[test]
    fn leverages_sum_to_n_minus_components(g in graph_strategy(14)) {
        let s = exact_resistance(&g).unwrap();
        let c = connected_components(&g).count();
        let expected = (g.n() - c) as f64;
        prop_assert!((s.leverage_sum() - expected).abs() <= 1e-8 * expected.max(1.0));
        let is_bridge = bridges(&g);
        for (e, &l) in s.leverages().iter().enumerate() {
            prop_assert!(l > 0.0 && l <= 1.0 + 1e-12);
            if is_bridge[e] {
                prop_assert_eq!(l, 1.0);
            }
        }
    }

    #[test]
    fn leverage_equals_spanning_tree_probability(g in connected_strategy(8)) {
        let s = exact_resistance(&g).unwrap();
        let p = spanning_tree_edge_probability(&g).unwrap();
        for (l, q) in s.leverages().iter().zip(&p) {
            prop_assert!((l - q).abs() <= 1e-8, "{l} vs {q}");
        }
    }

    #[test]
    fn heavier_edge_never_raises_resistance(g in graph_strategy(10), pick in any::<prop::sample::Index>(), factor in 1.0f64..5.0) {
        prop_assume!(g.m() > 0);
        let target = pick.index(g.m());
        let heavier = WeightedGraph::new(
            g.n(),
            g.edges().iter().enumerate().map(|(i, e)| (e.u, e.v, if i == target { e.w * factor } else { e.w })),
        ).unwrap();
        let before = exact_resistance(&g).unwrap();
        let after = exact_resistance(&heavier).unwrap();
        for (a, b) in after.resistances().iter().zip(before.resistances()) {
            prop_assert!(*a <= b * (1.0 + 1e-9));
        }
    }

    #[test]
    fn hamming_is_a_metric(a in bits(70), b in bits(70), c in bits(70)) {
        let ab = hamming(&a, &b).unwrap();
        prop_assert_eq!(ab, hamming(&b, &a).unwrap());
        prop_assert_eq!(hamming(&a, &a).unwrap(), 0);
        prop_assert_eq!(ab == 0, a == b);
        prop_assert!(hamming(&a, &c).unwrap() <= ab + hamming(&b, &c).unwrap());
    }

    #[test]
    fn mutual_information_bounds(a in bits(40), b in bits(40)) {
        let ab = mutual_information(&a, &b).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - mutual_information(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!(ab <= entropy(&a).min(entropy(&b)) + 1e-12);
        prop_assert!((mutual_information(&a, &a).unwrap() - entropy(&a)).abs() < 1e-12);
    }

    #[test]
    fn trajectories_are_monotone_and_contained(
        g in graph_strategy(16),
        gamma in 0.01f64..0.9,
        timesteps in 1usize..30,
        source in any::<prop::sample::Index>(),
        seed in any::<u64>(),
    ) {
        let p0 = source.index(g.n());
        let cfg = SIConfig { gamma, timesteps, patient_zero: p0, seed };
        let traj = si_run(&g, &cfg).unwrap();
        let comps = connected_components(&g);
        prop_assert_eq!(traj.timesteps(), timesteps);
        prop_assert_eq!(traj.states[0].count_ones(), 1);
        prop_assert!(traj.states[0].get(p0));
        for w in traj.states.windows(2) {
            prop_assert!(w[0].is_subset_of(&w[1]));
        }
        for (x, infected) in traj.states[timesteps - 1].iter().enumerate() {
            if infected {
                prop_assert!(comps.same(x, p0));
            }
        }
        let fractions = traj.fraction_series();
        prop_assert!(fractions.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(si_run(&g, &cfg).unwrap(), traj);
    }

    #[test]
    fn infection_trees_span_the_source_component(
        g in graph_strategy(16),
        gamma in 0.01f64..0.9,
        source in any::<prop::sample::Index>(),
        seed in any::<u64>(),
    ) {
        let p0 = source.index(g.n());
        let tree = infection_tree(&g, gamma, p0, seed).unwrap();
        let comps = connected_components(&g);
        let size = comps.sizes()[comps.label(p0)];
        prop_assert_eq!(tree.edges.len(), size - 1);
        let mut parent: Vec<usize> = (0..g.n()).collect();
        for &e in &tree.edges {
            let edge = g.edge(e);
            prop_assert!(comps.same(edge.u, p0));
            let (a, b) = (find(&mut parent, edge.u), find(&mut parent, edge.v));
            prop_assert!(a != b, "cycle through edge {e}");
            parent[a] = b;
        }
        let root = find(&mut parent, p0);
        for x in 0..g.n() {
            if comps.same(x, p0) {
                prop_assert_eq!(find(&mut parent, x), root);
            }
        }
    }

    #[test]
    fn baseline_ignores_run_order(seed in any::<u64>(), rotate in 1usize..5) {
        let g = WeightedGraph::new(8, (0..7).map(|i| (i, i + 1, 1.0)).chain([(0, 7, 2.0), (2, 5, 0.5)])).unwrap();
        let cfg = SIConfig { gamma: 0.3, timesteps: 12, patient_zero: 3, seed };
        let mut runs: Vec<_> = (0..6u64)
            .map(|r| si_run(&g, &SIConfig { seed: seed ^ r.wrapping_mul(0x9e37), ..cfg }).unwrap())
            .collect();
        let before: Vec<_> = Metric::ALL.iter().map(|&m| baseline(&runs, m, Execution::Sequential).unwrap()).collect();
        runs.rotate_left(rotate);
        runs.swap(0, 5);
        for (m, b) in Metric::ALL.iter().zip(&before) {
            let after = baseline(&runs, *m, Execution::Sequential).unwrap();
            for t in 0..after.len() {
                prop_assert!((after.mean[t] - b.mean[t]).abs() <= 1e-12);
                prop_assert!((after.half_width[t] - b.half_width[t]).abs() <= 1e-9);
            }
        }
    }
}
