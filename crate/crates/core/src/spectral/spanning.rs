use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{connected_components, WeightedGraph};

pub const MATRIX_TREE_MAX_VERTICES: usize = 12;

/// Weighted spanning-tree count of a multigraph on `size` vertices given as
/// an edge list: determinant of the Laplacian with its last row and column
/// removed.
fn tree_polynomial(size: usize, edges: impl Iterator<Item = (usize, usize, f64)>) -> f64 {
    if size <= 1 {
        return 1.0;
    }
    let mut l = DMatrix::<f64>::zeros(size, size);
    for (a, b, w) in edges {
        l[(a, a)] += w;
        l[(b, b)] += w;
        l[(a, b)] -= w;
        l[(b, a)] -= w;
    }
    l.view((0, 0), (size - 1, size - 1))
        .into_owned()
        .determinant()
}

/// Probability that a random spanning tree, drawn with probability
/// proportional to the product of its edge weights, contains each edge.
///
/// Weighted matrix-tree theorem: `P(e ∈ T) = w_e · τ(G / e) / τ(G)`, where
/// `G / e` contracts `e`. Only for connected graphs with at most
/// [`MATRIX_TREE_MAX_VERTICES`] vertices.
pub fn spanning_tree_edge_probability(g: &WeightedGraph) -> Result<Vec<f64>> {
    let n = g.n();
    if n > MATRIX_TREE_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "matrix-tree oracle",
            n,
            limit: MATRIX_TREE_MAX_VERTICES,
        });
    }
    if connected_components(g).count() != 1 {
        return Err(Error::InvalidGraph(
            "matrix-tree oracle needs a connected graph".into(),
        ));
    }
    let all =
        |edges: &[crate::graph::Edge]| edges.iter().map(|e| (e.u, e.v, e.w)).collect::<Vec<_>>();
    let edges = all(g.edges());
    let total = tree_polynomial(n, edges.iter().copied());

    Ok(edges
        .iter()
        .enumerate()
        .map(|(idx, &(u, v, w))| {
            // Merge v into u and close the gap left by v.
            let relabel = |x: usize| {
                let x = if x == v { u } else { x };
                if x > v {
                    x - 1
                } else {
                    x
                }
            };
            let contracted = edges
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != idx)
                .map(|(_, &(a, b, wt))| (relabel(a), relabel(b), wt));
            w * tree_polynomial(n - 1, contracted) / total
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_triangle() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        for p in spanning_tree_edge_probability(&g).unwrap() {
            assert!((p - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tree_edges_are_certain() {
        let g =
            WeightedGraph::new(5, [(0, 1, 2.0), (1, 2, 0.5), (1, 3, 1.0), (3, 4, 7.0)]).unwrap();
        for p in spanning_tree_edge_probability(&g).unwrap() {
            assert!((p - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weighted_square_by_enumeration() {
        // 4-cycle with weights a,b,c,d: trees omit one edge, weight = product
        // of the other three, so P(e) = 1 - (product without e)/(sum).
        let w = [1.0, 2.0, 3.0, 4.0];
        let g = WeightedGraph::new(4, [(0, 1, w[0]), (1, 2, w[1]), (2, 3, w[2]), (0, 3, w[3])])
            .unwrap();
        let prod: f64 = w.iter().product();
        let trees: Vec<f64> = w.iter().map(|x| prod / x).collect();
        let total: f64 = trees.iter().sum();
        let p = spanning_tree_edge_probability(&g).unwrap();
        // Edge order: (0,1),(0,3),(1,2),(2,3).
        let order = [0, 3, 1, 2];
        for (k, &orig) in order.iter().enumerate() {
            assert!((p[k] - (1.0 - trees[orig] / total)).abs() < 1e-12);
        }
    }

    #[test]
    fn guards() {
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(spanning_tree_edge_probability(&g).is_err());
        let big = WeightedGraph::new(13, (0..12).map(|i| (i, i + 1, 1.0))).unwrap();
        assert!(matches!(
            spanning_tree_edge_probability(&big),
            Err(Error::TooLarge { .. })
        ));
    }
}
