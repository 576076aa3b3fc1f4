use nalgebra::{DMatrix, SymmetricEigen};

use super::{ComponentInverse, Method, PairData, ResistanceSketch};
use crate::error::{Error, Result};
use crate::graph::{bridges, connected_components, WeightedGraph};

pub const EXACT_MAX_VERTICES: usize = 5000;

/// Relative eigenvalue cutoff below which a mode counts as null.
const NULL_CUTOFF: f64 = 1e-10;

/// Moore–Penrose pseudoinverse of a symmetric PSD matrix by eigendecomposition.
pub(crate) fn pseudoinverse(l: DMatrix<f64>) -> DMatrix<f64> {
    let size = l.nrows();
    let eig = SymmetricEigen::new(l);
    let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let mut pinv = DMatrix::zeros(size, size);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= NULL_CUTOFF * lambda_max {
            continue;
        }
        let v = eig.eigenvectors.column(k);
        pinv.ger(1.0 / lambda, &v, &v, 1.0);
    }
    pinv
}

/// Exact effective resistances from the per-component pseudoinverse.
///
/// Bridges get `R_e = 1/w_e` exactly. Refuses graphs above
/// [`EXACT_MAX_VERTICES`] vertices; use the sketch there.
pub fn exact_resistance(g: &WeightedGraph) -> Result<ResistanceSketch> {
    if g.n() > EXACT_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "exact resistance (use jl-approx)",
            n: g.n(),
            limit: EXACT_MAX_VERTICES,
        });
    }
    let comps = connected_components(g);
    let members = comps.members();
    let mut local = vec![0usize; g.n()];
    for list in &members {
        for (i, &x) in list.iter().enumerate() {
            local[x] = i;
        }
    }

    let blocks: Vec<ComponentInverse> = members
        .iter()
        .map(|list| {
            let size = list.len();
            let mut l = DMatrix::zeros(size, size);
            for &x in list {
                for &(y, e) in g.neighbors(x) {
                    let w = g.edge(e).w;
                    l[(local[x], local[x])] += w;
                    l[(local[x], local[y])] -= w;
                }
            }
            ComponentInverse {
                pinv: pseudoinverse(l),
            }
        })
        .collect();

    let is_bridge = bridges(g);
    let resistance = g
        .edges()
        .iter()
        .enumerate()
        .map(|(idx, e)| {
            if is_bridge[idx] {
                return 1.0 / e.w;
            }
            let p = &blocks[comps.label(e.u)].pinv;
            let (a, b) = (local[e.u], local[e.v]);
            p[(a, a)] + p[(b, b)] - 2.0 * p[(a, b)]
        })
        .collect();

    Ok(ResistanceSketch::new(
        Method::Exact,
        None,
        g,
        resistance,
        comps,
        PairData::Pseudoinverse { blocks, local },
    )
    .with_unit_bridges(&is_bridge))
}
