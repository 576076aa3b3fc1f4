use nalgebra::DMatrix;

use super::WeightedGraph;

/// Sparse symmetric graph Laplacian `L = D - A` in CSR form.
///
/// Every row stores its diagonal entry followed by the off-diagonal entries
/// in increasing column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

pub fn laplacian(g: &WeightedGraph) -> Laplacian {
    let n = g.n();
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut cols = Vec::with_capacity(n + 2 * g.m());
    let mut vals = Vec::with_capacity(n + 2 * g.m());
    row_ptr.push(0);
    for x in 0..n {
        cols.push(x);
        vals.push(g.weighted_degree(x));
        for &(y, e) in g.neighbors(x) {
            cols.push(y);
            vals.push(-g.edge(e).w);
        }
        row_ptr.push(cols.len());
    }
    Laplacian {
        n,
        row_ptr,
        cols,
        vals,
    }
}

impl Laplacian {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn diagonal(&self, x: usize) -> f64 {
        self.vals[self.row_ptr[x]]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()]
            .iter()
            .zip(&self.vals[range])
            .find(|(&c, _)| c == j)
            .map_or(0.0, |(_, &v)| v)
    }

    /// `y = L x`.
    pub fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let range = self.row_ptr[i]..self.row_ptr[i + 1];
            *yi = self.cols[range.clone()]
                .iter()
                .zip(&self.vals[range])
                .map(|(&c, &v)| v * x[c])
                .sum();
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_into(x, &mut y);
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.cols[k])] = self.vals[k];
            }
        }
        m
    }
}
