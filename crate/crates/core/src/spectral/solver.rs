//! Jacobi-preconditioned conjugate gradient for Laplacian systems.
//!
//! `L` is singular (one null vector per component). The iteration is only
//! run on right-hand sides that sum to zero on every component, which keeps
//! the system consistent; the returned solution is defined up to a constant
//! per component.

use crate::error::{Error, Result};
use crate::graph::Laplacian;

#[derive(Debug, Clone, Copy)]
pub struct SolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `L x = b` to `‖b - Lx‖ ≤ rel_tol·‖b‖` within `max_iter` steps.
pub fn solve(
    lap: &Laplacian,
    b: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, SolveStats)> {
    let n = lap.n();
    debug_assert_eq!(b.len(), n);
    let b_norm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok((
            x,
            SolveStats {
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }
    let inv_diag: Vec<f64> = (0..n)
        .map(|i| {
            let d = lap.diagonal(i);
            if d > 0.0 {
                1.0 / d
            } else {
                1.0
            }
        })
        .collect();

    let target = rel_tol * b_norm;
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut lp = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut r_norm = b_norm;

    for iter in 1..=max_iter {
        lap.mul_into(&p, &mut lp);
        let curvature = dot(&p, &lp);
        if curvature <= 0.0 {
            // p lies in the null space; nothing left to reduce.
            break;
        }
        let alpha = rz / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * lp[i];
        }
        r_norm = dot(&r, &r).sqrt();
        if r_norm <= target {
            return Ok((
                x,
                SolveStats {
                    iterations: iter,
                    relative_residual: r_norm / b_norm,
                },
            ));
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        residual: r_norm / b_norm,
    })
}
