//! Stationary distribution of a [`Ctmc`].
//!
//! [`steady_state_gth`] is the default: Grassmann–Taksar–Heyman elimination,
//! which never subtracts like-signed quantities and so stays accurate on the
//! stiff chains produced by availability models (repair rates ~10⁵ times the
//! failure rates). [`steady_state_iterative`] is a Gauss–Seidel cross-check.

use serde::Serialize;

use crate::statespace::Ctmc;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Gth,
    Iterative,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Gth => "gth",
            Method::Iterative => "iter",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub distribution: Vec<f64>,
    pub method: Method,
    /// Max-norm of `π·Q`.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("chain is not irreducible (state {0} has no path back)")]
    NotIrreducible(usize),
    #[error("no convergence after {iterations} iterations (last change {last_change:e})")]
    NotConverged { iterations: usize, last_change: f64 },
    #[error("empty chain")]
    Empty,
}

/// GTH elimination on a dense copy of the generator.
///
/// Rows and columns are eliminated from the last state down; only nonzero
/// entries of the pivot row and column are visited, so cost tracks fill-in.
pub fn steady_state_gth(c: &Ctmc) -> Result<SteadyState, SolverError> {
    let n = c.size();
    if n == 0 {
        return Err(SolverError::Empty);
    }
    let mut a = vec![0.0f64; n * n];
    for i in 0..n {
        for &(j, r) in c.generator.row(i) {
            a[i * n + j] = r;
        }
    }

    let mut col_nz = Vec::with_capacity(n);
    let mut row_nz = Vec::with_capacity(n);
    for k in (1..n).rev() {
        let s: f64 = a[k * n..k * n + k].iter().sum();
        if s <= 0.0 {
            return Err(SolverError::NotIrreducible(k));
        }
        col_nz.clear();
        row_nz.clear();
        for i in 0..k {
            if a[i * n + k] != 0.0 {
                a[i * n + k] /= s;
                col_nz.push(i);
            }
            if a[k * n + i] != 0.0 {
                row_nz.push(i);
            }
        }
        for &i in &col_nz {
            let aik = a[i * n + k];
            for &j in &row_nz {
                if j != i {
                    a[i * n + j] += aik * a[k * n + j];
                }
            }
        }
    }

    let mut pi = vec![0.0; n];
    pi[0] = 1.0;
    for j in 1..n {
        pi[j] = (0..j).map(|i| pi[i] * a[i * n + j]).sum();
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|p| *p /= total);

    let residual = c.generator.residual(&pi);
    Ok(SteadyState {
        distribution: pi,
        method: Method::Gth,
        residual,
        iterations: 0,
    })
}

/// Gauss–Seidel sweeps on `πQ = 0`, renormalizing after each sweep.
/// Converged when the max-norm change between sweeps drops below `tol`.
pub fn steady_state_iterative(
    c: &Ctmc,
    tol: f64,
    max_iter: usize,
) -> Result<SteadyState, SolverError> {
    let n = c.size();
    if n == 0 {
        return Err(SolverError::Empty);
    }
    let incoming = c.generator.incoming();
    for j in 0..n {
        if c.generator.diagonal(j) == 0.0 && n > 1 {
            return Err(SolverError::NotIrreducible(j));
        }
    }
    let mut pi = vec![1.0 / n as f64; n];
    let mut last_change = f64::INFINITY;
    for it in 1..=max_iter {
        last_change = 0.0;
        let before = pi.clone();
        for j in 0..n {
            let inflow: f64 = incoming[j].iter().map(|&(i, r)| pi[i] * r).sum();
            let d = -c.generator.diagonal(j);
            pi[j] = if d > 0.0 { inflow / d } else { pi[j] };
        }
        let total: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|p| *p /= total);
        for (new, old) in pi.iter().zip(&before) {
            last_change = last_change.max((new - old).abs());
        }
        if last_change < tol {
            let residual = c.generator.residual(&pi);
            return Ok(SteadyState {
                distribution: pi,
                method: Method::Iterative,
                residual,
                iterations: it,
            });
        }
    }
    Err(SolverError::NotConverged {
        iterations: max_iter,
        last_change,
    })
}

pub fn solve(c: &Ctmc, method: Method, tol: f64, max_iter: usize) -> Result<SteadyState, SolverError> {
    match method {
        Method::Gth => steady_state_gth(c),
        Method::Iterative => steady_state_iterative(c, tol, max_iter),
    }
}

/// `1 − Σ πᵢ·rewardᵢ`, clamped to `[0, 1]`.
///
/// Summed over down states directly rather than as `1 − availability`, so
/// tiny unavailabilities keep their relative precision.
pub fn unavailability(c: &Ctmc, s: &SteadyState) -> f64 {
    let down: f64 = s
        .distribution
        .iter()
        .zip(&c.reward)
        .map(|(p, r)| p * (1.0 - r))
        .sum();
    let total: f64 = s.distribution.iter().sum();
    (down / total).clamp(0.0, 1.0)
}
