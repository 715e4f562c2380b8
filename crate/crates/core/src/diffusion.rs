//! Diffusion distances over the consensus matrix and the scale-dependent
//! extended adjacency, degree and Laplacian matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::ConsensusMatrix;

/// Squared diffusion distances at scale `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionDistances {
    pub t: u32,
    pub d2: DMatrix<f64>,
}

/// `B^t` by repeated multiplication, `B^0 = I`.
pub fn matrix_power(b: &DMatrix<f64>, t: u32) -> DMatrix<f64> {
    let n = b.nrows();
    let mut p = DMatrix::identity(n, n);
    for _ in 0..t {
        p = &p * b;
    }
    p
}

/// `d2[i][j] = N Σ_k (B^t[i][k] - B^t[j][k])²`.
pub fn diffusion_distances(b: &ConsensusMatrix, t: u32) -> DiffusionDistances {
    let n = b.n();
    let p = matrix_power(b.entries(), t);
    let mut d2 = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let mut acc = 0.0;
            for k in 0..n {
                let diff = p[(i, k)] - p[(j, k)];
                acc += diff * diff;
            }
            let v = n as f64 * acc;
            d2[(i, j)] = v;
            d2[(j, i)] = v;
        }
    }
    DiffusionDistances { t, d2 }
}

/// `Ā(t)`, `D̄(t)` and `L̄(t) = D̄(t) - Ā(t)` for one `(t, ρ)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedMatrices {
    pub t: u32,
    pub rho: f64,
    pub a_bar: DMatrix<f64>,
    pub d_bar: DMatrix<f64>,
    pub l_bar: DMatrix<f64>,
}

impl ExtendedMatrices {
    pub fn n(&self) -> usize {
        self.a_bar.nrows()
    }
}

/// `Ā_ij(t) = B_ij + exp(-D_t²(i, j) / (ρN))` off the diagonal, zero on it.
pub fn extended_adjacency(b: &ConsensusMatrix, t: u32, rho: f64) -> Result<ExtendedMatrices> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidUemParameter { name: "rho", value: rho });
    }
    if t == 0 {
        return Err(Error::InvalidUemParameter { name: "t", value: 0.0 });
    }
    let n = b.n();
    let dist = diffusion_distances(b, t);
    let scale = rho * n as f64;
    let mut a_bar = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = b.entries()[(i, j)] + libm::exp(-dist.d2[(i, j)] / scale);
            a_bar[(i, j)] = v;
            a_bar[(j, i)] = v;
        }
    }
    let mut d_bar = DMatrix::zeros(n, n);
    for i in 0..n {
        d_bar[(i, i)] = a_bar.row(i).sum();
    }
    let l_bar = &d_bar - &a_bar;
    Ok(ExtendedMatrices { t, rho, a_bar, d_bar, l_bar })
}
