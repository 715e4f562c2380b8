//! Symmetric eigendecomposition of a graph shift operator and the graph
//! Fourier transform built on it.
//!
//! Every operator in this crate is real symmetric, so the basis is
//! orthonormal and the inverse transform is the transpose. Eigenvalues are
//! sorted ascending; each eigenvector is signed so that its entry of largest
//! magnitude is positive (ties go to the lowest index).
//!
//! The input is rescaled by a power of two before the solver runs, which
//! makes the decomposition exactly equivariant under power-of-two scaling:
//! `decompose(0.5 * S)` returns the same eigenvectors as `decompose(S)`, bit
//! for bit, and halved eigenvalues.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::gso::GsoSpec;

/// Absolute tolerance on `max |S - S^T|` relative to `max(1, max |S|)`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    source: Option<GsoSpec>,
}

impl SpectralBasis {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `l` pairs with `eigenvalues()[l]`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn source(&self) -> Option<&GsoSpec> {
        self.source.as_ref()
    }

    pub fn with_source(mut self, source: GsoSpec) -> Self {
        self.source = Some(source);
        self
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[self.n() - 1]
    }

    /// Cut-off at relative position `q` of the eigenvalue range,
    /// `λ_min + q (λ_max - λ_min)`.
    pub fn relative_cut(&self, q: f64) -> f64 {
        let (lo, hi) = (self.lambda_min(), self.lambda_max());
        lo + q * (hi - lo)
    }

    /// `U diag(λ) U^T`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let u = &self.eigenvectors;
        let lambda = DMatrix::from_diagonal(&DVector::from_column_slice(&self.eigenvalues));
        u * lambda * u.transpose()
    }
}

/// Spectrum of a graph signal, index-aligned with the basis eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients(pub Vec<f64>);

impl SpectralCoefficients {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest absolute coefficient, 0 for an all-zero spectrum.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }
}

pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub fn decompose(gso: &DMatrix<f64>) -> Result<SpectralBasis> {
    let n = gso.nrows();
    if n == 0 || gso.ncols() != n {
        return Err(Error::LengthMismatch { expected: n, got: gso.ncols() });
    }
    let peak = gso.amax();
    let asym = max_asymmetry(gso);
    if asym > SYMMETRY_TOLERANCE * peak.max(1.0) {
        return Err(Error::NonSymmetricGso(asym));
    }

    // Power-of-two normalization: exact, and identical for any input that
    // differs from `gso` by a power-of-two factor.
    let scale = if peak > 0.0 && peak.is_finite() {
        let (_, exp) = libm::frexp(peak);
        libm::ldexp(1.0, -exp)
    } else {
        1.0
    };
    let scaled = gso * scale;
    let eig = SymmetricEigen::try_new(scaled, f64::EPSILON, MAX_SWEEPS).ok_or(Error::EigenNoConvergence)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(eig.eigenvalues[src] / scale);
        let col = eig.eigenvectors.column(src);
        let mut pivot = 0;
        for i in 1..n {
            if col[i].abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            eigenvectors[(i, dst)] = sign * col[i];
        }
    }
    Ok(SpectralBasis { eigenvalues, eigenvectors, source: None })
}

/// `x̂ = U^T x`.
pub fn gft(basis: &SpectralBasis, x: &[f64]) -> Result<SpectralCoefficients> {
    check_len(basis.n(), x.len())?;
    let u = basis.eigenvectors();
    let coeffs = (0..basis.n())
        .map(|l| u.column(l).iter().zip(x).map(|(a, b)| a * b).sum())
        .collect();
    Ok(SpectralCoefficients(coeffs))
}

/// GFT of every column of `signals` at once, `U^T X`.
pub fn gft_columns(basis: &SpectralBasis, signals: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_len(basis.n(), signals.nrows())?;
    Ok(basis.eigenvectors().tr_mul(signals))
}

/// `x = U x̂`.
pub fn igft(basis: &SpectralBasis, coeffs: &SpectralCoefficients) -> Result<Vec<f64>> {
    check_len(basis.n(), coeffs.len())?;
    let c = DVector::from_column_slice(coeffs.values());
    Ok((basis.eigenvectors() * c).iter().copied().collect())
}

/// Keeps coefficients whose eigenvalue is strictly above `lambda_cut`.
pub fn highpass_filter(basis: &SpectralBasis, coeffs: &SpectralCoefficients, lambda_cut: f64) -> SpectralCoefficients {
    SpectralCoefficients(
        basis
            .eigenvalues()
            .iter()
            .zip(coeffs.values())
            .map(|(&lambda, &c)| if lambda > lambda_cut { c } else { 0.0 })
            .collect(),
    )
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn identity_gives_canonical_basis() {
        let b = decompose(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(b.eigenvalues(), &[1.0; 4]);
        let u = b.eigenvectors();
        // Orthonormal and each column has a single +1 entry.
        for l in 0..4 {
            let col = u.column(l);
            assert_eq!(col.iter().filter(|v| **v == 1.0).count(), 1);
            assert_eq!(col.iter().filter(|v| **v == 0.0).count(), 3);
        }
    }

    #[test]
    fn two_node_laplacian() {
        let l = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let b = decompose(&l).unwrap();
        assert!(b.eigenvalues()[0].abs() < 1e-14);
        assert!((b.eigenvalues()[1] - 2.0).abs() < 1e-14);
        assert!((b.reconstruct() - l).abs().max() < 1e-12);
    }

    #[test]
    fn sign_rule_makes_largest_entry_positive() {
        let s = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let b = decompose(&s).unwrap();
        for col in b.eigenvectors().column_iter() {
            let mut pivot = 0;
            for i in 1..col.len() {
                if col[i].abs() > col[pivot].abs() + 1e-12 {
                    pivot = i;
                }
            }
            assert!(col[pivot] > 0.0);
        }
    }

    #[test]
    fn rejects_asymmetric_input() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(decompose(&s), Err(Error::NonSymmetricGso(_))));
    }

    #[test]
    fn power_of_two_scaling_is_exact() {
        let s = DMatrix::from_row_slice(3, 3, &[1.3, -0.7, 0.1, -0.7, 2.9, -1.1, 0.1, -1.1, 0.4]);
        let a = decompose(&s).unwrap();
        let b = decompose(&(&s * 0.5)).unwrap();
        assert_eq!(a.eigenvectors(), b.eigenvectors());
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues()) {
            assert_eq!(x * 0.5, *y);
        }
    }

    #[test]
    fn gft_of_eigenvector_is_canonical() {
        let s = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let b = decompose(&s).unwrap();
        for l in 0..3 {
            let u: Vec<f64> = b.eigenvectors().column(l).iter().copied().collect();
            let c = gft(&b, &u).unwrap();
            for (i, v) in c.values().iter().enumerate() {
                let want = if i == l { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-12);
            }
        }
        assert_eq!(gft(&b, &[0.0; 3]).unwrap().values(), &[0.0; 3]);
    }

    #[test]
    fn igft_of_canonical_is_eigenvector() {
        let s = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
        let b = decompose(&s).unwrap();
        let x = igft(&b, &SpectralCoefficients(vec![0.0, 1.0, 0.0])).unwrap();
        for i in 0..3 {
            assert_eq!(x[i], b.eigenvectors()[(i, 1)]);
        }
        // All-ones coefficients sum each row of U.
        let ones = igft(&b, &SpectralCoefficients(vec![1.0; 3])).unwrap();
        for i in 0..3 {
            let mut row_sum = 0.0;
            for l in 0..3 {
                row_sum += b.eigenvectors()[(i, l)];
            }
            assert!((ones[i] - row_sum).abs() < 1e-15);
        }
    }

    #[test]
    fn length_mismatch() {
        let b = decompose(&DMatrix::identity(3, 3)).unwrap();
        assert_eq!(gft(&b, &[1.0]), Err(Error::LengthMismatch { expected: 3, got: 1 }));
        assert!(igft(&b, &SpectralCoefficients(vec![1.0; 4])).is_err());
    }

    #[test]
    fn highpass_rules() {
        let l = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let mut b = decompose(&l).unwrap();
        b.eigenvalues = vec![0.0, 2.0];
        let c = SpectralCoefficients(vec![3.0, 5.0]);
        assert_eq!(highpass_filter(&b, &c, 1.0).values(), &[0.0, 5.0]);
        assert_eq!(highpass_filter(&b, &c, -0.5).values(), &[3.0, 5.0]);
        assert_eq!(highpass_filter(&b, &c, 2.0).values(), &[0.0, 0.0]);
        // Strict inequality at the cut.
        assert_eq!(highpass_filter(&b, &c, 0.0).values(), &[0.0, 5.0]);
    }
}
