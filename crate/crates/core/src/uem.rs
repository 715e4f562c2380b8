//! The unified extended matrix
//!
//! ```text
//! P̄_{m,n}(t) = m D̄(t) + (2n - 1)(m - 1) Ā(t),   m, n ∈ [0, 1]
//! ```
//!
//! which interpolates the extended adjacency (`m = n = 0`), half the extended
//! Laplacian (`m = 0.5, n = 1`) and the extended degree matrix (`m = 1`).

use nalgebra::DMatrix;

use crate::diffusion::ExtendedMatrices;
use crate::error::{Error, Result};

/// Slack on the positive-semidefiniteness bounds so lattice points that sit
/// exactly on a bound are not lost to rounding.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UemParams {
    pub m: f64,
    pub n: f64,
    pub t: u32,
    pub rho: f64,
}

impl UemParams {
    pub fn new(m: f64, n: f64, t: u32, rho: f64) -> Result<Self> {
        check_unit("m", m)?;
        check_unit("n", n)?;
        if t == 0 {
            return Err(Error::InvalidUemParameter { name: "t", value: 0.0 });
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidUemParameter { name: "rho", value: rho });
        }
        Ok(Self { m, n, t, rho })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UemMatrix {
    pub params: UemParams,
    pub entries: DMatrix<f64>,
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidUemParameter { name, value })
    }
}

pub fn build_uem(ext: &ExtendedMatrices, m: f64, n: f64) -> Result<UemMatrix> {
    let params = UemParams::new(m, n, ext.t, ext.rho)?;
    let a_coef = (2.0 * n - 1.0) * (m - 1.0);
    let entries = ext.d_bar.zip_map(&ext.a_bar, |d, a| m * d + a_coef * a);
    Ok(UemMatrix { params, entries })
}

/// Sufficient condition for `P̄_{m,n}(t)` to be positive semidefinite:
/// `(2m - 1) / (2(m - 1)) <= n <= 1 / (2(1 - m))`. At `m = 1` both bounds
/// are undefined and the matrix is `D̄(t)`, which is PSD, so the condition
/// holds.
pub fn psd_condition_holds(m: f64, n: f64) -> bool {
    if m >= 1.0 {
        return true;
    }
    let lower = (2.0 * m - 1.0) / (2.0 * (m - 1.0));
    let upper = 1.0 / (2.0 * (1.0 - m));
    lower - BOUND_SLACK <= n && n <= upper + BOUND_SLACK
}

/// `M̄(t) = D̄(t) - (2n - 1) Ā(t)`. It is positive semidefinite for every
/// `n ∈ [0, 1]`. Note that the slope of `P̄_{m,n}(t)` in `m` is
/// `D̄(t) + (2n - 1) Ā(t)`, i.e. `weyl_gap_matrix(ext, 1 - n)`, which is PSD
/// for the same reason; either way the sorted eigenvalues are nondecreasing
/// in `m`.
pub fn weyl_gap_matrix(ext: &ExtendedMatrices, n: f64) -> Result<DMatrix<f64>> {
    check_unit("n", n)?;
    let coef = 2.0 * n - 1.0;
    Ok(ext.d_bar.zip_map(&ext.a_bar, |d, a| d - coef * a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::extended_adjacency;
    use crate::graph::{consensus_matrix, Graph};
    use crate::spectral::decompose;
    use alloc::vec;

    fn two_node_ext() -> ExtendedMatrices {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let b = consensus_matrix(&Graph::from_adjacency(vec![[0.0; 2]; 2], a).unwrap()).unwrap();
        extended_adjacency(&b, 1, 0.4).unwrap()
    }

    #[test]
    fn degeneracies() {
        let e = two_node_ext();
        assert_eq!(build_uem(&e, 0.0, 0.0).unwrap().entries, e.a_bar);
        assert_eq!(build_uem(&e, 0.5, 1.0).unwrap().entries * 2.0, e.l_bar);
        for n in [0.0, 0.3, 1.0] {
            assert_eq!(build_uem(&e, 1.0, n).unwrap().entries, e.d_bar);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let e = two_node_ext();
        assert!(matches!(build_uem(&e, 1.1, 0.0), Err(Error::InvalidUemParameter { name: "m", .. })));
        assert!(matches!(build_uem(&e, 0.0, -0.1), Err(Error::InvalidUemParameter { name: "n", .. })));
        assert!(UemParams::new(0.5, 0.5, 1, 0.0).is_err());
    }

    #[test]
    fn psd_condition_examples() {
        assert!(psd_condition_holds(0.5, 1.0));
        assert!(!psd_condition_holds(0.0, 0.0));
        assert!(psd_condition_holds(0.0, 0.5));
        for n in [0.0, 0.4, 1.0] {
            assert!(psd_condition_holds(1.0, n));
        }
        // m = 0.2: bounds are 0.375 and 0.625.
        assert!(!psd_condition_holds(0.2, 0.3));
        assert!(psd_condition_holds(0.2, 0.6));
        assert!(!psd_condition_holds(0.2, 0.7));
    }

    #[test]
    fn weyl_gap_two_node() {
        let e = two_node_ext();
        assert_eq!(weyl_gap_matrix(&e, 0.5).unwrap(), e.d_bar);
        let m = weyl_gap_matrix(&e, 1.0).unwrap();
        let a = e.a_bar[(0, 1)];
        assert!((a - 0.9653).abs() < 1e-4);
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[a, -a, -a, a]));
        let b = decompose(&m).unwrap();
        assert!(b.eigenvalues()[0].abs() < 1e-12);
        assert!((b.eigenvalues()[1] - 2.0 * a).abs() < 1e-12);
        assert!((b.eigenvalues()[1] - 1.9306).abs() < 1e-4);
    }

    #[test]
    fn linear_in_m() {
        let e = two_node_ext();
        let gap = weyl_gap_matrix(&e, 1.0 - 0.3).unwrap();
        let lo = build_uem(&e, 0.2, 0.3).unwrap().entries;
        let hi = build_uem(&e, 0.7, 0.3).unwrap().entries;
        assert!(((hi - lo) - gap * 0.5).abs().max() < 1e-12);
    }
}
