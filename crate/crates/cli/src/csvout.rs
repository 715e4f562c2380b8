//! CSV writers. Floats use Rust's shortest round-trip formatting, so the
//! files carry full precision and are byte-stable across runs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use uemgft_core::spectral::{SpectralBasis, SpectralCoefficients};

use crate::error::{Error, Result};

/// Dense row-major matrix, no header.
pub fn matrix_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `eigenvalue,coefficient` pairs in ascending eigenvalue order.
pub fn spectrum_csv(basis: &SpectralBasis, coeffs: &SpectralCoefficients) -> String {
    let mut out = String::from("eigenvalue,coefficient\n");
    for (l, c) in basis.eigenvalues().iter().zip(coeffs.values()) {
        writeln!(out, "{l},{c}").unwrap();
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Blank cell for absent values.
pub(crate) fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
