//! JSON formats. Complex numbers are always `[re, im]` pairs and matrices
//! are row-major lists of rows.

use std::path::Path;

use nalgebra::Complex;
use qvar_core::linalg::{checked_hermitian, CMatrix, CVector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub type ComplexGrid = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_grid(m: &CMatrix) -> ComplexGrid {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn grid_to_matrix(grid: &ComplexGrid) -> CliResult<CMatrix> {
    let rows = grid.len();
    if rows == 0 {
        return Err(CliError::Parse("empty matrix".into()));
    }
    for (i, row) in grid.iter().enumerate() {
        if row.len() != rows {
            return Err(CliError::Parse(format!(
                "row {i} has {} entries, expected {rows}",
                row.len()
            )));
        }
    }
    Ok(CMatrix::from_fn(rows, rows, |i, j| {
        Complex::new(grid[i][j][0], grid[i][j][1])
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableFile {
    pub n: usize,
    pub observables: Vec<ComplexGrid>,
}

impl ObservableFile {
    pub fn from_matrices(n: usize, matrices: &[CMatrix]) -> Self {
        Self {
            n,
            observables: matrices.iter().map(matrix_to_grid).collect(),
        }
    }

    /// Parses every matrix, checks its shape against `n` and Hermiticity
    /// (symmetrizing within tolerance).
    pub fn matrices(&self) -> CliResult<Vec<CMatrix>> {
        if self.observables.is_empty() {
            return Err(CliError::Input(qvar_core::Error::EmptyObservables));
        }
        self.observables
            .iter()
            .map(|g| {
                let m = grid_to_matrix(g)?;
                if m.nrows() != self.n {
                    return Err(CliError::Input(qvar_core::Error::DimensionMismatch {
                        expected: self.n,
                        got: m.nrows(),
                    }));
                }
                Ok(checked_hermitian(&m)?)
            })
            .collect()
    }

    /// Matrices exactly as written, without symmetrization.
    pub fn raw_matrices(&self) -> CliResult<Vec<CMatrix>> {
        self.observables.iter().map(grid_to_matrix).collect()
    }
}

/// Bipartite state: either a density matrix or a state vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: [usize; 2],
    #[serde(default)]
    pub rho: Option<ComplexGrid>,
    #[serde(default)]
    pub psi: Option<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn state(&self) -> CliResult<qvar_core::entanglement::BipartiteState> {
        use qvar_core::entanglement::BipartiteState;
        let dims = (self.dims[0], self.dims[1]);
        match (&self.rho, &self.psi) {
            (Some(rho), None) => Ok(BipartiteState::new(dims, grid_to_matrix(rho)?)?),
            (None, Some(psi)) => {
                let v =
                    CVector::from_iterator(psi.len(), psi.iter().map(|z| Complex::new(z[0], z[1])));
                Ok(BipartiteState::pure(dims, &v)?)
            }
            _ => Err(CliError::Parse(
                "state file needs exactly one of `rho` or `psi`".into(),
            )),
        }
    }
}

/// Local observables for the separability test: `A_i` act on the first
/// factor, `B_i` on the second.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalPairsFile {
    pub first: ObservableFile,
    pub second: ObservableFile,
}

pub fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> CliResult<T> {
    Ok(serde_json::from_slice(bytes)?)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_round_trip() {
        let m = CMatrix::from_fn(3, 3, |i, j| Complex::new(i as f64 - 0.25, j as f64 * 1e-17));
        assert_eq!(grid_to_matrix(&matrix_to_grid(&m)).unwrap(), m);
    }

    #[test]
    fn ragged_grids_are_rejected() {
        let g = vec![vec![[0.0, 0.0]; 2], vec![[0.0, 0.0]; 1]];
        assert!(matches!(grid_to_matrix(&g), Err(CliError::Parse(_))));
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn non_hermitian_maps_to_exit_three() {
        let f = ObservableFile {
            n: 2,
            observables: vec![vec![
                vec![[0.0, 0.0], [1.0, 0.0]],
                vec![[0.0, 0.0], [0.0, 0.0]],
            ]],
        };
        assert_eq!(f.matrices().unwrap_err().exit_code(), 3);
        let f = ObservableFile {
            n: 3,
            observables: vec![vec![vec![[0.0, 0.0]]]],
        };
        assert_eq!(f.matrices().unwrap_err().exit_code(), 2);
    }
}
