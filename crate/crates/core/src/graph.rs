//! Graph representation, k-NN construction and the classical matrices
//! (adjacency, degree, Laplacian) plus the consensus matrix `Z = I - εL`
//! that seeds the diffusion framework.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// 2-D node position.
pub type Point = [f64; 2];

/// How a k-NN graph was produced; carried so it can be written back out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnnProvenance {
    pub k: usize,
    pub seed: u64,
}

/// Undirected graph with nonnegative symmetric weights and no self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    coords: Vec<Point>,
    adjacency: DMatrix<f64>,
    provenance: Option<KnnProvenance>,
}

impl Graph {
    /// Validates symmetry, zero diagonal and nonnegativity.
    pub fn from_adjacency(coords: Vec<Point>, adjacency: DMatrix<f64>) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no nodes"));
        }
        if adjacency.nrows() != n || adjacency.ncols() != n {
            return Err(Error::InvalidGraph("adjacency shape does not match node count"));
        }
        for i in 0..n {
            if adjacency[(i, i)] != 0.0 {
                return Err(Error::InvalidGraph("self-loop on the diagonal"));
            }
            for j in 0..n {
                let w = adjacency[(i, j)];
                if !(w.is_finite() && w >= 0.0) {
                    return Err(Error::InvalidGraph("negative or non-finite weight"));
                }
                if w != adjacency[(j, i)] {
                    return Err(Error::InvalidGraph("adjacency is not symmetric"));
                }
            }
        }
        Ok(Self { coords, adjacency, provenance: None })
    }

    pub fn with_provenance(mut self, provenance: KnnProvenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn n_nodes(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    pub fn provenance(&self) -> Option<KnnProvenance> {
        self.provenance
    }

    /// Edges `(i, j, w)` with `i < j` and `w > 0`, row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n_nodes();
        (0..n).flat_map(move |i| {
            (i + 1..n).filter_map(move |j| {
                let w = self.adjacency[(i, j)];
                (w > 0.0).then_some((i, j, w))
            })
        })
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_nodes()).filter(move |&j| self.adjacency[(i, j)] > 0.0)
    }

    pub fn is_binary(&self) -> bool {
        self.adjacency.iter().all(|&w| w == 0.0 || w == 1.0)
    }

    pub fn degrees(&self) -> DegreeMatrix {
        let diag = self.adjacency.row_iter().map(|r| r.sum()).collect();
        DegreeMatrix { diag }
    }

    /// Δ: neighbor count for binary graphs (equal to the row sum), weighted
    /// row sum otherwise.
    pub fn max_degree(&self) -> f64 {
        self.degrees().diag.iter().copied().fold(0.0, f64::max)
    }

    /// BFS from node 0 reaches every node.
    pub fn is_connected(&self) -> bool {
        let n = self.n_nodes();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }
}

/// Diagonal of the degree matrix `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeMatrix {
    pub diag: Vec<f64>,
}

impl DegreeMatrix {
    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diag))
    }
}

/// Binary k-NN graph with union symmetrization: `(i, j)` is an edge iff `j`
/// is among the `k` nearest neighbors of `i` or vice versa. Distance ties go
/// to the lower node index.
///
/// Returns [`Error::DisconnectedGraph`] when the result has more than one
/// component; the caller is expected to resample coordinates.
pub fn build_knn_graph(coords: &[Point], k: usize, seed: u64) -> Result<Graph> {
    let n = coords.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidK { k, n_nodes: n });
    }
    if let Some(i) = coords.iter().position(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(Error::NonFiniteCoordinate(i));
    }
    let mut adjacency = DMatrix::zeros(n, n);
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
    for i in 0..n {
        order.clear();
        order.extend((0..n).filter(|&j| j != i).map(|j| {
            let dx = coords[i][0] - coords[j][0];
            let dy = coords[i][1] - coords[j][1];
            (dx * dx + dy * dy, j)
        }));
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, j) in order.iter().take(k) {
            adjacency[(i, j)] = 1.0;
            adjacency[(j, i)] = 1.0;
        }
    }
    let graph = Graph { coords: coords.to_vec(), adjacency, provenance: Some(KnnProvenance { k, seed }) };
    if !graph.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    Ok(graph)
}

/// `L = D - A`.
pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    let mut l = -g.adjacency.clone();
    for (i, d) in g.degrees().diag.into_iter().enumerate() {
        l[(i, i)] = d;
    }
    l
}

/// Symmetric doubly-stochastic consensus matrix `Z = I - εL`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsensusMatrix {
    entries: DMatrix<f64>,
    epsilon: f64,
}

impl ConsensusMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }
}

/// `Z = I - εL` with `ε = 1/(1.25 Δ)`, so every diagonal entry is at least 0.2.
pub fn consensus_matrix(g: &Graph) -> Result<ConsensusMatrix> {
    let delta = g.max_degree();
    if delta <= 0.0 || !g.is_connected() {
        return Err(Error::IrreducibilityViolated);
    }
    let epsilon = 1.0 / (1.25 * delta);
    let n = g.n_nodes();
    let mut entries = laplacian(g) * -epsilon;
    for i in 0..n {
        entries[(i, i)] += 1.0;
    }
    Ok(ConsensusMatrix { entries, epsilon })
}
