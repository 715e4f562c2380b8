//! Graph shift operators compared by the detector: Laplacian, extended
//! Laplacian, inverse-hop-distance shortest-path operators, the consensus
//! (Markov) matrix and the unified extended matrix.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use nalgebra::DMatrix;

use crate::diffusion::extended_adjacency;
use crate::error::{Error, Result};
use crate::graph::{consensus_matrix, laplacian, Graph};
use crate::uem::{build_uem, UemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GsoKind {
    Laplacian,
    ExtendedLaplacian,
    ShortestPath,
    Markov,
    Uem,
}

impl GsoKind {
    pub fn name(self) -> &'static str {
        match self {
            GsoKind::Laplacian => "laplacian",
            GsoKind::ExtendedLaplacian => "extended_laplacian",
            GsoKind::ShortestPath => "shortest_path",
            GsoKind::Markov => "markov",
            GsoKind::Uem => "uem",
        }
    }
}

impl FromStr for GsoKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "laplacian" => GsoKind::Laplacian,
            "extended_laplacian" => GsoKind::ExtendedLaplacian,
            "shortest_path" => GsoKind::ShortestPath,
            "markov" => GsoKind::Markov,
            "uem" => GsoKind::Uem,
            _ => return Err(Error::UnknownGsoKind),
        })
    }
}

/// One fully parametrized operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GsoSpec {
    Laplacian,
    ExtendedLaplacian { t: u32, rho: f64 },
    ShortestPath { max_hops: usize },
    Markov,
    Uem(UemParams),
}

impl GsoSpec {
    pub fn kind(&self) -> GsoKind {
        match self {
            GsoSpec::Laplacian => GsoKind::Laplacian,
            GsoSpec::ExtendedLaplacian { .. } => GsoKind::ExtendedLaplacian,
            GsoSpec::ShortestPath { .. } => GsoKind::ShortestPath,
            GsoSpec::Markov => GsoKind::Markov,
            GsoSpec::Uem(_) => GsoKind::Uem,
        }
    }

    pub fn rho(&self) -> Option<f64> {
        match self {
            GsoSpec::ExtendedLaplacian { rho, .. } => Some(*rho),
            GsoSpec::Uem(p) => Some(p.rho),
            _ => None,
        }
    }

    pub fn t(&self) -> Option<u32> {
        match self {
            GsoSpec::ExtendedLaplacian { t, .. } => Some(*t),
            GsoSpec::Uem(p) => Some(p.t),
            _ => None,
        }
    }
}

/// Method labels used in result tables and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Gft,
    Df1,
    Df2,
    Sp2,
    Sp3,
    Mrk,
    Uem,
}

impl Method {
    pub const ALL: [Method; 7] = [Method::Gft, Method::Df1, Method::Df2, Method::Sp2, Method::Sp3, Method::Mrk, Method::Uem];

    pub fn id(self) -> &'static str {
        match self {
            Method::Gft => "gft",
            Method::Df1 => "df1",
            Method::Df2 => "df2",
            Method::Sp2 => "sp2",
            Method::Sp3 => "sp3",
            Method::Mrk => "mrk",
            Method::Uem => "uem",
        }
    }

    /// Operators whose hyperparameters are only `(λ_cut, β)`, or `None` for
    /// methods that also sweep `ρ` (and `m`, `n` for UEM).
    pub fn fixed_spec(self) -> Option<GsoSpec> {
        match self {
            Method::Gft => Some(GsoSpec::Laplacian),
            Method::Sp2 => Some(GsoSpec::ShortestPath { max_hops: 2 }),
            Method::Sp3 => Some(GsoSpec::ShortestPath { max_hops: 3 }),
            Method::Mrk => Some(GsoSpec::Markov),
            Method::Df1 | Method::Df2 | Method::Uem => None,
        }
    }

    /// Diffusion scale of the sGFT baselines.
    pub fn diffusion_scale(self) -> Option<u32> {
        match self {
            Method::Df1 => Some(1),
            Method::Df2 => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.id() == s).ok_or(Error::UnknownGsoKind)
    }
}

/// All-pairs hop distances by BFS; `None` for unreachable pairs.
pub fn hop_distances(g: &Graph) -> Vec<Vec<Option<usize>>> {
    let n = g.n_nodes();
    (0..n)
        .map(|src| {
            let mut dist = vec![None; n];
            dist[src] = Some(0);
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                let du = dist[u].unwrap_or(0);
                for v in g.neighbors(u) {
                    if dist[v].is_none() {
                        dist[v] = Some(du + 1);
                        queue.push_back(v);
                    }
                }
            }
            dist
        })
        .collect()
}

/// `1/d(i, j)` for hop distance `1 <= d <= max_hops`, zero elsewhere.
pub fn shortest_path_gso(g: &Graph, max_hops: usize) -> DMatrix<f64> {
    let n = g.n_nodes();
    let hops = hop_distances(g);
    DMatrix::from_fn(n, n, |i, j| match hops[i][j] {
        Some(d) if d >= 1 && d <= max_hops => 1.0 / d as f64,
        _ => 0.0,
    })
}

pub fn build_gso(g: &Graph, spec: &GsoSpec) -> Result<DMatrix<f64>> {
    match *spec {
        GsoSpec::Laplacian => Ok(laplacian(g)),
        GsoSpec::Markov => Ok(consensus_matrix(g)?.entries().clone()),
        GsoSpec::ShortestPath { max_hops } => Ok(shortest_path_gso(g, max_hops)),
        GsoSpec::ExtendedLaplacian { t, rho } => Ok(extended_adjacency(&consensus_matrix(g)?, t, rho)?.l_bar),
        GsoSpec::Uem(p) => {
            let ext = extended_adjacency(&consensus_matrix(g)?, p.t, p.rho)?;
            Ok(build_uem(&ext, p.m, p.n)?.entries)
        }
    }
}
