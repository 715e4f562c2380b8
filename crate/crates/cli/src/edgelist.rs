//! Plain-text graph format.
//!
//! ```text
//! n_nodes k seed
//! i j weight        # one line per undirected edge, 0-based, i < j
//! coord i x y       # one line per node
//! ```
//!
//! Graphs not built by k-NN are written with `k = 0` and `seed = 0`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use uemgft_core::graph::{Graph, KnnProvenance, Point};

use crate::error::{Error, Result};

pub fn format_edge_list(g: &Graph) -> String {
    let (k, seed) = g.provenance().map_or((0, 0), |p| (p.k, p.seed));
    let mut out = format!("{} {} {}\n", g.n_nodes(), k, seed);
    for (i, j, w) in g.edges() {
        writeln!(out, "{i} {j} {w}").unwrap();
    }
    for (i, p) in g.coords().iter().enumerate() {
        writeln!(out, "coord {i} {} {}", p[0], p[1]).unwrap();
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 3 {
        return Err(Error::parse(1, "header must be `n_nodes k seed`"));
    }
    let n: usize = parse_field(head[0], 1)?;
    let k: usize = parse_field(head[1], 1)?;
    let seed: u64 = parse_field(head[2], 1)?;

    let mut adjacency = DMatrix::zeros(n, n);
    let mut coords: Vec<Option<Point>> = vec![None; n];
    for (idx, line) in lines {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["coord", i, x, y] => {
                let i: usize = parse_field(i, lineno)?;
                if i >= n {
                    return Err(Error::parse(lineno, format!("node {i} out of range")));
                }
                coords[i] = Some([parse_field(x, lineno)?, parse_field(y, lineno)?]);
            }
            [i, j, w] => {
                let (i, j): (usize, usize) = (parse_field(i, lineno)?, parse_field(j, lineno)?);
                let w: f64 = parse_field(w, lineno)?;
                if i >= n || j >= n {
                    return Err(Error::parse(lineno, format!("edge ({i}, {j}) out of range")));
                }
                adjacency[(i, j)] = w;
                adjacency[(j, i)] = w;
            }
            _ => return Err(Error::parse(lineno, "expected `i j weight` or `coord i x y`")),
        }
    }
    let coords = coords
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| Error::parse(0, format!("missing coordinates for node {i}"))))
        .collect::<Result<Vec<_>>>()?;
    let g = Graph::from_adjacency(coords, adjacency)?;
    Ok(if k > 0 { g.with_provenance(KnnProvenance { k, seed }) } else { g })
}

pub fn write_edge_list(path: &Path, g: &Graph) -> Result<()> {
    fs::write(path, format_edge_list(g)).map_err(|e| Error::io(path, e))
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    parse_edge_list(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| Error::parse(line, format!("cannot parse `{s}`")))
}
