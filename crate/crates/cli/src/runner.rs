//! Experiment orchestration.
//!
//! Each run draws a graph and train/test datasets from `seed + run_index`,
//! then for every selected method cross-validates the detector on the
//! training set and scores F1 on the test set. UEM is evaluated per lattice
//! cell `(t, m, n)`: each cell cross-validates `(ρ, λ_cut, β)` like the sGFT
//! baselines do, which yields one test F1 per cell and run (the heatmaps).
//! The reported UEM score is the cell with the best mean F1 across runs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::index;
use rayon::prelude::*;
use uemgft_core::datagen::{
    injected_dataset, random_sensor_graph, rng_from_seed, uniform_dataset, wave_dataset, ExperimentRng,
    WaveSignalState,
};
use uemgft_core::detector::{evaluate, f1_score, grid_search_cv, mean_std, CvOutcome, DetectorGrid, LabeledDataset};
use uemgft_core::diffusion::{extended_adjacency, ExtendedMatrices};
use uemgft_core::graph::{build_knn_graph, consensus_matrix, Graph, Point};
use uemgft_core::gso::{build_gso, GsoSpec, Method};
use uemgft_core::spectral::{decompose, gft, SpectralBasis};
use uemgft_core::uem::{build_uem, UemParams};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::csvout::{matrix_csv, opt, spectrum_csv, write_file};
use crate::edgelist::format_edge_list;
use crate::error::{Error, Result};
use crate::station::{ingest_station_csv, StationSeries};

/// `m` and `n` lattice: 0.0, 0.1, ..., 1.0.
pub fn lattice() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

const GRAPH_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UemCell {
    pub t: u32,
    pub m: f64,
    pub n: f64,
}

impl UemCell {
    /// Order used to break exact score ties: larger m, then larger n, then
    /// smaller t. Cells such as `(m, 0.5)` and `(1, n)` are positive
    /// multiples of the same matrix, and this picks `m = 1` for all of them.
    fn precedes(&self, other: &UemCell) -> bool {
        (self.m, self.n, other.t) > (other.m, other.n, self.t)
    }
}

/// Index of the highest score; ties go to the preceding cell.
fn argmax_cell(cells: &[UemCell], score: impl Fn(usize) -> f64) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 0..cells.len() {
        let better = match best {
            None => true,
            Some(b) => score(i) > score(b) || (score(i) == score(b) && cells[i].precedes(&cells[b])),
        };
        if better {
            best = Some(i);
        }
    }
    best
}

/// Hyperparameters chosen by cross-validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub rho: Option<f64>,
    pub lambda_cut_q: f64,
    pub beta: f64,
    pub mean_cv_f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub method: Method,
    pub test_f1: f64,
    pub selection: Selection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub cell: UemCell,
    pub test_f1: f64,
    pub selection: Selection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub method: Method,
    pub spec: GsoSpec,
    pub lambda_cut_q: f64,
    pub beta: f64,
    pub mean_cv_f1: f64,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub run: usize,
    pub seed: u64,
    pub graph: Graph,
    /// Non-UEM methods in configuration order.
    pub baselines: Vec<MethodResult>,
    /// UEM cells ordered by `t`, then `m`, then `n`.
    pub cells: Vec<CellResult>,
    /// `(file stem, csv)` spectra of the first test signal, run 0 only.
    pub spectra: Vec<(String, String)>,
    /// Every cross-validation lattice point, only when requested.
    pub grid: Vec<GridRow>,
}

impl RunResult {
    pub fn baseline(&self, method: Method) -> Option<&MethodResult> {
        self.baselines.iter().find(|r| r.method == method)
    }

    pub fn cell(&self, t: u32, m: f64, n: f64) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.cell.t == t && c.cell.m == m && c.cell.n == n)
    }

    /// Cell with the highest mean cross-validation F1.
    pub fn winning_cell(&self) -> Option<&CellResult> {
        winning_index(&self.cells).map(|i| &self.cells[i])
    }
}

fn winning_index(cells: &[CellResult]) -> Option<usize> {
    let keys: Vec<UemCell> = cells.iter().map(|c| c.cell).collect();
    argmax_cell(&keys, |i| cells[i].selection.mean_cv_f1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: Method,
    pub mean_f1: f64,
    pub std_f1: f64,
    pub runs: usize,
    /// UEM only: cell with the best mean F1.
    pub best: Option<UemCell>,
    /// UEM only: most frequent per-run winning cell.
    pub modal: Option<UemCell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapPoint {
    pub m: f64,
    pub n: f64,
    pub mean_f1: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub runs: Vec<RunResult>,
    pub summary: Vec<SummaryRow>,
    /// Mean test F1 per `(m, n)` for each diffusion scale.
    pub heatmaps: BTreeMap<u32, Vec<HeatmapPoint>>,
    /// Sorted eigenvalues of `P̄_{m, fig1_n}(t)` on the run-0 graph.
    pub eigcurves: Vec<EigenCurvePoint>,
}

impl ExperimentReport {
    pub fn summary_for(&self, method: Method) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.method == method)
    }
}

enum Source {
    Synthetic,
    Stations(StationSeries),
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let source = match cfg.experiment {
        ExperimentKind::Station => {
            let path = cfg.station_csv.as_deref().ok_or_else(|| Error::Config("station_csv not set".into()))?;
            Source::Stations(ingest_station_csv(path, cfg.bbox.as_ref())?)
        }
        _ => Source::Synthetic,
    };
    let runs = (0..cfg.runs)
        .into_par_iter()
        .map(|r| run_once(cfg, &source, r))
        .collect::<Result<Vec<_>>>()?;
    let eigcurves = eigen_curves(&runs[0].graph, &cfg.scales, cfg.fig1_rho, cfg.fig1_n)?;
    let (summary, heatmaps) = summarize(cfg, &runs);
    Ok(ExperimentReport { runs, summary, heatmaps, eigcurves })
}

fn run_once(cfg: &ExperimentConfig, source: &Source, run: usize) -> Result<RunResult> {
    let seed = cfg.seed.wrapping_add(run as u64);
    let mut rng = rng_from_seed(seed);
    let (graph, train, test) = match source {
        Source::Synthetic => synthetic_data(cfg, seed, &mut rng)?,
        Source::Stations(series) => station_data(cfg, series, seed, &mut rng)?,
    };
    evaluate_run(cfg, run, seed, graph, &train, &test)
}

fn synthetic_data(cfg: &ExperimentConfig, seed: u64, rng: &mut ExperimentRng) -> Result<(Graph, LabeledDataset, LabeledDataset)> {
    let graph = random_sensor_graph(cfg.n_nodes, cfg.k, seed, rng, GRAPH_ATTEMPTS)?;
    let (train, test) = match cfg.experiment {
        ExperimentKind::Wave => {
            // One phase stream for both sets.
            let mut state = WaveSignalState::new(cfg.wave_phase);
            let train = wave_dataset(graph.coords(), cfg.train_healthy, cfg.train_anomalous, &mut state, rng)?;
            let test = wave_dataset(graph.coords(), cfg.test_healthy, cfg.test_anomalous, &mut state, rng)?;
            (train, test)
        }
        _ => {
            let (lo, hi) = cfg.uniform_range;
            let n = cfg.n_nodes;
            let train = uniform_dataset(n, lo, hi, cfg.train_healthy, cfg.train_anomalous, &cfg.anomaly, rng)?;
            let test = uniform_dataset(n, lo, hi, cfg.test_healthy, cfg.test_anomalous, &cfg.anomaly, rng)?;
            (train, test)
        }
    };
    Ok((graph, train, test))
}

/// Picks `n_nodes` stations (all when fewer exist) with a connected k-NN
/// graph on `(lon, lat)`, then `station_samples` random time steps: the
/// first half trains and the second half tests, and the last half of each
/// split is injected.
fn station_data(
    cfg: &ExperimentConfig,
    series: &StationSeries,
    seed: u64,
    rng: &mut ExperimentRng,
) -> Result<(Graph, LabeledDataset, LabeledDataset)> {
    let total = series.n_stations();
    let n = cfg.n_nodes.min(total);
    let mut chosen = None;
    for _ in 0..GRAPH_ATTEMPTS {
        let mut picks = index::sample(rng, total, n).into_vec();
        picks.sort_unstable();
        let coords: Vec<Point> = picks.iter().map(|&s| [series.coords[s][1], series.coords[s][0]]).collect();
        match build_knn_graph(&coords, cfg.k.min(n - 1), seed) {
            Ok(g) => {
                chosen = Some((g, picks));
                break;
            }
            Err(uemgft_core::Error::DisconnectedGraph) if n < total => continue,
            Err(e) => return Err(e.into()),
        }
    }
    let (graph, picks) = chosen.ok_or(uemgft_core::Error::ResamplingExhausted(GRAPH_ATTEMPTS))?;

    let count = cfg.station_samples.min(series.samples.len());
    if count < 4 {
        return Err(Error::EmptyResult("fewer than 4 complete samples"));
    }
    let times = index::sample(rng, series.samples.len(), count).into_vec();
    let signal = |t: usize| picks.iter().map(|&s| series.samples[t][s]).collect::<Vec<f64>>();
    let split = count / 2;
    let train_samples: Vec<Vec<f64>> = times[..split].iter().map(|&t| signal(t)).collect();
    let test_samples: Vec<Vec<f64>> = times[split..].iter().map(|&t| signal(t)).collect();
    let mut spec = cfg.anomaly;
    spec.max_anomalous_sensors = spec.max_anomalous_sensors.min(n);
    let train = injected_dataset(n, &train_samples, train_samples.len() / 2, &spec, rng)?;
    let test = injected_dataset(n, &test_samples, test_samples.len() / 2, &spec, rng)?;
    Ok((graph, train, test))
}

struct Evaluated {
    test_f1: f64,
    selection: Selection,
    outcome: CvOutcome,
}

fn evaluate_bases(
    bases: &[SpectralBasis],
    train: &LabeledDataset,
    test: &LabeledDataset,
    grid: &DetectorGrid,
    folds: usize,
    seed: u64,
) -> Result<Evaluated> {
    let outcome = grid_search_cv(bases, train, grid, folds, seed)?;
    let test_f1 = f1_score(&evaluate(&outcome.model, test)?);
    let selection = Selection {
        rho: bases[outcome.best.basis_index].source().and_then(GsoSpec::rho),
        lambda_cut_q: outcome.best.lambda_cut_q,
        beta: outcome.best.beta,
        mean_cv_f1: outcome.best_mean_f1,
    };
    Ok(Evaluated { test_f1, selection, outcome })
}

fn grid_rows(method: Method, bases: &[SpectralBasis], outcome: &CvOutcome) -> Vec<GridRow> {
    outcome
        .scores
        .iter()
        .map(|s| GridRow {
            method,
            spec: *bases[s.point.basis_index].source().expect("bases carry their spec"),
            lambda_cut_q: s.point.lambda_cut_q,
            beta: s.point.beta,
            mean_cv_f1: s.mean_f1,
        })
        .collect()
}

fn decompose_spec(matrix: &nalgebra::DMatrix<f64>, spec: GsoSpec) -> Result<SpectralBasis> {
    Ok(decompose(matrix)?.with_source(spec))
}

pub fn evaluate_run(
    cfg: &ExperimentConfig,
    run: usize,
    seed: u64,
    graph: Graph,
    train: &LabeledDataset,
    test: &LabeledDataset,
) -> Result<RunResult> {
    let consensus = consensus_matrix(&graph)?;
    let mut scales: Vec<u32> = cfg.scales.clone();
    scales.extend(cfg.methods.iter().filter_map(|m| m.diffusion_scale()));
    scales.sort_unstable();
    scales.dedup();
    let mut extended: BTreeMap<u32, Vec<ExtendedMatrices>> = BTreeMap::new();
    for &t in &scales {
        let per_rho = cfg.rhos.iter().map(|&rho| extended_adjacency(&consensus, t, rho)).collect::<uemgft_core::Result<Vec<_>>>()?;
        extended.insert(t, per_rho);
    }

    let keep_extras = run == 0;
    let mut baselines = Vec::new();
    let mut spectra = Vec::new();
    let mut grid = Vec::new();
    for &method in cfg.methods.iter().filter(|&&m| m != Method::Uem) {
        let bases = if let Some(spec) = method.fixed_spec() {
            vec![decompose_spec(&build_gso(&graph, &spec)?, spec)?]
        } else {
            let t = method.diffusion_scale().expect("sGFT baselines have a scale");
            extended[&t]
                .iter()
                .map(|e| decompose_spec(&e.l_bar, GsoSpec::ExtendedLaplacian { t, rho: e.rho }))
                .collect::<Result<Vec<_>>>()?
        };
        let ev = evaluate_bases(&bases, train, test, &cfg.grid, cfg.folds, seed)?;
        if keep_extras {
            let coeffs = gft(&ev.outcome.model.basis, test.signal(0))?;
            spectra.push((method.id().to_string(), spectrum_csv(&ev.outcome.model.basis, &coeffs)));
            if cfg.write_grid {
                grid.extend(grid_rows(method, &bases, &ev.outcome));
            }
        }
        baselines.push(MethodResult { method, test_f1: ev.test_f1, selection: ev.selection });
    }

    let mut cells = Vec::new();
    if cfg.methods.contains(&Method::Uem) {
        let lat = lattice();
        let lattice_cells: Vec<UemCell> = cfg
            .scales
            .iter()
            .flat_map(|&t| lat.iter().flat_map(move |&m| lattice().into_iter().map(move |n| UemCell { t, m, n })))
            .collect();
        let evaluated = lattice_cells
            .par_iter()
            .map(|&cell| {
                let bases = extended[&cell.t]
                    .iter()
                    .map(|e| {
                        let p = build_uem(e, cell.m, cell.n)?;
                        let spec = GsoSpec::Uem(UemParams::new(cell.m, cell.n, cell.t, e.rho)?);
                        Ok(decompose(&p.entries)?.with_source(spec))
                    })
                    .collect::<uemgft_core::Result<Vec<_>>>()?;
                let ev = evaluate_bases(&bases, train, test, &cfg.grid, cfg.folds, seed)?;
                let extra_grid = if keep_extras && cfg.write_grid { grid_rows(Method::Uem, &bases, &ev.outcome) } else { Vec::new() };
                let spectrum = if keep_extras {
                    let coeffs = gft(&ev.outcome.model.basis, test.signal(0))?;
                    Some(spectrum_csv(&ev.outcome.model.basis, &coeffs))
                } else {
                    None
                };
                Ok((CellResult { cell, test_f1: ev.test_f1, selection: ev.selection }, extra_grid, spectrum))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut cell_spectra = Vec::new();
        for (cell, extra_grid, spectrum) in evaluated {
            grid.extend(extra_grid);
            cell_spectra.push(spectrum);
            cells.push(cell);
        }
        if let Some(csv) = winning_index(&cells).and_then(|i| cell_spectra[i].take()) {
            spectra.push(("uem".to_string(), csv));
        }
    }
    Ok(RunResult { run, seed, graph, baselines, cells, spectra, grid })
}

fn summarize(cfg: &ExperimentConfig, runs: &[RunResult]) -> (Vec<SummaryRow>, BTreeMap<u32, Vec<HeatmapPoint>>) {
    let mut summary = Vec::new();
    let mut heatmaps = BTreeMap::new();
    for &method in &cfg.methods {
        if method != Method::Uem {
            let f1: Vec<f64> = runs.iter().filter_map(|r| r.baseline(method)).map(|b| b.test_f1).collect();
            let (mean, std) = mean_std(&f1);
            summary.push(SummaryRow { method, mean_f1: mean, std_f1: std, runs: f1.len(), best: None, modal: None });
            continue;
        }
        let n_cells = runs[0].cells.len();
        let per_cell: Vec<Vec<f64>> =
            (0..n_cells).map(|i| runs.iter().map(|r| r.cells[i].test_f1).collect()).collect();
        let means: Vec<f64> = per_cell.iter().map(|v| mean_std(v).0).collect();
        let keys: Vec<UemCell> = runs[0].cells.iter().map(|c| c.cell).collect();
        let best = argmax_cell(&keys, |i| means[i]).expect("at least one cell");
        for (i, c) in runs[0].cells.iter().enumerate() {
            heatmaps
                .entry(c.cell.t)
                .or_insert_with(Vec::new)
                .push(HeatmapPoint { m: c.cell.m, n: c.cell.n, mean_f1: means[i] });
        }
        let mut wins = vec![0usize; n_cells];
        for i in runs.iter().filter_map(|r| winning_index(&r.cells)) {
            wins[i] += 1;
        }
        let modal = argmax_cell(&keys, |i| wins[i] as f64).expect("at least one cell");
        let (mean, std) = mean_std(&per_cell[best]);
        summary.push(SummaryRow {
            method,
            mean_f1: mean,
            std_f1: std,
            runs: runs.len(),
            best: Some(runs[0].cells[best].cell),
            modal: Some(runs[0].cells[modal].cell),
        });
    }
    (summary, heatmaps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenCurvePoint {
    pub t: u32,
    pub m: f64,
    pub eigenvalues: Vec<f64>,
}

/// Sorted spectrum of `P̄_{m,n}(t)` along the `m` lattice for each scale.
pub fn eigen_curves(graph: &Graph, scales: &[u32], rho: f64, n: f64) -> Result<Vec<EigenCurvePoint>> {
    let consensus = consensus_matrix(graph)?;
    let mut out = Vec::new();
    for &t in scales {
        let ext = extended_adjacency(&consensus, t, rho)?;
        for m in lattice() {
            let basis = decompose(&build_uem(&ext, m, n)?.entries)?;
            out.push(EigenCurvePoint { t, m, eigenvalues: basis.eigenvalues().to_vec() });
        }
    }
    Ok(out)
}

pub fn eigcurves_csv(points: &[EigenCurvePoint]) -> String {
    let width = points.first().map_or(0, |p| p.eigenvalues.len());
    let mut out = String::from("t,m");
    for l in 0..width {
        write!(out, ",lambda_{l}").unwrap();
    }
    out.push('\n');
    for p in points {
        write!(out, "{},{}", p.t, p.m).unwrap();
        for v in &p.eigenvalues {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn cell_columns(c: Option<UemCell>) -> String {
    format!("{},{},{}", opt(c.map(|c| c.m)), opt(c.map(|c| c.n)), opt(c.map(|c| c.t)))
}

pub fn summary_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("method,mean_f1,std_f1,runs,best_m,best_n,best_t,modal_m,modal_n,modal_t\n");
    for r in &report.summary {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.method,
            r.mean_f1,
            r.std_f1,
            r.runs,
            cell_columns(r.best),
            cell_columns(r.modal)
        )
        .unwrap();
    }
    out
}

pub fn heatmap_csv(points: &[HeatmapPoint]) -> String {
    let mut out = String::from("m,n,mean_f1\n");
    for p in points {
        writeln!(out, "{},{},{}", p.m, p.n, p.mean_f1).unwrap();
    }
    out
}

/// One row per method and run; the UEM row is the run's winning cell.
pub fn runs_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("run,seed,method,test_f1,rho,lambda_cut_q,beta,mean_cv_f1,m,n,t\n");
    for r in &report.runs {
        for b in &r.baselines {
            let s = &b.selection;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},,,",
                r.run, r.seed, b.method, b.test_f1, opt(s.rho), s.lambda_cut_q, s.beta, s.mean_cv_f1
            )
            .unwrap();
        }
        if let Some(w) = r.winning_cell() {
            let s = &w.selection;
            writeln!(
                out,
                "{},{},uem,{},{},{},{},{},{}",
                r.run,
                r.seed,
                w.test_f1,
                opt(s.rho),
                s.lambda_cut_q,
                s.beta,
                s.mean_cv_f1,
                cell_columns(Some(w.cell))
            )
            .unwrap();
        }
    }
    out
}

pub fn grid_csv(rows: &[GridRow]) -> String {
    let mut out = String::from("gso_kind,m,n,t,rho,lambda_cut_q,beta,mean_cv_f1\n");
    for g in rows {
        let (m, n) = match g.spec {
            GsoSpec::Uem(p) => (Some(p.m), Some(p.n)),
            _ => (None, None),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            g.method,
            opt(m),
            opt(n),
            opt(g.spec.t()),
            opt(g.spec.rho()),
            g.lambda_cut_q,
            g.beta,
            g.mean_cv_f1
        )
        .unwrap();
    }
    out
}

/// Writes every artifact of a report under `dir`.
pub fn write_report(dir: &Path, report: &ExperimentReport) -> Result<()> {
    write_file(&dir.join("summary.csv"), &summary_csv(report))?;
    write_file(&dir.join("runs.csv"), &runs_csv(report))?;
    for (t, points) in &report.heatmaps {
        write_file(&dir.join(format!("heatmap_t{t}.csv")), &heatmap_csv(points))?;
    }
    write_file(&dir.join("eigcurves.csv"), &eigcurves_csv(&report.eigcurves))?;
    let first = &report.runs[0];
    for (stem, csv) in &first.spectra {
        write_file(&dir.join("spectra").join(format!("{stem}.csv")), csv)?;
    }
    if !first.grid.is_empty() {
        write_file(&dir.join("grid.csv"), &grid_csv(&first.grid))?;
    }
    write_file(&dir.join("graph_run0.txt"), &format_edge_list(&first.graph))?;
    Ok(())
}

/// Dense CSVs of `Ā`, `D̄`, `L̄` and the requested UEM members, named
/// `a_bar_t{t}.csv` etc. and `uem_m{m}_n{n}_t{t}.csv`.
pub fn export_matrices(dir: &Path, graph: &Graph, rho: f64, scales: &[u32], ms: &[f64], ns: &[f64]) -> Result<Vec<String>> {
    let consensus = consensus_matrix(graph)?;
    let mut written = Vec::new();
    let mut put = |name: String, m: &nalgebra::DMatrix<f64>| -> Result<()> {
        write_file(&dir.join(&name), &matrix_csv(m))?;
        written.push(name);
        Ok(())
    };
    for &t in scales {
        let ext = extended_adjacency(&consensus, t, rho)?;
        put(format!("a_bar_t{t}.csv"), &ext.a_bar)?;
        put(format!("d_bar_t{t}.csv"), &ext.d_bar)?;
        put(format!("l_bar_t{t}.csv"), &ext.l_bar)?;
        for &m in ms {
            for &n in ns {
                put(format!("uem_m{m:.1}_n{n:.1}_t{t}.csv"), &build_uem(&ext, m, n)?.entries)?;
            }
        }
    }
    Ok(written)
}

/// Spectrum of `signal` under each requested UEM member, one file per
/// member named `uem_m{m}_n{n}_t{t}.csv`.
pub fn export_spectra(
    dir: &Path,
    graph: &Graph,
    signal: &[f64],
    rho: f64,
    scales: &[u32],
    ms: &[f64],
    ns: &[f64],
) -> Result<Vec<String>> {
    let consensus = consensus_matrix(graph)?;
    let mut written = Vec::new();
    for &t in scales {
        let ext = extended_adjacency(&consensus, t, rho)?;
        for &m in ms {
            for &n in ns {
                let basis = decompose(&build_uem(&ext, m, n)?.entries)?;
                let name = format!("uem_m{m:.1}_n{n:.1}_t{t}.csv");
                write_file(&dir.join(&name), &spectrum_csv(&basis, &gft(&basis, signal)?))?;
                written.push(name);
            }
        }
    }
    Ok(written)
}
