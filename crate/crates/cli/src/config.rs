//! Experiment configuration: a flat `key = value` file plus command-line
//! overrides. Precedence is command line, then file, then the defaults of the
//! chosen experiment. Lists are comma separated; `#` starts a comment.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use uemgft_core::datagen::{AnomalySpec, PhaseUpdate};
use uemgft_core::detector::DetectorGrid;
use uemgft_core::gso::Method;

use crate::error::{Error, Result};
use crate::station::BoundingBox;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Drifting smooth wave with additive high-frequency interference.
    Wave,
    /// Uniform signals with injected sensor malfunctions.
    Uniform,
    /// Station time series from a CSV file with injected malfunctions.
    Station,
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wave" => Ok(Self::Wave),
            "uniform" => Ok(Self::Uniform),
            "station" => Ok(Self::Station),
            _ => Err(Error::Config(format!("unknown experiment `{s}` (wave, uniform, station)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub n_nodes: usize,
    pub k: usize,
    pub runs: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub output_dir: PathBuf,
    pub folds: usize,
    pub train_healthy: usize,
    pub train_anomalous: usize,
    pub test_healthy: usize,
    pub test_anomalous: usize,
    /// Range of the uniform healthy signals.
    pub uniform_range: (f64, f64),
    pub anomaly: AnomalySpec,
    pub grid: DetectorGrid,
    pub rhos: Vec<f64>,
    pub scales: Vec<u32>,
    pub station_csv: Option<PathBuf>,
    pub bbox: Option<BoundingBox>,
    /// Samples drawn per run from the station series, split evenly between
    /// train and test; half of each split is injected.
    pub station_samples: usize,
    pub fig1_rho: f64,
    pub fig1_n: f64,
    pub write_grid: bool,
    /// Phase motion of the wave experiment.
    pub wave_phase: PhaseUpdate,
}

impl ExperimentConfig {
    pub fn defaults(experiment: ExperimentKind) -> Self {
        let base = Self {
            experiment,
            n_nodes: 30,
            k: 3,
            runs: 10,
            seed: 0,
            methods: Method::ALL.to_vec(),
            output_dir: PathBuf::from("out"),
            folds: 5,
            train_healthy: 150,
            train_anomalous: 150,
            test_healthy: 150,
            test_anomalous: 150,
            uniform_range: (-15.0, 15.0),
            anomaly: AnomalySpec { b_max: 4, noise_variance: 1.0, max_anomalous_sensors: 2 },
            grid: DetectorGrid::default(),
            rhos: (1..=10).map(|i| i as f64 / 10.0).collect(),
            scales: vec![1, 2],
            station_csv: None,
            bbox: None,
            station_samples: 350,
            fig1_rho: 0.4,
            fig1_n: 1.0,
            write_grid: false,
            wave_phase: PhaseUpdate::Resample,
        };
        match experiment {
            ExperimentKind::Wave => base,
            ExperimentKind::Uniform => {
                Self { train_healthy: 100, train_anomalous: 100, test_healthy: 100, test_anomalous: 100, ..base }
            }
            ExperimentKind::Station => Self {
                n_nodes: 10,
                anomaly: AnomalySpec { b_max: 5, noise_variance: 1.0, max_anomalous_sensors: 5 },
                ..base
            },
        }
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("{key}: cannot parse `{value}` as {what}"));
        match key {
            "experiment" => self.experiment = value.parse()?,
            "nodes" | "n_nodes" => self.n_nodes = value.parse().map_err(|_| bad("integer"))?,
            "k" => self.k = value.parse().map_err(|_| bad("integer"))?,
            "runs" => self.runs = value.parse().map_err(|_| bad("integer"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("integer"))?,
            "gso" | "methods" => {
                self.methods = list(value).map(|s| s.parse::<Method>()).collect::<std::result::Result<_, _>>()?
            }
            "out" | "output_dir" => self.output_dir = PathBuf::from(value),
            "folds" => self.folds = value.parse().map_err(|_| bad("integer"))?,
            "train_healthy" => self.train_healthy = value.parse().map_err(|_| bad("integer"))?,
            "train_anomalous" => self.train_anomalous = value.parse().map_err(|_| bad("integer"))?,
            "test_healthy" => self.test_healthy = value.parse().map_err(|_| bad("integer"))?,
            "test_anomalous" => self.test_anomalous = value.parse().map_err(|_| bad("integer"))?,
            "uniform_lo" => self.uniform_range.0 = value.parse().map_err(|_| bad("number"))?,
            "uniform_hi" => self.uniform_range.1 = value.parse().map_err(|_| bad("number"))?,
            "b_max" => self.anomaly.b_max = value.parse().map_err(|_| bad("integer"))?,
            "noise_variance" => self.anomaly.noise_variance = value.parse().map_err(|_| bad("number"))?,
            "max_anomalous_sensors" => {
                self.anomaly.max_anomalous_sensors = value.parse().map_err(|_| bad("integer"))?
            }
            "lambda_cut_quantiles" => self.grid.lambda_cut_quantiles = numbers(value).map_err(|_| bad("number list"))?,
            "betas" => self.grid.betas = numbers(value).map_err(|_| bad("number list"))?,
            "rhos" => self.rhos = numbers(value).map_err(|_| bad("number list"))?,
            "scales" => {
                self.scales = list(value).map(|s| s.parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad("integer list"))?
            }
            "station_csv" => self.station_csv = Some(PathBuf::from(value)),
            "bbox" => {
                let v = numbers(value).map_err(|_| bad("lat_min,lat_max,lon_min,lon_max"))?;
                if v.len() != 4 {
                    return Err(bad("lat_min,lat_max,lon_min,lon_max"));
                }
                self.bbox = Some(BoundingBox { lat_min: v[0], lat_max: v[1], lon_min: v[2], lon_max: v[3] });
            }
            "station_samples" => self.station_samples = value.parse().map_err(|_| bad("integer"))?,
            "fig1_rho" => self.fig1_rho = value.parse().map_err(|_| bad("number"))?,
            "fig1_n" => self.fig1_n = value.parse().map_err(|_| bad("number"))?,
            "write_grid" => self.write_grid = value.parse().map_err(|_| bad("true/false"))?,
            "wave_phase" => {
                self.wave_phase = match value {
                    "resample" => PhaseUpdate::Resample,
                    "drift" => PhaseUpdate::Drift,
                    _ => return Err(bad("resample or drift")),
                }
            }
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_string()));
        if self.runs == 0 {
            return fail("runs must be at least 1");
        }
        if self.k == 0 || self.k >= self.n_nodes {
            return fail("k must satisfy 1 <= k < nodes");
        }
        if self.methods.is_empty() {
            return fail("no GSO methods selected");
        }
        if self.folds < 2 {
            return fail("folds must be at least 2");
        }
        if self.rhos.is_empty() || self.rhos.iter().any(|&r| !(r.is_finite() && r > 0.0)) {
            return fail("rhos must be a nonempty list of positive values");
        }
        if self.scales.is_empty() || self.scales.contains(&0) {
            return fail("scales must be a nonempty list of positive integers");
        }
        if self.grid.lambda_cut_quantiles.is_empty() || self.grid.betas.is_empty() {
            return fail("lambda_cut_quantiles and betas must be nonempty");
        }
        if self.grid.lambda_cut_quantiles.iter().any(|q| !(0.0..=1.0).contains(q)) {
            return fail("lambda_cut_quantiles must lie in [0, 1]");
        }
        if self.grid.betas.iter().any(|&b| !(b.is_finite() && b >= 0.0)) {
            return fail("betas must be nonnegative");
        }
        if !(0.0..=1.0).contains(&self.fig1_n) || !(self.fig1_rho.is_finite() && self.fig1_rho > 0.0) {
            return fail("fig1_n must lie in [0, 1] and fig1_rho must be positive");
        }
        if self.uniform_range.0 > self.uniform_range.1 {
            return fail("uniform_lo must not exceed uniform_hi");
        }
        self.anomaly.validate()?;
        if self.anomaly.max_anomalous_sensors > self.n_nodes {
            return fail("max_anomalous_sensors exceeds nodes");
        }
        match self.experiment {
            ExperimentKind::Station if self.station_csv.is_none() => fail("station experiment needs station_csv"),
            ExperimentKind::Station if self.station_samples < 4 => fail("station_samples must be at least 4"),
            ExperimentKind::Wave | ExperimentKind::Uniform
                if self.train_healthy == 0 || self.train_anomalous == 0 =>
            {
                fail("training set needs both classes")
            }
            _ => Ok(()),
        }
    }
}

/// `(key, value)` pairs from a flat config file.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(i + 1, "expected `key = value`"))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Resolves defaults, file and overrides in precedence order.
pub fn resolve(file: Option<&Path>, overrides: &[(String, String)]) -> Result<ExperimentConfig> {
    let file_pairs = match file {
        Some(p) => parse_config_text(&fs::read_to_string(p).map_err(|e| Error::io(p, e))?)?,
        None => Vec::new(),
    };
    let experiment = overrides
        .iter()
        .chain(&file_pairs)
        .find(|(k, _)| k == "experiment")
        .map(|(_, v)| v.parse())
        .transpose()?
        .unwrap_or(ExperimentKind::Wave);
    let mut cfg = ExperimentConfig::defaults(experiment);
    for (k, v) in file_pairs.iter().chain(overrides) {
        if k != "experiment" {
            cfg.set(k, v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn numbers(value: &str) -> std::result::Result<Vec<f64>, std::num::ParseFloatError> {
    list(value).map(str::parse).collect()
}
