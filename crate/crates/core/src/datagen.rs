//! Synthetic graph signals and anomaly injection.
//!
//! All generators take any [`rand::Rng`]; the experiment runner uses
//! [`rng_from_seed`], a ChaCha8 stream seeded through
//! `SeedableRng::seed_from_u64`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::detector::{Label, LabeledDataset};
use crate::error::{Error, Result};
use crate::graph::{build_knn_graph, Graph, Point};

pub type ExperimentRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ExperimentRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// How the wave phases move between samples.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum PhaseUpdate {
    /// `θ += step · U[-0.5, 0.5]`: a random walk.
    #[default]
    Drift,
    /// `θ = step · U[-0.5, 0.5]`: a fresh bounded offset per sample.
    Resample,
}

/// Phase offsets of the wave; both start at 0.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WaveSignalState {
    pub theta_x: f64,
    pub theta_y: f64,
    pub update: PhaseUpdate,
}

impl WaveSignalState {
    pub fn new(update: PhaseUpdate) -> Self {
        Self { theta_x: 0.0, theta_y: 0.0, update }
    }
}

const PHASE_STEP_X: f64 = 0.1;
const PHASE_STEP_Y: f64 = 0.05;

/// `cos(2π x + θx) + cos(4π y + θy)` at the current phases, then moves each
/// phase by `step · U[-0.5, 0.5]` independently (see [`PhaseUpdate`]).
pub fn smooth_wave_sample<R: Rng + ?Sized>(coords: &[Point], state: &mut WaveSignalState, rng: &mut R) -> Vec<f64> {
    let s = coords
        .iter()
        .map(|p| libm::cos(2.0 * PI * p[0] + state.theta_x) + libm::cos(4.0 * PI * p[1] + state.theta_y))
        .collect();
    let dx = PHASE_STEP_X * rng.random_range(-0.5..=0.5);
    let dy = PHASE_STEP_Y * rng.random_range(-0.5..=0.5);
    match state.update {
        PhaseUpdate::Drift => {
            state.theta_x += dx;
            state.theta_y += dy;
        }
        PhaseUpdate::Resample => {
            state.theta_x = dx;
            state.theta_y = dy;
        }
    }
    s
}

/// `0.1 (cos(10π x + θx) + cos(12π y + θy))` at the current phases.
pub fn wave_interference(coords: &[Point], state: &WaveSignalState) -> Vec<f64> {
    coords
        .iter()
        .map(|p| 0.1 * (libm::cos(10.0 * PI * p[0] + state.theta_x) + libm::cos(12.0 * PI * p[1] + state.theta_y)))
        .collect()
}

/// Wave plus interference evaluated at the same phases.
pub fn wave_anomalous_sample<R: Rng + ?Sized>(coords: &[Point], state: &mut WaveSignalState, rng: &mut R) -> Vec<f64> {
    let interference = wave_interference(coords, state);
    let mut s = smooth_wave_sample(coords, state, rng);
    for (v, i) in s.iter_mut().zip(interference) {
        *v += i;
    }
    s
}

/// i.i.d. `U[lo, hi]` entries.
pub fn uniform_healthy<R: Rng + ?Sized>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
    if lo == hi {
        return alloc::vec![lo; n];
    }
    (0..n).map(|_| rng.random_range(lo..=hi)).collect()
}

/// Sensor-malfunction anomaly: up to `max_anomalous_sensors` sensors get
/// additive Gaussian noise whose mean is a nonzero integer in
/// `[-b_max, b_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnomalySpec {
    pub b_max: u32,
    pub noise_variance: f64,
    pub max_anomalous_sensors: usize,
}

impl AnomalySpec {
    pub fn validate(&self) -> Result<()> {
        if self.b_max < 1 {
            return Err(Error::InvalidAnomalySpec("b_max must be at least 1"));
        }
        if !(self.noise_variance.is_finite() && self.noise_variance > 0.0) {
            return Err(Error::InvalidAnomalySpec("noise variance must be positive"));
        }
        if self.max_anomalous_sensors == 0 {
            return Err(Error::InvalidAnomalySpec("max_anomalous_sensors must be positive"));
        }
        Ok(())
    }
}

/// Uniform draw from `{-b_max, …, -1, 1, …, b_max}`.
pub fn nonzero_offset<R: Rng + ?Sized>(b_max: u32, rng: &mut R) -> i64 {
    let b = i64::from(b_max);
    let u = rng.random_range(0..2 * b);
    if u < b {
        u - b
    } else {
        u - b + 1
    }
}

pub fn inject_anomaly<R: Rng + ?Sized>(x: &[f64], spec: &AnomalySpec, rng: &mut R) -> Result<Vec<f64>> {
    spec.validate()?;
    let n = x.len();
    if spec.max_anomalous_sensors > n {
        return Err(Error::TooManyAnomalousSensors { max: spec.max_anomalous_sensors, n_nodes: n });
    }
    let count = rng.random_range(1..=spec.max_anomalous_sensors);
    let sigma = libm::sqrt(spec.noise_variance);
    let mut out = x.to_vec();
    for sensor in index::sample(rng, n, count).into_vec() {
        let mean = nonzero_offset(spec.b_max, rng) as f64;
        let noise = Normal::new(mean, sigma).map_err(|_| Error::InvalidAnomalySpec("bad noise parameters"))?;
        out[sensor] += noise.sample(rng);
    }
    Ok(out)
}

/// Uniform coordinates in the unit square, redrawn until the k-NN graph is
/// connected.
pub fn random_sensor_graph<R: Rng + ?Sized>(n: usize, k: usize, seed: u64, rng: &mut R, max_attempts: usize) -> Result<Graph> {
    for _ in 0..max_attempts {
        let coords: Vec<Point> = (0..n).map(|_| [rng.random::<f64>(), rng.random::<f64>()]).collect();
        match build_knn_graph(&coords, k, seed) {
            Err(Error::DisconnectedGraph) => continue,
            other => return other,
        }
    }
    Err(Error::ResamplingExhausted(max_attempts))
}

/// `healthy` wave samples followed by `anomalous` ones, drawn from one phase
/// stream.
pub fn wave_dataset<R: Rng + ?Sized>(
    coords: &[Point],
    healthy: usize,
    anomalous: usize,
    state: &mut WaveSignalState,
    rng: &mut R,
) -> Result<LabeledDataset> {
    let mut signals = Vec::with_capacity(healthy + anomalous);
    let mut labels = Vec::with_capacity(healthy + anomalous);
    for _ in 0..healthy {
        signals.push(smooth_wave_sample(coords, state, rng));
        labels.push(Label::Healthy);
    }
    for _ in 0..anomalous {
        signals.push(wave_anomalous_sample(coords, state, rng));
        labels.push(Label::Anomalous);
    }
    LabeledDataset::new(coords.len(), &signals, labels)
}

/// Uniform healthy signals; the last `anomalous` of them get an injected
/// anomaly.
pub fn uniform_dataset<R: Rng + ?Sized>(
    n: usize,
    lo: f64,
    hi: f64,
    healthy: usize,
    anomalous: usize,
    spec: &AnomalySpec,
    rng: &mut R,
) -> Result<LabeledDataset> {
    let samples: Vec<Vec<f64>> = (0..healthy + anomalous).map(|_| uniform_healthy(n, lo, hi, rng)).collect();
    injected_dataset(n, &samples, anomalous, spec, rng)
}

/// Labels the last `anomalous` of `samples` anomalous and injects into them.
pub fn injected_dataset<R: Rng + ?Sized>(
    n: usize,
    samples: &[Vec<f64>],
    anomalous: usize,
    spec: &AnomalySpec,
    rng: &mut R,
) -> Result<LabeledDataset> {
    let healthy = samples.len().saturating_sub(anomalous);
    let mut signals = Vec::with_capacity(samples.len());
    let mut labels = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        if i < healthy {
            signals.push(s.clone());
            labels.push(Label::Healthy);
        } else {
            signals.push(inject_anomaly(s, spec, rng)?);
            labels.push(Label::Anomalous);
        }
    }
    LabeledDataset::new(n, &signals, labels)
}
