//! Spectral anomaly detector.
//!
//! A signal's statistic is the largest absolute GFT coefficient that survives
//! a high-pass filter at `λ_cut`. The threshold is fitted on healthy signals
//! only, `τ = mean + β · std` of their statistics (population std), and a
//! signal is flagged anomalous when its statistic exceeds `τ`.
//!
//! [`grid_search_cv`] picks the operator and `(λ_cut, β)` by stratified k-fold
//! cross-validation on F1, then refits `τ` on every healthy training signal.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{gft, gft_columns, highpass_filter, SpectralBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Healthy,
    Anomalous,
}

/// Signals stored as the columns of an `n_nodes × len` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    signals: DMatrix<f64>,
    labels: Vec<Label>,
}

impl LabeledDataset {
    pub fn new(n_nodes: usize, signals: &[Vec<f64>], labels: Vec<Label>) -> Result<Self> {
        if signals.len() != labels.len() {
            return Err(Error::LengthMismatch { expected: signals.len(), got: labels.len() });
        }
        let mut data = Vec::with_capacity(n_nodes * signals.len());
        for s in signals {
            if s.len() != n_nodes {
                return Err(Error::LengthMismatch { expected: n_nodes, got: s.len() });
            }
            data.extend_from_slice(s);
        }
        Ok(Self { signals: DMatrix::from_vec(n_nodes, signals.len(), data), labels })
    }

    pub fn from_columns(signals: DMatrix<f64>, labels: Vec<Label>) -> Result<Self> {
        if signals.ncols() != labels.len() {
            return Err(Error::LengthMismatch { expected: signals.ncols(), got: labels.len() });
        }
        Ok(Self { signals, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_nodes(&self) -> usize {
        self.signals.nrows()
    }

    pub fn signals(&self) -> &DMatrix<f64> {
        &self.signals
    }

    pub fn signal(&self, i: usize) -> &[f64] {
        let n = self.n_nodes();
        &self.signals.as_slice()[i * n..(i + 1) * n]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    pub fn healthy(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.len()).filter(|&i| self.labels[i] == Label::Healthy).map(|i| self.signal(i))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    pub fn record(&mut self, truth: Label, predicted: Label) {
        match (truth, predicted) {
            (Label::Anomalous, Label::Anomalous) => self.tp += 1,
            (Label::Healthy, Label::Anomalous) => self.fp += 1,
            (Label::Anomalous, Label::Healthy) => self.fn_ += 1,
            (Label::Healthy, Label::Healthy) => self.tn += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

/// `2TP / (2TP + FP + FN)`, 0 when nothing was positive.
pub fn f1_score(counts: &ConfusionCounts) -> f64 {
    let denom = 2 * counts.tp + counts.fp + counts.fn_;
    if denom == 0 {
        0.0
    } else {
        (2 * counts.tp) as f64 / denom as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorModel {
    pub basis: SpectralBasis,
    pub lambda_cut: f64,
    pub beta: f64,
    pub tau: f64,
}

/// Largest absolute high-pass filtered GFT coefficient of `x`.
pub fn filtered_peak(basis: &SpectralBasis, x: &[f64], lambda_cut: f64) -> Result<f64> {
    Ok(highpass_filter(basis, &gft(basis, x)?, lambda_cut).max_abs())
}

/// `(mean, population std)`.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, libm::sqrt(var))
}

pub fn fit_threshold<S: AsRef<[f64]>>(
    basis: &SpectralBasis,
    healthy: &[S],
    lambda_cut: f64,
    beta: f64,
) -> Result<DetectorModel> {
    if healthy.is_empty() {
        return Err(Error::EmptyHealthySet);
    }
    let peaks = healthy
        .iter()
        .map(|x| filtered_peak(basis, x.as_ref(), lambda_cut))
        .collect::<Result<Vec<_>>>()?;
    let (mean, std) = mean_std(&peaks);
    Ok(DetectorModel { basis: basis.clone(), lambda_cut, beta, tau: mean + beta * std })
}

pub fn classify(model: &DetectorModel, x: &[f64]) -> Result<Label> {
    let peak = filtered_peak(&model.basis, x, model.lambda_cut)?;
    Ok(if peak > model.tau { Label::Anomalous } else { Label::Healthy })
}

pub fn evaluate(model: &DetectorModel, data: &LabeledDataset) -> Result<ConfusionCounts> {
    let mut counts = ConfusionCounts::default();
    for (i, &truth) in data.labels().iter().enumerate() {
        counts.record(truth, classify(model, data.signal(i))?);
    }
    Ok(counts)
}

/// Detector hyperparameters swept for every candidate operator. `λ_cut` is
/// given as a relative position in each basis's eigenvalue range.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorGrid {
    pub lambda_cut_quantiles: Vec<f64>,
    pub betas: Vec<f64>,
}

impl Default for DetectorGrid {
    fn default() -> Self {
        Self {
            lambda_cut_quantiles: (1..=9).map(|i| i as f64 / 10.0).collect(),
            betas: (0..=6).map(|i| i as f64 * 0.5).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperPoint {
    /// Index into the candidate bases handed to [`grid_search_cv`].
    pub basis_index: usize,
    pub lambda_cut_q: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointScore {
    pub point: HyperPoint,
    pub mean_f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    pub best: HyperPoint,
    pub best_mean_f1: f64,
    pub model: DetectorModel,
    /// Every lattice point in iteration order: `λ_cut` outer, then `β`, then
    /// candidate basis.
    pub scores: Vec<PointScore>,
    /// Folds whose training part held no healthy signal.
    pub skipped_folds: Vec<usize>,
}

/// Fold id per sample. Each class is shuffled separately and dealt
/// round-robin, healthy first, so folds differ in size by at most one and
/// each class is spread evenly.
pub fn stratified_folds(labels: &[Label], folds: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for class in [Label::Healthy, Label::Anomalous] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(&mut rng);
        for i in idx {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    assignment
}

/// Per-signal statistic at every cut quantile: `peaks[q][s]`.
fn peak_table(basis: &SpectralBasis, signals: &DMatrix<f64>, quantiles: &[f64]) -> Result<Vec<Vec<f64>>> {
    let coeffs = gft_columns(basis, signals)?;
    let n = basis.n();
    let starts: Vec<usize> = quantiles
        .iter()
        .map(|&q| {
            let cut = basis.relative_cut(q);
            basis.eigenvalues().iter().position(|&l| l > cut).unwrap_or(n)
        })
        .collect();
    let mut table = vec![vec![0.0; signals.ncols()]; quantiles.len()];
    let mut suffix = vec![0.0f64; n + 1];
    for (s, col) in coeffs.column_iter().enumerate() {
        for l in (0..n).rev() {
            suffix[l] = suffix[l + 1].max(col[l].abs());
        }
        for (qi, &start) in starts.iter().enumerate() {
            table[qi][s] = suffix[start];
        }
    }
    Ok(table)
}

pub fn grid_search_cv(
    bases: &[SpectralBasis],
    train: &LabeledDataset,
    grid: &DetectorGrid,
    folds: usize,
    seed: u64,
) -> Result<CvOutcome> {
    if folds < 2 {
        return Err(Error::TooFewFolds(folds));
    }
    if bases.is_empty() || grid.lambda_cut_quantiles.is_empty() || grid.betas.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if train.count(Label::Healthy) == 0 || train.count(Label::Anomalous) == 0 {
        return Err(Error::MissingClass);
    }

    let fold_of = stratified_folds(train.labels(), folds, seed);
    let mut active = Vec::new();
    let mut skipped_folds = Vec::new();
    for f in 0..folds {
        let has_holdout = fold_of.contains(&f);
        let trains_on_healthy = (0..train.len()).any(|i| fold_of[i] != f && train.labels()[i] == Label::Healthy);
        if has_holdout && trains_on_healthy {
            active.push(f);
        } else {
            skipped_folds.push(f);
        }
    }
    if active.is_empty() {
        return Err(Error::AllFoldsSkipped);
    }

    let (nq, nb) = (grid.lambda_cut_quantiles.len(), grid.betas.len());
    // mean_f1[basis][q][beta]
    let mut mean_f1 = vec![vec![vec![0.0; nb]; nq]; bases.len()];
    let mut train_peaks = Vec::with_capacity(train.len());
    for (bi, basis) in bases.iter().enumerate() {
        let table = peak_table(basis, train.signals(), &grid.lambda_cut_quantiles)?;
        for (qi, peaks) in table.iter().enumerate() {
            for &f in &active {
                train_peaks.clear();
                train_peaks.extend(
                    (0..train.len())
                        .filter(|&i| fold_of[i] != f && train.labels()[i] == Label::Healthy)
                        .map(|i| peaks[i]),
                );
                let (mean, std) = mean_std(&train_peaks);
                for (betai, &beta) in grid.betas.iter().enumerate() {
                    let tau = mean + beta * std;
                    let mut counts = ConfusionCounts::default();
                    for i in (0..train.len()).filter(|&i| fold_of[i] == f) {
                        let predicted = if peaks[i] > tau { Label::Anomalous } else { Label::Healthy };
                        counts.record(train.labels()[i], predicted);
                    }
                    mean_f1[bi][qi][betai] += f1_score(&counts);
                }
            }
        }
    }

    let n_active = active.len() as f64;
    let mut scores = Vec::with_capacity(bases.len() * nq * nb);
    let mut best: Option<PointScore> = None;
    for (qi, &q) in grid.lambda_cut_quantiles.iter().enumerate() {
        for (betai, &beta) in grid.betas.iter().enumerate() {
            for (bi, per_basis) in mean_f1.iter().enumerate() {
                let score = PointScore {
                    point: HyperPoint { basis_index: bi, lambda_cut_q: q, beta },
                    mean_f1: per_basis[qi][betai] / n_active,
                };
                if best.is_none_or(|b| score.mean_f1 > b.mean_f1) {
                    best = Some(score);
                }
                scores.push(score);
            }
        }
    }
    let best = best.ok_or(Error::EmptyGrid)?;
    let basis = &bases[best.point.basis_index];
    let healthy: Vec<&[f64]> = train.healthy().collect();
    let model = fit_threshold(basis, &healthy, basis.relative_cut(best.point.lambda_cut_q), best.point.beta)?;
    Ok(CvOutcome { best: best.point, best_mean_f1: best.mean_f1, model, scores, skipped_folds })
}
