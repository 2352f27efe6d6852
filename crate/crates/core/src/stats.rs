//! Goodness-of-fit and summary statistics shared by the experiments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted sample of a continuous quantity.
#[derive(Debug, Clone)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of the sample that is `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// Fraction of the sample that is `> x`.
    pub fn survival(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    pub fn mean(&self) -> f64 {
        mean(&self.sorted)
    }
}

/// Counts over a finite alphabet `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    counts: Vec<u64>,
}

impl Counts {
    pub fn zeros(alphabet: usize) -> Self {
        Self {
            counts: vec![0; alphabet],
        }
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn add(&mut self, symbol: usize) {
        self.counts[symbol] += 1;
    }

    /// Adds a symbol, growing the alphabet if needed.
    pub fn add_growing(&mut self, symbol: usize) {
        if symbol >= self.counts.len() {
            self.counts.resize(symbol + 1, 0);
        }
        self.counts[symbol] += 1;
    }

    pub fn merge(&mut self, other: &Counts) {
        if other.counts.len() > self.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
    }

    pub fn alphabet(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.total() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

/// One-sample Kolmogorov-Smirnov distance, checking both sides of each jump.
pub fn ks_distance(sample: &EmpiricalDistribution, cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = sample.len() as f64;
    let xs = sample.values();
    let mut sup = 0.0f64;
    let mut i = 0;
    while i < xs.len() {
        // Runs of equal values form a single jump.
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[i] {
            j += 1;
        }
        let f = cdf(xs[i]);
        let f_left = cdf(xs[i].next_down());
        let below = i as f64 / n;
        let above = (j + 1) as f64 / n;
        sup = sup.max((f_left - below).abs()).max((above - f).abs());
        i = j + 1;
    }
    Ok(sup.min(1.0))
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> f64 {
    let (xs, ys) = (a.values(), b.values());
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut sup = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let x = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

/// Sup over a grid of `|empirical survival - reference survival|`.
pub fn survival_sup_distance(
    sample: &EmpiricalDistribution,
    survival: impl Fn(f64) -> f64,
) -> f64 {
    // The sup of |S_n - S| is attained at sample points (from either side).
    let n = sample.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sample.values().iter().enumerate() {
        let s = survival(x);
        sup = sup
            .max((1.0 - i as f64 / n - s).abs())
            .max((1.0 - (i + 1) as f64 / n - s).abs());
    }
    sup
}

/// Total variation distance between two count vectors over the same alphabet.
pub fn tv_distance(p: &Counts, q: &Counts) -> Result<f64> {
    if p.alphabet() != q.alphabet() {
        return Err(Error::Alphabet {
            left: p.alphabet(),
            right: q.alphabet(),
        });
    }
    if p.total() == 0 || q.total() == 0 {
        return Err(Error::EmptySample);
    }
    let (pf, qf) = (p.frequencies(), q.frequencies());
    Ok(0.5 * pf.iter().zip(&qf).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Total variation between empirical counts and a reference pmf.
///
/// Mass of the reference outside the counted alphabet is added to the sum.
pub fn tv_to_pmf(counts: &Counts, pmf: impl Fn(usize) -> f64) -> Result<f64> {
    if counts.total() == 0 {
        return Err(Error::EmptySample);
    }
    let freqs = counts.frequencies();
    let mut covered = 0.0;
    let mut sum = 0.0;
    for (k, f) in freqs.iter().enumerate() {
        let p = pmf(k);
        covered += p;
        sum += (f - p).abs();
    }
    sum += (1.0 - covered).max(0.0);
    Ok(0.5 * sum)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample standard deviation.
pub fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() as f64 - 1.0)).sqrt()
}

pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len());
    let (mx, my) = (mean(&xs[..n]), mean(&ys[..n]));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (dx, dy) = (xs[i] - mx, ys[i] - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    sxy / (sxx * syy).sqrt()
}

/// Sample autocorrelation at the given lag.
pub fn lag_correlation(xs: &[f64], lag: usize) -> f64 {
    correlation(&xs[..xs.len() - lag], &xs[lag..])
}

/// Batch-means 95% confidence interval `(mean, half_width)`.
pub fn batch_ci(series: &[f64], batches: usize) -> Result<(f64, f64)> {
    if batches < 2 || series.len() < 2 * batches {
        return Err(Error::param(
            "batches",
            format!(
                "need at least 2 batches and 2 points per batch, got {batches} batches for {} points",
                series.len()
            ),
        ));
    }
    let size = series.len() / batches;
    let means: Vec<f64> = series
        .chunks_exact(size)
        .take(batches)
        .map(mean)
        .collect();
    let grand = mean(&series[..size * batches]);
    let var: f64 =
        means.iter().map(|m| (m - grand) * (m - grand)).sum::<f64>() / (batches as f64 - 1.0);
    Ok((grand, 1.96 * (var / batches as f64).sqrt()))
}

/// JSON report fragment for a single thresholded statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub statistic: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Verdict {
    /// Passes when `value < threshold`.
    pub fn below(statistic: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            statistic: statistic.into(),
            value,
            threshold,
            pass: value < threshold,
        }
    }

    /// Passes when `|value - target| <= tolerance`; `threshold` records the tolerance.
    pub fn within(statistic: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self {
            statistic: format!("{} (target {target})", statistic.into()),
            value,
            threshold: tolerance,
            pass: (value - target).abs() <= tolerance,
        }
    }

    pub fn range(statistic: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            statistic: format!("{} in [{lo}, {hi}]", statistic.into()),
            value,
            threshold: hi,
            pass: (lo..=hi).contains(&value),
        }
    }

    pub fn flag(statistic: impl Into<String>, pass: bool) -> Self {
        Self {
            statistic: statistic.into(),
            value: if pass { 1.0 } else { 0.0 },
            threshold: 1.0,
            pass,
        }
    }
}
