//! Monte Carlo campaigns over the area walk and the goodness-of-fit checks
//! used to compare samples with exact laws.
//!
//! Sample `i` of a campaign draws from stream `i` of the seeded generator, so
//! a campaign's output is fixed by `(config, seed, samples)` regardless of
//! how samples are split across worker threads.

use std::fmt::Write as _;

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::moments;
use crate::rational;
use crate::walk::{self, WalkConfig, WalkPath};

pub const DEFAULT_BINS: usize = 50;

/// Histogram half-width in sample standard deviations.
pub const HISTOGRAM_SPAN: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObservableSpec {
    HeightAt { x: usize },
    /// `(H(X) - E[H(X)]) / √N`.
    ScaledFluctuationAt { x: usize },
    Volume,
    /// `(V - N²/6 - Y0 N/3) / N^(3/2)`; at `Y0 = 0` this is `(V - N²/6) / √N³`.
    ScaledVolume,
    /// Summarizes the product `H(X1) H(X2)` and reports the sample covariance.
    PairHeights { x1: usize, x2: usize },
}

impl ObservableSpec {
    pub fn label(&self) -> String {
        match self {
            ObservableSpec::HeightAt { x } => format!("height:{x}"),
            ObservableSpec::ScaledFluctuationAt { x } => format!("fluctuation:{x}"),
            ObservableSpec::Volume => "volume".into(),
            ObservableSpec::ScaledVolume => "scaled_volume".into(),
            ObservableSpec::PairHeights { x1, x2 } => format!("pair:{x1}:{x2}"),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let bad = match *self {
            ObservableSpec::HeightAt { x } | ObservableSpec::ScaledFluctuationAt { x } => x > n,
            ObservableSpec::PairHeights { x1, x2 } => x1 > n || x2 > n,
            _ => false,
        };
        if bad {
            return Err(Error::OutOfDomain(format!("{} outside [0, {n}]", self.label())));
        }
        Ok(())
    }
}

impl std::str::FromStr for ObservableSpec {
    type Err = Error;

    /// `height:X`, `fluctuation:X`, `volume`, `scaled_volume` or `pair:X1:X2`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let idx = |t: &str| t.parse::<usize>().map_err(|e| Error::Parse(format!("index {t:?}: {e}")));
        Ok(match parts.as_slice() {
            ["height", x] => ObservableSpec::HeightAt { x: idx(x)? },
            ["fluctuation", x] => ObservableSpec::ScaledFluctuationAt { x: idx(x)? },
            ["volume"] => ObservableSpec::Volume,
            ["scaled_volume"] => ObservableSpec::ScaledVolume,
            ["pair", a, b] => ObservableSpec::PairHeights { x1: idx(a)?, x2: idx(b)? },
            _ => return Err(Error::Parse(format!("unknown observable {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Campaign {
    pub cfg: WalkConfig,
    pub samples: usize,
    pub seed: u64,
    pub observables: Vec<ObservableSpec>,
    pub bins: usize,
    pub workers: usize,
}

impl Campaign {
    pub fn new(cfg: WalkConfig, samples: usize, seed: u64, observables: Vec<ObservableSpec>) -> Self {
        Campaign { cfg, samples, seed, observables, bins: DEFAULT_BINS, workers: 1 }
    }
}

/// The generator for sample `index` of a campaign seeded with `seed`.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Simulates `samples` paths, sample `i` on stream `i`, split over `workers` threads.
pub fn simulate_paths<T: Send>(
    cfg: &WalkConfig,
    samples: usize,
    seed: u64,
    workers: usize,
    observe: impl Fn(&WalkPath) -> T + Sync,
) -> Vec<T> {
    let workers = workers.clamp(1, samples.max(1));
    let chunk = samples.div_ceil(workers);
    let observe = &observe;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w * chunk..((w + 1) * chunk).min(samples))
                        .map(|i| observe(&walk::simulate_with(cfg, &mut sample_rng(seed, i))))
                        .collect::<Vec<T>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Samples that fell outside the binned range.
    pub outside: u64,
}

impl Histogram {
    /// `bins` equal bins over `[lo, hi)`; the last bin also takes `hi`.
    pub fn build(values: &[f64], bins: usize, lo: f64, hi: f64) -> Self {
        let bins = bins.max(1);
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0u64; bins];
        let mut outside = 0;
        for &v in values {
            if width > 0.0 && v >= lo && v <= hi {
                let i = (((v - lo) / width) as usize).min(bins - 1);
                counts[i] += 1;
            } else {
                outside += 1;
            }
        }
        Histogram { edges, counts, outside }
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
        self.counts.iter().enumerate().map(|(i, &c)| (self.edges[i], self.edges[i + 1], c))
    }
}

/// Sample mean and variance with their standard errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error_mean: f64,
    pub std_error_variance: f64,
}

impl SampleSummary {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
        let variance = if values.len() > 1 { m2 * n / (n - 1.0) } else { 0.0 };
        // Var(s²) ≈ (μ4 - σ⁴ (n-3)/(n-1)) / n
        let var_of_var = if values.len() > 3 {
            (m4 - variance * variance * (n - 3.0) / (n - 1.0)) / n
        } else {
            f64::NAN
        };
        SampleSummary {
            count: values.len(),
            mean,
            variance,
            std_error_mean: (variance / n).sqrt(),
            std_error_variance: var_of_var.max(0.0).sqrt(),
        }
    }

    /// `|mean - target| <= k · se(mean)`.
    pub fn mean_within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error_mean
    }

    pub fn variance_within(&self, target: f64, k: f64) -> bool {
        (self.variance - target).abs() <= k * self.std_error_variance
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairEstimate {
    pub mean_first: f64,
    pub mean_second: f64,
    pub covariance: f64,
    pub std_error_covariance: f64,
}

/// Sample covariance of paired values with its standard error
/// `√((E[(a-ā)²(b-b̄)²] - cov²) / n)`.
pub fn sample_covariance(a: &[f64], b: &[f64]) -> PairEstimate {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let prods: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).collect();
    let cov_biased = prods.iter().sum::<f64>() / n;
    let fourth = prods.iter().map(|p| p * p).sum::<f64>() / n;
    PairEstimate {
        mean_first: ma,
        mean_second: mb,
        covariance: cov_biased * n / (n - 1.0),
        std_error_covariance: ((fourth - cov_biased * cov_biased).max(0.0) / n).sqrt(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableEstimate {
    pub observable: ObservableSpec,
    pub label: String,
    pub summary: SampleSummary,
    pub histogram: Histogram,
    pub pair: Option<PairEstimate>,
    #[serde(skip)]
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub n: usize,
    pub y0: usize,
    pub samples: usize,
    pub seed: u64,
    pub estimates: Vec<ObservableEstimate>,
}

impl EstimateReport {
    pub fn get(&self, spec: &ObservableSpec) -> Option<&ObservableEstimate> {
        self.estimates.iter().find(|e| &e.observable == spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    /// Summary rows `observable,statistic,value`, then a blank line, then
    /// histogram rows `observable,bin_left,bin_right,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("observable,statistic,value\n");
        for e in &self.estimates {
            let s = &e.summary;
            for (name, v) in [
                ("count", s.count as f64),
                ("mean", s.mean),
                ("variance", s.variance),
                ("std_error_mean", s.std_error_mean),
                ("std_error_variance", s.std_error_variance),
            ] {
                let _ = writeln!(out, "{},{name},{v}", e.label);
            }
            if let Some(p) = &e.pair {
                let _ = writeln!(out, "{},covariance,{}", e.label, p.covariance);
                let _ = writeln!(out, "{},std_error_covariance,{}", e.label, p.std_error_covariance);
            }
        }
        out.push_str("\nobservable,bin_left,bin_right,count\n");
        for e in &self.estimates {
            for (l, r, c) in e.histogram.rows() {
                let _ = writeln!(out, "{},{l},{r},{c}", e.label);
            }
        }
        out
    }
}

fn exact_mean_f64(cfg: &WalkConfig, x: usize) -> f64 {
    let m = if cfg.n() >= 2 {
        moments::closed_form_mean(cfg.n(), cfg.y0(), x)
    } else {
        moments::moment(cfg.n(), cfg.y0(), x, 1)
    };
    rational::to_f64(&m.expect("x checked against N"))
}

pub fn run_campaign(c: &Campaign) -> Result<EstimateReport> {
    if c.samples == 0 {
        return Err(Error::TooFewSamples(0, 1));
    }
    for o in &c.observables {
        o.check(c.cfg.n())?;
    }
    let n = c.cfg.n() as f64;
    let y0 = c.cfg.y0() as f64;
    let centers: Vec<f64> = c
        .observables
        .iter()
        .map(|o| match *o {
            ObservableSpec::ScaledFluctuationAt { x } => exact_mean_f64(&c.cfg, x),
            ObservableSpec::ScaledVolume => n * n / 6.0 + y0 * n / 3.0,
            _ => 0.0,
        })
        .collect();
    let observables = &c.observables;
    let rows: Vec<Vec<(f64, f64)>> = simulate_paths(&c.cfg, c.samples, c.seed, c.workers, |path| {
        let h = path.heights();
        observables
            .iter()
            .zip(&centers)
            .map(|(o, &center)| match *o {
                ObservableSpec::HeightAt { x } => (h[x] as f64, 0.0),
                ObservableSpec::ScaledFluctuationAt { x } => ((h[x] as f64 - center) / n.sqrt(), 0.0),
                ObservableSpec::Volume => (walk::volume(path) as f64, 0.0),
                ObservableSpec::ScaledVolume => ((walk::volume(path) as f64 - center) / n.powf(1.5), 0.0),
                ObservableSpec::PairHeights { x1, x2 } => (h[x1] as f64, h[x2] as f64),
            })
            .collect()
    });

    let estimates = c
        .observables
        .iter()
        .enumerate()
        .map(|(k, &observable)| {
            let (values, pair) = match observable {
                ObservableSpec::PairHeights { .. } => {
                    let a: Vec<f64> = rows.iter().map(|r| r[k].0).collect();
                    let b: Vec<f64> = rows.iter().map(|r| r[k].1).collect();
                    let pair = sample_covariance(&a, &b);
                    (a.iter().zip(&b).map(|(x, y)| x * y).collect(), Some(pair))
                }
                _ => (rows.iter().map(|r| r[k].0).collect::<Vec<f64>>(), None),
            };
            let summary = SampleSummary::from_values(&values);
            let sd = summary.variance.sqrt();
            let histogram = Histogram::build(
                &values,
                c.bins,
                summary.mean - HISTOGRAM_SPAN * sd,
                summary.mean + HISTOGRAM_SPAN * sd,
            );
            ObservableEstimate { observable, label: observable.label(), summary, histogram, pair, values }
        })
        .collect();
    Ok(EstimateReport { n: c.cfg.n(), y0: c.cfg.y0(), samples: c.samples, seed: c.seed, estimates })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CovariancePoint {
    pub x: usize,
    pub covariance: f64,
    pub std_error: f64,
}

/// Sample `Cov[H(x_fixed), H(X)]` for `X = 0, stride, 2 stride, …` and `X = N`.
pub fn covariance_profile(
    cfg: &WalkConfig,
    x_fixed: usize,
    samples: usize,
    seed: u64,
    stride: usize,
) -> Result<Vec<CovariancePoint>> {
    if x_fixed > cfg.n() {
        return Err(Error::OutOfDomain(format!("X = {x_fixed} exceeds N = {}", cfg.n())));
    }
    if samples < 2 {
        return Err(Error::TooFewSamples(samples, 2));
    }
    let stride = stride.max(1);
    let mut xs: Vec<usize> = (0..=cfg.n()).step_by(stride).collect();
    if xs.last() != Some(&cfg.n()) {
        xs.push(cfg.n());
    }
    let workers = std::thread::available_parallelism().map_or(1, |p| p.get());
    let paths = simulate_paths(cfg, samples, seed, workers, |p| p.heights().to_vec());
    let fixed: Vec<f64> = paths.iter().map(|h| h[x_fixed] as f64).collect();
    Ok(xs
        .into_iter()
        .map(|x| {
            let other: Vec<f64> = paths.iter().map(|h| h[x] as f64).collect();
            let est = sample_covariance(&fixed, &other);
            CovariancePoint { x, covariance: est.covariance, std_error: est.std_error_covariance }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormalityReport {
    pub count: usize,
    pub skewness: f64,
    pub std_error_skewness: f64,
    pub excess_kurtosis: f64,
    pub std_error_kurtosis: f64,
    pub pass: bool,
}

pub const NORMALITY_MIN_SAMPLES: usize = 100;

/// Sample skewness and excess kurtosis against their standard errors under
/// normality; passes when both lie within 4 standard errors of 0. Degenerate
/// (zero-variance) samples fail.
pub fn normality_check(samples: &[f64]) -> Result<NormalityReport> {
    if samples.len() < NORMALITY_MIN_SAMPLES {
        return Err(Error::TooFewSamples(samples.len(), NORMALITY_MIN_SAMPLES));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let m2 = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m3 = samples.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
    let m4 = samples.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    let skewness = m3 / m2.powf(1.5);
    let excess_kurtosis = m4 / (m2 * m2) - 3.0;
    let se_skew = (6.0 * n * (n - 1.0) / ((n - 2.0) * (n + 1.0) * (n + 3.0))).sqrt();
    let se_kurt = 2.0 * se_skew * ((n * n - 1.0) / ((n - 3.0) * (n + 5.0))).sqrt();
    let pass = m2 > 0.0
        && skewness.abs() <= 4.0 * se_skew
        && excess_kurtosis.abs() <= 4.0 * se_kurt;
    Ok(NormalityReport {
        count: samples.len(),
        skewness,
        std_error_skewness: se_skew,
        excess_kurtosis,
        std_error_kurtosis: se_kurt,
        pass,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiSquaredTest {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub critical_value: f64,
    pub significance: f64,
    pub pass: bool,
}

/// Upper `significance` quantile of the chi-squared law.
pub fn chi_squared_critical(degrees_of_freedom: usize, significance: f64) -> f64 {
    ChiSquared::new(degrees_of_freedom as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(1.0 - significance)
}

fn finish(statistic: f64, dof: usize, significance: f64) -> ChiSquaredTest {
    if dof == 0 {
        return ChiSquaredTest {
            statistic,
            degrees_of_freedom: 0,
            critical_value: 0.0,
            significance,
            pass: statistic == 0.0,
        };
    }
    let critical_value = chi_squared_critical(dof, significance);
    ChiSquaredTest { statistic, degrees_of_freedom: dof, critical_value, significance, pass: statistic < critical_value }
}

/// Pearson statistic of observed counts against expected probabilities.
pub fn chi_squared_goodness_of_fit(observed: &[u64], expected: &[f64], significance: f64) -> ChiSquaredTest {
    let total: u64 = observed.iter().sum();
    let statistic = observed
        .iter()
        .zip(expected)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    finish(statistic, observed.len().saturating_sub(1), significance)
}

pub fn chi_squared_uniform(observed: &[u64], significance: f64) -> ChiSquaredTest {
    let p = 1.0 / observed.len() as f64;
    chi_squared_goodness_of_fit(observed, &vec![p; observed.len()], significance)
}

/// Two-sample homogeneity statistic `Σ (K1 a - K2 b)² / (a + b)` with
/// `K1 = √(B/A)`, `K2 = √(A/B)`; bins empty in both samples are dropped.
pub fn chi_squared_two_sample(a: &[u64], b: &[u64], significance: f64) -> ChiSquaredTest {
    let (sa, sb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let (k1, k2) = ((sb / sa).sqrt(), (sa / sb).sqrt());
    let mut statistic = 0.0;
    let mut used = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        if x + y == 0 {
            continue;
        }
        used += 1;
        statistic += (k1 * x as f64 - k2 * y as f64).powi(2) / (x + y) as f64;
    }
    finish(statistic, used.saturating_sub(1), significance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn observable_parsing() {
        assert_eq!("height:4".parse::<ObservableSpec>().unwrap(), ObservableSpec::HeightAt { x: 4 });
        assert_eq!(
            "pair:1:9".parse::<ObservableSpec>().unwrap(),
            ObservableSpec::PairHeights { x1: 1, x2: 9 }
        );
        assert_eq!("scaled_volume".parse::<ObservableSpec>().unwrap(), ObservableSpec::ScaledVolume);
        assert!("height".parse::<ObservableSpec>().is_err());
        assert!("height:x".parse::<ObservableSpec>().is_err());
        for o in [
            ObservableSpec::HeightAt { x: 2 },
            ObservableSpec::ScaledFluctuationAt { x: 3 },
            ObservableSpec::Volume,
            ObservableSpec::ScaledVolume,
            ObservableSpec::PairHeights { x1: 0, x2: 5 },
        ] {
            assert_eq!(o.label().parse::<ObservableSpec>().unwrap(), o);
        }
    }

    #[test]
    fn unique_path_volume() {
        let cfg = WalkConfig::standard(2, 0).unwrap();
        let report = run_campaign(&Campaign::new(cfg, 64, 3, vec![ObservableSpec::Volume])).unwrap();
        let e = report.get(&ObservableSpec::Volume).unwrap();
        assert!(e.values.iter().all(|&v| v == 1.0));
        assert_eq!(e.summary.mean, 1.0);
        assert_eq!(e.summary.variance, 0.0);
    }

    #[test]
    fn campaign_rejects_bad_input() {
        let cfg = WalkConfig::standard(10, 0).unwrap();
        assert!(run_campaign(&Campaign::new(cfg, 0, 1, vec![])).is_err());
        assert!(run_campaign(&Campaign::new(cfg, 5, 1, vec![ObservableSpec::HeightAt { x: 11 }])).is_err());
    }

    #[test]
    fn campaigns_are_reproducible_across_worker_counts() {
        let cfg = WalkConfig::standard(60, 4).unwrap();
        let obs = vec![
            ObservableSpec::ScaledFluctuationAt { x: 30 },
            ObservableSpec::ScaledVolume,
            ObservableSpec::PairHeights { x1: 10, x2: 40 },
        ];
        let mut c = Campaign::new(cfg, 500, 42, obs);
        let one = run_campaign(&c).unwrap();
        c.workers = 7;
        let seven = run_campaign(&c).unwrap();
        assert_eq!(one, seven);
        assert_eq!(one.to_json(), seven.to_json());
        c.seed = 43;
        assert_ne!(run_campaign(&c).unwrap(), one);
    }

    #[test]
    fn csv_and_histogram_layout() {
        let cfg = WalkConfig::standard(20, 0).unwrap();
        let mut c = Campaign::new(cfg, 200, 9, vec![ObservableSpec::HeightAt { x: 10 }]);
        c.bins = 8;
        let r = run_campaign(&c).unwrap();
        let e = &r.estimates[0];
        assert_eq!(e.histogram.counts.len(), 8);
        assert_eq!(e.histogram.counts.iter().sum::<u64>() + e.histogram.outside, 200);
        let csv = r.to_csv();
        assert!(csv.starts_with("observable,statistic,value\nheight:10,count,200\n"));
        assert!(csv.contains("\nobservable,bin_left,bin_right,count\n"));
        assert_eq!(csv.lines().filter(|l| l.starts_with("height:10,")).count(), 5 + 8);
    }

    #[test]
    fn summary_statistics() {
        let s = SampleSummary::from_values(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
        let p = sample_covariance(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]);
        assert!((p.covariance - 2.0).abs() < 1e-15);
    }

    #[test]
    fn normality_examples() {
        let mut rng = crate::seeded_rng(17);
        let sums: Vec<f64> = (0..10_000)
            .map(|_| (0..400).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).sum())
            .collect();
        assert!(normality_check(&sums).unwrap().pass);
        assert!(!normality_check(&vec![3.0; 500]).unwrap().pass);
        let skewed: Vec<f64> = (0..5000).map(|_| rng.gen::<f64>().powi(4)).collect();
        assert!(!normality_check(&skewed).unwrap().pass);
        assert_eq!(normality_check(&[0.0; 99]), Err(Error::TooFewSamples(99, 100)));
    }

    #[test]
    fn chi_squared_tables() {
        assert!((chi_squared_critical(19, 0.01) - 36.1909).abs() < 1e-3);
        assert!((chi_squared_critical(1, 0.01) - 6.6349).abs() < 1e-3);
        let t = chi_squared_uniform(&[100, 100, 100, 100], 0.01);
        assert_eq!(t.statistic, 0.0);
        assert!(t.pass);
        let t = chi_squared_uniform(&[400, 0, 0, 0], 0.01);
        assert!(!t.pass);
        let t = chi_squared_two_sample(&[50, 50, 0], &[100, 100, 0], 0.01);
        assert_eq!(t.degrees_of_freedom, 1);
        assert!(t.statistic.abs() < 1e-12);
        assert!(!chi_squared_two_sample(&[90, 10], &[10, 90], 0.01).pass);
    }

    #[test]
    fn covariance_profile_endpoints() {
        let cfg = WalkConfig::standard(40, 0).unwrap();
        let prof = covariance_profile(&cfg, 20, 2000, 5, 5).unwrap();
        assert_eq!(prof.first().unwrap().x, 0);
        assert_eq!(prof.first().unwrap().covariance, 0.0);
        assert_eq!(prof.last().unwrap().x, 40);
        assert_eq!(prof.last().unwrap().covariance, 0.0);
        let diag = prof.iter().find(|p| p.x == 20).unwrap();
        let report = run_campaign(&Campaign::new(cfg, 2000, 5, vec![ObservableSpec::HeightAt { x: 20 }])).unwrap();
        assert!((diag.covariance - report.estimates[0].summary.variance).abs() < 1e-9);
    }
}
