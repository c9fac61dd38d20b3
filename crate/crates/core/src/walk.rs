//! The area walk: a ±1 lattice walk of fixed length `N` whose down-step
//! probability depends on the position `(X, Y)`.
//!
//! With the standard weights the walk descends with probability `Y / (N - X)`
//! and ascends otherwise, so it is absorbed at height 0 exactly at `X = N`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Down-step probability family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightModel {
    /// `Y / (N - X)`.
    Standard,
    /// `(Y / (N - X))^k`.
    PowerK(u32),
    /// `(1 - q^Y) / (1 - q^(N - X))`.
    QDeformed(f64),
}

impl WeightModel {
    fn check(&self) -> Result<()> {
        match *self {
            WeightModel::Standard => Ok(()),
            WeightModel::PowerK(k) if k >= 1 => Ok(()),
            WeightModel::PowerK(k) => Err(Error::InvalidConfig(format!("power k = {k} must be >= 1"))),
            WeightModel::QDeformed(q) if q > 0.0 && q < 1.0 => Ok(()),
            WeightModel::QDeformed(q) => Err(Error::InvalidConfig(format!("q = {q} must lie in (0, 1)"))),
        }
    }

    /// Probability of a down step from height `y` with `remaining = N - X` steps left.
    pub fn down_probability(&self, remaining: usize, y: usize) -> f64 {
        let ratio = y as f64 / remaining as f64;
        match *self {
            WeightModel::Standard => ratio,
            WeightModel::PowerK(k) => ratio.powi(k as i32),
            WeightModel::QDeformed(q) => (1.0 - q.powi(y as i32)) / (1.0 - q.powi(remaining as i32)),
        }
    }

    /// Exact down-step probability; `q`-deformed weights have no rational form.
    pub fn down_probability_exact(&self, remaining: usize, y: usize) -> Result<Rational> {
        let ratio = rational::ratio(y as i64, remaining as i64);
        match *self {
            WeightModel::Standard => Ok(ratio),
            WeightModel::PowerK(k) => Ok(rational::pow(&ratio, k)),
            WeightModel::QDeformed(q) => Err(Error::ExactUnavailable(format!("q-deformed weights (q = {q})"))),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, WeightModel::QDeformed(_))
    }
}

impl std::fmt::Display for WeightModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightModel::Standard => write!(f, "standard"),
            WeightModel::PowerK(k) => write!(f, "power:{k}"),
            WeightModel::QDeformed(q) => write!(f, "q:{q}"),
        }
    }
}

impl std::str::FromStr for WeightModel {
    type Err = Error;

    /// `standard`, `power:K` or `q:Q`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let model = match s.split_once(':') {
            None if s == "standard" => WeightModel::Standard,
            Some(("power", k)) => WeightModel::PowerK(
                k.parse().map_err(|e| Error::Parse(format!("power {k:?}: {e}")))?,
            ),
            Some(("q", q)) => WeightModel::QDeformed(
                q.parse().map_err(|e| Error::Parse(format!("q {q:?}: {e}")))?,
            ),
            _ => return Err(Error::Parse(format!("unknown weight model {s:?}"))),
        };
        model.check()?;
        Ok(model)
    }
}

/// Length `N`, start height `Y0` and weights of one walk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    n: usize,
    y0: usize,
    weights: WeightModel,
}

impl WalkConfig {
    /// Requires `N >= 1`, `Y0 <= N` and `N ≡ Y0 (mod 2)` so that height 0 is
    /// reachable at `X = N`.
    pub fn new(n: usize, y0: usize, weights: WeightModel) -> Result<Self> {
        check_endpoints(n, y0)?;
        weights.check()?;
        Ok(WalkConfig { n, y0, weights })
    }

    pub fn standard(n: usize, y0: usize) -> Result<Self> {
        Self::new(n, y0, WeightModel::Standard)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn y0(&self) -> usize {
        self.y0
    }

    pub fn weights(&self) -> WeightModel {
        self.weights
    }
}

pub(crate) fn check_endpoints(n: usize, y0: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidConfig("length N must be at least 1".into()));
    }
    if y0 > n {
        return Err(Error::InvalidConfig(format!("start height {y0} exceeds length {n}")));
    }
    if !(n - y0).is_multiple_of(2) {
        return Err(Error::InvalidConfig(format!("N = {n} and Y0 = {y0} differ in parity")));
    }
    Ok(())
}

/// One trajectory `H(0), …, H(N)`. Serialized as a JSON integer array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WalkPath {
    heights: Vec<usize>,
}

impl WalkPath {
    pub fn from_heights(heights: Vec<usize>) -> Self {
        WalkPath { heights }
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    /// Checks ±1 steps, the start and end heights and `0 <= H(X) <= N - X`.
    pub fn check(&self, cfg: &WalkConfig) -> std::result::Result<(), String> {
        let h = &self.heights;
        if h.len() != cfg.n + 1 {
            return Err(format!("{} heights for a walk of length {}", h.len(), cfg.n));
        }
        if h[0] != cfg.y0 {
            return Err(format!("starts at {} instead of {}", h[0], cfg.y0));
        }
        if h[cfg.n] != 0 {
            return Err(format!("ends at {} instead of 0", h[cfg.n]));
        }
        for (x, &y) in h.iter().enumerate() {
            if y > cfg.n - x {
                return Err(format!("H({x}) = {y} exceeds N - X = {}", cfg.n - x));
            }
        }
        match h.windows(2).position(|w| w[0].abs_diff(w[1]) != 1) {
            Some(x) => Err(format!("step {x} is not ±1")),
            None => Ok(()),
        }
    }
}

/// Total box count along a path, `V = Σ H(X)`.
pub fn volume(path: &WalkPath) -> u64 {
    path.heights.iter().map(|&h| h as u64).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Probability {
    Exact(Rational),
    Real(f64),
}

impl Probability {
    pub fn to_f64(&self) -> f64 {
        match self {
            Probability::Exact(r) => rational::to_f64(r),
            Probability::Real(v) => *v,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepProbability {
    pub up: Probability,
    pub down: Probability,
}

/// Up and down probabilities at `(X, Y)`; exact except for `q`-deformed weights.
pub fn step_probability(cfg: &WalkConfig, x: usize, y: usize) -> Result<StepProbability> {
    if x >= cfg.n {
        return Err(Error::OutOfDomain(format!("X = {x} must be below N = {}", cfg.n)));
    }
    let remaining = cfg.n - x;
    if y > remaining {
        return Err(Error::OutOfDomain(format!("Y = {y} exceeds N - X = {remaining}")));
    }
    Ok(match cfg.weights.down_probability_exact(remaining, y) {
        Ok(down) => StepProbability { up: Probability::Exact(Rational::one() - &down), down: Probability::Exact(down) },
        Err(_) => {
            let down = cfg.weights.down_probability(remaining, y);
            StepProbability { up: Probability::Real(1.0 - down), down: Probability::Real(down) }
        }
    })
}

fn steps_down<R: Rng + ?Sized>(weights: WeightModel, remaining: usize, y: usize, rng: &mut R) -> bool {
    match weights {
        WeightModel::Standard => rng.gen_range(0..remaining) < y,
        WeightModel::PowerK(k) => match (remaining as u64).checked_pow(k) {
            Some(den) => rng.gen_range(0..den) < (y as u64).pow(k),
            None => rng.gen::<f64>() < weights.down_probability(remaining, y),
        },
        WeightModel::QDeformed(_) => rng.gen::<f64>() < weights.down_probability(remaining, y),
    }
}

pub fn simulate(cfg: &WalkConfig, seed: u64) -> WalkPath {
    simulate_with(cfg, &mut crate::seeded_rng(seed))
}

/// Samples one trajectory, one draw per step. Rational weights are sampled
/// exactly with integer draws.
pub fn simulate_with<R: Rng + ?Sized>(cfg: &WalkConfig, rng: &mut R) -> WalkPath {
    let mut heights = Vec::with_capacity(cfg.n + 1);
    let mut y = cfg.y0;
    heights.push(y);
    for x in 0..cfg.n {
        if steps_down(cfg.weights, cfg.n - x, y, rng) {
            y -= 1;
        } else {
            y += 1;
        }
        heights.push(y);
    }
    WalkPath { heights }
}

/// Exact marginal law `p(X, ·)` of the height at one step.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionSlice {
    pub x: usize,
    pub probs: BTreeMap<usize, Rational>,
}

impl DistributionSlice {
    pub fn total(&self) -> Rational {
        self.probs.values().sum()
    }

    /// `Σ Y^n p(X, Y)`.
    pub fn moment(&self, order: u32) -> Rational {
        self.probs
            .iter()
            .map(|(&y, p)| rational::pow(&rational::int(y as i64), order) * p)
            .sum()
    }
}

impl Serialize for DistributionSlice {
    /// `{"Y": "num/den", ...}`.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.probs.len()))?;
        for (y, p) in &self.probs {
            map.serialize_entry(&y.to_string(), &rational::to_exact_string(p))?;
        }
        map.end()
    }
}

/// Propagates the master equation
/// `p(X+1, Y) = P[up | Y-1] p(X, Y-1) + P[down | Y+1] p(X, Y+1)` from
/// `p(0, Y0) = 1` in exact rationals. Returns slices `X = 0..=N`.
pub fn evolve_distribution(cfg: &WalkConfig) -> Result<Vec<DistributionSlice>> {
    let mut cur: BTreeMap<usize, Rational> = BTreeMap::from([(cfg.y0, Rational::one())]);
    let mut out = Vec::with_capacity(cfg.n + 1);
    for x in 0..cfg.n {
        let remaining = cfg.n - x;
        let mut next: BTreeMap<usize, Rational> = BTreeMap::new();
        for (&y, p) in &cur {
            let down = cfg.weights.down_probability_exact(remaining, y)?;
            let up = Rational::one() - &down;
            if !down.is_zero() {
                *next.entry(y - 1).or_insert_with(Rational::zero) += &down * p;
            }
            if !up.is_zero() {
                *next.entry(y + 1).or_insert_with(Rational::zero) += up * p;
            }
        }
        out.push(DistributionSlice { x, probs: cur });
        cur = next;
    }
    out.push(DistributionSlice { x: cfg.n, probs: cur });
    Ok(out)
}

/// Floating-point master equation, available for every weight model.
pub fn evolve_distribution_f64(cfg: &WalkConfig) -> Vec<BTreeMap<usize, f64>> {
    let mut cur = BTreeMap::from([(cfg.y0, 1.0)]);
    let mut out = Vec::with_capacity(cfg.n + 1);
    for x in 0..cfg.n {
        let remaining = cfg.n - x;
        let mut next: BTreeMap<usize, f64> = BTreeMap::new();
        for (&y, &p) in &cur {
            let down = cfg.weights.down_probability(remaining, y);
            if down > 0.0 {
                *next.entry(y - 1).or_default() += down * p;
            }
            if down < 1.0 {
                *next.entry(y + 1).or_default() += (1.0 - down) * p;
            }
        }
        out.push(cur);
        cur = next;
    }
    out.push(cur);
    out
}
