//! The oracle suite run by `osctab verify`. Every check is exact except the
//! matrix and ODE identities, which use the stated float tolerances.

use std::fmt;

use num_traits::One;
use rand::Rng;

use crate::brute;
use crate::continuum;
use crate::moments::{self, MixedMomentSpec, MomentTable};
use crate::partitions::Partition;
use crate::tableaux;
use crate::walk::{self, WalkConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

fn outcome(name: &'static str, checked: usize, failures: Vec<String>) -> CheckOutcome {
    let passed = failures.is_empty();
    let detail = if passed {
        format!("{checked} cases")
    } else {
        format!("{} of {checked} cases failed, first: {}", failures.len(), failures[0])
    };
    CheckOutcome { name, passed, detail }
}

fn valid_starts(n: usize) -> impl Iterator<Item = usize> {
    (n % 2..=n).step_by(2)
}

pub fn enumeration_vs_formula(max_len: usize) -> CheckOutcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for k in 0..=4 {
        for shape in Partition::all_of_size(k) {
            for n in 0..=max_len {
                checked += 1;
                let listed = tableaux::enumerate_all_bounded(&shape, n, max_len).map(|v| v.len());
                let formula = tableaux::count_formula(&shape, n);
                if listed.as_ref().map(|&l| formula != l.into()).unwrap_or(true) {
                    failures.push(format!("{shape}, N={n}: {listed:?} vs {formula}"));
                }
            }
        }
    }
    outcome("enumeration vs count formula", checked, failures)
}

pub fn sampler_validity(seed: u64) -> CheckOutcome {
    let shapes: [(&[usize], usize); 4] = [(&[], 8), (&[2, 1], 11), (&[3, 1, 1], 15), (&[1], 21)];
    let mut rng = crate::seeded_rng(seed);
    let mut checked = 0;
    let mut failures = Vec::new();
    for (parts, n) in shapes {
        let shape = Partition::new(parts.to_vec()).expect("literal partition");
        for _ in 0..100 {
            checked += 1;
            match tableaux::sample_uniform_with(&shape, n, &mut rng) {
                Ok(t) if t.shape() == Some(&shape) && t.length() == n => {
                    if let Err(e) = t.validate() {
                        failures.push(format!("{shape}, N={n}: {e}"));
                    }
                }
                other => failures.push(format!("{shape}, N={n}: {other:?}")),
            }
        }
    }
    outcome("sampler validity", checked, failures)
}

pub fn recursion_vs_closed_forms(max_n: usize) -> CheckOutcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 4..=max_n {
        for y0 in valid_starts(n) {
            let table = MomentTable::compute(n, y0, 2).expect("valid endpoints");
            for x in 0..=n {
                checked += 1;
                let mean = moments::closed_form_mean(n, y0, x).expect("N >= 4");
                let second = moments::closed_form_second_moment(n, y0, x).expect("N >= 4");
                if table.get(x, 1) != Some(&mean) || table.get(x, 2) != Some(&second) {
                    failures.push(format!("N={n} Y0={y0} X={x}"));
                }
            }
        }
    }
    outcome("recursion vs closed-form moments", checked, failures)
}

pub fn covariance_routes(max_n: usize) -> CheckOutcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 4..=max_n {
        for y0 in valid_starts(n) {
            for x1 in 0..n {
                for x2 in x1 + 1..=n {
                    checked += 1;
                    let closed = moments::covariance(n, y0, x1, x2);
                    let mixed = moments::covariance_from_mixed_moments(n, y0, x1, x2);
                    if closed.is_err() || closed != mixed {
                        failures.push(format!("N={n} Y0={y0} ({x1},{x2})"));
                    }
                }
            }
        }
    }
    outcome("closed-form covariance vs mixed moments", checked, failures)
}

pub fn recursion_vs_paths(max_n: usize) -> CheckOutcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=max_n {
        for y0 in valid_starts(n) {
            let paths = brute::weighted_paths(n, y0);
            let expect = |f: &dyn Fn(&[usize]) -> crate::Rational| -> crate::Rational {
                paths.iter().map(|(h, p)| f(h) * p).sum()
            };
            let table = MomentTable::compute(n, y0, 4).expect("valid endpoints");
            for x in 0..=n {
                for k in 0..=4u32 {
                    checked += 1;
                    let want = expect(&|h| brute::height_power(h[x], k));
                    if table.get(x, k) != Some(&want) {
                        failures.push(format!("N={n} Y0={y0} E[H({x})^{k}]"));
                    }
                }
            }
            for x1 in 0..n {
                for x2 in x1 + 1..=n {
                    checked += 1;
                    let spec = MixedMomentSpec::new(vec![x1, x2], vec![1, 2]).expect("ordered");
                    let want = expect(&|h| brute::height_power(h[x1], 1) * brute::height_power(h[x2], 2));
                    if moments::mixed_moment(n, y0, &spec).ok() != Some(want) {
                        failures.push(format!("N={n} Y0={y0} E[H({x1}) H({x2})^2]"));
                    }
                }
            }
        }
    }
    outcome("recursion vs exhaustive paths", checked, failures)
}

pub fn propagator_normalization(max_n: usize) -> CheckOutcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=max_n {
        for y0 in valid_starts(n) {
            let cfg = WalkConfig::standard(n, y0).expect("valid endpoints");
            let slices = walk::evolve_distribution(&cfg).expect("exact weights");
            let table = MomentTable::compute(n, y0, 4).expect("valid endpoints");
            for s in &slices {
                checked += 1;
                if !s.total().is_one() {
                    failures.push(format!("N={n} Y0={y0} X={}: total {}", s.x, s.total()));
                }
                if (1..=4).any(|k| table.get(s.x, k) != Some(&s.moment(k))) {
                    failures.push(format!("N={n} Y0={y0} X={}: moments", s.x));
                }
            }
        }
    }
    outcome("master equation normalization and moments", checked, failures)
}

/// Sorted points in `[0.02, 0.98]` at least `0.02` apart.
pub fn random_interior_grid<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    loop {
        let mut pts: Vec<f64> = (0..len).map(|_| rng.gen_range(0.02..0.98)).collect();
        pts.sort_by(f64::total_cmp);
        if pts.windows(2).all(|w| w[1] - w[0] >= 0.02) {
            return pts;
        }
    }
}

pub const LEMMA_TOLERANCE: f64 = 1e-10;

pub fn covariance_lemma(seed: u64, grids: usize) -> CheckOutcome {
    let mut rng = crate::seeded_rng(seed);
    let mut failures = Vec::new();
    for g in 0..grids {
        let len = 1 + g % 6;
        let pts = random_interior_grid(&mut rng, len);
        match continuum::covariance_matrix_analysis(&pts) {
            Ok(a) => {
                let (det, id) = (a.determinant_relative_error(), a.identity_error());
                if det > LEMMA_TOLERANCE || id > LEMMA_TOLERANCE {
                    failures.push(format!("{pts:?}: det rel err {det:e}, identity err {id:e}"));
                }
            }
            Err(e) => failures.push(format!("{pts:?}: {e}")),
        }
    }
    outcome("covariance matrix determinant and inverse", grids, failures)
}

pub fn ode_residual(points: usize) -> CheckOutcome {
    let mut failures = Vec::new();
    for i in 1..=points {
        let x = i as f64 / (points + 1) as f64;
        let r = continuum::ode_residual(x * (1.0 - x), 1.0 - 2.0 * x, -2.0);
        if r.abs() > 1e-12 {
            failures.push(format!("x={x}: {r:e}"));
        }
    }
    outcome("extremal ODE residual of x(1-x)", points, failures)
}

/// Runs every check. `max_n` bounds the exhaustive path enumeration; the
/// cheaper exact checks run to `3 max_n`.
pub fn run_all(max_n: usize) -> Vec<CheckOutcome> {
    let wide = (3 * max_n).max(4);
    vec![
        enumeration_vs_formula(max_n.min(8)),
        sampler_validity(1),
        recursion_vs_closed_forms(wide),
        covariance_routes(wide.min(30)),
        recursion_vs_paths(max_n),
        propagator_normalization(wide.min(30)),
        covariance_lemma(1, 20),
        ode_residual(99),
    ]
}
