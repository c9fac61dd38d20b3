//! Seeded Monte Carlo checks against exact values.

use std::collections::{BTreeMap, BTreeSet};

use osctab::moments;
use osctab::rational::to_f64;
use osctab::stats;
use osctab::tableaux;
use osctab::walk::{self, WalkConfig};
use osctab::Partition;

/// Goodness of fit with low-expectation bins pooled until each holds at least 5 expected counts.
fn pooled_fit(
    observed: &BTreeMap<usize, u64>,
    probs: &BTreeMap<usize, f64>,
    runs: u64,
    significance: f64,
) -> stats::ChiSquaredTest {
    let (mut obs, mut exp) = (Vec::new(), Vec::new());
    let (mut o_acc, mut p_acc) = (0u64, 0.0);
    for (y, &p) in probs {
        o_acc += observed.get(y).copied().unwrap_or(0);
        p_acc += p;
        if p_acc * runs as f64 >= 5.0 {
            obs.push(o_acc);
            exp.push(p_acc);
            (o_acc, p_acc) = (0, 0.0);
        }
    }
    if p_acc > 0.0 || o_acc > 0 {
        match (obs.last_mut(), exp.last_mut()) {
            (Some(o), Some(e)) => {
                *o += o_acc;
                *e += p_acc;
            }
            _ => {
                obs.push(o_acc);
                exp.push(p_acc);
            }
        }
    }
    stats::chi_squared_goodness_of_fit(&obs, &exp, significance)
}

#[test]
fn distribution_matches_simulation() {
    const RUNS: usize = 50_000;
    let cases = [(8usize, 0usize), (13, 3), (20, 0), (20, 6)];
    // 1% family-wise over the twelve slice tests
    let significance = 0.01 / (3 * cases.len()) as f64;
    for (n, y0) in cases {
        let cfg = WalkConfig::standard(n, y0).unwrap();
        let slices = walk::evolve_distribution(&cfg).unwrap();
        let paths = stats::simulate_paths(&cfg, RUNS, 31 + n as u64, 4, |p| p.heights().to_vec());
        for x in [n / 4, n / 2, 3 * n / 4] {
            let mut observed = BTreeMap::new();
            for h in &paths {
                *observed.entry(h[x]).or_insert(0u64) += 1;
            }
            let probs: BTreeMap<usize, f64> = slices[x].probs.iter().map(|(&y, p)| (y, to_f64(p))).collect();
            assert!(observed.keys().all(|y| probs.contains_key(y)), "N={n} X={x}: height outside support");
            let test = pooled_fit(&observed, &probs, RUNS as u64, significance);
            assert!(test.pass, "N={n} Y0={y0} X={x}: {test:?}");
        }
    }
}

#[test]
fn paths_stay_in_the_triangle() {
    let cfg = WalkConfig::standard(300, 40).unwrap();
    let paths = stats::simulate_paths(&cfg, 200, 5, 2, |p| p.heights().to_vec());
    for h in paths {
        assert!(h.iter().enumerate().all(|(x, &y)| y <= 300 - x));
        assert_eq!(*h.last().unwrap(), 0);
    }
}

#[test]
fn tableau_areas_match_walk_for_nonempty_shapes() {
    let cases = [(vec![1], 5usize), (vec![2, 1], 7), (vec![2], 6)];
    // 1% family-wise over the three shapes
    let significance = 0.01 / cases.len() as f64;
    for (parts, n) in cases {
        let shape = Partition::new(parts).unwrap();
        let cfg = WalkConfig::standard(n, shape.size()).unwrap();
        let mut rng = osctab::seeded_rng(77);
        let (mut a, mut b) = (BTreeMap::new(), BTreeMap::new());
        for _ in 0..20_000 {
            let t = tableaux::sample_uniform_with(&shape, n, &mut rng).unwrap();
            *a.entry(t.area_sequence().heights().to_vec()).or_insert(0u64) += 1;
            *b.entry(walk::simulate_with(&cfg, &mut rng).heights().to_vec()).or_insert(0u64) += 1;
        }
        let keys: BTreeSet<_> = a.keys().chain(b.keys()).cloned().collect();
        let ca: Vec<u64> = keys.iter().map(|k| a.get(k).copied().unwrap_or(0)).collect();
        let cb: Vec<u64> = keys.iter().map(|k| b.get(k).copied().unwrap_or(0)).collect();
        let test = stats::chi_squared_two_sample(&ca, &cb, significance);
        assert!(test.pass, "{shape}, N={n}: {test:?}");
    }
}

#[test]
fn covariance_profile_tracks_exact_covariance() {
    let cfg = WalkConfig::standard(5000, 0).unwrap();
    let profile = stats::covariance_profile(&cfg, 2500, 5000, 404, 500).unwrap();
    assert_eq!(profile.len(), 11);
    for p in profile {
        let exact = if p.x == 2500 {
            moments::closed_form_variance(5000, 0, 2500).unwrap()
        } else {
            let (a, b) = if p.x < 2500 { (p.x, 2500) } else { (2500, p.x) };
            moments::covariance(5000, 0, a, b).unwrap()
        };
        let exact = to_f64(&exact);
        assert!(
            (p.covariance - exact).abs() <= 3.0 * p.std_error,
            "X={}: {} vs {exact} (se {})",
            p.x,
            p.covariance,
            p.std_error
        );
    }
}

#[test]
fn sample_mean_error_shrinks_with_samples() {
    let cfg = WalkConfig::standard(200, 0).unwrap();
    let exact = to_f64(&moments::closed_form_mean(200, 0, 100).unwrap());
    let errors: Vec<f64> = [100usize, 1_000, 10_000]
        .iter()
        .map(|&samples| {
            let seeds = 20;
            (0..seeds)
                .map(|s| {
                    let h = stats::simulate_paths(&cfg, samples, 1000 + s, 4, |p| p.heights()[100] as f64);
                    (h.iter().sum::<f64>() / samples as f64 - exact).abs()
                })
                .sum::<f64>()
                / seeds as f64
        })
        .collect();
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((2.0..=5.0).contains(&ratio), "errors {errors:?}");
    }
}
