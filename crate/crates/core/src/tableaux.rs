//! Oscillating tableaux: validation, exact counts, enumeration and uniform sampling.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{syt_count, Partition};
use crate::walk::WalkPath;

/// Largest length `enumerate_all` accepts unless a bound is passed explicitly.
pub const DEFAULT_ENUMERATION_BOUND: usize = 10;

/// A sequence `∅ = λ⁽⁰⁾, …, λ⁽ᴺ⁾ = λ` of partitions.
///
/// Construction does not check the one-box condition; call
/// [`OscillatingTableau::validate`] for that. Serialized as a JSON array of
/// partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OscillatingTableau {
    steps: Vec<Partition>,
}

impl OscillatingTableau {
    pub fn new(steps: Vec<Partition>) -> Self {
        OscillatingTableau { steps }
    }

    pub fn steps(&self) -> &[Partition] {
        &self.steps
    }

    /// Number of steps `N`.
    pub fn length(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn shape(&self) -> Option<&Partition> {
        self.steps.last()
    }

    /// `Err` carries the first violated condition.
    pub fn validate(&self) -> std::result::Result<(), String> {
        match self.steps.first() {
            None => return Err("tableau has no partitions".into()),
            Some(first) if !first.is_empty() => {
                return Err(format!("starts at {first}, not at ∅"));
            }
            _ => {}
        }
        for (i, w) in self.steps.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            let one_box = a.successors().contains(b) || a.predecessors().contains(b);
            if !one_box {
                return Err(format!("step {i}: {a} -> {b} is not a single corner move"));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Box counts read from `λ⁽ᴺ⁾` back to `λ⁽⁰⁾`, so `H(0) = |λ|` and `H(N) = 0`.
    pub fn area_sequence(&self) -> WalkPath {
        WalkPath::from_heights(self.steps.iter().rev().map(Partition::size).collect())
    }
}

fn double_factorial(m: i64) -> BigUint {
    let mut acc = BigUint::one();
    let mut m = m;
    while m > 1 {
        acc *= m as u64;
        m -= 2;
    }
    acc
}

fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Number of oscillating tableaux of the given shape and length:
/// `C(N, k) (N-k-1)!! f^λ` when `N - k` is even and nonnegative, otherwise 0.
pub fn count_formula(shape: &Partition, length: usize) -> BigUint {
    let k = shape.size();
    if length < k || !(length - k).is_multiple_of(2) {
        return BigUint::zero();
    }
    binomial_big(length, k) * double_factorial(length as i64 - k as i64 - 1) * syt_count(shape)
}

/// Number of boxes in the symmetric difference of two diagrams, i.e. the
/// least number of one-box moves between them.
fn box_distance(a: &Partition, b: &Partition) -> usize {
    let (pa, pb) = (a.parts(), b.parts());
    (0..pa.len().max(pb.len()))
        .map(|i| {
            let x = pa.get(i).copied().unwrap_or(0);
            let y = pb.get(i).copied().unwrap_or(0);
            x.abs_diff(y)
        })
        .sum()
}

pub fn enumerate_all(shape: &Partition, length: usize) -> Result<Vec<OscillatingTableau>> {
    enumerate_all_bounded(shape, length, DEFAULT_ENUMERATION_BOUND)
}

/// Every oscillating tableau of the given shape and length, by depth-first
/// corner expansion from `∅`.
pub fn enumerate_all_bounded(
    shape: &Partition,
    length: usize,
    bound: usize,
) -> Result<Vec<OscillatingTableau>> {
    if length > bound {
        return Err(Error::BoundExceeded { length, bound });
    }
    fn go(
        target: &Partition,
        remaining: usize,
        path: &mut Vec<Partition>,
        out: &mut Vec<OscillatingTableau>,
    ) {
        let cur = path.last().expect("path starts at ∅").clone();
        if remaining == 0 {
            if &cur == target {
                out.push(OscillatingTableau::new(path.clone()));
            }
            return;
        }
        for next in cur.predecessors().into_iter().chain(cur.successors()) {
            if box_distance(&next, target) < remaining {
                path.push(next);
                go(target, remaining - 1, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    if box_distance(&Partition::empty(), shape) <= length {
        go(shape, length, &mut vec![Partition::empty()], &mut out);
    }
    Ok(out)
}

/// Picks an index with probability `weights[i] / total` from one uniform
/// integer draw below `total`.
fn pick_weighted<R: Rng + ?Sized>(rng: &mut R, weights: &[BigUint], total: &BigUint) -> usize {
    let mut u = rng.gen_biguint_below(total);
    for (i, w) in weights.iter().enumerate() {
        if &u < w {
            return i;
        }
        u -= w;
    }
    unreachable!("weights sum to the total")
}

pub fn sample_uniform(shape: &Partition, length: usize, seed: u64) -> Result<OscillatingTableau> {
    sample_uniform_with(shape, length, &mut crate::seeded_rng(seed))
}

/// Draws a uniformly random oscillating tableau by building it backwards from
/// `λ`.
///
/// With `Y` boxes and `N - X` steps left, a box is removed with probability
/// `Y / (N - X)`, choosing the predecessor `μ` with probability `f^μ / f^λ`;
/// otherwise a box is added, choosing `μ` with probability
/// `f^μ / ((Y + 1) f^λ)`. Each step consumes the add/remove draw first and
/// the corner draw second.
pub fn sample_uniform_with<R: Rng + ?Sized>(
    shape: &Partition,
    length: usize,
    rng: &mut R,
) -> Result<OscillatingTableau> {
    if count_formula(shape, length).is_zero() {
        return Err(Error::EmptyTableauSet { shape: shape.clone(), length });
    }
    let mut cur = shape.clone();
    let mut reversed = Vec::with_capacity(length + 1);
    reversed.push(cur.clone());
    for x in 0..length {
        let y = cur.size();
        let remove = rng.gen_range(0..length - x) < y;
        let (candidates, total) = if remove {
            (cur.predecessors(), syt_count(&cur))
        } else {
            (cur.successors(), syt_count(&cur) * (y + 1))
        };
        let weights: Vec<BigUint> = candidates.iter().map(syt_count).collect();
        cur = candidates[pick_weighted(rng, &weights, &total)].clone();
        reversed.push(cur.clone());
    }
    reversed.reverse();
    Ok(OscillatingTableau::new(reversed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn known_tableau() -> OscillatingTableau {
        OscillatingTableau::new(vec![
            Partition::empty(),
            part(&[1]),
            part(&[1, 1]),
            part(&[2, 1]),
            part(&[2]),
            part(&[2, 1]),
        ])
    }

    #[test]
    fn validate_examples() {
        let t = known_tableau();
        assert!(t.is_valid());
        assert_eq!(t.length(), 5);
        assert_eq!(t.shape(), Some(&part(&[2, 1])));
        assert!(OscillatingTableau::new(vec![Partition::empty()]).is_valid());
        let jump = OscillatingTableau::new(vec![Partition::empty(), part(&[2])]);
        assert!(jump.validate().unwrap_err().contains("step 0"));
        let bad_start = OscillatingTableau::new(vec![part(&[1])]);
        assert!(!bad_start.is_valid());
        // same size change but not a corner move
        let swap = OscillatingTableau::new(vec![
            Partition::empty(),
            part(&[1]),
            part(&[2]),
            part(&[1, 1, 1]),
        ]);
        assert!(!swap.is_valid());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_formula(&Partition::empty(), 0), BigUint::from(1u32));
        assert_eq!(count_formula(&part(&[2, 1]), 4), BigUint::zero());
        assert_eq!(count_formula(&part(&[2, 1]), 5), BigUint::from(20u32));
        assert_eq!(count_formula(&part(&[2, 1]), 2), BigUint::zero());
        assert_eq!(count_formula(&Partition::empty(), 4), BigUint::from(3u32));
    }

    #[test]
    fn enumeration_examples() {
        let e = enumerate_all(&Partition::empty(), 2).unwrap();
        assert_eq!(
            e,
            vec![OscillatingTableau::new(vec![Partition::empty(), part(&[1]), Partition::empty()])]
        );
        assert_eq!(enumerate_all(&part(&[1]), 1).unwrap().len(), 1);
        let all = enumerate_all(&part(&[2, 1]), 5).unwrap();
        assert_eq!(all.len(), 20);
        assert!(all.contains(&known_tableau()));
        assert!(all.iter().all(OscillatingTableau::is_valid));
        assert_eq!(
            enumerate_all(&part(&[1]), 11),
            Err(Error::BoundExceeded { length: 11, bound: 10 })
        );
        assert_eq!(enumerate_all_bounded(&part(&[1]), 11, 12).unwrap().len(), 945 * 11);
    }

    #[test]
    fn sampler_examples() {
        let t = sample_uniform(&Partition::empty(), 2, 99).unwrap();
        assert_eq!(t.steps(), &[Partition::empty(), part(&[1]), Partition::empty()]);
        assert!(matches!(
            sample_uniform(&part(&[2, 1]), 4, 0),
            Err(Error::EmptyTableauSet { .. })
        ));
        assert_eq!(sample_uniform(&part(&[3, 1]), 12, 5), sample_uniform(&part(&[3, 1]), 12, 5));
    }

    #[test]
    fn sampler_hits_three_tableaux_evenly() {
        let mut freq: HashMap<OscillatingTableau, usize> = HashMap::new();
        let mut rng = crate::seeded_rng(4);
        let draws = 30_000;
        for _ in 0..draws {
            *freq.entry(sample_uniform_with(&Partition::empty(), 4, &mut rng).unwrap()).or_default() += 1;
        }
        assert_eq!(freq.len(), 3);
        for &c in freq.values() {
            let p = c as f64 / draws as f64;
            // 4 binomial standard errors
            assert!((p - 1.0 / 3.0).abs() < 4.0 * (2.0f64 / 9.0 / draws as f64).sqrt(), "{p}");
        }
    }

    #[test]
    fn area_sequence_examples() {
        assert_eq!(known_tableau().area_sequence().heights(), &[3, 2, 3, 2, 1, 0]);
        assert_eq!(
            OscillatingTableau::new(vec![Partition::empty()]).area_sequence().heights(),
            &[0]
        );
        let forced = OscillatingTableau::new(vec![Partition::empty(), part(&[1]), Partition::empty()]);
        assert_eq!(forced.area_sequence().heights(), &[0, 1, 0]);
    }

    #[test]
    fn sampled_area_paths_are_bounded_lattice_paths() {
        let mut rng = crate::seeded_rng(11);
        for (shape, n) in [(part(&[3, 2]), 13), (part(&[1]), 9), (Partition::empty(), 16)] {
            for _ in 0..200 {
                let t = sample_uniform_with(&shape, n, &mut rng).unwrap();
                assert!(t.is_valid());
                let h = t.area_sequence();
                let h = h.heights();
                assert_eq!(h[0], shape.size());
                assert_eq!(h[n], 0);
                for (x, w) in h.windows(2).enumerate() {
                    assert_eq!(w[0].abs_diff(w[1]), 1);
                    assert!(w[0] <= n - x);
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&known_tableau()).unwrap();
        assert_eq!(s, "[[],[1],[1,1],[2,1],[2],[2,1]]");
        assert_eq!(serde_json::from_str::<OscillatingTableau>(&s).unwrap(), known_tableau());
    }
}
