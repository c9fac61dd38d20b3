//! Exhaustive path enumeration, the reference every exact moment is checked
//! against.
//!
//! Paths are generated step by step with the descent probability written out
//! directly as `Y / (N - X)`; nothing here goes through the recursions in
//! [`crate::moments`] or the propagator in [`crate::walk`].

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;

/// Every path from `Y0` with positive probability, with that probability.
/// Exponential in `N`; meant for `N <= 16` or so.
pub fn weighted_paths(n: usize, y0: usize) -> Vec<(Vec<usize>, Rational)> {
    let mut out = vec![(vec![y0], Rational::one())];
    for x in 0..n {
        let remaining = BigInt::from(n - x);
        let mut next = Vec::with_capacity(out.len() * 2);
        for (path, p) in out {
            let y = *path.last().expect("nonempty");
            let down = Rational::new(BigInt::from(y), remaining.clone());
            let up = Rational::one() - &down;
            if !down.is_zero() {
                let mut d = path.clone();
                d.push(y - 1);
                next.push((d, &p * &down));
            }
            if !up.is_zero() {
                let mut u = path;
                u.push(y + 1);
                next.push((u, p * up));
            }
        }
        out = next;
    }
    out
}

/// `E[f(H)]` as an exact weighted sum over all paths.
pub fn expectation(n: usize, y0: usize, f: impl Fn(&[usize]) -> Rational) -> Rational {
    weighted_paths(n, y0).iter().map(|(h, p)| f(h) * p).sum()
}

pub fn height_power(h: usize, k: u32) -> Rational {
    Rational::from_integer(BigInt::from(h).pow(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn small_walks() {
        let paths = weighted_paths(4, 0);
        assert_eq!(paths.len(), 2);
        let total: Rational = paths.iter().map(|(_, p)| p.clone()).sum();
        assert_eq!(total, Rational::one());
        assert_eq!(expectation(4, 0, |h| height_power(h[2], 2)), ratio(8, 3));
        assert_eq!(expectation(4, 0, |h| height_power(h[1], 1) * height_power(h[2], 1)), ratio(4, 3));
        assert!(weighted_paths(9, 3).iter().all(|(h, _)| h[9] == 0));
    }
}
