//! Exact moments of the area walk.
//!
//! Everything here is rational arithmetic. The single-point moments follow
//! the one-step recursion
//!
//! ```text
//! E[H(X+1)^n] = 1 + Σ_{k=1..n} ( C(n,k) - (1 + (-1)^(n-k)) C(n,k-1) / (N-X) ) E[H(X)^k]
//! ```
//!
//! seeded with `E[H(0)^n] = Y0^n`. Mixed moments condition on the previous
//! point and rerun the same recursion on the remaining walk, which only
//! depends on the conditioned height.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, binomial, int, Rational};
use crate::walk::check_endpoints;

/// Coefficient of `E[H(X)^k]` in the recursion for `E[H(X+1)^n]`.
fn recursion_coefficient(n: u32, k: u32, remaining: usize) -> Rational {
    let c = binomial(n as u64, k as u64) as i64;
    let c_prev = binomial(n as u64, k as u64 - 1) as i64;
    let parity = if (n - k).is_multiple_of(2) { 2 } else { 0 };
    int(c) - rational::ratio(parity * c_prev, remaining as i64)
}

/// Applies one recursion step to `prev[k] = E[H(X)^k]`, `k = 0..=order`.
fn advance(prev: &[Rational], remaining: usize) -> Vec<Rational> {
    let order = prev.len() as u32 - 1;
    let mut next = Vec::with_capacity(prev.len());
    next.push(Rational::one());
    for n in 1..=order {
        let mut acc = Rational::one();
        for k in 1..=n {
            acc += recursion_coefficient(n, k, remaining) * &prev[k as usize];
        }
        next.push(acc);
    }
    next
}

/// Same step with every moment a polynomial in the start height.
fn advance_poly(prev: &[Vec<Rational>], remaining: usize) -> Vec<Vec<Rational>> {
    let order = prev.len() as u32 - 1;
    let width = prev.len();
    let mut next = Vec::with_capacity(width);
    let mut one = vec![Rational::zero(); width];
    one[0] = Rational::one();
    next.push(one.clone());
    for n in 1..=order {
        let mut acc = one.clone();
        for k in 1..=n {
            let c = recursion_coefficient(n, k, remaining);
            for (a, p) in acc.iter_mut().zip(&prev[k as usize]) {
                *a += &c * p;
            }
        }
        next.push(acc);
    }
    next
}

/// `E[H(X)^n]` for every `X in 0..=N` and `n in 0..=max_order`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    n: usize,
    y0: usize,
    rows: Vec<Vec<Rational>>,
}

impl MomentTable {
    pub fn compute(n: usize, y0: usize, max_order: u32) -> Result<Self> {
        check_endpoints(n, y0)?;
        let start = int(y0 as i64);
        let mut rows = Vec::with_capacity(n + 1);
        rows.push((0..=max_order).map(|k| rational::pow(&start, k)).collect::<Vec<_>>());
        for x in 0..n {
            let next = advance(&rows[x], n - x);
            rows.push(next);
        }
        Ok(MomentTable { n, y0, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn y0(&self) -> usize {
        self.y0
    }

    pub fn max_order(&self) -> u32 {
        self.rows[0].len() as u32 - 1
    }

    pub fn get(&self, x: usize, order: u32) -> Option<&Rational> {
        self.rows.get(x)?.get(order as usize)
    }

    /// CSV with header `X,n,value`; values are exact `num/den` strings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("X,n,value\n");
        for (x, row) in self.rows.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let _ = writeln!(out, "{x},{k},{}", rational::to_exact_string(v));
            }
        }
        out
    }
}

/// `E[H(X)^order]` by the one-step recursion.
pub fn moment(n: usize, y0: usize, x: usize, order: u32) -> Result<Rational> {
    if x > n {
        return Err(Error::OutOfDomain(format!("X = {x} exceeds N = {n}")));
    }
    check_endpoints(n, y0)?;
    let mut row: Vec<Rational> = (0..=order).map(|k| rational::pow(&int(y0 as i64), k)).collect();
    for step in 0..x {
        row = advance(&row, n - step);
    }
    Ok(row.pop().expect("order + 1 entries"))
}

/// Coefficients `c_j` with `E[H(to)^order | H(from) = y] = Σ c_j y^j`.
pub fn conditional_moment_polynomial(n: usize, from: usize, to: usize, order: u32) -> Result<Vec<Rational>> {
    if from > to || to > n {
        return Err(Error::OutOfDomain(format!("need {from} <= {to} <= {n}")));
    }
    let width = order as usize + 1;
    let mut rows: Vec<Vec<Rational>> = (0..width)
        .map(|k| {
            let mut p = vec![Rational::zero(); width];
            p[k] = Rational::one();
            p
        })
        .collect();
    for x in from..to {
        rows = advance_poly(&rows, n - x);
    }
    Ok(rows.pop().expect("order + 1 entries"))
}

fn require_min_n(what: &'static str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::Degenerate { what, min, n });
    }
    Ok(())
}

fn check_point(n: usize, x: usize) -> Result<()> {
    if x > n {
        return Err(Error::OutOfDomain(format!("X = {x} exceeds N = {n}")));
    }
    Ok(())
}

/// `E[H(X)] = X(N-X)/(N-1) + Y0 (N-X)(N-X-1) / (N(N-1))`.
pub fn closed_form_mean(n: usize, y0: usize, x: usize) -> Result<Rational> {
    require_min_n("closed-form mean", n, 2)?;
    check_point(n, x)?;
    let (n, y0, x) = (int(n as i64), int(y0 as i64), int(x as i64));
    let one = Rational::one();
    let nx = &n - &x;
    Ok(&x * &nx / (&n - &one) + y0 * &nx * (&nx - &one) / (&n * (&n - &one)))
}

/// Closed form of `E[H(X)^2]`, a quadratic in `Y0`.
pub fn closed_form_second_moment(n: usize, y0: usize, x: usize) -> Result<Rational> {
    require_min_n("closed-form second moment", n, 4)?;
    check_point(n, x)?;
    let (n, y0, x) = (int(n as i64), int(y0 as i64), int(x as i64));
    let c = |v: i64| int(v);
    let nx = &n - &x;
    let falling = &n * (&n - c(1)) * (&n - c(2)) * (&n - c(3));
    let flat = &x * &nx * (&n * &x - &x * &x - c(2)) / ((&n - c(1)) * (&n - c(3)));
    let linear = c(2) * &x * &nx * (&nx - c(1))
        * ((&n - c(1)) * (&n - c(1)) - (&n - c(1)) * &x - c(2))
        / &falling;
    let quadratic = &nx * (&nx - c(1)) * (&nx - c(2)) * (&nx - c(3)) / &falling;
    Ok(flat + &y0 * linear + &y0 * &y0 * quadratic)
}

/// Shared closed form of `Cov[H(X1), H(X2)]` for `X1 <= X2`; the diagonal
/// `X1 = X2` is the variance.
fn covariance_formula(n: usize, y0: usize, x1: usize, x2: usize) -> Rational {
    let (n, y0, a, b) = (int(n as i64), int(y0 as i64), int(x1 as i64), int(x2 as i64));
    let c = |v: i64| int(v);
    let tail = (&n - &b) * (&n - &b - c(1));
    let n1sq = (&n - c(1)) * (&n - c(1));
    let flat = c(2) * &a * (&a - c(1)) * &tail / (&n1sq * (&n - c(3)));
    let linear = c(2) * &a * (c(2) * &n * &n - c(5) * &n + c(1) - (c(3) * &n - c(5)) * &a) * &tail
        / (&n * &n1sq * (&n - c(2)) * (&n - c(3)));
    let quadratic = c(2) * &a * (c(2) * &n * &n - c(6) * &n + c(3) - (c(2) * &n - c(3)) * &a) * &tail
        / (&n * &n * &n1sq * (&n - c(2)) * (&n - c(3)));
    flat + &y0 * linear - &y0 * &y0 * quadratic
}

pub fn closed_form_variance(n: usize, y0: usize, x: usize) -> Result<Rational> {
    require_min_n("closed-form variance", n, 4)?;
    check_point(n, x)?;
    Ok(covariance_formula(n, y0, x, x))
}

/// Closed form of `Cov[H(X1), H(X2)]` for `X1 < X2`.
pub fn covariance(n: usize, y0: usize, x1: usize, x2: usize) -> Result<Rational> {
    require_min_n("closed-form covariance", n, 4)?;
    if x1 >= x2 {
        return Err(Error::Order(x1, x2));
    }
    check_point(n, x2)?;
    Ok(covariance_formula(n, y0, x1, x2))
}

/// `E[H(X1) H(X2)] - E[H(X1)] E[H(X2)]` from the mixed-moment recursion.
pub fn covariance_from_mixed_moments(n: usize, y0: usize, x1: usize, x2: usize) -> Result<Rational> {
    let joint = mixed_moment(n, y0, &MixedMomentSpec::new(vec![x1, x2], vec![1, 1])?)?;
    Ok(joint - moment(n, y0, x1, 1)? * moment(n, y0, x2, 1)?)
}

/// Points `X1 < … < Xm` with powers `a1 … am`, describing `E[Π H(Xi)^ai]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedMomentSpec {
    points: Vec<usize>,
    powers: Vec<u32>,
}

impl MixedMomentSpec {
    pub fn new(points: Vec<usize>, powers: Vec<u32>) -> Result<Self> {
        if points.is_empty() || points.len() != powers.len() {
            return Err(Error::OutOfDomain(format!(
                "{} points with {} powers",
                points.len(),
                powers.len()
            )));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Order(w[0], w[1]));
        }
        Ok(MixedMomentSpec { points, powers })
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn powers(&self) -> &[u32] {
        &self.powers
    }
}

/// `E[H(X1)^a1 ⋯ H(Xm)^am]`.
///
/// Conditioning on `H(X_{m-1}) = y`, the rest of the walk is a walk of
/// length `N - X_{m-1}` started at `y`, so `E[H(Xm)^am | H(X_{m-1}) = y]` is a
/// polynomial `Σ c_j y^j` and the last factor folds into the previous power.
pub fn mixed_moment(n: usize, y0: usize, spec: &MixedMomentSpec) -> Result<Rational> {
    check_endpoints(n, y0)?;
    check_point(n, *spec.points.last().expect("nonempty"))?;
    let total: u32 = spec.powers.iter().sum();
    let table = MomentTable::compute(n, y0, total)?;
    let mut cache = HashMap::new();
    Ok(fold_mixed(n, &table, &spec.points, spec.powers.clone(), &mut cache))
}

fn fold_mixed(
    n: usize,
    table: &MomentTable,
    points: &[usize],
    mut powers: Vec<u32>,
    cache: &mut HashMap<(usize, usize, u32), Vec<Rational>>,
) -> Rational {
    let m = points.len();
    if m == 1 {
        return table.get(points[0], powers[0]).expect("order within table").clone();
    }
    let last = powers.pop().expect("m >= 2");
    let (from, to) = (points[m - 2], points[m - 1]);
    let poly = cache
        .entry((from, to, last))
        .or_insert_with(|| conditional_moment_polynomial(n, from, to, last).expect("ordered points"))
        .clone();
    let mut acc = Rational::zero();
    for (j, c) in poly.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut folded = powers.clone();
        folded[m - 2] += j as u32;
        acc += c * fold_mixed(n, table, &points[..m - 1], folded, cache);
    }
    acc
}

/// `E[V] = N(N+1)/6 + Y0 (N+1)/3` for the volume `V = Σ H(X)`.
pub fn volume_mean(n: usize, y0: usize) -> Result<Rational> {
    check_endpoints(n, y0)?;
    let (n, y0) = (int(n as i64), int(y0 as i64));
    Ok(&n * (&n + int(1)) / int(6) + y0 * (&n + int(1)) / int(3))
}

/// `Var[V] = (N+1)N(N-2)/45 + Y0 (N+1)(3N+2)/45 - 4 Y0² (N+1)/45`.
pub fn volume_variance(n: usize, y0: usize) -> Result<Rational> {
    require_min_n("closed-form volume variance", n, 4)?;
    check_endpoints(n, y0)?;
    let (n, y0) = (int(n as i64), int(y0 as i64));
    let n1 = &n + int(1);
    Ok((&n1 * &n * (&n - int(2)) + &y0 * &n1 * (int(3) * &n + int(2)) - int(4) * &y0 * &y0 * &n1) / int(45))
}

/// Polynomial in two variables with rational coefficients, keyed by the
/// exponent pair `(i, j)` of `x^i y^j`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivariatePoly {
    pub fn monomial(i: u32, j: u32) -> Self {
        Self::from_terms([((i, j), Rational::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut p = BivariatePoly::default();
        for (k, c) in terms {
            *p.terms.entry(k).or_insert_with(Rational::zero) += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Rational> {
        &self.terms
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&(0, 0)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * rational::pow(x, i) * rational::pow(y, j))
            .sum()
    }
}

/// `E[Σ_{i=0..N} P(i, H(i))]`, summing exact moments against `P`.
pub fn weighted_sum_expectation(n: usize, y0: usize, p: &BivariatePoly) -> Result<Rational> {
    let max_order = p.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
    let table = MomentTable::compute(n, y0, max_order)?;
    let mut acc = Rational::zero();
    for (&(i, j), c) in &p.terms {
        for x in 0..=n {
            acc += c * rational::pow(&int(x as i64), i) * table.get(x, j).expect("order within table");
        }
    }
    Ok(acc)
}

/// Fits `Q` of total degree at most `degree` through exact samples
/// `(N, Y0, value)` by row reduction. Returns `None` when the samples do not
/// determine a unique polynomial or no polynomial of that degree fits them all.
pub fn fit_bivariate(samples: &[(i64, i64, Rational)], degree: u32) -> Option<BivariatePoly> {
    let monomials: Vec<(u32, u32)> = (0..=degree)
        .flat_map(|i| (0..=degree - i).map(move |j| (i, j)))
        .collect();
    let cols = monomials.len();
    let mut rows: Vec<Vec<Rational>> = samples
        .iter()
        .map(|(a, b, v)| {
            let (a, b) = (int(*a), int(*b));
            let mut row: Vec<Rational> =
                monomials.iter().map(|&(i, j)| rational::pow(&a, i) * rational::pow(&b, j)).collect();
            row.push(v.clone());
            row
        })
        .collect();
    for col in 0..cols {
        let pivot = (col..rows.len()).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let inv = Rational::one() / &rows[col][col];
        for v in rows[col].iter_mut() {
            *v *= &inv;
        }
        let pivot_vals = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot_vals) {
                    *v -= &f * p;
                }
            }
        }
    }
    if rows[cols..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    Some(BivariatePoly::from_terms(
        monomials.into_iter().zip(rows.into_iter().map(|r| r[cols].clone())),
    ))
}

/// Recovers `Q` with `E[Σ P(i, H(i))] = (N+1) Q(N, Y0)` from every valid
/// `(N, Y0)` with `N` in `lengths`, or `None` if no polynomial of degree
/// `deg P` fits.
pub fn polynomial_quotient(p: &BivariatePoly, lengths: std::ops::RangeInclusive<usize>) -> Result<Option<BivariatePoly>> {
    let degree = p.degree().unwrap_or(0);
    let mut samples = Vec::new();
    for n in lengths {
        for y0 in (n % 2..=n).step_by(2) {
            let s = weighted_sum_expectation(n, y0, p)? / int(n as i64 + 1);
            samples.push((n as i64, y0 as i64, s));
        }
    }
    Ok(fit_bivariate(&samples, degree))
}
