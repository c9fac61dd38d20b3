//! Large-`N` limits of the area walk, in scaled coordinates `x = X/N`,
//! `y = Y/N`, `y0 = Y0/N`.
//!
//! The walk concentrates on `h(x) = x(1-x) + y0(1-x)²`; fluctuations of order
//! `1/√N` around it form a centred Gaussian process with kernel
//! `2 min(x1,x2)² (1 - max(x1,x2))²`.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;

pub fn mean_curve(x: f64, y0: f64) -> f64 {
    x * (1.0 - x) + y0 * (1.0 - x) * (1.0 - x)
}

/// Limit of `N · Var[H(Nx)/N]`.
///
/// `2x²(1-x)² + 2 y0 x(2-3x)(1-x)² - 4 y0² x(1-x)³`, reducing to `2x²(1-x)²` at `y0 = 0`.
pub fn fluctuation_variance(x: f64, y0: f64) -> f64 {
    let u = 1.0 - x;
    2.0 * x * x * u * u + 2.0 * y0 * x * (2.0 - 3.0 * x) * u * u - 4.0 * y0 * y0 * x * u * u * u
}

pub fn covariance_kernel(x1: f64, x2: f64) -> f64 {
    let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    2.0 * lo * lo * (1.0 - hi) * (1.0 - hi)
}

/// Green's function of [`apply_delta_operator`]: `2 x1² (1 - x2)²` for
/// `x1 <= x2`, extended symmetrically. Identical to the covariance kernel.
pub fn green_function(x1: f64, x2: f64) -> f64 {
    covariance_kernel(x1, x2)
}

/// Kernel matrix over strictly increasing interior points.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceGrid {
    points: Vec<f64>,
    matrix: DMatrix<f64>,
}

impl CovarianceGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::DegenerateGrid("no points".into()));
        }
        if let Some(&p) = points.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::DegenerateGrid(format!("{p} is not inside (0, 1)")));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::DegenerateGrid(format!("{} >= {}", w[0], w[1])));
        }
        let n = points.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| covariance_kernel(points[i], points[j]));
        Ok(CovarianceGrid { points, matrix })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// `c_{i,j} = 2 xi² (1 - xj)²`.
fn corner_entry(xi: f64, xj: f64) -> f64 {
    2.0 * xi * xi * (1.0 - xj) * (1.0 - xj)
}

/// `z_{i,j} = 2 (xj - xi)(xj - 2 xj xi + xi)` for `xi < xj`.
fn gap_factor(xi: f64, xj: f64) -> f64 {
    2.0 * (xj - xi) * (xj - 2.0 * xj * xi + xi)
}

/// Closed-form determinant and tridiagonal inverse of the kernel matrix,
/// next to a direct LU determinant and inverse of the same matrix.
#[derive(Clone, Debug)]
pub struct CovarianceAnalysis {
    pub grid: CovarianceGrid,
    pub determinant: f64,
    pub inverse: DMatrix<f64>,
    pub direct_determinant: f64,
    pub direct_inverse: Option<DMatrix<f64>>,
}

impl CovarianceAnalysis {
    pub fn determinant_relative_error(&self) -> f64 {
        ((self.determinant - self.direct_determinant) / self.direct_determinant).abs()
    }

    /// `max |(inverse · C - I)_{ij}|`.
    pub fn identity_error(&self) -> f64 {
        let n = self.grid.points.len();
        let prod = &self.inverse * &self.grid.matrix;
        (prod - DMatrix::<f64>::identity(n, n)).amax()
    }
}

/// The determinant is `c_{1,n} Π z_{i-1,i}`. The inverse is built up one
/// point at a time: the inverse for the first `m-1` points sits in the
/// upper-left corner and the `2×2` block
///
/// ```text
/// [ (1-xm)² / ((1-x_{m-1})² z)    -1/z                        ]
/// [ -1/z                          (1-x_{m-1})² / ((1-xm)² z)  ]
/// ```
///
/// with `z = z_{m-1,m}` is added on rows and columns `m-1, m`.
pub fn covariance_matrix_analysis(points: &[f64]) -> Result<CovarianceAnalysis> {
    let grid = CovarianceGrid::new(points.to_vec())?;
    let n = points.len();
    let x = points;

    let mut determinant = corner_entry(x[0], x[n - 1]);
    let mut inverse = DMatrix::<f64>::zeros(n, n);
    inverse[(0, 0)] = 1.0 / corner_entry(x[0], x[0]);
    for m in 1..n {
        let z = gap_factor(x[m - 1], x[m]);
        determinant *= z;
        let (a, b) = ((1.0 - x[m - 1]).powi(2), (1.0 - x[m]).powi(2));
        inverse[(m - 1, m - 1)] += b / (a * z);
        inverse[(m - 1, m)] -= 1.0 / z;
        inverse[(m, m - 1)] -= 1.0 / z;
        inverse[(m, m)] += a / (b * z);
    }

    let lu = grid.matrix.clone().lu();
    let direct_determinant = lu.determinant();
    let direct_inverse = lu.try_inverse();
    Ok(CovarianceAnalysis { grid, determinant, inverse, direct_determinant, direct_inverse })
}

/// Exponential growth rate of ±1 paths with slope `v` and step weights `p`
/// (up) and `q` (down), with `0 log 0 = 0` at `v = ±1`.
pub fn surface_tension(v: f64, p: f64, q: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&v) {
        return Err(Error::OutOfDomain(format!("slope {v} outside [-1, 1]")));
    }
    if !(p > 0.0 && q > 0.0) {
        return Err(Error::OutOfDomain(format!("weights p = {p}, q = {q} must be positive")));
    }
    let xlogx = |t: f64| if t == 0.0 { 0.0 } else { t * t.ln() };
    let (up, down) = ((1.0 + v) / 2.0, (1.0 - v) / 2.0);
    let weight = |share: f64, w: f64| if share == 0.0 { 0.0 } else { share * w.ln() };
    Ok(weight(up, p) + weight(down, q) - xlogx(up) - xlogx(down))
}

/// Residual of the extremal-trajectory equation `2 h h'' - (h')² + 1`.
pub fn ode_residual(h: f64, dh: f64, d2h: f64) -> f64 {
    2.0 * h * d2h - dh * dh + 1.0
}

/// Uniform grid `start, start + step, …` of `len` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl UniformGrid {
    /// The `len` points `step, 2 step, …` strictly inside `(0, 1)` for `step = 1/(len+1)`.
    pub fn interior(len: usize) -> Self {
        let step = 1.0 / (len as f64 + 1.0);
        UniformGrid { start: step, step, len }
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.point(i)).collect()
    }

    fn check(&self, values: usize) -> Result<()> {
        if self.len < 5 {
            return Err(Error::GridTooCoarse(self.len));
        }
        if values != self.len {
            return Err(Error::DegenerateGrid(format!("{values} values for {} points", self.len)));
        }
        let last = self.point(self.len - 1);
        if !(self.step > 0.0 && self.start > 0.0 && last < 1.0) {
            return Err(Error::DegenerateGrid(format!("[{}, {last}] is not inside (0, 1)", self.start)));
        }
        Ok(())
    }
}

/// `ode_residual` with `h'` and `h''` from central differences, at the
/// grid points `1..len-1`. Returns `(x, residual)` pairs.
pub fn ode_residuals_on_grid(grid: &UniformGrid, values: &[f64]) -> Result<Vec<(f64, f64)>> {
    grid.check(values.len())?;
    let h = grid.step;
    Ok((1..grid.len - 1)
        .map(|i| {
            let d1 = (values[i + 1] - values[i - 1]) / (2.0 * h);
            let d2 = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (h * h);
            (grid.point(i), ode_residual(values[i], d1, d2))
        })
        .collect())
}

/// Central-difference discretization of
///
/// ```text
/// Δ = -1/(2x(1-x)) d²/dx² + (1-2x)/(2x²(1-x)²) d/dx + 1/(x²(1-x)²)
/// ```
///
/// on the grid points `1..len-1`. Returns `(x, Δf(x))` pairs.
pub fn apply_delta_operator(grid: &UniformGrid, values: &[f64]) -> Result<Vec<(f64, f64)>> {
    grid.check(values.len())?;
    let h = grid.step;
    Ok((1..grid.len - 1)
        .map(|i| {
            let x = grid.point(i);
            let s = x * (1.0 - x);
            let d1 = (values[i + 1] - values[i - 1]) / (2.0 * h);
            let d2 = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (h * h);
            (x, -d2 / (2.0 * s) + (1.0 - 2.0 * x) / (2.0 * s * s) * d1 + values[i] / (s * s))
        })
        .collect())
}

/// `(x, value)` rows with a header.
pub fn curve_csv(points: &[f64], f: impl Fn(f64) -> f64) -> String {
    let mut out = String::from("x,value\n");
    for &x in points {
        let _ = writeln!(out, "{x},{}", f(x));
    }
    out
}

/// `(x1, x2, value)` rows of the kernel over all point pairs.
pub fn kernel_csv(points: &[f64]) -> String {
    let mut out = String::from("x1,x2,value\n");
    for &a in points {
        for &b in points {
            let _ = writeln!(out, "{a},{b},{}", covariance_kernel(a, b));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;
    use rand::Rng;

    #[test]
    fn curve_and_variance_examples() {
        assert_eq!(mean_curve(0.0, 0.3), 0.3);
        assert_eq!(mean_curve(1.0, 0.7), 0.0);
        assert_eq!(mean_curve(0.5, 0.0), 0.25);
        assert_eq!(fluctuation_variance(0.5, 0.0), 0.125);
        assert_eq!(fluctuation_variance(0.25, 0.0), 9.0 / 128.0);
        for y0 in [0.0, 0.2, 0.9] {
            assert_eq!(fluctuation_variance(0.0, y0), 0.0);
            assert_eq!(fluctuation_variance(1.0, y0), 0.0);
        }
    }

    #[test]
    fn fluctuation_variance_is_limit_of_exact_variance() {
        for (x, y0) in [(0.25, 0.1), (0.5, 0.3), (0.75, 0.5), (0.4, 0.9)] {
            let gaps: Vec<f64> = [1000usize, 2000, 4000]
                .iter()
                .map(|&n| {
                    let y = (y0 * n as f64) as usize;
                    let var = crate::moments::closed_form_variance(n, y, (x * n as f64) as usize).unwrap();
                    n as f64 * (crate::rational::to_f64(&var) / n as f64 - fluctuation_variance(x, y0))
                })
                .collect();
            assert!(gaps.windows(2).all(|w| ((w[1] - w[0]) / w[0]).abs() < 0.01), "x={x} y0={y0}: {gaps:?}");
        }
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(covariance_kernel(0.25, 0.5), 1.0 / 32.0);
        assert_eq!(covariance_kernel(0.5, 0.25), 1.0 / 32.0);
        assert!(covariance_kernel(1e-9, 0.4) < 1e-17);
        for i in 1..1000 {
            let x = i as f64 / 1000.0;
            assert!((covariance_kernel(x, x) - fluctuation_variance(x, 0.0)).abs() < 1e-16);
        }
    }

    #[test]
    fn lemma_small_cases() {
        let a = covariance_matrix_analysis(&[0.3]).unwrap();
        let c = 2.0 * 0.09 * 0.49;
        assert!((a.determinant - c).abs() < 1e-15);
        assert!((a.inverse[(0, 0)] - 1.0 / c).abs() < 1e-12);

        let a = covariance_matrix_analysis(&[0.25, 0.5]).unwrap();
        assert!((a.determinant - 1.0 / 128.0).abs() < 1e-15);
        let m = a.grid.matrix();
        let direct = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        assert!((direct - 1.0 / 128.0).abs() < 1e-15);
        assert!(a.identity_error() < 1e-12);
    }

    #[test]
    fn lemma_inverse_is_tridiagonal_and_matches_direct() {
        let mut rng = crate::seeded_rng(8);
        for _ in 0..10 {
            let mut pts: Vec<f64> = (0..4).map(|_| rng.gen_range(0.05..0.95)).collect();
            pts.sort_by(f64::total_cmp);
            if pts.windows(2).any(|w| w[1] - w[0] < 0.02) {
                continue;
            }
            let a = covariance_matrix_analysis(&pts).unwrap();
            assert!(a.identity_error() < 1e-10);
            assert!(a.determinant_relative_error() < 1e-10);
            let direct = a.direct_inverse.as_ref().unwrap();
            for i in 0..4usize {
                for j in 0..4 {
                    if i.abs_diff(j) > 1 {
                        assert_eq!(a.inverse[(i, j)], 0.0);
                    }
                    assert!((a.inverse[(i, j)] - direct[(i, j)]).abs() < 1e-8 * direct.amax());
                }
            }
            let eig = SymmetricEigen::new(a.grid.matrix().clone());
            assert!(eig.eigenvalues.iter().all(|&l| l > 0.0));
        }
    }

    #[test]
    fn grid_errors() {
        assert!(CovarianceGrid::new(vec![]).is_err());
        assert!(CovarianceGrid::new(vec![0.0, 0.5]).is_err());
        assert!(CovarianceGrid::new(vec![0.5, 1.0]).is_err());
        assert!(CovarianceGrid::new(vec![0.5, 0.5]).is_err());
        assert!(covariance_matrix_analysis(&[0.6, 0.2]).is_err());
    }

    #[test]
    fn surface_tension_examples() {
        assert!(surface_tension(0.0, 0.5, 0.5).unwrap().abs() < 1e-15);
        assert!((surface_tension(1.0, 0.3, 0.7).unwrap() - 0.3f64.ln()).abs() < 1e-15);
        assert!((surface_tension(-1.0, 0.3, 0.7).unwrap() - 0.7f64.ln()).abs() < 1e-15);
        assert!((surface_tension(0.0, 1.0, 1.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(surface_tension(1.5, 0.5, 0.5).is_err());
        assert!(surface_tension(0.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn surface_tension_counts_paths() {
        // log C(n, (n+m)/2) / n -> σ(m/n) with p = q = 1
        let n = 4000u32;
        let m = 1000u32;
        let k = (n + m) / 2;
        let log_binom: f64 = (1..=n).map(|i| (i as f64).ln()).sum::<f64>()
            - (1..=k).map(|i| (i as f64).ln()).sum::<f64>()
            - (1..=n - k).map(|i| (i as f64).ln()).sum::<f64>();
        let sigma = surface_tension(m as f64 / n as f64, 1.0, 1.0).unwrap();
        assert!((log_binom / n as f64 - sigma).abs() < 2e-3);
    }

    #[test]
    fn ode_examples() {
        for i in 1..100 {
            let x = i as f64 / 100.0;
            assert!(ode_residual(x * (1.0 - x), 1.0 - 2.0 * x, -2.0).abs() < 1e-15);
        }
        assert_eq!(ode_residual(0.5, 1.0, 0.0), 0.0);
        assert_eq!(ode_residual(0.25, 1.0, 2.0), 1.0);
        let grid = UniformGrid::interior(49);
        let vals: Vec<f64> = grid.points().iter().map(|x| x * (1.0 - x)).collect();
        for (_, r) in ode_residuals_on_grid(&grid, &vals).unwrap() {
            assert!(r.abs() < 1e-9);
        }
    }

    #[test]
    fn delta_annihilates_both_branches() {
        let grid = UniformGrid::interior(99);
        let pts = grid.points();
        for f in [|x: f64| 2.0 * x * x * 0.7, |x: f64| 2.0 * 0.3 * (1.0 - x) * (1.0 - x)] {
            let vals: Vec<f64> = pts.iter().map(|&x| f(x)).collect();
            for (x, r) in apply_delta_operator(&grid, &vals).unwrap() {
                assert!(r.abs() < 1e-8, "x={x} r={r}");
            }
        }
        assert_eq!(
            apply_delta_operator(&UniformGrid::interior(4), &[0.0; 4]),
            Err(Error::GridTooCoarse(4))
        );
        let outside = UniformGrid { start: 0.0, step: 0.1, len: 9 };
        assert!(apply_delta_operator(&outside, &[0.0; 9]).is_err());
    }

    #[test]
    fn csv_exports() {
        assert_eq!(curve_csv(&[0.5], |x| mean_curve(x, 0.0)), "x,value\n0.5,0.25\n");
        let k = kernel_csv(&[0.25, 0.5]);
        assert!(k.starts_with("x1,x2,value\n0.25,0.25,"));
        assert!(k.contains("0.25,0.5,0.03125\n"));
    }
}
