//! The sinc family `f_m(x) = m e^{-πix² cot θ} e^{πimx} sinc(mx)` whose
//! chirped spectrum is the indicator of `[0, m)`, in one and two dimensions
//! (tensor products in 2D).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::fiber::{FiberField, FiberGrid, FiberNormalization};
use super::sis::{approximation_error, fit_sis};
use crate::error::{Error, Result};
use crate::grid::{Grid, SampledSignal, ThetaParam};
use crate::linalg::Eigen;

/// Normalized sinc, `sin(πx) / (πx)`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

fn member_1d(m: usize, x: f64, theta: &ThetaParam) -> Complex64 {
    let mf = m as f64;
    let phase = -PI * x * x * theta.cot() + PI * mf * x;
    Complex64::from_polar(mf * sinc(mf * x), phase)
}

/// Samples `f_m` on `grid`.
pub fn sinc_family_member(m: usize, grid: &Grid, theta: &ThetaParam) -> SampledSignal {
    let n = grid.n_dims();
    SampledSignal::from_fn(*grid, |[a, b]| {
        let fa = member_1d(m, a, theta);
        if n == 1 {
            fa
        } else {
            fa * member_1d(m, b, theta)
        }
    })
}

/// Exact fibers of `f_m`: the indicator of `ω csc θ + k ∈ [0, m)^n`.
pub fn analytic_sinc_fibers(m: usize, grid: &FiberGrid) -> Result<FiberField> {
    let needed = m;
    let window = grid.window();
    if m == 0 || !(window.contains(0) && window.contains(m as i64 - 1)) {
        return Err(Error::WindowTooSmall {
            window: window.bound(),
            needed,
        });
    }
    let mf = m as f64;
    let inside = |v: f64| (0.0..mf).contains(&v);
    let value = match grid.normalization() {
        FiberNormalization::Plain => 1.0,
        FiberNormalization::Isometric => grid.theta().sin_abs().powf(-(grid.n_dims() as f64) / 2.0),
    };
    let offsets = grid.offsets();
    let data = (0..grid.num_omegas())
        .map(|w| {
            offsets
                .iter()
                .map(|&k| {
                    let nu = grid.band_point(w, k);
                    let hit = inside(nu[0]) && (grid.n_dims() == 1 || inside(nu[1]));
                    Complex64::new(if hit { value } else { 0.0 }, 0.0)
                })
                .collect()
        })
        .collect();
    FiberField::new(*grid, data)
}

/// Fibers of `f_1 … f_m`.
pub fn sinc_family_fibers(m: usize, grid: &FiberGrid) -> Result<Vec<FiberField>> {
    (1..=m).map(|j| analytic_sinc_fibers(j, grid)).collect()
}

/// Generator coefficients in the convention used for display:
/// the eigenvector scaled so its last component is 1, times each member's
/// amplitude `j^n`, divided by `√λ_i`. Entry `j` multiplies
/// `e^{-πi|x|² cot θ} e^{πi j Σx} Π sinc(j x_d)`.
pub fn display_coefficients(eigen: &Eigen, i: usize, n_dims: usize) -> Vec<Complex64> {
    let y = eigen.vector(i);
    let last = *y.last().expect("non-empty eigenvector");
    let lambda = eigen.values[i];
    y.iter()
        .enumerate()
        .map(|(j, &v)| v / last * ((j + 1) as f64).powi(n_dims as i32) / lambda.sqrt())
        .collect()
}

/// Rows `(ℓ, E(F, ℓ))` for `ℓ = 1 .. m-1` on the sinc family.
pub fn sinc_error_table(n_dims: usize, m: usize, theta: &ThetaParam) -> Result<Vec<(usize, f64)>> {
    use super::fiber::OffsetWindow;
    if m < 1 {
        return Err(Error::InvalidConfig("family size must be positive".into()));
    }
    let grid = FiberGrid::new(*theta, n_dims, 8, OffsetWindow::Symmetric(m.max(1)))?;
    let fibers = sinc_family_fibers(m, &grid)?;
    (1..m)
        .map(|ell| Ok((ell, approximation_error(&fit_sis(&fibers, ell)?))))
        .collect()
}
