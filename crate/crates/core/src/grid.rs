//! Uniform centered grids, sampled signals and the FrFT angle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest admissible `|sin θ|`; below this `cot θ` and `csc θ` blow up.
pub const SIN_EPS: f64 = 1e-9;

/// Uniform centered grid, identical in every dimension.
///
/// Samples sit at `t_j = -extent + j * spacing` with `spacing = 2 * extent / samples`,
/// so index `samples / 2` is the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n_dims: usize,
    samples: usize,
    extent: f64,
}

impl Grid {
    pub fn new(n_dims: usize, samples: usize, extent: f64) -> Result<Self> {
        if !(1..=2).contains(&n_dims) {
            return Err(Error::InvalidGrid(format!("n_dims must be 1 or 2, got {n_dims}")));
        }
        if samples < 4 || !samples.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "samples per dimension must be a power of two >= 4, got {samples}"
            )));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidGrid(format!("extent must be positive, got {extent}")));
        }
        Ok(Self {
            n_dims,
            samples,
            extent,
        })
    }

    pub fn n_dims(&self) -> usize {
        self.n_dims
    }

    /// Samples per dimension.
    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / self.samples as f64
    }

    /// Total number of samples, `samples^n_dims`.
    pub fn len(&self) -> usize {
        self.samples.pow(self.n_dims as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Measure weight `spacing^n_dims` of one sample.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.n_dims as i32)
    }

    /// Coordinate of 1D index `j`.
    pub fn coord(&self, j: usize) -> f64 {
        -self.extent + j as f64 * self.spacing()
    }

    /// Per-dimension indices of flat (row-major) index `flat`.
    pub fn unflatten(&self, flat: usize) -> [usize; 2] {
        match self.n_dims {
            1 => [flat, 0],
            _ => [flat / self.samples, flat % self.samples],
        }
    }

    pub fn flatten(&self, idx: [usize; 2]) -> usize {
        match self.n_dims {
            1 => idx[0],
            _ => idx[0] * self.samples + idx[1],
        }
    }

    /// Coordinates of flat index `flat`; unused trailing components are zero.
    pub fn point(&self, flat: usize) -> [f64; 2] {
        let idx = self.unflatten(flat);
        match self.n_dims {
            1 => [self.coord(idx[0]), 0.0],
            _ => [self.coord(idx[0]), self.coord(idx[1])],
        }
    }

    /// Squared Euclidean norm of the coordinate at `flat`.
    pub fn norm_sq(&self, flat: usize) -> f64 {
        let p = self.point(flat);
        p[0] * p[0] + p[1] * p[1]
    }

    /// Same layout up to a relative extent tolerance.
    pub fn matches(&self, other: &Grid) -> bool {
        self.n_dims == other.n_dims
            && self.samples == other.samples
            && (self.extent - other.extent).abs() <= 1e-12 * self.extent.max(other.extent)
    }

    pub(crate) fn ensure_matches(&self, other: &Grid) -> Result<()> {
        if self.matches(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// FrFT angle with cached trigonometric values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParam {
    theta: f64,
    sin_t: f64,
    cos_t: f64,
    cot_t: f64,
    csc_t: f64,
}

impl ThetaParam {
    pub fn new(theta: f64) -> Result<Self> {
        let sin_t = theta.sin();
        if !theta.is_finite() || sin_t.abs() <= SIN_EPS {
            return Err(Error::AngleDegenerate {
                theta,
                sin_abs: sin_t.abs(),
            });
        }
        let cos_t = theta.cos();
        Ok(Self {
            theta,
            sin_t,
            cos_t,
            cot_t: cos_t / sin_t,
            csc_t: 1.0 / sin_t,
        })
    }

    /// The angle `p * π / q`.
    pub fn from_fraction(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidConfig("theta fraction with zero denominator".into()));
        }
        Self::new(p as f64 * PI / q as f64)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn sin(&self) -> f64 {
        self.sin_t
    }
    pub fn cos(&self) -> f64 {
        self.cos_t
    }
    pub fn cot(&self) -> f64 {
        self.cot_t
    }
    pub fn csc(&self) -> f64 {
        self.csc_t
    }

    pub fn sin_abs(&self) -> f64 {
        self.sin_t.abs()
    }

    /// `+1` or `-1` according to the sign of `sin θ`.
    pub fn sin_sign(&self) -> f64 {
        self.sin_t.signum()
    }

    /// True when `cot θ` vanishes to machine precision (θ = π/2 mod π).
    pub fn is_quarter_turn(&self) -> bool {
        self.cot_t.abs() < 1e-12
    }

    /// The negated angle, used for inverse chirps and the inverse transform.
    pub fn negate(&self) -> Self {
        Self {
            theta: -self.theta,
            sin_t: -self.sin_t,
            cos_t: self.cos_t,
            cot_t: -self.cot_t,
            csc_t: -self.csc_t,
        }
    }
}

/// Complex samples of a function on a [`Grid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    grid: Grid,
    values: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidSignal(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidSignal(format!("non-finite value at index {pos}")));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Samples `f` at every grid point; the closure receives `[t0, t1]`
    /// (with `t1 = 0` in 1D).
    pub fn from_fn(grid: Grid, mut f: impl FnMut([f64; 2]) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.map(|v| v * a)
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: Complex64, other: &SampledSignal) -> Result<Self> {
        self.grid.ensure_matches(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| x + a * y)
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    pub fn sub(&self, other: &SampledSignal) -> Result<Self> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// Largest pointwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &SampledSignal) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Discrete L² norm with measure weight `spacing^n`.
pub fn l2_norm(f: &SampledSignal) -> f64 {
    let sum: f64 = f.values.iter().map(|v| v.norm_sqr()).sum();
    (sum * f.grid.cell_volume()).sqrt()
}

/// Discrete inner product `Σ f·conj(g)·spacing^n`; conjugates the second argument.
pub fn inner_product(f: &SampledSignal, g: &SampledSignal) -> Result<Complex64> {
    f.grid.ensure_matches(&g.grid)?;
    let sum: Complex64 = f.values.iter().zip(&g.values).map(|(a, b)| a * b.conj()).sum();
    Ok(sum * f.grid.cell_volume())
}

/// Runs `op` on every 1D line of `values` along `axis` (row-major layout).
pub(crate) fn for_each_line(
    values: &mut [Complex64],
    n_dims: usize,
    samples: usize,
    axis: usize,
    mut op: impl FnMut(&mut [Complex64]),
) {
    match (n_dims, axis) {
        (1, _) => op(values),
        (_, 1) => values.chunks_mut(samples).for_each(op),
        _ => {
            let mut line = vec![Complex64::new(0.0, 0.0); samples];
            for col in 0..samples {
                for r in 0..samples {
                    line[r] = values[r * samples + col];
                }
                op(&mut line);
                for r in 0..samples {
                    values[r * samples + col] = line[r];
                }
            }
        }
    }
}
