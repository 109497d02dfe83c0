//! Fiber map `τ^θ f(ω) = {(C_θ f)^(ω csc θ + k)}_{k ∈ ℤⁿ}` over the
//! fundamental domain `I = [0, |sin θ|]^n`, and the Gramian field built from it.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier;
use crate::frft::{chirp_modulate, ChirpSign};
use crate::grid::{SampledSignal, ThetaParam};
use crate::linalg::CMatrix;

/// Energy fraction outside the window above which [`fiber_map`] fails.
pub const TRUNCATION_TOL: f64 = 1e-6;

/// Lattice offsets kept per fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetWindow {
    /// `k ∈ {-K..K}^n`.
    Symmetric(usize),
    /// `k ∈ {0..K}^n`, for data whose band sits in the positive orthant.
    NonNegative(usize),
}

impl OffsetWindow {
    fn range(&self) -> (i64, i64) {
        match *self {
            OffsetWindow::Symmetric(k) => (-(k as i64), k as i64),
            OffsetWindow::NonNegative(k) => (0, k as i64),
        }
    }

    pub fn bound(&self) -> usize {
        match *self {
            OffsetWindow::Symmetric(k) | OffsetWindow::NonNegative(k) => k,
        }
    }

    /// Offsets per dimension, ascending.
    pub fn offsets_1d(&self) -> Vec<i64> {
        let (lo, hi) = self.range();
        (lo..=hi).collect()
    }

    pub fn contains(&self, k: i64) -> bool {
        let (lo, hi) = self.range();
        (lo..=hi).contains(&k)
    }
}

/// How fiber values are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberNormalization {
    /// Raw samples of `(C_θ f)^`; then `∫_I Σ_k |τf|² = |sin θ|^n ‖f‖²`.
    Plain,
    /// Divided by `|sin θ|^{n/2}` so the fiber map is an isometry.
    Isometric,
}

/// Sampling of the fundamental domain and the offset window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberGrid {
    theta: ThetaParam,
    n_dims: usize,
    omega_samples: usize,
    window: OffsetWindow,
    omega_phase: f64,
    normalization: FiberNormalization,
}

impl FiberGrid {
    /// `omega_samples` points per dimension at `ω_w = w |sin θ| / W`.
    pub fn new(theta: ThetaParam, n_dims: usize, omega_samples: usize, window: OffsetWindow) -> Result<Self> {
        if !(1..=2).contains(&n_dims) {
            return Err(Error::InvalidGrid(format!("n_dims must be 1 or 2, got {n_dims}")));
        }
        if omega_samples < 8 {
            return Err(Error::InvalidGrid(format!(
                "need at least 8 omega samples, got {omega_samples}"
            )));
        }
        if window.bound() < 1 {
            return Err(Error::InvalidGrid("offset window bound must be at least 1".into()));
        }
        Ok(Self {
            theta,
            n_dims,
            omega_samples,
            window,
            omega_phase: 0.0,
            normalization: FiberNormalization::Plain,
        })
    }

    /// Shifts the ω samples to cell midpoints `(w + 1/2) |sin θ| / W`.
    pub fn with_midpoints(mut self) -> Self {
        self.omega_phase = 0.5;
        self
    }

    pub fn with_normalization(mut self, normalization: FiberNormalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn theta(&self) -> &ThetaParam {
        &self.theta
    }
    pub fn n_dims(&self) -> usize {
        self.n_dims
    }
    pub fn omega_samples(&self) -> usize {
        self.omega_samples
    }
    pub fn window(&self) -> OffsetWindow {
        self.window
    }
    pub fn omega_phase(&self) -> f64 {
        self.omega_phase
    }
    pub fn normalization(&self) -> FiberNormalization {
        self.normalization
    }

    /// Number of ω points, `W^n`.
    pub fn num_omegas(&self) -> usize {
        self.omega_samples.pow(self.n_dims as u32)
    }

    /// Fiber length, the window size to the power `n`.
    pub fn window_len(&self) -> usize {
        self.window.offsets_1d().len().pow(self.n_dims as u32)
    }

    /// Offsets in lexicographic order; the trailing component is 0 in 1D.
    pub fn offsets(&self) -> Vec<[i64; 2]> {
        let ks = self.window.offsets_1d();
        match self.n_dims {
            1 => ks.iter().map(|&k| [k, 0]).collect(),
            _ => ks.iter().flat_map(|&a| ks.iter().map(move |&b| [a, b])).collect(),
        }
    }

    /// Position of `k` in [`FiberGrid::offsets`].
    pub fn offset_index(&self, k: [i64; 2]) -> Option<usize> {
        let ks = self.window.offsets_1d();
        let lo = ks[0];
        let len = ks.len() as i64;
        let local = |c: i64| {
            if (0..len).contains(&(c - lo)) {
                Some((c - lo) as usize)
            } else {
                None
            }
        };
        match self.n_dims {
            1 => local(k[0]),
            _ => Some(local(k[0])? * len as usize + local(k[1])?),
        }
    }

    /// Per-dimension cell indices of flat ω index `flat`.
    pub fn omega_cell(&self, flat: usize) -> [usize; 2] {
        match self.n_dims {
            1 => [flat, 0],
            _ => [flat / self.omega_samples, flat % self.omega_samples],
        }
    }

    /// Reduced coordinate `u = ω / |sin θ| ∈ [0, 1)` per dimension.
    pub fn reduced(&self, flat: usize) -> [f64; 2] {
        let cell = self.omega_cell(flat);
        let w = self.omega_samples as f64;
        let u = |c: usize| (c as f64 + self.omega_phase) / w;
        match self.n_dims {
            1 => [u(cell[0]), 0.0],
            _ => [u(cell[0]), u(cell[1])],
        }
    }

    /// ω itself.
    pub fn omega(&self, flat: usize) -> [f64; 2] {
        let u = self.reduced(flat);
        let s = self.theta.sin_abs();
        [u[0] * s, u[1] * s]
    }

    /// Quadrature weight of one ω sample, `(|sin θ| / W)^n`.
    pub fn omega_weight(&self) -> f64 {
        (self.theta.sin_abs() / self.omega_samples as f64).powi(self.n_dims as i32)
    }

    /// Band coordinate `ω csc θ + k` per dimension.
    pub fn band_point(&self, flat: usize, k: [i64; 2]) -> [f64; 2] {
        let u = self.reduced(flat);
        let sgn = self.theta.sin_sign();
        [sgn * u[0] + k[0] as f64, sgn * u[1] + k[1] as f64]
    }

    fn scale(&self) -> f64 {
        match self.normalization {
            FiberNormalization::Plain => 1.0,
            FiberNormalization::Isometric => self.theta.sin_abs().powf(-(self.n_dims as f64) / 2.0),
        }
    }

    pub(crate) fn ensure_matches(&self, other: &FiberGrid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// Fibers `τ^θ f(ω)` at every ω sample, ordered like [`FiberGrid::offsets`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiberField {
    grid: FiberGrid,
    data: Vec<Vec<Complex64>>,
}

impl FiberField {
    pub fn new(grid: FiberGrid, data: Vec<Vec<Complex64>>) -> Result<Self> {
        if data.len() != grid.num_omegas() {
            return Err(Error::InvalidSignal(format!(
                "expected {} fibers, got {}",
                grid.num_omegas(),
                data.len()
            )));
        }
        let len = grid.window_len();
        for v in &data {
            if v.len() != len {
                return Err(Error::InvalidSignal(format!(
                    "fiber length {} != window {len}",
                    v.len()
                )));
            }
            if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::InvalidSignal("non-finite fiber entry".into()));
            }
        }
        Ok(Self { grid, data })
    }

    pub fn zeros(grid: FiberGrid) -> Self {
        let data = vec![vec![Complex64::new(0.0, 0.0); grid.window_len()]; grid.num_omegas()];
        Self { grid, data }
    }

    pub fn grid(&self) -> &FiberGrid {
        &self.grid
    }

    pub fn fiber(&self, omega: usize) -> &[Complex64] {
        &self.data[omega]
    }

    pub fn fibers(&self) -> &[Vec<Complex64>] {
        &self.data
    }

    /// `∫_I Σ_k |τf(ω)_k|² dω` by the uniform rule on the ω samples.
    pub fn energy(&self) -> f64 {
        let total: f64 = self.data.iter().flatten().map(|z| z.norm_sqr()).sum();
        total * self.grid.omega_weight()
    }
}

fn spectrum_position(nu: f64, two_extent: f64, samples: usize) -> Result<Option<usize>> {
    let pos = nu * two_extent + (samples / 2) as f64;
    let rounded = pos.round();
    if (pos - rounded).abs() > 1e-9 * rounded.abs().max(1.0) {
        return Err(Error::GridMismatch);
    }
    Ok(if rounded >= 0.0 && rounded < samples as f64 {
        Some(rounded as usize)
    } else {
        None
    })
}

/// Reads `τ^θ f` off the centered FFT of `C_θ f`.
///
/// Every band point `ω csc θ + k` must be a spectrum frequency of the signal
/// grid (else `GridMismatch`); frequencies beyond the grid's band read as 0.
/// Fails with `TruncationLoss` when the spectrum samples on the same lattice
/// but outside the window carry more than 1e-6 of its energy.
pub fn fiber_map(f: &SampledSignal, grid: &FiberGrid) -> Result<FiberField> {
    let sg = *f.grid();
    if sg.n_dims() != grid.n_dims() {
        return Err(Error::GridMismatch);
    }
    let spectrum = fourier::forward(&chirp_modulate(f, grid.theta(), ChirpSign::Forward));
    let n = sg.samples();
    let two_extent = 2.0 * sg.extent();
    let offsets = grid.offsets();
    let scale = grid.scale();
    let read = |pos: [usize; 2]| -> Complex64 {
        let flat = if grid.n_dims() == 1 {
            pos[0]
        } else {
            pos[0] * n + pos[1]
        };
        spectrum[flat] * scale
    };

    // Per ω: the fiber, the in-window energy and the full lattice energy.
    let per_omega: Vec<Result<(Vec<Complex64>, f64, f64)>> = (0..grid.num_omegas())
        .into_par_iter()
        .map(|w| {
            let mut fiber = Vec::with_capacity(offsets.len());
            for &k in &offsets {
                let nu = grid.band_point(w, k);
                let mut pos = [0usize; 2];
                let mut inside = true;
                for d in 0..grid.n_dims() {
                    match spectrum_position(nu[d], two_extent, n)? {
                        Some(p) => pos[d] = p,
                        None => inside = false,
                    }
                }
                fiber.push(if inside { read(pos) } else { Complex64::new(0.0, 0.0) });
            }
            let kept: f64 = fiber.iter().map(|z| z.norm_sqr()).sum();
            // Lattice positions p ≡ p0 (mod 2E) in every dimension.
            let base = grid.band_point(w, [0, 0]);
            let step = two_extent.round() as usize;
            let mut firsts = [0usize; 2];
            for d in 0..grid.n_dims() {
                let p0 = base[d] * two_extent + (n / 2) as f64;
                firsts[d] = (p0.round() as i64).rem_euclid(step.max(1) as i64) as usize;
            }
            let mut total = 0.0;
            let lattice = |d: usize| (firsts[d]..n).step_by(step.max(1));
            if grid.n_dims() == 1 {
                for p in lattice(0) {
                    total += read([p, 0]).norm_sqr();
                }
            } else {
                for p in lattice(0) {
                    for q in lattice(1) {
                        total += read([p, q]).norm_sqr();
                    }
                }
            }
            Ok((fiber, kept, total))
        })
        .collect();

    let mut data = Vec::with_capacity(per_omega.len());
    let (mut kept, mut total) = (0.0, 0.0);
    for r in per_omega {
        let (fiber, k, t) = r?;
        data.push(fiber);
        kept += k;
        total += t;
    }
    if total > 0.0 {
        let lost = ((total - kept) / total).max(0.0);
        if lost > TRUNCATION_TOL {
            return Err(Error::TruncationLoss { lost });
        }
    }
    Ok(FiberField { grid: *grid, data })
}

/// Per-ω Gramian `G(ω)_{ij} = ⟨τf_i(ω), τf_j(ω)⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramianField {
    grid: FiberGrid,
    matrices: Vec<CMatrix>,
}

impl GramianField {
    pub fn grid(&self) -> &FiberGrid {
        &self.grid
    }

    pub fn matrix(&self, omega: usize) -> &CMatrix {
        &self.matrices[omega]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// Number of data functions `m`.
    pub fn size(&self) -> usize {
        self.matrices.first().map_or(0, CMatrix::dim)
    }
}

/// Fiber inner product, conjugating the second argument.
pub fn fiber_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn gramian_field(fibers: &[FiberField]) -> Result<GramianField> {
    let first = fibers
        .first()
        .ok_or_else(|| Error::InvalidConfig("gramian of an empty family".into()))?;
    let grid = first.grid;
    for f in fibers {
        grid.ensure_matches(&f.grid)?;
    }
    let m = fibers.len();
    let matrices = (0..grid.num_omegas())
        .into_par_iter()
        .map(|w| {
            let mut g = CMatrix::zeros(m);
            for i in 0..m {
                for j in i..m {
                    let v = fiber_dot(fibers[i].fiber(w), fibers[j].fiber(w));
                    g[(i, j)] = v;
                    g[(j, i)] = v.conj();
                }
                g[(i, i)].im = 0.0;
            }
            g
        })
        .collect();
    Ok(GramianField { grid, matrices })
}
