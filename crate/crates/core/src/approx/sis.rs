//! Optimal θ-shift-invariant approximation of a finite data set.
//!
//! At each ω the Gramian `G(ω) = Y Λ Y*` is diagonalized and the generator
//! fibers `q_i(ω) = σ_i(ω) Σ_j conj(y_{ij}(ω)) τf_j(ω)` with
//! `σ_i = λ_i^{-1/2}` (0 on the numerical kernel) span the best `ℓ`-dimensional
//! subspace of the fiber span. The projection error is `Σ_{i>ℓ} λ_i(ω)`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::fiber::{fiber_dot, gramian_field, FiberField, FiberGrid, FiberNormalization};
use crate::error::{Error, Result};
use crate::fourier;
use crate::frft::{chirp_modulate, ChirpSign};
use crate::grid::{Grid, SampledSignal};
use crate::linalg::{hermitian_eig, CMatrix, Eigen};

/// Eigenvalues at or below `ZERO_EIGEN_TOL · λ_1(ω)` are treated as zero.
pub const ZERO_EIGEN_TOL: f64 = 1e-10;

/// Fitted θ-shift-invariant space.
#[derive(Debug, Clone, PartialEq)]
pub struct SisModel {
    grid: FiberGrid,
    ell: usize,
    eigen: Vec<Eigen>,
    sigma: Vec<Vec<f64>>,
    generators: Vec<Vec<Vec<Complex64>>>,
}

impl SisModel {
    pub fn grid(&self) -> &FiberGrid {
        &self.grid
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Number of data functions.
    pub fn size(&self) -> usize {
        self.eigen.first().map_or(0, |e| e.values.len())
    }

    pub fn eigen(&self, omega: usize) -> &Eigen {
        &self.eigen[omega]
    }

    /// Eigenvalues `λ_1(ω) ≥ … ≥ λ_m(ω)`.
    pub fn eigenvalues(&self, omega: usize) -> &[f64] {
        &self.eigen[omega].values
    }

    /// `σ_i(ω)` for `i < ℓ`.
    pub fn sigma(&self, omega: usize) -> &[f64] {
        &self.sigma[omega]
    }

    /// Generator fibers `q_1(ω) … q_ℓ(ω)`.
    pub fn generators(&self, omega: usize) -> &[Vec<Complex64>] {
        &self.generators[omega]
    }

    /// Coefficients `c_j` with `q_i(ω) = Σ_j c_j τf_j(ω)`.
    pub fn mixing(&self, omega: usize, i: usize) -> Vec<Complex64> {
        let y = self.eigen[omega].vector(i);
        y.iter().map(|v| v.conj() * self.sigma[omega][i]).collect()
    }

    /// Per-ω fitted error `Σ_{i>ℓ} λ_i(ω)`.
    pub fn tail_sum(&self, omega: usize) -> f64 {
        self.eigen[omega].values[self.ell..].iter().sum()
    }

    /// Frame operator `Σ_i q_i(ω) q_i(ω)*` on the fiber space.
    pub fn frame_operator(&self, omega: usize) -> CMatrix {
        let len = self.grid.window_len();
        let mut s = CMatrix::zeros(len);
        for q in &self.generators[omega] {
            for a in 0..len {
                for b in 0..len {
                    s[(a, b)] += q[a] * q[b].conj();
                }
            }
        }
        s
    }
}

/// Eigenpairs, `σ_i` and generator fibers at one ω.
type OmegaFit = (Eigen, Vec<f64>, Vec<Vec<Complex64>>);

/// Fits the optimal `ℓ`-generator space to the data fibers.
pub fn fit_sis(fibers: &[FiberField], ell: usize) -> Result<SisModel> {
    let m = fibers.len();
    if ell == 0 || ell > m {
        return Err(Error::BadRank { ell, available: m });
    }
    let gram = gramian_field(fibers)?;
    let grid = *gram.grid();
    let per_omega: Vec<Result<OmegaFit>> = (0..grid.num_omegas())
        .into_par_iter()
        .map(|w| {
            let eigen = hermitian_eig(gram.matrix(w))?;
            let top = eigen.values[0];
            let sigma: Vec<f64> = eigen.values[..ell]
                .iter()
                .map(|&l| {
                    if top > 0.0 && l > ZERO_EIGEN_TOL * top {
                        l.powf(-0.5)
                    } else {
                        0.0
                    }
                })
                .collect();
            let len = grid.window_len();
            let gens = (0..ell)
                .map(|i| {
                    let y = eigen.vector(i);
                    let mut q = vec![Complex64::new(0.0, 0.0); len];
                    if sigma[i] > 0.0 {
                        for (j, f) in fibers.iter().enumerate() {
                            let c = y[j].conj() * sigma[i];
                            for (qk, fk) in q.iter_mut().zip(f.fiber(w)) {
                                *qk += c * fk;
                            }
                        }
                    }
                    q
                })
                .collect();
            Ok((eigen, sigma, gens))
        })
        .collect();
    let mut eigen = Vec::with_capacity(per_omega.len());
    let mut sigma = Vec::with_capacity(per_omega.len());
    let mut generators = Vec::with_capacity(per_omega.len());
    for r in per_omega {
        let (e, s, g) = r?;
        eigen.push(e);
        sigma.push(s);
        generators.push(g);
    }
    Ok(SisModel {
        grid,
        ell,
        eigen,
        sigma,
        generators,
    })
}

/// `E(F, ℓ) = Σ_{i>ℓ} ∫_I λ_i(ω) dω` by the uniform rule on the ω samples.
pub fn approximation_error(model: &SisModel) -> f64 {
    let sum: f64 = (0..model.grid.num_omegas()).map(|w| model.tail_sum(w)).sum();
    sum * model.grid.omega_weight()
}

fn project_fiber(x: &[Complex64], gens: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
    for q in gens {
        let c = fiber_dot(x, q);
        for (o, qk) in out.iter_mut().zip(q) {
            *o += c * qk;
        }
    }
    out
}

/// Fiberwise orthogonal projection `Σ_i ⟨τf(ω), q_i(ω)⟩ q_i(ω)`.
pub fn project(fiber_f: &FiberField, model: &SisModel) -> Result<FiberField> {
    fiber_f.grid().ensure_matches(&model.grid)?;
    let data = (0..model.grid.num_omegas())
        .into_par_iter()
        .map(|w| project_fiber(fiber_f.fiber(w), &model.generators[w]))
        .collect();
    FiberField::new(model.grid, data)
}

/// Time-domain generator `φ_i` with `τ^θ φ_i = q_i`.
///
/// Needs a fiber lattice equal to the DFT lattice of `signal_grid`
/// (`W = 2·extent`, unshifted ω samples); spectrum entries outside the
/// offset window are zero.
pub fn synthesize_generator(model: &SisModel, i: usize, signal_grid: &Grid) -> Result<SampledSignal> {
    let fg = model.grid;
    if i >= model.ell {
        return Err(Error::BadRank {
            ell: i + 1,
            available: model.ell,
        });
    }
    let two_extent = 2.0 * signal_grid.extent();
    if signal_grid.n_dims() != fg.n_dims()
        || fg.omega_phase() != 0.0
        || (two_extent - fg.omega_samples() as f64).abs() > 1e-9 * two_extent
    {
        return Err(Error::GridMismatch);
    }
    let n = signal_grid.samples();
    let w_count = fg.omega_samples() as i64;
    let sgn = fg.theta().sin_sign();
    // Frequency position p ↦ (ω cell, offset) with ν = sgn·u + k, u ∈ [0, 1).
    let locate = |p: usize| -> (usize, i64) {
        let idx = p as i64 - (n / 2) as i64; // ν = idx / W
        if sgn > 0.0 {
            let k = idx.div_euclid(w_count);
            (idx.rem_euclid(w_count) as usize, k)
        } else {
            let k = -((-idx).div_euclid(w_count));
            let cell = (k * w_count - idx) as usize;
            (cell, k)
        }
    };
    let scale = match fg.normalization() {
        FiberNormalization::Plain => 1.0,
        FiberNormalization::Isometric => fg.theta().sin_abs().powf(fg.n_dims() as f64 / 2.0),
    };
    let spectrum: Vec<Complex64> = (0..signal_grid.len())
        .map(|flat| {
            let [a, b] = signal_grid.unflatten(flat);
            let (ca, ka) = locate(a);
            let (omega, k) = if fg.n_dims() == 1 {
                (ca, [ka, 0])
            } else {
                let (cb, kb) = locate(b);
                (ca * fg.omega_samples() + cb, [ka, kb])
            };
            match fg.offset_index(k) {
                Some(pos) => model.generators[omega][i][pos] * scale,
                None => Complex64::new(0.0, 0.0),
            }
        })
        .collect();
    let chirped = SampledSignal::new(*signal_grid, fourier::inverse(&spectrum, signal_grid))?;
    Ok(chirp_modulate(&chirped, fg.theta(), ChirpSign::Backward))
}
