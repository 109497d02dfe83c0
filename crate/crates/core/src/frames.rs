//! Semi-discrete θ-frames `{T_s^θ g_λ}`: frame bounds from the FrFT spectrum
//! and the admissibility test for scattering module sequences.
//!
//! The family is a frame with bounds `C1, C2` iff
//! `C1 ≤ |sin θ|^n Σ_λ |F_θ g_λ(ω)|² ≤ C2` for almost every ω. The θ-convolution
//! energy then obeys `Σ_λ ‖f ⋆_θ g_λ‖² ≤ (C2 / |sin θ|^n) ‖f‖²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frft::{frft, inverse_frft, output_grid};
use crate::grid::{l2_norm, Grid, SampledSignal, ThetaParam};
use crate::ops::theta_convolve;

/// Finite filter bank `{g_λ}` sharing one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomBank {
    atoms: Vec<SampledSignal>,
    theta: ThetaParam,
}

impl AtomBank {
    pub fn new(atoms: Vec<SampledSignal>, theta: ThetaParam) -> Result<Self> {
        let first = atoms
            .first()
            .ok_or_else(|| Error::InvalidConfig("atom bank is empty".into()))?;
        let grid = *first.grid();
        for a in &atoms {
            grid.ensure_matches(a.grid())?;
        }
        Ok(Self { atoms, theta })
    }

    pub fn atoms(&self) -> &[SampledSignal] {
        &self.atoms
    }

    pub fn theta(&self) -> &ThetaParam {
        &self.theta
    }

    pub fn grid(&self) -> &Grid {
        self.atoms[0].grid()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Bank with every atom multiplied by `a`.
    pub fn scaled(&self, a: Complex64) -> Self {
        Self {
            atoms: self.atoms.iter().map(|g| g.scale(a)).collect(),
            theta: self.theta,
        }
    }

    /// Concatenation of two banks on the same grid and angle.
    pub fn union(&self, other: &AtomBank) -> Result<Self> {
        if self.theta != other.theta {
            return Err(Error::InvalidConfig("banks use different angles".into()));
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Self::new(atoms, self.theta)
    }
}

/// Grid infimum and supremum of the frame spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    /// Grid of the FrFT domain on which `spectrum` is sampled.
    pub omega_grid: Grid,
    /// `|sin θ|^n Σ_λ |F_θ g_λ(ω)|²`.
    pub spectrum: Vec<f64>,
    sin_pow: f64,
}

impl FrameBounds {
    /// Constant `B` in `Σ_λ ‖f ⋆_θ g_λ‖² ≤ B ‖f‖²`, namely `C2 / |sin θ|^n`.
    pub fn energy_bound(&self) -> f64 {
        self.upper / self.sin_pow
    }
}

pub fn frame_bounds(bank: &AtomBank) -> FrameBounds {
    let theta = bank.theta;
    let n = bank.grid().n_dims();
    let sin_pow = theta.sin_abs().powi(n as i32);
    let transforms: Vec<SampledSignal> = bank.atoms.par_iter().map(|g| frft(g, &theta)).collect();
    let omega_grid = *transforms[0].grid();
    let spectrum: Vec<f64> = (0..omega_grid.len())
        .map(|i| sin_pow * transforms.iter().map(|t| t.values()[i].norm_sqr()).sum::<f64>())
        .collect();
    let lower = spectrum.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = spectrum.iter().copied().fold(0.0, f64::max);
    FrameBounds {
        lower,
        upper,
        omega_grid,
        spectrum,
        sin_pow,
    }
}

/// Relative slack absorbing rounding in computed frame bounds.
pub const ADMISSIBILITY_TOL: f64 = 1e-12;

/// `max{B_k, B_k L_k² R_k²} ≤ 1` for every layer `(B_k, L_k, R_k)`.
pub fn check_admissibility(layers: &[(f64, f64, f64)]) -> bool {
    layers
        .iter()
        .all(|&(b, l, r)| b.max(b * l * l * r * r) <= 1.0 + ADMISSIBILITY_TOL)
}

/// `Σ_λ ‖f ⋆_θ g_λ‖² / ‖f‖²`, computed with θ-convolutions.
pub fn frame_energy_ratio(bank: &AtomBank, f: &SampledSignal) -> Result<f64> {
    let norm = l2_norm(f).powi(2);
    let total: f64 = bank
        .atoms
        .iter()
        .map(|g| theta_convolve(f, g, &bank.theta).map(|c| l2_norm(&c).powi(2)))
        .sum::<Result<f64>>()?;
    Ok(if norm > 0.0 { total / norm } else { 0.0 })
}

/// Signal whose FrFT on the canonical output grid equals `profile(ω)`.
pub fn frft_domain_atom(grid: &Grid, theta: &ThetaParam, profile: impl Fn([f64; 2]) -> Complex64) -> SampledSignal {
    let og = output_grid(grid, theta);
    let spectrum = SampledSignal::from_fn(og, profile);
    inverse_frft(&spectrum, theta)
}

fn smoothstep(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * (3.0 - 2.0 * s)
}

/// Low-pass/high-pass pair with `|F_θ g_lo|² + |F_θ g_hi|² = amplitude²`
/// everywhere; the transition runs over `cutoff ± width/2` in `|ω|`.
pub fn complementary_pair(
    grid: &Grid,
    theta: &ThetaParam,
    cutoff: f64,
    width: f64,
    amplitude: f64,
) -> Result<AtomBank> {
    let angle = move |p: [f64; 2]| {
        let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
        0.5 * PI * smoothstep((r - cutoff) / width + 0.5)
    };
    let lo = frft_domain_atom(grid, theta, |p| Complex64::new(amplitude * angle(p).cos(), 0.0));
    let hi = frft_domain_atom(grid, theta, |p| Complex64::new(amplitude * angle(p).sin(), 0.0));
    AtomBank::new(vec![lo, hi], *theta)
}

/// Atom with `F_θ φ(ω) = amplitude · e^{-π|ω - centre|² / width²}`.
pub fn frft_gaussian_atom(
    grid: &Grid,
    theta: &ThetaParam,
    centre: [f64; 2],
    width: f64,
    amplitude: f64,
) -> SampledSignal {
    frft_domain_atom(grid, theta, |p| {
        let r = (p[0] - centre[0]).powi(2) + (p[1] - centre[1]).powi(2);
        Complex64::new(amplitude * (-PI * r / (width * width)).exp(), 0.0)
    })
}
