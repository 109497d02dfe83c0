//! θ-translation, θ-modulation, θ-convolution and θ-dilation.
//!
//! Each operator is the chirp conjugate of its classical counterpart:
//! `C_θ T_s^θ = e^{πi|s|² cot θ} T_s C_θ`, `C_θ (f ⋆_θ g) = |sin θ|^{-n/2} (C_θ f ⋆ C_θ g)`
//! and `D_s^θ = C_{-θ} D_s C_θ`. Translations are circular on the grid.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier;
use crate::frft::{chirp_modulate, ChirpSign};
use crate::grid::{for_each_line, Grid, SampledSignal, ThetaParam};

/// Relative slack when deciding that a shift is a whole number of grid steps.
const ON_GRID_TOL: f64 = 1e-9;

/// Real shift vector with one component per grid dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftVector {
    n_dims: usize,
    components: [f64; 2],
}

impl ShiftVector {
    pub fn new(components: &[f64]) -> Result<Self> {
        if !(1..=2).contains(&components.len()) {
            return Err(Error::InvalidSignal(format!(
                "shift must have 1 or 2 components, got {}",
                components.len()
            )));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSignal("shift components must be finite".into()));
        }
        let mut c = [0.0; 2];
        c[..components.len()].copy_from_slice(components);
        Ok(Self {
            n_dims: components.len(),
            components: c,
        })
    }

    /// Shift of `steps[d]` grid spacings along each dimension.
    pub fn from_steps(grid: &Grid, steps: &[isize]) -> Result<Self> {
        let comps: Vec<f64> = steps.iter().map(|&m| m as f64 * grid.spacing()).collect();
        let s = Self::new(&comps)?;
        if s.n_dims != grid.n_dims() {
            return Err(Error::GridMismatch);
        }
        Ok(s)
    }

    pub fn zero(n_dims: usize) -> Self {
        Self {
            n_dims,
            components: [0.0; 2],
        }
    }

    pub fn n_dims(&self) -> usize {
        self.n_dims
    }

    pub fn components(&self) -> &[f64] {
        &self.components[..self.n_dims]
    }

    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, p: [f64; 2]) -> f64 {
        self.components[0] * p[0] + self.components[1] * p[1]
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            n_dims: self.n_dims,
            components: [a * self.components[0], a * self.components[1]],
        }
    }

    pub fn add(&self, other: &ShiftVector) -> Self {
        Self {
            n_dims: self.n_dims,
            components: [
                self.components[0] + other.components[0],
                self.components[1] + other.components[1],
            ],
        }
    }

    /// Integer step counts on `grid`, or `OffGridShift`.
    pub fn steps(&self, grid: &Grid) -> Result<[isize; 2]> {
        if self.n_dims != grid.n_dims() {
            return Err(Error::GridMismatch);
        }
        let spacing = grid.spacing();
        let mut out = [0isize; 2];
        for (slot, &component) in out.iter_mut().zip(&self.components).take(self.n_dims) {
            let ratio = component / spacing;
            let rounded = ratio.round();
            if (ratio - rounded).abs() > ON_GRID_TOL * rounded.abs().max(1.0) {
                return Err(Error::OffGridShift { component, spacing });
            }
            *slot = rounded as isize;
        }
        Ok(out)
    }
}

/// Classical circular shift `f(t - s)` by whole grid steps.
pub fn circular_shift(f: &SampledSignal, s: &ShiftVector) -> Result<SampledSignal> {
    let grid = *f.grid();
    let steps = s.steps(&grid)?;
    let n = grid.samples() as isize;
    let values = f.values();
    let out = (0..grid.len())
        .map(|flat| {
            let [a, b] = grid.unflatten(flat);
            let src = [
                (a as isize - steps[0]).rem_euclid(n) as usize,
                (b as isize - steps[1]).rem_euclid(n) as usize,
            ];
            values[grid.flatten(src)]
        })
        .collect();
    Ok(SampledSignal::from_parts(grid, out))
}

/// `(T_s^θ f)(t) = e^{-2πi s·(t - s) cot θ} f(t - s)`.
///
/// This sign is the one for which `C_θ T_s^θ = e^{πi|s|² cot θ} T_s C_θ` and
/// `F_θ T_s^θ = M_{-s}^θ F_θ` hold with the positive-phase transform.
pub fn theta_translate(f: &SampledSignal, s: &ShiftVector, theta: &ThetaParam) -> Result<SampledSignal> {
    let shifted = circular_shift(f, s)?;
    let grid = *f.grid();
    let rate = -2.0 * PI * theta.cot();
    let ss = s.norm_sq();
    let values = shifted
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| v * Complex64::cis(rate * (s.dot(grid.point(i)) - ss)))
        .collect();
    Ok(SampledSignal::from_parts(grid, values))
}

/// `(M_s^θ f)(t) = e^{πi(|s|² cot θ + 2 s·t csc θ)} f(t)` for any real `s`.
pub fn theta_modulate(f: &SampledSignal, s: &ShiftVector, theta: &ThetaParam) -> Result<SampledSignal> {
    let grid = *f.grid();
    if s.n_dims() != grid.n_dims() {
        return Err(Error::GridMismatch);
    }
    let base = s.norm_sq() * theta.cot();
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| v * Complex64::cis(PI * (base + 2.0 * s.dot(grid.point(i)) * theta.csc())))
        .collect();
    Ok(SampledSignal::from_parts(grid, values))
}

/// Circular classical convolution `(a ⋆ b)(t_j) = Δ^n Σ_i a(t_i) b(t_j - t_i)`.
pub fn classical_convolve(a: &SampledSignal, b: &SampledSignal) -> Result<SampledSignal> {
    a.grid().ensure_matches(b.grid())?;
    let grid = *a.grid();
    let fa = fourier::forward(a);
    let fb = fourier::forward(b);
    let product: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
    Ok(SampledSignal::from_parts(grid, fourier::inverse(&product, &grid)))
}

/// `f ⋆_θ g = C_{-θ}[|sin θ|^{-n/2} (C_θ f ⋆ C_θ g)]`.
pub fn theta_convolve(f: &SampledSignal, g: &SampledSignal, theta: &ThetaParam) -> Result<SampledSignal> {
    f.grid().ensure_matches(g.grid())?;
    let cf = chirp_modulate(f, theta, ChirpSign::Forward);
    let cg = chirp_modulate(g, theta, ChirpSign::Forward);
    let amp = theta.sin_abs().powf(-(f.grid().n_dims() as f64) / 2.0);
    let conv = classical_convolve(&cf, &cg)?.scale(Complex64::new(amp, 0.0));
    Ok(chirp_modulate(&conv, theta, ChirpSign::Backward))
}

/// Largest denominator accepted for a dilation factor.
pub const MAX_SCALE_DENOMINATOR: u64 = 64;
/// Largest numerator accepted; dilation pads each line to `p·N` samples.
pub const MAX_SCALE_NUMERATOR: u64 = 1024;

/// Positive rational dilation factor `p / q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scale {
    p: u64,
    q: u64,
}

impl Scale {
    /// Continued-fraction fit with `p ≤ 1024`, `q ≤ 64` and relative error below 1e-12.
    pub fn new(s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::IrrationalScale(s));
        }
        let (mut h0, mut h1) = (0u64, 1u64);
        let (mut k0, mut k1) = (1u64, 0u64);
        let mut x = s;
        for _ in 0..64 {
            let a = x.floor();
            if a > 1e9 {
                break;
            }
            let a = a as u64;
            let (h2, k2) = (a * h1 + h0, a * k1 + k0);
            if k2 > MAX_SCALE_DENOMINATOR || h2 > MAX_SCALE_NUMERATOR {
                break;
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            if (h1 as f64 / k1 as f64 - s).abs() <= 1e-12 * s {
                return Ok(Self { p: h1, q: k1 });
            }
            let frac = x - a as f64;
            if frac <= 0.0 {
                break;
            }
            x = 1.0 / frac;
        }
        Err(Error::IrrationalScale(s))
    }

    pub fn numer(&self) -> u64 {
        self.p
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// Result of [`theta_dilate_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    pub signal: SampledSignal,
    /// Relative energy change `|‖D f‖² - ‖f‖²| / ‖f‖²` caused by band or grid truncation.
    pub alias_loss: f64,
}

impl Dilation {
    /// True when truncation lost a measurable amount of energy.
    pub fn alias_risk(&self) -> bool {
        self.alias_loss > 1e-8
    }
}

/// Exact spectral dilation of one line: the output spectrum at `ν_k` is
/// `s^{-1/2} ĝ(ν_k / s)`, read from the `p`-fold zero-padded transform.
fn dilate_line(line: &mut [Complex64], spacing: f64, scale: Scale) {
    let n = line.len();
    let (p, q) = (scale.p as usize, scale.q as usize);
    let padded_len = p * n;
    let mut padded = vec![Complex64::new(0.0, 0.0); padded_len];
    let offset = (padded_len - n) / 2;
    padded[offset..offset + n].copy_from_slice(line);
    fourier::forward_line(&mut padded, spacing);
    let amp = scale.value().powf(-0.5);
    let half = (n / 2) as isize;
    let padded_half = (padded_len / 2) as isize;
    for (pos, v) in line.iter_mut().enumerate() {
        // ν_k / s = k q / (p N Δ) is padded frequency index m = k q.
        let m = (pos as isize - half) * q as isize;
        *v = if m >= -padded_half && m < padded_half {
            padded[(m + padded_half) as usize] * amp
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    fourier::inverse_line(line, spacing);
}

/// Classical dilation `D_s g(x) = s^{n/2} g(s x)` on band-limited samples.
pub fn classical_dilate(g: &SampledSignal, scale: Scale) -> SampledSignal {
    let grid = *g.grid();
    let mut values = g.values().to_vec();
    for axis in 0..grid.n_dims() {
        for_each_line(&mut values, grid.n_dims(), grid.samples(), axis, |l| {
            dilate_line(l, grid.spacing(), scale)
        });
    }
    SampledSignal::from_parts(grid, values)
}

/// `D_s^θ f = C_{-θ} D_s C_θ f` together with the measured truncation loss.
pub fn theta_dilate_report(f: &SampledSignal, s: f64, theta: &ThetaParam) -> Result<Dilation> {
    let scale = Scale::new(s)?;
    if scale.p == scale.q {
        return Ok(Dilation {
            signal: f.clone(),
            alias_loss: 0.0,
        });
    }
    let chirped = chirp_modulate(f, theta, ChirpSign::Forward);
    let dilated = classical_dilate(&chirped, scale);
    let signal = chirp_modulate(&dilated, theta, ChirpSign::Backward);
    let before: f64 = f.values().iter().map(|v| v.norm_sqr()).sum();
    let after: f64 = signal.values().iter().map(|v| v.norm_sqr()).sum();
    let alias_loss = if before > 0.0 {
        (after - before).abs() / before
    } else {
        0.0
    };
    Ok(Dilation { signal, alias_loss })
}

/// `D_s^θ f = C_{-θ} D_s C_θ f` for rational `s`.
pub fn theta_dilate(f: &SampledSignal, s: f64, theta: &ThetaParam) -> Result<SampledSignal> {
    theta_dilate_report(f, s, theta).map(|d| d.signal)
}
