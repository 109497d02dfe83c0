//! Chirp modulation and the fractional Fourier transform.
//!
//! The transform uses the positive-phase kernel
//!
//! ```text
//! F_θ f(ω) = |sin θ|^{-n/2} ∫ f(t) e^{πi((|t|² + |ω|²) cot θ - 2 ω·t csc θ)} dt
//!          = |sin θ|^{-n/2} e^{πi|ω|² cot θ} (C_θ f)^(ω csc θ)
//! ```
//!
//! and evaluates the second form with one FFT. The output lives on the grid
//! with spacing `|sin θ| / (NΔ)`, so that `ω csc θ` lands exactly on the FFT
//! frequencies of the input grid.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier;
use crate::grid::{Grid, SampledSignal, ThetaParam, SIN_EPS};

/// Direction of a chirp: `+1` applies `C_θ`, `-1` applies `C_{-θ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChirpSign {
    Forward,
    Backward,
}

impl ChirpSign {
    fn value(self) -> f64 {
        match self {
            ChirpSign::Forward => 1.0,
            ChirpSign::Backward => -1.0,
        }
    }
}

/// Pointwise `e^{±πi|t|² cot θ} f(t)`.
pub fn chirp_modulate(f: &SampledSignal, theta: &ThetaParam, sign: ChirpSign) -> SampledSignal {
    let grid = *f.grid();
    let rate = sign.value() * PI * theta.cot();
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| v * Complex64::cis(rate * grid.norm_sq(i)))
        .collect();
    SampledSignal::from_parts(grid, values)
}

/// Grid on which `frft(f, θ)` is sampled: spacing `|sin θ| / (NΔ)`.
pub fn output_grid(input: &Grid, theta: &ThetaParam) -> Grid {
    let extent = theta.sin_abs() * input.samples() as f64 / (4.0 * input.extent());
    Grid::new(input.n_dims(), input.samples(), extent).expect("scaled grid stays valid")
}

/// Grid of the signal whose transform lives on `output`.
pub fn input_grid(output: &Grid, theta: &ThetaParam) -> Grid {
    // The relation between the two extents is an involution.
    output_grid(output, theta)
}

/// Spectrum position read for output position `pos` (handles `sin θ < 0`).
fn source_position(pos: usize, samples: usize, flip: bool) -> usize {
    if flip {
        (samples - pos) % samples
    } else {
        pos
    }
}

fn permute(values: &[Complex64], grid: &Grid, flip: bool) -> Vec<Complex64> {
    if !flip {
        return values.to_vec();
    }
    let n = grid.samples();
    (0..grid.len())
        .map(|flat| {
            let [a, b] = grid.unflatten(flat);
            let src = [source_position(a, n, true), source_position(b, n, true)];
            values[grid.flatten(src)]
        })
        .collect()
}

/// Fast FrFT for `|sin θ| > 1e-9`.
pub fn frft(f: &SampledSignal, theta: &ThetaParam) -> SampledSignal {
    let input = *f.grid();
    let out_grid = output_grid(&input, theta);
    let chirped = chirp_modulate(f, theta, ChirpSign::Forward);
    let spectrum = fourier::forward(&chirped);
    // ν = ω csc θ: output index k reads spectrum index sgn(sin θ)·k.
    let spectrum = permute(&spectrum, &input, theta.sin() < 0.0);
    let amp = theta.sin_abs().powf(-(input.n_dims() as f64) / 2.0);
    let values = spectrum
        .iter()
        .enumerate()
        .map(|(i, &s)| s * Complex64::from_polar(amp, PI * theta.cot() * out_grid.norm_sq(i)))
        .collect();
    SampledSignal::from_parts(out_grid, values)
}

/// Inverse of [`frft`]; `transformed` must live on a canonical output grid.
pub fn inverse_frft(transformed: &SampledSignal, theta: &ThetaParam) -> SampledSignal {
    let out_grid = *transformed.grid();
    let in_grid = input_grid(&out_grid, theta);
    let amp = theta.sin_abs().powf(out_grid.n_dims() as f64 / 2.0);
    let spectrum: Vec<Complex64> = transformed
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| v * Complex64::from_polar(amp, -PI * theta.cot() * out_grid.norm_sq(i)))
        .collect();
    // The index flip is its own inverse.
    let spectrum = permute(&spectrum, &out_grid, theta.sin() < 0.0);
    let chirped = SampledSignal::from_parts(in_grid, fourier::inverse(&spectrum, &in_grid));
    chirp_modulate(&chirped, theta, ChirpSign::Backward)
}

/// Largest 1D grid accepted by [`frft_direct_oracle`].
pub const ORACLE_LIMIT_1D: usize = 512;
/// Largest per-dimension size accepted by [`frft_direct_oracle`] in 2D.
pub const ORACLE_LIMIT_2D: usize = 64;

/// Riemann-sum quadrature of the FrFT kernel, `O(N²)` in 1D and `O(N⁴)` in 2D.
///
/// Samples the same output grid as [`frft`] but never touches an FFT.
pub fn frft_direct_oracle(f: &SampledSignal, theta: &ThetaParam) -> Result<SampledSignal> {
    let input = *f.grid();
    let limit = if input.n_dims() == 1 {
        ORACLE_LIMIT_1D
    } else {
        ORACLE_LIMIT_2D
    };
    if input.samples() > limit {
        return Err(Error::GridTooLarge {
            samples: input.samples(),
            limit,
        });
    }
    let out_grid = output_grid(&input, theta);
    let n = input.samples();
    let amp_1d = theta.sin_abs().powf(-0.5) * input.spacing();
    // kernel[k][j] = |sin θ|^{-1/2} Δ e^{πi((t² + ω²) cot θ - 2ωt csc θ)}
    let kernel: Vec<Vec<Complex64>> = (0..n)
        .map(|k| {
            let w = out_grid.coord(k);
            (0..n)
                .map(|j| {
                    let t = input.coord(j);
                    let phase = PI * ((t * t + w * w) * theta.cot() - 2.0 * w * t * theta.csc());
                    Complex64::from_polar(amp_1d, phase)
                })
                .collect()
        })
        .collect();
    let values = f.values();
    let out: Vec<Complex64> = match input.n_dims() {
        1 => (0..n).map(|k| (0..n).map(|j| kernel[k][j] * values[j]).sum()).collect(),
        _ => (0..n * n)
            .map(|flat| {
                let (k0, k1) = (flat / n, flat % n);
                let mut acc = Complex64::new(0.0, 0.0);
                for j0 in 0..n {
                    let row = &values[j0 * n..(j0 + 1) * n];
                    let inner: Complex64 = (0..n).map(|j1| kernel[k1][j1] * row[j1]).sum();
                    acc += kernel[k0][j0] * inner;
                }
                acc
            })
            .collect(),
    };
    Ok(SampledSignal::from_parts(out_grid, out))
}

/// How a raw angle is handled by [`frft_at`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrftAngle {
    /// θ = 2kπ: the transform is the identity.
    Identity,
    /// θ = (2k-1)π: the transform is the reflection `f(-ω)`.
    Reflection,
    Kernel(ThetaParam),
}

impl FrftAngle {
    pub fn classify(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::AngleDegenerate {
                theta,
                sin_abs: f64::NAN,
            });
        }
        let turns = theta / PI;
        let nearest = turns.round();
        if (theta - nearest * PI).abs() <= 1e-12 {
            return Ok(if (nearest as i64).rem_euclid(2) == 0 {
                FrftAngle::Identity
            } else {
                FrftAngle::Reflection
            });
        }
        if theta.sin().abs() <= SIN_EPS {
            return Err(Error::AngleDegenerate {
                theta,
                sin_abs: theta.sin().abs(),
            });
        }
        Ok(FrftAngle::Kernel(ThetaParam::new(theta)?))
    }
}

/// `f(-t)` on the centered grid; index `j` maps to `(N - j) mod N` per dimension.
pub fn reflect(f: &SampledSignal) -> SampledSignal {
    let grid = *f.grid();
    SampledSignal::from_parts(grid, permute(f.values(), &grid, true))
}

/// FrFT at an arbitrary angle, including the θ = kπ branches.
pub fn frft_at(f: &SampledSignal, theta: f64) -> Result<SampledSignal> {
    Ok(match FrftAngle::classify(theta)? {
        FrftAngle::Identity => f.clone(),
        FrftAngle::Reflection => reflect(f),
        FrftAngle::Kernel(t) => frft(f, &t),
    })
}

/// Inverse of [`frft_at`].
pub fn inverse_frft_at(transformed: &SampledSignal, theta: f64) -> Result<SampledSignal> {
    Ok(match FrftAngle::classify(theta)? {
        FrftAngle::Identity => transformed.clone(),
        FrftAngle::Reflection => reflect(transformed),
        FrftAngle::Kernel(t) => inverse_frft(transformed, &t),
    })
}

/// Direct quadrature at an arbitrary angle, with the same branches as [`frft_at`].
pub fn frft_direct_oracle_at(f: &SampledSignal, theta: f64) -> Result<SampledSignal> {
    Ok(match FrftAngle::classify(theta)? {
        FrftAngle::Identity => f.clone(),
        FrftAngle::Reflection => reflect(f),
        FrftAngle::Kernel(t) => frft_direct_oracle(f, &t)?,
    })
}
