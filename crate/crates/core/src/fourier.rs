//! Centered-grid Fourier transform `ĝ(ν) = ∫ g(t) e^{-2πiνt} dt` via FFT.
//!
//! On a grid of `N` samples with spacing `Δ`, the spectrum is sampled at
//! `ν_k = k / (NΔ)` for `k = -N/2 .. N/2 - 1`, stored at position `k + N/2`.
//! Because `t_0 = -NΔ/2`, the origin shift contributes the phase `(-1)^k`.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::{for_each_line, SampledSignal};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// Unnormalized in-place FFT (`e^{-2πi}` forward, `e^{+2πi}` inverse).
pub(crate) fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    plan(buf.len(), inverse).process(buf);
}

fn sign(k: isize) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// 1D centered forward transform of one line, including the `Δ` weight.
pub(crate) fn forward_line(line: &mut [Complex64], spacing: f64) {
    let n = line.len();
    let half = n / 2;
    fft_in_place(line, false);
    line.rotate_left(half);
    for (pos, v) in line.iter_mut().enumerate() {
        let k = pos as isize - half as isize;
        *v *= sign(k) * spacing;
    }
}

/// Inverse of [`forward_line`].
pub(crate) fn inverse_line(line: &mut [Complex64], spacing: f64) {
    let n = line.len();
    let half = n / 2;
    for (pos, v) in line.iter_mut().enumerate() {
        let k = pos as isize - half as isize;
        *v *= sign(k);
    }
    line.rotate_right(half);
    fft_in_place(line, true);
    let scale = 1.0 / (n as f64 * spacing);
    line.iter_mut().for_each(|v| *v *= scale);
}

/// Spectrum samples `ĝ(ν_k)` of a signal, same layout as the input.
pub fn forward(signal: &SampledSignal) -> Vec<Complex64> {
    let grid = signal.grid();
    let mut out = signal.values().to_vec();
    for axis in 0..grid.n_dims() {
        for_each_line(&mut out, grid.n_dims(), grid.samples(), axis, |l| {
            forward_line(l, grid.spacing())
        });
    }
    out
}

/// Recovers samples on `grid`'s time axis from spectrum samples `ĝ(ν_k)`.
pub fn inverse(spectrum: &[Complex64], grid: &crate::grid::Grid) -> Vec<Complex64> {
    let mut out = spectrum.to_vec();
    for axis in 0..grid.n_dims() {
        for_each_line(&mut out, grid.n_dims(), grid.samples(), axis, |l| {
            inverse_line(l, grid.spacing())
        });
    }
    out
}

/// Frequency `ν_k` at spectrum position `pos` for a grid with `samples` and `spacing`.
pub fn frequency(pos: usize, samples: usize, spacing: f64) -> f64 {
    (pos as f64 - (samples / 2) as f64) / (samples as f64 * spacing)
}
