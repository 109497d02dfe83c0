//! Translation invariance and covariance of θ-scattering features.
//!
//! Both deviations are squared triple norms at a single level `k`, after the
//! chirp `e^{-πik|t|² cot θ}` accumulated by `k` θ-translated layers is
//! removed. The bounds are evaluated as closed forms in `t`, the pooling
//! factors, the atom decay constant `K` and `‖f‖`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{extract_features, LayerConfig};
use crate::error::{Error, Result};
use crate::frft::frft;
use crate::grid::{l2_norm, SampledSignal, ThetaParam};
use crate::ops::{theta_translate, ShiftVector};

/// Below this the FrFT of an output atom counts as decayed at the grid edge.
pub const DECAY_EDGE_TOL: f64 = 1e-6;

/// `K1 = sup |ω| |F_θ φ(ω)|`, `K2 = sup |F_θ φ(ω)|` and `K = max(K1, K2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayConstants {
    pub k1: f64,
    pub k2: f64,
    pub k: f64,
    /// Largest `|ω| |F_θ φ(ω)|` on the boundary of the FrFT grid.
    pub edge: f64,
}

/// Decay constants of an output atom; `NoDecay` if `|ω F_θ φ|` has not
/// fallen below `DECAY_EDGE_TOL` by the edge of the grid.
pub fn atom_decay_constant(phi: &SampledSignal, theta: &ThetaParam) -> Result<DecayConstants> {
    let spectrum = frft(phi, theta);
    let grid = *spectrum.grid();
    let n = grid.samples();
    let (mut k1, mut k2, mut edge) = (0.0f64, 0.0f64, 0.0f64);
    for (i, v) in spectrum.values().iter().enumerate() {
        let r = grid.norm_sq(i).sqrt() * v.norm();
        k1 = k1.max(r);
        k2 = k2.max(v.norm());
        let idx = grid.unflatten(i);
        let on_edge = idx[..grid.n_dims()].iter().any(|&j| j == 0 || j == n - 1);
        if on_edge {
            edge = edge.max(r);
        }
    }
    if edge >= DECAY_EDGE_TOL {
        return Err(Error::NoDecay(edge));
    }
    Ok(DecayConstants {
        k1,
        k2,
        k: k1.max(k2),
        edge,
    })
}

fn check_commuting(layers: &[LayerConfig], theta: &ThetaParam) -> Result<()> {
    for (i, l) in layers.iter().enumerate() {
        if !l.nonlinearity().commutes_with_translation(theta) {
            return Err(Error::NonCommutingOps(format!(
                "layer {} nonlinearity {:?}",
                i + 1,
                l.nonlinearity()
            )));
        }
        if !l.pooling().commutes_with_translation(theta) {
            return Err(Error::NonCommutingOps(format!(
                "layer {} pooling {:?}",
                i + 1,
                l.pooling()
            )));
        }
    }
    Ok(())
}

fn level_phase(k: usize, t: &ShiftVector, theta: &ThetaParam) -> Complex64 {
    Complex64::cis(-PI * k as f64 * t.norm_sq() * theta.cot())
}

/// `|||e^{-πik|t|² cot θ} Φ^k(T_t^θ f) - Φ^k(f)|||²`.
pub fn invariance_deviation(
    f: &SampledSignal,
    t: &ShiftVector,
    layers: &[LayerConfig],
    k: usize,
    theta: &ThetaParam,
) -> Result<f64> {
    check_commuting(&layers[..k.min(layers.len())], theta)?;
    let moved = theta_translate(f, t, theta)?;
    let a = extract_features(&moved, layers, k, theta)?;
    let b = extract_features(f, layers, k, theta)?;
    let phase = level_phase(k, t, theta);
    a.level(k)
        .iter()
        .zip(b.level(k))
        .map(|((_, x), (_, y))| Ok(l2_norm(&x.scale(phase).sub(y)?).powi(2)))
        .sum()
}

/// `|||e^{-πik|t|² cot θ} Φ^k(T_t^θ f) - T_t^θ Φ^k(f)|||²`.
pub fn covariance_deviation(
    f: &SampledSignal,
    t: &ShiftVector,
    layers: &[LayerConfig],
    k: usize,
    theta: &ThetaParam,
) -> Result<f64> {
    check_commuting(&layers[..k.min(layers.len())], theta)?;
    let moved = theta_translate(f, t, theta)?;
    let a = extract_features(&moved, layers, k, theta)?;
    let b = extract_features(f, layers, k, theta)?;
    let phase = level_phase(k, t, theta);
    a.level(k)
        .iter()
        .zip(b.level(k))
        .map(|((_, x), (_, y))| Ok(l2_norm(&x.scale(phase).sub(&theta_translate(y, t, theta)?)?).powi(2)))
        .sum()
}

/// `S = Π s_j` and `Σ 1/s_j²` over the first `k` pooling factors.
fn pooling_sums(factors: &[f64]) -> (f64, f64) {
    (factors.iter().product(), factors.iter().map(|s| 1.0 / (s * s)).sum())
}

/// Upper bound on `invariance_deviation` at level `k` for shift length `|t|`,
/// pooling factors `s_1..s_k` and output-atom constant `K`.
pub fn invariance_bound(t_abs: f64, factors: &[f64], k_const: f64, f_norm: f64, theta: &ThetaParam) -> f64 {
    let (s, sum) = pooling_sums(factors);
    let (cot, csc) = (theta.cot(), theta.csc());
    let (t2, t3, t4) = (t_abs.powi(2), t_abs.powi(3), t_abs.powi(4));
    let cc = (cot * csc).abs();
    let bracket = t4 / s.powi(4) * cot * cot
        + t4 * sum * sum * cot * cot
        + 4.0 * t2 / (s * s) * csc * csc
        + 4.0 * t3 / s.powi(3) * cc
        + 4.0 * t3 / s * sum * cc;
    PI * PI * k_const * k_const * f_norm * f_norm * bracket
}

/// Upper bound on `covariance_deviation` at level `k`.
pub fn covariance_bound(t_abs: f64, factors: &[f64], k_const: f64, f_norm: f64, theta: &ThetaParam) -> f64 {
    let (s, sum) = pooling_sums(factors);
    let (cot, csc) = (theta.cot(), theta.csc());
    let (t2, t4, t52) = (t_abs.powi(2), t_abs.powi(4), t_abs.powf(2.5));
    let cc = (cot * csc).abs();
    let a = 1.0 - 1.0 / (s * s);
    let b = 1.0 - 1.0 / s;
    let bracket = t4 * sum * sum * cot * cot
        + t4 * a * cot * cot
        + 4.0 * t2 * b * b * csc * csc
        + 4.0 * t52 * cc * sum
        + 4.0 * t52 * cc * a * b
        + 2.0 * t4 * sum * a * csc.abs() * cot * cot;
    PI * PI * k_const * k_const * f_norm * f_norm * bracket
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::frft_gaussian_atom;
    use crate::grid::Grid;
    use crate::scatter::{standard_layers, Nonlinearity, Pooling};

    #[test]
    fn gaussian_decay_constants() {
        let grid = Grid::new(1, 512, 16.0).unwrap();
        let t = ThetaParam::new(PI / 3.0).unwrap();
        let phi = frft_gaussian_atom(&grid, &t, [0.0, 0.0], 1.0, 1.0);
        let d = atom_decay_constant(&phi, &t).unwrap();
        assert!((d.k2 - 1.0).abs() < 1e-12);
        let k1 = (2.0 * PI).powf(-0.5) * (-0.5f64).exp();
        assert!((d.k1 - k1).abs() < 1e-3, "{}", d.k1);
        assert_eq!(d.k, 1.0);
        let zero = atom_decay_constant(&SampledSignal::zeros(grid), &t).unwrap();
        assert_eq!(zero.k, 0.0);
    }

    #[test]
    fn bounds_vanish_at_zero_shift_and_grow() {
        let t = ThetaParam::new(PI / 3.0).unwrap();
        let f = [2.0, 2.0];
        assert_eq!(invariance_bound(0.0, &f, 1.0, 1.0, &t), 0.0);
        assert_eq!(covariance_bound(0.0, &f, 1.0, 1.0, &t), 0.0);
        let mut prev = 0.0;
        for step in 1..10 {
            let b = invariance_bound(step as f64 * 0.1, &f, 1.0, 1.0, &t);
            assert!(b > prev);
            prev = b;
        }
        // Quadratic in K and ‖f‖.
        let b1 = invariance_bound(0.3, &f, 1.0, 1.0, &t);
        assert!((invariance_bound(0.3, &f, 2.0, 3.0, &t) - 36.0 * b1).abs() < 1e-12 * b1 * 36.0);
    }

    #[test]
    fn bounds_match_hand_evaluation() {
        let t = ThetaParam::new(PI / 3.0).unwrap();
        let cov = covariance_bound(1.0, &[2.0, 2.0], 1.0, 1.0, &t);
        let inv = invariance_bound(1.0, &[2.0, 2.0], 1.0, 1.0, &t);
        assert!((cov - 68.74189912246354).abs() < 1e-11, "{cov}");
        assert!((inv - 7.826287864926329).abs() < 1e-12, "{inv}");
    }

    #[test]
    fn quarter_turn_keeps_only_the_csc_term() {
        let t = ThetaParam::new(PI / 2.0).unwrap();
        let (ta, k, nf) = (0.7, 0.9, 1.3);
        let b = invariance_bound(ta, &[2.0, 3.0], k, nf, &t);
        let expected = 4.0 * ta * ta / 36.0 * PI * PI * k * k * nf * nf;
        assert!((b - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn invariance_bound_is_nonincreasing_in_each_factor() {
        let t = ThetaParam::new(2.0 * PI / 5.0).unwrap();
        let steps: Vec<f64> = (0..12).map(|i| 1.0 + 0.5 * i as f64).collect();
        for &other in &steps {
            for w in steps.windows(2) {
                let lo = invariance_bound(0.8, &[w[0], other], 1.0, 1.0, &t);
                let hi = invariance_bound(0.8, &[w[1], other], 1.0, 1.0, &t);
                assert!(hi <= lo * (1.0 + 1e-14));
                let lo = invariance_bound(0.8, &[other, w[0]], 1.0, 1.0, &t);
                let hi = invariance_bound(0.8, &[other, w[1]], 1.0, 1.0, &t);
                assert!(hi <= lo * (1.0 + 1e-14));
            }
        }
    }

    #[test]
    fn covariance_bound_large_factor_limit() {
        // With Σ 1/s² → 0 and S → ∞ the (1 - 1/S…) terms reach their t-only ceilings.
        let t = ThetaParam::new(PI / 3.0).unwrap();
        let ta: f64 = 0.6;
        let ceiling = PI
            * PI
            * (ta.powi(4) * t.cot().powi(2)
                + 4.0 * ta * ta * t.csc().powi(2)
                + 4.0 * ta.powf(2.5) * (t.cot() * t.csc()).abs());
        let b = covariance_bound(ta, &[1e6, 1e6], 1.0, 1.0, &t);
        assert!((b - ceiling).abs() < 1e-5 * ceiling);
    }

    #[test]
    fn decay_constants_scale_linearly() {
        let grid = Grid::new(1, 256, 8.0).unwrap();
        let t = ThetaParam::new(1.0).unwrap();
        let phi = frft_gaussian_atom(&grid, &t, [0.0, 0.0], 1.0, 1.0);
        let a = atom_decay_constant(&phi, &t).unwrap();
        let b = atom_decay_constant(&phi.scale(Complex64::new(0.0, -2.5)), &t).unwrap();
        for (x, y) in [(a.k1, b.k1), (a.k2, b.k2), (a.k, b.k)] {
            assert!((2.5 * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn modulus_is_rejected_off_quarter_turn() {
        let grid = Grid::new(1, 128, 8.0).unwrap();
        let t = ThetaParam::new(1.0).unwrap();
        let layers = standard_layers(&grid, &t, 2, 2.0, Nonlinearity::Modulus, Pooling::Identity, 0.3).unwrap();
        let f = frft_gaussian_atom(&grid, &t, [0.0, 0.0], 1.0, 1.0);
        let s = ShiftVector::from_steps(&grid, &[3]).unwrap();
        assert!(matches!(
            invariance_deviation(&f, &s, &layers, 1, &t),
            Err(Error::NonCommutingOps(_))
        ));
        assert!(matches!(
            covariance_deviation(&f, &s, &layers, 1, &t),
            Err(Error::NonCommutingOps(_))
        ));
        // Level 0 uses no layer operators.
        assert!(invariance_deviation(&f, &s, &layers, 0, &t).is_ok());
    }

    #[test]
    fn zero_shift_gives_zero_deviation() {
        let grid = Grid::new(1, 128, 8.0).unwrap();
        let t = ThetaParam::new(1.0).unwrap();
        let layers = standard_layers(&grid, &t, 3, 2.0, Nonlinearity::Shrink(0.05), Pooling::Identity, 0.3).unwrap();
        let f = SampledSignal::from_fn(grid, |[x, _]| Complex64::new((-PI * x * x).exp(), 0.3 * x));
        let s = ShiftVector::zero(1);
        for k in 0..=2 {
            assert!(invariance_deviation(&f, &s, &layers, k, &t).unwrap() < 1e-28);
            assert!(covariance_deviation(&f, &s, &layers, k, &t).unwrap() < 1e-28);
        }
    }
}
