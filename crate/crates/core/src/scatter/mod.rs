//! θ-scattering feature extractor.
//!
//! Layer `k` maps `f` to `U_k[λ] f = D_{s_k}^θ P_k M_k (f ⋆_θ g_λ)` for every
//! atom `g_λ` of its bank. A path `q = (λ_1, …, λ_k)` composes these maps and
//! level `k` of the feature tree holds `(U[q] f) ⋆_θ φ_k` for every path of
//! length `k`, where `φ_k` is the output atom of layer `k`.

pub mod invariance;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frames::{check_admissibility, frame_bounds, AtomBank, FrameBounds};
use crate::grid::{l2_norm, SampledSignal, ThetaParam};
use crate::ops::{theta_convolve, theta_dilate, Scale};

pub use invariance::{
    atom_decay_constant, covariance_bound, covariance_deviation, invariance_bound, invariance_deviation, DecayConstants,
};

/// Pointwise nonlinearity `M_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Nonlinearity {
    Identity,
    Modulus,
    /// `z ↦ z · max(0, |z| - b) / |z|`; commutes with unimodular factors.
    Shrink(f64),
}

impl Nonlinearity {
    pub fn apply(&self, z: Complex64) -> Complex64 {
        match *self {
            Nonlinearity::Identity => z,
            Nonlinearity::Modulus => Complex64::new(z.norm(), 0.0),
            Nonlinearity::Shrink(b) => {
                let r = z.norm();
                if r <= b || r == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    z * ((r - b) / r)
                }
            }
        }
    }

    pub fn lipschitz(&self) -> f64 {
        1.0
    }

    /// Whether `M(T_t^θ f) = T_t^θ M(f)`; the modulus only qualifies when the
    /// translation carries no chirp phase.
    pub fn commutes_with_translation(&self, theta: &ThetaParam) -> bool {
        match self {
            Nonlinearity::Identity | Nonlinearity::Shrink(_) => true,
            Nonlinearity::Modulus => theta.is_quarter_turn(),
        }
    }
}

/// Pooling operator `P_k`, applied before the dilation by `s_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pooling {
    Identity,
    Modulus,
}

impl Pooling {
    pub fn apply(&self, z: Complex64) -> Complex64 {
        match self {
            Pooling::Identity => z,
            Pooling::Modulus => Complex64::new(z.norm(), 0.0),
        }
    }

    pub fn lipschitz(&self) -> f64 {
        1.0
    }

    pub fn commutes_with_translation(&self, theta: &ThetaParam) -> bool {
        match self {
            Pooling::Identity => true,
            Pooling::Modulus => theta.is_quarter_turn(),
        }
    }
}

/// One θ-module: filter bank, output atom, nonlinearity, pooling and pooling factor.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerConfig {
    bank: AtomBank,
    output_atom: SampledSignal,
    nonlinearity: Nonlinearity,
    pooling: Pooling,
    pooling_factor: f64,
    bounds: FrameBounds,
    decay: DecayConstants,
}

impl LayerConfig {
    pub fn new(
        bank: AtomBank,
        output_atom: SampledSignal,
        nonlinearity: Nonlinearity,
        pooling: Pooling,
        pooling_factor: f64,
    ) -> Result<Self> {
        if pooling_factor.is_nan() || pooling_factor < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "pooling factor must be >= 1, got {pooling_factor}"
            )));
        }
        Scale::new(pooling_factor)?;
        if let Nonlinearity::Shrink(b) = nonlinearity {
            if !(b >= 0.0 && b.is_finite()) {
                return Err(Error::InvalidConfig(format!("shrink threshold must be >= 0, got {b}")));
            }
        }
        bank.grid().ensure_matches(output_atom.grid())?;
        let decay = atom_decay_constant(&output_atom, bank.theta())?;
        // The output atom is a member of the layer's frame.
        let full = bank.union(&AtomBank::new(vec![output_atom.clone()], *bank.theta())?)?;
        let bounds = frame_bounds(&full);
        Ok(Self {
            bank,
            output_atom,
            nonlinearity,
            pooling,
            pooling_factor,
            bounds,
            decay,
        })
    }

    pub fn bank(&self) -> &AtomBank {
        &self.bank
    }
    pub fn output_atom(&self) -> &SampledSignal {
        &self.output_atom
    }
    pub fn nonlinearity(&self) -> Nonlinearity {
        self.nonlinearity
    }
    pub fn pooling(&self) -> Pooling {
        self.pooling
    }
    pub fn pooling_factor(&self) -> f64 {
        self.pooling_factor
    }
    pub fn frame_bounds(&self) -> &FrameBounds {
        &self.bounds
    }
    pub fn decay(&self) -> &DecayConstants {
        &self.decay
    }

    /// `B_k` with `‖f ⋆_θ φ_k‖² + Σ_λ ‖f ⋆_θ g_λ‖² ≤ B_k ‖f‖²`.
    pub fn energy_bound(&self) -> f64 {
        self.bounds.energy_bound()
    }

    /// `(B_k, L_k, R_k)` as used by the admissibility test.
    pub fn constants(&self) -> (f64, f64, f64) {
        (
            self.energy_bound(),
            self.nonlinearity.lipschitz(),
            self.pooling.lipschitz(),
        )
    }
}

/// Admissibility of the first `depth` layers.
pub fn is_admissible(layers: &[LayerConfig]) -> bool {
    let consts: Vec<_> = layers.iter().map(LayerConfig::constants).collect();
    check_admissibility(&consts)
}

/// `U_k[λ] f = D_{s_k}^θ P_k M_k (f ⋆_θ g_λ)`.
pub fn u_layer(f: &SampledSignal, lambda: usize, layer: &LayerConfig, theta: &ThetaParam) -> Result<SampledSignal> {
    let atom = layer
        .bank
        .atoms()
        .get(lambda)
        .ok_or_else(|| Error::InvalidConfig(format!("atom index {lambda} out of range")))?;
    let conv = theta_convolve(f, atom, theta)?;
    let pooled = conv.map(|z| layer.pooling.apply(layer.nonlinearity.apply(z)));
    theta_dilate(&pooled, layer.pooling_factor, theta)
}

/// `U[q] f = U_k[λ_k] ⋯ U_1[λ_1] f`; the empty path returns `f`.
pub fn u_path(f: &SampledSignal, path: &[usize], layers: &[LayerConfig], theta: &ThetaParam) -> Result<SampledSignal> {
    if path.len() > layers.len() {
        return Err(Error::PathArityMismatch {
            got: path.len(),
            depth: layers.len(),
        });
    }
    let mut out = f.clone();
    for (layer, &lambda) in layers.iter().zip(path) {
        out = u_layer(&out, lambda, layer, theta)?;
    }
    Ok(out)
}

/// Path-indexed signals per level.
pub type PathMap = BTreeMap<Vec<usize>, SampledSignal>;

/// `U[q] f` for every path of length `0..=depth`.
pub fn propagate(f: &SampledSignal, layers: &[LayerConfig], depth: usize, theta: &ThetaParam) -> Result<Vec<PathMap>> {
    if depth > layers.len() {
        return Err(Error::PathArityMismatch {
            got: depth,
            depth: layers.len(),
        });
    }
    let mut levels = vec![PathMap::from([(Vec::new(), f.clone())])];
    for layer in &layers[..depth] {
        let parents: Vec<(&Vec<usize>, &SampledSignal)> = levels.last().expect("level 0").iter().collect();
        let jobs: Vec<(Vec<usize>, &SampledSignal, usize)> = parents
            .iter()
            .flat_map(|(p, s)| {
                (0..layer.bank.len()).map(move |l| {
                    let mut q = (*p).clone();
                    q.push(l);
                    (q, *s, l)
                })
            })
            .collect();
        let children: Vec<Result<(Vec<usize>, SampledSignal)>> = jobs
            .into_par_iter()
            .map(|(q, s, l)| Ok((q, u_layer(s, l, layer, theta)?)))
            .collect();
        let next = children.into_iter().collect::<Result<PathMap>>()?;
        levels.push(next);
    }
    Ok(levels)
}

/// Feature vector `Φ(f)`: level `k` maps each path of length `k` to `(U[q] f) ⋆_θ φ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTree {
    levels: Vec<PathMap>,
    admissible: bool,
}

impl FeatureTree {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &PathMap {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[PathMap] {
        &self.levels
    }

    /// False when the layers used violate the admissibility condition.
    pub fn admissible(&self) -> bool {
        self.admissible
    }

    /// `Σ_q ‖Φ_q‖²` at level `k`.
    pub fn level_energy(&self, k: usize) -> f64 {
        self.levels[k].values().map(|s| l2_norm(s).powi(2)).sum()
    }

    /// Squared triple norm over every level.
    pub fn energy(&self) -> f64 {
        (0..self.levels.len()).map(|k| self.level_energy(k)).sum()
    }
}

/// Features up to `depth`; needs `depth + 1` layers since level `k` uses `φ_k`.
pub fn extract_features(
    f: &SampledSignal,
    layers: &[LayerConfig],
    depth: usize,
    theta: &ThetaParam,
) -> Result<FeatureTree> {
    if layers.len() < depth + 1 {
        return Err(Error::PathArityMismatch {
            got: depth + 1,
            depth: layers.len(),
        });
    }
    let admissible = is_admissible(&layers[..=depth]);
    let paths = propagate(f, layers, depth, theta)?;
    let levels = paths
        .into_iter()
        .enumerate()
        .map(|(k, level)| {
            let phi = &layers[k].output_atom;
            let items: Vec<Result<(Vec<usize>, SampledSignal)>> = level
                .into_par_iter()
                .map(|(q, u)| Ok((q, theta_convolve(&u, phi, theta)?)))
                .collect();
            items.into_iter().collect::<Result<PathMap>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureTree { levels, admissible })
}

/// `Σ_q ‖A_q - B_q‖²` at level `k` (squared triple norm of the difference).
pub fn feature_distance(a: &FeatureTree, b: &FeatureTree, k: usize) -> Result<f64> {
    let (la, lb) = match (a.levels.get(k), b.levels.get(k)) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::KeyMismatch(k)),
    };
    if la.len() != lb.len() || la.keys().zip(lb.keys()).any(|(x, y)| x != y) {
        return Err(Error::KeyMismatch(k));
    }
    la.values()
        .zip(lb.values())
        .map(|(x, y)| Ok(l2_norm(&x.sub(y)?).powi(2)))
        .sum()
}

/// `Σ_{|q| = k} ‖U[q] f‖²` for `k = 0..=depth`.
pub fn energy_profile(f: &SampledSignal, layers: &[LayerConfig], depth: usize, theta: &ThetaParam) -> Result<Vec<f64>> {
    let paths = propagate(f, layers, depth, theta)?;
    Ok(paths
        .iter()
        .map(|level| level.values().map(|s| l2_norm(s).powi(2)).sum())
        .collect())
}

/// Layers whose frame `{φ, g_lo, g_hi}` has `Σ |F_θ g|² = 1`, hence `B = 1`: `F_θ φ` is a
/// Gaussian of peak `0.8` and the remaining energy `1 - |F_θ φ|²` is split by a
/// smooth low/high-pass pair. Widths are fractions of the FrFT grid extent, so
/// `φ` decays at the grid edge whenever `atom_fraction <= 0.4`.
pub fn standard_layers(
    grid: &crate::grid::Grid,
    theta: &ThetaParam,
    count: usize,
    pooling_factor: f64,
    nonlinearity: Nonlinearity,
    pooling: Pooling,
    atom_fraction: f64,
) -> Result<Vec<LayerConfig>> {
    use crate::frames::frft_domain_atom;
    use std::f64::consts::PI;
    let extent = crate::frft::output_grid(grid, theta).extent();
    let width = atom_fraction * extent;
    let phi_hat = move |p: [f64; 2]| 0.8 * (-PI * (p[0] * p[0] + p[1] * p[1]) / (width * width)).exp();
    let angle = move |p: [f64; 2]| {
        let r = (p[0] * p[0] + p[1] * p[1]).sqrt() / (0.25 * extent) - 0.5;
        let s = r.clamp(0.0, 1.0);
        0.5 * PI * s * s * (3.0 - 2.0 * s)
    };
    let rest = move |p: [f64; 2]| (1.0 - phi_hat(p).powi(2)).sqrt();
    let scale = |v: f64| Complex64::new(v, 0.0);
    let atom = frft_domain_atom(grid, theta, |p| scale(phi_hat(p)));
    let lo = frft_domain_atom(grid, theta, |p| scale(rest(p) * angle(p).cos()));
    let hi = frft_domain_atom(grid, theta, |p| scale(rest(p) * angle(p).sin()));
    let bank = AtomBank::new(vec![lo, hi], *theta)?;
    (0..count)
        .map(|_| LayerConfig::new(bank.clone(), atom.clone(), nonlinearity, pooling, pooling_factor))
        .collect()
}
