//! Fractional multi-tiles and the optimal FrFT-bandlimited subspace.
//!
//! A band set `Ω ⊂ C_N` is stored lattice-resolved: for every ω cell of the
//! fundamental domain it records which offsets `k` (`‖k‖_∞ ≤ N`) place
//! `ω + k sin θ` inside `Ω`. `Ω` is an ℓ-multi-tile exactly when every cell
//! holds `ℓ` offsets.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::approx::fiber::FiberField;
use crate::approx::sis::{synthesize_generator, SisModel};
use crate::error::{Error, Result};
use crate::frft::{frft, inverse_frft};
use crate::grid::{inner_product, SampledSignal, ThetaParam};
use crate::ops::{theta_translate, ShiftVector};

/// Offsets with `‖k‖_∞ ≤ bound`, lexicographic; trailing component 0 in 1D.
pub fn lattice_offsets(n_dims: usize, bound: usize) -> Vec<[i64; 2]> {
    let b = bound as i64;
    match n_dims {
        1 => (-b..=b).map(|k| [k, 0]).collect(),
        _ => (-b..=b).flat_map(|x| (-b..=b).map(move |y| [x, y])).collect(),
    }
}

/// Lattice-resolved band set.
#[derive(Debug, Clone, PartialEq)]
pub struct TileSet {
    theta: ThetaParam,
    n_dims: usize,
    omega_samples: usize,
    bound: usize,
    members: Vec<Vec<bool>>,
}

impl TileSet {
    pub fn empty(theta: ThetaParam, n_dims: usize, omega_samples: usize, bound: usize) -> Result<Self> {
        if !(1..=2).contains(&n_dims) || omega_samples == 0 {
            return Err(Error::InvalidConfig(
                "tile needs 1 or 2 dims and at least one omega cell".into(),
            ));
        }
        let cells = omega_samples.pow(n_dims as u32);
        let len = (2 * bound + 1).pow(n_dims as u32);
        Ok(Self {
            theta,
            n_dims,
            omega_samples,
            bound,
            members: vec![vec![false; len]; cells],
        })
    }

    /// Builds a tile from per-cell offset lists; offsets beyond the bound are rejected.
    pub fn from_offsets(
        theta: ThetaParam,
        n_dims: usize,
        omega_samples: usize,
        bound: usize,
        cells: &[Vec<[i64; 2]>],
    ) -> Result<Self> {
        let mut tile = Self::empty(theta, n_dims, omega_samples, bound)?;
        if cells.len() != tile.members.len() {
            return Err(Error::InvalidConfig(format!(
                "expected {} omega cells, got {}",
                tile.members.len(),
                cells.len()
            )));
        }
        for (w, ks) in cells.iter().enumerate() {
            for &k in ks {
                let idx = tile
                    .offset_index(k)
                    .ok_or_else(|| Error::InvalidConfig(format!("offset {k:?} outside the bound {bound}")))?;
                tile.members[w][idx] = true;
            }
        }
        Ok(tile)
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
    pub fn bound(&self) -> usize {
        self.bound
    }
    pub fn num_cells(&self) -> usize {
        self.members.len()
    }

    pub fn offsets(&self) -> Vec<[i64; 2]> {
        lattice_offsets(self.n_dims, self.bound)
    }

    pub fn offset_index(&self, k: [i64; 2]) -> Option<usize> {
        let b = self.bound as i64;
        let side = 2 * b + 1;
        let local = |c: i64| {
            if (-b..=b).contains(&c) {
                Some(c + b)
            } else {
                None
            }
        };
        let idx = match self.n_dims {
            1 => (k[1] == 0).then_some(local(k[0])?)?,
            _ => local(k[0])? * side + local(k[1])?,
        };
        Some(idx as usize)
    }

    pub fn contains(&self, cell: usize, k: [i64; 2]) -> bool {
        self.offset_index(k).is_some_and(|i| self.members[cell][i])
    }

    pub fn set(&mut self, cell: usize, k: [i64; 2], present: bool) -> Result<()> {
        let i = self
            .offset_index(k)
            .ok_or_else(|| Error::InvalidConfig(format!("offset {k:?} outside the bound {}", self.bound)))?;
        self.members[cell][i] = present;
        Ok(())
    }

    /// Offsets present in `cell`, ascending.
    pub fn cell_offsets(&self, cell: usize) -> Vec<[i64; 2]> {
        self.offsets()
            .into_iter()
            .zip(&self.members[cell])
            .filter_map(|(k, &m)| m.then_some(k))
            .collect()
    }

    pub fn count(&self, cell: usize) -> usize {
        self.members[cell].iter().filter(|&&m| m).count()
    }

    fn same_layout(&self, other: &TileSet) -> bool {
        self.n_dims == other.n_dims
            && self.omega_samples == other.omega_samples
            && self.bound == other.bound
            && self.theta == other.theta
    }

    /// True when no offset is present in both tiles.
    pub fn is_disjoint(&self, other: &TileSet) -> bool {
        self.same_layout(other)
            && self
                .members
                .iter()
                .zip(&other.members)
                .all(|(a, b)| a.iter().zip(b).all(|(&x, &y)| !(x && y)))
    }

    /// Union of two tiles on the same layout.
    pub fn union(&self, other: &TileSet) -> Result<TileSet> {
        if !self.same_layout(other) {
            return Err(Error::GridMismatch);
        }
        let members = self
            .members
            .iter()
            .zip(&other.members)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| x || y).collect())
            .collect();
        Ok(TileSet {
            members,
            ..self.clone()
        })
    }

    /// Cell and offset containing the FrFT-domain point `ω_out` along one axis.
    fn locate_axis(&self, omega_out: f64) -> (usize, i64) {
        // ω_out csc θ = sgn·u + k with u ∈ [0, 1).
        let w = self.omega_samples as f64;
        let mut x = omega_out * self.theta.csc() * w;
        // Snap round-off so cell edges land in the cell they open.
        if (x - x.round()).abs() < 1e-9 {
            x = x.round();
        }
        let (k, cell) = if self.theta.sin() > 0.0 {
            let k = (x / w).floor();
            (k, (x - k * w).floor())
        } else {
            let k = (x / w).ceil();
            (k, (k * w - x).floor())
        };
        ((cell.max(0.0) as usize).min(self.omega_samples - 1), k as i64)
    }
}

/// Every cell holds exactly `ell` offsets.
pub fn is_multitile(tile: &TileSet, ell: usize) -> bool {
    (0..tile.num_cells()).all(|c| tile.count(c) == ell)
}

/// Splits an ℓ-multi-tile into ℓ disjoint 1-multi-tiles: in each cell the
/// `s`-th offset in ascending order goes to part `s`.
pub fn partition_multitile(tile: &TileSet, ell: usize) -> Result<Vec<TileSet>> {
    if !is_multitile(tile, ell) {
        return Err(Error::NotMultiTile(ell));
    }
    let mut parts = vec![TileSet::empty(tile.theta, tile.n_dims, tile.omega_samples, tile.bound)?; ell];
    for cell in 0..tile.num_cells() {
        for (s, k) in tile.cell_offsets(cell).into_iter().enumerate() {
            parts[s].set(cell, k, true)?;
        }
    }
    Ok(parts)
}

/// Optimal ℓ-multi-tile for a data set together with its per-cell selection.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiTileModel {
    pub tile: TileSet,
    pub ell: usize,
    /// Selected offsets per cell, ascending.
    pub selections: Vec<Vec<[i64; 2]>>,
    /// Offset energies `H_k(ω) = Σ_j |τf_j(ω)_k|²` per cell, in lattice order.
    pub energies: Vec<Vec<f64>>,
}

/// Picks, per ω cell, the `ell` offsets with largest `Σ_j |τf_j(ω)_k|²`;
/// ties go to the lexicographically smaller offset.
pub fn optimal_multitile(fibers: &[FiberField], ell: usize, bound: usize) -> Result<MultiTileModel> {
    let first = fibers
        .first()
        .ok_or_else(|| Error::InvalidConfig("multi-tile fit needs at least one signal".into()))?;
    let fg = *first.grid();
    for f in fibers {
        if f.grid() != &fg {
            return Err(Error::GridMismatch);
        }
    }
    let offsets = lattice_offsets(fg.n_dims(), bound);
    if ell > offsets.len() {
        return Err(Error::BadRank {
            ell,
            available: offsets.len(),
        });
    }
    if fg.window().bound() < bound || !fg.window().contains(-(bound as i64)) {
        return Err(Error::WindowTooSmall {
            window: fg.window().bound(),
            needed: bound,
        });
    }
    let positions: Vec<usize> = offsets
        .iter()
        .map(|&k| fg.offset_index(k).expect("inside window"))
        .collect();
    let per_cell: Vec<(Vec<f64>, Vec<[i64; 2]>)> = (0..fg.num_omegas())
        .into_par_iter()
        .map(|w| {
            let energies: Vec<f64> = positions
                .iter()
                .map(|&p| fibers.iter().map(|f| f.fiber(w)[p].norm_sqr()).sum())
                .collect();
            let mut order: Vec<usize> = (0..offsets.len()).collect();
            // Stable sort keeps lexicographic order among equal energies.
            order.sort_by(|&a, &b| {
                energies[b]
                    .partial_cmp(&energies[a])
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            let mut chosen: Vec<usize> = order[..ell].to_vec();
            chosen.sort_unstable();
            (energies, chosen.into_iter().map(|i| offsets[i]).collect())
        })
        .collect();
    let (energies, selections): (Vec<_>, Vec<_>) = per_cell.into_iter().unzip();
    let tile = TileSet::from_offsets(*fg.theta(), fg.n_dims(), fg.omega_samples(), bound, &selections)?;
    Ok(MultiTileModel {
        tile,
        ell,
        selections,
        energies,
    })
}

/// `P_V f = F_{-θ}(χ_Ω · F_θ f)` for the band set of `tile`.
pub fn bandlimited_project(f: &SampledSignal, tile: &TileSet) -> Result<SampledSignal> {
    if f.grid().n_dims() != tile.n_dims {
        return Err(Error::GridMismatch);
    }
    let spectrum = frft(f, &tile.theta);
    let og = *spectrum.grid();
    let masked: Vec<Complex64> = spectrum
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let p = og.point(i);
            let (c0, k0) = tile.locate_axis(p[0]);
            let keep = if tile.n_dims == 1 {
                tile.contains(c0, [k0, 0])
            } else {
                let (c1, k1) = tile.locate_axis(p[1]);
                tile.contains(c0 * tile.omega_samples + c1, [k0, k1])
            };
            if keep {
                v
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let masked = SampledSignal::new(og, masked)?;
    Ok(inverse_frft(&masked, &tile.theta))
}

/// `Σ_j ‖f_j - P f_j‖²`.
pub fn projection_error(data: &[SampledSignal], tile: &TileSet) -> Result<f64> {
    data.iter()
        .map(|f| {
            let p = bandlimited_project(f, tile)?;
            Ok(crate::grid::l2_norm(&f.sub(&p)?).powi(2))
        })
        .sum()
}

/// `Σ_i Σ_{‖k‖_∞ ≤ n} ⟨f, T_k^θ φ_i⟩ T_k^θ φ_i` over integer `k`.
pub fn partial_projection_with(
    f: &SampledSignal,
    generators: &[SampledSignal],
    theta: &ThetaParam,
    n: usize,
) -> Result<SampledSignal> {
    let grid = *f.grid();
    let mut out = SampledSignal::zeros(grid);
    for phi in generators {
        phi.grid().ensure_matches(&grid)?;
        for k in lattice_offsets(grid.n_dims(), n) {
            let comps: Vec<f64> = k[..grid.n_dims()].iter().map(|&c| c as f64).collect();
            let shift = ShiftVector::new(&comps)?;
            let moved = theta_translate(phi, &shift, theta)?;
            let c = inner_product(f, &moved)?;
            out = out.axpy(c, &moved)?;
        }
    }
    Ok(out)
}

/// [`partial_projection_with`] using the generators synthesized from `model`.
pub fn partial_projection(f: &SampledSignal, model: &SisModel, n: usize) -> Result<SampledSignal> {
    let generators: Vec<SampledSignal> = (0..model.ell())
        .map(|i| synthesize_generator(model, i, f.grid()))
        .collect::<Result<_>>()?;
    partial_projection_with(f, &generators, model.grid().theta(), n)
}
