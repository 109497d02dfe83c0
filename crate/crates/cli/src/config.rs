//! Versioned JSON documents: scatter configurations and multi-tiles.
//!
//! A scatter configuration looks like
//!
//! ```json
//! {
//!   "schema": 1,
//!   "theta_frac": [1, 3],
//!   "depth": 2,
//!   "layers": [
//!     { "atoms": ["lo.csv", "hi.csv"], "output_atom": "phi.csv",
//!       "nonlinearity": { "kind": "shrink", "threshold": 0.01 },
//!       "pooling": "identity", "pooling_factor": 2.0 },
//!     { "standard": { "atom_fraction": 0.2 },
//!       "nonlinearity": { "kind": "identity" },
//!       "pooling": "identity", "pooling_factor": 2.0 }
//!   ]
//! }
//! ```
//!
//! Atom paths are relative to the configuration file. A `standard` layer uses
//! the built-in bank whose frame spectrum is identically 1.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use frftkit::frames::AtomBank;
use frftkit::scatter::{standard_layers, LayerConfig, Nonlinearity, Pooling};
use frftkit::{Grid, ThetaParam};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io::{read_json, read_signal};

pub const SCHEMA_VERSION: u32 = 1;

fn check_schema(schema: u32) -> CliResult<()> {
    if schema != SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "unsupported schema {schema}, expected {SCHEMA_VERSION}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterConfig {
    pub schema: u32,
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub theta_frac: Option<[i64; 2]>,
    pub depth: usize,
    pub layers: Vec<LayerSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSpec {
    #[serde(default)]
    pub atoms: Option<Vec<PathBuf>>,
    #[serde(default)]
    pub output_atom: Option<PathBuf>,
    #[serde(default)]
    pub standard: Option<StandardSpec>,
    pub nonlinearity: NonlinearitySpec,
    pub pooling: PoolingSpec,
    pub pooling_factor: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StandardSpec {
    pub atom_fraction: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NonlinearitySpec {
    Identity,
    Modulus,
    Shrink { threshold: f64 },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolingSpec {
    Identity,
    Modulus,
}

impl From<NonlinearitySpec> for Nonlinearity {
    fn from(s: NonlinearitySpec) -> Self {
        match s {
            NonlinearitySpec::Identity => Nonlinearity::Identity,
            NonlinearitySpec::Modulus => Nonlinearity::Modulus,
            NonlinearitySpec::Shrink { threshold } => Nonlinearity::Shrink(threshold),
        }
    }
}

impl From<PoolingSpec> for Pooling {
    fn from(s: PoolingSpec) -> Self {
        match s {
            PoolingSpec::Identity => Pooling::Identity,
            PoolingSpec::Modulus => Pooling::Modulus,
        }
    }
}

/// Configuration resolved against a signal grid.
pub struct ScatterSetup {
    pub theta: ThetaParam,
    pub depth: usize,
    pub layers: Vec<LayerConfig>,
}

impl ScatterConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let cfg: ScatterConfig = read_json(path)?;
        check_schema(cfg.schema)?;
        Ok(cfg)
    }

    pub fn theta(&self) -> CliResult<ThetaParam> {
        let value = match (self.theta, self.theta_frac) {
            (Some(_), Some(_)) => return Err(CliError::Config("give either theta or theta_frac, not both".into())),
            (Some(t), None) => t,
            (None, Some([_, 0])) => return Err(CliError::Config("theta_frac denominator is zero".into())),
            (None, Some([p, q])) => p as f64 * PI / q as f64,
            (None, None) => return Err(CliError::Config("missing theta".into())),
        };
        Ok(ThetaParam::new(value)?)
    }

    /// Builds layer configurations on `grid`; relative atom paths resolve against `base`.
    pub fn resolve(&self, grid: &Grid, base: &Path) -> CliResult<ScatterSetup> {
        let theta = self.theta()?;
        if self.layers.len() < self.depth + 1 {
            return Err(CliError::Config(format!(
                "depth {} needs {} layers, found {}",
                self.depth,
                self.depth + 1,
                self.layers.len()
            )));
        }
        let layers = self
            .layers
            .iter()
            .enumerate()
            .map(|(i, spec)| spec.build(grid, &theta, base).map_err(|e| annotate(e, i)))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(ScatterSetup {
            theta,
            depth: self.depth,
            layers,
        })
    }
}

fn annotate(e: CliError, layer: usize) -> CliError {
    match e {
        CliError::Config(msg) => CliError::Config(format!("layer {}: {msg}", layer + 1)),
        other => other,
    }
}

impl LayerSpec {
    fn build(&self, grid: &Grid, theta: &ThetaParam, base: &Path) -> CliResult<LayerConfig> {
        let nonlin = Nonlinearity::from(self.nonlinearity);
        let pool = Pooling::from(self.pooling);
        match (&self.atoms, &self.output_atom, &self.standard) {
            (None, None, Some(std)) => {
                let mut layers = standard_layers(grid, theta, 1, self.pooling_factor, nonlin, pool, std.atom_fraction)?;
                Ok(layers.remove(0))
            }
            (Some(atoms), Some(out), None) => {
                let load = |p: &PathBuf| {
                    let s = read_signal(&base.join(p))?;
                    if !s.grid().matches(grid) {
                        return Err(CliError::Config(format!("{} is not on the input grid", p.display())));
                    }
                    Ok(s)
                };
                let atoms = atoms.iter().map(load).collect::<CliResult<Vec<_>>>()?;
                let bank = AtomBank::new(atoms, *theta)?;
                Ok(LayerConfig::new(bank, load(out)?, nonlin, pool, self.pooling_factor)?)
            }
            _ => Err(CliError::Config(
                "a layer needs either atoms with output_atom, or standard".into(),
            )),
        }
    }
}

/// Multi-tile document: per ω cell, the selected lattice offsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileDoc {
    pub schema: u32,
    pub theta: f64,
    pub n_dims: usize,
    pub omega_samples: usize,
    pub bound: usize,
    pub ell: usize,
    pub cells: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_error: Option<f64>,
}

impl TileDoc {
    pub fn load(path: &Path) -> CliResult<Self> {
        let doc: TileDoc = read_json(path)?;
        check_schema(doc.schema)?;
        Ok(doc)
    }

    pub fn offsets(&self) -> CliResult<Vec<Vec<[i64; 2]>>> {
        self.cells
            .iter()
            .map(|cell| {
                cell.iter()
                    .map(|k| match (self.n_dims, k.as_slice()) {
                        (1, [a]) => Ok([*a, 0]),
                        (2, [a, b]) => Ok([*a, *b]),
                        _ => Err(CliError::Config(format!(
                            "offset {k:?} does not have {} components",
                            self.n_dims
                        ))),
                    })
                    .collect()
            })
            .collect()
    }
}
