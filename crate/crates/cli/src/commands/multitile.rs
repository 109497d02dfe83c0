use std::fmt::Write as _;

use frftkit::approx::{fiber_map, FiberGrid, OffsetWindow};
use frftkit::multitile::{bandlimited_project, is_multitile, optimal_multitile, partition_multitile, TileSet};
use frftkit::{l2_norm, ThetaParam};
use serde::Serialize;

use crate::args::MultitileCommand;
use crate::config::{TileDoc, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::io::{emit, read_signal};

pub fn run(c: MultitileCommand) -> CliResult<()> {
    match c {
        MultitileCommand::Fit {
            data,
            ell,
            bound,
            angle,
            omegas,
            output,
            errors,
        } => {
            let theta = ThetaParam::new(angle.radians()?)?;
            let signals = data.iter().map(|p| read_signal(p)).collect::<CliResult<Vec<_>>>()?;
            let grid = *signals[0].grid();
            if signals.iter().any(|s| !s.grid().matches(&grid)) {
                return Err(CliError::Config("data signals live on different grids".into()));
            }
            let fg = FiberGrid::new(theta, grid.n_dims(), omegas, OffsetWindow::Symmetric(bound.max(1)))?;
            let fibers = signals
                .iter()
                .map(|s| fiber_map(s, &fg))
                .collect::<frftkit::Result<Vec<_>>>()?;
            let model = optimal_multitile(&fibers, ell, bound)?;
            let per_signal = signals
                .iter()
                .map(|f| Ok(l2_norm(&f.sub(&bandlimited_project(f, &model.tile)?)?).powi(2)))
                .collect::<frftkit::Result<Vec<f64>>>()?;
            if let Some(path) = errors {
                let mut csv = String::from("index,error\n");
                for (j, e) in per_signal.iter().enumerate() {
                    writeln!(csv, "{j},{e:e}").expect("writing to a String");
                }
                emit(Some(&path), &csv)?;
            }
            let n = grid.n_dims();
            let doc = TileDoc {
                schema: SCHEMA_VERSION,
                theta: theta.theta(),
                n_dims: n,
                omega_samples: omegas,
                bound,
                ell,
                cells: model
                    .selections
                    .iter()
                    .map(|ks| ks.iter().map(|k| k[..n].to_vec()).collect())
                    .collect(),
                total_error: Some(per_signal.iter().sum()),
            };
            emit(
                output.as_deref(),
                &(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"),
            )
        }
        MultitileCommand::Check { tile, ell, output } => {
            let doc = TileDoc::load(&tile)?;
            let theta = ThetaParam::new(doc.theta)?;
            let set = TileSet::from_offsets(theta, doc.n_dims, doc.omega_samples, doc.bound, &doc.offsets()?)?;
            if !is_multitile(&set, ell) {
                let counts: Vec<usize> = (0..set.num_cells()).map(|c| set.count(c)).collect();
                return Err(CliError::Config(format!(
                    "not a {ell}-multi-tile; offsets per cell: {counts:?}"
                )));
            }
            let parts = partition_multitile(&set, ell)?;
            let report = CheckReport {
                schema: SCHEMA_VERSION,
                ell,
                multitile: true,
                cells: set.num_cells(),
                parts: parts
                    .iter()
                    .map(|p| {
                        (0..p.num_cells())
                            .flat_map(|c| p.cell_offsets(c))
                            .map(|k| k[..doc.n_dims].to_vec())
                            .collect()
                    })
                    .collect(),
            };
            emit(
                output.as_deref(),
                &(serde_json::to_string_pretty(&report).expect("serializable") + "\n"),
            )
        }
    }
}

#[derive(Serialize)]
struct CheckReport {
    schema: u32,
    ell: usize,
    multitile: bool,
    cells: usize,
    /// Offsets of each 1-multi-tile part, one per ω cell in cell order.
    parts: Vec<Vec<Vec<i64>>>,
}
