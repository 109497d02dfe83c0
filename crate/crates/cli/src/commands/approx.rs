use std::fmt::Write as _;

use frftkit::approx::{
    approximation_error, fiber_map, fit_sis, sinc_error_table, synthesize_generator, FiberGrid, FiberNormalization,
    OffsetWindow,
};
use frftkit::{SampledSignal, ThetaParam};
use serde::Serialize;

use crate::args::{ApproxCommand, Family, FiberArgs};
use crate::config::SCHEMA_VERSION;
use crate::error::{CliError, CliResult};
use crate::io::{create_dir, emit, format_signal, read_signal, write_atomic};

pub fn run(c: ApproxCommand) -> CliResult<()> {
    match c {
        ApproxCommand::Fit {
            data,
            ell,
            angle,
            fibers,
            output,
            generators_dir,
        } => {
            let theta = ThetaParam::new(angle.radians()?)?;
            let signals = data.iter().map(|p| read_signal(p)).collect::<CliResult<Vec<_>>>()?;
            let (summary, generators) = fit(&signals, ell, &theta, &fibers, generators_dir.is_some())?;
            if let Some(dir) = generators_dir {
                create_dir(&dir)?;
                for (i, g) in generators.iter().enumerate() {
                    write_atomic(&dir.join(format!("generator_{}.csv", i + 1)), &format_signal(g))?;
                }
            }
            emit(
                output.as_deref(),
                &(serde_json::to_string_pretty(&summary).expect("serializable") + "\n"),
            )
        }
        ApproxCommand::Table {
            family,
            m,
            angle,
            output,
        } => {
            let theta = ThetaParam::new(angle.radians()?)?;
            emit(output.as_deref(), &approx_table(family, m, &theta)?)
        }
    }
}

/// CSV rows `ell,error` for `ℓ = 1 .. m-1` on the sinc family.
pub fn approx_table(family: Family, m: usize, theta: &ThetaParam) -> CliResult<String> {
    let n_dims = match family {
        Family::Sinc1d => 1,
        Family::Sinc2d => 2,
    };
    let mut csv = String::from("ell,error\n");
    for (ell, err) in sinc_error_table(n_dims, m, theta)? {
        writeln!(csv, "{ell},{err:e}").expect("writing to a String");
    }
    Ok(csv)
}

#[derive(Serialize)]
struct FitSummary {
    schema: u32,
    theta: f64,
    n_dims: usize,
    m: usize,
    ell: usize,
    omega_samples: usize,
    error: f64,
    /// `λ_1(ω) ≥ … ≥ λ_m(ω)` per ω cell.
    eigenvalues: Vec<Vec<f64>>,
    /// Per ω cell and generator, `[re, im]` of the coefficients on each data fiber.
    mixing: Vec<Vec<Vec<[f64; 2]>>>,
}

fn fit(
    signals: &[SampledSignal],
    ell: usize,
    theta: &ThetaParam,
    args: &FiberArgs,
    synthesize: bool,
) -> CliResult<(FitSummary, Vec<SampledSignal>)> {
    let grid = *signals[0].grid();
    if signals.iter().any(|s| !s.grid().matches(&grid)) {
        return Err(CliError::Config("data signals live on different grids".into()));
    }
    let window = if args.nonnegative {
        OffsetWindow::NonNegative(args.window)
    } else {
        OffsetWindow::Symmetric(args.window)
    };
    let mut fg = FiberGrid::new(*theta, grid.n_dims(), args.omegas, window)?;
    if args.midpoints {
        fg = fg.with_midpoints();
    }
    if args.isometric {
        fg = fg.with_normalization(FiberNormalization::Isometric);
    }
    let fibers = signals
        .iter()
        .map(|s| fiber_map(s, &fg))
        .collect::<frftkit::Result<Vec<_>>>()?;
    let model = fit_sis(&fibers, ell)?;
    let cells = fg.num_omegas();
    let summary = FitSummary {
        schema: SCHEMA_VERSION,
        theta: theta.theta(),
        n_dims: grid.n_dims(),
        m: signals.len(),
        ell,
        omega_samples: args.omegas,
        error: approximation_error(&model),
        eigenvalues: (0..cells).map(|w| model.eigenvalues(w).to_vec()).collect(),
        mixing: (0..cells)
            .map(|w| {
                (0..ell)
                    .map(|i| model.mixing(w, i).iter().map(|c| [c.re, c.im]).collect())
                    .collect()
            })
            .collect(),
    };
    let generators = if synthesize {
        (0..ell)
            .map(|i| synthesize_generator(&model, i, &grid))
            .collect::<frftkit::Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok((summary, generators))
}
