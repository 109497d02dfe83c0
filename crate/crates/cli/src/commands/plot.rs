use frftkit::approx::{analytic_sinc_fibers, fit_sis, sinc_family_member, FiberGrid, OffsetWindow};
use frftkit::frft::{chirp_modulate, ChirpSign};
use frftkit::multitile::partial_projection;
use frftkit::ops::theta_translate;
use frftkit::{Grid, SampledSignal, ThetaParam};
use num_complex::Complex64;

use super::parse_shift;
use crate::args::{Demo, PlotArgs};
use crate::error::{CliError, CliResult};
use crate::io::{emit, format_plot, read_signal};

pub fn run(a: PlotArgs) -> CliResult<()> {
    let signal = match (&a.input, a.demo) {
        (Some(path), _) => read_signal(path)?,
        (None, Some(demo)) => demo_signal(demo, &a)?,
        (None, None) => unreachable!("clap requires --input or --demo"),
    };
    emit(a.output.as_deref(), &format_plot(&signal))
}

fn demo_signal(demo: Demo, a: &PlotArgs) -> CliResult<SampledSignal> {
    let theta = ThetaParam::new(
        a.radians()?
            .ok_or_else(|| CliError::Config("demos need --theta".into()))?,
    )?;
    let grid = Grid::new(a.dims, a.samples, a.extent)?;
    match demo {
        Demo::BoxTranslate => {
            let unit_box = SampledSignal::from_fn(grid, |p| {
                let inside = p[..grid.n_dims()].iter().all(|x| x.abs() <= 0.5);
                Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
            });
            let s = parse_shift(&a.shift, grid.n_dims())?;
            Ok(theta_translate(&unit_box, &s, &theta)?)
        }
        Demo::GaussianChirp => {
            let g = SampledSignal::from_fn(grid, |[x, y]| Complex64::new((-(x * x + y * y)).exp(), 0.0));
            Ok(chirp_modulate(&g, &theta, ChirpSign::Forward))
        }
        Demo::PartialProjection => {
            // Three generators fitted to the sinc family f_1..f_4, applied to f_1.
            let omegas = (2.0 * a.extent).round();
            if a.dims != 1 || (omegas - 2.0 * a.extent).abs() > 1e-12 {
                return Err(CliError::Config(
                    "partial projection demo needs --dims 1 and an extent in ℤ/2".into(),
                ));
            }
            let fg = FiberGrid::new(theta, 1, omegas as usize, OffsetWindow::Symmetric(4))?;
            let fibers = (1..=4)
                .map(|j| analytic_sinc_fibers(j, &fg))
                .collect::<frftkit::Result<Vec<_>>>()?;
            let model = fit_sis(&fibers, 3)?;
            let f1 = sinc_family_member(1, &grid, &theta);
            Ok(partial_projection(&f1, &model, a.n)?)
        }
    }
}
