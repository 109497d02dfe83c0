use std::fmt::Write as _;

use frftkit::frames::{check_admissibility, frame_bounds, AtomBank};
use frftkit::frft::{chirp_modulate, frft_at, frft_direct_oracle_at, inverse_frft_at, ChirpSign};
use frftkit::ops::{theta_convolve, theta_dilate_report, theta_modulate, theta_translate};
use frftkit::ThetaParam;
use serde::Serialize;

use super::parse_shift;
use crate::args::{ChirpDirection, FramesArgs, FrftArgs, OpsCommand, SignalIo};
use crate::config::SCHEMA_VERSION;
use crate::error::{CliError, CliResult};
use crate::io::{emit, format_signal, read_signal};

pub fn frft(a: FrftArgs) -> CliResult<()> {
    let f = read_signal(&a.input)?;
    let theta = a.angle.radians()?;
    let out = match (a.inverse, a.oracle) {
        (false, false) => frft_at(&f, theta)?,
        (true, false) => inverse_frft_at(&f, theta)?,
        (false, true) => frft_direct_oracle_at(&f, theta)?,
        // F_{-θ} inverts F_θ and maps the FrFT grid back onto the input grid.
        (true, true) => frft_direct_oracle_at(&f, -theta)?,
    };
    emit(a.output.as_deref(), &format_signal(&out))
}

pub fn ops(c: OpsCommand) -> CliResult<()> {
    let (io, result) = match c {
        OpsCommand::Translate { io, shift } => {
            let (f, theta) = load(&io)?;
            let s = parse_shift(&shift, f.grid().n_dims())?;
            let r = theta_translate(&f, &s, &theta)?;
            (io, r)
        }
        OpsCommand::Modulate { io, shift } => {
            let (f, theta) = load(&io)?;
            let s = parse_shift(&shift, f.grid().n_dims())?;
            let r = theta_modulate(&f, &s, &theta)?;
            (io, r)
        }
        OpsCommand::Convolve { io, with } => {
            let (f, theta) = load(&io)?;
            let g = read_signal(&with)?;
            let r = theta_convolve(&f, &g, &theta)?;
            (io, r)
        }
        OpsCommand::Dilate { io, scale } => {
            let (f, theta) = load(&io)?;
            let report = theta_dilate_report(&f, scale, &theta)?;
            if report.alias_risk() {
                eprintln!(
                    "warning: dilation lost {:e} of the signal energy to aliasing",
                    report.alias_loss
                );
            }
            (io, report.signal)
        }
        OpsCommand::Chirp { io, direction } => {
            let (f, theta) = load(&io)?;
            let sign = match direction {
                ChirpDirection::Forward => ChirpSign::Forward,
                ChirpDirection::Backward => ChirpSign::Backward,
            };
            let r = chirp_modulate(&f, &theta, sign);
            (io, r)
        }
    };
    emit(io.output.as_deref(), &format_signal(&result))
}

fn load(io: &SignalIo) -> CliResult<(frftkit::SampledSignal, ThetaParam)> {
    let f = read_signal(&io.input)?;
    let theta = ThetaParam::new(io.angle.radians()?)?;
    Ok((f, theta))
}

#[derive(Serialize)]
struct FramesReport {
    schema: u32,
    theta: f64,
    atoms: usize,
    lower: f64,
    upper: f64,
    energy_bound: f64,
    /// Admissible as a layer with 1-Lipschitz nonlinearity and pooling.
    admissible: bool,
}

pub fn frames(a: FramesArgs) -> CliResult<()> {
    let theta = ThetaParam::new(a.angle.radians()?)?;
    let atoms = a.bank.iter().map(|p| read_signal(p)).collect::<CliResult<Vec<_>>>()?;
    let bank = AtomBank::new(atoms, theta).map_err(|e| match e {
        frftkit::Error::GridMismatch => CliError::Config("bank atoms live on different grids".into()),
        other => other.into(),
    })?;
    let b = frame_bounds(&bank);
    let report = FramesReport {
        schema: SCHEMA_VERSION,
        theta: theta.theta(),
        atoms: bank.len(),
        lower: b.lower,
        upper: b.upper,
        energy_bound: b.energy_bound(),
        admissible: check_admissibility(&[(b.energy_bound(), 1.0, 1.0)]),
    };
    if let Some(path) = &a.spectrum {
        let g = b.omega_grid;
        let mut csv = String::from(if g.n_dims() == 1 {
            "omega,value\n"
        } else {
            "omega_x,omega_y,value\n"
        });
        for (i, v) in b.spectrum.iter().enumerate() {
            let p = g.point(i);
            if g.n_dims() == 1 {
                writeln!(csv, "{:e},{v:e}", p[0])
            } else {
                writeln!(csv, "{:e},{:e},{v:e}", p[0], p[1])
            }
            .expect("writing to a String");
        }
        emit(Some(path), &csv)?;
    }
    emit(
        a.output.as_deref(),
        &(serde_json::to_string_pretty(&report).expect("serializable") + "\n"),
    )
}
