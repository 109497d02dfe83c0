mod approx;
mod multitile;
mod plot;
mod scatter;
mod transform;

use frftkit::ops::ShiftVector;

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};

pub use approx::approx_table;

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Frft(a) => transform::frft(a),
        Command::Ops(c) => transform::ops(c),
        Command::Frames(a) => transform::frames(a),
        Command::Scatter(c) => scatter::run(c),
        Command::Approx(c) => approx::run(c),
        Command::Multitile(c) => multitile::run(c),
        Command::Plotdata(a) => plot::run(a),
    }
}

/// Parses `x` or `x,y` into a shift with `n_dims` components.
pub(crate) fn parse_shift(text: &str, n_dims: usize) -> CliResult<ShiftVector> {
    let comps = text
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| CliError::parse("--shift", 0, format!("not a number: {c:?}")))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    if comps.len() != n_dims {
        return Err(CliError::Config(format!(
            "shift {text:?} has {} components, signal has {n_dims}",
            comps.len()
        )));
    }
    if comps.iter().any(|c| !c.is_finite()) {
        return Err(CliError::parse("--shift", 0, "shift must be finite"));
    }
    Ok(ShiftVector::new(&comps)?)
}
