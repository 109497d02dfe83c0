use std::fmt::Write as _;
use std::path::Path;

use frftkit::l2_norm;
use frftkit::scatter::{
    covariance_bound, covariance_deviation, extract_features, invariance_bound, invariance_deviation,
};

use super::parse_shift;
use crate::args::ScatterCommand;
use crate::config::ScatterConfig;
use crate::error::{CliError, CliResult};
use crate::io::{create_dir, emit, format_signal, read_signal, write_atomic};

pub fn run(c: ScatterCommand) -> CliResult<()> {
    match c {
        ScatterCommand::Extract {
            config,
            input,
            output_dir,
        } => extract(&config, &input, &output_dir),
        ScatterCommand::Invariance {
            config,
            input,
            shift,
            output,
        } => invariance(&config, &input, &shift, output.as_deref()),
    }
}

fn base_dir(config: &Path) -> &Path {
    config.parent().unwrap_or(Path::new("."))
}

fn extract(config: &Path, input: &Path, out_dir: &Path) -> CliResult<()> {
    let f = read_signal(input)?;
    let setup = ScatterConfig::load(config)?.resolve(f.grid(), base_dir(config))?;
    let tree = extract_features(&f, &setup.layers, setup.depth, &setup.theta)?;
    if !tree.admissible() {
        eprintln!("warning: the layer sequence is not admissible; feature energy is not bounded by the input");
    }
    create_dir(out_dir)?;
    let mut index = format!("# admissible: {}\nlevel,path,energy,file\n", tree.admissible());
    for (k, level) in tree.levels().iter().enumerate() {
        for (path, feature) in level {
            let key = path.iter().map(usize::to_string).collect::<Vec<_>>().join("-");
            let file = format!("level{k}_{}.csv", if key.is_empty() { "root" } else { &key });
            write_atomic(&out_dir.join(&file), &format_signal(feature))?;
            writeln!(index, "{k},{key},{:e},{file}", l2_norm(feature).powi(2)).expect("writing to a String");
        }
    }
    write_atomic(&out_dir.join("index.csv"), &index)
}

fn invariance(config: &Path, input: &Path, shifts: &[String], output: Option<&Path>) -> CliResult<()> {
    let f = read_signal(input)?;
    let setup = ScatterConfig::load(config)?.resolve(f.grid(), base_dir(config))?;
    let nf = l2_norm(&f);
    let theta = setup.theta;
    if setup.depth == 0 {
        return Err(CliError::Config("invariance reports need depth >= 1".into()));
    }
    let mut csv = String::from("t,theta,level,deviation,bound,covariance_deviation,covariance_bound\n");
    for text in shifts {
        let s = parse_shift(text, f.grid().n_dims())?;
        for k in 1..=setup.depth {
            let factors: Vec<f64> = setup.layers[..k].iter().map(|l| l.pooling_factor()).collect();
            let k_const = setup.layers[..=k].iter().map(|l| l.decay().k).fold(0.0, f64::max);
            let dev = invariance_deviation(&f, &s, &setup.layers, k, &theta)?;
            let bound = invariance_bound(s.norm(), &factors, k_const, nf, &theta);
            let cdev = covariance_deviation(&f, &s, &setup.layers, k, &theta)?;
            let cbound = covariance_bound(s.norm(), &factors, k_const, nf, &theta);
            writeln!(
                csv,
                "{:e},{:e},{k},{dev:e},{bound:e},{cdev:e},{cbound:e}",
                s.norm(),
                theta.theta()
            )
            .expect("writing to a String");
        }
    }
    emit(output, &csv)
}
