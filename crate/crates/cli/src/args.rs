use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult};

fn angle_from(theta: Option<f64>, frac: Option<&[i64]>) -> CliResult<Option<f64>> {
    let value = match (theta, frac) {
        (Some(t), _) => t,
        (None, Some(&[_, 0])) => return Err(CliError::parse("--theta-frac", 0, "denominator must be nonzero")),
        (None, Some(pq)) => pq[0] as f64 * PI / pq[1] as f64,
        (None, None) => return Ok(None),
    };
    if !value.is_finite() {
        return Err(CliError::parse("--theta", 0, "angle must be finite"));
    }
    Ok(Some(value))
}

#[derive(Debug, Parser)]
#[command(name = "frftkit", version, about = "Fractional Fourier transform toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fractional Fourier transform of a signal CSV.
    Frft(FrftArgs),
    /// θ-operators applied to a signal CSV.
    #[command(subcommand)]
    Ops(OpsCommand),
    /// Frame bounds of an atom bank.
    Frames(FramesArgs),
    /// θ-scattering features and invariance reports.
    #[command(subcommand)]
    Scatter(ScatterCommand),
    /// Optimal θ-shift-invariant approximation.
    #[command(subcommand)]
    Approx(ApproxCommand),
    /// Fractional multi-tiles.
    #[command(subcommand)]
    Multitile(MultitileCommand),
    /// Plot-ready rows (coordinates, modulus, real, imaginary).
    Plotdata(PlotArgs),
}

/// Exactly one of `--theta` or `--theta-frac`.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct AngleArgs {
    /// Angle in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Angle p·π/q.
    #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_hyphen_values = true)]
    pub theta_frac: Option<Vec<i64>>,
}

impl AngleArgs {
    pub fn radians(&self) -> CliResult<f64> {
        angle_from(self.theta, self.theta_frac.as_deref())?
            .ok_or_else(|| CliError::parse("--theta", 0, "an angle is required"))
    }
}

#[derive(Debug, Args)]
pub struct FrftArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub angle: AngleArgs,
    /// Apply the inverse transform; the input then lives on the FrFT grid.
    #[arg(long)]
    pub inverse: bool,
    /// Use direct quadrature instead of the fast chirp algorithm.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct SignalIo {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub angle: AngleArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ChirpDirection {
    Forward,
    Backward,
}

#[derive(Debug, Subcommand)]
pub enum OpsCommand {
    /// θ-translation by a shift vector.
    Translate {
        #[command(flatten)]
        io: SignalIo,
        /// Comma-separated shift, one component per dimension.
        #[arg(long, allow_hyphen_values = true)]
        shift: String,
    },
    /// θ-modulation by a shift vector.
    Modulate {
        #[command(flatten)]
        io: SignalIo,
        #[arg(long, allow_hyphen_values = true)]
        shift: String,
    },
    /// θ-convolution with a second signal.
    Convolve {
        #[command(flatten)]
        io: SignalIo,
        #[arg(long)]
        with: PathBuf,
    },
    /// θ-dilation by a rational factor.
    Dilate {
        #[command(flatten)]
        io: SignalIo,
        #[arg(long)]
        scale: f64,
    },
    /// Chirp modulation `e^{±πi|t|² cot θ} f`.
    Chirp {
        #[command(flatten)]
        io: SignalIo,
        #[arg(long, value_enum, default_value = "forward")]
        direction: ChirpDirection,
    },
}

#[derive(Debug, Args)]
pub struct FramesArgs {
    /// Atom CSV files forming the bank.
    #[arg(long, num_args = 1.., required = true)]
    pub bank: Vec<PathBuf>,
    #[command(flatten)]
    pub angle: AngleArgs,
    /// JSON report; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Optional CSV of the frame spectrum over the FrFT grid.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ScatterCommand {
    /// Feature tree: an index CSV plus one CSV per feature.
    Extract {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output_dir: PathBuf,
    },
    /// Invariance and covariance deviations against their bounds.
    Invariance {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated shift; repeat for several shifts.
        #[arg(long, required = true, allow_hyphen_values = true)]
        shift: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Sinc1d,
    Sinc2d,
}

#[derive(Debug, Args)]
pub struct FiberArgs {
    /// Offset window bound K.
    #[arg(long, default_value_t = 4)]
    pub window: usize,
    /// Use offsets 0..=K instead of -K..=K.
    #[arg(long)]
    pub nonnegative: bool,
    /// ω samples per dimension.
    #[arg(long, default_value_t = 8)]
    pub omegas: usize,
    /// Sample ω at cell midpoints.
    #[arg(long)]
    pub midpoints: bool,
    /// Divide fibers by `|sin θ|^{n/2}` so the fiber map is an isometry.
    #[arg(long)]
    pub isometric: bool,
}

#[derive(Debug, Subcommand)]
pub enum ApproxCommand {
    /// Fit an ℓ-generator θ-shift-invariant space to data signals.
    Fit {
        #[arg(long, num_args = 1.., required = true)]
        data: Vec<PathBuf>,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        angle: AngleArgs,
        #[command(flatten)]
        fibers: FiberArgs,
        /// JSON model summary; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Directory for synthesized generator CSVs.
        #[arg(long)]
        generators_dir: Option<PathBuf>,
    },
    /// Approximation error table for the sinc family.
    Table {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[command(flatten)]
        angle: AngleArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MultitileCommand {
    /// Optimal ℓ-multi-tile for data signals.
    Fit {
        #[arg(long, num_args = 1.., required = true)]
        data: Vec<PathBuf>,
        #[arg(long)]
        ell: usize,
        /// Offset bound N (‖k‖∞ ≤ N).
        #[arg(long = "N", alias = "bound")]
        bound: usize,
        #[command(flatten)]
        angle: AngleArgs,
        #[arg(long, default_value_t = 8)]
        omegas: usize,
        /// Tile JSON; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Per-signal projection error CSV.
        #[arg(long)]
        errors: Option<PathBuf>,
    },
    /// Validate a tile JSON as an ℓ-multi-tile and report its partition.
    Check {
        #[arg(long)]
        tile: PathBuf,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Demo {
    /// θ-translated unit box.
    BoxTranslate,
    /// Chirp-modulated Gaussian.
    GaussianChirp,
    /// Partial projection of the first sinc family member.
    PartialProjection,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Signal CSV to convert.
    #[arg(long, conflicts_with = "demo", required_unless_present = "demo")]
    pub input: Option<PathBuf>,
    /// Built-in data set instead of an input file.
    #[arg(long, value_enum)]
    pub demo: Option<Demo>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_hyphen_values = true, conflicts_with = "theta")]
    pub theta_frac: Option<Vec<i64>>,
    #[arg(long, default_value_t = 1)]
    pub dims: usize,
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[arg(long, default_value_t = 4.0)]
    pub extent: f64,
    /// Shift for the translation demo.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub shift: String,
    /// Lattice bound for the partial projection demo.
    #[arg(long = "N", default_value_t = 1)]
    pub n: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl PlotArgs {
    pub fn radians(&self) -> CliResult<Option<f64>> {
        angle_from(self.theta, self.theta_frac.as_deref())
    }
}
