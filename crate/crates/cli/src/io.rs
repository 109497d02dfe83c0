//! Signal CSV format and atomic output.
//!
//! A signal file starts with `# grid: <n_dims>,<samples>,<extent>` followed by
//! one `index,re,im` row per sample in row-major order. Other lines starting
//! with `#` and blank lines are ignored. Floats are written in shortest
//! round-trip form, so files are byte-identical across runs.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use frftkit::{Grid, SampledSignal};
use num_complex::Complex64;

use crate::error::{CliError, CliResult};

const GRID_TAG: &str = "# grid:";

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_f64(field: &str, path: &str, line: usize) -> CliResult<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::parse(path, line, format!("not a number: {field:?}")))
}

/// Parses signal CSV text; `origin` names the source in error messages.
pub fn parse_signal(text: &str, origin: &str) -> CliResult<SampledSignal> {
    let mut grid: Option<Grid> = None;
    let mut values: Vec<Option<Complex64>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(spec) = trimmed.strip_prefix(GRID_TAG) {
            if grid.is_some() {
                return Err(CliError::parse(origin, line, "duplicate grid header"));
            }
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 3 {
                return Err(CliError::parse(origin, line, "grid header needs n_dims,samples,extent"));
            }
            let n_dims = parts[0]
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::parse(origin, line, "bad n_dims"))?;
            let samples = parts[1]
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::parse(origin, line, "bad sample count"))?;
            let extent = parse_f64(parts[2], origin, line)?;
            let g = Grid::new(n_dims, samples, extent).map_err(|e| CliError::parse(origin, line, e.to_string()))?;
            values = vec![None; g.len()];
            grid = Some(g);
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if grid.is_none() {
            return Err(CliError::parse(origin, line, "data row before the grid header"));
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::parse(origin, line, "expected index,re,im"));
        }
        let index = fields[0]
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::parse(origin, line, "bad index"))?;
        let slot = values
            .get_mut(index)
            .ok_or_else(|| CliError::parse(origin, line, format!("index {index} outside the grid")))?;
        if slot.is_some() {
            return Err(CliError::parse(origin, line, format!("index {index} given twice")));
        }
        let z = Complex64::new(parse_f64(fields[1], origin, line)?, parse_f64(fields[2], origin, line)?);
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(CliError::parse(origin, line, "non-finite sample"));
        }
        *slot = Some(z);
    }
    let grid = grid.ok_or_else(|| CliError::parse(origin, 0, "missing grid header"))?;
    let missing = values.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        return Err(CliError::parse(origin, 0, format!("{missing} samples missing")));
    }
    Ok(SampledSignal::new(grid, values.into_iter().flatten().collect())?)
}

pub fn read_signal(path: &Path) -> CliResult<SampledSignal> {
    parse_signal(&read_text(path)?, &path.display().to_string())
}

pub fn format_signal(f: &SampledSignal) -> String {
    let g = f.grid();
    let mut out = format!("{GRID_TAG} {},{},{:e}\n", g.n_dims(), g.samples(), g.extent());
    for (i, v) in f.values().iter().enumerate() {
        writeln!(out, "{i},{:e},{:e}", v.re, v.im).expect("writing to a String");
    }
    out
}

/// Coordinates, modulus, real and imaginary part per sample.
pub fn format_plot(f: &SampledSignal) -> String {
    let g = f.grid();
    let mut out = String::from(if g.n_dims() == 1 {
        "x,abs,re,im\n"
    } else {
        "x,y,abs,re,im\n"
    });
    for (i, v) in f.values().iter().enumerate() {
        let p = g.point(i);
        if g.n_dims() == 1 {
            write!(out, "{:e},", p[0])
        } else {
            write!(out, "{:e},{:e},", p[0], p[1])
        }
        .expect("writing to a String");
        writeln!(out, "{:e},{:e},{:e}", v.norm(), v.re, v.im).expect("writing to a String");
    }
    out
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(path.display().to_string(), e.line(), e.to_string()))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes()).map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
    }
}

pub fn create_dir(path: &Path) -> CliResult<()> {
    std::fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
