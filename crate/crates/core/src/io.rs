//! Plain-text file formats for states, matrices, and trajectories.
//!
//! - State file: first line `N`, then `N` lines `re im`.
//! - Matrix file: first line `N M`, then `N * M` lines `re im` in row-major
//!   order.
//! - Trajectory CSV: one row per recorded state, `time` followed by the
//!   interleaved re/im amplitudes.
//!
//! Values are written with 17 significant digits so round trips are exact
//! at f64 precision.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ComplexVector};
use crate::scalar::{Scalar, C};
use crate::simulator::Trajectory;

fn parse_err(path: &Path, detail: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        detail: detail.into(),
    }
}

fn parse_complex_line<T: Scalar>(path: &Path, line: &str, lineno: usize) -> Result<C<T>> {
    let mut parts = line.split_whitespace();
    let mut grab = || -> Result<f64> {
        parts
            .next()
            .ok_or_else(|| parse_err(path, format!("line {lineno}: expected \"re im\"")))?
            .parse::<f64>()
            .map_err(|e| parse_err(path, format!("line {lineno}: {e}")))
    };
    let re = grab()?;
    let im = grab()?;
    Ok(C::new(T::real(re), T::real(im)))
}

/// Reads a state file.
pub fn read_state<T: Scalar>(path: impl AsRef<Path>) -> Result<ComplexVector<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| parse_err(path, "empty state file"))?
        .trim()
        .parse()
        .map_err(|e| parse_err(path, format!("bad dimension line: {e}")))?;
    let mut entries = Vec::with_capacity(n);
    for k in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| parse_err(path, format!("expected {n} amplitudes, got {k}")))?;
        entries.push(parse_complex_line(path, line, k + 2)?);
    }
    if entries.len() != n || n == 0 {
        return Err(parse_err(path, "dimension header does not match entries"));
    }
    Ok(ComplexVector::new(entries))
}

/// Writes a state file.
pub fn write_state<T: Scalar>(path: impl AsRef<Path>, v: &ComplexVector<T>) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "{}", v.dim()).expect("string write");
    for e in v.entries() {
        writeln!(out, "{:.16e} {:.16e}", e.re.as_f64(), e.im.as_f64()).expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads a matrix file.
pub fn read_matrix<T: Scalar>(path: impl AsRef<Path>) -> Result<ComplexMatrix<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| parse_err(path, "empty matrix file"))?;
    let mut dims = header.split_whitespace();
    let mut grab = || -> Result<usize> {
        dims.next()
            .ok_or_else(|| parse_err(path, "header must be \"N M\""))?
            .parse()
            .map_err(|e| parse_err(path, format!("bad header: {e}")))
    };
    let rows = grab()?;
    let cols = grab()?;
    if rows == 0 || cols == 0 {
        return Err(parse_err(path, "matrix must be at least 1x1"));
    }
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let lineno = 2 + i * cols + j;
            let line = lines.next().ok_or_else(|| {
                parse_err(path, format!("expected {} entries", rows * cols))
            })?;
            m.set(i, j, parse_complex_line(path, line, lineno)?);
        }
    }
    Ok(m)
}

/// Writes a matrix file.
pub fn write_matrix<T: Scalar>(path: impl AsRef<Path>, m: &ComplexMatrix<T>) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "{} {}", m.rows(), m.cols()).expect("string write");
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            writeln!(out, "{:.16e} {:.16e}", e.re.as_f64(), e.im.as_f64()).expect("string write");
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Writes a trajectory CSV: one row per state, time first, then the
/// interleaved re/im amplitudes at 15 significant digits.
pub fn write_trajectory_csv<T: Scalar>(
    path: impl AsRef<Path>,
    traj: &Trajectory<T>,
) -> Result<()> {
    let mut out = String::new();
    for (state, &t) in traj.states().iter().zip(traj.times()) {
        write!(out, "{:.14e}", t.as_f64()).expect("string write");
        for e in state.entries() {
            write!(out, ",{:.14e},{:.14e}", e.re.as_f64(), e.im.as_f64())
                .expect("string write");
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}
