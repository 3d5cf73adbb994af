use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{atomic_write, open_input, write_err};
use crate::engine::{CorrCurve, CorrMatrix};
use crate::error::{Error, Result};

pub const CURVE_HEADER: &str = "tau,c_raw,c_centered";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixFormat {
    /// `m` rows of `m` comma separated values.
    #[default]
    Dense,
    /// One `i,j,value` line per nonzero entry.
    Sparse,
}

/// JSON metadata written beside every exported matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixSidecar {
    pub m: usize,
    pub n: usize,
    pub tau: usize,
    pub centered: bool,
    pub format: MatrixFormat,
    #[serde(default)]
    pub source: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(".json");
    PathBuf::from(s)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_f64(line: usize, tok: &str) -> Result<f64> {
    tok.trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad number `{tok}`")))
}

fn parse_usize(line: usize, tok: &str) -> Result<usize> {
    tok.trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad index `{tok}`")))
}

// `{}` on f64 prints the shortest representation that parses back to the
// same value, so exports round-trip exactly.
pub fn write_curve<W: Write + ?Sized>(w: &mut W, curve: &CorrCurve) -> Result<()> {
    writeln!(w, "{CURVE_HEADER}").map_err(write_err)?;
    for (tau, raw, centered) in curve.points() {
        writeln!(w, "{tau},{raw},{centered}").map_err(write_err)?;
    }
    Ok(())
}

pub fn read_curve<R: BufRead>(reader: R) -> Result<CorrCurve> {
    let mut lines = reader.lines().enumerate();
    match lines.next() {
        Some((_, Ok(h))) if h.trim() == CURVE_HEADER => {}
        Some((_, Ok(h))) => {
            return Err(parse_err(
                1,
                format!("expected header `{CURVE_HEADER}`, found `{h}`"),
            ))
        }
        Some((_, Err(e))) => return Err(Error::io("reading curve", e)),
        None => return Err(parse_err(1, "empty curve file")),
    }
    let (mut lags, mut raw, mut centered) = (Vec::new(), Vec::new(), Vec::new());
    for (k, line) in lines {
        let lineno = k + 1;
        let line = line.map_err(|e| Error::io("reading curve", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_err(lineno, "expected `tau,c_raw,c_centered`"));
        }
        lags.push(parse_usize(lineno, fields[0])?);
        raw.push(parse_f64(lineno, fields[1])?);
        centered.push(parse_f64(lineno, fields[2])?);
    }
    CorrCurve::new(lags, raw, centered)
}

pub fn write_matrix<W: Write + ?Sized>(
    w: &mut W,
    matrix: &CorrMatrix,
    format: MatrixFormat,
) -> Result<()> {
    match format {
        MatrixFormat::Dense => {
            for row in matrix.values.rows() {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(w, "{}", line.join(",")).map_err(write_err)?;
            }
        }
        MatrixFormat::Sparse => {
            for ((i, j), v) in matrix.values.indexed_iter() {
                if *v != 0.0 {
                    writeln!(w, "{i},{j},{v}").map_err(write_err)?;
                }
            }
        }
    }
    Ok(())
}

pub fn read_matrix_dense<R: BufRead>(reader: R, lag: usize, centered: bool) -> Result<CorrMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("reading matrix", e))?;
        if line.trim().is_empty() {
            continue;
        }
        rows.push(
            line.split(',')
                .map(|t| parse_f64(k + 1, t))
                .collect::<Result<_>>()?,
        );
    }
    let m = rows.len();
    if m == 0 {
        return Err(parse_err(1, "empty matrix file"));
    }
    if let Some((k, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
        return Err(parse_err(
            k + 1,
            format!("row has {} entries, expected {m}", r.len()),
        ));
    }
    let values = Array2::from_shape_vec((m, m), rows.concat()).expect("shape checked");
    Ok(CorrMatrix {
        values,
        lag,
        centered,
    })
}

pub fn read_matrix_sparse<R: BufRead>(
    reader: R,
    m: usize,
    lag: usize,
    centered: bool,
) -> Result<CorrMatrix> {
    let mut values = Array2::zeros((m, m));
    for (k, line) in reader.lines().enumerate() {
        let lineno = k + 1;
        let line = line.map_err(|e| Error::io("reading matrix", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(parse_err(lineno, "expected `i,j,value`"));
        }
        let (i, j) = (parse_usize(lineno, f[0])?, parse_usize(lineno, f[1])?);
        if i >= m || j >= m {
            return Err(parse_err(
                lineno,
                format!("entry ({i},{j}) out of range for m={m}"),
            ));
        }
        values[[i, j]] = parse_f64(lineno, f[2])?;
    }
    Ok(CorrMatrix {
        values,
        lag,
        centered,
    })
}

pub fn save_curve(path: &Path, curve: &CorrCurve) -> Result<()> {
    atomic_write(path, |w| write_curve(w, curve))
}

pub fn load_curve(path: &Path) -> Result<CorrCurve> {
    read_curve(open_input(path)?)
}

/// Writes the matrix and its `<path>.json` sidecar.
pub fn save_matrix(path: &Path, matrix: &CorrMatrix, sidecar: &MatrixSidecar) -> Result<()> {
    atomic_write(path, |w| write_matrix(w, matrix, sidecar.format))?;
    let json = serde_json::to_string_pretty(sidecar)?;
    atomic_write(&sidecar_path(path), |w| {
        writeln!(w, "{json}").map_err(write_err)
    })
}

/// Reads a matrix using its sidecar for format, size, lag and centering.
pub fn load_matrix(path: &Path) -> Result<(CorrMatrix, MatrixSidecar)> {
    let side_path = sidecar_path(path);
    let text = std::fs::read_to_string(&side_path)
        .map_err(|e| Error::io(format!("reading {}", side_path.display()), e))?;
    let sidecar: MatrixSidecar = serde_json::from_str(&text)?;
    let reader = open_input(path)?;
    let matrix = match sidecar.format {
        MatrixFormat::Dense => read_matrix_dense(reader, sidecar.tau, sidecar.centered)?,
        MatrixFormat::Sparse => {
            read_matrix_sparse(reader, sidecar.m, sidecar.tau, sidecar.centered)?
        }
    };
    if matrix.m() != sidecar.m {
        return Err(Error::MatrixShape {
            expected: sidecar.m,
            rows: matrix.m(),
            cols: matrix.m(),
        });
    }
    Ok((matrix, sidecar))
}
