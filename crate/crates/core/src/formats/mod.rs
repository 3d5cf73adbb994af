//! File formats: the trajectory interchange format, curve and matrix
//! exports, and the shared plumbing (atomic writes, gzip-transparent reads).

mod export;
mod trajectory;

pub use export::{
    load_curve, load_matrix, read_curve, read_matrix_dense, read_matrix_sparse, save_curve,
    save_matrix, sidecar_path, write_curve, write_matrix, MatrixFormat, MatrixSidecar,
    CURVE_HEADER,
};
pub use trajectory::{
    load_trajectory, read_trajectory, save_trajectory, write_trajectory, TrajectoryFile,
};

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use crate::error::{Error, Result};

/// Opens a file for line reading, decompressing it when it starts with the
/// gzip magic bytes.
pub fn open_input(path: &Path) -> Result<Box<dyn BufRead>> {
    let ctx = || format!("opening {}", path.display());
    let mut file = File::open(path).map_err(|e| Error::io(ctx(), e))?;
    let mut magic = [0u8; 2];
    let got = file.read(&mut magic).map_err(|e| Error::io(ctx(), e))?;
    let file = File::open(path).map_err(|e| Error::io(ctx(), e))?;
    if got == 2 && magic == [0x1f, 0x8b] {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place once `fill` succeeds.
pub fn atomic_write<F>(path: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::Persist {
        path: path.to_path_buf(),
        source: e,
    })?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut w)?;
        w.flush().map_err(|e| Error::Persist {
            path: path.to_path_buf(),
            source: e,
        })?;
    }
    tmp.persist(path).map_err(|e| Error::Persist {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

pub(crate) fn write_err(e: std::io::Error) -> Error {
    Error::io("writing output", e)
}
