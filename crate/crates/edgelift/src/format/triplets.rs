use std::io::{self, Write};

use edgelift_core::SparseMatrix;

/// Writes one `row col weight` line per entry, row-major. Weights use the
/// shortest representation that parses back to the same `f64`.
pub fn write_triplets(matrix: &SparseMatrix, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "# {} x {}, {} entries", matrix.n_rows(), matrix.n_cols(), matrix.nnz())?;
    for (r, c, w) in matrix.entries() {
        writeln!(out, "{r} {c} {w:?}")?;
    }
    Ok(())
}
