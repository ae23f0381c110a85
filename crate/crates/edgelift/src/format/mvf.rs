//! `MVF1` motion field container.
//!
//! ```text
//! "MVF1" | u8 kind (0 block, 1 mesh) | u16 cols | u16 rows | u8 cell size
//!        | u8 search_range | cols * rows * (i8 dx, i8 dy)
//! ```
//!
//! The length depends only on the grid dimensions.

use edgelift_core::{BlockMvf, MeshMvf, MotionVector, PairMotion};

use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"MVF1";
const KIND_BLOCK: u8 = 0;
const KIND_MESH: u8 = 1;

pub const MVF_HEADER_LEN: usize = 11;

/// Encodes a block or mesh field. `PairMotion::None` has no encoding.
pub fn encode_mvf(motion: &PairMotion) -> Result<Vec<u8>> {
    let (kind, cols, rows, cell, range, vectors) = match motion {
        PairMotion::None => return Err(Error::Unrepresentable("a pair without motion")),
        PairMotion::Block(m) => (KIND_BLOCK, m.cols(), m.rows(), m.block_size(), m.search_range(), m.vectors()),
        PairMotion::Mesh(m) => (KIND_MESH, m.cols(), m.rows(), m.grid_size(), m.search_range(), m.vectors()),
    };
    let cols = u16::try_from(cols).map_err(|_| Error::Unrepresentable("grid columns"))?;
    let rows = u16::try_from(rows).map_err(|_| Error::Unrepresentable("grid rows"))?;
    let cell = u8::try_from(cell).map_err(|_| Error::Unrepresentable("cell size"))?;
    let mut out = Vec::with_capacity(MVF_HEADER_LEN + 2 * vectors.len());
    out.extend_from_slice(MAGIC);
    out.push(kind);
    out.extend_from_slice(&cols.to_le_bytes());
    out.extend_from_slice(&rows.to_le_bytes());
    out.push(cell);
    out.push(range);
    for v in vectors {
        // the field constructors keep |dx|, |dy| <= range <= 127
        out.push(v.dx as i8 as u8);
        out.push(v.dy as i8 as u8);
    }
    Ok(out)
}

pub fn decode_mvf(bytes: &[u8]) -> Result<PairMotion> {
    if bytes.len() < MVF_HEADER_LEN {
        return Err(Error::Truncated {
            expected: MVF_HEADER_LEN,
            got: bytes.len(),
        });
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::BadMagic { expected: "MVF1" });
    }
    let kind = bytes[4];
    let cols = usize::from(u16::from_le_bytes([bytes[5], bytes[6]]));
    let rows = usize::from(u16::from_le_bytes([bytes[7], bytes[8]]));
    let cell = usize::from(bytes[9]);
    let range = bytes[10];
    let expected = MVF_HEADER_LEN + 2 * cols * rows;
    if bytes.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: bytes.len(),
        });
    }
    let vectors = bytes[MVF_HEADER_LEN..]
        .chunks_exact(2)
        .map(|c| MotionVector::new(i32::from(c[0] as i8), i32::from(c[1] as i8)))
        .collect();
    match kind {
        KIND_BLOCK => Ok(PairMotion::Block(BlockMvf::new(cell, range, cols, rows, vectors)?)),
        KIND_MESH => Ok(PairMotion::Mesh(MeshMvf::new(cell, range, cols, rows, vectors)?)),
        other => Err(Error::Version {
            what: "motion field kind",
            version: other,
        }),
    }
}
