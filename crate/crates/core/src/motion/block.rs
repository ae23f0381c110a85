use alloc::vec::Vec;

use super::{search_window, MotionVector, MAX_SEARCH_RANGE};
use crate::frame::Frame;
use crate::{Error, Result};

/// One integer vector per `block_size` square block, row-major over the
/// `ceil(w / b) x ceil(h / b)` block grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockMvf {
    block_size: usize,
    search_range: u8,
    cols: usize,
    rows: usize,
    vectors: Vec<MotionVector>,
}

impl BlockMvf {
    pub fn new(
        block_size: usize,
        search_range: u8,
        cols: usize,
        rows: usize,
        vectors: Vec<MotionVector>,
    ) -> Result<Self> {
        if block_size == 0 || cols == 0 || rows == 0 {
            return Err(Error::InvalidParameter("block grid must be non-empty"));
        }
        if search_range > MAX_SEARCH_RANGE {
            return Err(Error::InvalidParameter("search range must be <= 127"));
        }
        if vectors.len() != cols * rows {
            return Err(Error::SampleCount {
                expected: cols * rows,
                got: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| !v.within(search_range)) {
            return Err(Error::VectorOutOfRange {
                dx: v.dx,
                dy: v.dy,
                range: search_range,
            });
        }
        Ok(BlockMvf {
            block_size,
            search_range,
            cols,
            rows,
            vectors,
        })
    }

    /// All-zero field sized for a `width x height` frame.
    pub fn zero(width: usize, height: usize, block_size: usize, search_range: u8) -> Result<Self> {
        let (cols, rows) = (width.div_ceil(block_size), height.div_ceil(block_size));
        Self::new(
            block_size,
            search_range,
            cols,
            rows,
            alloc::vec![MotionVector::ZERO; cols * rows],
        )
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn search_range(&self) -> u8 {
        self.search_range
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn vectors(&self) -> &[MotionVector] {
        &self.vectors
    }

    pub fn get(&self, bx: usize, by: usize) -> MotionVector {
        self.vectors[by * self.cols + bx]
    }

    /// Vector governing pixel `(x, y)`.
    pub fn at_pixel(&self, x: usize, y: usize) -> MotionVector {
        self.get(x / self.block_size, y / self.block_size)
    }
}

/// SSD between the block of `cur` at `(x0, y0)` and `ref_frame` displaced by
/// `v`, with edge-clamped reference reads.
pub fn block_ssd(
    ref_frame: &Frame,
    cur: &Frame,
    x0: usize,
    y0: usize,
    block_w: usize,
    block_h: usize,
    v: MotionVector,
) -> i64 {
    let mut ssd = 0i64;
    for y in y0..y0 + block_h {
        for x in x0..x0 + block_w {
            let r = ref_frame.get_clamped(x as isize + v.dx as isize, y as isize + v.dy as isize);
            let d = i64::from(cur.get(x, y)) - i64::from(r);
            ssd += d * d;
        }
    }
    ssd
}

/// Best vector for one block: minimal SSD, ties broken by
/// [`MotionVector::tie_key`].
pub(crate) fn best_block_vector(
    ref_frame: &Frame,
    cur: &Frame,
    x0: usize,
    y0: usize,
    block_w: usize,
    block_h: usize,
    search_range: u8,
) -> MotionVector {
    search_window(search_range)
        .map(|v| (block_ssd(ref_frame, cur, x0, y0, block_w, block_h, v), v.tie_key(), v))
        .min_by_key(|&(ssd, key, _)| (ssd, key))
        .map(|(_, _, v)| v)
        .unwrap_or_default()
}

/// Exhaustive block matching of `cur` against `ref_frame`.
pub fn estimate_block_mvf(
    ref_frame: &Frame,
    cur: &Frame,
    block_size: usize,
    search_range: u8,
) -> Result<BlockMvf> {
    ref_frame.ensure_same_dims(cur.dims())?;
    let (w, h) = cur.dims();
    if block_size == 0 {
        return Err(Error::InvalidParameter("block size must be >= 1"));
    }
    if block_size > w || block_size > h {
        return Err(Error::CellTooLarge {
            cell: block_size,
            width: w,
            height: h,
        });
    }
    if search_range > MAX_SEARCH_RANGE {
        return Err(Error::InvalidParameter("search range must be <= 127"));
    }
    let (cols, rows) = (w.div_ceil(block_size), h.div_ceil(block_size));
    let mut vectors = Vec::with_capacity(cols * rows);
    for by in 0..rows {
        for bx in 0..cols {
            let (x0, y0) = (bx * block_size, by * block_size);
            let bw = block_size.min(w - x0);
            let bh = block_size.min(h - y0);
            vectors.push(best_block_vector(ref_frame, cur, x0, y0, bw, bh, search_range));
        }
    }
    BlockMvf::new(block_size, search_range, cols, rows, vectors)
}
