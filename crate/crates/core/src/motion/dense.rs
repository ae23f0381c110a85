use alloc::vec::Vec;

use super::BlockMvf;
use crate::{Error, Result};

/// Per-pixel compensated coordinates.
///
/// `subpixel[p]` is the unclamped position pixel `p` is compensated to;
/// `rounded[p]` is that position rounded half away from zero and clamped
/// into the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePositionField {
    width: usize,
    height: usize,
    subpixel: Vec<[f64; 2]>,
    rounded: Vec<[i32; 2]>,
}

impl DensePositionField {
    /// Field from subpixel positions; the rounded positions are derived.
    pub fn from_subpixel(width: usize, height: usize, subpixel: Vec<[f64; 2]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimensions { width, height });
        }
        if subpixel.len() != width * height {
            return Err(Error::SampleCount {
                expected: width * height,
                got: subpixel.len(),
            });
        }
        let (max_x, max_y) = (width as f64 - 1.0, height as f64 - 1.0);
        let rounded = subpixel
            .iter()
            .map(|&[x, y]| {
                [
                    libm::round(x).clamp(0.0, max_x) as i32,
                    libm::round(y).clamp(0.0, max_y) as i32,
                ]
            })
            .collect();
        Ok(DensePositionField {
            width,
            height,
            subpixel,
            rounded,
        })
    }

    /// Every pixel maps onto itself.
    pub fn identity(width: usize, height: usize) -> Result<Self> {
        let positions = (0..height)
            .flat_map(|y| (0..width).map(move |x| [x as f64, y as f64]))
            .collect();
        Self::from_subpixel(width, height, positions)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.subpixel.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subpixel.is_empty()
    }

    pub fn subpixel(&self) -> &[[f64; 2]] {
        &self.subpixel
    }

    pub fn rounded(&self) -> &[[i32; 2]] {
        &self.rounded
    }
}

/// Expands a block field to pixels: every pixel takes its block's vector.
pub fn block_to_dense(mvf: &BlockMvf, width: usize, height: usize) -> Result<DensePositionField> {
    if width.div_ceil(mvf.block_size()) != mvf.cols() || height.div_ceil(mvf.block_size()) != mvf.rows() {
        return Err(Error::DimensionMismatch {
            left: (width, height),
            right: (mvf.cols() * mvf.block_size(), mvf.rows() * mvf.block_size()),
        });
    }
    let mut positions = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let v = mvf.at_pixel(x, y);
            positions.push([(x as i32 + v.dx) as f64, (y as i32 + v.dy) as f64]);
        }
    }
    DensePositionField::from_subpixel(width, height, positions)
}
