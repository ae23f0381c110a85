//! Integer frames, real-valued planes and frame stacks.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Default sample precision of input volumes.
pub const DEFAULT_BIT_DEPTH: u8 = 12;

/// A single image plane of signed integer samples in row-major order.
///
/// The same container holds input frames (`0 <= s < 2^bit_depth`) and
/// coefficient planes, which may be negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    width: usize,
    height: usize,
    samples: Vec<i32>,
    bit_depth: u8,
}

impl Frame {
    /// Wraps a sample buffer. Samples are not range checked, see
    /// [`Frame::check_range`].
    pub fn new(width: usize, height: usize, samples: Vec<i32>, bit_depth: u8) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimensions { width, height });
        }
        if samples.len() != width * height {
            return Err(Error::SampleCount {
                expected: width * height,
                got: samples.len(),
            });
        }
        if bit_depth == 0 || bit_depth > 16 {
            return Err(Error::BitDepth(bit_depth));
        }
        Ok(Frame {
            width,
            height,
            samples,
            bit_depth,
        })
    }

    /// A frame filled with `value`.
    pub fn filled(width: usize, height: usize, value: i32, bit_depth: u8) -> Result<Self> {
        Self::new(width, height, alloc::vec![value; width * height], bit_depth)
    }

    /// Builds a frame by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        bit_depth: u8,
        mut f: impl FnMut(usize, usize) -> i32,
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self::new(width, height, samples, bit_depth)
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

    pub fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    pub fn samples(&self) -> &[i32] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [i32] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<i32> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> i32 {
        self.samples[y * self.width + x]
    }

    /// Sample at integer coordinates clamped to the frame border.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> i32 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.samples[y * self.width + x]
    }

    /// Verifies `0 <= s < 2^bit_depth` for every sample.
    pub fn check_range(&self) -> Result<()> {
        let limit = 1i64 << self.bit_depth;
        match self
            .samples
            .iter()
            .position(|&s| s < 0 || i64::from(s) >= limit)
        {
            Some(index) => Err(Error::SampleRange {
                index,
                value: self.samples[index],
                bit_depth: self.bit_depth,
            }),
            None => Ok(()),
        }
    }

    pub(crate) fn ensure_same_dims(&self, other: (usize, usize)) -> Result<()> {
        if self.dims() != other {
            return Err(Error::DimensionMismatch {
                left: self.dims(),
                right: other,
            });
        }
        Ok(())
    }
}

/// Real-valued plane, the output of warping and matrix products before
/// the lifting floors are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFrame {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl RealFrame {
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }
}

impl From<&Frame> for RealFrame {
    fn from(frame: &Frame) -> Self {
        RealFrame {
            width: frame.width,
            height: frame.height,
            values: frame.samples.iter().map(|&s| f64::from(s)).collect(),
        }
    }
}

/// Stacking direction of a volume. Metadata only; the transform treats both
/// the same way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Axis {
    #[default]
    Temporal,
    Spatial,
}

/// An ordered stack of equally sized frames.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Volume {
    frames: Vec<Frame>,
    axis: Axis,
}

impl Volume {
    /// Builds a volume; all frames must share width, height and bit depth.
    ///
    /// Subband volumes may hold an odd number of frames, so pairing is only
    /// checked by [`Volume::ensure_pairable`].
    pub fn new(frames: Vec<Frame>, axis: Axis) -> Result<Self> {
        let first = frames.first().ok_or(Error::EmptyVolume)?;
        for f in &frames[1..] {
            f.ensure_same_dims(first.dims())?;
            if f.bit_depth != first.bit_depth {
                return Err(Error::BitDepth(f.bit_depth));
            }
        }
        Ok(Volume { frames, axis })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn width(&self) -> usize {
        self.frames[0].width
    }

    pub fn height(&self) -> usize {
        self.frames[0].height
    }

    pub fn bit_depth(&self) -> u8 {
        self.frames[0].bit_depth
    }

    /// Requires an even frame count of at least two.
    pub fn ensure_pairable(&self) -> Result<()> {
        let n = self.frames.len();
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::OddFrameCount(n));
        }
        Ok(())
    }

    /// Iterates over `(odd, even)` pairs: frames `(2t, 2t + 1)` in
    /// zero-based order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Frame, &Frame)> {
        self.frames.chunks_exact(2).map(|c| (&c[0], &c[1]))
    }
}
