//! Evaluation metrics: lowpass PSNR, highpass energy, a zeroth-order
//! entropy estimate of subband size.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::frame::{Frame, Volume};
use crate::{Error, Result};

fn mse(a: &Frame, b: &Frame) -> Result<f64> {
    a.ensure_same_dims(b.dims())?;
    let sum: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let d = f64::from(x) - f64::from(y);
            d * d
        })
        .sum();
    Ok(sum / a.samples().len() as f64)
}

/// `10 log10((2^bit_depth - 1)^2 / MSE)`; `f64::INFINITY` for identical
/// frames.
pub fn psnr(a: &Frame, b: &Frame, bit_depth: u8) -> Result<f64> {
    let mse = mse(a, b)?;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    let peak = f64::from((1u32 << bit_depth) - 1);
    Ok(10.0 * libm::log10(peak * peak / mse))
}

/// Mean of the squared samples over all frames.
pub fn mean_energy(frames: &[Frame]) -> Result<f64> {
    let count: usize = frames.iter().map(|f| f.samples().len()).sum();
    if count == 0 {
        return Err(Error::Empty);
    }
    let sum: f64 = frames
        .iter()
        .flat_map(|f| f.samples())
        .map(|&s| {
            let s = f64::from(s);
            s * s
        })
        .sum();
    Ok(sum / count as f64)
}

/// Zeroth-order entropy of a sample histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    pub bits: f64,
    pub samples: usize,
    pub symbols: usize,
}

impl EntropyEstimate {
    pub fn bytes(&self) -> f64 {
        self.bits / 8.0
    }

    pub fn bits_per_sample(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.bits / self.samples as f64
        }
    }
}

/// Empirical entropy of all samples times the sample count.
pub fn entropy_bits(frames: &[Frame]) -> EntropyEstimate {
    let mut histogram: BTreeMap<i32, usize> = BTreeMap::new();
    for &s in frames.iter().flat_map(|f| f.samples()) {
        *histogram.entry(s).or_default() += 1;
    }
    let n: usize = histogram.values().sum();
    let total = n as f64;
    let bits = histogram
        .values()
        .map(|&c| {
            let c = c as f64;
            -c * libm::log2(c / total)
        })
        .sum::<f64>()
        .max(0.0);
    EntropyEstimate {
        bits,
        samples: n,
        symbols: histogram.len(),
    }
}

/// Lowpass quality of a decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct LpQuality {
    pub per_pair: Vec<f64>,
    pub mean: f64,
}

/// PSNR of every lowpass frame against the odd frame of its pair, and the
/// arithmetic mean over pairs in dB.
pub fn lp_quality(lp: &Volume, originals: &Volume) -> Result<LpQuality> {
    if originals.len() != 2 * lp.len() {
        return Err(Error::MotionCount {
            expected: originals.len() / 2,
            got: lp.len(),
        });
    }
    let bit_depth = originals.bit_depth();
    let per_pair = lp
        .frames()
        .iter()
        .zip(originals.pairs())
        .map(|(l, (odd, _))| psnr(l, odd, bit_depth))
        .collect::<Result<Vec<_>>>()?;
    let mean = per_pair.iter().sum::<f64>() / per_pair.len() as f64;
    Ok(LpQuality { per_pair, mean })
}
