//! Synthetic deformable phantoms: smooth Gaussian blobs under a radial
//! contraction/expansion that varies sinusoidally across the sequence.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::frame::{Axis, Frame, Volume, DEFAULT_BIT_DEPTH};
use crate::mc::sample_bilinear;
use crate::{Error, Result};

/// Largest displacement a phantom may use; the estimators search ±8 pixels.
pub const MAX_AMPLITUDE: f64 = 8.0;

/// Noise level of the benchmark phantoms, in 12-bit intensity units.
pub const BENCHMARK_NOISE_SIGMA: f64 = 20.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PhantomSpec {
    pub width: usize,
    pub height: usize,
    pub frame_count: usize,
    pub blob_count: usize,
    /// Maximum displacement magnitude in pixels.
    pub contraction_amplitude: f64,
    /// Standard deviation of additive Gaussian noise, in intensity units.
    pub noise_sigma: f64,
    pub rng_seed: u64,
    pub bit_depth: u8,
}

impl Default for PhantomSpec {
    fn default() -> Self {
        PhantomSpec {
            width: 128,
            height: 128,
            frame_count: 4,
            blob_count: 24,
            contraction_amplitude: 4.0,
            noise_sigma: 0.0,
            rng_seed: 0,
            bit_depth: DEFAULT_BIT_DEPTH,
        }
    }
}

impl PhantomSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::ZeroDimensions {
                width: self.width,
                height: self.height,
            });
        }
        if self.frame_count < 2 || !self.frame_count.is_multiple_of(2) {
            return Err(Error::OddFrameCount(self.frame_count));
        }
        if !(0.0..=MAX_AMPLITUDE).contains(&self.contraction_amplitude) {
            return Err(Error::InvalidParameter(
                "contraction amplitude must lie in [0, 8] pixels",
            ));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidParameter("noise sigma must be finite and >= 0"));
        }
        if self.bit_depth == 0 || self.bit_depth > 16 {
            return Err(Error::BitDepth(self.bit_depth));
        }
        Ok(())
    }
}

/// Ground truth of a phantom: frame `t` is frame 0 sampled at
/// `p + d_t(p)` with `d_t(p) = scale_t * (p - center)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMotion {
    pub center: (f64, f64),
    pub r_max: f64,
    /// Per-frame radial scale `amplitude * sin(pi t / T) / r_max`.
    pub scales: Vec<f64>,
}

impl RadialMotion {
    fn new(spec: &PhantomSpec) -> Self {
        let center = (
            (spec.width as f64 - 1.0) / 2.0,
            (spec.height as f64 - 1.0) / 2.0,
        );
        let r_max = libm::hypot(center.0, center.1).max(1.0);
        let t_total = spec.frame_count as f64;
        let scales = (0..spec.frame_count)
            .map(|t| spec.contraction_amplitude * libm::sin(PI * t as f64 / t_total) / r_max)
            .collect();
        RadialMotion {
            center,
            r_max,
            scales,
        }
    }

    /// Displacement of frame `t` relative to frame 0 at pixel `(x, y)`.
    pub fn frame_displacement(&self, t: usize, x: f64, y: f64) -> (f64, f64) {
        let s = self.scales[t];
        (s * (x - self.center.0), s * (y - self.center.1))
    }

    /// Displacement `v` of pair `k` such that `even(p) = odd(p + v(p))`,
    /// where odd is frame `2k` and even is frame `2k + 1`.
    pub fn pair_displacement(&self, pair: usize, x: f64, y: f64) -> (f64, f64) {
        let sa = self.scales[2 * pair];
        let sb = self.scales[2 * pair + 1];
        let factor = (1.0 + sb) / (1.0 + sa) - 1.0;
        (factor * (x - self.center.0), factor * (y - self.center.1))
    }
}

/// Generates a phantom volume and its ground-truth motion. Deterministic in
/// `spec.rng_seed`.
pub fn generate_phantom(spec: &PhantomSpec) -> Result<(Volume, RadialMotion)> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let max_value = f64::from((1u32 << spec.bit_depth) - 1);
    // intensities are laid out relative to a 12-bit range
    let level = max_value / 4095.0;

    let short_side = w.min(h) as f64;
    let blobs: Vec<(f64, f64, f64, f64)> = (0..spec.blob_count)
        .map(|_| {
            let cx = rng.random_range(0.0..w as f64);
            let cy = rng.random_range(0.0..h as f64);
            let sigma = rng.random_range((short_side / 32.0).max(1.5)..(short_side / 8.0).max(2.0));
            let amp = rng.random_range(200.0..900.0) * level;
            (cx, cy, sigma, amp)
        })
        .collect();

    let base = 400.0 * level;
    let mut reference = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let mut v = base;
            for &(cx, cy, sigma, amp) in &blobs {
                let d2 = (x as f64 - cx) * (x as f64 - cx) + (y as f64 - cy) * (y as f64 - cy);
                v += amp * libm::exp(-d2 / (2.0 * sigma * sigma));
            }
            reference.push(v.min(max_value));
        }
    }

    let motion = RadialMotion::new(spec);
    let noise = Normal::new(0.0, spec.noise_sigma)
        .map_err(|_| Error::InvalidParameter("noise sigma must be finite and >= 0"))?;
    let mut frames = Vec::with_capacity(spec.frame_count);
    for t in 0..spec.frame_count {
        let frame = Frame::from_fn(w, h, spec.bit_depth, |x, y| {
            let (dx, dy) = motion.frame_displacement(t, x as f64, y as f64);
            let clean = sample_bilinear(w, h, |i| reference[i], x as f64 + dx, y as f64 + dy);
            let noisy = if spec.noise_sigma > 0.0 {
                clean + noise.sample(&mut rng)
            } else {
                clean
            };
            libm::round(noisy).clamp(0.0, max_value) as i32
        })?;
        frames.push(frame);
    }
    Ok((Volume::new(frames, Axis::Temporal)?, motion))
}
