//! `MCWL` volume container.
//!
//! ```text
//! "MCWL" | u8 version = 1 | u16 width | u16 height | u16 frame_count
//!        | u8 bit_depth | u8 flags | payload
//! ```
//!
//! flags bit 0 marks a signed payload (`i16`, otherwise `u16`). Bit 1 marks
//! a signed 32-bit payload, written only for coefficient volumes with
//! samples outside the `i16` range. Samples are row-major, frame-major.

use std::fs;
use std::path::Path;

use edgelift_core::{Axis, Frame, Volume};

use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"MCWL";
const VERSION: u8 = 1;
const FLAG_SIGNED: u8 = 1;
const FLAG_WIDE: u8 = 2;

pub const VOLUME_HEADER_LEN: usize = 13;

/// Sample encoding of a volume file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Payload {
    /// `u16`; samples must lie in `[0, 2^bit_depth)`.
    Unsigned,
    /// `i16`, widened to `i32` when a sample does not fit.
    Signed,
}

/// A decoded volume and how it was stored.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeFile {
    pub volume: Volume,
    pub payload: Payload,
}

pub fn encode_volume(volume: &Volume, payload: Payload) -> Result<Vec<u8>> {
    let width = u16::try_from(volume.width()).map_err(|_| Error::Unrepresentable("width"))?;
    let height = u16::try_from(volume.height()).map_err(|_| Error::Unrepresentable("height"))?;
    let count = u16::try_from(volume.len()).map_err(|_| Error::Unrepresentable("frame count"))?;
    let samples = volume.frames().iter().flat_map(|f| f.samples().iter().copied());

    let flags = match payload {
        Payload::Unsigned => {
            for f in volume.frames() {
                f.check_range()?;
            }
            0
        }
        Payload::Signed => {
            let fits = samples.clone().all(|s| i16::try_from(s).is_ok());
            if fits {
                FLAG_SIGNED
            } else {
                FLAG_SIGNED | FLAG_WIDE
            }
        }
    };
    let width_bytes = if flags & FLAG_WIDE != 0 { 4 } else { 2 };
    let n = volume.len() * volume.width() * volume.height();
    let mut out = Vec::with_capacity(VOLUME_HEADER_LEN + width_bytes * n);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&width.to_le_bytes());
    out.extend_from_slice(&height.to_le_bytes());
    out.extend_from_slice(&count.to_le_bytes());
    out.push(volume.bit_depth());
    out.push(flags);
    for s in samples {
        match flags {
            0 => out.extend_from_slice(&(s as u16).to_le_bytes()),
            FLAG_SIGNED => out.extend_from_slice(&(s as i16).to_le_bytes()),
            _ => out.extend_from_slice(&s.to_le_bytes()),
        }
    }
    Ok(out)
}

pub fn decode_volume(bytes: &[u8]) -> Result<VolumeFile> {
    if bytes.len() < VOLUME_HEADER_LEN {
        return Err(Error::Truncated {
            expected: VOLUME_HEADER_LEN,
            got: bytes.len(),
        });
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::BadMagic { expected: "MCWL" });
    }
    if bytes[4] != VERSION {
        return Err(Error::Version {
            what: "volume",
            version: bytes[4],
        });
    }
    let u16_at = |i: usize| usize::from(u16::from_le_bytes([bytes[i], bytes[i + 1]]));
    let (width, height, count) = (u16_at(5), u16_at(7), u16_at(9));
    let bit_depth = bytes[11];
    let flags = bytes[12];
    if width == 0 || height == 0 || count == 0 {
        return Err(edgelift_core::Error::ZeroDimensions { width, height }.into());
    }
    if bit_depth == 0 || bit_depth > 16 {
        return Err(edgelift_core::Error::BitDepth(bit_depth).into());
    }
    let sample_bytes = if flags & FLAG_WIDE != 0 { 4 } else { 2 };
    let plane = width * height;
    let expected = VOLUME_HEADER_LEN + sample_bytes * plane * count;
    if bytes.len() < expected {
        return Err(Error::Truncated {
            expected,
            got: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(Error::LengthMismatch {
            expected,
            got: bytes.len(),
        });
    }
    let payload = &bytes[VOLUME_HEADER_LEN..];
    let sample = |k: usize| -> i32 {
        match (flags & FLAG_SIGNED != 0, sample_bytes) {
            (_, 4) => i32::from_le_bytes(payload[4 * k..4 * k + 4].try_into().unwrap()),
            (true, _) => i32::from(i16::from_le_bytes([payload[2 * k], payload[2 * k + 1]])),
            (false, _) => i32::from(u16::from_le_bytes([payload[2 * k], payload[2 * k + 1]])),
        }
    };
    let frames = (0..count)
        .map(|t| {
            let samples = (t * plane..(t + 1) * plane).map(sample).collect();
            Frame::new(width, height, samples, bit_depth)
        })
        .collect::<edgelift_core::Result<Vec<_>>>()?;
    let payload = if flags & FLAG_SIGNED != 0 {
        Payload::Signed
    } else {
        for f in &frames {
            f.check_range()?;
        }
        Payload::Unsigned
    };
    Ok(VolumeFile {
        volume: Volume::new(frames, Axis::Temporal)?,
        payload,
    })
}

/// Reads a volume file.
pub fn load_volume(path: impl AsRef<Path>) -> Result<VolumeFile> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(Error::io(path))?;
    decode_volume(&bytes)
}

/// Writes a volume file and returns the number of bytes written.
pub fn save_volume(volume: &Volume, payload: Payload, path: impl AsRef<Path>) -> Result<usize> {
    let path = path.as_ref();
    let bytes = encode_volume(volume, payload)?;
    fs::write(path, &bytes).map_err(Error::io(path))?;
    Ok(bytes.len())
}
