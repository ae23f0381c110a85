//! Intensity-domain compensation operators: bilinear warping and the
//! inverse mappings used by the update step of the block and mesh methods.

use alloc::vec::Vec;

use crate::frame::{Frame, RealFrame};
use crate::motion::{upsample_grid, BlockMvf, DensePositionField, MeshMvf};
use crate::Result;

/// Bilinear sample of a `width x height` row-major plane at `(x, y)`, with
/// the position clamped into the plane.
#[inline]
pub fn sample_bilinear(width: usize, height: usize, get: impl Fn(usize) -> f64, x: f64, y: f64) -> f64 {
    let x = x.clamp(0.0, (width - 1) as f64);
    let y = y.clamp(0.0, (height - 1) as f64);
    let x0 = libm::floor(x) as usize;
    let y0 = libm::floor(y) as usize;
    let x1 = (x0 + 1).min(width - 1);
    let y1 = (y0 + 1).min(height - 1);
    let fx = x - x0 as f64;
    let fy = y - y0 as f64;
    // lerp form keeps constant neighbourhoods exact
    let lerp = |a: f64, b: f64, t: f64| if t == 0.0 { a } else { a + t * (b - a) };
    let top = lerp(get(y0 * width + x0), get(y0 * width + x1), fx);
    if fy == 0.0 {
        return top;
    }
    let bottom = lerp(get(y1 * width + x0), get(y1 * width + x1), fx);
    lerp(top, bottom, fy)
}

/// Samples `frame` at the subpixel position the field assigns to each pixel.
pub fn warp(frame: &Frame, field: &DensePositionField) -> Result<RealFrame> {
    warp_real(&RealFrame::from(frame), field)
}

pub(crate) fn warp_real(plane: &RealFrame, field: &DensePositionField) -> Result<RealFrame> {
    let (w, h) = plane.dims();
    if field.dims() != (w, h) {
        return Err(crate::Error::DimensionMismatch {
            left: (w, h),
            right: field.dims(),
        });
    }
    let values = field
        .subpixel()
        .iter()
        .map(|&[x, y]| sample_bilinear(w, h, |i| plane.values[i], x, y))
        .collect();
    Ok(RealFrame {
        width: w,
        height: h,
        values,
    })
}

/// Inverse of block compensation: each highpass sample is scattered to the
/// reference position it was predicted from. Collisions keep the last
/// writer in raster order; targets nobody wrote to copy their nearest
/// written pixel.
pub fn inverse_warp_block(hp: &Frame, mvf: &BlockMvf) -> Result<Frame> {
    let (w, h) = hp.dims();
    let field = crate::motion::block_to_dense(mvf, w, h)?;
    let mut out = alloc::vec![0i32; w * h];
    let mut written = alloc::vec![false; w * h];
    for (p, &[tx, ty]) in field.rounded().iter().enumerate() {
        let t = ty as usize * w + tx as usize;
        out[t] = hp.samples()[p];
        written[t] = true;
    }
    fill_nearest(&mut out, &written, w, h);
    Frame::new(w, h, out, hp.bit_depth())
}

/// Approximate inverse of mesh compensation: warp with the negated mesh.
pub fn inverse_warp_mesh(hp: &Frame, mvf: &MeshMvf) -> Result<RealFrame> {
    let field = upsample_grid(&mvf.negated(), hp.width(), hp.height())?;
    warp(hp, &field)
}

/// Replaces every unwritten pixel with the value of the nearest written one
/// (Euclidean distance, ties to the smaller raster index).
fn fill_nearest(values: &mut [i32], written: &[bool], width: usize, height: usize) {
    if written.iter().all(|&w| w) || !written.iter().any(|&w| w) {
        return;
    }
    let source: Vec<i32> = values.to_vec();
    let max_r = width.max(height) as isize;
    for idx in 0..values.len() {
        if written[idx] {
            continue;
        }
        let (cx, cy) = ((idx % width) as isize, (idx / width) as isize);
        let mut best: Option<(isize, usize)> = None;
        for r in 1..=max_r {
            for (x, y) in ring(cx, cy, r) {
                if x < 0 || y < 0 || x >= width as isize || y >= height as isize {
                    continue;
                }
                let j = y as usize * width + x as usize;
                if !written[j] {
                    continue;
                }
                let d2 = (x - cx).pow(2) + (y - cy).pow(2);
                if best.is_none_or(|b| (d2, j) < b) {
                    best = Some((d2, j));
                }
            }
            // everything outside this ring is at least (r + 1)^2 away
            if best.is_some_and(|(d2, _)| d2 < (r + 1) * (r + 1)) {
                break;
            }
        }
        if let Some((_, j)) = best {
            values[idx] = source[j];
        }
    }
}

/// Coordinates at Chebyshev distance exactly `r` from `(cx, cy)`.
pub(crate) fn ring(cx: isize, cy: isize, r: isize) -> impl Iterator<Item = (isize, isize)> {
    let top_bottom = (-r..=r).flat_map(move |dx| [(cx + dx, cy - r), (cx + dx, cy + r)]);
    let sides = (-r + 1..r).flat_map(move |dy| [(cx - r, cy + dy), (cx + r, cy + dy)]);
    top_bottom.chain(sides)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion::MotionVector;

    fn ramp(w: usize, h: usize) -> Frame {
        Frame::from_fn(w, h, 12, |x, _| x as i32).unwrap()
    }

    #[test]
    fn identity_field_is_identity() {
        let f = Frame::from_fn(5, 4, 12, |x, y| (x * 7 + y * 3) as i32).unwrap();
        let out = warp(&f, &DensePositionField::identity(5, 4).unwrap()).unwrap();
        assert_eq!(out, RealFrame::from(&f));
    }

    #[test]
    fn constant_shift_on_ramp() {
        let f = ramp(6, 3);
        let mvf = BlockMvf::new(3, 1, 2, 1, alloc::vec![MotionVector::new(1, 0); 2]).unwrap();
        let field = crate::motion::block_to_dense(&mvf, 6, 3).unwrap();
        let out = warp(&f, &field).unwrap();
        for y in 0..3 {
            for x in 0..6 {
                assert_eq!(out.get(x, y), (x + 1).min(5) as f64);
            }
        }
    }

    #[test]
    fn subpixel_sample_on_ramp() {
        let f = ramp(6, 6);
        let mut pos = DensePositionField::identity(6, 6).unwrap().subpixel().to_vec();
        pos[0] = [2.5, 3.0];
        let field = DensePositionField::from_subpixel(6, 6, pos).unwrap();
        assert_eq!(warp(&f, &field).unwrap().values[0], 2.5);
    }

    #[test]
    fn bilinear_stays_in_input_range() {
        let f = Frame::from_fn(7, 7, 12, |x, y| ((x * 613 + y * 97) % 4096) as i32).unwrap();
        let positions = (0..49)
            .map(|i| [(i as f64 * 0.37) % 9.0 - 1.0, (i as f64 * 0.91) % 8.0 - 0.5])
            .collect();
        let out = warp(&f, &DensePositionField::from_subpixel(7, 7, positions).unwrap()).unwrap();
        let (lo, hi) = (
            *f.samples().iter().min().unwrap() as f64,
            *f.samples().iter().max().unwrap() as f64,
        );
        assert!(out.values.iter().all(|&v| v >= lo && v <= hi));
    }

    #[test]
    fn inverse_block_with_zero_field_is_identity() {
        let f = Frame::from_fn(8, 8, 12, |x, y| x as i32 - y as i32).unwrap();
        let mvf = BlockMvf::zero(8, 8, 4, 2).unwrap();
        assert_eq!(inverse_warp_block(&f, &mvf).unwrap(), f);
    }

    #[test]
    fn inverse_block_fills_vacated_strip() {
        let f = Frame::from_fn(24, 8, 12, |x, y| (100 * y + x) as i32).unwrap();
        let mut vectors = alloc::vec![MotionVector::ZERO; 3];
        vectors[0] = MotionVector::new(8, 0);
        let mvf = BlockMvf::new(8, 8, 3, 1, vectors).unwrap();
        let out = inverse_warp_block(&f, &mvf).unwrap();
        for y in 0..8 {
            // block 1 wrote its own columns after block 0 did
            for x in 8..24 {
                assert_eq!(out.get(x, y), f.get(x, y));
            }
            // columns 0..8 nobody wrote: nearest written column is 8
            for x in 0..8 {
                assert_eq!(out.get(x, y), f.get(8, y));
            }
        }
    }

    #[test]
    fn inverse_block_translation_matches_shifted_copy() {
        let f = Frame::from_fn(16, 16, 12, |x, y| (x * 16 + y) as i32).unwrap();
        let mvf = BlockMvf::new(4, 3, 4, 4, alloc::vec![MotionVector::new(-2, 1); 16]).unwrap();
        let out = inverse_warp_block(&f, &mvf).unwrap();
        // row 15 collects the clamped writes of rows 14 and 15; the later wins
        for y in 1..15 {
            for x in 0..14 {
                assert_eq!(out.get(x, y), f.get(x + 2, y - 1));
            }
        }
    }

    #[test]
    fn inverse_mesh_negates_translation() {
        let f = ramp(16, 16);
        let mvf = MeshMvf::new(8, 8, 3, 3, alloc::vec![MotionVector::new(1, 0); 9]).unwrap();
        let out = inverse_warp_mesh(&f, &mvf).unwrap();
        for x in 0..16 {
            assert_eq!(out.get(x, 5), x.saturating_sub(1) as f64);
        }
        let zero = MeshMvf::zero(16, 16, 8, 8).unwrap();
        assert_eq!(inverse_warp_mesh(&f, &zero).unwrap(), RealFrame::from(&f));
    }

    #[test]
    fn ring_enumerates_perimeter() {
        assert_eq!(ring(0, 0, 1).count(), 8);
        assert_eq!(ring(5, 5, 3).count(), 24);
        assert!(ring(0, 0, 2).all(|(x, y)| x.abs().max(y.abs()) == 2));
    }
}
