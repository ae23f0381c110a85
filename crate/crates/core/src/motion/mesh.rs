use alloc::vec::Vec;

use super::block::best_block_vector;
use super::{DensePositionField, MotionVector, MAX_SEARCH_RANGE};
use crate::frame::Frame;
use crate::mc::sample_bilinear;
use crate::{Error, Result};

/// Refinement offsets tried around a grid point's current vector, nearest
/// first.
const REFINE_OFFSETS: [MotionVector; 8] = [
    MotionVector::new(0, -1),
    MotionVector::new(-1, 0),
    MotionVector::new(1, 0),
    MotionVector::new(0, 1),
    MotionVector::new(-1, -1),
    MotionVector::new(1, -1),
    MotionVector::new(-1, 1),
    MotionVector::new(1, 1),
];

/// Integer displacements of the grid points of a regular quadrilateral mesh.
///
/// Grid point `(gx, gy)` sits at pixel `(gx * grid_size, gy * grid_size)`;
/// the lattice has `floor(w / g) + 1` columns and `floor(h / g) + 1` rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeshMvf {
    grid_size: usize,
    search_range: u8,
    cols: usize,
    rows: usize,
    vectors: Vec<MotionVector>,
}

impl MeshMvf {
    pub fn new(
        grid_size: usize,
        search_range: u8,
        cols: usize,
        rows: usize,
        vectors: Vec<MotionVector>,
    ) -> Result<Self> {
        if grid_size < 2 {
            return Err(Error::InvalidParameter("grid size must be >= 2"));
        }
        if cols < 2 || rows < 2 {
            return Err(Error::InvalidParameter("mesh needs at least 2x2 grid points"));
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
        Ok(MeshMvf {
            grid_size,
            search_range,
            cols,
            rows,
            vectors,
        })
    }

    /// Grid-point lattice dimensions for a frame.
    pub fn lattice_dims(width: usize, height: usize, grid_size: usize) -> (usize, usize) {
        (width / grid_size + 1, height / grid_size + 1)
    }

    pub fn zero(width: usize, height: usize, grid_size: usize, search_range: u8) -> Result<Self> {
        let (cols, rows) = Self::lattice_dims(width, height, grid_size);
        Self::new(
            grid_size,
            search_range,
            cols,
            rows,
            alloc::vec![MotionVector::ZERO; cols * rows],
        )
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
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

    pub fn get(&self, gx: usize, gy: usize) -> MotionVector {
        self.vectors[gy * self.cols + gx]
    }

    fn set(&mut self, gx: usize, gy: usize, v: MotionVector) {
        self.vectors[gy * self.cols + gx] = v;
    }

    /// The same mesh with every vector negated.
    pub fn negated(&self) -> MeshMvf {
        MeshMvf {
            vectors: self.vectors.iter().map(|&v| -v).collect(),
            ..self.clone()
        }
    }

    /// Deformed position of a grid point.
    fn node_position(&self, gx: usize, gy: usize) -> (i64, i64) {
        let v = self.get(gx, gy);
        (
            (gx * self.grid_size) as i64 + i64::from(v.dx),
            (gy * self.grid_size) as i64 + i64::from(v.dy),
        )
    }

    /// A deformed quad is valid when it stays strictly convex with the
    /// orientation of the regular grid, which implies positive signed area.
    pub fn quad_is_valid(&self, qx: usize, qy: usize) -> bool {
        let corners = [
            self.node_position(qx, qy),
            self.node_position(qx + 1, qy),
            self.node_position(qx + 1, qy + 1),
            self.node_position(qx, qy + 1),
        ];
        (0..4).all(|k| {
            let a = corners[k];
            let b = corners[(k + 1) % 4];
            let c = corners[(k + 2) % 4];
            (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0) > 0
        })
    }

    /// Signed area of a deformed quad (shoelace, positive for the regular
    /// orientation in image coordinates).
    pub fn quad_area(&self, qx: usize, qy: usize) -> f64 {
        let c = [
            self.node_position(qx, qy),
            self.node_position(qx + 1, qy),
            self.node_position(qx + 1, qy + 1),
            self.node_position(qx, qy + 1),
        ];
        let twice: i64 = (0..4)
            .map(|k| c[k].0 * c[(k + 1) % 4].1 - c[(k + 1) % 4].0 * c[k].1)
            .sum();
        twice as f64 / 2.0
    }

    pub fn is_valid(&self) -> bool {
        (0..self.rows - 1).all(|qy| (0..self.cols - 1).all(|qx| self.quad_is_valid(qx, qy)))
    }

    fn incident_quads(&self, gx: usize, gy: usize) -> impl Iterator<Item = (usize, usize)> {
        let qxs = gx.saturating_sub(1)..=gx.min(self.cols - 2);
        let qys = gy.saturating_sub(1)..=gy.min(self.rows - 2);
        qys.flat_map(move |qy| qxs.clone().map(move |qx| (qx, qy)))
    }

    fn incident_quads_valid(&self, gx: usize, gy: usize) -> bool {
        self.incident_quads(gx, gy).all(|(qx, qy)| self.quad_is_valid(qx, qy))
    }

    /// Quad index and local coordinate in `[0, 1]` along one axis. Pixels past
    /// the last grid line take the boundary values of the last quad.
    fn locate(&self, p: usize, nodes: usize) -> (usize, f64) {
        let g = self.grid_size;
        let q = (p / g).min(nodes - 2);
        let local = ((p - q * g) as f64 / g as f64).min(1.0);
        (q, local)
    }

    /// Bilinearly interpolated displacement at pixel `(x, y)`.
    pub fn displacement_at(&self, x: usize, y: usize) -> (f64, f64) {
        let (qx, u) = self.locate(x, self.cols);
        let (qy, v) = self.locate(y, self.rows);
        let v00 = self.get(qx, qy);
        let v10 = self.get(qx + 1, qy);
        let v01 = self.get(qx, qy + 1);
        let v11 = self.get(qx + 1, qy + 1);
        let blend = |a: i32, b: i32, c: i32, d: i32| {
            (1.0 - v) * ((1.0 - u) * a as f64 + u * b as f64) + v * ((1.0 - u) * c as f64 + u * d as f64)
        };
        (
            blend(v00.dx, v10.dx, v01.dx, v11.dx),
            blend(v00.dy, v10.dy, v01.dy, v11.dy),
        )
    }

    /// Pixel range (half-open) covered by quad `q` along an axis of length
    /// `len`.
    fn quad_span(&self, q: usize, nodes: usize, len: usize) -> (usize, usize) {
        let start = q * self.grid_size;
        let end = if q == nodes - 2 {
            len
        } else {
            (q + 1) * self.grid_size
        };
        (start, end.min(len))
    }

    fn check_frame(&self, width: usize, height: usize) -> Result<()> {
        if Self::lattice_dims(width, height, self.grid_size) != (self.cols, self.rows) {
            return Err(Error::DimensionMismatch {
                left: (width, height),
                right: ((self.cols - 1) * self.grid_size, (self.rows - 1) * self.grid_size),
            });
        }
        Ok(())
    }
}

/// Interpolates the grid-point vectors to every pixel: pixel `p` is
/// compensated to `p + d(p)`, with `d` bilinear inside each quad.
pub fn upsample_grid(mvf: &MeshMvf, width: usize, height: usize) -> Result<DensePositionField> {
    mvf.check_frame(width, height)?;
    let mut positions = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let (dx, dy) = mvf.displacement_at(x, y);
            positions.push([x as f64 + dx, y as f64 + dy]);
        }
    }
    DensePositionField::from_subpixel(width, height, positions)
}

fn warped_ssd(ref_frame: &Frame, cur: &Frame, mvf: &MeshMvf, xs: (usize, usize), ys: (usize, usize)) -> f64 {
    let (w, h) = cur.dims();
    let samples = ref_frame.samples();
    let mut ssd = 0.0;
    for y in ys.0..ys.1 {
        for x in xs.0..xs.1 {
            let (dx, dy) = mvf.displacement_at(x, y);
            let pred = sample_bilinear(w, h, |i| f64::from(samples[i]), x as f64 + dx, y as f64 + dy);
            let d = f64::from(cur.get(x, y)) - pred;
            ssd += d * d;
        }
    }
    ssd
}

/// SSD between `cur` and `ref_frame` warped by the mesh, over the whole frame.
pub fn mesh_ssd(ref_frame: &Frame, cur: &Frame, mvf: &MeshMvf) -> f64 {
    let (w, h) = cur.dims();
    warped_ssd(ref_frame, cur, mvf, (0, w), (0, h))
}

/// SSD over the quads incident to one grid point, i.e. every pixel whose
/// displacement depends on it.
fn local_ssd(ref_frame: &Frame, cur: &Frame, mvf: &MeshMvf, gx: usize, gy: usize) -> f64 {
    let (w, h) = cur.dims();
    mvf.incident_quads(gx, gy)
        .map(|(qx, qy)| {
            let xs = mvf.quad_span(qx, mvf.cols, w);
            let ys = mvf.quad_span(qy, mvf.rows, h);
            warped_ssd(ref_frame, cur, mvf, xs, ys)
        })
        .sum()
}

/// Block-matching initialisation: a `2g x 2g` block (the incident quads)
/// centred on each grid point, accepted in raster order only where the mesh
/// stays valid.
fn initial_mesh(ref_frame: &Frame, cur: &Frame, grid_size: usize, search_range: u8) -> Result<MeshMvf> {
    let (w, h) = cur.dims();
    let mut mvf = MeshMvf::zero(w, h, grid_size, search_range)?;
    let (bw, bh) = ((2 * grid_size).min(w), (2 * grid_size).min(h));
    for gy in 0..mvf.rows {
        for gx in 0..mvf.cols {
            let x0 = (gx * grid_size).saturating_sub(grid_size).min(w - bw);
            let y0 = (gy * grid_size).saturating_sub(grid_size).min(h - bh);
            let v = best_block_vector(ref_frame, cur, x0, y0, bw, bh, search_range);
            mvf.set(gx, gy, v);
            if !mvf.incident_quads_valid(gx, gy) {
                mvf.set(gx, gy, MotionVector::ZERO);
            }
        }
    }
    Ok(mvf)
}

/// One raster sweep of local refinement. Returns whether any vector moved.
fn refine_pass(ref_frame: &Frame, cur: &Frame, mvf: &mut MeshMvf) -> bool {
    let mut moved = false;
    let max_steps = 2 * usize::from(mvf.search_range) + 1;
    for gy in 0..mvf.rows {
        for gx in 0..mvf.cols {
            let mut current = mvf.get(gx, gy);
            let mut current_cost = local_ssd(ref_frame, cur, mvf, gx, gy);
            for _ in 0..max_steps {
                let mut best: Option<(f64, MotionVector)> = None;
                for off in REFINE_OFFSETS {
                    let cand = MotionVector::new(current.dx + off.dx, current.dy + off.dy);
                    if !cand.within(mvf.search_range) {
                        continue;
                    }
                    mvf.set(gx, gy, cand);
                    if mvf.incident_quads_valid(gx, gy) {
                        let cost = local_ssd(ref_frame, cur, mvf, gx, gy);
                        if best.is_none_or(|(c, _)| cost < c) {
                            best = Some((cost, cand));
                        }
                    }
                }
                match best {
                    Some((cost, cand)) if cost < current_cost => {
                        current = cand;
                        current_cost = cost;
                        moved = true;
                    }
                    _ => break,
                }
            }
            mvf.set(gx, gy, current);
        }
    }
    moved
}

/// Estimates a mesh motion field warping `ref_frame` onto `cur`.
///
/// Grid points start from block matching, then `passes` raster sweeps move
/// each point by one pixel at a time while the SSD over its incident quads
/// strictly decreases and the quads stay valid.
pub fn estimate_mesh_mvf(
    ref_frame: &Frame,
    cur: &Frame,
    grid_size: usize,
    search_range: u8,
    passes: usize,
) -> Result<MeshMvf> {
    ref_frame.ensure_same_dims(cur.dims())?;
    let (w, h) = cur.dims();
    if grid_size < 2 {
        return Err(Error::InvalidParameter("grid size must be >= 2"));
    }
    if passes == 0 {
        return Err(Error::InvalidParameter("mesh refinement needs at least one pass"));
    }
    if grid_size > w || grid_size > h {
        return Err(Error::CellTooLarge {
            cell: grid_size,
            width: w,
            height: h,
        });
    }
    let mut mvf = initial_mesh(ref_frame, cur, grid_size, search_range)?;
    for _ in 0..passes {
        if !refine_pass(ref_frame, cur, &mut mvf) {
            break;
        }
    }
    Ok(mvf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smooth(w: usize, h: usize) -> Frame {
        Frame::from_fn(w, h, 12, |x, y| {
            let (fx, fy) = (x as f64, y as f64);
            (2000.0 + 900.0 * libm::sin(fx / 4.0) * libm::cos(fy / 5.0) + 10.0 * fx) as i32
        })
        .unwrap()
    }

    #[test]
    fn lattice_dims_follow_floor_plus_one() {
        assert_eq!(MeshMvf::lattice_dims(128, 128, 8), (17, 17));
        assert_eq!(MeshMvf::lattice_dims(20, 9, 8), (3, 2));
    }

    #[test]
    fn zero_mvf_upsamples_to_identity() {
        let mvf = MeshMvf::zero(20, 12, 8, 8).unwrap();
        assert_eq!(
            upsample_grid(&mvf, 20, 12).unwrap(),
            DensePositionField::identity(20, 12).unwrap()
        );
    }

    #[test]
    fn constant_mesh_shifts_every_pixel() {
        let mut mvf = MeshMvf::zero(16, 16, 8, 8).unwrap();
        for v in &mut mvf.vectors {
            *v = MotionVector::new(1, 0);
        }
        let field = upsample_grid(&mvf, 16, 16).unwrap();
        for y in 0..16 {
            for x in 0..16 {
                assert_eq!(field.rounded()[y * 16 + x], [(x as i32 + 1).min(15), y as i32]);
            }
        }
    }

    #[test]
    fn single_grid_point_contributes_a_quarter_at_quad_centre() {
        let mut mvf = MeshMvf::zero(16, 16, 8, 8).unwrap();
        mvf.set(1, 1, MotionVector::new(4, -8));
        let field = upsample_grid(&mvf, 16, 16).unwrap();
        // pixel (4, 4) is the centre of quad (0, 0), whose corner (1, 1) moved
        assert_eq!(field.subpixel()[4 * 16 + 4], [5.0, 2.0]);
        // pixel (12, 12) is the centre of quad (1, 1), corner (1, 1) is its top-left
        assert_eq!(field.subpixel()[12 * 16 + 12], [13.0, 10.0]);
        assert_eq!(field.subpixel()[8 * 16 + 8], [12.0, 0.0]);
    }

    #[test]
    fn quad_validity() {
        let mut mvf = MeshMvf::zero(16, 16, 8, 8).unwrap();
        assert!(mvf.is_valid());
        assert_eq!(mvf.quad_area(0, 0), 64.0);
        // fold the top-right corner past the top-left one
        mvf.set(1, 0, MotionVector::new(-8, 0));
        assert!(!mvf.quad_is_valid(0, 0));
        assert!(!mvf.is_valid());
    }

    #[test]
    fn identical_frames_give_zero_mesh() {
        let f = smooth(32, 24);
        let mvf = estimate_mesh_mvf(&f, &f, 8, 8, 3).unwrap();
        assert!(mvf.vectors().iter().all(|&v| v == MotionVector::ZERO));
        let flat = Frame::filled(16, 16, 100, 12).unwrap();
        let mvf = estimate_mesh_mvf(&flat, &flat, 4, 8, 2).unwrap();
        assert!(mvf.vectors().iter().all(|&v| v == MotionVector::ZERO));
    }

    #[test]
    fn translation_is_recovered() {
        let r = smooth(48, 48);
        let cur = Frame::from_fn(48, 48, 12, |x, y| r.get_clamped(x as isize - 2, y as isize + 1)).unwrap();
        let mvf = estimate_mesh_mvf(&r, &cur, 8, 8, 4).unwrap();
        assert!(mvf.is_valid());
        for gy in 1..mvf.rows() - 1 {
            for gx in 1..mvf.cols() - 1 {
                assert_eq!(mvf.get(gx, gy), MotionVector::new(-2, 1));
            }
        }
    }

    #[test]
    fn refinement_never_increases_total_ssd() {
        let r = smooth(40, 40);
        let cur = Frame::from_fn(40, 40, 12, |x, y| {
            let s = 1.0 + 0.06;
            let (cx, cy) = (20.0, 20.0);
            let px = cx + (x as f64 - cx) * s;
            let py = cy + (y as f64 - cy) * s;
            r.get_clamped(libm::round(px) as isize, libm::round(py) as isize)
        })
        .unwrap();
        let mut last = f64::INFINITY;
        for passes in 1..=5 {
            let mvf = estimate_mesh_mvf(&r, &cur, 8, 4, passes).unwrap();
            assert!(mvf.is_valid());
            let ssd = mesh_ssd(&r, &cur, &mvf);
            assert!(ssd <= last, "pass {passes}: {ssd} > {last}");
            last = ssd;
        }
    }

    #[test]
    fn errors() {
        let f = smooth(8, 8);
        assert!(matches!(estimate_mesh_mvf(&f, &f, 9, 2, 1), Err(Error::CellTooLarge { .. })));
        assert!(estimate_mesh_mvf(&f, &f, 1, 2, 1).is_err());
        assert!(estimate_mesh_mvf(&f, &f, 4, 2, 0).is_err());
        let mvf = MeshMvf::zero(16, 16, 8, 2).unwrap();
        assert!(upsample_grid(&mvf, 24, 16).is_err());
    }
}
