//! Motion fields: block and quadrilateral-mesh estimation, and the dense
//! per-pixel position fields both are expanded into.
//!
//! Every field here is a backward map: a vector `v` stored for position `p`
//! of the current (even) frame means `cur(p) ~ ref(p + v)`.

mod block;
mod dense;
mod mesh;

pub use block::{block_ssd, estimate_block_mvf, BlockMvf};
pub use dense::{block_to_dense, DensePositionField};
pub use mesh::{estimate_mesh_mvf, mesh_ssd, upsample_grid, MeshMvf};

/// Largest search range representable by the one-byte vector components.
pub const MAX_SEARCH_RANGE: u8 = 127;

/// Integer pixel displacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct MotionVector {
    pub dx: i32,
    pub dy: i32,
}

impl MotionVector {
    pub const ZERO: MotionVector = MotionVector { dx: 0, dy: 0 };

    pub const fn new(dx: i32, dy: i32) -> Self {
        MotionVector { dx, dy }
    }

    pub fn l1(self) -> i32 {
        self.dx.abs() + self.dy.abs()
    }

    pub fn within(self, range: u8) -> bool {
        self.dx.abs() <= i32::from(range) && self.dy.abs() <= i32::from(range)
    }

    /// Key implementing the tie rule: smaller `|dx| + |dy|`, then smaller
    /// `dy`, then smaller `dx`.
    pub(crate) fn tie_key(self) -> (i32, i32, i32) {
        (self.l1(), self.dy, self.dx)
    }
}

impl core::ops::Neg for MotionVector {
    type Output = MotionVector;

    fn neg(self) -> MotionVector {
        MotionVector::new(-self.dx, -self.dy)
    }
}

/// All candidate vectors of a `[-range, range]^2` window.
pub(crate) fn search_window(range: u8) -> impl Iterator<Item = MotionVector> {
    let r = i32::from(range);
    (-r..=r).flat_map(move |dy| (-r..=r).map(move |dx| MotionVector::new(dx, dy)))
}
