//! Motion-compensated integer Haar lifting for image sequences.
//!
//! The crate provides one temporal decomposition step of a sequence of
//! integer frames, with four interchangeable compensation methods:
//!
//! - no compensation (plain integer Haar),
//! - block matching with nearest-neighbour concealment in the update step,
//! - a quadrilateral mesh with bilinear position interpolation,
//! - an edge-adaptive graph transform that reuses the mesh motion field as
//!   geometry: the lengths of the deformed grid edges weight a sparse
//!   prediction matrix whose transpose performs the update.
//!
//! Every method is lossless: the floors are taken on the full predicted or
//! updated term so the inverse recomputes exactly the same integers.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, reports and the
//! command-line driver live in the `edgelift` companion crate.
#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

mod error;
pub mod frame;
pub mod graph;
pub mod lifting;
pub mod mc;
pub mod metrics;
pub mod motion;
pub mod phantom;

pub use error::{Error, Result};
pub use frame::{Axis, Frame, RealFrame, Volume};
pub use graph::{EdgeTriplet, SparseMatrix};
pub use lifting::{
    Compensation, Decomposition, DistanceMode, Method, Params, PairMotion, SubbandPair,
    UpdateVariant,
};
pub use motion::{BlockMvf, DensePositionField, MeshMvf, MotionVector};
pub use phantom::{PhantomSpec, RadialMotion};
