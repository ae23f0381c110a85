//! One level of integer Haar lifting along the frame axis.
//!
//! For a pair `(odd, even)` with compensation `W` and inverse `U`:
//!
//! ```text
//! HP = even - floor(W(odd))
//! LP = odd  + floor(U(HP) / 2)
//! ```
//!
//! Both floors act on the full compensated term, so the inverse reproduces
//! the inputs exactly whatever `W` and `U` are, as long as they are the same
//! deterministic operators on both sides.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::frame::{Frame, RealFrame, Volume};
use crate::graph::{
    build_edges, build_prediction_matrix, normalized_update, update_from_prediction, weighted_adjacency,
    SparseMatrix,
};
use crate::mc::{inverse_warp_block, inverse_warp_mesh, warp, warp_real};
use crate::motion::{
    block_to_dense, estimate_block_mvf, estimate_mesh_mvf, upsample_grid, BlockMvf, DensePositionField, MeshMvf,
};
use crate::{Error, Result};

pub use crate::graph::DistanceMode;

/// Compensation method of a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    None,
    Block,
    Mesh,
    Graph,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::None, Method::Block, Method::Mesh, Method::Graph];

    pub fn name(self) -> &'static str {
        match self {
            Method::None => "none",
            Method::Block => "block",
            Method::Mesh => "mesh",
            Method::Graph => "graph",
        }
    }

    pub fn has_motion(self) -> bool {
        self != Method::None
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or(Error::InvalidParameter("method must be one of none, block, mesh, graph"))
    }
}

/// How the graph update matrix is derived from the prediction graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum UpdateVariant {
    /// `K_U = J_P^T`.
    #[default]
    Transpose,
    /// `K_U = D_K^-1 K` with `K` the transposed raw adjacency.
    Eq5,
}

impl UpdateVariant {
    pub fn name(self) -> &'static str {
        match self {
            UpdateVariant::Transpose => "transpose",
            UpdateVariant::Eq5 => "eq5",
        }
    }
}

impl FromStr for UpdateVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transpose" => Ok(UpdateVariant::Transpose),
            "eq5" => Ok(UpdateVariant::Eq5),
            _ => Err(Error::InvalidParameter("update variant must be transpose or eq5")),
        }
    }
}

impl DistanceMode {
    pub fn name(self) -> &'static str {
        match self {
            DistanceMode::Subpixel => "subpixel",
            DistanceMode::Rounded => "rounded",
        }
    }
}

impl FromStr for DistanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subpixel" => Ok(DistanceMode::Subpixel),
            "rounded" => Ok(DistanceMode::Rounded),
            _ => Err(Error::InvalidParameter("distances must be subpixel or rounded")),
        }
    }
}

/// Decomposition parameters. Defaults: 8 pixel grid and blocks, search
/// range 8, 25 neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    pub method: Method,
    pub grid_size: usize,
    pub block_size: usize,
    pub search_range: u8,
    pub knn: usize,
    pub mesh_passes: usize,
    pub update: UpdateVariant,
    pub distances: DistanceMode,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            method: Method::Graph,
            grid_size: 8,
            block_size: 8,
            search_range: 8,
            knn: 25,
            mesh_passes: 4,
            update: UpdateVariant::Transpose,
            distances: DistanceMode::Subpixel,
        }
    }
}

impl Params {
    pub fn with_method(self, method: Method) -> Self {
        Params { method, ..self }
    }
}

/// Motion side information of one frame pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PairMotion {
    None,
    Block(BlockMvf),
    Mesh(MeshMvf),
}

/// A configured predictor / updater pair.
#[derive(Debug, Clone, PartialEq)]
pub enum Compensation {
    Identity,
    Block {
        mvf: BlockMvf,
        field: DensePositionField,
    },
    Mesh {
        mvf: MeshMvf,
        field: DensePositionField,
    },
    Graph {
        prediction: SparseMatrix,
        update: SparseMatrix,
    },
}

/// Compensated position of every odd-frame node: the odd grid deformed onto
/// the even frame. Mesh vectors map even positions into the odd frame, so
/// the odd grid moves by the negated field.
pub fn deformed_odd_grid(mvf: &MeshMvf, width: usize, height: usize) -> Result<DensePositionField> {
    upsample_grid(&mvf.negated(), width, height)
}

impl Compensation {
    pub fn block(mvf: BlockMvf, width: usize, height: usize) -> Result<Self> {
        let field = block_to_dense(&mvf, width, height)?;
        Ok(Compensation::Block { mvf, field })
    }

    pub fn mesh(mvf: MeshMvf, width: usize, height: usize) -> Result<Self> {
        let field = upsample_grid(&mvf, width, height)?;
        Ok(Compensation::Mesh { mvf, field })
    }

    /// Edge-adaptive graph compensation derived from a mesh motion field.
    pub fn graph(mvf: &MeshMvf, width: usize, height: usize, params: &Params) -> Result<Self> {
        let field = deformed_odd_grid(mvf, width, height)?;
        let edges = build_edges(&field, params.knn, params.distances)?;
        let n = width * height;
        let (prediction, update) = match params.update {
            UpdateVariant::Transpose => {
                let jp = build_prediction_matrix(&edges, n, n)?;
                let ku = update_from_prediction(&jp);
                (jp, ku)
            }
            UpdateVariant::Eq5 => {
                let adj = weighted_adjacency(&edges, n, n)?;
                (crate::graph::transition_matrix(&adj)?, normalized_update(&adj)?)
            }
        };
        Ok(Compensation::Graph { prediction, update })
    }

    /// Graph compensation from explicit matrices; both must be square over
    /// the same node count.
    pub fn from_matrices(prediction: SparseMatrix, update: SparseMatrix) -> Result<Self> {
        let n = prediction.n_rows();
        for m in [&prediction, &update] {
            if m.n_rows() != n || m.n_cols() != n {
                return Err(Error::DimensionMismatch {
                    left: (n, n),
                    right: (m.n_rows(), m.n_cols()),
                });
            }
        }
        Ok(Compensation::Graph { prediction, update })
    }

    /// Rebuilds the compensation of a pair from its stored motion.
    pub fn for_motion(motion: &PairMotion, width: usize, height: usize, params: &Params) -> Result<Self> {
        match (params.method, motion) {
            (Method::None, PairMotion::None) => Ok(Compensation::Identity),
            (Method::Block, PairMotion::Block(mvf)) => Self::block(mvf.clone(), width, height),
            (Method::Mesh, PairMotion::Mesh(mvf)) => Self::mesh(mvf.clone(), width, height),
            (Method::Graph, PairMotion::Mesh(mvf)) => Self::graph(mvf, width, height, params),
            (m, got) => Err(Error::MethodMismatch {
                expected: m.name(),
                got: match got {
                    PairMotion::None => "none",
                    PairMotion::Block(_) => "block",
                    PairMotion::Mesh(_) => "mesh",
                },
            }),
        }
    }

    pub fn method(&self) -> Method {
        match self {
            Compensation::Identity => Method::None,
            Compensation::Block { .. } => Method::Block,
            Compensation::Mesh { .. } => Method::Mesh,
            Compensation::Graph { .. } => Method::Graph,
        }
    }

    /// Compensated prediction of the even frame from the odd frame, before
    /// flooring.
    pub fn predict(&self, odd: &Frame) -> Result<Vec<f64>> {
        match self {
            Compensation::Identity => Ok(RealFrame::from(odd).values),
            Compensation::Block { field, .. } | Compensation::Mesh { field, .. } => Ok(warp(odd, field)?.values),
            Compensation::Graph { prediction, .. } => prediction.mul_vec_stochastic(&RealFrame::from(odd).values),
        }
    }

    /// Highpass mapped back onto the odd frame, before halving and flooring.
    pub fn update(&self, hp: &Frame) -> Result<Vec<f64>> {
        match self {
            Compensation::Identity => Ok(RealFrame::from(hp).values),
            Compensation::Block { mvf, .. } => Ok(RealFrame::from(&inverse_warp_block(hp, mvf)?).values),
            Compensation::Mesh { mvf, .. } => Ok(inverse_warp_mesh(hp, mvf)?.values),
            Compensation::Graph { update, .. } => update.mul_vec(&RealFrame::from(hp).values),
        }
    }
}

/// Real-valued warp of a real plane, used by the identity-reduction checks.
#[doc(hidden)]
pub fn warp_plane(plane: &RealFrame, field: &DensePositionField) -> Result<RealFrame> {
    warp_real(plane, field)
}

#[inline]
fn floor_i32(x: f64) -> i32 {
    libm::floor(x) as i32
}

fn check_len(values: &[f64], n: usize) -> Result<()> {
    if values.len() != n {
        return Err(Error::SampleCount {
            expected: n,
            got: values.len(),
        });
    }
    Ok(())
}

/// Lowpass and highpass of one pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubbandPair {
    pub lp: Frame,
    pub hp: Frame,
    pub method: Method,
}

/// Forward lifting step of one `(odd, even)` pair.
pub fn haar_lift(odd: &Frame, even: &Frame, comp: &Compensation) -> Result<SubbandPair> {
    odd.ensure_same_dims(even.dims())?;
    let (w, h) = odd.dims();
    let predicted = comp.predict(odd)?;
    check_len(&predicted, w * h)?;
    let hp_samples = even
        .samples()
        .iter()
        .zip(&predicted)
        .map(|(&e, &p)| e - floor_i32(p))
        .collect();
    let hp = Frame::new(w, h, hp_samples, even.bit_depth())?;
    let updated = comp.update(&hp)?;
    check_len(&updated, w * h)?;
    let lp_samples = odd
        .samples()
        .iter()
        .zip(&updated)
        .map(|(&o, &u)| o + floor_i32(0.5 * u))
        .collect();
    let lp = Frame::new(w, h, lp_samples, odd.bit_depth())?;
    Ok(SubbandPair {
        lp,
        hp,
        method: comp.method(),
    })
}

/// Inverse lifting step; returns `(odd, even)`.
pub fn haar_unlift(sb: &SubbandPair, comp: &Compensation) -> Result<(Frame, Frame)> {
    if comp.method() != sb.method {
        return Err(Error::MethodMismatch {
            expected: sb.method.name(),
            got: comp.method().name(),
        });
    }
    sb.lp.ensure_same_dims(sb.hp.dims())?;
    let (w, h) = sb.lp.dims();
    let updated = comp.update(&sb.hp)?;
    check_len(&updated, w * h)?;
    let odd_samples = sb
        .lp
        .samples()
        .iter()
        .zip(&updated)
        .map(|(&l, &u)| l - floor_i32(0.5 * u))
        .collect();
    let odd = Frame::new(w, h, odd_samples, sb.lp.bit_depth())?;
    let predicted = comp.predict(&odd)?;
    check_len(&predicted, w * h)?;
    let even_samples = sb
        .hp
        .samples()
        .iter()
        .zip(&predicted)
        .map(|(&hp, &p)| hp + floor_i32(p))
        .collect();
    let even = Frame::new(w, h, even_samples, sb.hp.bit_depth())?;
    Ok((odd, even))
}

/// Frame samples as graph node values in row-major node order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeVector(pub Vec<i32>);

impl NodeVector {
    pub fn from_frame(frame: &Frame) -> Self {
        NodeVector(frame.samples().to_vec())
    }

    pub fn into_frame(self, width: usize, height: usize, bit_depth: u8) -> Result<Frame> {
        Frame::new(width, height, self.0, bit_depth)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn as_real(&self) -> Vec<f64> {
        self.0.iter().map(|&v| f64::from(v)).collect()
    }
}

fn check_graph_dims(n: usize, other: usize, jp: &SparseMatrix, ku: &SparseMatrix) -> Result<()> {
    if other != n {
        return Err(Error::SampleCount { expected: n, got: other });
    }
    for m in [jp, ku] {
        if (m.n_rows(), m.n_cols()) != (n, n) {
            return Err(Error::DimensionMismatch {
                left: (n, n),
                right: (m.n_rows(), m.n_cols()),
            });
        }
    }
    Ok(())
}

/// Graph Haar step: `H = X_even - floor(J_P X_odd)`,
/// `L = X_odd + floor(K_U H / 2)`. `J_P` must be row-stochastic, see
/// [`SparseMatrix::mul_vec_stochastic`].
pub fn graph_lift(
    x_even: &NodeVector,
    x_odd: &NodeVector,
    jp: &SparseMatrix,
    ku: &SparseMatrix,
) -> Result<(NodeVector, NodeVector)> {
    check_graph_dims(x_even.len(), x_odd.len(), jp, ku)?;
    let predicted = jp.mul_vec_stochastic(&x_odd.as_real())?;
    let high = NodeVector(
        x_even
            .0
            .iter()
            .zip(&predicted)
            .map(|(&e, &p)| e - floor_i32(p))
            .collect(),
    );
    let updated = ku.mul_vec(&high.as_real())?;
    let low = NodeVector(
        x_odd
            .0
            .iter()
            .zip(&updated)
            .map(|(&o, &u)| o + floor_i32(0.5 * u))
            .collect(),
    );
    Ok((high, low))
}

/// Inverse of [`graph_lift`]; returns `(X_even, X_odd)`.
pub fn graph_unlift(
    high: &NodeVector,
    low: &NodeVector,
    jp: &SparseMatrix,
    ku: &SparseMatrix,
) -> Result<(NodeVector, NodeVector)> {
    check_graph_dims(high.len(), low.len(), jp, ku)?;
    let updated = ku.mul_vec(&high.as_real())?;
    let odd = NodeVector(
        low.0
            .iter()
            .zip(&updated)
            .map(|(&l, &u)| l - floor_i32(0.5 * u))
            .collect(),
    );
    let predicted = jp.mul_vec_stochastic(&odd.as_real())?;
    let even = NodeVector(
        high.0
            .iter()
            .zip(&predicted)
            .map(|(&hv, &p)| hv + floor_i32(p))
            .collect(),
    );
    Ok((even, odd))
}

/// Estimates the motion of one pair for `params.method`. The mesh and graph
/// methods share the same estimator and therefore the same field.
pub fn estimate_motion(odd: &Frame, even: &Frame, params: &Params) -> Result<PairMotion> {
    match params.method {
        Method::None => Ok(PairMotion::None),
        Method::Block => Ok(PairMotion::Block(estimate_block_mvf(
            odd,
            even,
            params.block_size,
            params.search_range,
        )?)),
        Method::Mesh | Method::Graph => Ok(PairMotion::Mesh(estimate_mesh_mvf(
            odd,
            even,
            params.grid_size,
            params.search_range,
            params.mesh_passes,
        )?)),
    }
}

/// Estimates motion and lifts one pair.
pub fn decompose_pair(odd: &Frame, even: &Frame, params: &Params) -> Result<(SubbandPair, PairMotion)> {
    let motion = estimate_motion(odd, even, params)?;
    let comp = Compensation::for_motion(&motion, odd.width(), odd.height(), params)?;
    Ok((haar_lift(odd, even, &comp)?, motion))
}

/// Reconstructs `(odd, even)` from a pair's subbands and motion.
pub fn compose_pair(sb: &SubbandPair, motion: &PairMotion, params: &Params) -> Result<(Frame, Frame)> {
    let comp = Compensation::for_motion(motion, sb.lp.width(), sb.lp.height(), params)?;
    haar_unlift(sb, &comp)
}

/// Result of one temporal decomposition of a volume.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub method: Method,
    pub lp: Volume,
    pub hp: Volume,
    pub motion: Vec<PairMotion>,
}

impl Decomposition {
    pub fn pair(&self, k: usize) -> SubbandPair {
        SubbandPair {
            lp: self.lp.frames()[k].clone(),
            hp: self.hp.frames()[k].clone(),
            method: self.method,
        }
    }
}

/// Decomposes every `(2t, 2t + 1)` frame pair of a volume.
pub fn decompose_volume(volume: &Volume, params: &Params) -> Result<Decomposition> {
    volume.ensure_pairable()?;
    let mut lp = Vec::with_capacity(volume.len() / 2);
    let mut hp = Vec::with_capacity(volume.len() / 2);
    let mut motion = Vec::with_capacity(volume.len() / 2);
    for (odd, even) in volume.pairs() {
        let (sb, m) = decompose_pair(odd, even, params)?;
        lp.push(sb.lp);
        hp.push(sb.hp);
        motion.push(m);
    }
    Ok(Decomposition {
        method: params.method,
        lp: Volume::new(lp, volume.axis())?,
        hp: Volume::new(hp, volume.axis())?,
        motion,
    })
}

/// Inverse of [`decompose_volume`].
pub fn compose_volume(dec: &Decomposition, params: &Params) -> Result<Volume> {
    let n = dec.lp.len();
    if dec.hp.len() != n || dec.motion.len() != n {
        return Err(Error::MotionCount {
            expected: n,
            got: dec.motion.len().min(dec.hp.len()),
        });
    }
    if params.method != dec.method {
        return Err(Error::MethodMismatch {
            expected: dec.method.name(),
            got: params.method.name(),
        });
    }
    let mut frames = Vec::with_capacity(2 * n);
    for (k, motion) in dec.motion.iter().enumerate() {
        let (odd, even) = compose_pair(&dec.pair(k), motion, params)?;
        frames.push(odd);
        frames.push(even);
    }
    Volume::new(frames, dec.lp.axis())
}
