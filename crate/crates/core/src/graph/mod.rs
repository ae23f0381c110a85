//! Graph construction for the edge-adaptive transform: nearest-neighbour
//! links between an even frame and the compensated grid of its odd frame,
//! geometric edge weights, and random-walk normalisation.

mod edges;
mod sparse;

use alloc::vec::Vec;

pub use edges::{build_edges, weight_edge, DistanceMode, EdgeTriplet};
pub use sparse::SparseMatrix;

use crate::Result;

/// Raw weighted even-to-odd adjacency `J`, one entry per edge.
pub fn weighted_adjacency(edges: &[EdgeTriplet], n_even: usize, n_odd: usize) -> Result<SparseMatrix> {
    let triplets: Vec<_> = edges.iter().map(|e| (e.even, e.odd, weight_edge(e))).collect();
    SparseMatrix::from_triplets(n_even, n_odd, triplets)
}

/// Row-normalises a non-negative adjacency (`D^-1 M`). Every row needs a
/// positive sum.
pub fn transition_matrix(adj: &SparseMatrix) -> Result<SparseMatrix> {
    adj.normalize_rows(false)
}

/// Prediction matrix `J_P = D_J^-1 J`. An even node without edges is an
/// error.
pub fn build_prediction_matrix(edges: &[EdgeTriplet], n_even: usize, n_odd: usize) -> Result<SparseMatrix> {
    transition_matrix(&weighted_adjacency(edges, n_even, n_odd)?)
}

/// Update matrix `K_U = J_P^T`, without renormalisation.
pub fn update_from_prediction(jp: &SparseMatrix) -> SparseMatrix {
    jp.transpose()
}

/// Row-normalised transpose of the raw adjacency (`D_K^-1 K` with
/// `K = J^T`). Odd nodes no even node links to keep an empty row.
pub fn normalized_update(adj: &SparseMatrix) -> Result<SparseMatrix> {
    adj.transpose().normalize_rows(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion::DensePositionField;
    use crate::Error;

    fn edge(even: usize, odd: usize, inter: f64) -> EdgeTriplet {
        EdgeTriplet {
            even,
            odd,
            inter,
            regular: inter,
            compensated: inter,
        }
    }

    #[test]
    fn singleton_rows_become_one() {
        let jp = build_prediction_matrix(&[edge(0, 1, 2.0), edge(1, 0, 0.3)], 2, 2).unwrap();
        assert_eq!(jp.get(0, 1), Some(1.0));
        assert_eq!(jp.get(1, 0), Some(1.0));
    }

    #[test]
    fn equal_weights_split_evenly() {
        let jp = build_prediction_matrix(&[edge(0, 0, 1.0), edge(0, 1, 1.0)], 1, 2).unwrap();
        assert_eq!(jp.row(0).collect::<Vec<_>>(), alloc::vec![(0, 0.5), (1, 0.5)]);
    }

    #[test]
    fn isolated_even_node_is_rejected() {
        assert_eq!(
            build_prediction_matrix(&[edge(0, 0, 1.0)], 2, 1),
            Err(Error::ZeroRow(1))
        );
    }

    #[test]
    fn transition_examples() {
        let m = SparseMatrix::from_triplets(1, 2, alloc::vec![(0, 0, 2.0), (0, 1, 2.0)]).unwrap();
        assert_eq!(
            transition_matrix(&m).unwrap().row(0).collect::<Vec<_>>(),
            alloc::vec![(0, 0.5), (1, 0.5)]
        );
        let stochastic =
            SparseMatrix::from_triplets(2, 2, alloc::vec![(0, 0, 0.25), (0, 1, 0.75), (1, 0, 1.0)]).unwrap();
        assert_eq!(transition_matrix(&stochastic).unwrap(), stochastic);
    }

    #[test]
    fn identity_field_k1_gives_identity_prediction() {
        let field = DensePositionField::identity(4, 4).unwrap();
        let edges = build_edges(&field, 1, DistanceMode::Subpixel).unwrap();
        let jp = build_prediction_matrix(&edges, 16, 16).unwrap();
        assert_eq!(jp, SparseMatrix::identity(16));
        assert_eq!(update_from_prediction(&jp), SparseMatrix::identity(16));
    }

    #[test]
    fn normalized_update_tolerates_unreferenced_nodes() {
        let adj = SparseMatrix::from_triplets(2, 3, alloc::vec![(0, 0, 1.0), (1, 0, 3.0)]).unwrap();
        let ku = normalized_update(&adj).unwrap();
        assert_eq!(ku.row(0).collect::<Vec<_>>(), alloc::vec![(0, 0.25), (1, 0.75)]);
        assert_eq!(ku.row(1).count(), 0);
    }
}
