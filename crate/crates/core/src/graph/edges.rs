use alloc::vec::Vec;

use crate::mc::ring;
use crate::motion::DensePositionField;
use crate::{Error, Result};

/// Which coordinates feed the edge lengths. Neighbour selection always uses
/// the rounded positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DistanceMode {
    /// Lengths from the unrounded compensated positions.
    #[default]
    Subpixel,
    /// Lengths from the rounded, clamped positions.
    Rounded,
}

/// Link between even-frame node `even` and odd-frame node `odd`, with the
/// three lengths the edge weight is computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeTriplet {
    pub even: usize,
    pub odd: usize,
    /// Inter-frame length: even node to the compensated odd node.
    pub inter: f64,
    /// Intra-frame length on the regular grid: odd node to the odd node
    /// co-located with `even`.
    pub regular: f64,
    /// The same intra-frame edge measured on the compensated grid.
    pub compensated: f64,
}

/// Edge weight favouring contracted intra-frame edges:
///
/// `w = exp(-(inter^2 + e^2) / 2) * exp(|inter - compensated|)` with
/// `e = compensated` if `compensated < regular`, otherwise `e = inter`.
pub fn weight_edge(t: &EdgeTriplet) -> f64 {
    let e = if t.compensated < t.regular {
        t.compensated
    } else {
        t.inter
    };
    libm::exp(-0.5 * (t.inter * t.inter + e * e)) * libm::exp(libm::fabs(t.inter - t.compensated))
}

/// Odd nodes bucketed by their rounded compensated position.
struct Buckets {
    width: usize,
    start: Vec<usize>,
    nodes: Vec<usize>,
}

impl Buckets {
    fn new(field: &DensePositionField) -> Self {
        let (w, h) = field.dims();
        let cell = |&[x, y]: &[i32; 2]| y as usize * w + x as usize;
        let mut start = alloc::vec![0usize; w * h + 1];
        for p in field.rounded() {
            start[cell(p) + 1] += 1;
        }
        for c in 0..w * h {
            start[c + 1] += start[c];
        }
        let mut next = start.clone();
        let mut nodes = alloc::vec![0usize; field.len()];
        for (j, p) in field.rounded().iter().enumerate() {
            let c = cell(p);
            nodes[next[c]] = j;
            next[c] += 1;
        }
        Buckets { width: w, start, nodes }
    }

    fn at(&self, x: usize, y: usize) -> &[usize] {
        let c = y * self.width + x;
        &self.nodes[self.start[c]..self.start[c + 1]]
    }
}

/// The `k` odd nodes whose rounded positions are nearest to pixel
/// `(cx, cy)`, as `(squared distance, node)` sorted ascending.
fn nearest_odd_nodes(
    buckets: &Buckets,
    field: &DensePositionField,
    cx: isize,
    cy: isize,
    k: usize,
    scratch: &mut Vec<(i64, usize)>,
) {
    let (w, h) = (field.width() as isize, field.height() as isize);
    scratch.clear();
    let push_cell = |x: isize, y: isize, scratch: &mut Vec<(i64, usize)>| {
        if x < 0 || y < 0 || x >= w || y >= h {
            return;
        }
        let d2 = ((x - cx).pow(2) + (y - cy).pow(2)) as i64;
        scratch.extend(buckets.at(x as usize, y as usize).iter().map(|&j| (d2, j)));
    };
    push_cell(cx, cy, scratch);
    let max_r = w.max(h);
    for r in 1..=max_r {
        for (x, y) in ring(cx, cy, r) {
            push_cell(x, y, scratch);
        }
        if scratch.len() >= k {
            scratch.sort_unstable();
            // nothing outside ring r is closer than (r + 1)^2
            let bound = ((r + 1) * (r + 1)) as i64;
            if scratch[k - 1].0 < bound {
                break;
            }
        }
    }
    scratch.sort_unstable();
    scratch.truncate(k);
}

/// Connects every even-frame pixel to the `k` odd-frame nodes whose rounded
/// compensated positions are nearest (ties to the smaller node id).
///
/// `field` holds the compensated position of each odd-frame node. Edges are
/// grouped by even node in raster order, each group nearest first.
pub fn build_edges(field: &DensePositionField, k: usize, mode: DistanceMode) -> Result<Vec<EdgeTriplet>> {
    let n = field.len();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1"));
    }
    if k > n {
        return Err(Error::TooManyNeighbours { k, nodes: n });
    }
    let w = field.width();
    let position = |j: usize| -> [f64; 2] {
        match mode {
            DistanceMode::Subpixel => field.subpixel()[j],
            DistanceMode::Rounded => {
                let [x, y] = field.rounded()[j];
                [x as f64, y as f64]
            }
        }
    };
    let dist = |a: [f64; 2], b: [f64; 2]| libm::hypot(a[0] - b[0], a[1] - b[1]);
    let regular = |j: usize| [(j % w) as f64, (j / w) as f64];

    let buckets = Buckets::new(field);
    let mut scratch = Vec::new();
    let mut edges = Vec::with_capacity(n * k);
    for i in 0..n {
        let p_i = regular(i);
        nearest_odd_nodes(&buckets, field, (i % w) as isize, (i / w) as isize, k, &mut scratch);
        let anchor = position(i);
        for &(_, j) in scratch.iter() {
            let c_j = position(j);
            edges.push(EdgeTriplet {
                even: i,
                odd: j,
                inter: dist(p_i, c_j),
                regular: dist(regular(j), p_i),
                compensated: dist(c_j, anchor),
            });
        }
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triplet(inter: f64, regular: f64, compensated: f64) -> EdgeTriplet {
        EdgeTriplet {
            even: 0,
            odd: 0,
            inter,
            regular,
            compensated,
        }
    }

    #[test]
    fn weight_examples() {
        assert!((weight_edge(&triplet(0.0, 1.0, 1.0)) - core::f64::consts::E).abs() < 1e-12);
        // e = 0.5: exp(-0.5 * (1 + 0.25)) * exp(0.5)
        let w = weight_edge(&triplet(1.0, 1.0, 0.5));
        assert!((w - 0.882_496_902_584_595).abs() < 1e-12, "{w}");
        assert_eq!(weight_edge(&triplet(0.0, 0.0, 0.0)), 1.0);
    }

    #[test]
    fn identity_field_links_the_5x5_neighbourhood() {
        let field = DensePositionField::identity(9, 9).unwrap();
        let edges = build_edges(&field, 25, DistanceMode::Subpixel).unwrap();
        assert_eq!(edges.len(), 81 * 25);
        let centre = 4 * 9 + 4;
        let mut odd: Vec<_> = edges.iter().filter(|e| e.even == centre).map(|e| e.odd).collect();
        odd.sort_unstable();
        let expected: Vec<_> = (2..7).flat_map(|y| (2..7).map(move |x| y * 9 + x)).collect();
        assert_eq!(odd, expected);
        for e in edges.iter().filter(|e| e.even == centre) {
            assert_eq!(e.inter, e.regular);
            assert_eq!(e.inter, e.compensated);
        }
        let own = edges.iter().find(|e| e.even == centre && e.odd == centre).unwrap();
        assert_eq!((own.inter, own.regular, own.compensated), (0.0, 0.0, 0.0));
    }

    #[test]
    fn identity_field_with_k1_pairs_each_node_with_itself() {
        let field = DensePositionField::identity(5, 3).unwrap();
        let edges = build_edges(&field, 1, DistanceMode::Subpixel).unwrap();
        assert!(edges.iter().all(|e| e.even == e.odd));
    }

    #[test]
    fn multiply_referenced_cells_keep_all_candidates() {
        // every node rounds onto pixel (1, 1)
        let field = DensePositionField::from_subpixel(3, 3, alloc::vec![[1.2, 0.9]; 9]).unwrap();
        let edges = build_edges(&field, 4, DistanceMode::Subpixel).unwrap();
        let from_zero: Vec<_> = edges.iter().filter(|e| e.even == 0).map(|e| e.odd).collect();
        assert_eq!(from_zero, alloc::vec![0, 1, 2, 3]);
    }

    #[test]
    fn argument_errors() {
        let field = DensePositionField::identity(2, 2).unwrap();
        assert!(matches!(
            build_edges(&field, 5, DistanceMode::Subpixel),
            Err(Error::TooManyNeighbours { k: 5, nodes: 4 })
        ));
        assert!(build_edges(&field, 0, DistanceMode::Subpixel).is_err());
    }
}
