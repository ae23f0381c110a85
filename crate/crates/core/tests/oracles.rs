//! Library results against independently written reference computations.

use edgelift_core::graph::{build_edges, weight_edge};
use edgelift_core::lifting::{graph_lift, graph_unlift, haar_lift, haar_unlift, NodeVector};
use edgelift_core::motion::estimate_block_mvf;
use edgelift_core::{Compensation, DensePositionField, DistanceMode, EdgeTriplet, Frame, SparseMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_frame(rng: &mut ChaCha8Rng, w: usize, h: usize, max: i32) -> Frame {
    let samples = (0..w * h).map(|_| rng.random_range(0..=max)).collect();
    Frame::new(w, h, samples, 12).unwrap()
}

/// Straight transcription of exhaustive block matching: every candidate in
/// the window, squared differences against the edge-replicated reference,
/// first the smallest SSD, then the shortest city-block vector, then the
/// smallest dy, then the smallest dx.
fn block_oracle(reference: &Frame, cur: &Frame, b: usize, range: i32) -> Vec<(i32, i32)> {
    let (w, h) = cur.dims();
    let at = |x: i64, y: i64| {
        let x = x.max(0).min(w as i64 - 1) as usize;
        let y = y.max(0).min(h as i64 - 1) as usize;
        reference.samples()[y * w + x] as i64
    };
    let mut out = Vec::new();
    let mut by = 0;
    while by < h {
        let mut bx = 0;
        while bx < w {
            let mut best: Option<(i64, i32, i32, i32, i32)> = None;
            for dy in -range..=range {
                for dx in -range..=range {
                    let mut ssd = 0i64;
                    for y in by..(by + b).min(h) {
                        for x in bx..(bx + b).min(w) {
                            let d = cur.samples()[y * w + x] as i64 - at(x as i64 + dx as i64, y as i64 + dy as i64);
                            ssd += d * d;
                        }
                    }
                    let cand = (ssd, dx.abs() + dy.abs(), dy, dx, 0);
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
            let (_, _, dy, dx, _) = best.unwrap();
            out.push((dx, dy));
            bx += b;
        }
        by += b;
    }
    out
}

#[test]
fn block_search_matches_exhaustive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..60 {
        // Few gray levels make SSD ties frequent, exercising the tie rule.
        let max = if case % 3 == 0 { 1 } else { 4095 };
        let reference = random_frame(&mut rng, 8, 8, max);
        let cur = if case % 2 == 0 {
            random_frame(&mut rng, 8, 8, max)
        } else {
            Frame::from_fn(8, 8, 12, |x, y| reference.get_clamped(x as isize - 1, y as isize + 2)).unwrap()
        };
        for b in [2, 3, 4, 8] {
            let mvf = estimate_block_mvf(&reference, &cur, b, 2).unwrap();
            let got: Vec<_> = mvf.vectors().iter().map(|v| (v.dx, v.dy)).collect();
            assert_eq!(got, block_oracle(&reference, &cur, b, 2), "case {case}, block {b}");
        }
    }
}

#[test]
fn block_search_constant_frames_pick_zero() {
    let f = Frame::filled(8, 8, 7, 12).unwrap();
    let mvf = estimate_block_mvf(&f, &f, 4, 2).unwrap();
    assert!(mvf.vectors().iter().all(|v| (v.dx, v.dy) == (0, 0)));
}

#[test]
fn block_search_global_shift_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let reference = random_frame(&mut rng, 32, 32, 4095);
    let cur = Frame::from_fn(32, 32, 12, |x, y| reference.get_clamped(x as isize + 2, y as isize + 3)).unwrap();
    let mvf = estimate_block_mvf(&reference, &cur, 8, 8).unwrap();
    let oracle = block_oracle(&reference, &cur, 8, 8);
    let got: Vec<_> = mvf.vectors().iter().map(|v| (v.dx, v.dy)).collect();
    assert_eq!(got, oracle);
    for by in 0..3 {
        for bx in 0..3 {
            assert_eq!(got[by * 4 + bx], (2, 3));
        }
    }
}

fn random_field(rng: &mut ChaCha8Rng, w: usize, h: usize, spread: f64) -> DensePositionField {
    let positions = (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as f64, (i / w) as f64);
            [x + rng.random_range(-spread..=spread), y + rng.random_range(-spread..=spread)]
        })
        .collect();
    DensePositionField::from_subpixel(w, h, positions).unwrap()
}

/// Brute force over all pairs: rounded, clamped node positions; the `k`
/// smallest squared distances, ties by node id.
fn knn_oracle(positions: &[[f64; 2]], w: usize, h: usize, k: usize) -> Vec<(usize, usize)> {
    let rounded: Vec<(i64, i64)> = positions
        .iter()
        .map(|p| {
            let rx = (p[0].round() as i64).clamp(0, w as i64 - 1);
            let ry = (p[1].round() as i64).clamp(0, h as i64 - 1);
            (rx, ry)
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..w * h {
        let (x, y) = ((i % w) as i64, (i / w) as i64);
        let mut all: Vec<(i64, usize)> = rounded
            .iter()
            .enumerate()
            .map(|(j, &(rx, ry))| ((rx - x).pow(2) + (ry - y).pow(2), j))
            .collect();
        all.sort();
        out.extend(all.iter().take(k).map(|&(_, j)| (i, j)));
    }
    out
}

#[test]
fn knn_selection_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..24 {
        let w = rng.random_range(2..=16);
        let h = rng.random_range(2..=16);
        let spread = [0.0, 0.6, 2.5, 6.0][case % 4];
        let field = random_field(&mut rng, w, h, spread);
        for k in [1, 4, 9, 25.min(w * h), w * h] {
            let edges = build_edges(&field, k, DistanceMode::Subpixel).unwrap();
            let got: Vec<_> = edges.iter().map(|e| (e.even, e.odd)).collect();
            assert_eq!(got, knn_oracle(field.subpixel(), w, h, k), "{w}x{h} spread {spread} k {k}");
        }
    }
}

#[test]
fn edge_lengths_match_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (w, h) = (9, 7);
    let field = random_field(&mut rng, w, h, 1.7);
    let pos = field.subpixel();
    for e in build_edges(&field, 6, DistanceMode::Subpixel).unwrap() {
        let (px, py) = ((e.even % w) as f64, (e.even / w) as f64);
        let (qx, qy) = ((e.odd % w) as f64, (e.odd / w) as f64);
        let c = pos[e.odd];
        let a = pos[e.even];
        let inter = ((px - c[0]).powi(2) + (py - c[1]).powi(2)).sqrt();
        let regular = ((px - qx).powi(2) + (py - qy).powi(2)).sqrt();
        let compensated = ((a[0] - c[0]).powi(2) + (a[1] - c[1]).powi(2)).sqrt();
        assert!((e.inter - inter).abs() < 1e-12);
        assert!((e.regular - regular).abs() < 1e-12);
        assert!((e.compensated - compensated).abs() < 1e-12);
    }
}

fn weight_oracle(eb: f64, ei: f64, et: f64) -> f64 {
    let e = if et < ei { et } else { eb };
    let gauss = (-(eb * eb + e * e) / 2.0).exp();
    gauss * (eb - et).abs().exp()
}

#[test]
fn edge_weight_matches_scalar_formula() {
    let grid: Vec<f64> = (0..10).map(|i| i as f64 * 0.5).collect();
    let mut checked = 0;
    for &eb in &grid {
        for &ei in &grid {
            for &et in &grid {
                let t = EdgeTriplet {
                    even: 0,
                    odd: 0,
                    inter: eb,
                    regular: ei,
                    compensated: et,
                };
                let got = weight_edge(&t);
                let want = weight_oracle(eb, ei, et);
                assert!(((got - want) / want).abs() <= 1e-12, "({eb}, {ei}, {et}): {got} vs {want}");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 1000);
}

/// Integer Haar: `h = b - a`, `l = a + floor(h / 2)`.
fn textbook_haar(a: i32, b: i32) -> (i32, i32) {
    let h = b - a;
    (a + h.div_euclid(2), h)
}

#[test]
fn identity_compensation_is_integer_haar() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (w, h) = (13, 6);
    let ident = Compensation::from_matrices(SparseMatrix::identity(w * h), SparseMatrix::identity(w * h)).unwrap();
    for _ in 0..20 {
        let odd = random_frame(&mut rng, w, h, 4095);
        let even = random_frame(&mut rng, w, h, 4095);
        let expected: Vec<(i32, i32)> = odd
            .samples()
            .iter()
            .zip(even.samples())
            .map(|(&a, &b)| textbook_haar(a, b))
            .collect();

        let sb = haar_lift(&odd, &even, &Compensation::Identity).unwrap();
        let got: Vec<_> = sb.lp.samples().iter().copied().zip(sb.hp.samples().iter().copied()).collect();
        assert_eq!(got, expected);
        assert_eq!(haar_unlift(&sb, &Compensation::Identity).unwrap(), (odd.clone(), even.clone()));

        let sb_graph = haar_lift(&odd, &even, &ident).unwrap();
        assert_eq!((sb_graph.lp.samples(), sb_graph.hp.samples()), (sb.lp.samples(), sb.hp.samples()));

        let jp = SparseMatrix::identity(w * h);
        let (hv, lv) = graph_lift(&NodeVector::from_frame(&even), &NodeVector::from_frame(&odd), &jp, &jp).unwrap();
        assert_eq!(hv.0, sb.hp.samples());
        assert_eq!(lv.0, sb.lp.samples());
        let (e2, o2) = graph_unlift(&hv, &lv, &jp, &jp).unwrap();
        assert_eq!((e2.0.as_slice(), o2.0.as_slice()), (even.samples(), odd.samples()));
    }
}
