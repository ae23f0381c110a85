use edgelift_core::lifting::{decompose_volume, estimate_motion};
use edgelift_core::motion::{estimate_block_mvf, estimate_mesh_mvf, mesh_ssd, MeshMvf};
use edgelift_core::phantom::generate_phantom;
use edgelift_core::{Axis, Frame, Method, PairMotion, Params, PhantomSpec, Volume};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn endpoint_error(mvf: &MeshMvf, truth: impl Fn(f64, f64) -> (f64, f64)) -> f64 {
    let g = mvf.grid_size();
    let mut total = 0.0;
    for gy in 0..mvf.rows() {
        for gx in 0..mvf.cols() {
            let v = mvf.get(gx, gy);
            let (tx, ty) = truth((gx * g) as f64, (gy * g) as f64);
            total += (v.dx as f64 - tx).hypot(v.dy as f64 - ty);
        }
    }
    total / (mvf.rows() * mvf.cols()) as f64
}

#[test]
fn mesh_recovers_phantom_motion() {
    for seed in 0..5 {
        let spec = PhantomSpec {
            rng_seed: seed,
            contraction_amplitude: 2.0 + seed as f64,
            noise_sigma: 0.0,
            ..PhantomSpec::default()
        };
        let (volume, truth) = generate_phantom(&spec).unwrap();
        for (k, (odd, even)) in volume.pairs().enumerate() {
            let mvf = estimate_mesh_mvf(odd, even, 8, 8, 4).unwrap();
            assert!(mvf.is_valid());
            let err = endpoint_error(&mvf, |x, y| truth.pair_displacement(k, x, y));
            assert!(err < 1.0, "seed {seed} pair {k}: mean endpoint error {err}");
            let zero = MeshMvf::zero(128, 128, 8, 8).unwrap();
            assert!(mesh_ssd(odd, even, &mvf) <= mesh_ssd(odd, even, &zero));
        }
    }
}

#[test]
fn none_equals_block_with_zero_range() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let frames = (0..4)
        .map(|_| Frame::new(24, 16, (0..384).map(|_| rng.random_range(0..4096)).collect(), 12).unwrap())
        .collect();
    let volume = Volume::new(frames, Axis::Temporal).unwrap();
    let none = decompose_volume(&volume, &Params::default().with_method(Method::None)).unwrap();
    let block_params = Params {
        search_range: 0,
        ..Params::default().with_method(Method::Block)
    };
    let block = decompose_volume(&volume, &block_params).unwrap();
    assert_eq!(none.lp, block.lp);
    assert_eq!(none.hp, block.hp);
}

#[test]
fn mesh_and_graph_share_the_motion_field() {
    let (volume, _) = generate_phantom(&PhantomSpec {
        width: 64,
        height: 64,
        ..PhantomSpec::default()
    })
    .unwrap();
    for (odd, even) in volume.pairs() {
        let mesh = estimate_motion(odd, even, &Params::default().with_method(Method::Mesh)).unwrap();
        let graph = estimate_motion(odd, even, &Params::default().with_method(Method::Graph)).unwrap();
        assert_eq!(mesh, graph);
        assert!(matches!(mesh, PairMotion::Mesh(_)));
    }
}

#[test]
fn block_vectors_stay_in_range() {
    let (volume, _) = generate_phantom(&PhantomSpec {
        width: 64,
        height: 48,
        contraction_amplitude: 8.0,
        ..PhantomSpec::default()
    })
    .unwrap();
    let f = volume.frames();
    for range in [0u8, 1, 3, 8] {
        let mvf = estimate_block_mvf(&f[0], &f[1], 8, range).unwrap();
        assert!(mvf.vectors().iter().all(|v| v.within(range)));
    }
}
