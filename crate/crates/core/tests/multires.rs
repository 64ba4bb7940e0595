use enonet::eno_core::GhostPolicy;
use enonet::functions::q64;
use enonet::multires::container::{from_bytes, to_bytes};
use enonet::multires::image::{encode_pgm, parse_pgm, synthetic_scene};
use enonet::multires::*;
use proptest::prelude::*;

const GHOST: GhostPolicy = GhostPolicy::ConstantExtrapolate;

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn decoded_error_obeys_the_threshold_bound(
        fine in prop::collection::vec(-5.0f64..5.0, 9 * 8 + 1),
        eps in prop::sample::select(vec![0.5, 1.0]),
        p in 2usize..=4,
    ) {
        let t = 0.5;
        let rep = encode(&fine, p, ThresholdSchedule::new(eps, t, 3).unwrap(), GHOST).unwrap();
        let out = decode(&rep).unwrap();
        let bound = eps / (1.0 - t);
        prop_assert!(linf(&fine, &out) <= bound * (1.0 + 1e-12), "{} > {bound}", linf(&fine, &out));
        prop_assert!((0.0..=1.0).contains(&rep.compression_rate()));
    }

    #[test]
    fn integer_data_is_lossless_at_zero_threshold(
        fine in prop::collection::vec(-300i32..300, 5 * 16 + 1),
        p in 2usize..=5,
    ) {
        let fine: Vec<f64> = fine.into_iter().map(f64::from).collect();
        let rep = encode(&fine, p, ThresholdSchedule::new(0.0, 0.5, 4).unwrap(), GHOST).unwrap();
        prop_assert_eq!(decode(&rep).unwrap(), fine);
    }

    #[test]
    fn containers_round_trip(fine in prop::collection::vec(-1.0f64..1.0, 3 * 4 + 1), eps in 0.0f64..0.3) {
        let rep = encode(&fine, 3, ThresholdSchedule::new(eps, 0.5, 2).unwrap(), GHOST).unwrap();
        let c = Container::OneD(rep);
        prop_assert_eq!(from_bytes(&to_bytes(&c)).unwrap(), c);
    }

    #[test]
    fn pgm_round_trip(w in 1usize..20, h in 1usize..20, seed in any::<u64>()) {
        let pixels: Vec<u8> = (0..w * h).map(|i| (seed.wrapping_mul(i as u64 + 7) >> 13) as u8).collect();
        let img = GrayImage::new(w, h, pixels).unwrap();
        prop_assert_eq!(parse_pgm(&encode_pgm(&img)).unwrap(), img);
    }
}

#[test]
fn truncated_containers_are_rejected() {
    let fine: Vec<f64> = (0..17).map(|i| (i as f64).sin()).collect();
    let rep = encode(&fine, 3, ThresholdSchedule::new(0.1, 0.5, 2).unwrap(), GHOST).unwrap();
    let bytes = to_bytes(&Container::OneD(rep));
    assert!(from_bytes(&bytes[..bytes.len() - 3]).is_err());
    assert!(from_bytes(b"ENOMR2....").is_err());
    let mut extra = bytes.clone();
    extra.push(0);
    assert!(from_bytes(&extra).is_err());
}

#[test]
fn shape_errors_name_valid_sizes() {
    let err = encode(&[0.0; 20], 3, ThresholdSchedule::new(0.1, 0.5, 2).unwrap(), GHOST).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("17") && msg.contains("21"), "{msg}");
}

#[test]
fn q64_compresses_in_two_dimensions() {
    let (k, n0) = (4, 16);
    let n = n0 << k;
    let fine = Grid2D::sample(n, n, (0.0, 1.0), (0.0, 1.0), q64);
    let r = EnoRefiner { p: 3, ghost: GHOST };
    let schedule = ThresholdSchedule::new(10.0, 0.5, k).unwrap();
    let (q0, details) = encode2d(&fine, schedule, &r).unwrap();
    assert_eq!((q0.nx, q0.ny), (n0, n0));
    let out = decode2d(&q0, &details, &r).unwrap();
    let rep = MultiResRep2D {
        p: 3,
        ghost: GHOST,
        schedule,
        q0,
        details,
    };
    let c_r = rep.compression_rate();
    let e = error_norms(&fine.values, &out.values, 1.0 / (n * n) as f64).unwrap();
    assert!((0.98..=1.0).contains(&c_r), "{c_r}");
    assert!(e.rel.l1 <= 1e-2, "{}", e.rel.l1);
    assert!(e.abs.linf <= 10.0 / 0.5 + 1e-9);
    let c = Container::TwoD(rep);
    assert_eq!(from_bytes(&to_bytes(&c)).unwrap(), c);
}

#[test]
fn images_are_fitted_and_compressed() {
    let img = synthetic_scene(600, 520);
    let fitted = fit_to_levels(&img, 5);
    assert_eq!((fitted.width, fitted.height), (609, 513));
    let grid = fitted.to_grid(1.0);
    let r = EnoRefiner { p: 3, ghost: GHOST };
    let (q0, details) = encode2d(&grid, ThresholdSchedule::new(1.0, 0.2, 5).unwrap(), &r).unwrap();
    let out = decode2d(&q0, &details, &r).unwrap();
    let back = GrayImage::from_grid(&out, 1.0);
    assert_eq!((back.width, back.height), (609, 513));
    assert!(linf(&grid.values, &out.values) <= 1.0 / 0.8 + 1e-12);
}
