use enonet::eno_core::{eno_interp_shift, eno_rec_shift, scale_input};
use enonet::eno_sr::{sr_indicators, window_indicators, DEFAULT_GUARD};
use enonet::relunet::verify::{agreement_on, agreement_with, samplers};
use enonet::relunet::*;

fn interp_oracle(p: usize) -> impl Fn(&[f64]) -> usize + Sync {
    move |x| eno_interp_shift(x, p).unwrap().r()
}

#[test]
fn general_nets_match_on_random_and_tie_inputs() {
    for p in 3..=6 {
        let net = build_eno_interp_net(p).unwrap();
        let w = 2 * p - 2;
        let a = agreement_rate(&net, interp_oracle(p), samplers::uniform(-1.0, 1.0), 20_000, p as u64);
        assert!(a.is_exact(), "p={p} uniform {:?}", a.first_mismatch);
        let a = agreement_rate(&net, interp_oracle(p), samplers::small_integers(2), 20_000, p as u64);
        assert!(a.is_exact(), "p={p} integers {:?}", a.first_mismatch);
        let ties = samplers::tie_suite(w);
        let a = agreement_on(&ties, |x, ws| net.classify_with(x, ws), interp_oracle(p));
        assert!(a.is_exact(), "p={p} ties {:?}", a.first_mismatch);
    }
}

#[test]
fn rec_nets_match() {
    for p in 2..=3 {
        let net = build_eno_rec_net(p).unwrap();
        let oracle = move |x: &[f64]| eno_rec_shift(x, p).unwrap().r();
        let a = agreement_rate(&net, oracle, samplers::uniform(-1.0, 1.0), 50_000, 3);
        assert!(a.is_exact(), "p={p} {:?}", a.first_mismatch);
        let a = agreement_on(&samplers::tie_suite(2 * p - 1), |x, ws| net.classify_with(x, ws), oracle);
        assert!(a.is_exact(), "p={p} ties {:?}", a.first_mismatch);
    }
}

#[test]
fn sr_class_net_matches_indicators() {
    let net = build_enosr_class_net(DEFAULT_GUARD).unwrap();
    let oracle = |x: &[f64]| window_indicators(x, DEFAULT_GUARD).class as usize - 1;
    let a = agreement_rate(&net, oracle, samplers::piecewise_linear(), 50_000, 11);
    assert!(a.is_exact(), "{:?}", a.first_mismatch);
    // the sliding form agrees with the global indicators on interior windows
    let f: Vec<f64> = (0..30).map(|j| 0.3 * (j as f64 - 14.6).abs()).collect();
    let ind = sr_indicators(&f, DEFAULT_GUARD).unwrap();
    for i in 5..=25 {
        let c = net.classify(&f[i - 5..i + 5]).unwrap() + 1;
        assert_eq!(c as u8, ind.class[i - 1], "interval {i}");
    }
}

#[test]
fn regression_net_matches_scalar_formula() {
    for eps in [1e-2, 1e-4] {
        let net = build_enosr_regression_net(eps, DEFAULT_GUARD).unwrap();
        let s = samplers::piecewise_linear();
        let a = agreement_with(
            20_000,
            10,
            5,
            |rng, x| s(rng, x),
            |x, ws| {
                let got = net.forward_with(x, ws)[0];
                let want = approx_enosr_scalar(x, eps, DEFAULT_GUARD).unwrap();
                usize::from((got - want).abs() > 1e-9)
            },
            |_| 0,
        );
        assert!(a.is_exact(), "eps={eps} {:?}", a.first_mismatch);
    }
}

#[test]
fn trained_rates() {
    for p in 3..=4 {
        let net = trained_deleno(p).unwrap();
        let a = agreement_with(
            100_000,
            2 * p - 2,
            42,
            samplers::uniform(-1.0, 1.0),
            |x, ws| net.classify_with(&scale_input(x), ws),
            interp_oracle(p),
        );
        eprintln!("trained p={p}: {:.4}", a.rate());
        assert!(a.rate() >= 0.985, "p={p} {}", a.rate());
    }
}
