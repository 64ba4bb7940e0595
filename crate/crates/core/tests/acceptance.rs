//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the report is always shown.
//! Criteria listed in `DOCUMENTED_FAILURES` are known not to hold for
//! reasons recorded in the project's decision notes; they are still run and
//! reported, and the suite only fails on an unexpected FAIL.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use enonet::claw::{advection_convergence, l1_distance, restrict, solve, Euler, EulerState, Problem, GAMMA};
use enonet::eno_core::GhostPolicy;
use enonet::eno_sr::{enosr_predict, enosr_predict_with, DEFAULT_GUARD};
use enonet::functions::{f1, f2, q62, q64};
use enonet::multires::image::synthetic_scene;
use enonet::multires::*;
use enonet::relunet::targets::{verify_target, Target, TargetReport, VerifyOptions};
use enonet::relunet::{build_enosr_regression_net, build_eno_interp_net, build_eno_rec_net, expected_hidden_layers};
use enonet::study::{fitted_order, order_study, refiner, Method};

const SEED: u64 = 42;
const GHOST: GhostPolicy = GhostPolicy::ConstantExtrapolate;

/// Criteria that fail for documented reasons (see the decision notes).
const DOCUMENTED_FAILURES: &[u32] = &[6, 7];

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: String) {
        self.pass &= ok;
        self.details.push(format!("{} {msg}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, msg: String) {
        self.details.push(format!("     {msg}"));
    }
}

fn opts(samples: usize) -> VerifyOptions {
    VerifyOptions {
        samples,
        seed: SEED,
        guard: DEFAULT_GUARD,
        eps: 1e-2,
    }
}

fn describe(r: &TargetReport) -> String {
    let mut s = format!("{}: {}/{} ({:.4}%)", r.target, r.matches, r.total, 100.0 * r.rate);
    if let Some((x, got, want)) = &r.counterexample {
        s += &format!(", first mismatch {x:?} net={got} ref={want}");
    }
    s
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    for p in 3..=6 {
        let net = build_eno_interp_net(p).unwrap();
        let layers = net.hidden_layers();
        o.check(
            layers == expected_hidden_layers(p),
            format!("p={p}: {layers} hidden layers (expected {})", expected_hidden_layers(p)),
        );
        let r = verify_target(Target::InterpN(p), opts(1_000_000)).unwrap();
        o.check(r.matches == r.total, describe(&r));
    }
    let secs = t.elapsed().as_secs_f64();
    o.check(secs < 120.0, format!("runtime {secs:.1} s (limit 120 s)"));
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    for t in [Target::Interp3, Target::Interp4] {
        let r = verify_target(t, opts(1_000_000)).unwrap();
        o.check(r.matches == r.total, describe(&r));
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    for (p, t, widths) in [(2, Target::Rec2, vec![4]), (3, Target::Rec3, vec![10, 6, 4])] {
        let got = build_eno_rec_net(p).unwrap().hidden_widths();
        o.check(got == widths, format!("rec p={p} hidden widths {got:?}"));
        let r = verify_target(t, opts(1_000_000)).unwrap();
        o.check(r.matches == r.total, describe(&r));
    }
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let r = verify_target(Target::SrClass, opts(100_000)).unwrap();
    o.check(r.matches == r.total, describe(&r));
    o
}

/// Largest |net - exact ENO-SR| over kink positions swept across a cell.
fn kink_sweep(eps: f64, n: usize) -> f64 {
    let net = build_enosr_regression_net(eps, DEFAULT_GUARD).unwrap();
    let h = 1.0 / n as f64;
    let mut worst = 0.0f64;
    for s in 0..32 {
        let z = 0.4 + 0.2 * s as f64 / 32.0;
        let f = |x: f64| {
            let t = x - z;
            if t < 0.0 {
                -2.0 * t
            } else {
                t * t
            }
        };
        let coarse: Vec<f64> = (0..=n).map(|i| f(i as f64 * h)).collect();
        let exact = enosr_predict(&coarse, GHOST, DEFAULT_GUARD).unwrap();
        let approx = enosr_predict_with(&coarse, GHOST, |w| net.forward(w).unwrap()[0]).unwrap();
        for (a, b) in exact.iter().zip(&approx) {
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    for eps in [1e-2, 1e-4] {
        let r = verify_target(Target::SrReg, VerifyOptions { eps, ..opts(100_000) }).unwrap();
        let d = r.max_abs_diff.unwrap();
        o.check(r.matches == r.total, format!("eps={eps:e}: max |net - formula| = {d:.2e} over {} windows", r.total));
        let mut c0 = 0.0;
        for l in 0..5 {
            let n = 16usize << l;
            let h = 1.0 / n as f64;
            let dev = kink_sweep(eps, n);
            let c = (dev - 1.5 * eps).max(0.0) / (h * h);
            if l == 0 {
                c0 = c;
                o.note(format!("eps={eps:e} N={n}: max |net - ENO-SR| = {dev:.3e}, C = {c:.3e}"));
            } else {
                o.check(
                    c <= 2.0 * c0 && dev <= c0 * h * h + 1.5 * eps || c == 0.0,
                    format!("eps={eps:e} N={n}: max |net - ENO-SR| = {dev:.3e}, C = {c:.3e} (coarsest {c0:.3e})"),
                );
            }
        }
    }
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    type Case = (&'static str, Method, fn(f64) -> f64, (f64, f64));
    let cases: [Case; 3] = [
        ("ENO-SR on f1", Method::EnoSr, f1, (1.6, 2.4)),
        ("ENO-3 on f1", Method::Eno, f1, (0.6, 1.4)),
        ("ENO-3 on sin", Method::Eno, f2, (2.6, 3.4)),
    ];
    let t = Instant::now();
    for (name, method, f, (lo, hi)) in cases {
        let r = refiner(method, 3, GHOST, DEFAULT_GUARD).unwrap();
        let rows = order_study(f, (0.0, 1.0), 16, 5, r.as_ref()).unwrap();
        let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
        let e: Vec<f64> = rows.iter().map(|r| r.error).collect();
        let s = fitted_order(&h, &e);
        let pairs: Vec<String> = rows.iter().filter_map(|r| r.slope).map(|s| format!("{s:.2}")).collect();
        o.check(
            (lo..=hi).contains(&s),
            format!("{name}: fitted slope {s:.3} in [{lo}, {hi}] (pairwise {})", pairs.join(", ")),
        );
    }
    o.note(format!("runtime {:.2} s", t.elapsed().as_secs_f64()));
    o
}

/// Piecewise smooth function with random jumps, kinks and oscillations.
fn rough_function(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> f64 {
    let breaks: Vec<f64> = {
        let mut b: Vec<f64> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0.05..0.95)).collect();
        b.sort_by(f64::total_cmp);
        b
    };
    let pieces: Vec<[f64; 5]> = (0..=breaks.len())
        .map(|_| {
            [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
                rng.gen_range(0.0..1.5),
                rng.gen_range(1.0..30.0),
            ]
        })
        .collect();
    move |x: f64| {
        let k = breaks.iter().filter(|b| x >= **b).count();
        let [a, b, c, amp, freq] = pieces[k];
        a + b * x + c * x * x + amp * (freq * PI * x).sin()
    }
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let (n0, k, t) = (9, 5, 0.5);
    let n = n0 << k;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let functions: Vec<Vec<f64>> = (0..100)
        .map(|_| {
            let f = rough_function(&mut rng);
            (0..=n).map(|i| f(i as f64 / n as f64)).collect()
        })
        .collect();
    for eps in [0.5, 1.0] {
        let bound = eps / (1.0 - t);
        let mut violations = 0;
        let mut worst = 0.0f64;
        for fine in &functions {
            let rep = encode(fine, 3, ThresholdSchedule::new(eps, t, k).unwrap(), GHOST).unwrap();
            let out = decode(&rep).unwrap();
            let e = fine.iter().zip(&out).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(e);
            violations += usize::from(e > bound);
        }
        o.check(
            violations == 0,
            format!("eps={eps}: {violations} bound violations over 100 functions, max error {worst:.4} <= {bound}"),
        );
    }
    let (mut exact_functions, mut wrong_nodes, mut max_err) = (0, 0, 0.0f64);
    for fine in &functions {
        let rep = encode(fine, 3, ThresholdSchedule::new(0.0, t, k).unwrap(), GHOST).unwrap();
        let out = decode(&rep).unwrap();
        let wrong = fine.iter().zip(&out).filter(|(a, b)| a != b).count();
        for (a, b) in fine.iter().zip(&out) {
            max_err = max_err.max((a - b).abs());
        }
        exact_functions += usize::from(wrong == 0);
        wrong_nodes += wrong;
    }
    o.check(
        exact_functions == functions.len(),
        format!(
            "eps=0 lossless: {exact_functions}/100 functions bit-exact, {wrong_nodes} of {} nodes differ, max |error| {max_err:.2e}",
            100 * (n + 1)
        ),
    );
    let dyadic: Vec<Vec<f64>> = functions.iter().map(|f| f.iter().map(|v| (v * 1024.0).round() / 1024.0).collect()).collect();
    let dyadic_exact = dyadic
        .iter()
        .filter(|fine| {
            let rep = encode(fine, 3, ThresholdSchedule::new(0.0, t, k).unwrap(), GHOST).unwrap();
            decode(&rep).unwrap() == **fine
        })
        .count();
    o.check(dyadic_exact == 100, format!("eps=0 lossless on 1/1024-quantized data: {dyadic_exact}/100 bit-exact"));

    let xs: Vec<f64> = (0..=n).map(|i| 3.0 * i as f64 / n as f64).collect();
    let fine: Vec<f64> = xs.iter().map(|&x| q62(x)).collect();
    for (p, eps, reference) in [(3, 0.5, 3.281e-1), (3, 1.0, 4.102e-1), (4, 0.5, 3.027e-1), (4, 1.0, 3.947e-1)] {
        let rep = encode(&fine, p, ThresholdSchedule::new(eps, t, k).unwrap(), GHOST).unwrap();
        let out = decode(&rep).unwrap();
        let e = error_norms(&fine, &out, 3.0 / n as f64).unwrap();
        let rel = (e.abs.linf - reference).abs() / reference;
        o.note(format!(
            "q62 N0=9 K=5 p={p} eps={eps}: Linf {:.4e} (reference {reference:.4e}, {:.1}% off), L1 {:.3e}, L2 {:.3e}, c_r {:.3}",
            e.abs.linf,
            100.0 * rel,
            e.abs.l1,
            e.abs.l2,
            rep.compression_rate()
        ));
    }
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let (k, n0) = (4, 16);
    let n = n0 << k;
    let r = EnoRefiner { p: 3, ghost: GHOST };
    let fine = Grid2D::sample(n, n, (0.0, 1.0), (0.0, 1.0), q64);
    let schedule = ThresholdSchedule::new(10.0, 0.5, k).unwrap();
    let (q0, details) = encode2d(&fine, schedule, &r).unwrap();
    let out = decode2d(&q0, &details, &r).unwrap();
    let rep = MultiResRep2D {
        p: 3,
        ghost: GHOST,
        schedule,
        q0,
        details,
    };
    let e = error_norms(&fine.values, &out.values, 1.0 / (n * n) as f64).unwrap();
    let c_r = rep.compression_rate();
    o.check(
        (0.98..=1.0).contains(&c_r) && e.rel.l1 <= 1e-2,
        format!("q64 {m}x{m}, K=4, eps=10, t=0.5: c_r {c_r:.4}, rel L1 {:.3e}", e.rel.l1, m = n + 1),
    );

    let img = fit_to_levels(&synthetic_scene(640, 560), 5);
    let grid = img.to_grid(1.0);
    let schedule = ThresholdSchedule::new(1.0, 0.2, 5).unwrap();
    let (q0, details) = encode2d(&grid, schedule, &r).unwrap();
    let out = decode2d(&q0, &details, &r).unwrap();
    let rep = MultiResRep2D {
        p: 3,
        ghost: GHOST,
        schedule,
        q0,
        details,
    };
    let e = error_norms(&grid.values, &out.values, 1.0 / grid.values.len() as f64).unwrap();
    let c_r = rep.compression_rate();
    o.check(
        c_r >= 0.99 && img.width >= 512 && img.height >= 512,
        format!(
            "image {}x{}, K=5, eps=1, t=0.2: c_r {c_r:.4}, rel L1 {:.3e}, rel Linf {:.3e}",
            img.width, img.height, e.rel.l1, e.rel.linf
        ),
    );
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    for t in [Target::Trained3, Target::Trained4] {
        let r = verify_target(t, opts(100_000)).unwrap();
        o.check(r.rate >= 0.985, format!("{}: {:.2}% (floor 98.5%)", r.target, 100.0 * r.rate));
    }
    o
}

fn criterion_10() -> Outcome {
    let mut o = Outcome::new();
    let e = Euler::default();
    for problem in [Problem::Sod, Problem::ShockEntropy] {
        for p in [2, 3] {
            let c = problem.default_config(p);
            match solve(&e, c, problem.initial(&c.centers()).fields()) {
                Ok(u) => {
                    let s = EulerState::from_fields(&u, GAMMA);
                    let pr = s.pressure();
                    let ok = s.rho.iter().chain(&pr).all(|v| *v > 0.0 && v.is_finite())
                        && s.mom.iter().all(|v| v.is_finite());
                    let rmin = s.rho.iter().copied().fold(f64::INFINITY, f64::min);
                    let pmin = pr.iter().copied().fold(f64::INFINITY, f64::min);
                    o.check(ok, format!("{problem} N={} p={p}: completed, min rho {rmin:.4}, min p {pmin:.4}", c.n));
                }
                Err(err) => o.check(false, format!("{problem} p={p}: {err}")),
            }
        }
    }
    let mut rc = Problem::Sod.default_config(4);
    rc.n = 2000;
    let reference = solve(&e, rc, Problem::Sod.initial(&rc.centers()).fields()).unwrap();
    for p in [2, 3] {
        let d: Vec<f64> = [50, 100, 200]
            .iter()
            .map(|&n| {
                let mut c = Problem::Sod.default_config(p);
                c.n = n;
                let u = solve(&e, c, Problem::Sod.initial(&c.centers()).fields()).unwrap();
                l1_distance(&u[0], &restrict(&reference[0], n).unwrap(), c.h())
            })
            .collect();
        o.check(
            d[0] > d[1] && d[1] > d[2],
            format!("Sod p={p}: rho L1 to ENO-4 N=2000 reference {:.4e}, {:.4e}, {:.4e}", d[0], d[1], d[2]),
        );
    }
    o
}

fn criterion_11() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    for p in [2, 3] {
        let rows = advection_convergence(p, &[64, 128, 256, 512], 0.5).unwrap();
        let slopes: Vec<f64> = rows.iter().filter_map(|r| r.slope).collect();
        let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
        let es: Vec<f64> = rows.iter().map(|r| r.error).collect();
        let ok = slopes.iter().all(|s| (s - p as f64).abs() <= 0.4);
        let shown: Vec<String> = slopes.iter().map(|s| format!("{s:.3}")).collect();
        o.check(
            ok,
            format!("p={p}: L1 slopes {} (fitted {:.3}), N = 64..512", shown.join(", "), fitted_order(&hs, &es)),
        );
    }
    let secs = t.elapsed().as_secs_f64();
    o.check(secs < 60.0, format!("runtime {secs:.1} s (limit 60 s)"));
    o
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        (1, "general interpolation networks equal ENO stencil selection", criterion_1),
        (2, "explicit p=3, p=4 networks equal ENO stencil selection", criterion_2),
        (3, "reconstruction networks equal ENO reconstruction selection", criterion_3),
        (4, "ENO-SR class network equals the indicators", criterion_4),
        (5, "ENO-SR regression network", criterion_5),
        (6, "order studies", criterion_6),
        (7, "multiresolution bound, lossless mode, q62 report", criterion_7),
        (8, "2D and image compression", criterion_8),
        (9, "trained networks", criterion_9),
        (10, "Euler runs", criterion_10),
        (11, "scalar advection convergence", criterion_11),
    ];
    let mut unexpected = Vec::new();
    for (id, title, run) in criteria {
        let t = Instant::now();
        let o = run();
        let documented = DOCUMENTED_FAILURES.contains(&id);
        let status = match (o.pass, documented) {
            (true, _) => "PASS",
            (false, true) => "FAIL (documented)",
            (false, false) => "FAIL",
        };
        println!("criterion {id:>2}: {status}: {title} [{:.1} s]", t.elapsed().as_secs_f64());
        for d in &o.details {
            println!("      {d}");
        }
        if !o.pass && !documented {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
