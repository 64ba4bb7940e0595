use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::output::{read_values, write_csv, Cell};
use super::{CompressArgs, CompressMode, InterpolateArgs, OrderStudyArgs, SolveArgs, Status, VerifyArgs};
use crate::claw::{l1_distance, restrict, Euler, EulerState, Fields, Solver, SolverConfig};
use crate::error::{invalid, Error, Result};
use crate::functions::{q64, NamedFunction};
use crate::multires::image::synthetic_scene;
use crate::multires::{
    decode2d, encode2d, encode_with, error_norms, fit_to_levels, read_pgm, write_container, write_pgm, Container,
    ErrorNorms, Grid2D, GrayImage, MultiResRep, MultiResRep2D, Refiner, ThresholdSchedule,
};
use crate::relunet::targets::{verify_target, Target, VerifyOptions};
use crate::study::{fitted_order, order_study as run_order_study, refinement_levels, refiner};

pub(super) struct Ctx {
    pub dir: PathBuf,
    pub seed: u64,
}

impl Ctx {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

type Done = Result<(Status, Vec<PathBuf>)>;

fn slope(prev: Option<f64>, cur: f64) -> Option<f64> {
    prev.map(|p| (p / cur).log2())
}

pub(super) fn interpolate(ctx: &Ctx, a: &InterpolateArgs) -> Done {
    let r = refiner(a.method, a.p, a.ghost.into(), a.guard)?;
    let mut outputs = Vec::new();
    if let Some(input) = &a.input {
        let mut values = read_values(input)?;
        for k in 1..=a.levels {
            values = r.refine(&values)?;
            let n = values.len() - 1;
            let path = ctx.path(&format!("level_{k}.csv"));
            write_csv(
                &path,
                &["x", "prediction"],
                values.iter().enumerate().map(|(i, &v)| vec![(i as f64 / n as f64).into(), v.into()]),
            )?;
            outputs.push(path);
        }
        return Ok((Status::Ok, outputs));
    }
    let f = a.function.unwrap_or(NamedFunction::Q62);
    let levels = refinement_levels(|x| f.eval(x), f.domain(), a.n0, a.levels, r.as_ref())?;
    for (k, l) in levels.iter().enumerate() {
        let path = ctx.path(&format!("level_{}.csv", k + 1));
        write_csv(
            &path,
            &["x", "prediction", "exact", "error"],
            (0..l.x.len()).map(|i| {
                vec![
                    l.x[i].into(),
                    l.prediction[i].into(),
                    l.exact[i].into(),
                    (l.prediction[i] - l.exact[i]).into(),
                ]
            }),
        )?;
        outputs.push(path);
    }
    let path = ctx.path("errors.csv");
    let mut prev = None;
    let rows: Vec<Vec<Cell>> = levels
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let row = vec![
                (k + 1).into(),
                l.n.into(),
                l.h.into(),
                l.errors.l1.into(),
                l.errors.l2.into(),
                l.errors.linf.into(),
                slope(prev, l.errors.linf).into(),
            ];
            prev = Some(l.errors.linf);
            row
        })
        .collect();
    write_csv(&path, &["level", "coarse_cells", "h", "l1", "l2", "linf", "order"], rows)?;
    for l in &levels {
        println!("N={:<6} linf={:.3e} l1={:.3e}", 2 * l.n, l.errors.linf, l.errors.l1);
    }
    outputs.push(path);
    Ok((Status::Ok, outputs))
}

pub(super) fn order_study(ctx: &Ctx, a: &OrderStudyArgs) -> Done {
    let r = refiner(a.method, a.p, a.ghost.into(), a.guard)?;
    let f = a.function;
    let rows = run_order_study(|x| f.eval(x), f.domain(), a.n0, a.levels, r.as_ref())?;
    let path = ctx.path("order_study.csv");
    write_csv(
        &path,
        &["h", "error", "slope"],
        rows.iter().map(|r| vec![r.h.into(), r.error.into(), r.slope.into()]),
    )?;
    let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let e: Vec<f64> = rows.iter().map(|r| r.error).collect();
    if rows.len() > 1 {
        println!("{} on {}: fitted order {:.3}", a.method, f, fitted_order(&h, &e));
    }
    Ok((Status::Ok, vec![path]))
}

#[derive(Serialize)]
struct MetricsRow {
    surviving: usize,
    total: usize,
    c_r: f64,
    norms: ErrorNorms,
}

fn write_metrics(path: &Path, a: &CompressArgs, k: usize, m: &MetricsRow) -> Result<()> {
    let mode = match a.mode {
        CompressMode::OneD => "1d",
        CompressMode::TwoD => "2d",
        CompressMode::Image => "image",
    };
    let n = &m.norms;
    write_csv(
        path,
        &[
            "mode", "p", "K", "eps", "t", "l1", "l2", "linf", "rel_l1", "rel_l2", "rel_linf", "surviving", "total", "c_r",
        ],
        [vec![
            mode.into(),
            a.p.into(),
            k.into(),
            a.eps.into(),
            a.t.into(),
            n.abs.l1.into(),
            n.abs.l2.into(),
            n.abs.linf.into(),
            n.rel.l1.into(),
            n.rel.l2.into(),
            n.rel.linf.into(),
            m.surviving.into(),
            m.total.into(),
            m.c_r.into(),
        ]],
    )?;
    println!(
        "c_r={:.4} linf={:.4e} rel_l1={:.4e} ({} of {} details kept)",
        m.c_r, n.abs.linf, n.rel.l1, m.surviving, m.total
    );
    Ok(())
}

fn save_container(path: &Path, c: &Container) -> Result<()> {
    let f = fs::File::create(path)?;
    write_container(c, std::io::BufWriter::new(f))
}

pub(super) fn compress(ctx: &Ctx, a: &CompressArgs) -> Done {
    let ghost = a.ghost.into();
    let r = crate::multires::EnoRefiner { p: a.p, ghost };
    // validates the order before any work
    refiner(crate::study::Method::Eno, a.p, ghost, 0.0)?;
    let container = ctx.path("compressed.enomr");
    let metrics = ctx.path("metrics.csv");
    match a.mode {
        CompressMode::OneD => {
            let k = a.k.unwrap_or(5);
            let n0 = a.n0.unwrap_or(9);
            let f = a.function.unwrap_or(NamedFunction::Q62);
            let schedule = ThresholdSchedule::new(a.eps, a.t, k)?;
            let (x0, x1) = f.domain();
            let n = n0 << k;
            let x: Vec<f64> = (0..=n).map(|i| x0 + (x1 - x0) * i as f64 / n as f64).collect();
            let fine: Vec<f64> = x.iter().map(|&x| f.eval(x)).collect();
            let (q0, details) = encode_with(&fine, schedule, &r)?;
            let rep = MultiResRep {
                p: a.p,
                n0,
                ghost,
                schedule,
                q0,
                details,
            };
            let decoded = crate::multires::decode(&rep)?;
            let m = MetricsRow {
                surviving: rep.surviving(),
                total: rep.detail_count(),
                c_r: rep.compression_rate(),
                norms: error_norms(&fine, &decoded, (x1 - x0) / n as f64)?,
            };
            save_container(&container, &Container::OneD(rep))?;
            let decoded_path = ctx.path("decoded.csv");
            write_csv(
                &decoded_path,
                &["x", "exact", "decoded"],
                (0..=n).map(|i| vec![x[i].into(), fine[i].into(), decoded[i].into()]),
            )?;
            write_metrics(&metrics, a, k, &m)?;
            Ok((Status::Ok, vec![container, decoded_path, metrics]))
        }
        CompressMode::TwoD => {
            if a.function.is_some() {
                return invalid("2d mode always uses the built-in q64 function");
            }
            let k = a.k.unwrap_or(4);
            let n0 = a.n0.unwrap_or(16);
            let n = n0 << k;
            let fine = Grid2D::sample(n, n, (0.0, 1.0), (0.0, 1.0), q64);
            let h = 1.0 / (n * n) as f64;
            let (rep, decoded, m) = compress_grid(&fine, a, k, &r, h)?;
            save_container(&container, &Container::TwoD(rep))?;
            let decoded_path = ctx.path("decoded.csv");
            write_csv(
                &decoded_path,
                &["x", "y", "exact", "decoded"],
                (0..=n).flat_map(|j| {
                    let (fine, decoded) = (&fine, &decoded);
                    (0..=n).map(move |i| {
                        vec![
                            (i as f64 / n as f64).into(),
                            (j as f64 / n as f64).into(),
                            fine.at(i, j).into(),
                            decoded.at(i, j).into(),
                        ]
                    })
                }),
            )?;
            write_metrics(&metrics, a, k, &m)?;
            Ok((Status::Ok, vec![container, decoded_path, metrics]))
        }
        CompressMode::Image => {
            if !(a.peak > 0.0 && a.peak.is_finite()) {
                return invalid("--peak must be positive");
            }
            let k = a.k.unwrap_or(5);
            let img = match &a.input {
                Some(p) => read_pgm(p)?,
                None => synthetic_scene(640, 560),
            };
            let fitted = fit_to_levels(&img, k);
            if (fitted.width, fitted.height) != (img.width, img.height) {
                println!(
                    "image {}x{} fitted to {}x{}",
                    img.width, img.height, fitted.width, fitted.height
                );
            }
            let grid = fitted.to_grid(a.peak);
            let h = 1.0 / grid.values.len() as f64;
            let (rep, decoded, m) = compress_grid(&grid, a, k, &r, h)?;
            save_container(&container, &Container::TwoD(rep))?;
            let out = a.output.clone().unwrap_or_else(|| ctx.path("decoded.pgm"));
            write_pgm(&GrayImage::from_grid(&decoded, a.peak), &out)?;
            write_metrics(&metrics, a, k, &m)?;
            Ok((Status::Ok, vec![container, out, metrics]))
        }
    }
}

fn compress_grid(
    fine: &Grid2D,
    a: &CompressArgs,
    k: usize,
    r: &dyn Refiner,
    h: f64,
) -> Result<(MultiResRep2D, Grid2D, MetricsRow)> {
    let schedule = ThresholdSchedule::new(a.eps, a.t, k)?;
    let (q0, details) = encode2d(fine, schedule, r)?;
    let decoded = decode2d(&q0, &details, r)?;
    let rep = MultiResRep2D {
        p: a.p,
        ghost: a.ghost.into(),
        schedule,
        q0,
        details,
    };
    let m = MetricsRow {
        surviving: rep.surviving(),
        total: rep.detail_count(),
        c_r: rep.compression_rate(),
        norms: error_norms(&fine.values, &decoded.values, h)?,
    };
    Ok((rep, decoded, m))
}

fn write_primitives(path: &Path, x: &[f64], u: &Fields) -> Result<()> {
    let s = EulerState::from_fields(u, crate::claw::GAMMA);
    let (v, p) = (s.velocity(), s.pressure());
    write_csv(
        path,
        &["x", "rho", "v", "p"],
        (0..x.len()).map(|i| vec![x[i].into(), s.rho[i].into(), v[i].into(), p[i].into()]),
    )
}

#[derive(Serialize)]
struct Sidecar<'a> {
    #[serde(rename = "N")]
    n: usize,
    cfl: f64,
    p: usize,
    t_final: f64,
    problem: &'a str,
    splitting: &'static str,
    boundary: crate::claw::Boundary,
    steps: usize,
}

#[derive(Serialize)]
struct Diagnostic {
    cell: usize,
    time: f64,
    message: String,
    last_valid_time: f64,
}

pub(super) fn solve(ctx: &Ctx, a: &SolveArgs) -> Done {
    let mut config: SolverConfig = a.problem.default_config(a.p);
    if let Some(n) = a.n {
        config.n = n;
    }
    if let Some(tf) = a.tf {
        config.t_final = tf;
    }
    config.cfl = a.cfl;
    config.boundary = a.boundary.into();
    let sys = Euler::default();
    let x = config.centers();
    let mut solver = Solver::new(&sys, config, a.problem.initial(&x).fields())?;
    while !solver.done() {
        if let Err(e) = solver.step() {
            let Error::StateInvalid { cell, time, message } = e else {
                return Err(e);
            };
            let snap = ctx.path("diagnostic.csv");
            write_primitives(&snap, &x, solver.state())?;
            let diag = ctx.path("diagnostic.json");
            let d = Diagnostic {
                cell,
                time,
                message,
                last_valid_time: solver.time(),
            };
            fs::write(&diag, serde_json::to_string_pretty(&d)? + "\n")?;
            eprintln!("invalid state in cell {cell} at t = {time}: {}", d.message);
            return Ok((Status::Aborted(snap.clone()), vec![snap, diag]));
        }
    }
    let solution = ctx.path("solution.csv");
    write_primitives(&solution, &x, solver.state())?;
    let sidecar = ctx.path("solution.json");
    let meta = Sidecar {
        n: config.n,
        cfl: config.cfl,
        p: config.p,
        t_final: config.t_final,
        problem: a.problem.name(),
        splitting: "global_lax_friedrichs",
        boundary: config.boundary,
        steps: solver.steps(),
    };
    fs::write(&sidecar, serde_json::to_string_pretty(&meta)? + "\n")?;
    let mut outputs = vec![solution, sidecar];
    if a.reference {
        let mut rc = config;
        rc.n = 10 * config.n;
        rc.p = 4;
        let fine = crate::claw::solve(&sys, rc, a.problem.initial(&rc.centers()).fields())?;
        let fs_ = EulerState::from_fields(&fine, crate::claw::GAMMA);
        let cs = EulerState::from_fields(solver.state(), crate::claw::GAMMA);
        let h = config.h();
        let pairs = [
            ("rho", cs.rho.clone(), fs_.rho.clone()),
            ("v", cs.velocity(), fs_.velocity()),
            ("p", cs.pressure(), fs_.pressure()),
        ];
        let mut rows = Vec::new();
        for (name, coarse, fine) in pairs {
            let d = l1_distance(&coarse, &restrict(&fine, config.n)?, h);
            println!("L1 distance to reference ({name}): {d:.6e}");
            rows.push(vec![name.into(), d.into()]);
        }
        let path = ctx.path("reference_l1.csv");
        write_csv(&path, &["variable", "l1"], rows)?;
        outputs.push(path);
    }
    Ok((Status::Ok, outputs))
}

pub(super) fn verify_net(ctx: &Ctx, a: &VerifyArgs) -> Done {
    let target = Target::parse(&a.target, a.p)?;
    let r = verify_target(
        target,
        VerifyOptions {
            samples: a.samples,
            seed: ctx.seed,
            guard: a.guard,
            eps: a.eps,
        },
    )?;
    println!(
        "{}: {}/{} agree ({:.4}%), required {:.1}%",
        r.target,
        r.matches,
        r.total,
        100.0 * r.rate,
        100.0 * r.floor
    );
    if let Some(d) = r.max_abs_diff {
        println!("max |net - formula| = {d:.3e}");
    }
    if let Some((x, got, want)) = &r.counterexample {
        println!("first counterexample: {x:?} network={got} reference={want}");
    }
    let path = ctx.path("verify.json");
    fs::write(&path, serde_json::to_string_pretty(&r)? + "\n")?;
    let status = if r.passed { Status::Ok } else { Status::VerificationFailed };
    Ok((status, vec![path]))
}
